use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::error::{Error, Result};

/// A reduced rational p/q, or i∞ encoded as 1/0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalCusp {
    p: i64,
    q: u64,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalCusp {
    pub const INFINITY: RationalCusp = RationalCusp { p: 1, q: 0 };

    /// p/q reduced, sign carried by p; q = 0 gives i∞.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        Self::from_i128(p as i128, q as i128)
    }

    pub(crate) fn from_i128(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            if p == 0 {
                return Err(Error::Domain("0/0 is not a cusp".into()));
            }
            return Ok(Self::INFINITY);
        }
        let g = gcd(p, q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        let p = i64::try_from(p).map_err(|_| Error::Domain("cusp numerator overflows i64".into()))?;
        let q = u64::try_from(q).map_err(|_| Error::Domain("cusp denominator overflows".into()))?;
        Ok(Self { p, q })
    }

    pub fn integer(n: i64) -> Self {
        Self { p: n, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (!self.is_infinity()).then(|| Rational::from((self.p, self.q)))
    }

    pub fn to_float(&self, bits: u32) -> Option<Float> {
        self.to_rational().map(|r| Float::with_val(bits, &r))
    }
}

impl fmt::Display for RationalCusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            0 => f.write_str("inf"),
            1 => write!(f, "{}", self.p),
            q => write!(f, "{}/{q}", self.p),
        }
    }
}

impl FromStr for RationalCusp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "i∞" | "oo" | "infinity") {
            return Ok(Self::INFINITY);
        }
        let bad = || Error::Parse(format!("cannot read cusp '{s}'"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Self::new(p, q)
            }
            None => Ok(Self::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}
