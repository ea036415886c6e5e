use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use rug::Complex;

use super::RationalCusp;
use crate::error::{Error, Result};

/// An element of SL2(ℤ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap { a: 1, b: 0, c: 0, d: 1 };
    pub const T: MoebiusMap = MoebiusMap { a: 1, b: 1, c: 0, d: 1 };
    pub const S: MoebiusMap = MoebiusMap { a: 0, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a as i128 * d as i128 - b as i128 * c as i128 != 1 {
            return Err(Error::Domain(format!("({a} {b} {c} {d}) has determinant != 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn negate(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// T^n.
    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn max_abs_entry(&self) -> i64 {
        [self.a, self.b, self.c, self.d].iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    pub fn apply_cusp(&self, x: &RationalCusp) -> RationalCusp {
        let (p, q) = if x.is_infinity() { (1i128, 0i128) } else { (x.p() as i128, x.q() as i128) };
        let num = self.a as i128 * p + self.b as i128 * q;
        let den = self.c as i128 * p + self.d as i128 * q;
        RationalCusp::from_i128(num, den).expect("unimodular image of a cusp is a cusp")
    }

    /// (az + b)/(cz + d); errors at the pole z = −d/c.
    pub fn apply_complex(&self, z: &Complex) -> Result<Complex> {
        let prec = z.prec().0;
        let den = Complex::with_val(prec, z * self.c) + self.d;
        if den.is_zero() {
            return Err(Error::Domain(format!("{self} has a pole at the given point")));
        }
        let num = Complex::with_val(prec, z * self.a) + self.b;
        Ok(num / den)
    }

    /// cz + d.
    pub fn automorphy(&self, z: &Complex) -> Complex {
        Complex::with_val(z.prec().0, z * self.c) + self.d
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    /// Matrix product; panics on i64 overflow.
    fn mul(self, o: MoebiusMap) -> MoebiusMap {
        let f = |x: i64, y: i64, z: i64, w: i64| {
            let v = x as i128 * y as i128 + z as i128 * w as i128;
            i64::try_from(v).expect("matrix product overflows i64")
        };
        MoebiusMap {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for MoebiusMap {
    type Err = Error;

    /// "a b c d", separated by spaces or commas, optionally bracketed.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().map(|c| if "()[],".contains(c) { ' ' } else { c }).collect();
        let v: Vec<i64> = cleaned
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad matrix entry '{t}'"))))
            .collect::<Result<_>>()?;
        match v.as_slice() {
            [a, b, c, d] => MoebiusMap::new(*a, *b, *c, *d),
            _ => Err(Error::Parse(format!("expected four matrix entries, got '{s}'"))),
        }
    }
}
