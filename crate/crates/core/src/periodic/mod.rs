//! Periodic coefficient functions f: ℤ → ℂ with parity, residue k0 and support S_f(k0).

mod builders;
mod exact;

use std::fmt;

use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

pub use builders::{char_chi12, char_chi_t, char_false_theta, char_hikami, char_psi, parse_builder};
pub use exact::GaussRat;

use crate::error::{Error, Result};
use crate::numerics::PrecisionContext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A validated period-M coefficient function.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicCoeffs {
    modulus: u32,
    values: Vec<GaussRat>,
    k0: u32,
    parity: Parity,
    /// M_f(k0), ascending.
    m_f: Vec<u32>,
    /// S_f(k0), ascending.
    support: Vec<u32>,
    label: String,
}

/// One half of [`decompose`]; `Empty` stands in for an identically zero part.
#[derive(Clone, Debug, PartialEq)]
pub enum ParityPart {
    Empty,
    Part(PeriodicCoeffs),
}

impl ParityPart {
    pub fn as_ref(&self) -> Option<&PeriodicCoeffs> {
        match self {
            ParityPart::Empty => None,
            ParityPart::Part(f) => Some(f),
        }
    }
}

/// Residues k in 1..=M/2 with f(k) or f(M−k) nonzero; errors if one fails k² ≡ k0 (mod 2M).
fn support_reps(modulus: u32, values: &[GaussRat], k0: u32) -> Result<Vec<u32>> {
    let m = modulus as u64;
    let mut reps = Vec::new();
    for (j, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let j = j as u64;
        let k = j.min(m - j);
        if k == 0 {
            return Err(Error::InvalidCoeffs("f(0) must vanish: 0 is never in S_f(k0)".into()));
        }
        if (k * k) % (2 * m) != k0 as u64 {
            return Err(Error::InvalidCoeffs(format!(
                "support residue {j} has {k}^2 = {} not congruent to k0 = {k0} mod {}",
                k * k,
                2 * m
            )));
        }
        reps.push(k as u32);
    }
    reps.sort_unstable();
    reps.dedup();
    Ok(reps)
}

fn check_shape(modulus: u32, values: &[GaussRat], k0: u32) -> Result<()> {
    if modulus < 2 {
        return Err(Error::InvalidCoeffs(format!("period must be at least 2, got {modulus}")));
    }
    if values.len() != modulus as usize {
        return Err(Error::InvalidCoeffs(format!("expected {modulus} values, got {}", values.len())));
    }
    if k0 < 1 || k0 >= 2 * modulus {
        return Err(Error::InvalidCoeffs(format!("k0 = {k0} outside 1..{}", 2 * modulus)));
    }
    Ok(())
}

/// Validates and builds a [`PeriodicCoeffs`].
pub fn make_periodic(modulus: u32, values: Vec<GaussRat>, k0: u32, parity: Parity) -> Result<PeriodicCoeffs> {
    check_shape(modulus, &values, k0)?;
    let m = modulus as usize;
    for n in 0..m {
        let mirror = &values[(m - n) % m];
        let ok = match parity {
            Parity::Even => *mirror == values[n],
            Parity::Odd => *mirror == -&values[n],
        };
        if !ok {
            return Err(Error::InvalidCoeffs(format!("parity violation: f({n}) and f({}) are not {parity}", (m - n) % m)));
        }
    }
    let m_f = support_reps(modulus, &values, k0)?;
    if m_f.is_empty() {
        return Err(Error::InvalidCoeffs("M_f(k0) is empty".into()));
    }
    let mut support: Vec<u32> = m_f.iter().flat_map(|&k| [k, modulus - k]).collect();
    support.sort_unstable();
    support.dedup();
    Ok(PeriodicCoeffs { modulus, values, k0, parity, m_f, support, label: "custom".into() })
}

impl PeriodicCoeffs {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn k0(&self) -> u32 {
        self.k0
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn values(&self) -> &[GaussRat] {
        &self.values
    }

    /// f(n) for any integer n.
    pub fn value(&self, n: i64) -> &GaussRat {
        &self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn m_f(&self) -> &[u32] {
        &self.m_f
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(GaussRat::is_real)
    }

    /// (residue, f(residue)) over S_f(k0) at `bits` precision.
    pub fn float_support(&self, bits: u32) -> Vec<(u32, Complex)> {
        self.support.iter().map(|&r| (r, self.values[r as usize].to_complex(bits))).collect()
    }

    /// Σ' over M_f(k0) of f(k), with f(M/2) halved.
    pub fn primed_sum(&self) -> GaussRat {
        let mut s = GaussRat::zero();
        for &k in &self.m_f {
            let v = &self.values[k as usize];
            s = if 2 * k == self.modulus { &s + &v.half() } else { &s + v };
        }
        s
    }

    /// c_f(M, k0) = 2 Σ' f(k) cos(2πk/M).
    pub fn c_f_constant(&self, ctx: &PrecisionContext) -> Result<Complex> {
        if self.parity != Parity::Even {
            return Err(Error::Domain("c_f is defined for even f only".into()));
        }
        let bits = ctx.bits();
        let mut acc = Complex::new(bits);
        for &k in &self.m_f {
            let angle = ctx.pi() * 2u32 * k / self.modulus;
            let mut w = Float::with_val(bits, angle.cos_ref());
            if 2 * k == self.modulus {
                w /= 2u32;
            }
            acc += self.values[k as usize].to_complex(bits) * w;
        }
        Ok(acc * 2u32)
    }

    /// Loads the JSON schema {"M", "k0", "parity", "values": [[num_re, den_re, num_im, den_im], …]}.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: JsonCoeffs = serde_json::from_str(text).map_err(|e| Error::Parse(format!("coefficient JSON: {e}")))?;
        let values = raw
            .values
            .iter()
            .map(|[a, b, c, d]| {
                if *b == 0 || *d == 0 {
                    return Err(Error::Parse("zero denominator in coefficient JSON".into()));
                }
                Ok(GaussRat::new(Rational::from((*a, *b)), Rational::from((*c, *d))))
            })
            .collect::<Result<Vec<_>>>()?;
        make_periodic(raw.modulus, values, raw.k0, raw.parity)
    }

    pub fn to_json(&self) -> String {
        let values = self
            .values
            .iter()
            .map(|v| {
                let part = |r: &Rational| (r.numer().to_i64().unwrap_or(0), r.denom().to_i64().unwrap_or(1));
                let (a, b) = part(&v.re);
                let (c, d) = part(&v.im);
                [a, b, c, d]
            })
            .collect();
        serde_json::to_string(&JsonCoeffs { modulus: self.modulus, k0: self.k0, parity: self.parity, values })
            .expect("coefficients serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct JsonCoeffs {
    #[serde(rename = "M")]
    modulus: u32,
    k0: u32,
    parity: Parity,
    values: Vec<[i64; 4]>,
}

/// Splits an arbitrary period-M function supported in S_f(k0) into even and odd parts.
pub fn decompose(modulus: u32, values: &[GaussRat], k0: u32) -> Result<(ParityPart, ParityPart)> {
    check_shape(modulus, values, k0)?;
    support_reps(modulus, values, k0)?;
    let m = modulus as usize;
    let even: Vec<GaussRat> = (0..m).map(|n| (&values[n] + &values[(m - n) % m]).half()).collect();
    let odd: Vec<GaussRat> = (0..m).map(|n| (&values[n] - &values[(m - n) % m]).half()).collect();
    let wrap = |v: Vec<GaussRat>, p: Parity| -> Result<ParityPart> {
        if v.iter().all(GaussRat::is_zero) {
            Ok(ParityPart::Empty)
        } else {
            make_periodic(modulus, v, k0, p).map(ParityPart::Part)
        }
    };
    Ok((wrap(even, Parity::Even)?, wrap(odd, Parity::Odd)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<GaussRat> {
        v.iter().map(|&x| GaussRat::from(x)).collect()
    }

    #[test]
    fn accepts_chi12_and_psi() {
        let f = make_periodic(12, ints(&[0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1]), 1, Parity::Even).unwrap();
        assert_eq!(f.m_f(), &[1, 5]);
        assert_eq!(f.support(), &[1, 5, 7, 11]);
        let psi = make_periodic(2, ints(&[0, 1]), 1, Parity::Even).unwrap();
        assert_eq!(psi.m_f(), &[1]);
        assert_eq!(psi.support(), &[1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let chi = ints(&[0, 1, 0, 0, 0, -1, 0, -1, 0, 0, 0, 1]);
        assert!(matches!(make_periodic(12, chi.clone(), 1, Parity::Odd), Err(Error::InvalidCoeffs(_))));
        // 3² = 9 ≢ 1 (mod 24)
        let mut bad = chi.clone();
        bad[3] = GaussRat::from(1);
        bad[9] = GaussRat::from(1);
        assert!(make_periodic(12, bad, 1, Parity::Even).is_err());
        assert!(make_periodic(12, ints(&[0; 12]), 1, Parity::Even).is_err());
        assert!(make_periodic(12, chi.clone(), 0, Parity::Even).is_err());
        assert!(make_periodic(12, chi[..11].to_vec(), 1, Parity::Even).is_err());
    }

    #[test]
    fn primed_sums() {
        assert_eq!(char_chi12().primed_sum(), GaussRat::zero());
        assert_eq!(char_psi().primed_sum(), GaussRat::real(Rational::from((1, 2))));
        assert_eq!(char_hikami(2, 0).unwrap().primed_sum(), GaussRat::zero());
        for t in 1..=5 {
            assert!(char_chi_t(t).unwrap().primed_sum().is_zero());
        }
    }

    #[test]
    fn c_f_values() {
        let ctx = PrecisionContext::default();
        let c = char_chi12().c_f_constant(&ctx).unwrap();
        let want = Float::with_val(ctx.bits(), 12).sqrt();
        assert!(Float::with_val(ctx.bits(), c.real() - &want).abs().to_f64() < 1e-45);
        assert!(c.imag().clone().abs().to_f64() < 1e-45);
        let c = char_psi().c_f_constant(&ctx).unwrap();
        assert!((c.real().to_f64() + 1.0).abs() < 1e-45);
        assert!(char_false_theta(1, 3).unwrap().c_f_constant(&ctx).is_err());
    }

    #[test]
    fn decomposition() {
        let (e, o) = decompose(12, char_chi12().values(), 1).unwrap();
        assert_eq!(e.as_ref().map(|f| f.values()), Some(char_chi12().values()));
        assert_eq!(o, ParityPart::Empty);
        let f = char_false_theta(1, 3).unwrap();
        let (e, o) = decompose(3, f.values(), 1).unwrap();
        assert_eq!(e, ParityPart::Empty);
        assert_eq!(o.as_ref().unwrap().values(), f.values());
        let (e, o) = decompose(3, &ints(&[0, 2, 0]), 1).unwrap();
        assert_eq!(e.as_ref().unwrap().values(), &ints(&[0, 1, 1])[..]);
        assert_eq!(o.as_ref().unwrap().values(), &ints(&[0, 1, -1])[..]);
        assert!(decompose(12, &ints(&[0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]), 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = char_chi_t(2).unwrap();
        let g = PeriodicCoeffs::from_json(&f.to_json()).unwrap();
        assert_eq!(f.values(), g.values());
        assert_eq!(f.k0(), g.k0());
        let text = r#"{"M": 3, "k0": 1, "parity": "odd", "values": [[0,1,0,1],[1,2,0,1],[-1,2,0,1]]}"#;
        let h = PeriodicCoeffs::from_json(text).unwrap();
        assert_eq!(h.value(1), &GaussRat::real(Rational::from((1, 2))));
        assert!(PeriodicCoeffs::from_json("{\"M\": 3}").is_err());
    }
}
