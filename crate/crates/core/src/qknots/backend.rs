//! Arithmetic backends for finite q-series.

use std::sync::Arc;

use rug::{Complex, Integer, Rational};

use crate::cyclo::{Cyclo, CyclotomicField};
use crate::numerics::exp_two_pi_i;

use super::RootOfUnity;

/// A commutative ring containing q, where sums are formed.
pub trait Backend {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn int(&self, v: &Integer) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// q^e for any integer e.
    fn q_pow(&self, e: i64) -> Self::Elem;
    /// Multiplicative order of q, when q is a root of unity.
    fn order(&self) -> Option<u64>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn to_complex(&self, a: &Self::Elem, bits: u32) -> Complex;

    fn one(&self) -> Self::Elem {
        self.int(&Integer::from(1))
    }

    /// Σ c_e q^e for an integer polynomial.
    fn eval_poly(&self, coeffs: &[Integer]) -> Self::Elem {
        match self.order() {
            Some(n) => {
                let n = n as usize;
                let mut buckets = vec![Integer::new(); n];
                for (e, c) in coeffs.iter().enumerate() {
                    buckets[e % n] += c;
                }
                let mut acc = self.zero();
                for (r, c) in buckets.iter().enumerate() {
                    if *c != 0 {
                        acc = self.add(&acc, &self.mul(&self.int(c), &self.q_pow(r as i64)));
                    }
                }
                acc
            }
            None => {
                let q = self.q_pow(1);
                let mut acc = self.zero();
                for c in coeffs.iter().rev() {
                    acc = self.add(&self.mul(&acc, &q), &self.int(c));
                }
                acc
            }
        }
    }
}

/// Exact arithmetic in ℚ(ζ_N) with q = ζ_N^p.
#[derive(Clone, Debug)]
pub struct ExactBackend {
    field: Arc<CyclotomicField>,
    p: u64,
    n: u64,
}

impl ExactBackend {
    pub fn new(root: &RootOfUnity) -> Self {
        Self { field: CyclotomicField::new(root.order() as u32), p: root.p(), n: root.order() }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }
}

impl Backend for ExactBackend {
    type Elem = Cyclo;

    fn zero(&self) -> Cyclo {
        self.field.zero()
    }

    fn int(&self, v: &Integer) -> Cyclo {
        self.field.rational(Rational::from(v))
    }

    fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a + b
    }

    fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a - b
    }

    fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        a * b
    }

    fn neg(&self, a: &Cyclo) -> Cyclo {
        -a
    }

    fn q_pow(&self, e: i64) -> Cyclo {
        let n = self.n as i128;
        let k = (e as i128 * self.p as i128).rem_euclid(n);
        self.field.zeta_pow(k as i64)
    }

    fn order(&self) -> Option<u64> {
        Some(self.n)
    }

    fn is_zero(&self, a: &Cyclo) -> bool {
        a.is_zero()
    }

    fn to_complex(&self, a: &Cyclo, bits: u32) -> Complex {
        a.to_complex(bits)
    }

    fn eval_poly(&self, coeffs: &[Integer]) -> Cyclo {
        let n = self.n as usize;
        let mut v = vec![Rational::new(); n];
        for (e, c) in coeffs.iter().enumerate() {
            if *c != 0 {
                let k = ((e as u128 * self.p as u128) % n as u128) as usize;
                v[k] += c;
            }
        }
        self.field.reduce(v)
    }
}

/// Multiprecision complex arithmetic.
#[derive(Clone, Debug)]
pub struct FloatBackend {
    bits: u32,
    q: Complex,
    /// q^r for r < N when q is a root of unity of order N.
    powers: Option<Vec<Complex>>,
}

impl FloatBackend {
    pub fn from_root(root: &RootOfUnity, bits: u32) -> Self {
        let n = root.order();
        let powers: Vec<Complex> =
            (0..n).map(|r| exp_two_pi_i(&Rational::from(((root.p() * r) % n, n)), bits)).collect();
        Self { bits, q: powers.get(1).cloned().unwrap_or_else(|| powers[0].clone()), powers: Some(powers) }
    }

    /// Any nonzero q.
    pub fn from_q(q: Complex) -> Self {
        Self { bits: q.prec().0, q, powers: None }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
}

impl Backend for FloatBackend {
    type Elem = Complex;

    fn zero(&self) -> Complex {
        Complex::new(self.bits)
    }

    fn int(&self, v: &Integer) -> Complex {
        Complex::with_val(self.bits, v)
    }

    fn add(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.bits, a + b)
    }

    fn sub(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.bits, a - b)
    }

    fn mul(&self, a: &Complex, b: &Complex) -> Complex {
        Complex::with_val(self.bits, a * b)
    }

    fn neg(&self, a: &Complex) -> Complex {
        Complex::with_val(self.bits, -a)
    }

    fn q_pow(&self, e: i64) -> Complex {
        match &self.powers {
            Some(p) => p[e.rem_euclid(p.len() as i64) as usize].clone(),
            None => {
                use rug::ops::Pow;
                let e = i32::try_from(e).expect("q exponent fits in i32");
                Complex::with_val(self.bits, (&self.q).pow(e))
            }
        }
    }

    fn order(&self) -> Option<u64> {
        self.powers.as_ref().map(|p| p.len() as u64)
    }

    fn is_zero(&self, a: &Complex) -> bool {
        a.is_zero()
    }

    fn to_complex(&self, a: &Complex, bits: u32) -> Complex {
        Complex::with_val(bits, a)
    }
}
