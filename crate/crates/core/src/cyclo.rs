//! Exact arithmetic in the cyclotomic field ℚ(ζ_n).
//!
//! Elements are coefficient vectors in the power basis 1, ζ, …, ζ^{φ(n)−1}
//! with ζ = e^{2πi/n}; products are reduced modulo Φ_n by sparse long division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rug::{Complex, Float, Rational};

use crate::numerics::exp_two_pi_i;

/// ℚ(ζ_n) together with its defining polynomial Φ_n.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    /// Non-leading terms (j, φ_j) of Φ_n with φ_j ≠ 0.
    tail: Vec<(usize, i64)>,
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Φ_n = Π_{d|n} (x^d − 1)^{μ(n/d)}, coefficients low to high.
fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut p = vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut q = vec![0i64; p.len() + d];
            for (i, c) in p.iter().enumerate() {
                q[i + d] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            let d = d as usize;
            let mut r = p.clone();
            let mut q = vec![0i64; p.len() - d];
            for i in (d..r.len()).rev() {
                let c = r[i];
                if c != 0 {
                    q[i - d] = c;
                    r[i - d] += c;
                    r[i] = 0;
                }
            }
            debug_assert!(r.iter().all(|&c| c == 0));
            p = q;
        }
    }
    p
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let phi = cyclotomic_poly(order);
        let degree = phi.len() - 1;
        let tail = phi[..degree].iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, *c)).collect();
        Arc::new(Self { order, degree, tail })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Reduces a polynomial in ζ of any length.
    pub fn reduce(self: &Arc<Self>, mut v: Vec<Rational>) -> Cyclo {
        let d = self.degree;
        for i in (d..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for &(j, phi) in &self.tail {
                v[i - d + j] -= Rational::from(&c * phi);
            }
        }
        v.resize(d, Rational::new());
        Cyclo { field: self.clone(), c: v }
    }

    pub fn zero(self: &Arc<Self>) -> Cyclo {
        Cyclo { field: self.clone(), c: vec![Rational::new(); self.degree] }
    }

    pub fn rational(self: &Arc<Self>, r: Rational) -> Cyclo {
        let mut z = self.zero();
        z.c[0] = r;
        z
    }

    pub fn one(self: &Arc<Self>) -> Cyclo {
        self.rational(Rational::from(1))
    }

    /// ζ^e for any integer e.
    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> Cyclo {
        let k = e.rem_euclid(self.order as i64) as usize;
        if k < self.degree {
            let mut z = self.zero();
            z.c[k] = Rational::from(1);
            return z;
        }
        let mut v = vec![Rational::new(); k + 1];
        v[k] = Rational::from(1);
        self.reduce(v)
    }

    /// The imaginary unit; requires 4 | order.
    pub fn i(self: &Arc<Self>) -> Option<Cyclo> {
        (self.order % 4 == 0).then(|| self.zeta_pow(self.order as i64 / 4))
    }
}

/// An element of ℚ(ζ_n).
#[derive(Clone, Debug)]
pub struct Cyclo {
    field: Arc<CyclotomicField>,
    c: Vec<Rational>,
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.c == other.c
    }
}

impl Cyclo {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Some(r) when the element is the rational number r.
    pub fn as_rational(&self) -> Option<Rational> {
        self.c.iter().skip(1).all(|x| x.is_zero()).then(|| self.c[0].clone())
    }

    pub fn scale(&self, r: &Rational) -> Cyclo {
        Cyclo { field: self.field.clone(), c: self.c.iter().map(|x| Rational::from(x * r)).collect() }
    }

    /// Numerical value with ζ = e^{2πi/n}.
    pub fn to_complex(&self, bits: u32) -> Complex {
        let n = self.field.order as i64;
        let mut acc = Complex::new(bits);
        for (j, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let z = exp_two_pi_i(&Rational::from((j as i64, n)), bits + 16);
            acc += z * Float::with_val(bits + 16, x);
        }
        Complex::with_val(bits, acc)
    }

    fn check(&self, other: &Cyclo) {
        assert_eq!(self.field.order, other.field.order, "mixing cyclotomic fields");
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        self.check(rhs);
        Cyclo { field: self.field.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| Rational::from(a + b)).collect() }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self.check(rhs);
        Cyclo { field: self.field.clone(), c: self.c.iter().zip(&rhs.c).map(|(a, b)| Rational::from(a - b)).collect() }
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { field: self.field.clone(), c: self.c.iter().map(|a| Rational::from(-a)).collect() }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        self.check(rhs);
        let d = self.field.degree;
        let mut v = vec![Rational::new(); (2 * d).max(1) - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += Rational::from(a * b);
                }
            }
        }
        self.field.reduce(v)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (j, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{x}")?,
                _ => write!(f, "({x})*z{}^{j}", self.field.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() - 1, 48);
        assert!(p105.contains(&-2));
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in [1u32, 2, 3, 5, 8, 12, 30, 97] {
            let k = CyclotomicField::new(n);
            assert_eq!(k.zeta_pow(n as i64), k.one());
            let mut p = k.one();
            let z = k.zeta_pow(1);
            for e in 1..=n {
                p = &p * &z;
                assert_eq!(p == k.one(), e == n, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn sum_of_roots_vanishes() {
        for n in [2u32, 6, 9, 24] {
            let k = CyclotomicField::new(n);
            let mut s = k.zero();
            for e in 0..n as i64 {
                s = &s + &k.zeta_pow(e);
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn numerical_value() {
        let k = CyclotomicField::new(12);
        let i = k.i().unwrap();
        assert_eq!(&i * &i, -&k.one());
        let s = &k.zeta_pow(1) + &k.zeta_pow(11);
        let v = s.to_complex(200);
        assert!((v.real().to_f64() - 3f64.sqrt()).abs() < 1e-15);
        assert!(v.imag().to_f64().abs() < 1e-50);
    }
}
