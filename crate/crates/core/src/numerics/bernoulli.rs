//! Bernoulli numbers and polynomials in exact rational arithmetic.

use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_BERNOULLI_CAP: u32 = 64;

static NUMBERS: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// B_n with the convention B_1 = −1/2.
pub fn bernoulli_number(n: u32) -> Rational {
    let table = NUMBERS.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = table.lock().unwrap_or_else(|e| e.into_inner());
    while b.len() <= n as usize {
        let m = b.len() as u32;
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            let c = Integer::from(Integer::binomial_u(m + 1, k as u32));
            acc += Rational::from(bk * c);
        }
        let next = -acc / Rational::from(m + 1);
        b.push(next);
    }
    b[n as usize].clone()
}

/// B_n(x) for n up to `DEFAULT_BERNOULLI_CAP`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Result<Rational> {
    bernoulli_poly_capped(n, x, DEFAULT_BERNOULLI_CAP)
}

pub fn bernoulli_poly_capped(n: u32, x: &Rational, cap: u32) -> Result<Rational> {
    if n > cap {
        return Err(Error::BernoulliCap { n, cap });
    }
    // Horner in x over Σ_k C(n,k) B_k x^{n−k}
    let mut acc = Rational::new();
    for k in 0..=n {
        acc *= x;
        let c = Integer::from(Integer::binomial_u(n, k));
        acc += bernoulli_number(k) * c;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn spec_examples() {
        assert_eq!(bernoulli_poly(0, &q(1, 3)).unwrap(), 1);
        assert_eq!(bernoulli_poly(1, &q(0, 1)).unwrap(), q(-1, 2));
        assert_eq!(bernoulli_poly(2, &q(1, 12)).unwrap(), q(13, 144));
    }

    #[test]
    fn known_numbers() {
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(3), 0);
        assert_eq!(bernoulli_number(4), q(-1, 30));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
    }

    #[test]
    fn difference_equation() {
        for n in 1..=10u32 {
            for x in [q(0, 1), q(1, 2), q(1, 3), q(2, 7)] {
                let x1 = Rational::from(&x + 1u32);
                let lhs = bernoulli_poly(n, &x1).unwrap() - bernoulli_poly(n, &x).unwrap();
                let rhs = Rational::from(x.clone().pow(n - 1)) * n;
                assert_eq!(lhs, rhs, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            bernoulli_poly(65, &q(1, 2)),
            Err(Error::BernoulliCap { n: 65, cap: 64 })
        );
        assert!(bernoulli_poly_capped(70, &q(1, 2), 80).is_ok());
    }
}
