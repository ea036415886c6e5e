//! Upper incomplete gamma at the two half-integer orders that occur in the Eichler integrals.

use rug::float::Constant;
use rug::{Assign, Float};

use super::PrecisionContext;
use crate::error::{Error, Result};

/// Order a of Γ(a, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaOrder {
    /// a = 1/2
    Half,
    /// a = −1/2
    MinusHalf,
}

/// Γ(a, x) = ∫_x^∞ w^{a−1} e^{−w} dw for a ∈ {1/2, −1/2}.
///
/// Γ(1/2, x) = √π erfc(√x); Γ(−1/2, x) = 2(x^{−1/2}e^{−x} − Γ(1/2, x)).
pub fn incomplete_gamma_upper(a: GammaOrder, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x < 0 || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma needs x >= 0, got {x}")));
    }
    let bits = ctx.bits();
    // the recurrence cancels about log2(x) bits
    let extra = 32 + x.to_f64().max(1.0).log2().ceil() as u32;
    let wp = bits + extra;
    let xw = Float::with_val(wp, x);
    let sqrt_pi = Float::with_val(wp, Constant::Pi).sqrt();
    let half = Float::with_val(wp, xw.sqrt_ref()).erfc() * &sqrt_pi;
    let out = match a {
        GammaOrder::Half => half,
        GammaOrder::MinusHalf => {
            if xw.is_zero() {
                return Err(Error::Domain("Γ(−1/2, 0) diverges".into()));
            }
            let lead = Float::with_val(wp, -&xw).exp() / Float::with_val(wp, xw.sqrt_ref());
            (lead - half) * 2u32
        }
    };
    Ok(Float::with_val(bits, out))
}

/// Below this x the power series is used, above it the continued fraction.
const SERIES_LIMIT: f64 = 30.0;

/// e^{x} Γ(1/2, x), evaluated without forming the two large factors separately.
pub fn scaled_gamma_half(x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    scaled_gamma(GammaOrder::Half, x, ctx)
}

/// e^{x} Γ(a, x) for a ∈ {1/2, −1/2}.
///
/// Small x: Γ(1/2, x) = √π − e^{−x}√x Σ x^n/((1/2)(3/2)⋯(1/2+n)).
/// Large x: Legendre's continued fraction for Γ(1/2, x), by the modified Lentz method.
/// Γ(−1/2, x) follows from e^{x}Γ(−1/2, x) = 2(x^{−1/2} − e^{x}Γ(1/2, x)).
pub fn scaled_gamma(a: GammaOrder, x: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *x < 0 || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma needs x >= 0, got {x}")));
    }
    let bits = ctx.bits();
    let xf = x.to_f64();
    if a == GammaOrder::MinusHalf && x.is_zero() {
        return Err(Error::Domain("Γ(−1/2, 0) diverges".into()));
    }
    // the Γ(−1/2) recurrence cancels about log2(2x) bits
    let extra = 16 + if a == GammaOrder::MinusHalf { (2.0 * xf).max(1.0).log2().ceil() as u32 } else { 0 };
    let half = if xf < SERIES_LIMIT {
        let wp = bits + extra + (1.5 * xf) as u32 + 8;
        let xw = Float::with_val(wp, x);
        let eps = Float::with_val(wp, 1) >> wp;
        let mut ap = Float::with_val(wp, 0.5);
        let mut del = Float::with_val(wp, 2);
        let mut sum = del.clone();
        loop {
            ap += 1u32;
            del *= &xw;
            del /= &ap;
            sum += &del;
            if del < Float::with_val(wp, &sum * &eps) {
                break;
            }
        }
        let sqrt_pi = Float::with_val(wp, Constant::Pi).sqrt();
        let lead = Float::with_val(wp, xw.exp_ref()) * sqrt_pi;
        lead - sum * Float::with_val(wp, xw.sqrt_ref())
    } else {
        let wp = bits + extra;
        let xw = Float::with_val(wp, x);
        let eps = Float::with_val(wp, 1) >> wp;
        let tiny = Float::with_val(wp, 1) >> (2 * wp);
        // b_0 = x + 1 − a, a_i = −i(i − a), b_i = b_{i−1} + 2
        let mut b = Float::with_val(wp, &xw + 0.5);
        let mut c = Float::with_val(wp, 1) / &tiny;
        let mut d = Float::with_val(wp, b.recip_ref());
        let mut h = d.clone();
        let mut an = Float::new(wp);
        let mut del = Float::new(wp);
        for i in 1u32.. {
            an.assign(-(i as f64) * (i as f64 - 0.5));
            b += 2u32;
            d *= &an;
            d += &b;
            if d.is_zero() {
                d.assign(&tiny);
            }
            c.recip_mut();
            c *= &an;
            c += &b;
            if c.is_zero() {
                c.assign(&tiny);
            }
            d.recip_mut();
            del.assign(&d * &c);
            h *= &del;
            del -= 1u32;
            del.abs_mut();
            if del < eps {
                break;
            }
            if i > 100_000 {
                return Err(Error::QuadratureNonConvergence { last: h.to_string(), previous: String::new() });
            }
        }
        h * Float::with_val(wp, xw.sqrt_ref())
    };
    let out = match a {
        GammaOrder::Half => half,
        GammaOrder::MinusHalf => {
            let wp = half.prec();
            let inv = Float::with_val(wp, x).sqrt().recip();
            (inv - half) * 2u32
        }
    };
    Ok(Float::with_val(bits, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quad_vertical_to_infinity;
    use rug::ops::Pow;
    use rug::Complex;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(40).unwrap()
    }

    /// ∫_0^∞ (x+u)^{a−1} e^{−x−u} du by quadrature.
    fn by_quadrature(a: f64, x: f64, c: &PrecisionContext) -> f64 {
        let bits = c.bits();
        let xf = Float::with_val(bits, x);
        let v = quad_vertical_to_infinity(
            |u| {
                let w = Float::with_val(bits, &xf + u);
                let e = Float::with_val(bits, -&w).exp();
                Complex::with_val(bits, w.pow(Float::with_val(bits, a - 1.0)) * e)
            },
            1.0,
            c,
        )
        .unwrap();
        v.real().to_f64()
    }

    #[test]
    fn scaled_forms_match_erfc_route() {
        let c = PrecisionContext::with_digits(50).unwrap();
        let bits = c.bits();
        for x in [1e-30, 0.001, 0.3, 2.0, 9.99, 10.0, 29.99, 30.0, 30.01, 37.5, 150.0, 500.0, 4000.0] {
            let xf = Float::with_val(bits, x);
            let e = Float::with_val(bits, xf.exp_ref());
            for a in [GammaOrder::Half, GammaOrder::MinusHalf] {
                let fast = scaled_gamma(a, &xf, &c).unwrap();
                let slow = incomplete_gamma_upper(a, &xf, &c).unwrap() * &e;
                let rel = (Float::with_val(bits, &fast - &slow) / &slow).abs().to_f64();
                assert!(rel < 1e-55, "a={a:?} x={x}: {rel:e}");
            }
        }
    }

    #[test]
    fn half_at_zero_is_sqrt_pi() {
        let c = ctx();
        let g = incomplete_gamma_upper(GammaOrder::Half, &c.float(0), &c).unwrap();
        let want = c.pi().sqrt();
        assert!(Float::with_val(c.bits(), &g - &want).abs().to_f64() < 1e-45);
    }

    #[test]
    fn half_vanishes_far_out() {
        let c = PrecisionContext::with_digits(30).unwrap();
        let g = incomplete_gamma_upper(GammaOrder::Half, &c.float(200), &c).unwrap();
        assert!(g.to_f64() < 1e-30);
    }

    #[test]
    fn matches_defining_integral() {
        let c = ctx();
        for x in [0.1, 1.0, 10.0] {
            let g = incomplete_gamma_upper(GammaOrder::Half, &c.float(x), &c).unwrap().to_f64();
            let q = by_quadrature(0.5, x, &c);
            assert!(((g - q) / q).abs() < 1e-14, "x={x}: {g} vs {q}");
            let g = incomplete_gamma_upper(GammaOrder::MinusHalf, &c.float(x), &c).unwrap().to_f64();
            let q = by_quadrature(-0.5, x, &c);
            assert!(((g - q) / q).abs() < 1e-14, "x={x}: {g} vs {q}");
        }
    }

    #[test]
    fn recurrence_consistency() {
        let c = ctx();
        for x in [0.1, 1.0, 10.0, 55.5] {
            let xf = c.float(x);
            let h = incomplete_gamma_upper(GammaOrder::Half, &xf, &c).unwrap();
            let m = incomplete_gamma_upper(GammaOrder::MinusHalf, &xf, &c).unwrap();
            let lead = Float::with_val(c.bits(), -&xf).exp() / xf.clone().sqrt();
            let r = h + m / 2u32 - &lead;
            assert!((r / lead).abs().to_f64() < 1e-45, "x={x}");
        }
    }

    #[test]
    fn minus_half_at_zero_is_an_error() {
        let c = ctx();
        assert!(incomplete_gamma_upper(GammaOrder::MinusHalf, &c.float(0), &c).is_err());
        assert!(incomplete_gamma_upper(GammaOrder::Half, &c.float(-1), &c).is_err());
    }
}
