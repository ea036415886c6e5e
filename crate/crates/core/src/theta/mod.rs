//! θ_f, Θ_f and the unary theta series in the upper half-plane.

mod point;
mod series;

use rug::{Complex, Float};

pub use point::{format_complex, parse_complex, UpperHalfPoint};
pub use series::{class_sum, ThetaEvaluator, DUAL_CROSSOVER};

use crate::error::{Error, Result};
use crate::modgroup::{in_b_m, in_gamma_m, MoebiusMap, RationalCusp};
use crate::numerics::{abs_f64, truncation_bound, PrecisionContext};
use crate::periodic::{Parity, PeriodicCoeffs};

/// θ_f(z) = Σ_{n≥0} f(n) q^{n²/2M}.
pub fn theta_f(f: &PeriodicCoeffs, z: &UpperHalfPoint, ctx: &PrecisionContext) -> Complex {
    ThetaEvaluator::new(f, ctx).theta(z.z())
}

/// Θ_f(z) = Σ_{n≥0} n f(n) q^{n²/2M}.
pub fn big_theta_f(f: &PeriodicCoeffs, z: &UpperHalfPoint, ctx: &PrecisionContext) -> Complex {
    ThetaEvaluator::new(f, ctx).big_theta(z.z())
}

fn check_residue(k: u32, modulus: u32) -> Result<()> {
    if k >= modulus {
        return Err(Error::Domain(format!("residue {k} must be below M = {modulus}")));
    }
    Ok(())
}

/// θ(z; k, M) = Σ_{n∈ℤ} q^{(Mn+k)²/2M}.
pub fn theta_unary(z: &UpperHalfPoint, k: u32, modulus: u32, ctx: &PrecisionContext) -> Result<Complex> {
    check_residue(k, modulus)?;
    let bits = ctx.bits();
    let nmax = truncation_bound(z.y().to_f64(), modulus, ctx);
    let mut s = class_sum(z.z(), modulus, k, false, nmax, bits);
    s += class_sum(z.z(), modulus, (modulus - k) % modulus, false, nmax, bits);
    if k == 0 {
        s -= 1u32;
    }
    Ok(s)
}

/// Θ̃(z; k, M) = Σ_{n∈ℤ} (Mn+k) q^{(Mn+k)²/2M}.
pub fn big_theta_unary(z: &UpperHalfPoint, k: u32, modulus: u32, ctx: &PrecisionContext) -> Result<Complex> {
    check_residue(k, modulus)?;
    let bits = ctx.bits();
    let nmax = truncation_bound(z.y().to_f64(), modulus, ctx);
    let plus = class_sum(z.z(), modulus, k, true, nmax, bits);
    let minus = class_sum(z.z(), modulus, (modulus - k) % modulus, true, nmax, bits);
    Ok(plus - minus)
}

/// e^{2πi z a} for real a.
fn q_power(z: &Complex, a: &Float, bits: u32) -> Complex {
    let two_pi_i = Complex::with_val(bits, (0, Float::with_val(bits, rug::float::Constant::Pi) * 2u32));
    Complex::with_val(bits, two_pi_i * z * a).exp()
}

/// Triple-product form q^{k0/2M}(q^M;q^M)_∞ Σ' q^{k'} f(k)(−q^{M/2−k};q^M)_∞(−q^{M/2+k};q^M)_∞.
pub fn product_form(f: &PeriodicCoeffs, z: &UpperHalfPoint, ctx: &PrecisionContext) -> Result<Complex> {
    if f.parity() != Parity::Even {
        return Err(Error::Domain("product form needs even f".into()));
    }
    let bits = ctx.bits();
    let m = f.modulus() as i64;
    let k0 = f.k0() as i64;
    let zz = z.z();
    let qm = q_power(zz, &Float::with_val(bits, m), bits);
    // number of factors until |q^{Mj}| < 10^{-(digits+margin)}
    let decay = 2.0 * std::f64::consts::PI * z.y().to_f64() * m as f64;
    let factors = (ctx.target_ln() / decay).ceil() as usize + 1;
    let pochhammer = |start: Complex| -> Complex {
        // (−start; q^M)_∞ = Π_{j≥0} (1 + start·q^{Mj})
        let mut acc = Complex::with_val(bits, 1);
        let mut p = start;
        for _ in 0..factors {
            acc *= Complex::with_val(bits, &p + 1u32);
            p *= &qm;
        }
        acc
    };
    let mut eta = Complex::with_val(bits, 1);
    let mut p = qm.clone();
    for _ in 0..factors {
        eta *= Complex::with_val(bits, 1u32 - &p);
        p *= &qm;
    }
    let mut sum = Complex::new(bits);
    for &k in f.m_f() {
        let k = k as i64;
        let num = k * k - k0;
        if num < 0 || num % (2 * m) != 0 {
            return Err(Error::InvalidCoeffs(format!("k' = ({k}² − {k0})/{} is not a nonnegative integer", 2 * m)));
        }
        let kp = num / (2 * m);
        let half_m = Float::with_val(bits, m) / 2u32;
        let a = pochhammer(q_power(zz, &Float::with_val(bits, &half_m - k), bits));
        let b = pochhammer(q_power(zz, &Float::with_val(bits, &half_m + k), bits));
        let mut term = q_power(zz, &Float::with_val(bits, kp), bits) * f.value(k).to_complex(bits) * a * b;
        if 2 * k == m {
            term /= 2u32;
        }
        sum += term;
    }
    let lead = q_power(zz, &(Float::with_val(bits, k0) / (2 * m)), bits);
    Ok(lead * eta * sum)
}

fn require_group(f: &PeriodicCoeffs, g: &MoebiusMap) -> Result<()> {
    if !in_gamma_m(f.modulus(), g) {
        return Err(Error::NotInGroup(format!("{g} ∉ Γ_{}", f.modulus())));
    }
    Ok(())
}

/// θ_f(γz) − χ(γ)(cz+d)^{1/2} θ_f(z) for even f.
pub fn transform_residual_theta(
    f: &PeriodicCoeffs,
    g: &MoebiusMap,
    z: &UpperHalfPoint,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    if f.parity() != Parity::Even {
        return Err(Error::Domain("weight 1/2 law needs even f".into()));
    }
    require_group(f, g)?;
    let ev = ThetaEvaluator::new(f, ctx);
    let gz = g.apply_complex(z.z())?;
    let lhs = ev.theta(&gz);
    let rhs = ev.automorphy(g, z.z(), 0.5)? * ev.theta(z.z());
    Ok(lhs - rhs)
}

/// Θ_f(γz) − χ(γ)(cz+d)^{3/2} Θ_f(z) for odd f.
pub fn transform_residual_big_theta(
    f: &PeriodicCoeffs,
    g: &MoebiusMap,
    z: &UpperHalfPoint,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    if f.parity() != Parity::Odd {
        return Err(Error::Domain("weight 3/2 law needs odd f".into()));
    }
    require_group(f, g)?;
    let ev = ThetaEvaluator::new(f, ctx);
    let gz = g.apply_complex(z.z())?;
    let lhs = ev.big_theta(&gz);
    let rhs = ev.automorphy(g, z.z(), 1.5)? * ev.big_theta(z.z());
    Ok(lhs - rhs)
}

/// The two evaluations of θ_f(α + iy) compared by [`decay_at_rational`].
#[derive(Clone, Debug)]
pub struct DecayComparison {
    pub dual: Complex,
    pub direct: Complex,
    pub difference: f64,
}

/// θ_f(α+iy) from the dual expansion and from the defining series.
pub fn decay_at_rational(
    f: &PeriodicCoeffs,
    alpha: &RationalCusp,
    y: &Float,
    ctx: &PrecisionContext,
) -> Result<DecayComparison> {
    if f.parity() != Parity::Even || !f.primed_sum().is_zero() {
        return Err(Error::Domain("decay at rationals needs even f with vanishing primed sum".into()));
    }
    if alpha.is_infinity() || in_b_m(f.modulus(), alpha) {
        return Err(Error::Domain(format!("{alpha} is Γ_M-equivalent to i∞")));
    }
    let bits = ctx.bits();
    let x = alpha.to_float(bits).expect("finite cusp");
    let z = UpperHalfPoint::from_parts(x, Float::with_val(bits, y))?;
    let ev = ThetaEvaluator::new(f, ctx);
    let dual = ev.theta_dual(z.z()).expect("dual expansion available");
    let direct = ev.theta_direct(z.z());
    let difference = abs_f64(&Complex::with_val(bits, &dual - &direct));
    Ok(DecayComparison { dual, direct, difference })
}
