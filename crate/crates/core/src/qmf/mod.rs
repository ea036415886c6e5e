//! Eichler integrals, cocycles and the quantum-modularity residuals.

mod path;

use std::str::FromStr;

use rug::float::Constant;
use rug::{Complex, Float};
use serde_json::json;

use crate::error::{Error, Result};
use crate::lvalues::{hat_expansion_exact, radial_value, theta_expansion_exact, Weight};
use crate::modgroup::{in_a_m, in_b_m, multiplier_chi, MoebiusMap, RationalCusp};
use crate::numerics::{
    abs_f64, fit_power_series, geometric_grid_with_ratio, pow_with_arg, principal_pow, scaled_gamma,
    truncation_bound, GammaOrder, PrecisionContext,
};
use crate::periodic::{Parity, PeriodicCoeffs};
use crate::report::VerificationRecord;
use crate::theta::{format_complex, parse_complex, ThetaEvaluator, UpperHalfPoint};

pub use path::{Chart, ContourShape};

/// A point τ = x + iy with y < 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerHalfPoint(Complex);

impl LowerHalfPoint {
    pub fn new(z: Complex) -> Result<Self> {
        if !(*z.imag() < 0) {
            return Err(Error::Domain(format!("{} is not in the lower half-plane", format_complex(&z, 20))));
        }
        Ok(Self(z))
    }

    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        Self::new(parse_complex(s, bits)?)
    }

    pub fn z(&self) -> &Complex {
        &self.0
    }
}

/// Argument of the weight-1/2 objects: a lower-half-plane point or a cusp.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerArg {
    Point(LowerHalfPoint),
    Cusp(RationalCusp),
}

impl LowerArg {
    /// Cusps are written "p/q" or an integer; anything else is read as a complex number.
    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        match RationalCusp::from_str(s) {
            Ok(c) => Ok(LowerArg::Cusp(c)),
            Err(_) => Ok(LowerArg::Point(LowerHalfPoint::parse(s, bits)?)),
        }
    }
}

impl std::fmt::Display for LowerArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LowerArg::Point(p) => f.write_str(&format_complex(p.z(), 20)),
            LowerArg::Cusp(c) => write!(f, "{c}"),
        }
    }
}

fn require(f: &PeriodicCoeffs, parity: Parity, what: &str) -> Result<()> {
    if f.parity() != parity {
        return Err(Error::Domain(format!("{what} needs {parity} f")));
    }
    Ok(())
}

/// Smallest positive n with f(n) ≠ 0; the series decay like e^{−π n² y/M}.
fn decay_rate(f: &PeriodicCoeffs) -> f64 {
    let m = f.modulus() as i64;
    let n = (1..=m).find(|&n| !f.value(n).is_zero()).unwrap_or(m);
    std::f64::consts::PI * (n * n) as f64 / m as f64
}

fn sqrt_i_m(m: u32, bits: u32) -> Complex {
    principal_pow(&Complex::with_val(bits, (0, m)), 0.5)
}

/// −√M e^{iπ/4}/(2π).
fn connect_factor(m: u32, bits: u32) -> Complex {
    let pi = Float::with_val(bits, Constant::Pi);
    let root = Float::with_val(bits, m).sqrt();
    let e = principal_pow(&Complex::with_val(bits, (0, 1)), 0.5);
    -(e * root / (pi * 2u32))
}

/// (cα+d)^k with cα+d approached from the side an interior point τ − iε would give.
pub fn automorphy_from_below(g: &MoebiusMap, alpha: &RationalCusp, k: f64, bits: u32) -> Result<Complex> {
    let r = alpha.to_rational().ok_or_else(|| Error::Domain("automorphy at i∞".into()))?;
    let w = Float::with_val(bits, r * g.c + g.d);
    if w.is_zero() {
        return Err(Error::Domain(format!("cα+d vanishes at α = {alpha}")));
    }
    let arg = if w < 0 {
        let pi = Float::with_val(bits, Constant::Pi);
        if g.c > 0 { -pi } else { pi }
    } else {
        Float::new(bits)
    };
    Ok(pow_with_arg(&Complex::with_val(bits, &w), &arg, k))
}

/// Calls `visit(n, e^{πi n² w/M})` for 1 ≤ n ≤ nmax with f(n) ≠ 0.
///
/// The phases follow e_{n+1} = e_n ρ_n, ρ_{n+1} = ρ_n e^{2πi w/M}, recomputed
/// from scratch every 2048 steps.
fn for_each_phase(f: &PeriodicCoeffs, w: &Complex, nmax: u64, bits: u32, mut visit: impl FnMut(u64, &Complex)) {
    let m = f.modulus();
    let zabs = Float::with_val(53, w.abs_ref()).to_f64();
    let span = std::f64::consts::PI * zabs * (nmax as f64 + 1.0).powi(2) / m as f64;
    let wide = bits + span.max(1.0).log2().ceil() as u32 + 16;
    let pi = Float::with_val(wide, Constant::Pi);
    let c = Complex::with_val(wide, w * Complex::with_val(wide, (0, &pi))) / m;
    let exp_at = |e: u64| -> Complex { Complex::with_val(bits, Complex::with_val(wide, &c * Float::with_val(wide, e)).exp()) };
    let dd = exp_at(2);
    let mut n = 1u64;
    while n <= nmax {
        let mut term = exp_at(n * n);
        let mut ratio = exp_at(2 * n + 1);
        for _ in 0..2048 {
            if n > nmax {
                break;
            }
            if !f.value(n as i64).is_zero() {
                visit(n, &term);
            }
            term *= &ratio;
            ratio *= &dd;
            n += 1;
        }
    }
}

/// θ̃_f(z) for z ∈ ℍ by the incomplete-gamma series.
///
/// Each term n f(n) Γ(−1/2, x) e^{πin²z̄/M}, x = 2πn²y/M, is formed as
/// n f(n) e^{x}Γ(−1/2, x) e^{πin²z/M}.
pub fn eichler_tilde(f: &PeriodicCoeffs, z: &UpperHalfPoint, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Even, "the Eichler integral θ̃_f")?;
    let bits = ctx.bits();
    let m = f.modulus();
    let pi = ctx.pi();
    let y = z.y();
    let nmax = truncation_bound(y.to_f64(), m, ctx);
    let step = Float::with_val(bits, &pi * y) * 2u32 / m;
    let mut acc = Complex::new(bits);
    let mut err = None;
    for_each_phase(f, z.z(), nmax, bits, |n, e| {
        let x = Float::with_val(bits, &step * n) * n;
        match scaled_gamma(GammaOrder::MinusHalf, &x, ctx) {
            Ok(g) => acc += Complex::with_val(bits, e * f.value(n as i64).to_complex(bits)) * g * n,
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if !f.value(0).is_zero() {
        // n·Γ(−1/2, 2πn²y/M) → 2√(M/(2πy)) as n → 0
        let lim = Float::with_val(bits, Float::with_val(bits, m) / (Float::with_val(bits, &pi * y) * 2u32)).sqrt() * 2u32;
        acc += f.value(0).to_complex(bits) * lim;
    }
    let root = Float::with_val(bits, &pi / m).sqrt();
    let phase = principal_pow(&Complex::with_val(bits, (0, -1)), 0.5);
    Ok(acc * root * phase)
}

/// θ̃_f(z) for z ∈ ℍ by quadrature of the defining integral along the vertical ray above z.
pub fn eichler_tilde_quad(f: &PeriodicCoeffs, z: &UpperHalfPoint, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Even, "the Eichler integral θ̃_f")?;
    let bits = ctx.bits();
    let ev = ThetaEvaluator::new(f, ctx);
    let zbar = Complex::with_val(bits, z.z().conj_ref());
    let kernel = |tau: &Complex| principal_pow(&Complex::with_val(bits, tau - &zbar), -1.5);
    path::vertical_from_point(&ev, false, z.z(), decay_rate(f), kernel)
}

/// θ̃_f(α) for α ∈ A_M by quadrature, the integrand decaying at both ends.
pub fn eichler_tilde_at_cusp(f: &PeriodicCoeffs, alpha: &RationalCusp, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Even, "the Eichler integral θ̃_f")?;
    if !in_a_m(f, alpha) {
        return Err(Error::DivergentAtCusp(format!("{alpha} is not in A_M")));
    }
    if alpha.is_infinity() {
        return Ok(Complex::new(ctx.bits()));
    }
    let bits = ctx.bits();
    let ev = ThetaEvaluator::new(f, ctx);
    let chart = Chart::for_cusp(f, alpha, true, bits)?;
    let a = chart.base(bits);
    let kernel = |tau: &Complex| principal_pow(&Complex::with_val(bits, tau - &a), -1.5);
    path::vertical_from_cusp(&ev, false, &chart, decay_rate(f), kernel)
}

/// Θ_f(α) = −(√M/2π) e^{iπ/4} θ̃_f(α), the Eichler-integral route to the weight-3/2 value.
pub fn theta_value_at_cusp(f: &PeriodicCoeffs, alpha: &RationalCusp, ctx: &PrecisionContext) -> Result<Complex> {
    let t = eichler_tilde_at_cusp(f, alpha, ctx)?;
    Ok(t * connect_factor(f.modulus(), ctx.bits()))
}

/// Θ̂_f(τ) for τ ∈ ℍ₋: (1/√π) Σ f(n) e^{πin²τ̄/M} e^{x}Γ(1/2, x), x = 2π|y|n²/M.
pub fn hat_theta(f: &PeriodicCoeffs, tau: &LowerHalfPoint, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Odd, "Θ̂_f")?;
    let bits = ctx.bits();
    let m = f.modulus();
    let pi = ctx.pi();
    let ay = Float::with_val(bits, tau.z().imag().abs_ref());
    let nmax = truncation_bound(ay.to_f64(), m, ctx);
    let taubar = Complex::with_val(bits, tau.z().conj_ref());
    let step = Float::with_val(bits, &pi * &ay) * 2u32 / m;
    let mut acc = Complex::new(bits);
    let mut err = None;
    for_each_phase(f, &taubar, nmax, bits, |n, e| {
        let x = Float::with_val(bits, &step * n) * n;
        match scaled_gamma(GammaOrder::Half, &x, ctx) {
            Ok(s) => acc += Complex::with_val(bits, e * f.value(n as i64).to_complex(bits)) * s,
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc / pi.sqrt())
}

/// Θ̂_f(τ) for τ ∈ ℍ₋ by quadrature of (1/√(iM)) ∫_{τ̄}^{i∞} Θ_f(w)(w−τ)^{−1/2} dw.
pub fn hat_theta_integral(f: &PeriodicCoeffs, tau: &LowerHalfPoint, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Odd, "Θ̂_f")?;
    let bits = ctx.bits();
    let ev = ThetaEvaluator::new(f, ctx);
    let t = tau.z().clone();
    let start = Complex::with_val(bits, t.conj_ref());
    let kernel = |w: &Complex| principal_pow(&Complex::with_val(bits, w - &t), -0.5);
    let v = path::vertical_from_point(&ev, true, &start, decay_rate(f), kernel)?;
    Ok(v / sqrt_i_m(f.modulus(), bits))
}

/// Θ̂_f(α) for α ∈ B_M by quadrature of the defining integral from α.
pub fn hat_theta_at_cusp(f: &PeriodicCoeffs, alpha: &RationalCusp, ctx: &PrecisionContext) -> Result<Complex> {
    require(f, Parity::Odd, "Θ̂_f")?;
    if !in_b_m(f.modulus(), alpha) {
        return Err(Error::DivergentAtCusp(format!("{alpha} is not in B_M")));
    }
    let bits = ctx.bits();
    if alpha.is_infinity() {
        return Ok(Complex::new(bits));
    }
    let ev = ThetaEvaluator::new(f, ctx);
    let chart = Chart::for_cusp(f, alpha, false, bits)?;
    let a = chart.base(bits);
    let kernel = |w: &Complex| principal_pow(&Complex::with_val(bits, w - &a), -0.5);
    let v = path::vertical_from_cusp(&ev, true, &chart, decay_rate(f), kernel)?;
    Ok(v / sqrt_i_m(f.modulus(), bits))
}

/// Θ̂_f at a lower-half-plane point (series) or at a cusp of B_M (quadrature).
pub fn hat_theta_any(f: &PeriodicCoeffs, arg: &LowerArg, ctx: &PrecisionContext) -> Result<Complex> {
    match arg {
        LowerArg::Point(p) => hat_theta(f, p, ctx),
        LowerArg::Cusp(c) => hat_theta_at_cusp(f, c, ctx),
    }
}

/// r_{γ,f}(x) along a vertical path from γ^{−1}(i∞).
///
/// Weight 3/2 (even f): −(√M e^{iπ/4}/2π) ∫ θ_f(τ)(τ − x̄)^{−3/2} dτ, x in the closed upper half-plane.
/// Weight 1/2 (odd f): (1/√(iM)) ∫ Θ_f(w)(w − x)^{−1/2} dw, x in the closed lower half-plane.
pub fn cocycle_r(f: &PeriodicCoeffs, weight: Weight, g: &MoebiusMap, x: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    cocycle_r_along(f, weight, g, x, &ContourShape::Vertical, ctx)
}

/// [`cocycle_r`] along an explicit contour from γ^{−1}(i∞) to i∞.
pub fn cocycle_r_along(
    f: &PeriodicCoeffs,
    weight: Weight,
    g: &MoebiusMap,
    x: &Complex,
    shape: &ContourShape,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    let bits = ctx.bits();
    let m = f.modulus();
    if !crate::modgroup::in_gamma_m(m, g) {
        return Err(Error::NotInGroup(g.to_string()));
    }
    match weight {
        Weight::ThreeHalves => {
            require(f, Parity::Even, "the weight-3/2 cocycle")?;
            if *x.imag() < 0 {
                return Err(Error::Domain("weight-3/2 cocycle needs Im x ≥ 0".into()));
            }
        }
        Weight::Half => {
            require(f, Parity::Odd, "the weight-1/2 cocycle")?;
            if *x.imag() > 0 {
                return Err(Error::Domain("weight-1/2 cocycle needs Im x ≤ 0".into()));
            }
        }
    }
    if g.c == 0 {
        return Ok(Complex::new(bits));
    }
    let s = RationalCusp::new(-g.d, g.c)?;
    if x.imag().is_zero() {
        let sf = s.to_float(bits).expect("finite endpoint");
        if *x.real() == sf {
            return Err(Error::Domain(format!("x = {s} is the excluded point γ^(-1)(i∞)")));
        }
    }
    let chart = Chart::new(s, *g, false, f, bits)?;
    let ev = ThetaEvaluator::new(f, ctx);
    let rate = decay_rate(f);
    match weight {
        Weight::ThreeHalves => {
            let xbar = Complex::with_val(bits, x.conj_ref());
            let kernel = |tau: &Complex| principal_pow(&Complex::with_val(bits, tau - &xbar), -1.5);
            let v = path::integrate(&ev, false, &chart, shape, rate, kernel)?;
            Ok(v * connect_factor(m, bits))
        }
        Weight::Half => {
            let kernel = |w: &Complex| principal_pow(&Complex::with_val(bits, w - x), -0.5);
            let v = path::integrate(&ev, true, &chart, shape, rate, kernel)?;
            Ok(v / sqrt_i_m(m, bits))
        }
    }
}

fn gamma_inputs(f: &PeriodicCoeffs, g: &MoebiusMap, point: String, ctx: &PrecisionContext) -> serde_json::Value {
    json!({ "f": f.label(), "gamma": g.to_string(), "point": point, "digits": ctx.digits() })
}

/// Θ_f(α) − χ̄(γ)(cα+d)^{−3/2}Θ_f(γα) against r_{γ,f}(α); Θ_f values from L-values, r by quadrature.
pub fn qmf_residual_32(
    f: &PeriodicCoeffs,
    g: &MoebiusMap,
    alpha: &RationalCusp,
    tolerance: f64,
    ctx: &PrecisionContext,
) -> Result<VerificationRecord> {
    require(f, Parity::Even, "weight-3/2 quantum modularity")?;
    let bits = ctx.bits();
    let m = f.modulus();
    if !crate::modgroup::in_gamma_m(m, g) {
        return Err(Error::NotInGroup(g.to_string()));
    }
    if !in_a_m(f, alpha) {
        return Err(Error::DivergentAtCusp(format!("{alpha} is not in A_M")));
    }
    let image = g.apply_cusp(alpha);
    if image.is_infinity() {
        return Err(Error::Domain(format!("α = {alpha} is the excluded point γ^(-1)(i∞)")));
    }
    let here = radial_value(f, Weight::ThreeHalves, alpha, ctx)?;
    let there = radial_value(f, Weight::ThreeHalves, &image, ctx)?;
    let (lhs, r) = if alpha.is_infinity() {
        (Complex::with_val(bits, &here - &there), Complex::new(bits))
    } else {
        let chi = multiplier_chi(m, f.k0(), g)?.conj().to_complex(bits);
        let aut = automorphy_from_below(g, alpha, -1.5, bits)?;
        let x = Complex::with_val(bits, alpha.to_float(bits).expect("finite"));
        (here - chi * aut * there, cocycle_r(f, Weight::ThreeHalves, g, &x, ctx)?)
    };
    let residual = abs_f64(&Complex::with_val(bits, &lhs - &r));
    Ok(VerificationRecord::new("qmf32", gamma_inputs(f, g, alpha.to_string(), ctx), &lhs, &r, residual, tolerance, ctx.digits()))
}

/// Θ̂_f(τ) − χ̄(γ)(cτ+d)^{−1/2}Θ̂_f(γτ) against r_{γ,f}(τ) for τ ∈ ℍ₋ ∪ B_M.
pub fn qmf_residual_12(
    f: &PeriodicCoeffs,
    g: &MoebiusMap,
    tau: &LowerArg,
    tolerance: f64,
    ctx: &PrecisionContext,
) -> Result<VerificationRecord> {
    require(f, Parity::Odd, "weight-1/2 quantum modularity")?;
    let bits = ctx.bits();
    let m = f.modulus();
    if !crate::modgroup::in_gamma_m(m, g) {
        return Err(Error::NotInGroup(g.to_string()));
    }
    let chi = multiplier_chi(m, f.k0(), g)?.conj().to_complex(bits);
    let (here, there, aut, x) = match tau {
        LowerArg::Point(p) => {
            let w = g.apply_complex(p.z())?;
            let image = LowerHalfPoint::new(w)?;
            let aut = principal_pow(&g.automorphy(p.z()), -0.5);
            (hat_theta(f, p, ctx)?, hat_theta(f, &image, ctx)?, aut, p.z().clone())
        }
        LowerArg::Cusp(a) => {
            if !in_b_m(m, a) {
                return Err(Error::DivergentAtCusp(format!("{a} is not in B_M")));
            }
            let image = g.apply_cusp(a);
            if image.is_infinity() {
                return Err(Error::Domain(format!("α = {a} is the excluded point γ^(-1)(i∞)")));
            }
            if a.is_infinity() {
                return Err(Error::Domain("τ = i∞ has no slash action to test".into()));
            }
            let aut = automorphy_from_below(g, a, -0.5, bits)?;
            let x = Complex::with_val(bits, a.to_float(bits).expect("finite"));
            (hat_theta_at_cusp(f, a, ctx)?, hat_theta_at_cusp(f, &image, ctx)?, aut, x)
        }
    };
    let lhs = here - chi * aut * there;
    let r = cocycle_r(f, Weight::Half, g, &x, ctx)?;
    let residual = abs_f64(&Complex::with_val(bits, &lhs - &r));
    Ok(VerificationRecord::new("qmf12", gamma_inputs(f, g, tau.to_string(), ctx), &lhs, &r, residual, tolerance, ctx.digits()))
}

/// Sampling plan for radial fits in t.
#[derive(Clone, Debug)]
pub struct FitPlan {
    pub t0: f64,
    pub samples: usize,
    /// Ratio between consecutive sample points.
    pub ratio: f64,
}

impl Default for FitPlan {
    fn default() -> Self {
        Self { t0: 5e-3, samples: 14, ratio: 1.3 }
    }
}

/// Coefficients of θ_f(α + it/2π) and Θ̂_f(α − it/2π) fitted in t.
#[derive(Clone, Debug)]
pub struct RadialFits {
    pub theta: Vec<Complex>,
    pub hat: Vec<Complex>,
    pub residual: f64,
}

/// Fits both radial expansions at α to order R.
pub fn radial_fits(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize, plan: &FitPlan, ctx: &PrecisionContext) -> Result<RadialFits> {
    require(f, Parity::Odd, "radial fits")?;
    let bits = ctx.bits();
    let a = alpha.to_float(bits).ok_or_else(|| Error::Domain("radial fit at i∞".into()))?;
    let ev = ThetaEvaluator::new(f, ctx);
    let two_pi = ctx.pi() * 2u32;
    let grid = geometric_grid_with_ratio(plan.t0, plan.samples, plan.ratio, ctx);
    let mut theta_samples = Vec::with_capacity(grid.len());
    let mut hat_samples = Vec::with_capacity(grid.len());
    for t in &grid {
        let h = Float::with_val(bits, t / &two_pi);
        let up = Complex::with_val(bits, (&a, &h));
        theta_samples.push((t.clone(), ev.theta_direct(&up)));
        let down = LowerHalfPoint::new(Complex::with_val(bits, (&a, -h)))?;
        hat_samples.push((t.clone(), hat_theta(f, &down, ctx)?));
    }
    let tf = fit_power_series(&theta_samples, order, ctx)?;
    let hf = fit_power_series(&hat_samples, order, ctx)?;
    Ok(RadialFits { theta: tf.coeffs, hat: hf.coeffs, residual: tf.residual.max(hf.residual) })
}

/// Compares fitted radial coefficients at α with the exact L-value predictions for r ≤ R.
pub fn infinite_order_agreement(
    f: &PeriodicCoeffs,
    alpha: &RationalCusp,
    order: usize,
    tolerance: f64,
    plan: &FitPlan,
    ctx: &PrecisionContext,
) -> Result<VerificationRecord> {
    if order > 4 {
        return Err(Error::Domain("infinite-order agreement is checked for R ≤ 4".into()));
    }
    let bits = ctx.bits();
    let fits = radial_fits(f, alpha, order, plan, ctx)?;
    let exact_theta: Vec<Complex> = theta_expansion_exact(f, alpha, order)?.iter().map(|c| c.to_complex(bits)).collect();
    let exact_hat: Vec<Complex> = hat_expansion_exact(f, alpha, order)?.iter().map(|c| c.to_complex(bits)).collect();
    let mut worst = 0f64;
    for r in 0..=order {
        worst = worst.max(abs_f64(&Complex::with_val(bits, &fits.theta[r] - &exact_theta[r])));
        worst = worst.max(abs_f64(&Complex::with_val(bits, &fits.hat[r] - &exact_hat[r])));
    }
    let show = |v: &[Complex]| v.iter().map(|c| format_complex(c, 20)).collect::<Vec<_>>();
    let inputs = json!({
        "f": f.label(),
        "alpha": alpha.to_string(),
        "order": order,
        "t0": plan.t0,
        "samples": plan.samples,
        "ratio": plan.ratio,
        "theta_fit": show(&fits.theta),
        "hat_fit": show(&fits.hat),
        "theta_exact": show(&exact_theta),
        "hat_exact": show(&exact_hat),
        "fit_residual": fits.residual,
    });
    Ok(VerificationRecord::new("agreement", inputs, &fits.theta[0], &exact_theta[0], worst, tolerance, ctx.digits()))
}
