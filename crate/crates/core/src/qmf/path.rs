//! Contour integrals of θ_f and Θ_f that start at a cusp.
//!
//! Near a cusp s the series converge slowly, so the integrand is evaluated
//! through a chart g ∈ Γ_M that sends s to i∞ (or to 0, where θ_f has a
//! rapidly convergent dual expansion) whenever that is cheaper.

use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::modgroup::{cusp_equivalent, multiplier_chi, MoebiusMap, RationalCusp};
use crate::numerics::{principal_pow, quad_interval, quad_vertical_to_infinity};
use crate::periodic::PeriodicCoeffs;
use crate::theta::ThetaEvaluator;

/// g ∈ Γ_M with g(α) = i∞, or g(α) = 0 when `to_zero`.
#[derive(Clone, Debug)]
pub struct Chart {
    alpha: RationalCusp,
    g: MoebiusMap,
    to_zero: bool,
    chi: Complex,
}

impl Chart {
    pub fn new(alpha: RationalCusp, g: MoebiusMap, to_zero: bool, f: &PeriodicCoeffs, bits: u32) -> Result<Self> {
        let target = if to_zero { RationalCusp::integer(0) } else { RationalCusp::INFINITY };
        if alpha.is_infinity() || g.apply_cusp(&alpha) != target {
            return Err(Error::Domain(format!("{g} does not send {alpha} to {target}")));
        }
        let chi = multiplier_chi(f.modulus(), f.k0(), &g)?.to_complex(bits);
        Ok(Self { alpha, g, to_zero, chi })
    }

    /// A chart at α from the cusp-equivalence witness; the 0 target is tried only if `allow_zero`.
    pub fn for_cusp(f: &PeriodicCoeffs, alpha: &RationalCusp, allow_zero: bool, bits: u32) -> Result<Self> {
        let m = f.modulus();
        if let (true, Some(g)) = cusp_equivalent(m, alpha, &RationalCusp::INFINITY) {
            return Self::new(*alpha, g, false, f, bits);
        }
        if allow_zero {
            if let (true, Some(g)) = cusp_equivalent(m, alpha, &RationalCusp::integer(0)) {
                return Self::new(*alpha, g, true, f, bits);
            }
        }
        Err(Error::DivergentAtCusp(alpha.to_string()))
    }

    pub fn cusp(&self) -> &RationalCusp {
        &self.alpha
    }

    pub fn base(&self, bits: u32) -> Complex {
        Complex::with_val(bits, self.alpha.to_float(bits).expect("finite cusp"))
    }

    /// (gτ, cτ+d) for τ = α + w, formed without cancellation at small w.
    fn image(&self, w: &Complex, bits: u32) -> (Complex, Complex) {
        let MoebiusMap { a, c, .. } = self.g;
        if self.to_zero {
            // aα + b = 0: gτ = a²w/(acw + 1), cτ + d = cw + 1/a
            let acw = Complex::with_val(bits, w * (a * c));
            let gt = Complex::with_val(bits, w * (a * a)) / (acw + 1u32);
            let j = Complex::with_val(bits, w * c) + Float::with_val(bits, 1) / a;
            (gt, j)
        } else {
            // cα + d = 0: gτ = a/c − 1/(c²w), cτ + d = cw
            let j = Complex::with_val(bits, w * c);
            let inv = Complex::with_val(bits, j.recip_ref()) / c;
            let gt = Float::with_val(bits, a) / c - inv;
            (gt, j)
        }
    }
}

/// Path from the chart's cusp to i∞.
#[derive(Clone, Debug, PartialEq)]
pub enum ContourShape {
    Vertical,
    /// Up to s + i·height, across to s + shift + i·height, then up.
    Bent { height: f64, shift: f64 },
}

struct Integrand<'e, 'f> {
    ev: &'e ThetaEvaluator<'f>,
    weighted: bool,
    base: Complex,
    chart: Option<&'e Chart>,
}

impl Integrand<'_, '_> {
    fn eval(&self, z: &Complex) -> Complex {
        if self.weighted {
            self.ev.big_theta(z)
        } else {
            self.ev.theta(z)
        }
    }

    /// θ_f or Θ_f at base + w.
    fn value(&self, w: &Complex) -> Complex {
        let bits = self.ev.ctx().bits();
        let tau = Complex::with_val(bits, &self.base + w);
        let Some(chart) = self.chart else {
            return self.eval(&tau);
        };
        let (gt, j) = chart.image(w, bits);
        if self.ev.cost(&gt, self.weighted) < self.ev.cost(&tau, self.weighted) {
            let k = if self.weighted { 1.5 } else { 0.5 };
            return self.eval(&gt) / (principal_pow(&j, k) * &chart.chi);
        }
        self.eval(&tau)
    }

    /// ∫_0^∞ value(w0 + iu) kernel(base + w0 + iu) i du.
    fn up<K: Fn(&Complex) -> Complex>(&self, w0: &Complex, rate: f64, kernel: &K) -> Result<Complex> {
        let bits = self.ev.ctx().bits();
        let i = Complex::with_val(bits, (0, 1));
        let v = quad_vertical_to_infinity(
            |u| {
                let w = Complex::with_val(bits, w0 + Complex::with_val(bits, (0, u)));
                let tau = Complex::with_val(bits, &self.base + &w);
                self.value(&w) * kernel(&tau)
            },
            rate,
            self.ev.ctx(),
        )?;
        Ok(v * i)
    }

    /// ∫ along the segment w0 → w0 + delta.
    fn segment<K: Fn(&Complex) -> Complex>(&self, w0: &Complex, delta: &Complex, kernel: &K) -> Result<Complex> {
        let bits = self.ev.ctx().bits();
        let zero = Float::new(bits);
        let one = Float::with_val(bits, 1);
        let v = quad_interval(
            |s| {
                let w = Complex::with_val(bits, w0 + Complex::with_val(bits, delta * s));
                let tau = Complex::with_val(bits, &self.base + &w);
                self.value(&w) * kernel(&tau)
            },
            &zero,
            &one,
            self.ev.ctx(),
        )?;
        Ok(v * delta)
    }
}

/// ∫ from `start` ∈ ℍ vertically to i∞ of θ_f (or Θ_f when `weighted`) times the kernel.
pub(crate) fn vertical_from_point<K: Fn(&Complex) -> Complex>(
    ev: &ThetaEvaluator,
    weighted: bool,
    start: &Complex,
    rate: f64,
    kernel: K,
) -> Result<Complex> {
    let it = Integrand { ev, weighted, base: start.clone(), chart: None };
    it.up(&Complex::new(ev.ctx().bits()), rate, &kernel)
}

/// ∫ from the chart's cusp vertically to i∞.
pub(crate) fn vertical_from_cusp<K: Fn(&Complex) -> Complex>(
    ev: &ThetaEvaluator,
    weighted: bool,
    chart: &Chart,
    rate: f64,
    kernel: K,
) -> Result<Complex> {
    integrate(ev, weighted, chart, &ContourShape::Vertical, rate, kernel)
}

/// ∫ from the chart's cusp to i∞ along `shape`.
pub(crate) fn integrate<K: Fn(&Complex) -> Complex>(
    ev: &ThetaEvaluator,
    weighted: bool,
    chart: &Chart,
    shape: &ContourShape,
    rate: f64,
    kernel: K,
) -> Result<Complex> {
    let bits = ev.ctx().bits();
    let it = Integrand { ev, weighted, base: chart.base(bits), chart: Some(chart) };
    match shape {
        ContourShape::Vertical => it.up(&Complex::new(bits), rate, &kernel),
        ContourShape::Bent { height, shift } => {
            if !(*height > 0.0) {
                return Err(Error::Domain("bent contour needs a positive height".into()));
            }
            let origin = Complex::new(bits);
            let rise = Complex::with_val(bits, (0, *height));
            let across = Complex::with_val(bits, (*shift, 0));
            let corner = Complex::with_val(bits, &rise + &across);
            let a = it.segment(&origin, &rise, &kernel)?;
            let b = it.segment(&rise, &across, &kernel)?;
            let c = it.up(&corner, rate, &kernel)?;
            Ok(a + b + c)
        }
    }
}
