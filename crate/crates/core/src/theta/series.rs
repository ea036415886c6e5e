//! Residue-class sums Σ_{m ≡ r (mod M)} m^w e^{πi z m²/M} and the evaluator built on them.

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use crate::modgroup::{multiplier_chi, MoebiusMap};
use crate::numerics::{principal_pow, truncation_bound, PrecisionContext};
use crate::periodic::{Parity, PeriodicCoeffs};

/// Terms between exact re-seedings of the recurrence.
const BLOCK: u64 = 2048;
/// Heights below which the dual expansion at 0 is considered.
pub const DUAL_CROSSOVER: f64 = 0.02;

/// Σ_{0 ≤ m ≤ nmax, m ≡ r (mod M)} m^w e^{πi z m²/M}, w ∈ {0, 1}.
///
/// Consecutive terms are linked by t_{j+1} = t_j ρ_j, ρ_{j+1} = ρ_j e^{2πi z M};
/// the pair is recomputed from scratch every `BLOCK` terms.
pub fn class_sum(z: &Complex, modulus: u32, r: u32, weighted: bool, nmax: u64, bits: u32) -> Complex {
    let m = modulus as u64;
    let mut acc = Complex::new(bits);
    if r as u64 > nmax {
        return acc;
    }
    assert!(nmax < u32::MAX as u64, "theta truncation beyond 2^32 terms");
    let zabs = Float::with_val(53, z.abs_ref()).to_f64();
    let span = std::f64::consts::PI * zabs * (nmax as f64 + m as f64).powi(2) / m as f64;
    let wide = bits + span.max(1.0).log2().ceil() as u32 + 16;
    let pi = Float::with_val(wide, Constant::Pi);
    let c = Complex::with_val(wide, z * Complex::with_val(wide, (0, &pi))) / modulus;
    let exp_at = |e: &Integer| -> Complex { Complex::with_val(bits, Complex::with_val(wide, &c * e).exp()) };
    let dd = exp_at(&Integer::from(2 * m * m));
    let mut idx = r as u64;
    while idx <= nmax {
        let mi = Integer::from(idx);
        let mut term = exp_at(&Integer::from(mi.square_ref()));
        let mut ratio = exp_at(&(Integer::from(2 * m * idx) + m * m));
        for _ in 0..BLOCK {
            if idx > nmax {
                break;
            }
            if weighted {
                acc += Complex::with_val(bits, &term * idx as u32);
            } else {
                acc += &term;
            }
            term *= &ratio;
            ratio *= &dd;
            idx += m;
        }
    }
    acc
}

/// θ_f, Θ_f and their transported forms for one coefficient function.
#[derive(Clone, Debug)]
pub struct ThetaEvaluator<'a> {
    f: &'a PeriodicCoeffs,
    ctx: PrecisionContext,
    coeffs: Vec<(u32, Complex)>,
    /// g(s) = Σ' f(k) cos(2πsk/M) for the dual expansion, when the primed sum vanishes.
    dual: Option<Vec<Complex>>,
}

impl<'a> ThetaEvaluator<'a> {
    pub fn new(f: &'a PeriodicCoeffs, ctx: &PrecisionContext) -> Self {
        let bits = ctx.bits();
        let coeffs = f.float_support(bits);
        let dual = (f.parity() == Parity::Even && f.primed_sum().is_zero()).then(|| {
            let m = f.modulus();
            (0..m)
                .map(|s| {
                    let mut g = Complex::new(bits);
                    for &k in f.m_f() {
                        let angle = ctx.pi() * 2u32 * ((s as u64 * k as u64) % m as u64) / m;
                        let mut w = Float::with_val(bits, angle.cos_ref());
                        if 2 * k == m {
                            w /= 2u32;
                        }
                        g += f.value(k as i64).to_complex(bits) * w;
                    }
                    g
                })
                .collect()
        });
        Self { f, ctx: ctx.clone(), coeffs, dual }
    }

    pub fn coeffs(&self) -> &PeriodicCoeffs {
        self.f
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    fn nmax(&self, y: f64) -> u64 {
        truncation_bound(y, self.f.modulus(), &self.ctx)
    }

    fn direct(&self, z: &Complex, weighted: bool) -> Complex {
        let bits = self.ctx.bits();
        let nmax = self.nmax(z.imag().to_f64());
        let mut acc = Complex::new(bits);
        for (r, v) in &self.coeffs {
            acc += class_sum(z, self.f.modulus(), *r, weighted, nmax, bits) * v;
        }
        acc
    }

    /// θ_f by its defining series.
    pub fn theta_direct(&self, z: &Complex) -> Complex {
        self.direct(z, false)
    }

    /// Θ_f by its defining series.
    pub fn big_theta(&self, z: &Complex) -> Complex {
        self.direct(z, true)
    }

    /// Poisson-dual form (M(y−ix))^{−1/2}·2 Σ_{ν≥1} g(ν) e^{−πν²/(M(y−ix))}; needs a vanishing primed sum.
    pub fn theta_dual(&self, z: &Complex) -> Option<Complex> {
        let g = self.dual.as_ref()?;
        let bits = self.ctx.bits();
        let m = self.f.modulus();
        let w = Complex::with_val(bits, -Complex::with_val(bits, z.recip_ref()));
        let nmax = self.nmax(w.imag().to_f64());
        let mut acc = Complex::new(bits);
        for (s, gs) in g.iter().enumerate() {
            if gs.is_zero() {
                continue;
            }
            let mut cs = class_sum(&w, m, s as u32, false, nmax, bits);
            if s == 0 {
                cs -= 1u32;
            }
            acc += cs * gs;
        }
        // M(y − ix) = −iMz
        let base = Complex::with_val(bits, z * Complex::with_val(bits, (0, -(m as i32))));
        Some(acc * 2u32 / principal_pow(&base, 0.5))
    }

    /// Relative cost of the dual route against the direct one.
    fn prefers_dual(&self, z: &Complex) -> bool {
        if self.dual.is_none() {
            return false;
        }
        let y = z.imag().to_f64();
        if y >= DUAL_CROSSOVER {
            return false;
        }
        let r2 = Float::with_val(53, z.norm_ref()).to_f64();
        let m = self.f.modulus() as f64;
        let direct = self.coeffs.len() as f64 * self.nmax(y) as f64 / m;
        let dual = self.nmax(y / r2) as f64;
        dual < direct
    }

    /// θ_f(z), switching to the dual expansion near 0 when it is cheaper.
    pub fn theta(&self, z: &Complex) -> Complex {
        if self.prefers_dual(z) {
            if let Some(v) = self.theta_dual(z) {
                return v;
            }
        }
        self.theta_direct(z)
    }

    /// χ(g)(cz+d)^k.
    pub fn automorphy(&self, g: &MoebiusMap, z: &Complex, k: f64) -> crate::Result<Complex> {
        let chi = multiplier_chi(self.f.modulus(), self.f.k0(), g)?.to_complex(self.ctx.bits());
        Ok(chi * principal_pow(&g.automorphy(z), k))
    }

    /// θ_f(z) = θ_f(gz) / (χ(g)(cz+d)^{1/2}) for g ∈ Γ_M (even f).
    pub fn theta_transported(&self, g: &MoebiusMap, z: &Complex) -> crate::Result<Complex> {
        let w = g.apply_complex(z)?;
        Ok(self.theta(&w) / self.automorphy(g, z, 0.5)?)
    }

    /// Θ_f(z) = Θ_f(gz) / (χ(g)(cz+d)^{3/2}) for g ∈ Γ_M (odd f).
    pub fn big_theta_transported(&self, g: &MoebiusMap, z: &Complex) -> crate::Result<Complex> {
        let w = g.apply_complex(z)?;
        Ok(self.big_theta(&w) / self.automorphy(g, z, 1.5)?)
    }

    /// Terms needed to evaluate θ_f (`weighted` false) or Θ_f (true) at z by the cheapest route.
    pub fn cost(&self, z: &Complex, weighted: bool) -> f64 {
        let y = z.imag().to_f64();
        if !weighted && self.prefers_dual(z) {
            let r2 = Float::with_val(53, z.norm_ref()).to_f64();
            return self.nmax(y / r2) as f64;
        }
        self.direct_cost(y)
    }

    /// Number of series terms the direct route needs at height y.
    pub fn direct_cost(&self, y: f64) -> f64 {
        self.coeffs.len() as f64 * self.nmax(y) as f64 / self.f.modulus() as f64
    }
}
