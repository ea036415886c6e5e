//! Exp-sinh quadrature on (0, ∞) with level doubling.
//!
//! y = s·exp((π/2) sinh t) sends t ∈ ℝ onto (0, ∞); integrands that vanish
//! to all orders at both ends become doubly exponentially decaying in t, and
//! the trapezoidal rule in t converges geometrically in the number of levels.

use rug::{Complex, Float};

use super::PrecisionContext;
use crate::error::{Error, Result};

/// Tuning knobs for [`quad_vertical_to_infinity_with`].
#[derive(Clone, Debug)]
pub struct QuadOptions {
    /// Deepest refinement level; step size h = 2^{-level}/2.
    pub max_level: u32,
    /// Levels that must be completed before the convergence test is trusted.
    pub min_level: u32,
    /// Scale s of the map; `None` picks 1/decay_rate clamped to [1e-3, 1].
    pub scale: Option<f64>,
    /// Hard limit on |t|.
    pub t_max: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { max_level: 11, min_level: 3, scale: None, t_max: 6.5 }
    }
}

/// Outcome of an adaptive quadrature run.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Complex,
    /// Difference between the last two levels.
    pub error_estimate: f64,
    pub levels: u32,
    pub evaluations: usize,
}

/// ∫_0^∞ integrand(y) dy to absolute accuracy `ctx.quad_target()`.
pub fn quad_vertical_to_infinity<F>(integrand: F, decay_rate: f64, ctx: &PrecisionContext) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    quad_vertical_to_infinity_with(integrand, decay_rate, ctx, &QuadOptions::default()).map(|r| r.value)
}

pub fn quad_vertical_to_infinity_with<F>(
    mut integrand: F,
    decay_rate: f64,
    ctx: &PrecisionContext,
    opts: &QuadOptions,
) -> Result<QuadResult>
where
    F: FnMut(&Float) -> Complex,
{
    if !(decay_rate > 0.0) {
        return Err(Error::Domain(format!("decay rate must be positive, got {decay_rate}")));
    }
    let bits = ctx.bits();
    let scale = opts.scale.unwrap_or_else(|| (1.0 / decay_rate).clamp(1e-3, 1.0));
    let s = Float::with_val(bits, scale);
    let half_pi = ctx.pi() / 2u32;
    let tail_eps = ctx.quad_target() * 1e-4;
    // beyond this height the e^{-decay·y} envelope is far below the goal
    let y_far = (ctx.target_ln() + 30.0 * std::f64::consts::LN_10) / decay_rate;
    let mut evaluations = 0usize;

    // weighted integrand at node t: w(t) f(y(t))
    let mut node = |t: f64, evaluations: &mut usize| -> (Complex, f64) {
        let tf = Float::with_val(bits, t);
        let u = Float::with_val(bits, &half_pi * Float::with_val(bits, tf.sinh_ref()));
        let e = u.exp();
        let y = Float::with_val(bits, &s * &e);
        let dy = Float::with_val(bits, &y * &half_pi) * Float::with_val(bits, tf.cosh_ref());
        let yf = y.to_f64();
        *evaluations += 1;
        let v = integrand(&y) * dy;
        (v, yf)
    };

    let h0 = 0.5f64;
    // sum over nodes t = j·h, j ≡ offset (mod stride), both directions from the origin
    let mut sweep = |h: f64, first: i64, stride: i64, evaluations: &mut usize| -> Complex {
        let mut acc = Complex::new(bits);
        for dir in [1i64, -1] {
            let mut small = 0;
            let mut j = first;
            loop {
                if dir == -1 && j == 0 {
                    j += stride;
                    continue;
                }
                let t = dir as f64 * j as f64 * h;
                if t.abs() > opts.t_max {
                    break;
                }
                let (v, y) = node(t, evaluations);
                let mag = Float::with_val(bits, v.abs_ref()).to_f64();
                acc += &v;
                let past_bulk = if dir == 1 { y > y_far.min(1e300) || y > scale * 4.0 } else { y < scale / 4.0 };
                if mag < tail_eps && past_bulk {
                    small += 1;
                    if small >= 4 || (dir == 1 && y > y_far) {
                        break;
                    }
                } else {
                    small = 0;
                }
                j += stride;
            }
        }
        acc
    };

    let mut h = h0;
    let mut sum = sweep(h, 0, 1, &mut evaluations);
    let mut estimate = Complex::with_val(bits, &sum * h);
    let mut previous = estimate.clone();
    let mut level = 0;
    let mut diff = f64::INFINITY;
    while level < opts.max_level {
        level += 1;
        h /= 2.0;
        let fresh = sweep(h, 1, 2, &mut evaluations);
        sum += fresh;
        previous = std::mem::replace(&mut estimate, Complex::with_val(bits, &sum * h));
        diff = Float::with_val(bits, Complex::with_val(bits, &estimate - &previous).abs_ref()).to_f64();
        if level >= opts.min_level && diff <= ctx.quad_target() {
            return Ok(QuadResult { value: estimate, error_estimate: diff, levels: level, evaluations });
        }
    }
    let _ = diff;
    Err(Error::QuadratureNonConvergence {
        last: format!("{:.20e}", estimate),
        previous: format!("{:.20e}", previous),
    })
}

/// ∫_a^b integrand(x) dx by tanh-sinh quadrature to absolute accuracy `ctx.quad_target()`.
///
/// Nodes are formed as endpoint offsets δ = (b−a)/(e^{2u}+1), u = (π/2) sinh t,
/// so points near either end keep full relative accuracy.
pub fn quad_interval<F>(mut integrand: F, a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Complex>
where
    F: FnMut(&Float) -> Complex,
{
    let bits = ctx.bits();
    let half_pi = ctx.pi() / 2u32;
    let width = Float::with_val(bits, b - a);
    let tail_eps = ctx.quad_target() * 1e-4;
    let t_max = 4.5;
    let mut node = |t: f64| -> Complex {
        let tf = Float::with_val(bits, t.abs());
        let u = Float::with_val(bits, &half_pi * Float::with_val(bits, tf.sinh_ref()));
        let e2 = Float::with_val(bits, &u * 2u32).exp();
        let delta = Float::with_val(bits, &width / Float::with_val(bits, &e2 + 1u32));
        let x = if t >= 0.0 { Float::with_val(bits, b - &delta) } else { Float::with_val(bits, a + &delta) };
        // dx/dt = (b−a)/2 · (π/2) cosh t / cosh² u
        let ch = Float::with_val(bits, u.cosh_ref());
        let w = Float::with_val(bits, &width / 2u32) * &half_pi * Float::with_val(bits, tf.cosh_ref()) / ch.square();
        integrand(&x) * w
    };
    let mut sweep = |h: f64, first: i64, stride: i64| -> Complex {
        let mut acc = Complex::new(bits);
        for dir in [1i64, -1] {
            let mut small = 0;
            let mut j = first;
            loop {
                if dir == -1 && j == 0 {
                    j += stride;
                    continue;
                }
                let t = dir as f64 * j as f64 * h;
                if t.abs() > t_max {
                    break;
                }
                let v = node(t);
                let mag = Float::with_val(bits, v.abs_ref()).to_f64();
                acc += &v;
                if mag < tail_eps && t.abs() > 1.0 {
                    small += 1;
                    if small >= 4 {
                        break;
                    }
                } else {
                    small = 0;
                }
                j += stride;
            }
        }
        acc
    };
    let mut h = 0.5f64;
    let mut sum = sweep(h, 0, 1);
    let mut estimate = Complex::with_val(bits, &sum * h);
    let mut previous = estimate.clone();
    for level in 1..=11 {
        h /= 2.0;
        sum += sweep(h, 1, 2);
        previous = std::mem::replace(&mut estimate, Complex::with_val(bits, &sum * h));
        let diff = Float::with_val(bits, Complex::with_val(bits, &estimate - &previous).abs_ref()).to_f64();
        if level >= 3 && diff <= ctx.quad_target() {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNonConvergence {
        last: format!("{:.20e}", estimate),
        previous: format!("{:.20e}", previous),
    })
}
