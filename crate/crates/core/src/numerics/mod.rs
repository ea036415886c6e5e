//! Precision-parameterized scalar kernels.

mod bernoulli;
mod fit;
mod gamma;
mod precision;
mod quad;

pub use bernoulli::{bernoulli_number, bernoulli_poly, bernoulli_poly_capped, DEFAULT_BERNOULLI_CAP};
pub use fit::{fit_power_series, geometric_grid, geometric_grid_with_ratio, PowerSeriesFit};
pub use gamma::{incomplete_gamma_upper, scaled_gamma, scaled_gamma_half, GammaOrder};
pub use precision::{
    abs_f64, exp_two_pi_i, pow_with_arg, principal_arg, principal_pow, real_pow_from_below, PrecisionContext,
    DEFAULT_DIGITS, DEFAULT_TRUNC_MARGIN, GUARD_DIGITS, MIN_DIGITS,
};
pub use quad::{quad_interval, quad_vertical_to_infinity, quad_vertical_to_infinity_with, QuadOptions, QuadResult};

/// Smallest N* with π·y·N*²/M > (digits + margin)·ln 10.
pub fn truncation_bound(y: f64, modulus: u32, ctx: &PrecisionContext) -> u64 {
    assert!(y > 0.0, "truncation_bound needs y > 0");
    let n = (ctx.target_ln() * modulus as f64 / (std::f64::consts::PI * y)).sqrt();
    (n.floor() as u64).saturating_add(1)
}
