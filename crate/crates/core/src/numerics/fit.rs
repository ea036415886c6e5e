//! Least-squares power-series fits h(t) ≈ Σ c_r t^r on geometric grids.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::PrecisionContext;
use crate::error::{Error, Result};

/// Result of [`fit_power_series`].
#[derive(Clone, Debug)]
pub struct PowerSeriesFit {
    /// c_0..c_R
    pub coeffs: Vec<Complex>,
    /// Change in c_0..c_R between the two highest internal degrees, or the
    /// rms misfit when only one degree is available.
    pub residual: f64,
    pub condition: f64,
    pub grid: Vec<Float>,
    pub order: usize,
    /// Degree of the polynomial actually fitted (≥ order).
    pub degree: usize,
}

/// t_0·2^{−k}, k = 0..count.
pub fn geometric_grid(t0: f64, count: usize, ctx: &PrecisionContext) -> Vec<Float> {
    (0..count)
        .map(|k| Float::with_val(ctx.bits(), t0) >> (k as i32))
        .collect()
}

/// t_0·ρ^{−k}, k = 0..count, for a ratio ρ > 1.
pub fn geometric_grid_with_ratio(t0: f64, count: usize, ratio: f64, ctx: &PrecisionContext) -> Vec<Float> {
    let bits = ctx.bits();
    let r = Float::with_val(bits, ratio);
    (0..count)
        .map(|k| Float::with_val(bits, t0) / Float::with_val(bits, (&r).pow(k as u32)))
        .collect()
}

/// Fits c_0..c_R from samples on a decreasing geometric grid.
///
/// The polynomial is fitted internally at degree n−2 (n samples) so that the
/// truncation of the true series does not leak into the low coefficients.
pub fn fit_power_series(samples: &[(Float, Complex)], order: usize, ctx: &PrecisionContext) -> Result<PowerSeriesFit> {
    let n = samples.len();
    if n < 2 * (order + 1) {
        return Err(Error::Domain(format!("{n} samples cannot fit order {order}")));
    }
    check_grid(samples)?;
    let degree = (n - 2).max(order);
    let high = solve(samples, degree, ctx)?;
    let threshold = 10f64.powi(ctx.digits() as i32 - 10);
    if high.condition > threshold {
        return Err(Error::IllConditioned(high.condition));
    }
    let residual = if degree > order {
        let low = solve(samples, degree - 1, ctx)?;
        (0..=order)
            .map(|r| {
                let d = Complex::with_val(ctx.bits(), &high.coeffs[r] - &low.coeffs[r]);
                Float::with_val(ctx.bits(), d.abs_ref()).to_f64()
            })
            .fold(0.0, f64::max)
    } else {
        high.rms
    };
    Ok(PowerSeriesFit {
        coeffs: high.coeffs[..=order].to_vec(),
        residual,
        condition: high.condition,
        grid: samples.iter().map(|(t, _)| t.clone()).collect(),
        order,
        degree,
    })
}

fn check_grid(samples: &[(Float, Complex)]) -> Result<()> {
    let ts: Vec<f64> = samples.iter().map(|(t, _)| t.to_f64()).collect();
    if ts.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Domain("fit grid must be positive".into()));
    }
    let ratio = ts[1] / ts[0];
    for w in ts.windows(2) {
        let r = w[1] / w[0];
        if !(r < 1.0) || ((r - ratio) / ratio).abs() > 1e-9 {
            return Err(Error::Domain("fit grid must be decreasing and geometric".into()));
        }
    }
    Ok(())
}

struct Solved {
    coeffs: Vec<Complex>,
    condition: f64,
    rms: f64,
}

/// Householder QR on the column-scaled Vandermonde matrix; the two right-hand
/// sides (real and imaginary parts) ride along as extra columns.
fn solve(samples: &[(Float, Complex)], degree: usize, ctx: &PrecisionContext) -> Result<Solved> {
    let bits = ctx.bits() + 32;
    let n = samples.len();
    let cols = degree + 1;
    let tmax = Float::with_val(bits, &samples[0].0);
    let us: Vec<Float> = samples.iter().map(|(t, _)| Float::with_val(bits, t / &tmax)).collect();
    let mut m: Vec<Vec<Float>> = Vec::with_capacity(cols + 2);
    let mut power: Vec<Float> = vec![Float::with_val(bits, 1); n];
    for _ in 0..cols {
        m.push(power.clone());
        for (p, u) in power.iter_mut().zip(&us) {
            *p *= u;
        }
    }
    m.push(samples.iter().map(|(_, h)| Float::with_val(bits, h.real())).collect());
    m.push(samples.iter().map(|(_, h)| Float::with_val(bits, h.imag())).collect());

    for k in 0..cols {
        let mut norm = Float::new(bits);
        for x in &m[k][k..] {
            norm += Float::with_val(bits, x.square_ref());
        }
        let norm = norm.sqrt();
        if norm.is_zero() {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        let alpha = if m[k][k] > 0 { -norm } else { norm };
        let mut v: Vec<Float> = m[k][k..].to_vec();
        v[0] -= &alpha;
        let mut vv = Float::new(bits);
        for x in &v {
            vv += Float::with_val(bits, x.square_ref());
        }
        if vv.is_zero() {
            continue;
        }
        for col in m.iter_mut().skip(k) {
            let mut dot = Float::new(bits);
            for (vi, x) in v.iter().zip(&col[k..]) {
                dot += Float::with_val(bits, vi * x);
            }
            let f = dot * 2u32 / &vv;
            for (vi, x) in v.iter().zip(col[k..].iter_mut()) {
                *x -= Float::with_val(bits, vi * &f);
            }
        }
    }

    let diag: Vec<f64> = (0..cols).map(|k| m[k][k].to_f64().abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if dmin > 0.0 { dmax / dmin } else { f64::INFINITY };

    let mut rms = 0.0;
    for i in cols..n {
        rms += m[cols][i].to_f64().powi(2) + m[cols + 1][i].to_f64().powi(2);
    }
    let rms = (rms / n as f64).sqrt();

    let back = |b: &[Float]| -> Vec<Float> {
        let mut x = vec![Float::new(bits); cols];
        for k in (0..cols).rev() {
            let mut s = b[k].clone();
            for j in k + 1..cols {
                s -= Float::with_val(bits, &m[j][k] * &x[j]);
            }
            x[k] = s / &m[k][k];
        }
        x
    };
    let xr = back(&m[cols]);
    let xi = back(&m[cols + 1]);
    let mut coeffs = Vec::with_capacity(cols);
    let mut scale = Float::with_val(bits, 1);
    for k in 0..cols {
        let re = Float::with_val(bits, &xr[k] / &scale);
        let im = Float::with_val(bits, &xi[k] / &scale);
        coeffs.push(Complex::with_val(ctx.bits(), (re, im)));
        scale *= &tmax;
    }
    Ok(Solved { coeffs, condition, rms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_digits(50).unwrap()
    }

    fn sample(f: impl Fn(&Float) -> Complex, grid: &[Float]) -> Vec<(Float, Complex)> {
        grid.iter().map(|t| (t.clone(), f(t))).collect()
    }

    fn near(z: &Complex, re: f64, tol: f64) -> bool {
        (z.real().to_f64() - re).abs() < tol && z.imag().to_f64().abs() < tol
    }

    #[test]
    fn constant() {
        let c = ctx();
        let grid = geometric_grid(0.1, 8, &c);
        let fit = fit_power_series(&sample(|_| c.complex(5), &grid), 2, &c).unwrap();
        assert!(near(&fit.coeffs[0], 5.0, 1e-30));
        assert!(near(&fit.coeffs[1], 0.0, 1e-25));
        assert!(near(&fit.coeffs[2], 0.0, 1e-20));
    }

    #[test]
    fn zero() {
        let c = ctx();
        let grid = geometric_grid(0.1, 6, &c);
        let fit = fit_power_series(&sample(|_| c.complex(0), &grid), 2, &c).unwrap();
        assert!(fit.coeffs.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn exponential_taylor() {
        let c = ctx();
        let grid = geometric_grid(0.1, 12, &c);
        let fit = fit_power_series(&sample(|t| c.complex(Float::with_val(c.bits(), -t).exp()), &grid), 2, &c).unwrap();
        assert!(near(&fit.coeffs[0], 1.0, 1e-6));
        assert!(near(&fit.coeffs[1], -1.0, 1e-6));
        assert!(near(&fit.coeffs[2], 0.5, 1e-6));
        assert!(fit.residual < 1e-6);
        assert_eq!(fit.grid.len(), 12);
        assert_eq!(fit.order, 2);
    }

    #[test]
    fn rejects_short_or_irregular_grids() {
        let c = ctx();
        let grid = geometric_grid(0.1, 5, &c);
        assert!(fit_power_series(&sample(|_| c.complex(1), &grid), 2, &c).is_err());
        let mut bad = sample(|_| c.complex(1), &geometric_grid(0.1, 8, &c));
        bad.swap(2, 3);
        assert!(fit_power_series(&bad, 2, &c).is_err());
    }

    #[test]
    fn flags_ill_conditioning() {
        let c = PrecisionContext::with_digits(15).unwrap();
        let grid = geometric_grid(0.1, 30, &c);
        let r = fit_power_series(&sample(|t| c.complex(t), &grid), 2, &c);
        assert!(matches!(r, Err(Error::IllConditioned(_))));
    }
}
