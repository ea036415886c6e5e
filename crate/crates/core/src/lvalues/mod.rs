//! L-values of periodic coefficient functions at nonpositive integers, and
//! radial limits of θ_f and Θ_f at rationals.

use std::sync::Arc;

use rug::{Complex, Integer, Rational};

use crate::cyclo::{Cyclo, CyclotomicField};
use crate::error::{Error, Result};
use crate::modgroup::RationalCusp;
use crate::numerics::{bernoulli_poly, PrecisionContext};
use crate::periodic::{Parity, PeriodicCoeffs};

/// A periodic C: ℤ → ℚ(ζ_n); each value is a sparse sum Σ r_j ζ^{e_j}.
#[derive(Clone, Debug)]
pub struct PeriodicFunction {
    period: u64,
    field: Arc<CyclotomicField>,
    /// values[j] = C(j) for 0 ≤ j < P.
    values: Vec<Vec<(Rational, u32)>>,
    mean_is_zero: bool,
}

impl PeriodicFunction {
    pub fn new(field: Arc<CyclotomicField>, values: Vec<Vec<(Rational, u32)>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("periodic function needs period >= 1".into()));
        }
        let mut out = Self { period: values.len() as u64, field, values, mean_is_zero: false };
        out.mean_is_zero = out.sum_of_values().is_zero();
        Ok(out)
    }

    /// A rational-valued function C(0), …, C(P−1).
    pub fn from_rationals(values: Vec<Rational>) -> Result<Self> {
        let field = CyclotomicField::new(1);
        Self::new(field, values.into_iter().map(|v| if v.is_zero() { vec![] } else { vec![(v, 0)] }).collect())
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn value(&self, n: i64) -> Cyclo {
        let terms = &self.values[n.rem_euclid(self.period as i64) as usize];
        self.collect(terms.iter().map(|(r, e)| (r.clone(), *e)))
    }

    fn collect(&self, terms: impl Iterator<Item = (Rational, u32)>) -> Cyclo {
        let mut v = vec![Rational::new(); self.field.order() as usize];
        for (r, e) in terms {
            v[e as usize] += r;
        }
        self.field.reduce(v)
    }

    fn sum_of_values(&self) -> Cyclo {
        self.collect(self.values.iter().flatten().cloned())
    }

    /// (1/P) Σ C(j).
    pub fn mean(&self) -> Cyclo {
        self.sum_of_values().scale(&Rational::from((1, self.period)))
    }

    pub fn has_mean_zero(&self) -> bool {
        self.mean_is_zero
    }

    /// −P^n/(n+1) Σ_{a=1}^{P} C(a) B_{n+1}(a/P), without the mean-zero check.
    pub fn bernoulli_sum(&self, n: u32) -> Result<Cyclo> {
        let p = self.period;
        let mut terms = Vec::new();
        for a in 1..=p {
            let cell = &self.values[(a % p) as usize];
            if cell.is_empty() {
                continue;
            }
            let b = bernoulli_poly(n + 1, &Rational::from((a, p)))?;
            for (r, e) in cell {
                terms.push((Rational::from(r * &b), *e));
            }
        }
        let s = self.collect(terms.into_iter());
        let factor = -Rational::from(Integer::from(Integer::u_pow_u(p as u32, n))) / (n + 1);
        Ok(s.scale(&factor))
    }
}

/// L(−n, C) for mean-zero C.
pub fn l_at_negative_int(c: &PeriodicFunction, n: u32) -> Result<Cyclo> {
    if !c.has_mean_zero() {
        return Err(Error::DivergentAtCusp("L(-n, C) needs a mean-zero C".into()));
    }
    c.bernoulli_sum(n)
}

/// C_α(n) = f(n) e^{πi p n²/(Mq)}, of period Mq (p even, including p = 0) or 2Mq (p odd).
pub fn build_c(f: &PeriodicCoeffs, alpha: &RationalCusp) -> Result<PeriodicFunction> {
    if alpha.is_infinity() {
        return Err(Error::Domain("C_α needs a finite rational α".into()));
    }
    let m = f.modulus() as u64;
    let (p, q) = (alpha.p(), alpha.q());
    let base = 2 * m * q;
    let period = if p % 2 == 0 { m * q } else { 2 * m * q };
    let order = if f.is_real() { base } else { base / gcd(base, 4) * 4 };
    let lift = order / base;
    let field = CyclotomicField::new(u32::try_from(order).map_err(|_| Error::Domain("field order overflow".into()))?);
    let quarter = order / 4;
    let mut values = Vec::with_capacity(period as usize);
    for n in 0..period {
        let v = f.value(n as i64);
        if v.is_zero() {
            values.push(vec![]);
            continue;
        }
        let e = ((p as i128 * (n * n) as i128).rem_euclid(base as i128) as u64 * lift) as u32;
        let mut cell = Vec::new();
        if !v.re.is_zero() {
            cell.push((v.re.clone(), e));
        }
        if !v.im.is_zero() {
            cell.push((v.im.clone(), ((e as u64 + quarter) % order) as u32));
        }
        values.push(cell);
    }
    PeriodicFunction::new(field, values)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coefficients c_0..c_R of an expansion in t at a rational base point.
#[derive(Clone, Debug)]
pub struct AsymptoticSeries {
    pub base: RationalCusp,
    /// Name of the expansion variable.
    pub scale: String,
    pub coeffs: Vec<Complex>,
    /// Fit or truncation error estimate; 0 for exact coefficients.
    pub residual: f64,
}

/// Weight of the radial value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Half,
    ThreeHalves,
}

impl std::str::FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/2" | "0.5" | "half" => Ok(Weight::Half),
            "3/2" | "1.5" => Ok(Weight::ThreeHalves),
            _ => Err(Error::Parse(format!("weight must be 1/2 or 3/2, got '{s}'"))),
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weight::Half => "1/2",
            Weight::ThreeHalves => "3/2",
        })
    }
}

/// L(−2r, C_α)·(sign/(2M))^r/r! for r ≤ R, exactly.
fn expansion_exact(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize, sign: i64) -> Result<Vec<Cyclo>> {
    if f.parity() != Parity::Odd {
        return Err(Error::Domain("expansions at rationals are stated for odd f".into()));
    }
    let c = build_c(f, alpha)?;
    let m2 = 2 * f.modulus() as i64;
    let mut weight = Rational::from(1);
    let mut out = Vec::with_capacity(order + 1);
    for r in 0..=order {
        if r > 0 {
            weight *= Rational::from((sign, m2 * r as i64));
        }
        out.push(l_at_negative_int(&c, 2 * r as u32)?.scale(&weight));
    }
    Ok(out)
}

fn to_series(alpha: &RationalCusp, exact: Vec<Cyclo>, ctx: &PrecisionContext) -> AsymptoticSeries {
    AsymptoticSeries {
        base: *alpha,
        scale: "t".into(),
        coeffs: exact.iter().map(|c| c.to_complex(ctx.bits())).collect(),
        residual: 0.0,
    }
}

/// Exact coefficients of θ_f(α + it/2π) ~ Σ c_r t^r.
pub fn theta_expansion_exact(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize) -> Result<Vec<Cyclo>> {
    expansion_exact(f, alpha, order, -1)
}

/// Exact coefficients of Θ̂_f(α − it/2π) ~ Σ c_r t^r.
pub fn hat_expansion_exact(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize) -> Result<Vec<Cyclo>> {
    expansion_exact(f, alpha, order, 1)
}

pub fn theta_expansion(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize, ctx: &PrecisionContext) -> Result<AsymptoticSeries> {
    Ok(to_series(alpha, theta_expansion_exact(f, alpha, order)?, ctx))
}

pub fn hat_expansion(f: &PeriodicCoeffs, alpha: &RationalCusp, order: usize, ctx: &PrecisionContext) -> Result<AsymptoticSeries> {
    Ok(to_series(alpha, hat_expansion_exact(f, alpha, order)?, ctx))
}

/// Exact radial value: L(0, C_α) for weight 1/2 (odd f), L(−1, C_α) for weight 3/2 (even f).
///
/// At α = i∞ both series vanish, so the value is 0.
pub fn radial_value_exact(f: &PeriodicCoeffs, weight: Weight, alpha: &RationalCusp) -> Result<Cyclo> {
    let (need, n) = match weight {
        Weight::Half => (Parity::Odd, 0),
        Weight::ThreeHalves => (Parity::Even, 1),
    };
    if f.parity() != need {
        return Err(Error::Domain(format!("weight {weight} radial values need {need} f")));
    }
    if alpha.is_infinity() {
        return Ok(CyclotomicField::new(1).zero());
    }
    let c = build_c(f, alpha)?;
    if !c.has_mean_zero() {
        return Err(Error::DivergentAtCusp(alpha.to_string()));
    }
    c.bernoulli_sum(n)
}

pub fn radial_value(f: &PeriodicCoeffs, weight: Weight, alpha: &RationalCusp, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(radial_value_exact(f, weight, alpha)?.to_complex(ctx.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{char_chi12, char_false_theta, char_psi};

    fn cusp(s: &str) -> RationalCusp {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn chi12_values() {
        let c = build_c(&char_chi12(), &cusp("0")).unwrap();
        assert_eq!(c.period(), 12);
        assert!(c.has_mean_zero());
        assert_eq!(l_at_negative_int(&c, 1).unwrap().as_rational(), Some(q(-2, 1)));
        assert!(l_at_negative_int(&c, 0).unwrap().is_zero());
    }

    #[test]
    fn false_theta_values() {
        let f = char_false_theta(1, 3).unwrap();
        let c = build_c(&f, &cusp("0")).unwrap();
        // −Σ C(a) B_1(a/3) = −(B_1(1/3) − B_1(2/3)) = 1/3
        assert_eq!(l_at_negative_int(&c, 0).unwrap().as_rational(), Some(q(1, 3)));
        let c = build_c(&f, &cusp("1/2")).unwrap();
        assert_eq!(c.period(), 12);
        assert!(c.has_mean_zero());
    }

    #[test]
    fn abel_limit_oracle() {
        // Σ C(n) e^{−nt} = Σ_{a=1}^{P} C(a) e^{−at}/(1 − e^{−Pt}), extrapolated to t = 0
        let f = char_false_theta(1, 3).unwrap();
        let ctx = PrecisionContext::default();
        let bits = ctx.bits();
        for alpha in ["0", "1/2", "2/5"] {
            let c = build_c(&f, &cusp(alpha)).unwrap();
            let vals: Vec<Complex> = (1..=c.period()).map(|a| c.value(a as i64).to_complex(bits)).collect();
            let abel = |t: f64| -> Complex {
                let t = rug::Float::with_val(bits, t);
                let mut s = Complex::new(bits);
                for (k, v) in vals.iter().enumerate() {
                    s += Complex::with_val(bits, v * (-rug::Float::with_val(bits, &t * (k as u32 + 1))).exp());
                }
                let den = 1u32 - (-rug::Float::with_val(bits, &t * c.period() as u32)).exp();
                s / den
            };
            let grid = crate::numerics::geometric_grid(1e-3, 10, &ctx);
            let samples: Vec<_> = grid.iter().map(|t| (t.clone(), abel(t.to_f64()))).collect();
            let fit = crate::numerics::fit_power_series(&samples, 1, &ctx).unwrap();
            let exact = radial_value(&f, Weight::Half, &cusp(alpha), &ctx).unwrap();
            let d = crate::numerics::abs_f64(&Complex::with_val(bits, &fit.coeffs[0] - &exact));
            assert!(d < 1e-12, "α={alpha}: {d:e}");
        }
    }

    #[test]
    fn rational_period_independence() {
        let f = char_chi12();
        let c = build_c(&f, &cusp("0")).unwrap();
        let base: Vec<Rational> = (0..12).map(|n| c.value(n).as_rational().unwrap()).collect();
        let doubled = PeriodicFunction::from_rationals(base.iter().chain(base.iter()).cloned().collect()).unwrap();
        for n in 0..6 {
            assert_eq!(c.bernoulli_sum(n).unwrap().as_rational(), doubled.bernoulli_sum(n).unwrap().as_rational());
        }
    }

    #[test]
    fn radial_values() {
        let ctx = PrecisionContext::default();
        let v = radial_value_exact(&char_chi12(), Weight::ThreeHalves, &cusp("0")).unwrap();
        assert_eq!(v.as_rational(), Some(q(-2, 1)));
        assert!(matches!(
            radial_value(&char_psi(), Weight::ThreeHalves, &cusp("0"), &ctx),
            Err(Error::DivergentAtCusp(_))
        ));
        assert!(radial_value(&char_psi(), Weight::ThreeHalves, &cusp("1/4"), &ctx).is_ok());
        assert!(radial_value(&char_chi12(), Weight::Half, &cusp("0"), &ctx).is_err());
    }

    #[test]
    fn expansion_weights() {
        let f = char_false_theta(1, 3).unwrap();
        let a = theta_expansion_exact(&f, &cusp("0"), 2).unwrap();
        let b = hat_expansion_exact(&f, &cusp("0"), 2).unwrap();
        assert_eq!(a[0], b[0]);
        assert_eq!(a[1], -&b[1]);
        assert_eq!(a[2], b[2]);
        let c = build_c(&f, &cusp("0")).unwrap();
        let l2 = l_at_negative_int(&c, 2).unwrap();
        assert_eq!(a[1], l2.scale(&q(-1, 6)));
    }

    #[test]
    fn gaussian_rational_coefficients() {
        use crate::periodic::{make_periodic, GaussRat};
        let i = GaussRat::new(Rational::new(), Rational::from(1));
        let mut v = vec![GaussRat::zero(); 3];
        v[1] = i.clone();
        v[2] = -&i;
        let f = make_periodic(3, v, 1, Parity::Odd).unwrap();
        let c = build_c(&f, &cusp("1/2")).unwrap();
        assert_eq!(c.field().order() % 4, 0);
        let real = build_c(&char_false_theta(1, 3).unwrap(), &cusp("1/2")).unwrap();
        let ctx = PrecisionContext::default();
        let a = l_at_negative_int(&c, 0).unwrap().to_complex(ctx.bits());
        let b = l_at_negative_int(&real, 0).unwrap().to_complex(ctx.bits()) * Complex::with_val(ctx.bits(), (0, 1));
        assert!(crate::numerics::abs_f64(&(a - b)) < 1e-45);
    }
}
