//! Verification suites: grids from the defaults file, parallel execution
//! with input-ordered output, and exit codes.

mod config;

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde_json::{json, Value};

use crate::lvalues::{build_c, radial_value, Weight};
use crate::modgroup::{cusp_equivalent, in_gamma_m, random_gamma_m, MoebiusMap, RationalCusp};
use crate::numerics::{abs_f64, PrecisionContext};
use crate::periodic::{char_chi12, parse_builder, Parity, PeriodicCoeffs};
use crate::qknots::{self, ExactBackend, RootOfUnity, StrangeSide};
use crate::qmf::{self, FitPlan, LowerArg};
use crate::report::VerificationRecord;
use crate::theta::{self, format_complex, ThetaEvaluator, UpperHalfPoint};
use crate::{Error, Result};

pub use config::{SuiteConfig, DEFAULTS_TOML};

/// Suites known to `run_suite`.
pub const SUITES: &[&str] =
    &["transforms", "product", "decay", "lvalues", "agreement", "qmf32", "qmf12", "cross", "strange", "knots", "cusps"];

/// Run-time knobs outside the grid definitions.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Parallel workers; 0 means one per core.
    pub jobs: usize,
    /// Replaces every record tolerance.
    pub tolerance: Option<f64>,
}

type Job = Box<dyn Fn(&PrecisionContext) -> Result<VerificationRecord> + Send + Sync>;

struct Item {
    suite: &'static str,
    inputs: Value,
    tolerance: f64,
    job: Job,
}

impl Item {
    fn new(
        suite: &'static str,
        inputs: Value,
        tolerance: f64,
        job: impl Fn(&PrecisionContext) -> Result<VerificationRecord> + Send + Sync + 'static,
    ) -> Self {
        Self { suite, inputs, tolerance, job: Box::new(job) }
    }

    fn run(&self, ctx: &PrecisionContext) -> VerificationRecord {
        let start = Instant::now();
        let rec = match (self.job)(ctx) {
            Ok(r) => r,
            Err(e) => VerificationRecord::failure(self.suite, self.inputs.clone(), e.to_string(), self.tolerance),
        };
        rec.with_runtime(start.elapsed().as_millis() as u64)
    }
}

/// 0 when every record passes, 1 otherwise.
pub fn exit_code(records: &[VerificationRecord]) -> i32 {
    if records.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

/// Runs a named suite. Configuration problems are reported before any work starts.
pub fn run_suite(name: &str, config: &SuiteConfig, opts: &SuiteOptions, ctx: &PrecisionContext) -> Result<Vec<VerificationRecord>> {
    let items = plan(name, config, ctx)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records: Vec<VerificationRecord> = pool.install(|| items.par_iter().map(|it| it.run(ctx)).collect());
    Ok(match opts.tolerance {
        Some(t) => records.into_iter().map(|r| r.with_tolerance(t)).collect(),
        None => records,
    })
}

fn plan(name: &str, c: &SuiteConfig, ctx: &PrecisionContext) -> Result<Vec<Item>> {
    match name {
        "transforms" => plan_transforms(c),
        "product" => plan_product(c),
        "decay" => plan_decay(c),
        "lvalues" => plan_lvalues(c),
        "agreement" => plan_agreement(c),
        "qmf32" => plan_qmf32(c, ctx),
        "qmf12" => plan_qmf12(c, ctx),
        "cross" => plan_cross(c, ctx),
        "strange" => plan_strange(c),
        "knots" => plan_knots(c),
        "cusps" => plan_cusps(c),
        _ => Err(Error::Config(format!("unknown suite {name}; known: {}", SUITES.join(", ")))),
    }
}

fn builder(spec: &str) -> Result<Arc<PeriodicCoeffs>> {
    parse_builder(spec).map(Arc::new).map_err(|e| Error::Config(format!("builder {spec}: {e}")))
}

fn cusp(s: &str) -> Result<RationalCusp> {
    s.parse().map_err(|e: Error| Error::Config(e.to_string()))
}

fn matrix(s: &str) -> Result<MoebiusMap> {
    s.parse().map_err(|e: Error| Error::Config(e.to_string()))
}

fn record(suite: &str, inputs: Value, lhs: &Complex, rhs: &Complex, tol: f64, ctx: &PrecisionContext) -> VerificationRecord {
    let residual = abs_f64(&Complex::with_val(ctx.bits(), lhs - rhs));
    VerificationRecord::new(suite, inputs, lhs, rhs, residual, tol, ctx.digits())
}

/// Point with x uniform in [−½, ½) and y log-uniform in the range.
fn random_point(rng: &mut ChaCha8Rng, range: [f64; 2]) -> (f64, f64) {
    let x = rng.random::<f64>() - 0.5;
    let y = range[0] * (range[1] / range[0]).powf(rng.random::<f64>());
    (x, y)
}

fn upper(x: f64, y: f64, ctx: &PrecisionContext) -> Result<UpperHalfPoint> {
    UpperHalfPoint::from_parts(ctx.float(x), ctx.float(y))
}

fn plan_transforms(c: &SuiteConfig) -> Result<Vec<Item>> {
    let t = &c.transforms;
    let mut items = Vec::new();
    for (bi, spec) in t.builders.iter().enumerate() {
        let f = builder(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(t.seed.wrapping_add(bi as u64));
        let mut seen = std::collections::HashSet::new();
        for gi in 0..t.gammas {
            let g = loop {
                let g = random_gamma_m(f.modulus(), t.entry_bound, gi < t.negative_d, &mut rng);
                if seen.insert(g.to_string()) {
                    break g;
                }
            };
            for _ in 0..t.points {
                let (x, y) = random_point(&mut rng, t.y_range);
                let inputs = json!({"f": spec, "gamma": g.to_string(), "x": x, "y": y});
                let f = f.clone();
                let tol = t.tolerance;
                items.push(Item::new("transforms", inputs.clone(), tol, move |ctx| {
                    let z = upper(x, y, ctx)?;
                    let ev = ThetaEvaluator::new(&f, ctx);
                    let gz = g.apply_complex(z.z())?;
                    let (lhs, rhs) = match f.parity() {
                        Parity::Even => (ev.theta(&gz), ev.automorphy(&g, z.z(), 0.5)? * ev.theta(z.z())),
                        Parity::Odd => (ev.big_theta(&gz), ev.automorphy(&g, z.z(), 1.5)? * ev.big_theta(z.z())),
                    };
                    Ok(record("transforms", inputs.clone(), &lhs, &Complex::with_val(ctx.bits(), rhs), tol, ctx))
                }));
            }
        }
    }
    Ok(items)
}

fn plan_product(c: &SuiteConfig) -> Result<Vec<Item>> {
    let p = &c.product;
    let mut items = Vec::new();
    for (bi, spec) in p.builders.iter().enumerate() {
        let f = builder(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_add(bi as u64));
        for _ in 0..p.points {
            let (x, y) = random_point(&mut rng, p.y_range);
            let inputs = json!({"f": spec, "x": x, "y": y});
            let f = f.clone();
            let tol = p.tolerance;
            items.push(Item::new("product", inputs.clone(), tol, move |ctx| {
                let z = upper(x, y, ctx)?;
                let series = ThetaEvaluator::new(&f, ctx).theta(z.z());
                let product = theta::product_form(&f, &z, ctx)?;
                Ok(record("product", inputs.clone(), &series, &product, tol, ctx))
            }));
        }
    }
    Ok(items)
}

fn plan_decay(c: &SuiteConfig) -> Result<Vec<Item>> {
    let d = &c.decay;
    let f = builder(&d.builder)?;
    let mut items = Vec::new();
    for &y in &d.heights {
        let inputs = json!({"f": d.builder, "alpha": "0", "y": y});
        let f = f.clone();
        let tol = d.tolerance;
        items.push(Item::new("decay", inputs.clone(), tol, move |ctx| {
            let m = f.modulus() as f64;
            let z = upper(0.0, y, ctx)?;
            let th = theta::theta_f(&f, &z, ctx);
            let my = ctx.float(m * y);
            let scale = Float::with_val(ctx.bits(), my.sqrt_ref()) * (ctx.pi() / &my).exp();
            let lhs = th * scale;
            let rhs = f.c_f_constant(ctx)?;
            Ok(record("decay", inputs.clone(), &lhs, &rhs, tol, ctx))
        }));
    }
    for a in &d.dual_cusps {
        let alpha = cusp(a)?;
        let y = d.dual_height;
        let inputs = json!({"f": d.builder, "alpha": a, "y": y, "route": "dual"});
        let f = f.clone();
        let tol = d.dual_tolerance;
        items.push(Item::new("decay", inputs.clone(), tol, move |ctx| {
            let cmp = theta::decay_at_rational(&f, &alpha, &ctx.float(y), ctx)?;
            Ok(record("decay", inputs.clone(), &cmp.dual, &cmp.direct, tol, ctx))
        }));
    }
    Ok(items)
}

fn plan_lvalues(c: &SuiteConfig) -> Result<Vec<Item>> {
    let l = &c.lvalues;
    let mut items = Vec::new();
    let inputs = json!({"f": "chi12", "alpha": "0", "n": 1});
    items.push(Item::new("lvalues", inputs.clone(), 0.0, move |_| {
        let v = build_c(&char_chi12(), &RationalCusp::integer(0))?.bernoulli_sum(1)?;
        let exact = v.as_rational().ok_or_else(|| Error::Domain("L(-1, chi12) is not rational".into()))?;
        let expect = Rational::from(-2);
        let residual = if exact == expect { 0.0 } else { f64::INFINITY };
        Ok(VerificationRecord::from_strings("lvalues", inputs.clone(), exact.to_string(), expect.to_string(), residual, 0.0))
    }));
    for spec in &l.builders {
        let f = builder(spec)?;
        for a in &l.cusps {
            let alpha = cusp(a)?;
            let max_n = l.max_n;
            let inputs = json!({"f": spec, "alpha": a, "max_n": max_n, "check": "parity vanishing"});
            let f = f.clone();
            items.push(Item::new("lvalues", inputs.clone(), 0.0, move |_| {
                let cfun = build_c(&f, &alpha)?;
                let mut bad = Vec::new();
                for n in 0..=max_n {
                    let vanishes = match f.parity() {
                        Parity::Even => n % 2 == 0,
                        Parity::Odd => n % 2 == 1,
                    };
                    if vanishes && !cfun.bernoulli_sum(n)?.is_zero() {
                        bad.push(n);
                    }
                }
                let residual = if bad.is_empty() { 0.0 } else { f64::INFINITY };
                Ok(VerificationRecord::from_strings("lvalues", inputs.clone(), format!("nonzero at {bad:?}"), "[]".into(), residual, 0.0))
            }));
        }
    }
    Ok(items)
}

fn plan_agreement(c: &SuiteConfig) -> Result<Vec<Item>> {
    let a = &c.agreement;
    let plan = FitPlan { t0: a.fit_t0, samples: a.fit_samples, ratio: a.fit_ratio };
    let mut items = Vec::new();
    for spec in &a.builders {
        let f = builder(spec)?;
        for s in &a.cusps {
            let alpha = cusp(s)?;
            let inputs = json!({"f": spec, "alpha": s, "order": a.order});
            let (f, plan, order, tol) = (f.clone(), plan.clone(), a.order, a.tolerance);
            items.push(Item::new("agreement", inputs, tol, move |ctx| qmf::infinite_order_agreement(&f, &alpha, order, tol, &plan, ctx)));
        }
    }
    Ok(items)
}

fn relaxed(ctx: &PrecisionContext, target: f64) -> Result<PrecisionContext> {
    ctx.with_quad_target(target.max(ctx.quad_target()))
}

fn plan_qmf32(c: &SuiteConfig, ctx: &PrecisionContext) -> Result<Vec<Item>> {
    let q = &c.qmf32;
    let qctx = relaxed(ctx, q.quad_target)?;
    let mut items = Vec::new();
    for case in &q.cases {
        let f = builder(&case.builder)?;
        for gs in &case.gammas {
            let g = matrix(gs)?;
            if !in_gamma_m(f.modulus(), &g) {
                return Err(Error::Config(format!("{gs} is not in Γ_{}", f.modulus())));
            }
            for p in &case.points {
                let alpha = cusp(p)?;
                let inputs = json!({"f": case.builder, "gamma": gs, "alpha": p});
                let (f, tol, qctx) = (f.clone(), q.tolerance, qctx.clone());
                items.push(Item::new("qmf32", inputs, tol, move |_| qmf::qmf_residual_32(&f, &g, &alpha, tol, &qctx)));
            }
        }
    }
    Ok(items)
}

fn plan_qmf12(c: &SuiteConfig, ctx: &PrecisionContext) -> Result<Vec<Item>> {
    let q = &c.qmf12;
    let qctx = relaxed(ctx, q.quad_target)?;
    let mut items = Vec::new();
    for case in &q.cases {
        let f = builder(&case.builder)?;
        let args: Vec<(String, LowerArg)> =
            case.points.iter().map(|p| LowerArg::parse(p, ctx.bits()).map(|a| (p.clone(), a))).collect::<Result<_>>()?;
        for gs in &case.gammas {
            let g = matrix(gs)?;
            if !in_gamma_m(f.modulus(), &g) {
                return Err(Error::Config(format!("{gs} is not in Γ_{}", f.modulus())));
            }
            for (p, arg) in &args {
                let inputs = json!({"f": case.builder, "gamma": gs, "tau": p});
                let (f, tol, qctx, arg) = (f.clone(), q.tolerance, qctx.clone(), arg.clone());
                items.push(Item::new("qmf12", inputs, tol, move |_| qmf::qmf_residual_12(&f, &g, &arg, tol, &qctx)));
            }
        }
        for (p, arg) in &args {
            if let LowerArg::Cusp(alpha) = arg {
                let inputs = json!({"f": case.builder, "alpha": p, "check": "theta equals hat theta"});
                let (f, tol, qctx, alpha) = (f.clone(), q.tolerance, qctx.clone(), alpha.clone());
                items.push(Item::new("qmf12", inputs.clone(), tol, move |_| {
                    let lhs = radial_value(&f, Weight::Half, &alpha, &qctx)?;
                    let rhs = qmf::hat_theta_at_cusp(&f, &alpha, &qctx)?;
                    Ok(record("qmf12", inputs.clone(), &lhs, &rhs, tol, &qctx))
                }));
            }
        }
    }
    Ok(items)
}

fn plan_cross(c: &SuiteConfig, ctx: &PrecisionContext) -> Result<Vec<Item>> {
    let x = &c.cross;
    let qctx = relaxed(ctx, x.quad_target)?;
    let mut items = Vec::new();
    let f = builder(&x.eichler_builder)?;
    for p in &x.eichler_points {
        let z = UpperHalfPoint::parse(p, ctx.bits()).map_err(|e| Error::Config(e.to_string()))?;
        let inputs = json!({"f": x.eichler_builder, "z": p, "check": "eichler series vs quadrature"});
        let (f, tol) = (f.clone(), x.eichler_tolerance);
        items.push(Item::new("cross", inputs.clone(), tol, move |ctx| {
            let lhs = qmf::eichler_tilde(&f, &z, ctx)?;
            let rhs = qmf::eichler_tilde_quad(&f, &z, ctx)?;
            Ok(record("cross", inputs.clone(), &lhs, &rhs, tol, ctx))
        }));
    }
    if x.cusp_builders.len() != x.cusp_points.len() {
        return Err(Error::Config("cross.cusp_points needs one list per builder".into()));
    }
    for (spec, points) in x.cusp_builders.iter().zip(&x.cusp_points) {
        let f = builder(spec)?;
        for p in points {
            let alpha = cusp(p)?;
            let inputs = json!({"f": spec, "alpha": p, "check": "eichler route vs L-value"});
            let (f, tol, qctx) = (f.clone(), x.cusp_tolerance, qctx.clone());
            items.push(Item::new("cross", inputs.clone(), tol, move |_| {
                let lhs = qmf::theta_value_at_cusp(&f, &alpha, &qctx)?;
                let rhs = radial_value(&f, Weight::ThreeHalves, &alpha, &qctx)?;
                Ok(record("cross", inputs.clone(), &lhs, &rhs, tol, &qctx))
            }));
        }
    }
    Ok(items)
}

fn plan_strange(c: &SuiteConfig) -> Result<Vec<Item>> {
    let s = &c.strange;
    let mut items = Vec::new();
    for case in &s.cases {
        let side: StrangeSide = case.side.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
        for a in &case.alphas {
            let root = RootOfUnity::parse(a).map_err(|e| Error::Config(e.to_string()))?;
            let tol = if side == StrangeSide::V { s.unimodal_tolerance } else { s.tolerance };
            let inputs = json!({"side": case.side, "alpha": a});
            let side = side.clone();
            items.push(Item::new("strange", inputs, tol, move |ctx| qknots::strange_check(&side, &root, tol, ctx)));
        }
    }
    let count = s.unimodal_exponents;
    let inputs = json!({"side": "V", "check": "coefficients", "count": count});
    items.push(Item::new("strange", inputs.clone(), 0.0, move |_| {
        let mut limit = 64;
        let coeffs = loop {
            let c = qknots::unimodal_coefficients(limit);
            if c.len() >= count {
                break c;
            }
            limit *= 2;
        };
        let shown = &coeffs[..count];
        let bad = shown.iter().filter(|(_, a, b)| a != b).count();
        let fmt = |pick: fn(&(u64, Rational, Rational)) -> &Rational| {
            shown.iter().map(|t| format!("{}:{}", t.0, pick(t))).collect::<Vec<_>>().join(" ")
        };
        Ok(VerificationRecord::from_strings("strange", inputs.clone(), fmt(|t| &t.1), fmt(|t| &t.2), bad as f64, 0.0))
    }));
    Ok(items)
}

fn exact_record(inputs: Value, lhs: &crate::cyclo::Cyclo, rhs: &crate::cyclo::Cyclo, ctx: &PrecisionContext) -> VerificationRecord {
    let bits = ctx.bits();
    let (l, r) = (lhs.to_complex(bits), rhs.to_complex(bits));
    let residual = if lhs == rhs { 0.0 } else { abs_f64(&Complex::with_val(bits, &l - &r)).max(f64::MIN_POSITIVE) };
    let digits = ctx.digits() as usize;
    VerificationRecord::from_strings("knots", inputs, format_complex(&l, digits), format_complex(&r, digits), residual, 0.0)
}

fn plan_knots(c: &SuiteConfig) -> Result<Vec<Item>> {
    let k = &c.knots;
    let mut items = Vec::new();
    for n in 1..=k.f_max_order {
        let inputs = json!({"identity": "zeta F = J_N(T(3,2))", "N": n});
        items.push(Item::new("knots", inputs.clone(), 0.0, move |ctx| {
            let b = ExactBackend::new(&RootOfUnity::primitive(n)?);
            let lhs = &qknots::kz_f(&b)? * &b.field().zeta_pow(1);
            Ok(exact_record(inputs.clone(), &lhs, &qknots::jones_t32(&b, n)?, ctx))
        }));
    }
    for &t in &k.ft_values {
        for n in 1..=k.ft_max_order {
            let inputs = json!({"identity": "zeta^(2^t-1) F_t = J_N(T(3,2^t))", "t": t, "N": n});
            items.push(Item::new("knots", inputs.clone(), 0.0, move |ctx| {
                let b = ExactBackend::new(&RootOfUnity::primitive(n)?);
                let lhs = &qknots::kz_ft(&b, t)? * &b.field().zeta_pow((1i64 << t) - 1);
                Ok(exact_record(inputs.clone(), &lhs, &qknots::jones_t32t(&b, t, n)?, ctx))
            }));
        }
    }
    for n in 1..=k.x_max_order {
        let inputs = json!({"identity": "X_1^(0) = F", "N": n});
        items.push(Item::new("knots", inputs.clone(), 0.0, move |ctx| {
            let b = ExactBackend::new(&RootOfUnity::primitive(n)?);
            Ok(exact_record(inputs.clone(), &qknots::hikami_x(&b, 1, 0)?, &qknots::kz_f(&b)?, ctx))
        }));
    }
    Ok(items)
}

/// All reduced p/q with 1 ≤ q ≤ max and −q ≤ p ≤ q, plus i∞.
pub fn small_cusps(max_denominator: i64) -> Vec<RationalCusp> {
    let mut out = vec![RationalCusp::INFINITY];
    for q in 1..=max_denominator {
        for p in -q..=q {
            if Rational::from((p, q)).denom() == &q {
                out.push(RationalCusp::new(p, q).expect("nonzero denominator"));
            }
        }
    }
    out
}

fn plan_cusps(c: &SuiteConfig) -> Result<Vec<Item>> {
    let k = &c.cusps;
    let cusps = small_cusps(k.max_denominator);
    let mut items = Vec::new();
    for &m in &k.moduli {
        for a in &cusps {
            for b in &cusps {
                let inputs = json!({"M": m, "alpha": a.to_string(), "beta": b.to_string()});
                let (a, b) = (a.clone(), b.clone());
                items.push(Item::new("cusps", inputs.clone(), 0.0, move |_| {
                    let (eq, w) = cusp_equivalent(m, &a, &b);
                    let (lhs, residual) = match (eq, w) {
                        (true, Some(g)) => {
                            let ok = in_gamma_m(m, &g) && g.apply_cusp(&a) == b;
                            (g.to_string(), if ok { 0.0 } else { 1.0 })
                        }
                        (false, None) => ("inequivalent".to_string(), 0.0),
                        _ => ("inconsistent".to_string(), 1.0),
                    };
                    Ok(VerificationRecord::from_strings("cusps", inputs.clone(), lhs, b.to_string(), residual, 0.0))
                }));
            }
        }
    }
    Ok(items)
}
