//! qmflab command-line front end.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qmflab::cyclo::Cyclo;
use qmflab::lvalues::{build_c, l_at_negative_int, radial_value_exact, Weight};
use qmflab::modgroup::{cusp_equivalent, MoebiusMap, RationalCusp};
use qmflab::numerics::PrecisionContext;
use qmflab::periodic::{parse_builder, PeriodicCoeffs};
use qmflab::qknots::{self, KnotSeries, KnotValue, RootOfUnity, StrangeSide};
use qmflab::qmf::{self, LowerArg};
use qmflab::report::VerificationRecord;
use qmflab::suite::{self, SuiteConfig, SuiteOptions};
use qmflab::theta::{self, format_complex, ThetaEvaluator, UpperHalfPoint};
use qmflab::{Error, Result};

#[derive(Parser)]
#[command(name = "qmflab", version, about = "Quantum modularity checks for partial theta series")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "QMFLAB_PREC", default_value_t = 50)]
    prec: u32,
    /// Parallel workers for suites (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Coefficient function: a builder name (chi12, chi_t:t, hikami:m:l, false:j:M, psi) or @file.json.
    #[arg(long = "f", global = true)]
    f: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Theta series in the upper half plane.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// Exact L-values and radial limits.
    Lvalue(LvalueArgs),
    /// Quantum modularity relations and cocycles.
    #[command(subcommand)]
    Qmf(QmfCmd),
    /// Finite q-series at roots of unity.
    #[command(subcommand)]
    Knots(KnotsCmd),
    /// Cusp computations.
    #[command(subcommand)]
    Modgroup(ModgroupCmd),
    /// Verification suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// θ_f(z) and Θ_f(z).
    Eval {
        #[arg(long)]
        z: String,
    },
    /// Transformation-law residual under γ.
    Transform {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        z: String,
    },
}

#[derive(Args)]
struct LvalueArgs {
    /// Cusp α defining C_α.
    #[arg(long, default_value = "0")]
    alpha: String,
    /// L(−n, C_α).
    #[arg(long, conflicts_with = "weight")]
    n: Option<u32>,
    /// Radial value of weight 1/2 or 3/2 instead.
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Subcommand)]
enum QmfCmd {
    /// Checks the weight-3/2 or weight-1/2 relation at one argument.
    Verify {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        gamma: String,
        /// A cusp, or for weight 1/2 also a lower-half-plane point.
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// The cocycle r_γ at a real or complex point.
    Cocycle {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        x: String,
    },
}

#[derive(Subcommand)]
enum KnotsCmd {
    /// Kontsevich-Zagier F at e^{2πiα}.
    #[command(name = "F")]
    F(RootArgs),
    /// Torus-knot series 𝓕_t.
    #[command(name = "Ft")]
    Ft {
        #[arg(long)]
        t: u32,
        #[command(flatten)]
        root: RootArgs,
    },
    /// Hikami's X_m^(ℓ).
    #[command(name = "X")]
    X {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        root: RootArgs,
    },
    /// Colored Jones J_N(T(3,2^t)) at e^{2πi/N}; t = 1 is the trefoil.
    Jones {
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long = "N")]
        n: u64,
    },
    /// Order-0 strange identity.
    Strange {
        #[arg(long)]
        side: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct RootArgs {
    /// α = p/N; ζ = e^{2πiα}.
    #[arg(long, conflicts_with = "n")]
    alpha: Option<String>,
    /// Shorthand for α = 1/N.
    #[arg(long = "N")]
    n: Option<u64>,
}

#[derive(Subcommand)]
enum ModgroupCmd {
    /// Γ_M-equivalence of two cusps with a witness.
    CuspEquiv {
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Runs a suite and prints one record per line.
    Run {
        name: String,
        /// Grid file replacing the built-in defaults.
        #[arg(long)]
        config: Option<String>,
        /// Overrides every record tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Lists suite names.
    List,
}

enum Output {
    Records(Vec<VerificationRecord>),
    Value(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Records(recs)) => {
            emit_records(&recs, cli.format);
            ExitCode::from(suite::exit_code(&recs) as u8)
        }
        Ok(Output::Value(v)) => {
            emit_value(&v, cli.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit_records(recs: &[VerificationRecord], format: Format) {
    match format {
        Format::Json => {
            for r in recs {
                println!("{}", r.to_json_line());
            }
        }
        Format::Csv => {
            println!("{}", VerificationRecord::csv_header());
            for r in recs {
                println!("{}", r.to_csv_row());
            }
        }
    }
}

fn emit_value(v: &Value, format: Format) {
    match format {
        Format::Json => println!("{v}"),
        Format::Csv => {
            println!("key,value");
            if let Value::Object(map) = v {
                for (k, x) in map {
                    let cell = match x {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    println!("{k},\"{}\"", cell.replace('"', "\"\""));
                }
            }
        }
    }
}

fn coeffs(cli: &Cli) -> Result<PeriodicCoeffs> {
    let spec = cli.f.as_deref().ok_or_else(|| Error::Parse("this command needs --f".into()))?;
    match spec.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
            PeriodicCoeffs::from_json(&text)
        }
        None => parse_builder(spec),
    }
}

fn show(z: &rug::Complex, ctx: &PrecisionContext) -> String {
    format_complex(z, ctx.digits() as usize)
}

fn exact_json(v: &Option<Cyclo>) -> Value {
    match v {
        Some(c) => json!({"order": c.field().order(), "value": c.to_string()}),
        None => Value::Null,
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let ctx = PrecisionContext::with_digits(cli.prec)?;
    match &cli.command {
        Command::Theta(cmd) => theta_cmd(cli, cmd, &ctx),
        Command::Lvalue(args) => lvalue_cmd(cli, args, &ctx),
        Command::Qmf(cmd) => qmf_cmd(cli, cmd, &ctx),
        Command::Knots(cmd) => knots_cmd(cmd, &ctx),
        Command::Modgroup(ModgroupCmd::CuspEquiv { m, alpha, beta }) => {
            let a: RationalCusp = alpha.parse()?;
            let b: RationalCusp = beta.parse()?;
            let (eq, w) = cusp_equivalent(*m, &a, &b);
            Ok(Output::Value(json!({
                "M": m,
                "alpha": a.to_string(),
                "beta": b.to_string(),
                "equivalent": eq,
                "witness": w.map(|g| g.to_string()),
            })))
        }
        Command::Suite(SuiteCmd::List) => Ok(Output::Value(json!({"suites": suite::SUITES}))),
        Command::Suite(SuiteCmd::Run { name, config, tolerance }) => {
            let cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
                    SuiteConfig::from_toml(&text)?
                }
                None => SuiteConfig::defaults(),
            };
            let opts = SuiteOptions { jobs: cli.jobs, tolerance: *tolerance };
            Ok(Output::Records(suite::run_suite(name, &cfg, &opts, &ctx)?))
        }
    }
}

fn theta_cmd(cli: &Cli, cmd: &ThetaCmd, ctx: &PrecisionContext) -> Result<Output> {
    let f = coeffs(cli)?;
    match cmd {
        ThetaCmd::Eval { z } => {
            let z = UpperHalfPoint::parse(z, ctx.bits())?;
            let ev = ThetaEvaluator::new(&f, ctx);
            Ok(Output::Value(json!({
                "f": f.label(),
                "z": show(z.z(), ctx),
                "theta": show(&ev.theta(z.z()), ctx),
                "Theta": show(&ev.big_theta(z.z()), ctx),
            })))
        }
        ThetaCmd::Transform { gamma, z } => {
            let g: MoebiusMap = gamma.parse()?;
            let z = UpperHalfPoint::parse(z, ctx.bits())?;
            let r = match f.parity() {
                qmflab::periodic::Parity::Even => theta::transform_residual_theta(&f, &g, &z, ctx)?,
                qmflab::periodic::Parity::Odd => theta::transform_residual_big_theta(&f, &g, &z, ctx)?,
            };
            let residual = qmflab::numerics::abs_f64(&r);
            let zero = rug::Complex::new(ctx.bits());
            let tol = 10f64.powi(-(ctx.digits() as i32 - 15));
            let inputs = json!({"f": f.label(), "gamma": g.to_string(), "z": show(z.z(), ctx)});
            Ok(Output::Records(vec![VerificationRecord::new("transforms", inputs, &r, &zero, residual, tol, ctx.digits())]))
        }
    }
}

fn lvalue_cmd(cli: &Cli, args: &LvalueArgs, ctx: &PrecisionContext) -> Result<Output> {
    let f = coeffs(cli)?;
    let alpha: RationalCusp = args.alpha.parse()?;
    let (label, v) = match (&args.weight, args.n) {
        (Some(w), _) => {
            let w: Weight = w.parse()?;
            (format!("radial weight {w}"), radial_value_exact(&f, w, &alpha)?)
        }
        (None, n) => {
            let n = n.unwrap_or(1);
            (format!("L(-{n}, C_alpha)"), l_at_negative_int(&build_c(&f, &alpha)?, n)?)
        }
    };
    Ok(Output::Value(json!({
        "f": f.label(),
        "alpha": alpha.to_string(),
        "quantity": label,
        "exact": exact_json(&Some(v.clone())),
        "value": show(&v.to_complex(ctx.bits()), ctx),
    })))
}

fn qmf_cmd(cli: &Cli, cmd: &QmfCmd, ctx: &PrecisionContext) -> Result<Output> {
    let f = coeffs(cli)?;
    match cmd {
        QmfCmd::Verify { weight, gamma, at, tolerance } => {
            let g: MoebiusMap = gamma.parse()?;
            let rec = match weight.parse::<Weight>()? {
                Weight::ThreeHalves => qmf::qmf_residual_32(&f, &g, &at.parse()?, *tolerance, ctx)?,
                Weight::Half => qmf::qmf_residual_12(&f, &g, &LowerArg::parse(at, ctx.bits())?, *tolerance, ctx)?,
            };
            Ok(Output::Records(vec![rec]))
        }
        QmfCmd::Cocycle { weight, gamma, x } => {
            let g: MoebiusMap = gamma.parse()?;
            let w: Weight = weight.parse()?;
            let point = match x.parse::<RationalCusp>() {
                Ok(c) => {
                    let r = c.to_float(ctx.bits()).ok_or_else(|| Error::Domain("the cocycle is not evaluated at i∞".into()))?;
                    rug::Complex::with_val(ctx.bits(), r)
                }
                Err(_) => theta::parse_complex(x, ctx.bits())?,
            };
            let r = qmf::cocycle_r(&f, w, &g, &point, ctx)?;
            Ok(Output::Value(json!({
                "f": f.label(),
                "weight": w.to_string(),
                "gamma": g.to_string(),
                "x": x,
                "r": show(&r, ctx),
            })))
        }
    }
}

fn root_from(args: &RootArgs) -> Result<RootOfUnity> {
    match (&args.alpha, args.n) {
        (Some(a), _) => RootOfUnity::parse(a),
        (None, Some(n)) => RootOfUnity::primitive(n),
        (None, None) => Err(Error::Parse("give --alpha or --N".into())),
    }
}

fn knot_value(series: &str, root: &RootOfUnity, v: &KnotValue, ctx: &PrecisionContext) -> Value {
    let mut m = Map::new();
    m.insert("series".into(), json!(series));
    m.insert("alpha".into(), json!(root.to_string()));
    m.insert("exact".into(), exact_json(&v.exact));
    m.insert("value".into(), json!(show(&v.value, ctx)));
    Value::Object(m)
}

fn knots_cmd(cmd: &KnotsCmd, ctx: &PrecisionContext) -> Result<Output> {
    let eval = |name: &str, series: KnotSeries, root: RootOfUnity| -> Result<Output> {
        let v = qknots::evaluate_series(&series, &root, ctx)?;
        Ok(Output::Value(knot_value(name, &root, &v, ctx)))
    };
    match cmd {
        KnotsCmd::F(r) => eval("F", KnotSeries::F, root_from(r)?),
        KnotsCmd::Ft { t, root } => eval(&format!("Ft:{t}"), KnotSeries::Ft(*t), root_from(root)?),
        KnotsCmd::X { m, l, root } => eval(&format!("X:{m}:{l}"), KnotSeries::X(*m, *l), root_from(root)?),
        KnotsCmd::Jones { t, n } => {
            let root = RootOfUnity::primitive(*n)?;
            let series = if *t == 1 { KnotSeries::JonesT32 } else { KnotSeries::JonesT32t(*t) };
            eval(&format!("J_{n}(T(3,{}))", 1u64 << t), series, root)
        }
        KnotsCmd::Strange { side, alpha, tolerance } => {
            let side: StrangeSide = side.parse()?;
            let root = RootOfUnity::parse(alpha)?;
            Ok(Output::Records(vec![qknots::strange_check(&side, &root, *tolerance, ctx)?]))
        }
    }
}
