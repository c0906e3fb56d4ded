mod verify;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use giambelli::kernels::{DiscreteKernel, WhittakerKernel};
use giambelli::ope::{orthopoly, DiscreteMeasure, EnsembleSpec};
use giambelli::oracle::{brute_corr, chi_square_sizes};
use giambelli::scalar::{fmt_q, parse_rational, q_to_f64, Q};
use giambelli::specfun::PrecisionPolicy;
use giambelli::zmeasure::{
    expect_fs, giambelli_expectation_check, sample_many, weight_mixed, weight_mixed_ratio, weight_n, MixedZParams, ZParams,
};
use giambelli::{enumerate_partitions, Error, HalfInt, Partition};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "giambelli", version, about = "z-measures, their correlation kernels and orthogonal polynomial ensembles")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Global {
    /// First z-measure parameter, e.g. `1/2` or `1/2+i`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    z: Option<String>,
    /// Second z-measure parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    zp: Option<String>,
    /// Mixing parameter in (0, 1).
    #[arg(long, global = true)]
    xi: Option<String>,
    /// Relative accuracy target for series and quadrature.
    #[arg(long, global = true)]
    precision: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Weights, averages and samples of the z-measures.
    #[command(subcommand)]
    Zmeasure(ZCmd),
    /// The discrete hypergeometric kernel and the Whittaker kernel.
    #[command(subcommand)]
    Kernel(KCmd),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Orthogonal polynomial ensembles over a finite measure.
    Ope(OpeArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ZCmd {
    /// `M^{(n)}(λ)`, plus the mixed weight when `--xi` is given.
    Weight {
        #[arg(long)]
        lambda: String,
    },
    /// `⟨Fs_μ⟩` under the mixed measure.
    ExpectFs {
        #[arg(long)]
        mu: String,
    },
    /// Averaged Giambelli residuals for all `|λ| ≤ max-size`.
    GiambelliCheck {
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
    /// Exact samples from the mixed measure.
    Sample {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum KCmd {
    /// `K(x, y)` on `ℤ′`.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// `K(x, y)` for all half-integers `x, y` in a range `a,b`.
    Grid {
        #[arg(long, allow_hyphen_values = true, default_value = "-7/2,7/2")]
        range: String,
    },
    /// `ρ_m` as a kernel determinant.
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Also compute the brute-force value with its tail bound.
        #[arg(long)]
        oracle: bool,
    },
    /// Residual of the jump condition at a lattice point.
    JumpCheck {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// The Whittaker kernel `K_W(x, y)` on `ℝ*`.
    WhittakerEval {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: verify::Suite,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct OpeArgs {
    /// CSV or JSON file, or inline JSON.
    #[arg(long)]
    measure: String,
    /// Number of particles.
    #[arg(long)]
    n: usize,
    #[command(subcommand)]
    action: OpeCmd,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OpeCmd {
    /// `P(X)` for one configuration.
    Prob {
        #[arg(long, allow_hyphen_values = true)]
        config: String,
    },
    /// `⟨s_λ⟩` by moment determinant and by enumeration.
    AvgSchur {
        #[arg(long)]
        lambda: String,
    },
    /// Giambelli residuals for all `|λ| ≤ max-size`.
    GiambelliCheck {
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
    /// Christoffel–Darboux and residue kernels at `(x, y)`.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// `ρ_m` from enumeration and from both kernels.
    Rho {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Monic orthogonal polynomial coefficients, constant term first.
    Orthopoly {
        #[arg(long)]
        k: usize,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Input(Error),
    Verification(Value),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

type Out = std::result::Result<Output, Failure>;

enum Output {
    Json(Value),
    Csv { header: Vec<&'static str>, rows: Vec<Vec<String>> },
}

#[derive(Serialize)]
struct RunManifest {
    command: Vec<String>,
    parameters: Global,
    subcommand: Value,
    seed: Option<u64>,
    precision: PrecisionPolicy,
    version: &'static str,
    timestamp: u64,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidPartition(_) => "invalid_partition",
        Error::InvalidConfiguration(_) => "invalid_configuration",
        Error::Inadmissible(_) => "inadmissible",
        Error::Parse(_) => "parse",
        Error::Pole(_) => "pole",
        Error::NonConvergence { .. } => "non_convergence",
        Error::Quadrature(_) => "quadrature",
        Error::Domain(_) => "domain",
        Error::Backend(_) => "backend",
        Error::Truncation(_) => "truncation",
        Error::InvalidMeasure(_) => "invalid_measure",
    }
}

fn err_value(e: &Error) -> Value {
    json!({ "kind": error_kind(e), "message": e.to_string() })
}

fn policy(g: &Global) -> PrecisionPolicy {
    let mut p = PrecisionPolicy::default();
    if let Some(t) = g.precision {
        p.target = t;
        p.quad_tol = t.max(1e-14);
    }
    p
}

fn zparams(g: &Global) -> giambelli::Result<ZParams> {
    let z = g.z.as_deref().ok_or_else(|| Error::Parse("--z is required".into()))?;
    let zp = g.zp.as_deref().ok_or_else(|| Error::Parse("--zp is required".into()))?;
    ZParams::parse(z, zp)
}

fn mixed(g: &Global) -> giambelli::Result<MixedZParams> {
    let xi = g.xi.as_deref().ok_or_else(|| Error::Parse("--xi is required".into()))?;
    MixedZParams::new(zparams(g)?, parse_rational(xi)?)
}

fn list_items(s: &str) -> Vec<&str> {
    let t = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    t.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

fn parse_partition(s: &str) -> giambelli::Result<Partition> {
    let parts = list_items(s)
        .into_iter()
        .map(|p| p.parse::<i64>().map_err(|_| Error::Parse(format!("bad part {p:?} in {s:?}"))))
        .collect::<giambelli::Result<Vec<_>>>()?;
    Partition::from_parts(&parts)
}

fn parse_points(s: &str) -> giambelli::Result<Vec<HalfInt>> {
    list_items(s).into_iter().map(HalfInt::parse).collect()
}

fn parse_real(s: &str) -> giambelli::Result<f64> {
    Ok(q_to_f64(&parse_rational(s)?))
}

fn parse_rationals(s: &str) -> giambelli::Result<Vec<Q>> {
    list_items(s).into_iter().map(parse_rational).collect()
}

fn load_measure(s: &str) -> giambelli::Result<DiscreteMeasure> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return DiscreteMeasure::from_json(t);
    }
    let text = fs::read_to_string(s).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
    if s.ends_with(".json") {
        DiscreteMeasure::from_json(&text)
    } else {
        DiscreteMeasure::from_csv(&text)
    }
}

fn qs(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn run_zmeasure(cmd: &ZCmd, g: &Global) -> Out {
    match cmd {
        ZCmd::Weight { lambda } => {
            let lam = parse_partition(lambda)?;
            let zp = zparams(g)?;
            let mut out = json!({
                "lambda": lam,
                "n": lam.size(),
                "series": zp.series(),
                "weight_n": qs(&weight_n(&lam, &zp)),
            });
            if g.xi.is_some() {
                let mp = mixed(g)?;
                out["weight_mixed_ratio"] = qs(&weight_mixed_ratio(&lam, &mp));
                out["weight_mixed"] = json!(weight_mixed(&lam, &mp));
            }
            Ok(Output::Json(out))
        }
        ZCmd::ExpectFs { mu } => {
            let mu = parse_partition(mu)?;
            let mp = mixed(g)?;
            let v = expect_fs(&mu, &mp);
            Ok(Output::Json(json!({ "mu": mu, "expect_fs": qs(&v), "expect_fs_f64": q_to_f64(&v) })))
        }
        ZCmd::GiambelliCheck { max_size } => {
            let mp = mixed(g)?;
            let mut worst = Q::from_integer(0.into());
            let mut worst_at = Partition::empty();
            let mut checked = 0usize;
            for n in 0..=*max_size {
                for lam in enumerate_partitions(n) {
                    let r = giambelli_expectation_check(&lam, &mp);
                    if r > worst {
                        worst = r;
                        worst_at = lam;
                    }
                    checked += 1;
                }
            }
            Ok(Output::Json(json!({ "max_residual": qs(&worst), "worst_lambda": worst_at, "checked": checked })))
        }
        ZCmd::Sample { count } => {
            let mp = mixed(g)?;
            let seed = g.seed.unwrap_or(0);
            let samples = sample_many(&mp, seed, *count);
            match g.format {
                Format::Csv => Ok(Output::Csv {
                    header: vec!["index", "size", "parts"],
                    rows: samples
                        .iter()
                        .enumerate()
                        .map(|(i, l)| {
                            let parts: Vec<String> = l.parts().iter().map(|p| p.to_string()).collect();
                            vec![i.to_string(), l.size().to_string(), parts.join(" ")]
                        })
                        .collect(),
                }),
                Format::Json => {
                    let sizes: Vec<usize> = samples.iter().map(|l| l.size()).collect();
                    let mut out = json!({ "seed": seed, "count": count, "samples": samples });
                    if let Ok(chi) = chi_square_sizes(&sizes, &mp) {
                        out["size_chi_square"] = json!(chi);
                    }
                    Ok(Output::Json(out))
                }
            }
        }
    }
}

fn run_kernel(cmd: &KCmd, g: &Global) -> Out {
    let pol = policy(g);
    pol.validate()?;
    match cmd {
        KCmd::Eval { x, y } => {
            let (x, y) = (HalfInt::parse(x)?, HalfInt::parse(y)?);
            let k = DiscreteKernel::with_policy(&mixed(g)?, pol);
            Ok(Output::Json(json!({ "x": x.to_string(), "y": y.to_string(), "kernel": k.kernel(x, y)? })))
        }
        KCmd::Grid { range } => {
            let ends = list_items(range);
            if ends.len() != 2 {
                return Err(Error::Parse(format!("--range expects `a,b`, got {range:?}")).into());
            }
            let (a, b) = (parse_rational(ends[0])?, parse_rational(ends[1])?);
            let k = DiscreteKernel::with_policy(&mixed(g)?, pol);
            let (lo, hi) = ((2.0 * q_to_f64(&a)).ceil() as i64, (2.0 * q_to_f64(&b)).floor() as i64);
            let pts: Vec<HalfInt> = (lo..=hi).filter(|t| t.rem_euclid(2) == 1).map(HalfInt::from_twice).collect::<giambelli::Result<_>>()?;
            let mut rows = Vec::with_capacity(pts.len() * pts.len());
            for &x in &pts {
                for &y in &pts {
                    let (val, err) = match k.kernel(x, y) {
                        Ok(v) => (format!("{v:e}"), String::new()),
                        Err(e) => (String::new(), e.to_string()),
                    };
                    rows.push(vec![x.to_string(), y.to_string(), val, err]);
                }
            }
            Ok(Output::Csv { header: vec!["x", "y", "kernel", "error"], rows })
        }
        KCmd::Rho { points, oracle } => {
            let pts = parse_points(points)?;
            let mp = mixed(g)?;
            let k = DiscreteKernel::with_policy(&mp, pol);
            let mut out = json!({
                "points": pts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "rho": k.rho(&pts)?,
                "rho_residue_form": k.rho_via_residues(&pts)?,
            });
            if *oracle {
                out["oracle"] = json!(brute_corr(&pts, &mp, 1e-12)?);
            }
            Ok(Output::Json(out))
        }
        KCmd::JumpCheck { x } => {
            let x = HalfInt::parse(x)?;
            let k = DiscreteKernel::with_policy(&mixed(g)?, pol);
            Ok(Output::Json(json!({ "x": x.to_string(), "residual": k.jump_residual(x)? })))
        }
        KCmd::WhittakerEval { x, y } => {
            let (x, y) = (parse_real(x)?, parse_real(y)?);
            let k = WhittakerKernel::with_policy(&zparams(g)?, pol);
            Ok(Output::Json(json!({ "x": x, "y": y, "kernel": k.kernel(x, y)? })))
        }
    }
}

fn run_ope(args: &OpeArgs) -> Out {
    let spec = EnsembleSpec::new(load_measure(&args.measure)?, args.n)?;
    let out = match &args.action {
        OpeCmd::Prob { config } => {
            let x = parse_rationals(config)?;
            json!({ "config": x.iter().map(fmt_q).collect::<Vec<_>>(), "prob": qs(&spec.prob(&x)?) })
        }
        OpeCmd::AvgSchur { lambda } => {
            let lam = parse_partition(lambda)?;
            json!({
                "lambda": lam,
                "moment_determinant": qs(&spec.avg_schur(&lam)),
                "enumeration": qs(&spec.avg_schur_enumerated(&lam)),
            })
        }
        OpeCmd::GiambelliCheck { max_size } => {
            let mut nonzero = Vec::new();
            let mut checked = 0usize;
            for n in 0..=*max_size {
                for lam in enumerate_partitions(n) {
                    let r = spec.giambelli_residual(&lam);
                    if r != Q::from_integer(0.into()) {
                        nonzero.push(json!({ "lambda": lam, "residual": qs(&r) }));
                    }
                    checked += 1;
                }
            }
            json!({ "checked": checked, "max_residual": if nonzero.is_empty() { "0" } else { "nonzero" }, "nonzero": nonzero })
        }
        OpeCmd::Kernel { x, y } => {
            let (x, y) = (parse_rational(x)?, parse_rational(y)?);
            json!({
                "x": qs(&x),
                "y": qs(&y),
                "cd_kernel": qs(&spec.cd_kernel(&x, &y)?),
                "residue_kernel": qs(&spec.residue_kernel(&x, &y)?),
            })
        }
        OpeCmd::Rho { points } => {
            let y = parse_rationals(points)?;
            json!({
                "points": y.iter().map(fmt_q).collect::<Vec<_>>(),
                "brute": qs(&spec.rho_brute(&y)?),
                "cd_kernel": qs(&spec.rho_from(&y, |a, b| spec.cd_kernel(a, b))?),
                "residue_kernel": qs(&spec.rho_from(&y, |a, b| spec.residue_kernel(a, b))?),
            })
        }
        OpeCmd::Orthopoly { k } => {
            let p = orthopoly(spec.measure(), *k)?;
            json!({ "k": k, "coefficients": p.iter().map(fmt_q).collect::<Vec<_>>() })
        }
    };
    Ok(Output::Json(out))
}

fn run(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::Zmeasure(c) => run_zmeasure(c, g),
        Command::Kernel(c) => run_kernel(c, g),
        Command::Ope(a) => run_ope(a),
        Command::Verify(a) => {
            let report = verify::run(a.suite, &verify::Options { global: g, tol: a.tol, samples: a.samples, max_size: a.max_size })?;
            let passed = report.passed;
            let v = serde_json::to_value(report).map_err(|e| Failure::Io(e.to_string()))?;
            if passed {
                Ok(Output::Json(v))
            } else {
                Err(Failure::Verification(v))
            }
        }
    }
}

fn render(manifest: &RunManifest, body: &Output, key: &str) -> String {
    match body {
        Output::Json(v) => {
            let mut doc = serde_json::Map::new();
            doc.insert("manifest".into(), json!(manifest));
            doc.insert(key.into(), v.clone());
            serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable") + "\n"
        }
        Output::Csv { header, rows } => {
            let mut s = format!("# manifest {}\n{}\n", serde_json::to_string(manifest).expect("serializable"), header.join(","));
            for r in rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            s
        }
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::result::Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let manifest = RunManifest {
        command: std::env::args().skip(1).collect(),
        parameters: cli.global.clone(),
        subcommand: serde_json::to_value(&cli.command).unwrap_or(Value::Null),
        seed: cli.global.seed,
        precision: policy(&cli.global),
        version: env!("CARGO_PKG_VERSION"),
        timestamp: std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    let (text, code) = match run(&cli) {
        Ok(body) => (render(&manifest, &body, "result"), 0),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            (render(&manifest, &Output::Json(err_value(&e)), "error"), 2)
        }
        Err(Failure::Verification(v)) => {
            eprintln!("verification failed");
            (render(&manifest, &Output::Json(v), "result"), 3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    if let Err(m) = emit(&text, &cli.global.out) {
        eprintln!("error: {m}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
