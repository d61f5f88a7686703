//! `tauq`: command-line driver for constructing tau-function expansions and
//! running the exact verification campaigns.
//!
//! Exit status: 0 when every checked item passes, 1 when a verification
//! fails, 2 for usage errors, 3 for I/O and cache failures.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tauq::hirota::{verify_hirota_bkp, verify_hirota_kp};
use tauq::operators::{build_w1_family, verify_operator_identity};
use tauq::partitions::{enumerate_strict, enumerate_strict_up_to, StrictPartition};
use tauq::polyring::HbarSeries;
use tauq::qschur::{verify_cauchy, verify_hook, Normalization, Point, QStore};
use tauq::report::Timing;
use tauq::scalars::{parse_rational, rat, Coeff, CoeffScalar, Rational};
use tauq::tau::{
    q_expansion_bgw, q_expansion_mm, tau_cutjoin, tau_hypergeometric, verify_conjecture, verify_perpart_relation,
    verify_virasoro, Conjecture, Model, RFunction, SymbolValues,
};
use tauq::Error;

#[derive(Parser, Debug)]
#[command(name = "tauq", version, about = "Exact KW/BGW tau-function expansions and their verification")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory of the persistent Q-function cache.
    #[arg(long, global = true, env = "TAUQ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strict partitions.
    Partitions {
        #[command(subcommand)]
        action: PartitionsCmd,
    },
    /// Schur Q-functions.
    Qschur {
        #[command(subcommand)]
        action: QschurCmd,
    },
    /// Tau-function series.
    Tau {
        #[command(subcommand)]
        action: TauCmd,
    },
    /// Run a verification campaign.
    Verify(VerifyArgs),
    /// Cold/warm cache timing sweep over Q-function construction.
    Bench(BenchArgs),
}

#[derive(Subcommand, Debug)]
enum PartitionsCmd {
    /// List strict partitions of a weight, one per line.
    List {
        #[arg(long)]
        weight: u32,
        /// Include every weight from 0 up to `--weight`.
        #[arg(long)]
        up_to: bool,
    },
}

#[derive(Subcommand, Debug)]
enum QschurCmd {
    /// Print a Q-function as a polynomial.
    Compute {
        #[arg(long, value_parser = parse_partition)]
        lambda: StrictPartition,
        /// Defaults to |λ|.
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long, default_value = "mac", value_parser = parse_norm)]
        normalization: Normalization,
    },
    /// Evaluate a Q-function at `delta1`, `delta3over3` or `@file.json`
    /// (a JSON object mapping time indices to rationals, e.g. {"1": "1/2"}).
    Eval {
        #[arg(long, value_parser = parse_partition)]
        lambda: StrictPartition,
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "mm", value_parser = parse_norm)]
        normalization: Normalization,
    },
}

#[derive(Args, Debug, Clone)]
struct NuArgs {
    /// Numerical value of ν = N² (rational `p/q`).
    #[arg(long, conflicts_with = "nu_symbolic", value_parser = parse_rat)]
    nu: Option<Rational>,
    /// Keep ν as a symbol.
    #[arg(long)]
    nu_symbolic: bool,
}

#[derive(Args, Debug, Clone)]
struct BetaArgs {
    /// Numerical value of β (nonzero rational `p/q`).
    #[arg(long, conflicts_with = "beta_symbolic", value_parser = parse_rat)]
    beta: Option<Rational>,
    /// Keep β as a symbol (the default).
    #[arg(long)]
    beta_symbolic: bool,
}

#[derive(Args, Debug, Clone)]
struct SeriesOut {
    /// Write the coefficient table as CSV (`-` for standard output).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print the logarithm of the series instead.
    #[arg(long)]
    log: bool,
}

#[derive(Subcommand, Debug)]
enum TauCmd {
    /// `exp(ħŴ)·1` from the cut-and-join operator.
    Cutjoin {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        /// ħ-order; defaults to the order reachable at `--max-weight`.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        max_weight: Option<u32>,
        #[command(flatten)]
        nu: NuArgs,
        #[command(flatten)]
        out: SeriesOut,
    },
    /// Hypergeometric BKP sum in the rescaled times `t/2`.
    Hypergeom {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        #[arg(long)]
        max_weight: u32,
        #[command(flatten)]
        nu: NuArgs,
        #[command(flatten)]
        beta: BetaArgs,
        #[command(flatten)]
        out: SeriesOut,
    },
    /// Q-function expansion (BGW: Q-analogue formula, KW: MM formula).
    Qexpand {
        #[arg(long, value_parser = parse_model)]
        model: Model,
        #[arg(long)]
        max_weight: u32,
        #[command(flatten)]
        out: SeriesOut,
    },
    /// `exp(ħ(Ŵ₁ + t₁³/144 + b·t₃))·1`, a one-parameter BKP family.
    BkpFamily {
        #[arg(long, value_parser = parse_rat)]
        b: Rational,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        out: SeriesOut,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Campaign {
    Mm,
    BgwQ,
    C2,
    C3,
    Perpart,
    Virasoro,
    Cauchy,
    Hook,
    HirotaBkp,
    HirotaKp,
    Operators,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    campaign: Campaign,
    /// Weight cap (joint weight for two-family identities).
    #[arg(long)]
    max_weight: u32,
    /// Model, for `virasoro`, `hirota-bkp` and `hirota-kp`.
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// ħ-order of the tau-series fed to the Hirota checks.
    #[arg(long)]
    hbar_order: Option<u32>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    nu: NuArgs,
    #[command(flatten)]
    beta: BetaArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 4)]
    from: u32,
    #[arg(long, default_value_t = 16)]
    to: u32,
    #[arg(long, default_value_t = 4)]
    step: u32,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_partition(s: &str) -> Result<StrictPartition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_norm(s: &str) -> Result<Normalization, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Failures below the verification layer.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Domain(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Returns whether everything checked passed.
fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Partitions { action: PartitionsCmd::List { weight, up_to } } => {
            let list = if *up_to { enumerate_strict_up_to(*weight) } else { enumerate_strict(*weight) };
            let mut out = io::stdout().lock();
            for l in list {
                writeln!(out, "{l}")?;
            }
            Ok(true)
        }
        Command::Qschur { action } => qschur(cli, action),
        Command::Tau { action } => tau(cli, action),
        Command::Verify(args) => verify(cli, args),
        Command::Bench(args) => bench(args),
    }
}

fn store(cli: &Cli, cap: u32) -> CliResult<QStore> {
    Ok(match &cli.cache_dir {
        Some(dir) => QStore::with_cache(cap, dir)?,
        None => QStore::new(cap),
    })
}

fn parse_point(s: &str) -> CliResult<Point> {
    match s {
        "delta1" => Ok(Point::Delta1),
        "delta3over3" => Ok(Point::Delta3Over3),
        _ => {
            let Some(path) = s.strip_prefix('@') else {
                return Err(Failure::Usage(format!(
                    "unknown point '{s}' (expected delta1, delta3over3 or @file.json)"
                )));
            };
            let text = fs::read_to_string(path)?;
            let raw: BTreeMap<String, serde_json::Value> =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
            let mut values = BTreeMap::new();
            for (k, v) in raw {
                let k: u32 =
                    k.trim_start_matches('t').parse().map_err(|_| Failure::Usage(format!("bad time index '{k}'")))?;
                let v = match v {
                    serde_json::Value::String(s) => parse_rational(&s)?,
                    serde_json::Value::Number(n) if n.is_i64() => rat(n.as_i64().unwrap_or_default(), 1),
                    other => {
                        return Err(Failure::Usage(format!(
                            "t{k}: expected an integer or a \"p/q\" string, got {other}"
                        )))
                    }
                };
                values.insert(k, v);
            }
            Ok(Point::Custom(values))
        }
    }
}

fn qschur(cli: &Cli, action: &QschurCmd) -> CliResult<bool> {
    match action {
        QschurCmd::Compute { lambda, max_weight, normalization } => {
            let cap = max_weight.unwrap_or(lambda.weight());
            let s = store(cli, cap)?;
            let q = s.q_function(lambda, *normalization)?;
            s.flush()?;
            println!("{q}");
        }
        QschurCmd::Eval { lambda, point, normalization } => {
            let point = parse_point(point)?;
            let s = store(cli, lambda.weight())?;
            let q = s.q_function(lambda, *normalization)?;
            s.flush()?;
            println!("{}", q.specialize(&point));
        }
    }
    Ok(true)
}

fn nu_value(nu: &NuArgs, default_symbolic: bool) -> CoeffScalar {
    match (&nu.nu, nu.nu_symbolic) {
        (Some(v), _) => CoeffScalar::from_rational(v.clone()),
        (None, true) => CoeffScalar::nu(),
        (None, false) if default_symbolic => CoeffScalar::nu(),
        (None, false) => CoeffScalar::zero(),
    }
}

fn beta_value(beta: &BetaArgs) -> CoeffScalar {
    match &beta.beta {
        Some(v) => CoeffScalar::from_rational(v.clone()),
        None => CoeffScalar::beta(),
    }
}

fn emit<C: Coeff>(series: &HbarSeries<C>, out: &SeriesOut) -> CliResult<()> {
    let series = if out.log { series.log()? } else { series.clone() };
    match &out.csv {
        None => println!("{series}"),
        Some(path) if path.as_os_str() == "-" => write_csv(&series, io::stdout().lock())?,
        Some(path) => write_csv(&series, fs::File::create(path)?)?,
    }
    Ok(())
}

fn write_csv<C: Coeff>(series: &HbarSeries<C>, sink: impl Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["hbar_order", "monomial", "coefficient"])?;
    for (e, p) in series.components() {
        for (m, c) in p.terms() {
            w.write_record([e.to_string(), m.to_string(), c.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn tau(cli: &Cli, action: &TauCmd) -> CliResult<bool> {
    match action {
        TauCmd::Cutjoin { model, order, max_weight, nu, out } => {
            let order = match (order, max_weight) {
                (Some(o), _) => *o,
                (None, Some(w)) => model.order_for_weight(*w),
                (None, None) => return Err(Failure::Usage("give --order or --max-weight".into())),
            };
            let series = tau_cutjoin(*model, &nu_value(nu, false), order)?;
            emit(&series, out)?;
        }
        TauCmd::Hypergeom { model, max_weight, nu, beta, out } => {
            let s = store(cli, *max_weight)?;
            let (r, point) = match model {
                Model::Bgw => (RFunction::bgw(&nu_value(nu, false), *max_weight), Point::Delta1),
                Model::Kw => (RFunction::kw(&beta_value(beta), (*max_weight).max(1))?, Point::Delta3Over3),
            };
            let series = tau_hypergeometric(&s, &r, &point, *max_weight)?;
            s.flush()?;
            emit(&series, out)?;
        }
        TauCmd::Qexpand { model, max_weight, out } => {
            let s = store(cli, *max_weight)?;
            let series = match model {
                Model::Bgw => q_expansion_bgw(&s, *max_weight)?,
                Model::Kw => q_expansion_mm(&s, *max_weight)?,
            };
            s.flush()?;
            emit(&series, out)?;
        }
        TauCmd::BkpFamily { b, order, out } => {
            let cap = 3 * order;
            let series = build_w1_family(b, cap).exp_action(*order, cap)?;
            emit(&series, out)?;
        }
    }
    Ok(true)
}

fn require_model(args: &VerifyArgs) -> CliResult<Model> {
    args.model.ok_or_else(|| Failure::Usage("this campaign needs --model kw|bgw".into()))
}

fn verify(cli: &Cli, args: &VerifyArgs) -> CliResult<bool> {
    let w = args.max_weight;
    let start = Instant::now();
    let symbols = SymbolValues { nu: nu_value(&args.nu, true), beta: beta_value(&args.beta) };
    let mut report = match args.campaign {
        Campaign::Mm | Campaign::BgwQ | Campaign::C2 | Campaign::C3 => {
            let which = match args.campaign {
                Campaign::Mm => Conjecture::Mm,
                Campaign::BgwQ => Conjecture::BgwQ,
                Campaign::C2 => Conjecture::C2,
                _ => Conjecture::C3,
            };
            let s = store(cli, w)?;
            let r = verify_conjecture(which, &s, w, &symbols)?;
            s.flush()?;
            r
        }
        Campaign::Perpart => verify_perpart_relation(w, &symbols.beta)?,
        Campaign::Virasoro => verify_virasoro(require_model(args)?, w)?,
        Campaign::Cauchy => verify_cauchy(w)?,
        Campaign::Hook => verify_hook(w)?,
        Campaign::Operators => verify_operator_identity(w)?,
        Campaign::HirotaBkp | Campaign::HirotaKp => {
            let model = require_model(args)?;
            let order = args.hbar_order.unwrap_or_else(|| model.order_for_weight(w));
            let nu = nu_value(&args.nu, false);
            let tau = tau_cutjoin(model, &nu, order)?;
            let mut r = if args.campaign == Campaign::HirotaBkp {
                verify_hirota_bkp(&tau.rescale_times(&CoeffScalar::from_rational(rat(1, 2))), w)?
            } else {
                verify_hirota_kp(&tau, w)?
            };
            r.param("model", model).param("hbar_order", order);
            if model == Model::Bgw {
                r.param("nu", &nu);
            }
            r
        }
    };
    report.timing = Some(Timing { wall_seconds: start.elapsed().as_secs_f64() });
    println!("{}", report.headline());
    for item in report.failures().take(10) {
        println!("  FAIL {}: expected {}, got {}", item.label, item.expected, item.actual);
    }
    if let Some(path) = &args.report {
        write_text(path, &(report.to_json_pretty() + "\n"))?;
    }
    Ok(report.passed())
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn bench(args: &BenchArgs) -> CliResult<bool> {
    if args.step == 0 || args.from > args.to {
        return Err(Failure::Usage("need --from ≤ --to and a positive --step".into()));
    }
    let mut levels = Vec::new();
    let mut warm_clean = true;
    for w in (args.from..=args.to).step_by(args.step as usize) {
        let dir = tempfile::tempdir()?;
        let lambdas = enumerate_strict_up_to(w);

        let t = Instant::now();
        let cold = QStore::with_cache(w, dir.path())?;
        cold.prefetch(&lambdas)?;
        cold.flush()?;
        let cold_seconds = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let warm = QStore::with_cache(w, dir.path())?;
        warm.prefetch(&lambdas)?;
        let warm_seconds = t.elapsed().as_secs_f64();

        let t = Instant::now();
        let assembled = q_expansion_bgw(&warm, w)?;
        let assembly_seconds = t.elapsed().as_secs_f64();

        let mut terms = 0;
        for l in &lambdas {
            terms += warm.mac(l)?.len();
        }
        let series_terms: usize = assembled.components().map(|(_, p)| p.len()).sum();
        warm_clean &= warm.pfaffian_evaluations() == 0;
        levels.push(json!({
            "weight": w,
            "partitions": lambdas.len(),
            "q_terms": terms,
            "series_terms": series_terms,
            "cold_pfaffians": cold.pfaffian_evaluations(),
            "warm_pfaffians": warm.pfaffian_evaluations(),
            "timing": {
                "cold_seconds": cold_seconds,
                "warm_seconds": warm_seconds,
                "assembly_seconds": assembly_seconds,
            },
        }));
    }
    let doc = serde_json::to_string_pretty(&json!({ "campaign": "bench", "levels": levels }))
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    match &args.output {
        Some(path) => write_text(path, &(doc + "\n"))?,
        None => println!("{doc}"),
    }
    Ok(warm_clean)
}
