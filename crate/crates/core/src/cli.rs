//! Command-line front end. Every command prints JSON (or CSV for `table`);
//! numbers are written as decimal strings.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exec::{with_threads, Execution};
use crate::formulas::{self, CountEstimate, DegseqRegime, Regime};
use crate::graphs::DegreeSequence;
use crate::mc::{self, DegreeSource, Estimate, Event, Model, SampleSpec, XyzMode};
use crate::models::{self, ConditionedSampler, TypicalRegime};
use crate::numeric::{derive_params, ModelParams};
use crate::oracle::{self, Predicate};

#[derive(Parser, Debug)]
#[command(name = "biconn", version, about = "Asymptotic and exact counts of 2-connected labelled graphs")]
struct Cli {
    /// Worker threads for sampling and enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derived parameters (c, λ_c, η̄_c, p_c, ...) for (n, m).
    Params(NM),
    /// Asymptotic or exact counts.
    #[command(subcommand)]
    Count(CountCommand),
    /// Draw one sample from a random model.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Monte Carlo event frequencies.
    Estimate(EstimateArgs),
    /// Kernel loop and double-edge statistics.
    Xyz(XyzArgs),
    /// Kernel size and subdivision statistics.
    Shape(ShapeArgs),
    /// Typical-set membership of a degree sequence.
    Typical(TypicalArgs),
    /// Formula sweeps written as CSV.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct NM {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
}

#[derive(Subcommand, Debug)]
enum CountCommand {
    /// Leading-order asymptotic count. `auto` picks case a below c = 2.2,
    /// case c above c = 30 and the main formula otherwise.
    Asymptotic {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value_t = RegimeArg::Auto)]
        regime: RegimeArg,
    },
    /// Exhaustive count of (n, m)-graphs (n <= 8, or 9 with --allow-large).
    Exact {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value = "two-connected")]
        predicate: Predicate,
        #[arg(long)]
        allow_large: bool,
    },
    /// Asymptotic count for a degree sequence.
    Degseq {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        regime: DegseqArg,
    },
    /// Exhaustive count for a degree sequence (degree sum <= 18).
    ExactDegseq {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value = "two-connected")]
        predicate: Predicate,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Auto,
    Main,
    A,
    B,
    C,
    TwoEdge,
    Wright,
    Mindeg2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DegseqArg {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TypicalArg {
    A,
    B,
}

#[derive(Args, Debug)]
struct DegreeInput {
    /// Degree sequence file (whitespace-separated integers).
    #[arg(long, alias = "degrees", conflicts_with_all = ["n", "m"])]
    file: Option<PathBuf>,
    #[arg(long, requires = "m")]
    n: Option<u64>,
    #[arg(long, requires = "n")]
    m: Option<u64>,
}

impl DegreeInput {
    fn source(&self) -> Result<DegreeSource> {
        match (&self.file, self.n, self.m) {
            (Some(f), _, _) => Ok(DegreeSource::Fixed(read_degrees(f)?)),
            (None, Some(n), Some(m)) => Ok(DegreeSource::Conditioned { n, m }),
            _ => Err(Error::domain("give either --file or both --n and --m")),
        }
    }
}

#[derive(Subcommand, Debug)]
enum SampleCommand {
    /// Pairing model; prints the multigraph as an edge list.
    Pairing(SampleArgs),
    /// Kernel configuration model; prints kernel, assignment and pre-kernel.
    Kernel(SampleArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    input: DegreeInput,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw degrees conditioned on summing to 2m (implied by --n/--m).
    #[arg(long)]
    conditioned: bool,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, default_value = "kernel")]
    model: Model,
    /// One or more events, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    event: Vec<Event>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    input: DegreeInput,
}

#[derive(Args, Debug)]
struct XyzArgs {
    #[arg(long, default_value = "section5")]
    mode: XyzMode,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    input: DegreeInput,
    /// Include every sample's (x, y, z).
    #[arg(long)]
    per_sample: bool,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    input: DegreeInput,
}

#[derive(Args, Debug)]
struct TypicalArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum)]
    regime: TypicalArg,
    #[arg(long, default_value_t = models::DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// Sweep description: {"variable", "values", "fixed", "output"}.
    #[arg(long)]
    sweep: PathBuf,
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let threads = cli.threads;
    let command = cli.command;
    let result = match threads {
        Some(t) => with_threads(t, move || dispatch(command)),
        None => dispatch(command),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            let _ = writeln!(err, "{body}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<String> {
    let value = match command {
        Command::Params(NM { n, m }) => params_json(&derive_params(n, m)?),
        Command::Count(c) => count(c)?,
        Command::Sample(s) => sample(s)?,
        Command::Estimate(a) => estimate(a)?,
        Command::Xyz(a) => xyz(a)?,
        Command::Shape(a) => shape(a)?,
        Command::Typical(a) => typical(a)?,
        Command::Table(a) => return table(a),
    };
    Ok(format!("{}\n", serde_json::to_string_pretty(&value).map_err(|e| Error::Internal(e.to_string()))?))
}

fn num(x: f64) -> Value {
    Value::String(format!("{x}"))
}

fn int(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn read_degrees(path: &Path) -> Result<DegreeSequence> {
    DegreeSequence::parse(&std::fs::read_to_string(path)?)
}

fn params_json(p: &ModelParams) -> Value {
    json!({
        "n": int(p.n),
        "m": int(p.m),
        "c": num(p.c),
        "r": int(p.r),
        "lambda_c": num(p.lambda_c),
        "eta_bar": num(p.eta_bar),
        "p_c": num(p.p_c),
        "delta": num(p.delta),
        "p_a": num(p.p_a),
    })
}

fn estimate_json(e: &CountEstimate) -> Value {
    let breakdown: Map<String, Value> = e.breakdown.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    json!({
        "regime": e.regime.name(),
        "ln_count": num(e.ln()),
        "log10_count": format!("{:.6}", e.log10()),
        "count": e.log_count.to_scientific(6),
        "params": params_json(&e.params),
        "breakdown": breakdown,
    })
}

fn mc_json(e: &Estimate) -> Value {
    json!({
        "statistic": e.statistic,
        "value": num(e.value),
        "std_error": num(e.std_error),
        "samples": int(e.samples),
        "seed": int(e.seed),
    })
}

fn count(c: CountCommand) -> Result<Value> {
    match c {
        CountCommand::Asymptotic { n, m, regime } => {
            let p = derive_params(n, m)?;
            let regime = match regime {
                RegimeArg::Auto => Regime::auto(p.c),
                RegimeArg::Main => Regime::Main,
                RegimeArg::A => Regime::CaseA,
                RegimeArg::B => Regime::CaseB,
                RegimeArg::C => Regime::CaseC,
                RegimeArg::TwoEdge => Regime::TwoEdge,
                RegimeArg::Wright => Regime::Wright,
                RegimeArg::Mindeg2 => Regime::Mindeg2,
            };
            Ok(estimate_json(&formulas::log_count(regime, &p)?))
        }
        CountCommand::Exact { n, m, predicate, allow_large } => {
            let count = oracle::exact_count_with(n, m, predicate, allow_large, Execution::default())?;
            Ok(json!({ "count": int(count), "predicate": predicate.name(), "n": int(n), "m": int(m) }))
        }
        CountCommand::Degseq { file, regime } => {
            let d = read_degrees(&file)?;
            let regime = match regime {
                DegseqArg::A => DegseqRegime::A,
                DegseqArg::B => DegseqRegime::B,
                DegseqArg::C => DegseqRegime::C,
            };
            Ok(estimate_json(&formulas::log_count_degseq(&d, regime)?))
        }
        CountCommand::ExactDegseq { file, predicate } => {
            let d = read_degrees(&file)?;
            let count = oracle::exact_count_degseq(&d, predicate)?;
            let (fav, total) = oracle::favorable_matchings(&d, predicate)?;
            let prob = BigRational::new(BigInt::from(fav.clone()), BigInt::from(total.clone()));
            Ok(json!({
                "count": int(count),
                "predicate": predicate.name(),
                "favorable_matchings": int(fav),
                "total_matchings": int(total),
                "probability": int(prob),
            }))
        }
    }
}

fn sample_degrees(args: &SampleArgs, rng: &mut rand_chacha::ChaCha8Rng) -> Result<DegreeSequence> {
    match args.input.source()? {
        DegreeSource::Fixed(d) => {
            if args.conditioned {
                return Err(Error::domain("--conditioned needs --n and --m"));
            }
            Ok(d)
        }
        DegreeSource::Conditioned { n, m } => {
            derive_params(n, m)?;
            Ok(ConditionedSampler::new(n, m)?.sample(rng))
        }
    }
}

fn sample(s: SampleCommand) -> Result<Value> {
    match s {
        SampleCommand::Pairing(args) => {
            let mut rng = models::seeded_rng(args.seed);
            let d = sample_degrees(&args, &mut rng)?;
            let g = models::sample_pairing_with_rng(&d, &mut rng)?;
            Ok(json!({
                "seed": int(args.seed),
                "degrees": d.to_text().trim_end(),
                "edge_list": g.to_edge_list(),
            }))
        }
        SampleCommand::Kernel(args) => {
            let mut rng = models::seeded_rng(args.seed);
            let d = sample_degrees(&args, &mut rng)?;
            let kc = models::sample_kernel_config_with_rng(&d, &mut rng)?;
            let assignment: Vec<Value> = kc
                .kernel
                .labelled_edges()
                .zip(&kc.assignment)
                .map(|((u, v), list)| json!({ "u": u, "v": v, "path": list }))
                .collect();
            Ok(json!({
                "seed": int(args.seed),
                "degrees": d.to_text().trim_end(),
                "kernel_edge_list": kc.kernel.to_edge_list(),
                "assignment": assignment,
                "edge_list": kc.pre_kernel.to_edge_list(),
            }))
        }
    }
}

fn with_params(mut v: Value, spec: &SampleSpec) -> Value {
    if let (Some(p), Value::Object(map)) = (spec.params(), &mut v) {
        map.insert("params".into(), params_json(&p));
    }
    v
}

fn estimate(a: EstimateArgs) -> Result<Value> {
    let spec = SampleSpec::new(a.model, a.input.source()?);
    let ests = mc::estimate_events(&spec, &a.event, a.samples, a.seed, Execution::default())?;
    let results: Vec<Value> = ests.iter().map(mc_json).collect();
    Ok(with_params(json!({ "results": results }), &spec))
}

fn xyz(a: XyzArgs) -> Result<Value> {
    let spec = SampleSpec::new(Model::KernelConfig, a.input.source()?);
    let report = mc::collect_xyz(&spec, a.samples, a.seed, a.mode, Execution::default())?;
    let summary: Map<String, Value> = report.summary.iter().map(|(k, e)| (k.clone(), mc_json(e))).collect();
    let mut v = json!({
        "mode": serde_json::to_value(report.mode).map_err(|e| Error::Internal(e.to_string()))?,
        "summary": summary,
    });
    if a.per_sample {
        let rows: Vec<Value> = report.per_sample.iter().map(|s| json!([s.x, s.y, s.z])).collect();
        v["per_sample"] = Value::Array(rows);
    }
    Ok(with_params(v, &spec))
}

fn shape(a: ShapeArgs) -> Result<Value> {
    let spec = SampleSpec::new(Model::KernelConfig, a.input.source()?);
    let s = mc::kernel_shape_stats(&spec, a.samples, a.seed, Execution::default())?;
    let mut v = json!({
        "m_prime": mc_json(&s.m_prime),
        "degree3_ratio": mc_json(&s.degree3_ratio),
        "empty_edge_rate": mc_json(&s.empty_edge_rate),
    });
    if let (Some(t), Some(e)) = (s.target_m_prime, s.target_empty_rate) {
        v["target_m_prime"] = num(t);
        v["target_empty_edge_rate"] = num(e);
    }
    Ok(with_params(v, &spec))
}

fn typical(a: TypicalArgs) -> Result<Value> {
    let d = read_degrees(&a.file)?;
    if !d.has_even_sum() {
        return Err(Error::domain("degree sum is odd"));
    }
    let p = derive_params(d.len() as u64, d.m())?;
    let regime = match a.regime {
        TypicalArg::A => TypicalRegime::A,
        TypicalArg::B => TypicalRegime::B,
    };
    let r = models::classify_typical(&d, &p, regime, a.epsilon)?;
    let as_map = |m: &BTreeMap<String, f64>| -> Map<String, Value> { m.iter().map(|(k, v)| (k.clone(), num(*v))).collect() };
    Ok(json!({
        "regime": serde_json::to_value(r.regime).map_err(|e| Error::Internal(e.to_string()))?,
        "member": r.member,
        "violations": r.violations,
        "measured": as_map(&r.measured),
        "targets": as_map(&r.targets),
        "psi": num(r.psi),
        "notes": r.notes,
        "params": params_json(&p),
    }))
}

#[derive(Deserialize, Debug)]
struct Sweep {
    variable: String,
    values: Vec<f64>,
    #[serde(default)]
    fixed: BTreeMap<String, f64>,
    #[serde(default)]
    output: Option<String>,
}

/// `(n, m)` for one sweep point. Recognised keys: `n`, `m`, `c` (sets
/// `m = round(c n / 2)`) and `r_exponent` (sets `r = n^x`, rounded up to
/// even).
fn sweep_point(vars: &BTreeMap<String, f64>) -> Result<(u64, u64)> {
    let n = *vars.get("n").ok_or_else(|| Error::domain("sweep needs n"))? as u64;
    if let Some(&m) = vars.get("m") {
        return Ok((n, m as u64));
    }
    if let Some(&c) = vars.get("c") {
        return Ok((n, (c * n as f64 / 2.0).round() as u64));
    }
    if let Some(&x) = vars.get("r_exponent") {
        let mut r = (n as f64).powf(x).round() as u64;
        r += r % 2;
        return Ok((n, n + r / 2));
    }
    Err(Error::domain("sweep needs one of m, c or r_exponent"))
}

fn table(a: TableArgs) -> Result<String> {
    let text = std::fs::read_to_string(&a.sweep)?;
    let sweep: Sweep = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad sweep file: {e}")))?;
    let mut csv = String::from(
        "n,m,c,lambda_c,ln_main,ln_case_a,ln_case_c,ln_two_edge,ln_mindeg2,ln_wright,case_a_minus_main,case_c_minus_main\n",
    );
    for &v in &sweep.values {
        let mut vars = sweep.fixed.clone();
        vars.insert(sweep.variable.clone(), v);
        let (n, m) = sweep_point(&vars)?;
        let p = derive_params(n, m)?;
        let main = formulas::log_count_main(&p)?.ln();
        let a = formulas::log_count_case_a(&p)?.ln();
        let c = formulas::log_count_case_c(&p)?.ln();
        let two = formulas::log_count_two_edge(&p)?.ln();
        let md = formulas::log_count_mindeg2(&p)?.ln();
        let w = formulas::log_count_wright(n, m - n)?.ln();
        csv.push_str(&format!(
            "{n},{m},{},{},{main},{a},{c},{two},{md},{w},{},{}\n",
            p.c,
            p.lambda_c,
            a - main,
            c - main
        ));
    }
    match sweep.output.as_deref() {
        None | Some("-") => Ok(csv),
        Some(path) => {
            let target = a.sweep.parent().unwrap_or(Path::new(".")).join(path);
            std::fs::write(&target, &csv)?;
            Ok(String::new())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("biconn").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn params_command() {
        let (code, out, _) = call(&["params", "--n", "1000", "--m", "2000"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let l: f64 = v["lambda_c"].as_str().unwrap().parse().unwrap();
        assert!(l > 3.58 && l < 3.60);
    }

    #[test]
    fn usage_and_domain_errors() {
        assert_eq!(call(&["params", "--n", "10", "--bogus"]).0, 2);
        let (code, _, err) = call(&["params", "--n", "10", "--m", "5"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "domain");
    }

    #[test]
    fn sweep_points() {
        let mut v = BTreeMap::new();
        v.insert("n".to_string(), 1e6);
        v.insert("r_exponent".to_string(), 0.7);
        assert_eq!(sweep_point(&v).unwrap(), (1_000_000, 1_000_000 + 7925));
    }
}
