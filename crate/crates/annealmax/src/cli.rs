//! Batch command-line front end: `eval`, `solve`, `verify`, `gap`, `round`,
//! `reproduce`, `bench`. Machine-readable outputs: JSON summaries with
//! snake_case keys and 12-significant-digit numbers, CSV traces with fixed
//! column orders. Exit codes: 0 success, 1 acceptance/tolerance failure,
//! 2 usage or input error.

use crate::anneal::{self, Alg1Config};
use crate::anneal_matroid::{self, Alg2Config};
use crate::error::Result;
use crate::hardness::{self, TailScale};
use crate::io::{self, CombinationFile, InstanceFile, MatroidFile};
use crate::matroid::MatroidOracle;
use crate::multilinear::{self, EvalMode, Point};
use crate::oracle::{self, Constraint};
use crate::rounding;
use crate::setfn::{random_instance, RandomKind, SetFunctionOracle, Subset};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "annealmax", version, about = "Simulated-annealing submodular maximization")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the multilinear extension F at a point.
    Eval(EvalArgs),
    /// Run a maximization algorithm on an instance file.
    Solve(SolveArgs),
    /// Run the lemma property suite; nonzero exit on any violation.
    Verify(VerifyArgs),
    /// Symmetry-gap calculators for the hard instances.
    Gap(GapArgs),
    /// Round a serialized convex combination to a single independent set.
    Round(RoundArgs),
    /// Recompute the headline constants and compare against their references.
    Reproduce(ReproduceArgs),
    /// Batch runs over a seeded corpus, CSV output.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated coordinates in [0,1].
    #[arg(long, conflicts_with = "set")]
    point: Option<String>,
    /// Comma-separated element indices; evaluated at x_p(A).
    #[arg(long, requires = "p")]
    set: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Closed,
    Exact,
    Mc,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Temperature step for anneal1 / fixed p for baseline-ls-p.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Combination size N for anneal2 (delta is always 1/N).
    #[arg(long = "N")]
    n_sets: Option<usize>,
    /// Use the N = n^4 analysis schedule for anneal2.
    #[arg(long)]
    paper_schedule: bool,
    #[arg(long)]
    ls_eps: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Inline matroid JSON overriding the instance file's matroid.
    #[arg(long)]
    matroid: Option<String>,
    /// Write the per-temperature trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write plain "x,y" series (temperature vs F) for external plotting.
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
    /// Write the summary JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AlgArg {
    Anneal1,
    Anneal2,
    BaselineRandom,
    BaselineLsP,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug, Serialize)]
struct GapArgs {
    #[arg(long, value_enum)]
    instance: GapInstanceArg,
    #[arg(long)]
    k: Option<usize>,
    /// Use the k -> infinity closed forms.
    #[arg(long)]
    limit: bool,
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimize the gap over alpha.
    #[arg(long)]
    optimize_alpha: bool,
    #[arg(long)]
    ell: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GapInstanceArg {
    One,
    Two,
    Cardinality,
    Base,
}

#[derive(Args, Debug, Serialize)]
struct RoundArgs {
    #[arg(long)]
    combination: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    /// Print only the row with this name.
    #[arg(long)]
    row: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = CorpusArg::RandomDigraph)]
    corpus: CorpusArg,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Comma-separated algorithm list.
    #[arg(long, default_value = "anneal1,baseline-random")]
    algs: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append a wall-clock column (breaks bit-identical reruns).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CorpusArg {
    RandomDigraph,
    RandomCoverage,
    Mixed,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_TOLERANCE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Parse arguments from the process environment and run.
pub fn run() -> u8 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Gap(args) => cmd_gap(args),
        Command::Round(args) => cmd_round(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn default_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("ANNEALMAX_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

/// Round to 12 significant digits so JSON and CSV payloads are stable,
/// diff-able golden files.
fn sig12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // normalizes the -0.0 an empty sum produces
    }
    if !x.is_finite() {
        return x;
    }
    let exp = x.abs().log10().floor() as i32;
    let factor = 10f64.powi(11 - exp);
    (x * factor).round() / factor
}

fn num(x: f64) -> Value {
    json!(sig12(x))
}

fn subset_value(s: Subset) -> Value {
    json!(s.to_vec())
}

fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn manifest(
    command: &str,
    config: Value,
    seed: u64,
    instance_digest: String,
    started: Instant,
) -> Value {
    json!({
        "command": command,
        "config": config,
        "seed": seed,
        "instance_digest": instance_digest,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_clock_ms": started.elapsed().as_millis() as u64,
    })
}

fn emit(out: Option<&PathBuf>, payload: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(payload)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| crate::error::Error::Malformed(format!("bad index {t:?}: {e}")))
        })
        .collect()
}

fn mode_from_arg(arg: ModeArg, samples: u64, seed: u64) -> EvalMode {
    match arg {
        ModeArg::Closed => EvalMode::ClosedForm,
        ModeArg::Exact => EvalMode::Exact,
        ModeArg::Mc => EvalMode::MonteCarlo { samples, seed },
    }
}

fn cmd_eval(args: EvalArgs) -> Result<u8> {
    let started = Instant::now();
    let bytes = std::fs::read(&args.instance)?;
    let file = io::parse_instance(std::str::from_utf8(&bytes).map_err(|e| {
        crate::error::Error::Malformed(format!("instance is not UTF-8: {e}"))
    })?)?;
    let oracle = file.to_oracle()?;
    let seed = default_seed(args.seed);
    let x = match (&args.point, &args.set) {
        (Some(text), None) => {
            let coords: std::result::Result<Vec<f64>, _> =
                text.split(',').map(|t| t.trim().parse::<f64>()).collect();
            Point::new(coords.map_err(|e| {
                crate::error::Error::Malformed(format!("bad coordinate: {e}"))
            })?)?
        }
        (None, Some(set)) => {
            let a = Subset::from_elements(&parse_index_list(set)?);
            multilinear::mix_point(oracle.ground(), a, args.p.unwrap_or(0.5))?
        }
        _ => {
            return Err(crate::error::Error::Precondition(
                "provide exactly one of --point or --set".into(),
            ))
        }
    };
    let est = multilinear::f_eval(&oracle, &x, mode_from_arg(args.mode, args.samples, seed))?;
    let config = serde_json::to_value(&args)?;
    let payload = json!({
        "value": num(est.value),
        "std_err": est.std_err.map(num),
        "manifest": manifest("eval", config, seed, digest_bytes(&bytes), started),
    });
    emit(None, &payload)?;
    Ok(EXIT_OK)
}

fn resolve_matroid(
    file: &InstanceFile,
    override_json: Option<&str>,
) -> Result<Option<MatroidOracle>> {
    match override_json {
        Some(text) => {
            let parsed: MatroidFile = serde_json::from_str(text)?;
            Ok(Some(io::matroid_from_file(file.n, &parsed)?))
        }
        None => file.to_matroid(),
    }
}

fn write_csv(path: &PathBuf, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn fmt(x: f64) -> String {
    format!("{}", sig12(x))
}

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let started = Instant::now();
    let bytes = std::fs::read(&args.instance)?;
    let file = io::parse_instance(std::str::from_utf8(&bytes).map_err(|e| {
        crate::error::Error::Malformed(format!("instance is not UTF-8: {e}"))
    })?)?;
    let oracle = file.to_oracle()?;
    let matroid = resolve_matroid(&file, args.matroid.as_deref())?;
    let seed = default_seed(args.seed);
    let mode = args.mode.map(|m| mode_from_arg(m, 100_000, seed));

    let (best_value, witness, trace_rows, trace_header, extra): (f64, Subset, Vec<String>, &str, Value) =
        match args.alg {
            AlgArg::Anneal1 => {
                let cfg = Alg1Config {
                    delta: args.delta.unwrap_or(0.01),
                    ls_eps: args.ls_eps.unwrap_or(1e-9),
                    mode,
                    seed,
                    ..Alg1Config::default()
                };
                let trace = anneal::run_alg1(&oracle, &cfg)?;
                let rows = trace
                    .records
                    .iter()
                    .map(|r| {
                        format!(
                            "{},{},{},{},{}",
                            fmt(r.p),
                            fmt(r.f_point),
                            fmt(r.f_set),
                            fmt(r.f_complement),
                            fmt(r.best_so_far)
                        )
                    })
                    .collect();
                (trace.best_value, trace.best_set, rows, "p,F,f_A,f_Acomp,best", Value::Null)
            }
            AlgArg::Anneal2 => {
                let Some(m) = matroid.as_ref() else {
                    return Err(crate::error::Error::Precondition(
                        "anneal2 needs a matroid (instance file or --matroid)".into(),
                    ));
                };
                // delta and N are tied by delta = 1/N.
                let n_sets = match (args.n_sets, args.delta) {
                    (Some(n), _) => Some(n),
                    (None, Some(d)) if d > 0.0 => Some((1.0 / d).round() as usize),
                    _ => None,
                };
                let cfg = Alg2Config {
                    n_sets,
                    paper_schedule: args.paper_schedule,
                    ls_eps: args.ls_eps.unwrap_or(1e-9),
                    mode,
                    seed,
                    ..Alg2Config::default()
                };
                let out = anneal_matroid::run_alg2(&oracle, m, &cfg)?;
                let rows = out
                    .trace
                    .iter()
                    .map(|r| {
                        format!(
                            "{},{},{},{}",
                            fmt(r.t),
                            fmt(r.f_point),
                            fmt(r.best_comp),
                            fmt(r.matching_weight)
                        )
                    })
                    .collect();
                let extra = json!({
                    "rounded_value": num(out.rounded_value),
                    "rounded_set": subset_value(out.rounded_set),
                });
                (
                    out.best_value,
                    out.best_set,
                    rows,
                    "t,F,best_complementary,matching_weight",
                    extra,
                )
            }
            AlgArg::BaselineRandom => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut mask = 0u32;
                for i in 0..oracle.n() {
                    if rng.gen::<bool>() {
                        mask |= 1 << i;
                    }
                }
                let s = Subset(mask);
                (oracle.eval(s)?, s, Vec::new(), "", Value::Null)
            }
            AlgArg::BaselineLsP => {
                let p = args.p.unwrap_or(2.0 / 3.0);
                let cfg = Alg1Config {
                    ls_eps: args.ls_eps.unwrap_or(1e-9),
                    mode,
                    seed,
                    ..Alg1Config::default()
                };
                let a = anneal::local_search_at_p(&oracle, Subset::EMPTY, p, &cfg)?;
                let comp = a.complement(oracle.n());
                let (fa, fc) = (oracle.eval(a)?, oracle.eval(comp)?);
                if fa >= fc {
                    (fa, a, Vec::new(), "", Value::Null)
                } else {
                    (fc, comp, Vec::new(), "", Value::Null)
                }
            }
        };

    if let Some(path) = &args.trace {
        write_csv(path, trace_header, &trace_rows)?;
    }
    if let Some(path) = &args.emit_plot_data {
        // First two trace columns are already an x,y series.
        let series: Vec<String> = trace_rows
            .iter()
            .map(|row| row.splitn(3, ',').take(2).collect::<Vec<_>>().join(","))
            .collect();
        write_csv(path, "x,y", &series)?;
    }

    // Ground truth for small instances.
    let (opt, ratio) = if oracle.n() <= 20 {
        let constraint = match (args.alg, matroid.as_ref()) {
            (AlgArg::Anneal2, Some(m)) => Constraint::MatroidIndependent(m),
            _ => Constraint::Unconstrained,
        };
        let bf = oracle::brute_force_max(&oracle, constraint)?;
        let ratio = if bf.value > 0.0 { Some(best_value / bf.value) } else { None };
        (Some(bf.value), ratio)
    } else {
        (None, None)
    };

    let config = serde_json::to_value(&args)?;
    let mut payload = json!({
        "best_value": num(best_value),
        "witness": subset_value(witness),
        "opt": opt.map(num),
        "ratio_vs_bruteforce": ratio.map(num),
        "manifest": manifest("solve", config, seed, digest_bytes(&bytes), started),
    });
    if let Value::Object(extra_map) = extra {
        if let Value::Object(map) = &mut payload {
            for (k, v) in extra_map {
                map.insert(k, v);
            }
        }
    }
    emit(args.out.as_ref(), &payload)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let seed = default_seed(args.seed);
    let report = oracle::run_default_lemma_corpus(seed)?;
    let mut failed = false;
    for check in &report.checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        println!(
            "LEMMA {:33} trials={:5} max_violation={:>13.6e} tol={:>8.0e} {}",
            check.name, check.trials, check.max_violation, check.tolerance, status
        );
        if !check.passed() {
            failed = true;
            if let Some(w) = &check.witness {
                println!("      witness: {w}");
            }
        }
    }
    Ok(if failed { EXIT_TOLERANCE } else { EXIT_OK })
}

fn gap_report_value(report: &hardness::GapReport) -> Value {
    json!({
        "opt": num(report.opt),
        "gap_value": num(report.gap_value),
        "ratio": num(report.ratio()),
        "q": report.q.map(num),
        "z": report.z.map(num),
        "alpha": report.alpha.map(num),
        "k": report.k,
        "ell": report.ell,
        "escape_factor": report.escape_factor.map(num),
        "implied_exponent": report.implied_exponent.map(num),
        "method": match report.method {
            hardness::GapMethod::ClosedForm => "closed-form",
            hardness::GapMethod::Numeric => "numeric",
        },
    })
}

fn cmd_gap(args: GapArgs) -> Result<u8> {
    let scale = if args.limit {
        TailScale::Limit
    } else {
        TailScale::Finite(args.k.unwrap_or(1000))
    };
    let report = match args.instance {
        GapInstanceArg::One => hardness::gap_instance1(scale)?,
        GapInstanceArg::Base => hardness::gap_base_ell(args.ell.unwrap_or(2), scale)?,
        GapInstanceArg::Two => match args.alpha {
            Some(alpha) if !args.optimize_alpha => hardness::gap_instance2(scale, alpha)?,
            _ => hardness::min_gap_instance2(scale)?,
        },
        GapInstanceArg::Cardinality => match args.alpha {
            Some(alpha) if !args.optimize_alpha => hardness::gap_cardinality(scale, alpha)?,
            _ => hardness::min_gap_cardinality(scale)?,
        },
    };
    emit(None, &gap_report_value(&report))?;
    Ok(EXIT_OK)
}

fn cmd_round(args: RoundArgs) -> Result<u8> {
    let started = Instant::now();
    let bytes = std::fs::read(&args.combination)?;
    let file: CombinationFile = serde_json::from_str(std::str::from_utf8(&bytes).map_err(|e| {
        crate::error::Error::Malformed(format!("combination is not UTF-8: {e}"))
    })?)?;
    let oracle = file.instance.to_oracle()?;
    let Some(matroid) = file.instance.to_matroid()? else {
        return Err(crate::error::Error::Precondition(
            "combination file needs a matroid".into(),
        ));
    };
    let sets: Vec<Subset> = file.sets.iter().map(|s| Subset::from_elements(s)).collect();
    let cc = crate::matroid::ConvexCombination::new(oracle.ground(), sets, &matroid)?;
    let out = rounding::merge_round(&oracle, &matroid, &cc)?;
    let payload = json!({
        "set": subset_value(out.set),
        "value": num(out.value),
        "input_value": num(out.input_value),
        "merge_steps": out.steps.len(),
        "manifest": manifest("round", json!({}), 0, digest_bytes(&bytes), started),
    });
    emit(args.out.as_ref(), &payload)?;
    Ok(EXIT_OK)
}

struct ReproduceRow {
    name: &'static str,
    computed: f64,
    reference: f64,
    tolerance: f64,
    /// Reference is a lower bound rather than a target.
    exceeds: bool,
    note: &'static str,
}

impl ReproduceRow {
    fn passed(&self) -> bool {
        if self.exceeds {
            self.computed > self.reference
        } else {
            (self.computed - self.reference).abs() <= self.tolerance
        }
    }
}

fn reproduce_rows() -> Result<Vec<ReproduceRow>> {
    let mut rows = Vec::new();

    let beta1 = anneal::solve_beta_unconstrained();
    rows.push(ReproduceRow {
        name: "beta-unconstrained",
        computed: beta1,
        reference: 0.41,
        tolerance: 0.0,
        exceeds: true,
        note: "unconstrained guarantee exceeds 0.41",
    });
    rows.push(ReproduceRow {
        name: "beta-unconstrained-fixed-point",
        computed: anneal::unconstrained_fixed_point_residual(beta1)?.abs(),
        reference: 0.0,
        tolerance: 1e-6,
        exceeds: false,
        note: "residual of the annealing fixed point",
    });
    rows.push(ReproduceRow {
        name: "p0-unconstrained",
        computed: anneal::unconstrained_p0(),
        reference: 0.585786437626905,
        tolerance: 1e-12,
        exceeds: false,
        note: "sweep start sqrt(2)/(1+sqrt(2))",
    });

    let beta2 = anneal_matroid::solve_beta_matroid();
    rows.push(ReproduceRow {
        name: "beta-matroid",
        computed: beta2,
        reference: 0.325,
        tolerance: 0.0,
        exceeds: true,
        note: "matroid guarantee exceeds 0.325",
    });
    rows.push(ReproduceRow {
        name: "t0-matroid",
        computed: anneal_matroid::matroid_t0(),
        reference: 0.381966011250105,
        tolerance: 1e-12,
        exceeds: false,
        note: "(3 - sqrt 5)/2",
    });
    rows.push(ReproduceRow {
        name: "v0-matroid",
        computed: anneal_matroid::matroid_v0(),
        reference: 0.309016994374947,
        tolerance: 1e-12,
        exceeds: false,
        note: "(1 - t0)/2",
    });

    let fixture = crate::setfn::tight_example();
    let trajectory = anneal::verify_tight_trajectory(&fixture)?;
    rows.push(ReproduceRow {
        name: "tight-optimum",
        computed: trajectory.opt,
        reference: 35.0,
        tolerance: 0.0,
        exceeds: false,
        note: "brute-force optimum of the 8-vertex fixture",
    });
    let crossing = multilinear::f_eval(
        &fixture,
        &multilinear::mix_point(fixture.ground(), trajectory.first_set, 0.75)?,
        EvalMode::ClosedForm,
    )?
    .value;
    rows.push(ReproduceRow {
        name: "tight-crossing-f",
        computed: crossing,
        reference: 16.25,
        tolerance: 0.0,
        exceeds: false,
        note: "F at the p = 3/4 crossing",
    });
    rows.push(ReproduceRow {
        name: "tight-ceiling",
        computed: trajectory.ceiling,
        reference: 17.0,
        tolerance: 0.0,
        exceeds: false,
        note: "adversarial discrete ceiling",
    });
    rows.push(ReproduceRow {
        name: "tight-ratio",
        computed: trajectory.ratio,
        reference: 17.0 / 35.0,
        tolerance: 1e-15,
        exceeds: false,
        note: "17/35 adversarial approximation ratio",
    });

    rows.push(ReproduceRow {
        name: "gap-one",
        computed: hardness::gap_instance1(TailScale::Limit)?.gap_value,
        reference: 0.393469340287367,
        tolerance: 1e-6,
        exceeds: false,
        note: "1 - e^{-1/2}",
    });
    for (name, ell, reference) in [
        ("gap-base-ell-2", 2usize, 0.393469340287367),
        ("gap-base-ell-3", 3, 0.283468689426211),
        ("gap-base-ell-4", 4, 0.221199216928595),
        ("gap-base-ell-5", 5, 0.181269246922018),
    ] {
        rows.push(ReproduceRow {
            name,
            computed: hardness::gap_base_ell(ell, TailScale::Limit)?.gap_value,
            reference,
            tolerance: 1e-6,
            exceeds: false,
            note: "1 - e^{-1/ell}",
        });
    }

    let two = hardness::min_gap_instance2(TailScale::Limit)?;
    rows.push(ReproduceRow {
        name: "gap-two",
        computed: two.gap_value,
        reference: 0.4773,
        tolerance: 5e-4,
        exceeds: false,
        note: "matroid-independence hardness threshold",
    });
    rows.push(ReproduceRow {
        name: "alpha-two",
        computed: two.alpha.unwrap_or(f64::NAN),
        reference: 0.3513,
        tolerance: 5e-3,
        exceeds: false,
        note: "worst weight split for instance 2",
    });

    let card = hardness::min_gap_cardinality(TailScale::Limit)?;
    rows.push(ReproduceRow {
        name: "gap-card",
        computed: card.gap_value,
        reference: 0.49098,
        tolerance: 5e-4,
        exceeds: false,
        note: "cardinality hardness threshold",
    });
    rows.push(ReproduceRow {
        name: "alpha-card",
        computed: card.alpha.unwrap_or(f64::NAN),
        reference: 0.15,
        tolerance: 1e-2,
        exceeds: false,
        note: "worst weight split for the cardinality instance",
    });

    Ok(rows)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<u8> {
    let rows = reproduce_rows()?;
    let mut failed = false;
    let mut shown = 0;
    println!(
        "{:32} {:>18} {:>18} {:>9} {:6}",
        "row", "computed", "reference", "tol", "status"
    );
    for row in &rows {
        if let Some(filter) = &args.row {
            if row.name != filter {
                continue;
            }
        }
        shown += 1;
        let status = if row.passed() { "PASS" } else { "FAIL" };
        let rel = if row.exceeds { ">" } else { "~" };
        println!(
            "{:32} {:>18.12} {rel}{:>17.12} {:>9.0e} {:6}  {}",
            row.name, sig12(row.computed), row.reference, row.tolerance, status, row.note
        );
        if !row.passed() {
            failed = true;
            println!(
                "      diff: computed {} vs reference {} (tolerance {})",
                row.computed, row.reference, row.tolerance
            );
        }
    }
    if shown == 0 {
        eprintln!("error: no row named {:?}", args.row);
        return Ok(EXIT_USAGE);
    }
    Ok(if failed { EXIT_TOLERANCE } else { EXIT_OK })
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let seed = default_seed(args.seed);
    let algs: Vec<AlgArg> = args
        .algs
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim() {
            "anneal1" => Ok(AlgArg::Anneal1),
            "anneal2" => Ok(AlgArg::Anneal2),
            "baseline-random" => Ok(AlgArg::BaselineRandom),
            "baseline-ls-p" => Ok(AlgArg::BaselineLsP),
            other => Err(crate::error::Error::UnsupportedKind(other.into())),
        })
        .collect::<Result<_>>()?;
    if args.n > 20 {
        return Err(crate::error::Error::Precondition(
            "bench ratios need n <= 20 for brute force".into(),
        ));
    }

    struct Job {
        instance_id: usize,
        alg: AlgArg,
        oracle: SetFunctionOracle,
        matroid: MatroidOracle,
        seed: u64,
    }
    let mut jobs = Vec::new();
    for i in 0..args.count {
        let kind = match args.corpus {
            CorpusArg::RandomDigraph => RandomKind::DigraphCut,
            CorpusArg::RandomCoverage => RandomKind::Coverage,
            CorpusArg::Mixed => {
                if i % 2 == 0 {
                    RandomKind::DigraphCut
                } else {
                    RandomKind::Coverage
                }
            }
        };
        let oracle = random_instance(kind, args.n, 0.4, (1.0, 10.0), seed.wrapping_add(i as u64))?;
        let matroid = MatroidOracle::uniform(args.n, args.n.div_ceil(3))?;
        for &alg in &algs {
            jobs.push(Job {
                instance_id: i,
                alg,
                oracle: oracle.clone(),
                matroid: matroid.clone(),
                seed: seed.wrapping_add(i as u64),
            });
        }
    }

    type BenchRow = (usize, AlgArg, f64, f64, u128);
    let results: Result<Vec<BenchRow>> = jobs
        .par_iter()
        .map(|job| {
            let started = Instant::now();
            let value = match job.alg {
                AlgArg::Anneal1 => {
                    let cfg = Alg1Config { seed: job.seed, ..Alg1Config::default() };
                    anneal::run_alg1(&job.oracle, &cfg)?.best_value
                }
                AlgArg::Anneal2 => {
                    let cfg = Alg2Config { seed: job.seed, ..Alg2Config::default() };
                    anneal_matroid::run_alg2(&job.oracle, &job.matroid, &cfg)?.best_value
                }
                AlgArg::BaselineRandom => {
                    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
                    let mut mask = 0u32;
                    for i in 0..job.oracle.n() {
                        if rng.gen::<bool>() {
                            mask |= 1 << i;
                        }
                    }
                    job.oracle.eval(Subset(mask))?
                }
                AlgArg::BaselineLsP => {
                    let cfg = Alg1Config { seed: job.seed, ..Alg1Config::default() };
                    let a = anneal::local_search_at_p(
                        &job.oracle,
                        Subset::EMPTY,
                        2.0 / 3.0,
                        &cfg,
                    )?;
                    job.oracle
                        .eval(a)?
                        .max(job.oracle.eval(a.complement(job.oracle.n()))?)
                }
            };
            let constraint = match job.alg {
                AlgArg::Anneal2 => Constraint::MatroidIndependent(&job.matroid),
                _ => Constraint::Unconstrained,
            };
            let opt = oracle::brute_force_max(&job.oracle, constraint)?.value;
            Ok((job.instance_id, job.alg, value, opt, started.elapsed().as_millis()))
        })
        .collect();
    let mut results = results?;
    results.sort_by(|a, b| (a.0, format!("{:?}", a.1)).cmp(&(b.0, format!("{:?}", b.1))));

    let alg_name = |alg: AlgArg| match alg {
        AlgArg::Anneal1 => "anneal1",
        AlgArg::Anneal2 => "anneal2",
        AlgArg::BaselineRandom => "baseline-random",
        AlgArg::BaselineLsP => "baseline-ls-p",
    };
    let header = if args.timings {
        "instance,alg,value,opt,ratio,time_ms"
    } else {
        "instance,alg,value,opt,ratio"
    };
    let mut rows = Vec::with_capacity(results.len());
    for (id, alg, value, opt, ms) in &results {
        let ratio = if *opt > 0.0 { fmt(value / opt) } else { String::from("") };
        let mut row = format!("{},{},{},{},{}", id, alg_name(*alg), fmt(*value), fmt(*opt), ratio);
        if args.timings {
            row.push_str(&format!(",{ms}"));
        }
        rows.push(row);
    }
    match &args.out {
        Some(path) => write_csv(path, header, &rows)?,
        None => {
            println!("{header}");
            for row in &rows {
                println!("{row}");
            }
        }
    }

    // Aggregates to stderr so the CSV stays clean.
    for &alg in &algs {
        let ratios: Vec<f64> = results
            .iter()
            .filter(|(_, a, _, opt, _)| *a == alg && *opt > 0.0)
            .map(|(_, _, v, opt, _)| v / opt)
            .collect();
        if !ratios.is_empty() {
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            eprintln!(
                "aggregate {}: runs={} min_ratio={:.6} mean_ratio={:.6}",
                alg_name(alg),
                ratios.len(),
                min,
                mean
            );
        }
    }
    Ok(EXIT_OK)
}
