//! Command-line front end: solvers, oracles, verification, rendering and
//! instance conversion over JSON files.
//!
//! Exit codes: 0 success/feasible, 1 infeasible or failed check, 2 resource
//! limit, 64 usage or parse error, 65 data that cannot be rendered or
//! converted.

pub mod format;
pub mod ngcut;
pub mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use packclass::model::validate_packing;
use packclass::oracle::{self, OracleConfig};
use packclass::packing_class::verify_packing_class;
use packclass::solve::Dismissal;
use packclass::{
    solve_okp, solve_opp, solve_spp, BoxItem, Instance, Limits, OkpOutcome, OkpSolution, PackingClass, Rational,
    SppOutcome, Verdict,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use format::{load_evidence, load_instance, InstanceFile, Num, ResultFile, VerdictName};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Environment variable overriding the default time limit, in seconds.
pub const TIME_LIMIT_ENV: &str = "PACKCLASS_TIME_LIMIT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) => m,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "packclass", version, about = "Exact orthogonal packing via packing classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance JSON file.
    instance: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Wall-clock limit in seconds (default: $PACKCLASS_TIME_LIMIT or 60).
    #[arg(long)]
    time_limit: Option<f64>,
    /// Search node limit.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Skip boxes that do not fit the container instead of failing.
    #[arg(long)]
    drop_oversized: bool,
    /// Disable the heuristic and quick-infeasibility shortcuts.
    #[arg(long)]
    no_shortcuts: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleKind {
    Opp,
    Okp,
    Spp,
    Classes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Problem {
    Opp,
    Okp,
    Spp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SourceFormat {
    Ngcut,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether all boxes fit.
    Opp(SolveArgs),
    /// Maximize the value of the packed boxes.
    Okp(SolveArgs),
    /// Minimize the last container side.
    Spp {
        #[command(flatten)]
        args: SolveArgs,
        /// Fixed sides W_1..W_{d-1}, comma separated (default: from the file).
        #[arg(long, value_delimiter = ',')]
        fixed_dims: Option<Vec<String>>,
    },
    /// Check a packing or a packing class against an instance.
    Verify {
        instance: PathBuf,
        /// File with a "positions" map (e.g. a result file).
        #[arg(long, required_unless_present = "class")]
        packing: Option<PathBuf>,
        /// File with a "class" list of per-axis edge lists.
        #[arg(long)]
        class: Option<PathBuf>,
    },
    /// Draw a 2-D result as SVG.
    Render { instance: PathBuf, result: PathBuf, out: PathBuf },
    /// Convert foreign instance files into instance JSON files.
    Convert {
        #[arg(long, value_enum)]
        from: SourceFormat,
        input: PathBuf,
        /// Output directory; one file per instance.
        out: PathBuf,
    },
    /// Run a brute-force oracle (small instances only).
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        fixed_dims: Option<Vec<String>>,
        /// Maximum number of classes listed by `classes`.
        #[arg(long, default_value_t = 100)]
        cap: usize,
    },
    /// Compare solvers against oracles on random instances.
    Sweep {
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Seed for the instance generator (solvers are deterministic).
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        max_boxes: usize,
        #[arg(long, default_value_t = 3)]
        max_size: i64,
        #[arg(long, default_value_t = 4)]
        container: i64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "opp,okp,spp")]
        problems: Vec<Problem>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Opp(a) => cmd_opp(&a),
        Command::Okp(a) => cmd_okp(&a),
        Command::Spp { args, fixed_dims } => cmd_spp(&args, fixed_dims.as_deref()),
        Command::Verify { instance, packing, class } => cmd_verify(&instance, packing.as_deref(), class.as_deref()),
        Command::Render { instance, result, out } => cmd_render(&instance, &result, &out),
        Command::Convert { from: SourceFormat::Ngcut, input, out } => cmd_convert(&input, &out),
        Command::Oracle { kind, instance, output, fixed_dims, cap } => {
            cmd_oracle(kind, &instance, output.as_deref(), fixed_dims.as_deref(), cap)
        }
        Command::Sweep { count, seed, jobs, dim, max_boxes, max_size, container, problems, output } => {
            let cfg = SweepConfig { count, seed, dim, max_boxes, max_size, container, problems };
            cmd_sweep(&cfg, jobs, output.as_deref())
        }
    }
}

fn time_limit(flag: Option<f64>) -> Result<Duration, CliError> {
    let secs = match (flag, std::env::var(TIME_LIMIT_ENV)) {
        (Some(s), _) => s,
        (None, Ok(v)) => v
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{TIME_LIMIT_ENV}={v:?} is not a number of seconds")))?,
        (None, Err(_)) => return Ok(Limits::default().time_limit),
    };
    if !(secs.is_finite() && secs >= 0.0) {
        return Err(CliError::Usage(format!("time limit {secs} must be a non-negative number of seconds")));
    }
    Ok(Duration::from_secs_f64(secs))
}

fn limits(a: &SolveArgs) -> Result<Limits, CliError> {
    let mut l = Limits::default().with_time_limit(time_limit(a.time_limit)?);
    if let Some(n) = a.max_nodes {
        l = l.with_max_nodes(n);
    }
    if a.no_shortcuts {
        l = l.search_only();
    }
    Ok(l)
}

fn emit(result: &impl Serialize, output: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(result).expect("results serialize") + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn prunes(p: &BTreeMap<&'static str, u64>) -> BTreeMap<String, u64> {
    p.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn cmd_opp(a: &SolveArgs) -> Result<i32, CliError> {
    let (inst, dropped) = load_instance(&a.instance)?.instance(a.drop_oversized)?;
    let out = solve_opp(&inst, &limits(a)?);
    let (mut result, code) = match &out.verdict {
        Verdict::Feasible { packing, class } => (
            ResultFile::new("opp", VerdictName::Feasible).with_packing(packing).with_class(class),
            EXIT_OK,
        ),
        Verdict::Infeasible => (ResultFile::new("opp", VerdictName::Infeasible), EXIT_NEGATIVE),
        Verdict::ResourceLimit => (ResultFile::new("opp", VerdictName::ResourceLimit), EXIT_LIMIT),
    };
    let s = &out.stats;
    result.dropped = dropped;
    result.stats.nodes = s.nodes;
    result.stats.prunes = prunes(&s.prunes);
    result.stats.wall_time_s = out.elapsed.as_secs_f64();
    result.stats.extra = BTreeMap::from([
        ("max_depth".into(), json!(s.max_depth)),
        ("propagated".into(), json!(s.propagated)),
        ("leaf_checks".into(), json!(s.leaf_checks)),
        ("heuristic_hit".into(), json!(s.heuristic_hit)),
        ("quick_infeasible".into(), json!(s.quick_infeasible)),
    ]);
    eprintln!("opp: {:?} after {} nodes", result.verdict, s.nodes);
    emit(&result, a.output.as_deref())?;
    Ok(code)
}

fn dismissal_name(d: Dismissal) -> &'static str {
    match d {
        Dismissal::QuickInfeasible => "quick_infeasible",
        Dismissal::ContainsInfeasible => "contains_infeasible",
        Dismissal::OppInfeasible => "opp_infeasible",
    }
}

fn okp_result(verdict: VerdictName, sol: Option<&OkpSolution>, elapsed: Duration) -> ResultFile {
    let mut r = ResultFile::new("okp", verdict);
    r.stats.wall_time_s = elapsed.as_secs_f64();
    if let Some(s) = sol {
        r = r.with_packing(&s.packing);
        r.value = Some(Num(s.value));
        let p = &s.proof;
        r.stats.nodes = p.opp_stats.nodes;
        r.stats.prunes = prunes(&p.opp_stats.prunes);
        let dismissed: Vec<_> =
            p.dismissed.iter().map(|(ids, why)| json!({"boxes": ids, "reason": dismissal_name(*why)})).collect();
        r.stats.extra = BTreeMap::from([
            ("subsets_examined".into(), json!(p.subsets_examined)),
            ("opp_calls".into(), json!(p.opp_calls)),
            ("dismissed_total".into(), json!(p.dismissed_total)),
            ("dismissed".into(), json!(dismissed)),
        ]);
    }
    r
}

fn cmd_okp(a: &SolveArgs) -> Result<i32, CliError> {
    let (inst, dropped) = load_instance(&a.instance)?.instance(a.drop_oversized)?;
    let start = Instant::now();
    let (mut result, code) = match solve_okp(&inst, &limits(a)?) {
        OkpOutcome::Optimal(s) => (okp_result(VerdictName::Optimal, Some(&s), start.elapsed()), EXIT_OK),
        OkpOutcome::ResourceLimit { best_known } => {
            (okp_result(VerdictName::ResourceLimit, best_known.as_ref(), start.elapsed()), EXIT_LIMIT)
        }
    };
    result.dropped = dropped;
    match result.value {
        Some(v) => eprintln!("okp: {:?}, value {v} with {} boxes", result.verdict, result.positions.len()),
        None => eprintln!("okp: {:?}", result.verdict),
    }
    emit(&result, a.output.as_deref())?;
    Ok(code)
}

fn fixed_dims(file: &InstanceFile, flag: Option<&[String]>) -> Result<Vec<Rational>, CliError> {
    let fixed = match flag {
        Some(v) => v.iter().map(|s| Num::parse(s).map(|n| n.0)).collect::<Result<Vec<_>, _>>().map_err(CliError::Usage)?,
        None => file.container()[..file.d - 1].to_vec(),
    };
    if fixed.len() + 1 != file.d {
        return Err(CliError::Usage(format!("--fixed-dims needs d - 1 = {} values, got {}", file.d - 1, fixed.len())));
    }
    if fixed.iter().any(|w| *w <= Rational::from(0)) {
        return Err(CliError::Usage("fixed sides must be positive".into()));
    }
    Ok(fixed)
}

/// Boxes for a strip problem, optionally without those wider than the strip.
fn strip_boxes(file: &InstanceFile, fixed: &[Rational], drop: bool) -> (Vec<BoxItem>, Vec<String>) {
    let (kept, gone): (Vec<BoxItem>, Vec<BoxItem>) =
        file.box_items().into_iter().partition(|b| !drop || b.size.iter().zip(fixed).all(|(w, cap)| w <= cap));
    (kept, gone.into_iter().map(|b| b.id).collect())
}

fn cmd_spp(a: &SolveArgs, flag: Option<&[String]>) -> Result<i32, CliError> {
    let file = load_instance(&a.instance)?;
    let fixed = fixed_dims(&file, flag)?;
    let (boxes, dropped) = strip_boxes(&file, &fixed, a.drop_oversized);
    let start = Instant::now();
    let (mut result, code) = match solve_spp(&boxes, &fixed, &limits(a)?) {
        Ok(SppOutcome::Optimal(s)) => {
            let mut r = ResultFile::new("spp", VerdictName::Optimal).with_packing(&s.packing);
            r.height = Some(Num(s.height));
            let probes: Vec<_> = s.probes.iter().map(|(h, ok)| json!({"height": Num(*h), "feasible": ok})).collect();
            r.stats.extra.insert("probes".into(), json!(probes));
            (r, EXIT_OK)
        }
        Ok(SppOutcome::ResourceLimit) => (ResultFile::new("spp", VerdictName::ResourceLimit), EXIT_LIMIT),
        Err(packclass::Error::InfeasibleCrossSection(id)) => {
            eprintln!("spp: box {id} is wider than the strip");
            (ResultFile::new("spp", VerdictName::Infeasible), EXIT_NEGATIVE)
        }
        Err(e) => return Err(CliError::Usage(format!("invalid strip instance: {e}"))),
    };
    result.dropped = dropped;
    result.stats.wall_time_s = start.elapsed().as_secs_f64();
    match result.height {
        Some(h) => eprintln!("spp: {:?}, height {h}", result.verdict),
        None => eprintln!("spp: {:?}", result.verdict),
    }
    emit(&result, a.output.as_deref())?;
    Ok(code)
}

fn cmd_verify(instance: &Path, packing: Option<&Path>, class: Option<&Path>) -> Result<i32, CliError> {
    let (inst, _) = load_instance(instance)?.instance(false)?;
    let mut ok = true;
    if let Some(path) = packing {
        let p = load_evidence(path)?
            .packing()
            .ok_or_else(|| CliError::Usage(format!("{}: no \"positions\" field", path.display())))?;
        match validate_packing(&p, &inst) {
            Ok(report) if report.valid => println!("packing: valid ({} boxes)", p.len()),
            Ok(report) => {
                ok = false;
                println!("packing: INVALID");
                for v in &report.violations {
                    println!("  {v:?}");
                }
            }
            Err(e) => {
                ok = false;
                println!("packing: INVALID ({e})");
            }
        }
    }
    if let Some(path) = class {
        let edges = load_evidence(path)?
            .class
            .ok_or_else(|| CliError::Usage(format!("{}: no \"class\" field", path.display())))?;
        let c = PackingClass::from_edge_lists(&inst, &edges)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let report = verify_packing_class(&c, &inst).map_err(|e| CliError::Usage(e.to_string()))?;
        if report.all_ok() {
            println!("class: valid packing class");
        } else {
            ok = false;
            println!("class: NOT a packing class");
            if let Some((a, b)) = &report.shared_edge {
                println!("  P3: edge {{{a}, {b}}} is present on every axis");
            }
            for (i, axis) in report.axes.iter().enumerate() {
                if let Some(w) = &axis.interval_witness {
                    let g = c.graph(i);
                    let named = |vs: &[usize]| vs.iter().map(|&v| g.id(v).to_string()).collect::<Vec<_>>();
                    match w {
                        packclass::IntervalWitness::ChordlessCycle(cyc) => {
                            println!("  P1 axis {}: chordless cycle {:?}", i + 1, named(cyc))
                        }
                        packclass::IntervalWitness::AsteroidalTriple(t) => {
                            println!("  P1 axis {}: asteroidal triple {:?}", i + 1, named(t))
                        }
                    }
                }
                if let Some(s) = &axis.overweight_stable_set {
                    println!("  P2 axis {}: stable set {s:?} is too wide", i + 1);
                }
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_render(instance: &Path, result: &Path, out: &Path) -> Result<i32, CliError> {
    let file = load_instance(instance)?;
    if file.d != 2 {
        return Err(CliError::Data(format!("render needs a 2-dimensional instance, got d = {}", file.d)));
    }
    let ev = load_evidence(result)?;
    if matches!(ev.verdict, Some(VerdictName::Infeasible)) {
        return Err(CliError::Data("result is infeasible; nothing to draw".into()));
    }
    let packing = ev.packing().ok_or_else(|| CliError::Data(format!("{}: no \"positions\" field", result.display())))?;
    let (mut inst, _) = file.instance(true)?;
    if let Some(h) = ev.height {
        inst = inst.with_container(vec![inst.container()[0], h.0]).map_err(|e| CliError::Data(e.to_string()))?;
    }
    match validate_packing(&packing, &inst) {
        Ok(r) if r.valid => {}
        Ok(r) => return Err(CliError::Data(format!("packing does not validate: {:?}", r.violations))),
        Err(e) => return Err(CliError::Data(format!("packing does not validate: {e}"))),
    }
    std::fs::write(out, render::svg(&inst, &packing)).map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
    Ok(EXIT_OK)
}

fn cmd_convert(input: &Path, out: &Path) -> Result<i32, CliError> {
    let text = format::read_text(input)?;
    let converted = ngcut::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    for (k, c) in converted.iter().enumerate() {
        let path = out.join(format!("{stem}-{}.json", k + 1));
        emit(&c.instance, Some(&path))?;
        println!("instance {}: {} boxes -> {} [rule: {}]", k + 1, c.instance.boxes.len(), path.display(), c.rule);
    }
    if converted.is_empty() {
        println!("no instances in {}", input.display());
    }
    Ok(EXIT_OK)
}

fn cmd_oracle(
    kind: OracleKind,
    instance: &Path,
    output: Option<&Path>,
    flag: Option<&[String]>,
    cap: usize,
) -> Result<i32, CliError> {
    let file = load_instance(instance)?;
    let cfg = OracleConfig::default();
    let too_large = |e: packclass::Error| -> Result<i32, CliError> {
        match e {
            packclass::Error::TooLarge(m) => {
                eprintln!("oracle: too large ({m})");
                Ok(EXIT_LIMIT)
            }
            e => Err(CliError::Usage(e.to_string())),
        }
    };
    let start = Instant::now();
    let (mut result, code) = match kind {
        OracleKind::Opp => {
            let (inst, _) = file.instance(false)?;
            match oracle::brute_force_opp(&inst, &cfg) {
                Ok(Some(p)) => (ResultFile::new("oracle-opp", VerdictName::Feasible).with_packing(&p), EXIT_OK),
                Ok(None) => (ResultFile::new("oracle-opp", VerdictName::Infeasible), EXIT_NEGATIVE),
                Err(e) => return too_large(e),
            }
        }
        OracleKind::Okp => {
            let (inst, _) = file.instance(false)?;
            match oracle::brute_force_okp(&inst, &cfg) {
                Ok((value, chosen)) => {
                    let mut r = ResultFile::new("oracle-okp", VerdictName::Optimal);
                    r.value = Some(Num(value));
                    r.stats.extra.insert("chosen".into(), json!(chosen));
                    (r, EXIT_OK)
                }
                Err(e) => return too_large(e),
            }
        }
        OracleKind::Spp => {
            let fixed = fixed_dims(&file, flag)?;
            match oracle::brute_force_spp(&file.box_items(), &fixed, &cfg) {
                Ok(h) => {
                    let mut r = ResultFile::new("oracle-spp", VerdictName::Optimal);
                    r.height = Some(Num(h));
                    (r, EXIT_OK)
                }
                Err(packclass::Error::InfeasibleCrossSection(_)) => {
                    (ResultFile::new("oracle-spp", VerdictName::Infeasible), EXIT_NEGATIVE)
                }
                Err(e) => return too_large(e),
            }
        }
        OracleKind::Classes => {
            let (inst, _) = file.instance(false)?;
            match oracle::enumerate_packing_classes(&inst, cap, &cfg) {
                Ok(classes) if classes.is_empty() => {
                    (ResultFile::new("oracle-classes", VerdictName::Infeasible), EXIT_NEGATIVE)
                }
                Ok(classes) => {
                    let mut r = ResultFile::new("oracle-classes", VerdictName::Feasible).with_class(&classes[0]);
                    let all: Vec<_> = classes.iter().map(PackingClass::edge_lists).collect();
                    r.stats.extra.insert("count".into(), json!(classes.len()));
                    r.stats.extra.insert("classes".into(), json!(all));
                    (r, EXIT_OK)
                }
                Err(e) => return too_large(e),
            }
        }
    };
    result.stats.wall_time_s = start.elapsed().as_secs_f64();
    emit(&result, output)?;
    Ok(code)
}

struct SweepConfig {
    count: usize,
    seed: u64,
    dim: usize,
    max_boxes: usize,
    max_size: i64,
    container: i64,
    problems: Vec<Problem>,
}

#[derive(Serialize)]
struct Disagreement {
    index: usize,
    problem: Problem,
    solver: String,
    oracle: String,
    instance: InstanceFile,
}

fn random_instances(cfg: &SweepConfig) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    (0..cfg.count)
        .map(|_| {
            let n = rng.gen_range(1..=cfg.max_boxes);
            let sizes: Vec<Vec<i64>> =
                (0..n).map(|_| (0..cfg.dim).map(|_| rng.gen_range(1..=cfg.max_size)).collect()).collect();
            let refs: Vec<&[i64]> = sizes.iter().map(Vec::as_slice).collect();
            Instance::from_integers(&vec![cfg.container; cfg.dim], &refs).expect("generated sizes fit")
        })
        .collect()
}

/// Instance index, problem, and (solver, oracle) answers.
type SweepRow = (usize, Problem, Result<(String, String), packclass::Error>);

/// Solver and oracle answers for one problem, rendered as strings.
fn compare(problem: Problem, inst: &Instance) -> Result<(String, String), packclass::Error> {
    let cfg = OracleConfig::default();
    let limits = Limits::default();
    Ok(match problem {
        Problem::Opp => {
            let solver = match solve_opp(inst, &limits).verdict {
                Verdict::Feasible { .. } => "feasible",
                Verdict::Infeasible => "infeasible",
                Verdict::ResourceLimit => "resource_limit",
            };
            let oracle = if oracle::brute_force_opp(inst, &cfg)?.is_some() { "feasible" } else { "infeasible" };
            (solver.into(), oracle.into())
        }
        Problem::Okp => {
            let solver = match solve_okp(inst, &limits) {
                OkpOutcome::Optimal(s) => Num(s.value).to_string(),
                OkpOutcome::ResourceLimit { .. } => "resource_limit".into(),
            };
            (solver, Num(oracle::brute_force_okp(inst, &cfg)?.0).to_string())
        }
        Problem::Spp => {
            let fixed = &inst.container()[..inst.dim() - 1];
            let solver = match solve_spp(inst.boxes(), fixed, &limits)? {
                SppOutcome::Optimal(s) => Num(s.height).to_string(),
                SppOutcome::ResourceLimit => "resource_limit".into(),
            };
            (solver, Num(oracle::brute_force_spp(inst.boxes(), fixed, &cfg)?).to_string())
        }
    })
}

fn cmd_sweep(cfg: &SweepConfig, jobs: Option<usize>, output: Option<&Path>) -> Result<i32, CliError> {
    if cfg.dim < 2 || cfg.max_boxes == 0 || cfg.max_size < 1 || cfg.container < cfg.max_size {
        return Err(CliError::Usage("need dim >= 2, max-boxes >= 1 and 1 <= max-size <= container".into()));
    }
    let instances = random_instances(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let start = Instant::now();
    let rows: Vec<SweepRow> = pool.install(|| {
        instances
            .par_iter()
            .enumerate()
            .flat_map_iter(|(k, inst)| cfg.problems.iter().map(move |&p| (k, p, compare(p, inst))))
            .collect()
    });
    let mut disagreements = Vec::new();
    for (index, problem, row) in rows.iter() {
        let (solver, oracle) = match row {
            Ok(pair) => pair.clone(),
            Err(e) => return Err(CliError::Usage(format!("sweep instance {index}: {e}"))),
        };
        if solver != oracle {
            let instance = InstanceFile::from_instance(&instances[*index]);
            disagreements.push(Disagreement { index: *index, problem: *problem, solver, oracle, instance });
        }
    }
    let summary = json!({
        "format": format::FORMAT_VERSION,
        "seed": cfg.seed,
        "count": cfg.count,
        "problems": cfg.problems,
        "comparisons": rows.len(),
        "agreements": rows.len() - disagreements.len(),
        "disagreements": disagreements,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    eprintln!("sweep: {} of {} comparisons agree", rows.len() - disagreements.len(), rows.len());
    emit(&summary, output)?;
    Ok(if disagreements.is_empty() { EXIT_OK } else { EXIT_NEGATIVE })
}
