//! Command-line front end. Exit codes: 0 YES / accepted, 1 NO / rejected,
//! 2 usage or runtime error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::element::{format_set, parse_element_list};
use crate::enumeration::{enumerate_supersets, EnumerationRequest};
use crate::format::{parse_instance, parse_solution, serialize_instance, serialize_solution};
use crate::kernels::{build_temporal_kernel, TemporalKernelOutcome};
use crate::problems::{verify_solution, ProblemInstance, ProblemKind};
use crate::random::{random_instance, SuiteParams};
use crate::reductions::{parse_certificate, ReductionKind, Source};
use crate::solve::{
    solve, Algorithm, Answer, CancelToken, GuessSequence, SolveError, SolveOptions, SolveResult,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gms",
    version,
    about = "Global multistage graph problems on temporal graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an instance.
    Solve(SolveArgs),
    /// Check a solution sequence against an instance.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the temporal kernel of a vertex cover or path contraction instance.
    Kernelize {
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Id map destination; defaults to `<out>.map.json`.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Run a reduction generator on a source file.
    Generate(GenerateArgs),
    /// List minimal solutions of one layer that contain a forced set.
    Enumerate {
        instance: PathBuf,
        /// 1-based layer index.
        #[arg(long)]
        layer: usize,
        #[arg(long, default_value = "")]
        forced: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Differential run of several algorithms over a directory of instances.
    Bench(BenchArgs),
    /// Write a directory of seeded random instances.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "backward")]
    algo: Algorithm,
    /// Local budget; overrides the instance's own.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Seconds before the search is cancelled.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    no_memo: bool,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    reduction: ReductionKind,
    #[arg(long)]
    source: PathBuf,
    /// Source parameter (clique size, budget, number of colours ...).
    #[arg(long)]
    param: usize,
    /// Instance destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Certificate file to build a witness from.
    #[arg(long)]
    witness_from: Option<PathBuf>,
    /// Witness destination; defaults to `<out>.sol`.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "backward,forward,oracle")]
    algos: Vec<Algorithm>,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Args)]
struct SuiteArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "vc")]
    kind: ProblemKind,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 5)]
    tau_max: usize,
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    #[arg(long, default_value_t = 3)]
    ell_max: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> anyhow::Result<i32> {
    match command {
        Command::Solve(args) => cmd_solve(args, out),
        Command::Verify {
            instance,
            solution,
            json,
        } => cmd_verify(&instance, &solution, json, out),
        Command::Kernelize {
            instance,
            out: dest,
            map,
        } => cmd_kernelize(&instance, &dest, map, out),
        Command::Generate(args) => cmd_generate(args, out),
        Command::Enumerate {
            instance,
            layer,
            forced,
            cap,
        } => cmd_enumerate(&instance, layer, &forced, cap, out),
        Command::Bench(args) => cmd_bench(args, out),
        Command::Suite(args) => cmd_suite(args, out),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<ProblemInstance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn cancel_after(seconds: Option<f64>) -> anyhow::Result<CancelToken> {
    match seconds {
        None => Ok(CancelToken::new()),
        Some(s) if s.is_finite() && s >= 0.0 => {
            Ok(CancelToken::with_timeout(Duration::from_secs_f64(s)))
        }
        Some(s) => bail!("invalid timeout {s}"),
    }
}

/// JSON shape of `solve --json`.
#[derive(Debug, Serialize)]
pub struct SolveReport {
    pub answer: &'static str,
    pub algorithm: Algorithm,
    pub problem: &'static str,
    pub insertions: Option<usize>,
    pub charge: Option<usize>,
    pub elapsed_ms: f64,
    pub nodes: u64,
    pub memo_hits: u64,
    pub reason: Option<String>,
    pub guesses: Option<GuessSequence>,
    /// One list of element strings per layer.
    pub solution: Option<Vec<Vec<String>>>,
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut inst = load_instance(&args.instance)?;
    if args.q.is_some() {
        inst.q = args.q;
        inst.validate()?;
    }
    let opts = SolveOptions {
        threads: args.threads,
        memo: !args.no_memo,
        cancel: cancel_after(args.timeout)?,
        oracle_cap: None,
    };
    let start = Instant::now();
    let result = match solve(&inst, args.algo, &opts) {
        Err(SolveError::Cancelled) => {
            bail!("timed out after {:.3}s", start.elapsed().as_secs_f64())
        }
        other => other?,
    };
    let elapsed = start.elapsed();
    if let Some(path) = &args.witness {
        if let Some(sol) = result.answer.solution() {
            write_file(path, &serialize_solution(sol))?;
        }
    }
    let report = solve_report(&inst, &result, elapsed);
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        match &result.answer {
            Answer::Yes { solution, .. } => writeln!(
                out,
                "YES insertions={} time={:.3}s",
                solution.insertion_total(),
                elapsed.as_secs_f64()
            )?,
            Answer::No { reason } => {
                write!(out, "NO time={:.3}s", elapsed.as_secs_f64())?;
                if let Some(r) = reason {
                    write!(out, " reason={r}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(if result.answer.is_yes() {
        EXIT_YES
    } else {
        EXIT_NO
    })
}

fn solve_report(inst: &ProblemInstance, result: &SolveResult, elapsed: Duration) -> SolveReport {
    let (answer, insertions, charge, reason, guesses, solution) = match &result.answer {
        Answer::Yes {
            solution,
            guesses,
            charge,
        } => (
            "yes",
            Some(solution.insertion_total()),
            *charge,
            None,
            guesses.clone(),
            Some(
                solution
                    .sets
                    .iter()
                    .map(|s| s.iter().map(ToString::to_string).collect())
                    .collect(),
            ),
        ),
        Answer::No { reason } => ("no", None, None, reason.clone(), None, None),
    };
    SolveReport {
        answer,
        algorithm: result.algorithm,
        problem: inst.kind.code(),
        insertions,
        charge,
        elapsed_ms: elapsed.as_secs_f64() * 1e3,
        nodes: result.stats.nodes,
        memo_hits: result.stats.memo_hits,
        reason,
        guesses,
        solution,
    }
}

fn cmd_verify(
    instance: &Path,
    solution: &Path,
    json: bool,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let inst = load_instance(instance)?;
    let sol = parse_solution(&read(solution)?, Some(inst.tau()))
        .with_context(|| format!("in {}", solution.display()))?;
    let report = verify_solution(&inst, &sol)?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        let verdict = if report.accepted {
            "ACCEPTED"
        } else {
            "REJECTED"
        };
        writeln!(
            out,
            "{verdict} insertions={} ell={} max_step={}",
            report.insertion_total, report.ell, report.max_step
        )?;
        for f in &report.failures {
            writeln!(out, "  {f}")?;
        }
    }
    Ok(if report.accepted { EXIT_YES } else { EXIT_NO })
}

fn cmd_kernelize(
    instance: &Path,
    dest: &Path,
    map: Option<PathBuf>,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let inst = load_instance(instance)?;
    match build_temporal_kernel(&inst)? {
        TemporalKernelOutcome::No { layer, reason } => {
            writeln!(out, "NO layer {layer}: {reason}")?;
            Ok(EXIT_NO)
        }
        TemporalKernelOutcome::Kernel(kernel) => {
            write_file(dest, &serialize_instance(&kernel.instance))?;
            let map_path = map.unwrap_or_else(|| {
                let mut name = dest.as_os_str().to_owned();
                name.push(".map.json");
                PathBuf::from(name)
            });
            write_file(&map_path, &serde_json::to_string_pretty(&kernel.id_map())?)?;
            writeln!(
                out,
                "kernel n={} edges={} (original n={} edges={})",
                kernel.instance.graph.n(),
                kernel.instance.graph.total_edge_entries(),
                inst.graph.n(),
                inst.graph.total_edge_entries()
            )?;
            Ok(EXIT_YES)
        }
    }
}

fn cmd_generate(args: GenerateArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let source = Source::parse(&read(&args.source)?)
        .with_context(|| format!("in {}", args.source.display()))?;
    let output = args.reduction.run(&source, args.param)?;
    let text = output.to_text();
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            let counts: Vec<String> = output
                .meta
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(out, "{}", counts.join(" "))?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    if let Some(cert_path) = &args.witness_from {
        let cert = parse_certificate(&read(cert_path)?)?;
        let witness = output.build_witness(&cert)?;
        let dest = match (&args.witness_out, &args.out) {
            (Some(p), _) => p.clone(),
            (None, Some(o)) => {
                let mut name = o.as_os_str().to_owned();
                name.push(".sol");
                PathBuf::from(name)
            }
            (None, None) => bail!("--witness-from needs --witness-out or --out"),
        };
        write_file(&dest, &serialize_solution(&witness))?;
    }
    Ok(EXIT_YES)
}

fn cmd_enumerate(
    instance: &Path,
    layer: usize,
    forced: &str,
    cap: Option<usize>,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let inst = load_instance(instance)?;
    if layer == 0 || layer > inst.tau() {
        bail!("layer {layer} outside 1..={}", inst.tau());
    }
    let forced = parse_element_list(forced)?;
    let mut req = EnumerationRequest::new(inst.kind, inst.graph.layer(layer - 1), inst.k, &forced);
    req.cap = cap;
    let sets = enumerate_supersets(&req)?;
    for s in &sets {
        writeln!(out, "{}", format_set(s))?;
    }
    writeln!(out, "# {} sets", sets.len())?;
    Ok(EXIT_YES)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Yes,
    No,
    Skipped,
    Timeout,
    /// Witness rejected or solver error.
    Failed(String),
}

impl Outcome {
    fn label(&self) -> &str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
            Outcome::Skipped => "n/a",
            Outcome::Timeout => "timeout",
            Outcome::Failed(_) => "error",
        }
    }
}

fn bench_one(
    inst: &ProblemInstance,
    algo: Algorithm,
    timeout: f64,
    threads: usize,
) -> anyhow::Result<(Outcome, f64)> {
    if !algo.supports(inst) {
        return Ok((Outcome::Skipped, 0.0));
    }
    let opts = SolveOptions {
        threads,
        cancel: cancel_after(Some(timeout))?,
        ..SolveOptions::default()
    };
    let start = Instant::now();
    let outcome = match solve(inst, algo, &opts) {
        Ok(r) => match r.answer.solution() {
            None => Outcome::No,
            Some(sol) => match verify_solution(inst, sol) {
                Ok(rep) if rep.accepted => Outcome::Yes,
                Ok(rep) => {
                    Outcome::Failed(format!("witness rejected: {}", rep.failures.join("; ")))
                }
                Err(e) => Outcome::Failed(e.to_string()),
            },
        },
        Err(SolveError::Cancelled) => Outcome::Timeout,
        Err(SolveError::TooLarge(_)) => Outcome::Skipped,
        Err(e) => Outcome::Failed(e.to_string()),
    };
    Ok((outcome, start.elapsed().as_secs_f64() * 1e3))
}

fn cmd_bench(args: BenchArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.suite)
        .with_context(|| format!("cannot list {}", args.suite.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gms"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .gms files in {}", args.suite.display());
    }
    let mut csv = String::from("instance,problem");
    for a in &args.algos {
        csv.push_str(&format!(",{a}_verdict,{a}_ms"));
    }
    csv.push_str(",agree\n");
    let mut problems = Vec::new();
    for path in &files {
        let inst = load_instance(path)?;
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut row = format!("{name},{}", inst.kind.code());
        let mut verdicts = Vec::new();
        for &algo in &args.algos {
            let (outcome, ms) = bench_one(&inst, algo, args.timeout, args.threads)?;
            row.push_str(&format!(",{},{ms:.3}", outcome.label()));
            if let Outcome::Failed(msg) = &outcome {
                problems.push(format!("{name}: {algo}: {msg}"));
            }
            verdicts.push(outcome);
        }
        let decided: Vec<&Outcome> = verdicts
            .iter()
            .filter(|o| matches!(o, Outcome::Yes | Outcome::No))
            .collect();
        let agree = decided.windows(2).all(|w| w[0] == w[1]);
        if !agree {
            problems.push(format!("{name}: verdicts differ"));
        }
        row.push_str(if agree { ",yes\n" } else { ",no\n" });
        csv.push_str(&row);
    }
    match &args.csv {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    writeln!(
        out,
        "{} instances, {} problems",
        files.len(),
        problems.len()
    )?;
    if problems.is_empty() {
        Ok(EXIT_YES)
    } else {
        Err(anyhow!(
            "differential mismatch:\n  {}",
            problems.join("\n  ")
        ))
    }
}

fn cmd_suite(args: SuiteArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    if !(0.0..=1.0).contains(&args.density) {
        bail!("density must lie in [0, 1]");
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let params = SuiteParams {
        n_max: args.n_max,
        tau_max: args.tau_max,
        k_max: args.k_max,
        ell_max: args.ell_max,
        density: args.density,
    };
    let mut rng = StdRng::seed_from_u64(args.seed);
    for i in 0..args.count {
        let inst = random_instance(&mut rng, args.kind, &params);
        let path = args.out.join(format!("{}_{i:04}.gms", args.kind.code()));
        write_file(&path, &serialize_instance(&inst))?;
    }
    writeln!(
        out,
        "wrote {} instances to {}",
        args.count,
        args.out.display()
    )?;
    Ok(EXIT_YES)
}
