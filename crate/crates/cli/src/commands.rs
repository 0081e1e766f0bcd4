//! Subcommand adapters. Each one parses its inputs, calls into `act_core`,
//! and renders the result as fixed-column text.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use act_core::absorption::AbsorptionError;
use act_core::bounds::{BoundKind, BoundReport, BoundsError};
use act_core::construction::ConstructionError;
use act_core::solver::{SolverError, DEFAULT_NODE_BUDGET};
use act_core::witness::{HuntOptions, TrialOutcome, WitnessError};
use act_core::{
    absorbed_by, family_size, generate, min_absorbing_brute, min_absorbing_set_exact, minimal_m,
    monochromatic_reachability, parse, serialize, stirling_ratio, validate_structure, BagLayout, Certificate,
    ColourId, ColouredTournament, ConstructionParams, VertexId,
};
use clap::{Args, Parser, Subcommand};

use crate::output::sig6;

pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const STOPPED: u8 = 3;
    pub const REFUTED: u8 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "act", version, about = "Arc-coloured tournaments and absorbing-set witnesses")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded bag-construction instance.
    Gen {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Check tournament well-formedness and, with bag metadata, the colour rule.
    Validate { file: PathBuf },
    /// Absorption relation statistics.
    Absorb {
        file: PathBuf,
        /// Report monochromatic reachability for one colour instead.
        #[arg(long)]
        colour: Option<u32>,
        /// Include the coverage-size histogram.
        #[arg(long)]
        stats: bool,
    },
    /// Test whether a vertex set absorbs the instance.
    Check {
        file: PathBuf,
        /// Comma-separated vertex ids.
        #[arg(short = 'S', value_delimiter = ',', required = true)]
        set: Vec<u32>,
    },
    /// Minimum absorbing set.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Enumerate subsets instead of branch and bound (at most 20 vertices).
        #[arg(long)]
        brute: bool,
    },
    /// Union and relaxed bound table, or the growth-ratio sweep.
    Bounds(BoundsArgs),
    /// Search seeds for an instance with no absorbing set of size p - 1.
    Hunt {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed_start: u64,
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate from scratch.
    VerifyCert {
        cert: PathBuf,
        #[arg(long)]
        instance: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("what").required(true).multiple(true).args(["n", "sweep"])))]
struct BoundsArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, requires = "n")]
    m: Option<u64>,
    #[arg(long, num_args = 2, value_names = ["NMIN", "NMAX"])]
    sweep: Option<Vec<u32>>,
}

#[derive(Debug, Default)]
pub struct CommandOutcome {
    pub exit_code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

type Outcome = Result<(String, u8), Failure>;

pub fn run(cli: Cli) -> CommandOutcome {
    let mut stderr = String::new();
    let result = match cli.command {
        Command::Gen { n, m, seed, output } => gen(n, m, seed, output.as_deref()),
        Command::Validate { file } => validate(&file),
        Command::Absorb { file, colour, stats } => absorb(&file, colour, stats),
        Command::Check { file, set } => check(&file, &set),
        Command::Solve { file, budget, brute } => solve(&file, budget, brute),
        Command::Bounds(args) => bounds(args),
        Command::Hunt { n, m, seed_start, trials, budget, jobs, output } => {
            hunt(n, m, seed_start, trials, HuntOptions { node_budget: budget, jobs }, output.as_deref(), &mut stderr)
        }
        Command::VerifyCert { cert, instance } => verify_cert(&cert, instance.as_deref()),
    };
    match result {
        Ok((stdout, exit_code)) => CommandOutcome { exit_code, stdout, stderr },
        Err(f) => {
            writeln!(stderr, "act: {}", f.message).unwrap();
            CommandOutcome { exit_code: f.code, stdout: String::new(), stderr }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(ColouredTournament, Option<BagLayout>), Failure> {
    parse(&read(path)?).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))
}

fn emit(text: String, output: Option<&Path>) -> Result<String, Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::TooManyVertices { .. } => Failure::new(exit::STOPPED, e),
        _ => Failure::new(exit::USAGE, e),
    }
}

fn gen(n: u32, m: usize, seed: u64, output: Option<&Path>) -> Outcome {
    let (t, layout) = generate(ConstructionParams::new(n, m, seed)).map_err(construction_failure)?;
    Ok((emit(serialize(&t, Some(&layout)), output)?, exit::OK))
}

fn validate(file: &Path) -> Outcome {
    let (t, layout) = load(file)?;
    let mut out = String::new();
    writeln!(out, "tournament          ok").unwrap();
    writeln!(out, "vertices            {}", t.vertex_count()).unwrap();
    writeln!(out, "colours             {}", t.colour_count()).unwrap();
    writeln!(out, "arcs                {}", t.arc_count()).unwrap();
    let Some(layout) = layout else {
        writeln!(out, "construction-rule   not-applicable").unwrap();
        return Ok((out, exit::OK));
    };
    writeln!(out, "bags                {}", layout.bag_count()).unwrap();
    writeln!(out, "copies              {}", layout.copies()).unwrap();
    let report = validate_structure(&t, &layout);
    if report.passed() {
        writeln!(out, "construction-rule   pass").unwrap();
        return Ok((out, exit::OK));
    }
    writeln!(out, "construction-rule   fail ({} violations)", report.violations.len()).unwrap();
    for v in &report.violations {
        writeln!(out, "  {v}").unwrap();
    }
    Ok((out, exit::REFUTED))
}

fn absorb(file: &Path, colour: Option<u32>, stats: bool) -> Outcome {
    let (t, _) = load(file)?;
    let mut out = String::new();
    writeln!(out, "vertices            {}", t.vertex_count()).unwrap();
    if let Some(c) = colour {
        let reach = monochromatic_reachability(&t, ColourId(c)).map_err(|e| Failure::new(exit::USAGE, e))?;
        let arcs = t.colour_subgraph(ColourId(c)).map_err(|e| Failure::new(exit::USAGE, e))?.pair_count();
        writeln!(out, "colour              {c}").unwrap();
        writeln!(out, "arcs                {arcs}").unwrap();
        writeln!(out, "reachable-pairs     {}", reach.off_diagonal_count()).unwrap();
        return Ok((out, exit::OK));
    }
    let rel = absorbed_by(&t);
    writeln!(out, "absorbed-pairs      {}", rel.pair_count()).unwrap();
    if stats {
        writeln!(out, "coverage-size       count").unwrap();
        for (size, count) in rel.coverage_histogram() {
            writeln!(out, "{size:<19} {count}").unwrap();
        }
    }
    Ok((out, exit::OK))
}

fn check(file: &Path, set: &[u32]) -> Outcome {
    let (t, _) = load(file)?;
    let rel = absorbed_by(&t);
    let ids: Vec<VertexId> = set.iter().map(|&v| VertexId(v)).collect();
    let covered = rel.covered_by(&ids).map_err(|e: AbsorptionError| Failure::new(exit::USAGE, e))?;
    if covered.is_full() {
        return Ok(("absorbing          yes\n".into(), exit::OK));
    }
    let missing: Vec<String> = covered.zeroes().map(|v| v.to_string()).collect();
    Ok((format!("absorbing          no\nunabsorbed         {}\n", missing.join(",")), exit::REFUTED))
}

fn join_ids(ids: &[VertexId]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn solve(file: &Path, budget: u64, brute: bool) -> Outcome {
    let (t, _) = load(file)?;
    let rel = absorbed_by(&t);
    let result = if brute {
        min_absorbing_brute(&rel).map_err(|e: SolverError| Failure::new(exit::STOPPED, e))?
    } else {
        min_absorbing_set_exact(&rel, Some(budget))
    };
    let mut out = String::new();
    writeln!(out, "optimum             {}", result.optimum).unwrap();
    writeln!(out, "witness             {}", join_ids(&result.witness)).unwrap();
    writeln!(out, "nodes               {}", result.nodes_explored).unwrap();
    let status = if result.proved_optimal { "proved-optimal" } else { "budget-exhausted" };
    writeln!(out, "status              {status}").unwrap();
    Ok((out, if result.proved_optimal { exit::OK } else { exit::STOPPED }))
}

fn bounds_failure(e: BoundsError) -> Failure {
    match e {
        BoundsError::ThresholdOverflow(_) => Failure::new(exit::STOPPED, e),
        _ => Failure::new(exit::USAGE, e),
    }
}

fn bounds(args: BoundsArgs) -> Outcome {
    let mut out = String::new();
    if let Some(n) = args.n {
        let p = family_size(n).map_err(bounds_failure)?;
        let union_m = minimal_m(p, BoundKind::Union).map_err(bounds_failure)?;
        let relaxed_m = minimal_m(p, BoundKind::Relaxed).map_err(bounds_failure)?;
        writeln!(out, "n                                {n}").unwrap();
        writeln!(out, "p                                {p}").unwrap();
        writeln!(out, "certified-by-bound m (union)     {union_m}").unwrap();
        writeln!(out, "certified-by-bound m (relaxed)   {relaxed_m}").unwrap();
        out.push('\n');
        writeln!(out, "{:>12}  {:>16}  {:>17}  {:>9}", "m", "log-union-bound", "log-relaxed-bound", "certifies").unwrap();
        let mut rows = match args.m {
            Some(m) => vec![m],
            None => vec![union_m, relaxed_m],
        };
        rows.dedup();
        for m in rows {
            let r = BoundReport::new(p, m).map_err(bounds_failure)?;
            writeln!(
                out,
                "{:>12}  {:>16}  {:>17}  {:>9}",
                m,
                sig6(r.log_union_bound),
                sig6(r.log_relaxed_bound),
                if r.certifies_existence { "yes" } else { "no" }
            )
            .unwrap();
        }
    }
    if let Some(range) = args.sweep {
        let (lo, hi) = (range[0], range[1]);
        if lo < 2 || lo > hi {
            return Err(Failure::new(exit::USAGE, format!("sweep range must satisfy 2 <= NMIN <= NMAX, got {lo} {hi}")));
        }
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(out, "{:>4}  {:>20}  {:>12}", "n", "p", "p*sqrt(n)/2^n").unwrap();
        for n in lo..=hi {
            let p = family_size(n).map_err(bounds_failure)?;
            let ratio = stirling_ratio(n).map_err(bounds_failure)?;
            writeln!(out, "{n:>4}  {p:>20}  {:>12}", sig6(ratio)).unwrap();
        }
    }
    Ok((out, exit::OK))
}

fn witness_failure(e: WitnessError) -> Failure {
    let code = match &e {
        WitnessError::Guard { .. } => exit::STOPPED,
        WitnessError::Refuted { .. } => exit::REFUTED,
        WitnessError::Construction(ConstructionError::TooManyVertices { .. }) => exit::STOPPED,
        WitnessError::Construction(_) | WitnessError::Bounds(_) | WitnessError::Arguments(_) => exit::USAGE,
        _ => exit::INPUT,
    };
    Failure::new(code, e)
}

fn hunt(
    n: u32,
    m: usize,
    seed_start: u64,
    trials: u64,
    options: HuntOptions,
    output: Option<&Path>,
    log: &mut String,
) -> Outcome {
    let report = act_core::hunt(n, m, seed_start, trials, options).map_err(witness_failure)?;
    for trial in &report.trials {
        let line = match &trial.outcome {
            TrialOutcome::Certified { solver_nodes, subsets_checked } => {
                format!("certified (solver nodes {solver_nodes}, {subsets_checked} sets refuted)")
            }
            TrialOutcome::Absorbed { witness } => format!("absorbed by {{{}}}", join_ids(witness)),
            TrialOutcome::BudgetExhausted { nodes } => format!("budget exhausted after {nodes} nodes"),
        };
        writeln!(log, "seed {:<12} {line}", trial.seed).unwrap();
    }
    match report.certificate {
        Some(cert) => Ok((emit(cert.to_string(), output)?, exit::OK)),
        None => {
            let stopped = report.trials.iter().any(|t| matches!(t.outcome, TrialOutcome::BudgetExhausted { .. }));
            let message = format!("no certificate in {} trials", report.trials.len());
            Err(Failure::new(if stopped { exit::STOPPED } else { exit::REFUTED }, message))
        }
    }
}

fn verify_cert(cert_path: &Path, instance: Option<&Path>) -> Outcome {
    let cert: Certificate = read(cert_path)?
        .parse()
        .map_err(|e| Failure::new(exit::INPUT, format!("{}: {e}", cert_path.display())))?;
    let loaded = instance.map(load).transpose()?;
    let verification = act_core::verify(&cert, loaded.as_ref().map(|(t, l)| (t, l.as_ref())))
        .map_err(witness_failure)?;
    let mut out = String::new();
    writeln!(out, "certificate         holds").unwrap();
    writeln!(out, "n                   {}", cert.n).unwrap();
    writeln!(out, "m                   {}", cert.m).unwrap();
    writeln!(out, "seed                {}", cert.seed).unwrap();
    writeln!(out, "optimum-at-least    {}", cert.optimum_at_least).unwrap();
    writeln!(out, "sets-refuted        {}", verification.subsets_checked).unwrap();
    Ok((out, exit::OK))
}
