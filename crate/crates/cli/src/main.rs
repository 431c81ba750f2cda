use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anfsat_core::generator::{random_assignment, GenSpec};
use anfsat_core::oracle::DEFAULT_ORACLE_LIMIT;
use anfsat_core::{OrderPolicy, PivotPolicy, SolverConfig};
use anfsat_cli::commands::{self, Emit, EmitOptions, SolveOptions, DEFAULT_SOLUTION_LIMIT};
use anfsat_cli::document::{
    read_function, read_instance, write_instance, write_instance_text, InputFormat,
    ResultDocument, Status,
};
use anfsat_cli::{exit, CliError};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// All-solution Boolean solver over algebraic normal form.
#[derive(Parser)]
#[command(name = "anfsat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a system of factors, all required to equal 1.
    Solve(SolveArgs),
    /// Count the solutions of a system (solve with `--emit count`).
    Count(SolveArgs),
    /// Orthogonal implicants of a single function.
    Implicants(ImplicantsArgs),
    /// Check a result against exhaustive evaluation.
    Verify(VerifyArgs),
    /// Generate a reproducible random sparse instance.
    Gen(GenArgs),
    /// Amdahl speedup report from segment statistics.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    MinVars,
    First,
    MinTerms,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Index,
    Frequency,
}

impl From<PivotArg> for PivotPolicy {
    fn from(p: PivotArg) -> Self {
        match p {
            PivotArg::MinVars => PivotPolicy::MinVars,
            PivotArg::First => PivotPolicy::First,
            PivotArg::MinTerms => PivotPolicy::MinTerms,
        }
    }
}

impl From<OrderArg> for OrderPolicy {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Index => OrderPolicy::Index,
            OrderArg::Frequency => OrderPolicy::Frequency,
        }
    }
}

#[derive(Args)]
struct EmitArgs {
    /// What to report; repeatable or comma-separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "implicants")]
    emit: Vec<Emit>,
    /// Largest solution count `--emit solutions` expands without `--force`.
    #[arg(long, default_value_t = DEFAULT_SOLUTION_LIMIT)]
    max_solutions: u64,
    /// Expand solutions past the limit.
    #[arg(long)]
    force: bool,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl EmitArgs {
    fn options(&self) -> EmitOptions {
        EmitOptions {
            emit: self.emit.clone(),
            solution_limit: self.max_solutions,
            force: self.force,
            ..EmitOptions::default()
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Worker threads; 0 uses all available cores.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value = "min-vars")]
    pivot: PivotArg,
    #[arg(long, value_enum, default_value = "index")]
    order: OrderArg,
    /// Stop at the first solution.
    #[arg(long)]
    first_solution: bool,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            pivot: self.pivot.into(),
            order: self.order.into(),
            workers: self.threads,
            first_solution: self.first_solution,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    emit: EmitArgs,
    /// Include segment statistics and timings.
    #[arg(long)]
    stats: bool,
    /// Add a speedup table for these processor counts.
    #[arg(long, value_delimiter = ',')]
    procs: Vec<u64>,
}

#[derive(Args)]
struct ImplicantsArgs {
    /// Function file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    #[arg(long, value_enum, default_value = "index")]
    order: OrderArg,
    #[command(flatten)]
    emit: EmitArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file, or `-` for standard input.
    input: PathBuf,
    /// Result document to check; the instance is solved afresh when absent.
    result: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    /// Largest variable count evaluated exhaustively.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    limit: u32,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct GenArgs {
    /// Number of variables.
    #[arg(long)]
    n: u32,
    /// Number of factors.
    #[arg(long)]
    m: u32,
    /// Variables per factor.
    #[arg(long)]
    k: u32,
    /// Maximum monomial degree; defaults to `k`.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Planted solution as a bit string, `x1` first.
    #[arg(long, conflicts_with = "plant_random")]
    planted: Option<String>,
    /// Plant a solution derived from the seed.
    #[arg(long)]
    plant_random: bool,
    /// Keep constant factors, which may make the system unsatisfiable.
    #[arg(long)]
    allow_unsat: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: InputFormat,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Result document carrying stats (from `solve --stats`).
    result: Option<PathBuf>,
    /// Total segments N.
    #[arg(long, requires = "longest", conflicts_with = "result")]
    segments: Option<u64>,
    /// Longest chain N_seq.
    #[arg(long, requires = "segments")]
    longest: Option<u64>,
    /// Processor counts.
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 4, 8, 16])]
    procs: Vec<u64>,
    /// Print the machine-readable report.
    #[arg(long)]
    json: bool,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("writing standard output: {e}"))),
    }
}

fn status_code(doc: &ResultDocument) -> i32 {
    match doc.status {
        Status::Sat => exit::SAT,
        Status::Unsat => exit::UNSAT,
    }
}

fn parse_bits(bits: &str, n: u32) -> Result<Vec<bool>, CliError> {
    let v = bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Input(format!("planted assignment: unexpected '{other}'"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n as usize {
        return Err(CliError::Input(format!(
            "planted assignment has {} bits but n={n}",
            v.len()
        )));
    }
    Ok(v)
}

fn run_solve(args: SolveArgs, count_only: bool) -> Result<i32, CliError> {
    let formula = read_instance(&read_input(&args.input)?, args.format)?;
    let mut emit = args.emit.options();
    if count_only {
        emit.emit = vec![Emit::Count];
    }
    let options = SolveOptions {
        config: args.solver.config(),
        emit,
        stats: args.stats,
        procs: args.procs,
    };
    let doc = commands::solve(&formula, &options)?;
    write_output(args.emit.output.as_deref(), &doc.to_json())?;
    Ok(status_code(&doc))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve(args) => run_solve(args, false),
        Command::Count(args) => run_solve(args, true),
        Command::Implicants(args) => {
            let (f, n) = read_function(&read_input(&args.input)?, args.format)?;
            let doc = commands::implicants(&f, n, args.order.into(), &args.emit.options())?;
            write_output(args.emit.output.as_deref(), &doc.to_json())?;
            Ok(status_code(&doc))
        }
        Command::Verify(args) => {
            let formula = read_instance(&read_input(&args.input)?, args.format)?;
            let result = match &args.result {
                Some(p) => Some(ResultDocument::parse(&read_input(p)?)?),
                None => None,
            };
            let verdict = commands::verify(&formula, result.as_ref(), &args.solver.config(), args.limit)?;
            println!("{}", verdict.message);
            Ok(if verdict.equivalent {
                exit::SAT
            } else {
                exit::NOT_EQUIVALENT
            })
        }
        Command::Gen(args) => {
            let mut spec = GenSpec::new(args.n, args.m, args.k, args.seed);
            if let Some(d) = args.d {
                spec = spec.degree(d);
            }
            if let Some(bits) = &args.planted {
                spec = spec.planted(parse_bits(bits, args.n)?);
            } else if args.plant_random {
                spec = spec.planted(random_assignment(args.n, args.seed ^ 0x5eed));
            }
            spec.allow_unsat = args.allow_unsat;
            let formula = commands::gen(&spec)?;
            let text = match args.format {
                InputFormat::Json => write_instance(&formula),
                InputFormat::Text => write_instance_text(&formula),
            };
            write_output(args.output.as_deref(), &text)?;
            Ok(exit::SAT)
        }
        Command::Analyze(args) => {
            let (n, n_seq) = match (&args.result, args.segments, args.longest) {
                (Some(path), _, _) => {
                    let doc = ResultDocument::parse(&read_input(path)?)?;
                    let stats = doc.stats.ok_or_else(|| {
                        CliError::Input("result document has no stats; solve with --stats".into())
                    })?;
                    (stats.segments_total, stats.longest_chain)
                }
                (None, Some(n), Some(n_seq)) => (n, n_seq),
                _ => {
                    return Err(CliError::Input(
                        "give a result document or both --segments and --longest".into(),
                    ))
                }
            };
            let doc = commands::analyze(n, n_seq, &args.procs)?;
            if args.json {
                let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
                text.push('\n');
                write_output(None, &text)?;
            } else {
                write_output(None, &commands::render_speedup(&doc))?;
            }
            Ok(exit::SAT)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SAT };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("anfsat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
