use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use while_core::env::parse_store;
use while_core::explorer::{
    self, outcomes, to_dot, to_json_trace, Schedule, Status, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES,
    DEFAULT_MAX_STEPS,
};
use while_core::semantics::Configuration;
use while_core::syntax::{parse_program, pretty, Stmt};
use while_core::typesys::{check_program, render_derivation};

const EXIT_PARSE: u8 = 1;
const EXIT_TYPE: u8 = 2;
const EXIT_STUCK: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "whl", version, about = "Parse, type-check, run and explore While programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a program
    Parse(Input),
    /// Type-check a program
    Check {
        #[command(flatten)]
        input: Input,
        /// Write the derivation tree (to --out, or standard output)
        #[arg(long)]
        emit_derivation: bool,
        /// Write the output to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run under a schedule and print the final value and store
    Run(RunArgs),
    /// Run under a schedule and write the trace as JSON lines
    Trace(RunArgs),
    /// Write the full reduction graph as DOT
    Graph(ExploreArgs),
    /// Print every terminal store and stuck leaf of the reduction graph
    Outcomes(ExploreArgs),
}

#[derive(Args)]
struct Input {
    /// Program source file
    input: PathBuf,
}

#[derive(Args)]
struct Start {
    #[command(flatten)]
    input: Input,
    /// File holding the initial variable store, e.g. `({a=3, b=5})`
    #[arg(long)]
    initial_store: Option<PathBuf>,
    /// Type-check before executing
    #[arg(long)]
    checked: bool,
    /// Write the output to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleKind {
    First,
    Random,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    start: Start,
    #[arg(long, value_enum, default_value = "first")]
    schedule: ScheduleKind,
    /// Seed for --schedule random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

#[derive(Args)]
struct ExploreArgs {
    #[command(flatten)]
    start: Start,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Result<Stmt, Failure> {
    let src = read(&input.input)?;
    parse_program(&src).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", input.input.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io_fail = |e: io::Error| fail(EXIT_PARSE, format!("cannot write output: {e}"));
    match out {
        Some(path) => fs::write(path, text).map_err(io_fail),
        None => io::stdout().write_all(text.as_bytes()).map_err(io_fail),
    }
}

fn start(s: &Start) -> Result<Configuration, Failure> {
    let stmt = load(&s.input)?;
    if s.checked {
        check_program(&stmt).map_err(|e| fail(EXIT_TYPE, e.to_string()))?;
    }
    match &s.initial_store {
        Some(path) => {
            let text = read(path)?;
            let store = parse_store(text.trim())
                .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            Ok(Configuration::with_store(stmt, store))
        }
        None => Ok(Configuration::new(stmt)),
    }
}

fn status_code(status: &Status) -> u8 {
    match status {
        Status::Terminated(_) => 0,
        Status::Stuck(_) => EXIT_STUCK,
        Status::BudgetExceeded => EXIT_BUDGET,
    }
}

fn trace_of(args: &RunArgs) -> Result<explorer::Trace, Failure> {
    let c0 = start(&args.start)?;
    let schedule = match args.schedule {
        ScheduleKind::First => Schedule::First,
        ScheduleKind::Random => Schedule::Random(args.seed),
    };
    Ok(explorer::run(c0, schedule, args.max_steps))
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse(input) => {
            let s = load(&input)?;
            emit(None, &format!("{}\n", pretty(&s)))?;
            Ok(0)
        }
        Command::Check { input, emit_derivation, out } => {
            let s = load(&input)?;
            let j = check_program(&s).map_err(|e| fail(EXIT_TYPE, e.to_string()))?;
            if emit_derivation {
                emit(out.as_deref(), &render_derivation(&j))?;
            } else {
                emit(None, &format!("ok: {}\n", j.ty))?;
            }
            Ok(0)
        }
        Command::Run(args) => {
            let t = trace_of(&args)?;
            let last = t.last();
            let line = match &t.status {
                Status::Terminated(v) => format!("terminated {v} {}\n", last.store),
                Status::Stuck(info) => format!("{info}\nstore {}\n", last.store),
                Status::BudgetExceeded => {
                    format!("budget exceeded after {} steps\nstore {}\n", t.steps.len(), last.store)
                }
            };
            emit(args.start.out.as_deref(), &line)?;
            Ok(status_code(&t.status))
        }
        Command::Trace(args) => {
            let t = trace_of(&args)?;
            emit(args.start.out.as_deref(), &to_json_trace(&t))?;
            Ok(status_code(&t.status))
        }
        Command::Graph(args) => {
            let g = explorer::explore(start(&args.start)?, args.max_states, args.max_depth);
            emit(args.start.out.as_deref(), &to_dot(&g))?;
            Ok(if g.truncated { EXIT_BUDGET } else { 0 })
        }
        Command::Outcomes(args) => {
            let g = explorer::explore(start(&args.start)?, args.max_states, args.max_depth);
            let o = outcomes(&g);
            emit(args.start.out.as_deref(), &o.render())?;
            Ok(if o.complete { 0 } else { EXIT_BUDGET })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
