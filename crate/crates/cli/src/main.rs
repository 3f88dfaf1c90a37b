use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use supergossip::{Evaluator, Variant};
use supergossip_cli::query::{check_expectation, run_query, QueryKind, QuerySpec, Setup};
use supergossip_cli::report::{ExpectReport, Report, TableFormat};
use supergossip_cli::scenario::{resolve_expectation, run_scenario};
use supergossip_cli::{CliError, Result, EXIT_MISMATCH, EXIT_OK};

/// Model checker for epistemic gossip protocols with super-expert goals.
#[derive(Debug, Parser)]
#[command(name = "supergossip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    shared: Shared,
}

#[derive(Debug, Args)]
struct Shared {
    /// Number of agents (named a, b, c, ...).
    #[arg(long, short = 'n', global = true, default_value_t = 4)]
    agents: usize,

    /// Protocol: any, cmo, pig or lns.
    #[arg(long, global = true, default_value = "any")]
    protocol: String,

    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Plain)]
    variant: VariantArg,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Sync)]
    mode: ModeArg,

    /// Asynchronous bound; defaults to |σ| + 2n per query.
    #[arg(long, global = true)]
    bound: Option<usize>,

    /// Call sequence, e.g. "ab;cd;ac;bd".
    #[arg(long, global = true, default_value = "")]
    seq: String,

    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    max_len: Option<usize>,

    /// Expected verdict (or `@file` holding an expected ascii table).
    #[arg(long, global = true)]
    expect: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Plain,
    Known,
    Engaged,
    Skip,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Sync,
    Async,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula at the sequence.
    Eval {
        #[arg(long, short = 'f')]
        formula: String,
    },
    /// Does an agent know a formula at the sequence?
    Knows {
        #[arg(long, short = 'a')]
        agent: char,
        #[arg(long, short = 'f')]
        formula: String,
    },
    /// Knowledge table of the sequence.
    Table {
        #[arg(long, value_parser = parse_format, default_value = "ascii")]
        format: TableFormat,
    },
    /// Shortest permitted extension of the sequence making everyone a super expert.
    Search {
        #[arg(long)]
        workers: Option<usize>,
        /// Only consider sequences starting with `ab`.
        #[arg(long)]
        canonical: bool,
        /// Only consider calls xy with x < y.
        #[arg(long)]
        undirected: bool,
    },
    /// Is every maximal permitted sequence super-successful?
    Classify,
    /// A seeded random fair run of the protocol.
    Simulate {
        #[arg(long, default_value_t = supergossip_cli::query::DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// An indistinguishable sequence at which the formula fails.
    Witness {
        #[arg(long, short = 'a')]
        agent: char,
        #[arg(long, short = 'f')]
        formula: String,
    },
    /// Run a scenario file.
    Scenario { path: PathBuf },
}

fn parse_format(s: &str) -> std::result::Result<TableFormat, String> {
    s.parse()
}

impl Shared {
    fn setup(&self) -> Setup {
        Setup {
            agents: self.agents,
            protocol: self.protocol.clone(),
            variant: match self.variant {
                VariantArg::Plain => Variant::Plain,
                VariantArg::Known => Variant::Known,
                VariantArg::Engaged => Variant::Engaged,
                VariantArg::Skip => Variant::Skip,
            },
            asynchronous: matches!(self.mode, ModeArg::Async),
            bound: self.bound,
        }
    }
}

enum Output {
    Report(Report),
    Text(String, Report),
}

fn single(shared: &Shared, command: &Command) -> Result<Output> {
    let mut spec = match command {
        Command::Eval { formula } => QuerySpec { formula: Some(formula.clone()), ..QuerySpec::new(QueryKind::Eval) },
        Command::Knows { agent, formula } | Command::Witness { agent, formula } => {
            let kind = if matches!(command, Command::Knows { .. }) { QueryKind::Knows } else { QueryKind::Witness };
            QuerySpec { agent: Some(*agent), formula: Some(formula.clone()), ..QuerySpec::new(kind) }
        }
        Command::Table { .. } => QuerySpec::new(QueryKind::Table),
        Command::Search { workers, canonical, undirected } => QuerySpec {
            workers: *workers,
            canonical: *canonical,
            undirected: *undirected,
            ..QuerySpec::new(QueryKind::Search)
        },
        Command::Classify => QuerySpec::new(QueryKind::Classify),
        Command::Simulate { max_steps } => QuerySpec { max_steps: Some(*max_steps), ..QuerySpec::new(QueryKind::Simulate) },
        Command::Scenario { .. } => unreachable!("handled by the caller"),
    };
    spec.sequence = shared.seq.clone();
    spec.seed = shared.seed;
    spec.max_len = shared.max_len;
    spec.expect = shared.expect.clone();
    if let Some(arg) = spec.missing_argument() {
        return Err(CliError::Usage(format!("{} needs --{}", spec.kind, arg.replace('_', "-"))));
    }

    let setup = shared.setup();
    let ctx = setup.context()?;
    let ev = Evaluator::new(ctx.clone())?;
    let mut r = run_query(&ev, &spec)?;
    if let Some(expected) = &spec.expect {
        let text = resolve_expectation(expected, Path::new("."))?;
        let divergence = check_expectation(&r, &text).err();
        r.expect = Some(ExpectReport { expected: expected.clone(), matched: divergence.is_none(), divergence });
    }
    let table_text = match (command, &r.table) {
        (Command::Table { format }, Some(t)) if !shared.json => Some(t.render(*format)),
        _ => None,
    };
    let report = Report { context: setup.info(&ctx), queries: vec![r] };
    Ok(match table_text {
        Some(text) => Output::Text(text, report),
        None => Output::Report(report),
    })
}

fn run(cli: &Cli) -> Result<i32> {
    let output = match &cli.command {
        Command::Scenario { path } => {
            if cli.shared.expect.is_some() {
                return Err(CliError::Usage("scenario files carry their own `expect` keys".into()));
            }
            Output::Report(run_scenario(path)?)
        }
        command => single(&cli.shared, command)?,
    };
    let report = match output {
        Output::Report(report) => {
            if cli.shared.json {
                println!("{}", report.to_json()?);
            } else {
                print!("{}", report.render_ascii());
            }
            report
        }
        Output::Text(text, report) => {
            print!("{text}");
            report
        }
    };
    Ok(match report.first_mismatch() {
        Some((index, message)) => {
            eprintln!("expectation failed in query {index}: {message}");
            EXIT_MISMATCH
        }
        None => EXIT_OK,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
