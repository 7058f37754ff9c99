use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use finitree::{analyze, build_report, parse_program, render_text, Domain, Options, PredId};

#[derive(Parser, Debug)]
#[command(name = "finitree", version, about = "Finite-tree, sharing and groundness analysis for Prolog programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a program and report per-predicate results.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args, Debug)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Report only on these predicates, called with fresh arguments.
    #[arg(long = "entry", value_name = "NAME/ARITY", value_parser = parse_pred)]
    entries: Vec<PredId>,
    #[arg(long, value_enum, default_value_t = DomainArg::HpFdGd)]
    domain: DomainArg,
    /// Iterations per recursive component before giving up on it.
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    /// Print every summary update to stderr.
    #[arg(long)]
    dump_fixpoint: bool,
    /// Seed for randomized diagnostics. The analysis itself is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DomainArg {
    Hp,
    HpFd,
    HpFdGd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_pred(s: &str) -> Result<PredId, String> {
    PredId::parse(s).ok_or_else(|| format!("expected NAME/ARITY, got `{s}`"))
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<String, String> {
    let src = match std::fs::read_to_string(&args.file) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(format!("{}: file not found", args.file.display()))
        }
        Err(e) => return Err(format!("{}: {e}", args.file.display())),
    };
    let program = parse_program(&src).map_err(|e| format!("{}: {e}", args.file.display()))?;
    let options = Options {
        domain: match args.domain {
            DomainArg::Hp => Domain::Hp,
            DomainArg::HpFd => Domain::HpFd,
            DomainArg::HpFdGd => Domain::HpFdGd,
        },
        max_iterations: args.max_iterations,
        trace: args.dump_fixpoint,
        ..Options::default()
    };
    let mut a = analyze(program, options).map_err(|e| e.to_string())?;
    if args.dump_fixpoint {
        for t in &a.trace {
            eprintln!("iteration {} {}: {}", t.iteration, t.pred, t.state);
        }
    }
    let report = build_report(&mut a, &args.entries).map_err(|e| e.to_string())?;
    Ok(match args.format {
        Format::Text => render_text(&report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Analyze(args) => match analyze_cmd(args) {
            Ok(out) => {
                print!("{out}");
                ExitCode::SUCCESS
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
    }
}
