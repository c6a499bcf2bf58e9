use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ga_invariants_cli::{run, Command, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Classify,
    Pairs,
    Invariants,
    Separators,
    Oracle,
}

/// Pairs, classification and invariants of unipotent G_a representations.
#[derive(Parser, Debug)]
#[command(name = "gainv", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Representation JSON file.
    input: PathBuf,
    /// Largest degree of g searched for pairs.
    #[arg(long, default_value_t = 2)]
    max_degree: u32,
    /// Largest degree of oracle invariants computed or checked.
    #[arg(long, default_value_t = 2)]
    oracle_degree: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Degree of the sampling extension field.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    ext: u32,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Step budget for each Gröbner basis computation.
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Number of sampled point pairs for the separation check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Validate => Command::Validate,
        Cmd::Classify => Command::Classify,
        Cmd::Pairs => Command::Pairs,
        Cmd::Invariants => Command::Invariants,
        Cmd::Separators => Command::Separators,
        Cmd::Oracle => Command::Oracle,
    };
    let cfg = RunConfig {
        command,
        input: args.input,
        max_degree: args.max_degree,
        oracle_degree: args.oracle_degree,
        seed: args.seed,
        ext: args.ext,
        json: args.json,
        budget: args.budget,
        samples: args.samples,
    };
    let out = run(&cfg);
    print!("{}", out.render(cfg.json));
    ExitCode::from(out.code as u8)
}
