use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use zhuforge::cli::{run_and_write, BoundOverrides, Format, RunConfig, Subcommand};
use zhuforge::parallel::Parallelism;
use zhuforge::reduction::ReductionStrategy;
use zhuforge::zhu::SeedSelection;

#[derive(Parser, Debug)]
#[command(name = "zhuforge", version, about = "Zhu algebras of vertex algebras given by C1-generators and relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Presentation file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Strategy::Leftmost)]
    strategy: Strategy,

    /// Maximum number of modes applied to a seed during closure.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    mode_depth: Option<u32>,

    /// Weighted degree bound for ideal membership tests.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    membership_bound: Option<u32>,

    /// Weighted degree bound for the quotient basis search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    quotient_bound: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Seeds::Both)]
    seeds: Seeds,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Check the presentation and report every problem.
    Validate,
    /// Print the completed product table.
    Complete,
    /// Normal form of a state such as "v(-1) v - 2 w(-2) w".
    Nf { expr: String },
    /// Jacobi defects and the non-degeneracy verdict.
    Singular,
    /// Presentation of the Zhu algebra.
    Zhu,
    /// Basis and matrices of the Zhu algebra when it is finite-dimensional.
    Quotient,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Seeds {
    SingularOnly,
    C1Only,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

fn config(cli: Cli) -> Result<RunConfig, String> {
    let input = cli.input.ok_or("--input is required")?;
    let subcommand = match cli.command {
        Command::Validate => Subcommand::Validate,
        Command::Complete => Subcommand::Complete,
        Command::Nf { expr } => Subcommand::Nf(expr),
        Command::Singular => Subcommand::Singular,
        Command::Zhu => Subcommand::Zhu,
        Command::Quotient => Subcommand::Quotient,
    };
    Ok(RunConfig {
        subcommand,
        input,
        output: cli.output,
        bounds: BoundOverrides {
            mode_depth: cli.mode_depth,
            membership: cli.membership_bound,
            quotient: cli.quotient_bound,
        },
        strategy: match cli.strategy {
            Strategy::Leftmost => ReductionStrategy::LeftmostFirst,
            Strategy::Rightmost => ReductionStrategy::RightmostFirst,
        },
        seeds: match cli.seeds {
            Seeds::SingularOnly => SeedSelection::SingularOnly,
            Seeds::C1Only => SeedSelection::C1Only,
            Seeds::Both => SeedSelection::Both,
        },
        format: match cli.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
        },
        parallelism: if cli.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ZHUFORGE_LOG")).init();
    // clap's own usage error status would collide with the "partial" status.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(zhuforge::cli::EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = match config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(zhuforge::cli::EXIT_PARSE);
        }
    };
    let outcome = run_and_write(&config);
    if let Some(msg) = &outcome.message {
        eprintln!("error: {msg}");
    }
    ExitCode::from(outcome.exit)
}
