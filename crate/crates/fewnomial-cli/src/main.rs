use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fewnomial_cli::{
    cmd_bound, cmd_classify, cmd_component_bounds, cmd_components, cmd_count, cmd_plot, cmd_reduce,
    cmd_verify, cmd_witness, default_corpus, exit_code, Options,
};

/// Root counts, bounds and curve components for systems of fewnomials with real exponents.
#[derive(Parser, Debug)]
#[command(name = "fewnomial", version)]
struct Cli {
    /// Print the full JSON report instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Log-coordinate half-width of the component window.
    #[arg(long, global = true, default_value_t = fewnomial::curves::DEFAULT_WINDOW)]
    window: f64,
    /// Grid cells per side for component tracing.
    #[arg(long, global = true, default_value_t = fewnomial::curves::DEFAULT_GRID)]
    grid: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Residual and root-matching tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sharpest closed-form bound on the number of positive roots.
    Bound {
        file: PathBuf,
        /// JSON file with structure hints for the dispatcher.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Component bounds for an n-variate m-nomial.
    ComponentBounds { n: u64, m: u64 },
    /// Count and list the positive roots of a square system.
    Count { file: PathBuf },
    /// Trace the positive zero set of a bivariate member.
    Components {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        member: usize,
    },
    /// Newton polytope data, polygon class and case tag.
    Classify { file: PathBuf },
    /// Canonical trinomial form or univariate reduction.
    Reduce { file: PathBuf },
    /// Run every corpus entry and print a pass/fail table.
    Verify {
        /// Corpus directory; defaults to $FEWNOMIAL_CORPUS or the shipped corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Draw traced components as SVG.
    Plot {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 0)]
        member: usize,
    },
    /// Print an extremal example system (g1, g2, h1, h2, eq-easy, eq-degen).
    Witness { kind: String, n: usize, m: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        window: cli.window,
        grid: cli.grid,
        seed: cli.seed,
        tol: cli.tol,
    };
    let result = match &cli.command {
        Command::Bound { file, structure } => cmd_bound(file, structure.as_deref()),
        Command::ComponentBounds { n, m } => cmd_component_bounds(*n, *m),
        Command::Count { file } => cmd_count(file, &opts),
        Command::Components { file, member } => cmd_components(file, *member, &opts),
        Command::Classify { file } => cmd_classify(file),
        Command::Reduce { file } => cmd_reduce(file),
        Command::Verify { corpus } => {
            cmd_verify(&corpus.clone().unwrap_or_else(default_corpus), &opts)
        }
        Command::Plot { file, svg, member } => cmd_plot(file, *member, svg, &opts),
        Command::Witness { kind, n, m } => cmd_witness(kind, *n, *m),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("reports serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
