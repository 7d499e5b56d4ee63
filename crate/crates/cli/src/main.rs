use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairdiv_core::{
    beta_grid, boltzmann_allocation, comparison_report, flavor_probabilities,
    homogeneous_probabilities, optimize_beta, sample_allocation, small_beta_diagnostic,
    total_utility, utility_curve, DivisionProblem, OptimizeError, Optimum, SearchConfig,
};
use fairdiv_cli::{io, render};
use render::{CompareView, DiagnoseView, SampledView, SolveView};

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "Boltzmann-weighted fair division of a shared resource")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Allocate the cake at the utility-maximizing inverse temperature
    Solve(SolveArgs),
    /// Contrast the Boltzmann split with egalitarian and proportional baselines
    Compare(CompareArgs),
    /// Tabulate total utility over a grid of beta values as CSV
    Curve(CurveArgs),
    /// Check whether a small positive beta should beat the uniform split
    Diagnose(DiagnoseArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem description (JSON)
    file: PathBuf,
    /// Fix beta instead of searching for the optimum
    #[arg(long, conflicts_with = "beta_max")]
    beta: Option<f64>,
    /// Upper end of the search interval; the default scales with the
    /// contribution spread
    #[arg(long)]
    beta_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw a Monte Carlo allocation with this RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Unit slices for the sampled allocation
    #[arg(long, default_value_t = 1_000_000, requires = "seed")]
    samples: u64,
}

#[derive(Args)]
struct CompareArgs {
    /// Problem description (JSON)
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    /// Problem description (JSON)
    file: PathBuf,
    /// Upper end of the sampled interval
    #[arg(long)]
    beta_max: Option<f64>,
    /// Number of grid points, evenly spaced from 0
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Problem description (JSON)
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] io::InputError),
    #[error("{0}")]
    Domain(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(io::InputError::Io { .. }) => 2,
            CliError::Input(_) | CliError::Domain(_) => 1,
            CliError::Output { .. } => 2,
        }
    }
}

fn domain(err: impl std::fmt::Display) -> CliError {
    CliError::Domain(err.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("fairdiv: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => solve(args),
        Command::Compare(args) => compare(args),
        Command::Curve(args) => curve(args),
        Command::Diagnose(args) => diagnose(args),
    }
}

/// Runs the search, treating a flat objective as a soft success: the carried
/// optimum (beta = 0, the egalitarian split) is reported with a note instead
/// of failing the command.
fn search(problem: &DivisionProblem, beta_max: Option<f64>) -> Result<(Optimum, bool), CliError> {
    let mut config = SearchConfig::for_problem(problem);
    if let Some(beta_max) = beta_max {
        config.beta_max = beta_max;
    }
    match optimize_beta(problem, config) {
        Ok(optimum) => Ok((optimum, false)),
        Err(OptimizeError::DegenerateObjective(optimum)) => Ok((*optimum, true)),
        Err(err) => Err(domain(err)),
    }
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let problem = io::load_problem(&args.file)?;
    let (beta, searched, boundary, degenerate, residual, allocation, utility) =
        match args.beta {
            Some(beta) => {
                let allocation = boltzmann_allocation(&problem, beta).map_err(domain)?;
                let utility = total_utility(&allocation, problem.players()).map_err(domain)?;
                (beta, false, false, false, 0.0, allocation, utility)
            }
            None => {
                let (optimum, degenerate) = search(&problem, args.beta_max)?;
                (
                    optimum.beta_star,
                    true,
                    optimum.boundary,
                    degenerate,
                    optimum.extremum_residual,
                    optimum.allocation,
                    optimum.total_utility,
                )
            }
        };

    let probabilities = if problem.is_heterogeneous() {
        None
    } else {
        Some(
            homogeneous_probabilities(&problem.contributions(), beta)
                .map_err(domain)?
                .into_vec(),
        )
    };
    let flavor_probs = if problem.is_heterogeneous() {
        Some(flavor_probabilities(&problem, beta).map_err(domain)?)
    } else {
        None
    };
    let sampled_allocation = match args.seed {
        Some(seed) => {
            Some((seed, sample_allocation(&problem, beta, args.samples, seed).map_err(domain)?))
        }
        None => None,
    };

    let view = SolveView {
        problem: &problem,
        beta,
        searched,
        boundary,
        degenerate,
        extremum_residual: residual,
        total_utility: utility,
        allocation: &allocation,
        probabilities: probabilities.as_deref(),
        flavor_probabilities: flavor_probs.as_ref(),
        sampled: sampled_allocation.as_ref().map(|(seed, alloc)| SampledView {
            seed: *seed,
            units: args.samples,
            allocation: alloc,
        }),
    };
    let payload = match args.format {
        Format::Text => render::solve_text(&view),
        Format::Csv => render::solve_csv(&view),
        Format::Json => render::solve_json(&view),
    };
    deliver(&payload, args.out.as_deref())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let problem = io::load_problem(&args.file)?;
    let (optimum, _) = search(&problem, None)?;
    let report = comparison_report(&problem, &optimum).map_err(domain)?;
    let view = CompareView {
        problem: &problem,
        beta: optimum.beta_star,
        report: &report,
    };
    let payload = match args.format {
        Format::Text => render::compare_text(&view),
        Format::Csv => render::compare_csv(&view),
        Format::Json => render::compare_json(&view),
    };
    deliver(&payload, args.out.as_deref())
}

fn curve(args: CurveArgs) -> Result<(), CliError> {
    let problem = io::load_problem(&args.file)?;
    let beta_max = args
        .beta_max
        .unwrap_or_else(|| SearchConfig::for_problem(&problem).beta_max);
    let grid = beta_grid(beta_max, args.points).map_err(domain)?;
    let curve = utility_curve(&problem, &grid).map_err(domain)?;
    let csv = render::curve_csv(&curve);
    let summary = render::curve_summary(&curve);
    match args.out.as_deref() {
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
        Some(path) => {
            write_out(&csv, path)?;
            println!("{summary}");
        }
    }
    Ok(())
}

fn diagnose(args: DiagnoseArgs) -> Result<(), CliError> {
    let problem = io::load_problem(&args.file)?;
    let report = small_beta_diagnostic(&problem).map_err(domain)?;
    let view = DiagnoseView {
        problem: &problem,
        report: &report,
    };
    let payload = match args.format {
        Format::Text => render::diagnose_text(&view),
        Format::Csv => render::diagnose_csv(&view),
        Format::Json => render::diagnose_json(&view),
    };
    print!("{payload}");
    Ok(())
}

fn deliver(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => write_out(payload, path),
    }
}

fn write_out(payload: &str, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, payload).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
