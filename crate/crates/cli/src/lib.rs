//! Command-line front end for the domain-wall solvers.
//!
//! Every subcommand writes one CSV data file (`--out`, defaulting to
//! `<subcommand>.csv` in the working directory) and prints a single summary
//! line of `key=value` pairs to standard output. Exit codes: 0 on success,
//! 2 on a usage error, 3 when a solver fails to converge.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};

pub use config::{load_config, Coordinate, RunConfig, Subcmd, UsageError};

#[derive(Parser)]
#[command(
    name = "dwall",
    version,
    about = "Ground states, symmetric states, and domain walls of a coupled \
             condensate pair in a harmonic trap",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scalar ground state on the half-line, with its parabolic-envelope limit
    #[command(name = "eta")]
    Eta(Flags),
    /// Coupled two-component profile at a fixed or fitted boundary value
    #[command(name = "wall")]
    Wall(Flags),
    /// Wall profile of the homogeneous (untrapped) system on a symmetric line
    #[command(name = "homogeneous-wall")]
    HomogeneousWall(Flags),
    /// Sweep the slope mismatch over an interval of boundary values
    #[command(name = "split-scan")]
    SplitScan(Flags),
    /// Low modes of the second-variation operators around the basic states
    #[command(name = "spectrum")]
    Spectrum(Flags),
    /// Critical coupling gamma0(eps) with its quadratic prediction
    #[command(name = "bifurcation")]
    Bifurcation(Flags),
    /// Principal eigenvalue nu0 of the degenerate limit problem
    #[command(name = "limit-nu0")]
    LimitNu0(Flags),
    /// Constrained phase profile of the limit energy at given mu
    #[command(name = "limit-profile")]
    LimitProfile(Flags),
    /// Energy breakdown of the uncoupled, symmetric, and wall states
    #[command(name = "energy")]
    Energy(Flags),
}

impl Cmd {
    fn parts(&self) -> (Subcmd, &Flags) {
        match self {
            Cmd::Eta(f) => (Subcmd::Eta, f),
            Cmd::Wall(f) => (Subcmd::Wall, f),
            Cmd::HomogeneousWall(f) => (Subcmd::HomogeneousWall, f),
            Cmd::SplitScan(f) => (Subcmd::SplitScan, f),
            Cmd::Spectrum(f) => (Subcmd::Spectrum, f),
            Cmd::Bifurcation(f) => (Subcmd::Bifurcation, f),
            Cmd::LimitNu0(f) => (Subcmd::LimitNu0, f),
            Cmd::LimitProfile(f) => (Subcmd::LimitProfile, f),
            Cmd::Energy(f) => (Subcmd::Energy, f),
        }
    }
}

/// One flat flag set shared by all subcommands; each runner validates the
/// subset it needs. Command-line values override the config file.
#[derive(Args)]
struct Flags {
    /// Interface width parameter (positive)
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,

    /// Inter-component coupling strength (exceeds -1)
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,

    /// Rescaled wall position parameter (positive)
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,

    /// Shared boundary value pinning both components at the origin
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,

    /// Lower end of the alpha bracket or scan
    #[arg(long, allow_negative_numbers = true)]
    alpha_min: Option<f64>,

    /// Upper end of the alpha bracket or scan
    #[arg(long, allow_negative_numbers = true)]
    alpha_max: Option<f64>,

    /// Number of scan points
    #[arg(long)]
    steps: Option<usize>,

    /// Comma-separated epsilon values for the bifurcation sweep
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    eps_list: Option<Vec<f64>>,

    /// Number of grid nodes (at least 16)
    #[arg(long)]
    grid_n: Option<usize>,

    /// Domain half-length (or length of the half-line)
    #[arg(long, allow_negative_numbers = true)]
    domain: Option<f64>,

    /// Relative residual tolerance for iterative solvers
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Iteration cap for relaxation loops
    #[arg(long)]
    max_iter: Option<usize>,

    /// CSV output path (default: <subcommand>.csv)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Config file of key = value lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,

    /// Locate the boundary value alpha0 where the slope mismatch vanishes
    #[arg(long, action = ArgAction::SetTrue)]
    find_alpha: bool,

    /// Coordinate form of the limit eigenproblem
    #[arg(long, value_enum)]
    coordinate: Option<Coordinate>,
}

/// Merges the config file (if any) with the flag overrides, running every
/// supplied value through the shared range validators.
fn build_config(sub: Subcmd, flags: &Flags) -> Result<RunConfig, UsageError> {
    let mut cfg = match &flags.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    cfg.subcommand = Some(sub);

    if let Some(v) = flags.epsilon {
        cfg.eps = Some(config::check_epsilon(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.gamma {
        cfg.gamma = Some(config::check_gamma(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.mu {
        cfg.mu = Some(config::check_mu(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.alpha {
        cfg.alpha = Some(config::check_alpha(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.alpha_min {
        cfg.alpha_min = Some(config::check_alpha(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.alpha_max {
        cfg.alpha_max = Some(config::check_alpha(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.steps {
        cfg.steps = Some(config::check_steps(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.eps_list.clone() {
        cfg.eps_list = Some(config::check_eps_list(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.grid_n {
        cfg.grid_n = config::check_grid_n(v).map_err(UsageError)?;
    }
    if let Some(v) = flags.domain {
        cfg.domain_length = Some(config::check_domain(v).map_err(UsageError)?);
    }
    if let Some(v) = flags.tol {
        cfg.tol = config::check_tol(v).map_err(UsageError)?;
    }
    if let Some(v) = flags.max_iter {
        cfg.max_iter = config::check_max_iter(v).map_err(UsageError)?;
    }
    if let Some(v) = flags.out.clone() {
        cfg.out_path = Some(v);
    }
    if flags.find_alpha {
        cfg.find_alpha = true;
    }
    if let Some(v) = flags.coordinate {
        cfg.coordinate = v;
    }
    Ok(cfg)
}

/// Parses `argv`, runs the selected subcommand, and returns the process exit
/// code. Summaries go to stdout, diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let (sub, flags) = cli.cmd.parts();
    let cfg = match build_config(sub, flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("dwall: {e}");
            return 2;
        }
    };
    match commands::dispatch(&cfg) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(failure) => {
            if let Some(summary) = failure.summary {
                println!("{summary}");
            }
            eprintln!("dwall: {}", failure.message);
            failure.exit
        }
    }
}
