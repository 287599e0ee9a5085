//! `srhd`: batch front end for the solver library.
//!
//! Exit codes: 0 success, 1 failed property check, 2 configuration,
//! 3 solver, 4 IO. `SRHD_THREADS` sets the worker count.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use srhd_core::io::{self, Category, RunConfig, RunError};
use srhd_core::presets::{preset, PRESET_NAMES};

#[derive(Parser)]
#[command(name = "srhd", version, about = "Positivity-preserving WENO solver for relativistic hydrodynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Advance a problem to its final time and write field snapshots.
    Run(Opts),
    /// Error and order table of the smooth problem over several resolutions.
    Convergence(Opts),
    /// Randomized checks of the admissible-set properties.
    Properties(Opts),
    /// List the built-in problems.
    ListProblems,
}

/// Every option mirrors a key of the TOML configuration and overrides it.
#[derive(Args)]
struct Opts {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem name (see list-problems).
    #[arg(long)]
    problem: Option<String>,
    /// Order parameter, 3 (WENO5) or 5 (WENO9).
    #[arg(short, long)]
    r: Option<usize>,
    #[arg(long)]
    w_hat: Option<f64>,
    #[arg(long)]
    theta_amp: Option<f64>,
    #[arg(long)]
    eps_d: Option<f64>,
    #[arg(long)]
    eps_q: Option<f64>,
    #[arg(long)]
    roundoff: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Cells per axis, e.g. `800` or `100,100`.
    #[arg(long, value_delimiter = ',')]
    resolution: Option<Vec<usize>>,
    /// Resolutions of a convergence study, e.g. `8,16,32`.
    #[arg(long, value_delimiter = ',')]
    resolutions: Option<Vec<usize>>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    dt_power: Option<f64>,
    #[arg(long)]
    output_every: Option<usize>,
    #[arg(short, long)]
    output_dir: Option<String>,
    #[arg(long)]
    limiter: Option<bool>,
    #[arg(long)]
    characteristic: Option<bool>,
    #[arg(long)]
    log_rho: Option<bool>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
}

macro_rules! apply {
    ($cfg:ident, $opts:ident, $($f:ident),*) => {
        $(if let Some(v) = $opts.$f { $cfg.$f = v; })*
    };
}

impl Opts {
    fn load(self) -> Result<RunConfig, RunError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| RunError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                io::parse_unvalidated(&text)?
            }
            None => RunConfig::default(),
        };
        let o = self;
        apply!(cfg, o, problem, r, theta_amp, eps_d, eps_q, roundoff, output_every, output_dir, limiter, characteristic, log_rho, seed, samples);
        if o.w_hat.is_some() {
            cfg.w_hat = o.w_hat;
        }
        if o.gamma.is_some() {
            cfg.gamma = o.gamma;
        }
        if o.resolution.is_some() {
            cfg.resolution = o.resolution;
        }
        if o.resolutions.is_some() {
            cfg.resolutions = o.resolutions;
        }
        if o.t_final.is_some() {
            cfg.t_final = o.t_final;
        }
        if o.dt.is_some() {
            cfg.dt = o.dt;
        }
        if o.dt_power.is_some() {
            cfg.dt_power = o.dt_power;
        }
        cfg.validated()
    }
}

fn set_threads() -> Result<(), RunError> {
    if let Ok(v) = std::env::var("SRHD_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| RunError::Config(format!("SRHD_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(RunError::Config("SRHD_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Config(e.to_string()))?;
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<ExitCode, RunError> {
    set_threads()?;
    match cmd {
        Command::ListProblems => {
            for name in PRESET_NAMES {
                let p = preset(name)?;
                let res = if p.dim == 1 {
                    format!("{}", p.resolution[0])
                } else {
                    format!("{}x{}", p.resolution[0], p.resolution[1])
                };
                println!("{name:<14} {}D  t = {:<6} {res:<10} {}", p.dim, p.t_final, p.notes);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(o) => {
            let cfg = o.load()?;
            let summary = io::run(&cfg)?;
            println!("{summary}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Convergence(o) => {
            let cfg = o.load()?;
            let table = io::convergence(&cfg)?;
            print!("{table}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Properties(o) => {
            let cfg = o.load()?;
            let report = io::properties(&cfg)?;
            print!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let kind = match e.category() {
                Category::Config => "config",
                Category::Solver => "solver",
                Category::Io => "io",
            };
            eprintln!("srhd: {kind} error: {e}");
            ExitCode::from(e.category().exit_code() as u8)
        }
    }
}
