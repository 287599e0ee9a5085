//! Run orchestration for the three batch modes.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::grid::{FieldGrid, Geometry};
use crate::io::config::RunConfig;
use crate::io::output::{write_fields, SnapshotMeta};
use crate::io::RunError;
use crate::presets::ProblemSpec;
use crate::solver::{RunStats, Solver};
use crate::state::{primitive_from_conserved, RecoveryOptions};
use crate::verify::{error_norms, lemma_property_suite, observed_orders, smooth_exact, PropertyReport};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub problem: String,
    pub n: [usize; 2],
    pub steps: usize,
    pub time: f64,
    pub wall_seconds: f64,
    pub min_d: f64,
    pub min_q: f64,
    pub limited_fraction: f64,
    pub max_beta: f64,
    pub outputs: Vec<PathBuf>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem {} on {}x{} cells", self.problem, self.n[0], self.n[1])?;
        writeln!(f, "t = {} after {} steps ({:.3} s)", self.time, self.steps, self.wall_seconds)?;
        writeln!(f, "min D = {:e}, min q = {:e}", self.min_d, self.min_q)?;
        write!(f, "limited faces {:.3e} of evaluations", self.limited_fraction)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a RunConfig,
    summary: &'a RunSummary,
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, RunError> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
    Ok(dir)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), RunError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| RunError::io(path, e))?;
    std::fs::write(path, s).map_err(|e| RunError::io(path, e))
}

/// Advances the configured problem to its final time, writing snapshots and
/// a manifest into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, RunError> {
    let spec = cfg.spec()?;
    let n = cfg.grid_size(&spec);
    let dir = out_dir(cfg)?;
    let summary = if spec.dim == 1 {
        drive(spec.build_1d(n[0], cfg.r)?, cfg, &spec, &dir)?
    } else {
        drive(spec.build_2d(n, cfg.r)?, cfg, &spec, &dir)?
    };
    write_json(&dir.join("manifest.json"), &Manifest { config: cfg, summary: &summary })?;
    Ok(summary)
}

fn drive<const D: usize>(
    grid: FieldGrid<f64, D>,
    cfg: &RunConfig,
    spec: &ProblemSpec,
    dir: &Path,
) -> Result<RunSummary, RunError> {
    let eos = spec.eos()?;
    let mut solver = Solver::new(grid, cfg.scheme(eos)?, cfg.controls()?)?;
    let meta = |s: &Solver<f64, D>| SnapshotMeta {
        problem: spec.name.to_string(),
        dim: D,
        n: s.grid.n,
        spacing: s.grid.spacing,
        origin: s.grid.origin,
        axisymmetric: s.grid.geometry == Geometry::Axisymmetric,
        time: s.time,
        step: s.stats.steps,
        gamma: spec.gamma,
        r: cfg.r,
        w_hat: cfg.w_hat(),
        theta_amp: cfg.theta_amp,
        eps_d: cfg.eps_d,
        eps_q: cfg.eps_q,
        limiter: cfg.limiter,
        characteristic: cfg.characteristic,
    };
    let start = Instant::now();
    let mut outputs = Vec::new();
    while solver.time < spec.t_final {
        solver.step(spec.t_final)?;
        if cfg.output_every > 0 && solver.stats.steps % cfg.output_every == 0 && solver.time < spec.t_final {
            let path = dir.join(format!("{}_{:06}.csv", spec.name, solver.stats.steps));
            write_fields(&solver.grid, &eos, &path, &meta(&solver), cfg.log_rho)?;
            outputs.push(path);
        }
    }
    let wall = start.elapsed().as_secs_f64();
    let path = dir.join(format!("{}_final.csv", spec.name));
    write_fields(&solver.grid, &eos, &path, &meta(&solver), cfg.log_rho)?;
    outputs.push(path);
    let st: RunStats<f64> = solver.stats;
    Ok(RunSummary {
        problem: spec.name.to_string(),
        n: solver.grid.n,
        steps: st.steps,
        time: solver.time,
        wall_seconds: wall,
        min_d: st.min_d,
        min_q: st.min_q,
        limited_fraction: st.limited_fraction(),
        max_beta: st.max_beta,
        outputs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub r: usize,
    pub limiter: bool,
    pub t_final: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn l1(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.l1).collect()
    }

    pub fn l1_orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.l1_order).collect()
    }
}

impl fmt::Display for ConvergenceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ord = |o: Option<f64>| o.map_or("--".to_string(), |o| format!("{o:.2}"));
        writeln!(f, "{:>5}  {:>11}  {:>8}  {:>11}  {:>8}", "N", "l1 error", "l1 order", "linf error", "linf order")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>5}  {:>11.4e}  {:>8}  {:>11.4e}  {:>8}",
                r.n,
                r.l1,
                ord(r.l1_order),
                r.linf,
                ord(r.linf_order)
            )?;
        }
        Ok(())
    }
}

/// Default resolutions of the smooth study for each order.
pub fn default_resolutions(r: usize) -> Vec<usize> {
    if r == 5 {
        vec![8, 16, 24, 32, 40, 48, 56]
    } else {
        vec![8, 16, 32, 64, 128, 256]
    }
}

/// Density errors of the smooth problem against its exact solution on
/// fresh grids of each resolution.
pub fn smooth_study(cfg: &RunConfig, ns: &[usize]) -> Result<ConvergenceTable, RunError> {
    if cfg.problem != "smooth" {
        return Err(RunError::Config(format!(
            "convergence studies need a problem with an exact solution (`smooth`), got `{}`",
            cfg.problem
        )));
    }
    let spec = cfg.spec()?;
    let eos = spec.eos()?;
    let mut c = cfg.clone();
    if c.dt.is_none() && c.dt_power.is_none() {
        c.dt_power = Some((2 * cfg.r - 1) as f64 / 3.0);
    }
    let opts = RecoveryOptions::default();
    let mut l1 = Vec::new();
    let mut linf = Vec::new();
    for &n in ns {
        let grid = spec.build_1d(n, cfg.r)?;
        let mut s = Solver::new(grid, c.scheme(eos)?, c.controls()?)?;
        s.run_until(spec.t_final, |_, _| {})?;
        let mut num = Vec::with_capacity(n);
        let mut exact = Vec::with_capacity(n);
        for i in 0..n as isize {
            num.push(primitive_from_conserved(s.grid.get(i, 0), &eos, &opts)?.rho);
            exact.push(smooth_exact(s.grid.center(i, 0)[0], s.time).rho);
        }
        let e = error_norms(&num, &exact, s.grid.spacing[0])?;
        l1.push(e.l1);
        linf.push(e.linf);
    }
    let o1 = observed_orders(ns, &l1);
    let oi = observed_orders(ns, &linf);
    let rows = ns
        .iter()
        .enumerate()
        .map(|(k, &n)| ConvergenceRow {
            n,
            l1: l1[k],
            l1_order: k.checked_sub(1).map(|j| o1[j]),
            linf: linf[k],
            linf_order: k.checked_sub(1).map(|j| oi[j]),
        })
        .collect();
    Ok(ConvergenceTable {
        r: cfg.r,
        limiter: cfg.limiter,
        t_final: spec.t_final,
        rows,
    })
}

/// Runs the smooth study and writes `convergence.txt` and `convergence.json`.
pub fn convergence(cfg: &RunConfig) -> Result<ConvergenceTable, RunError> {
    let ns = cfg.resolutions.clone().unwrap_or_else(|| default_resolutions(cfg.r));
    let table = smooth_study(cfg, &ns)?;
    let dir = out_dir(cfg)?;
    let txt = dir.join("convergence.txt");
    std::fs::write(&txt, table.to_string()).map_err(|e| RunError::io(&txt, e))?;
    write_json(&dir.join("convergence.json"), &table)?;
    Ok(table)
}

/// Runs the randomized property families and writes `properties.txt`.
pub fn properties(cfg: &RunConfig) -> Result<PropertyReport, RunError> {
    let report = lemma_property_suite(cfg.samples, cfg.seed);
    let dir = out_dir(cfg)?;
    let path = dir.join("properties.txt");
    std::fs::write(&path, report.to_string()).map_err(|e| RunError::io(&path, e))?;
    Ok(report)
}
