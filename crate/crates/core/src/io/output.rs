//! CSV field snapshots with a JSON sidecar.

use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::grid::{FieldGrid, Geometry};
use crate::io::RunError;
use crate::state::{primitive_from_conserved, Conserved, EosParams, RecoveryOptions};

/// Sidecar metadata describing a snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub problem: String,
    pub dim: usize,
    pub n: [usize; 2],
    pub spacing: [f64; 2],
    pub origin: [f64; 2],
    pub axisymmetric: bool,
    pub time: f64,
    pub step: usize,
    pub gamma: f64,
    pub r: usize,
    pub w_hat: f64,
    pub theta_amp: f64,
    pub eps_d: f64,
    pub eps_q: f64,
    pub limiter: bool,
    pub characteristic: bool,
}

/// Path of the sidecar written next to `csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn header(dim: usize, axisym: bool, log_rho: bool) -> Vec<&'static str> {
    let mut h = match (dim, axisym) {
        (1, _) => vec!["x", "rho", "v1", "p", "e", "W", "D", "m1", "E"],
        (_, false) => vec!["x", "y", "rho", "v1", "v2", "p", "e", "W", "D", "m1", "m2", "E"],
        (_, true) => vec!["r", "z", "rho", "v1", "v2", "p", "e", "W", "D", "m1", "m2", "E"],
    };
    if log_rho {
        h.push("ln_rho");
    }
    h
}

/// Writes every interior cell, row-major by y then x. Numbers use the
/// shortest representation that parses back to the same `f64`.
pub fn write_fields<const D: usize>(
    grid: &FieldGrid<f64, D>,
    eos: &EosParams<f64>,
    path: &Path,
    meta: &SnapshotMeta,
    log_rho: bool,
) -> Result<(), RunError> {
    let file = File::create(path).map_err(|e| RunError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let axisym = grid.geometry == Geometry::Axisymmetric;
    w.write_record(header(D, axisym, log_rho)).map_err(|e| RunError::io(path, e))?;
    let opts = RecoveryOptions::default();
    let mut row: Vec<String> = Vec::with_capacity(16);
    for j in 0..grid.n[1] as isize {
        for i in 0..grid.n[0] as isize {
            let u = grid.get(i, j);
            let v = primitive_from_conserved(u, eos, &opts).map_err(|e| e.at(format!("cell ({i}, {j})")))?;
            let c = grid.center(i, j);
            row.clear();
            row.push(c[0].to_string());
            if D == 2 {
                row.push(c[1].to_string());
            }
            row.push(v.rho.to_string());
            row.extend(v.v.iter().map(|x| x.to_string()));
            row.push(v.p.to_string());
            row.push(eos.internal_energy(v.rho, v.p).to_string());
            row.push(v.lorentz_factor().to_string());
            row.push(u.d.to_string());
            row.extend(u.m.iter().map(|x| x.to_string()));
            row.push(u.e.to_string());
            if log_rho {
                row.push(v.rho.ln().to_string());
            }
            w.write_record(&row).map_err(|e| RunError::io(path, e))?;
        }
    }
    w.flush().map_err(|e| RunError::io(path, e))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(meta).map_err(|e| RunError::io(&side, e))?;
    std::fs::write(&side, json).map_err(|e| RunError::io(&side, e))?;
    Ok(())
}

/// Conserved states read back from the D, m*, E columns of a snapshot.
pub fn read_fields<const D: usize>(path: &Path) -> Result<Vec<Conserved<f64, D>>, RunError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| RunError::io(path, e))?;
    let head = r.headers().map_err(|e| RunError::io(path, e))?.clone();
    let col = |name: &str| {
        head.iter()
            .position(|h| h == name)
            .ok_or_else(|| RunError::io(path, format!("missing column `{name}`")))
    };
    let cd = col("D")?;
    let ce = col("E")?;
    let mut cm = [0usize; D];
    for (k, c) in cm.iter_mut().enumerate() {
        *c = col(&format!("m{}", k + 1))?;
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| RunError::io(path, e))?;
        let num = |k: usize| {
            rec.get(k)
                .unwrap_or("")
                .parse::<f64>()
                .map_err(|e| RunError::io(path, format!("line {}: {e}", rec.position().map_or(0, |p| p.line()))))
        };
        let mut m = [0.0; D];
        for (k, x) in m.iter_mut().enumerate() {
            *x = num(cm[k])?;
        }
        out.push(Conserved::new(num(cd)?, m, num(ce)?));
    }
    Ok(out)
}
