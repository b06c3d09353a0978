//! Energy curves: one VQE run and one exact diagonalization per
//! Hamiltonian file listed in a manifest of `distance path` lines.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exec::map_collect;
use crate::numfmt::fmt_g17;
use crate::vqe::{minimize_observable, AnsatzSpec, Hamiltonian, Observable, VqeConfig};

pub const CSV_HEADER: &str = "distance,vqe_energy,exact_energy,iterations,converged";

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub distance: f64,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub distance: f64,
    pub vqe_energy: f64,
    pub exact_energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the point could not be evaluated; energies are then NaN.
    pub error: Option<String>,
}

/// Reads `distance path` lines; relative paths resolve against the manifest's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<CurvePoint>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::arg(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base)
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<CurvePoint>> {
    let mut points = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((distance, file)) = line.split_once(char::is_whitespace) else {
            return Err(Error::parse(no + 1, "expected `distance path`"));
        };
        let distance: f64 = distance
            .parse()
            .ok()
            .filter(|d: &f64| d.is_finite())
            .ok_or_else(|| Error::parse(no + 1, format!("bad distance `{distance}`")))?;
        points.push(CurvePoint {
            distance,
            path: base.join(file.trim()),
        });
    }
    if points.is_empty() {
        return Err(Error::parse(
            text.lines().count().max(1),
            "manifest lists no files",
        ));
    }
    Ok(points)
}

fn evaluate(point: &CurvePoint, spec: &AnsatzSpec, config: &VqeConfig) -> Result<CurveRow> {
    let text = fs::read_to_string(&point.path)
        .map_err(|e| Error::arg(format!("cannot read {}: {e}", point.path.display())))?;
    let h = Hamiltonian::parse(&text)?;
    let obs = Observable::new(&h)?;
    let result = minimize_observable(&obs, spec, config)?;
    Ok(CurveRow {
        distance: point.distance,
        vqe_energy: result.energy,
        exact_energy: obs.ground_energy(),
        iterations: result.iterations,
        converged: result.converged,
        error: None,
    })
}

/// One row per point, sorted by distance. Failing points keep their row.
pub fn energy_curve(points: &[CurvePoint], spec: &AnsatzSpec, config: &VqeConfig) -> Vec<CurveRow> {
    let mut rows = map_collect(points, config.parallelism, |p| {
        evaluate(p, spec, config).unwrap_or_else(|e| CurveRow {
            distance: p.distance,
            vqe_energy: f64::NAN,
            exact_energy: f64::NAN,
            iterations: 0,
            converged: false,
            error: Some(format!("{}: {e}", p.path.display())),
        })
    });
    rows.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    rows
}

pub fn write_csv(rows: &[CurveRow]) -> String {
    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_g17(r.distance),
            fmt_g17(r.vqe_energy),
            fmt_g17(r.exact_energy),
            r.iterations,
            r.converged
        )
        .unwrap();
    }
    out
}
