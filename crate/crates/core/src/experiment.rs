//! Seeded experiment grids for pivot counts and section edge counts.
//!
//! Each `(cell, trial)` pair owns the seed
//! `derive_seed(derive_seed(seed, Trial, cell), Trial, trial)`; instances,
//! solver randomness and section planes come from separate streams of that
//! seed. Trials run in parallel and rows are emitted in `(cell, trial)`
//! order, so the output does not depend on the thread count.

use crate::geometry::PointSet;
use crate::interpolate::solve_lp;
use crate::phase1::SolverOptions;
use crate::randgen::{derive_seed, gaussian, haar_rotation, sample_instance, stream, unit_vector, Purpose, SmoothedSpec};
use crate::sections::section_edges;
use crate::shadow_walk::SweepPlane;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

pub const PIVOT_SCHEMA: &str = "pivots/v1";
pub const SECTION_SCHEMA: &str = "sections/v1";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },
    #[error("config line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("config: {0}")]
    Invalid(String),
}

/// How the centers `(a_i, b_i)` of a smoothed instance are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterModel {
    /// `a_i = 0`, `b_i = 1`: Gaussian rows around a feasible origin.
    #[default]
    Origin,
    /// `a_i` uniform on the sphere of radius `1/sqrt 2`, `b_i = 1/sqrt 2`.
    Sphere,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub sigma: Vec<f64>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub centers: CenterModel,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.n.is_empty() || self.d.is_empty() || self.sigma.is_empty() {
            return bad("n, d and sigma must be nonempty".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(&d) = self.d.iter().find(|&&d| d < 2) {
            return bad(format!("d = {d} is below 2"));
        }
        let dmax = *self.d.iter().max().unwrap();
        if let Some(&n) = self.n.iter().find(|&&n| n <= dmax) {
            return bad(format!("n = {n} does not exceed d = {dmax}"));
        }
        if let Some(s) = self.sigma.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return bad(format!("sigma = {s} is not a nonnegative number"));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    /// Cells in `n`-major, then `d`, then `sigma` order; cells with
    /// `n <= d` are skipped.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &d in &self.d {
                for &sigma in &self.sigma {
                    if n > d {
                        out.push(Cell { index: out.len(), n, d, sigma });
                    }
                }
            }
        }
        out
    }

    pub fn trial_seed(&self, cell: usize, trial: usize) -> u64 {
        derive_seed(derive_seed(self.seed, Purpose::Trial, cell as u64), Purpose::Trial, trial as u64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub n: usize,
    pub d: usize,
    pub sigma: f64,
}

/// Smoothed-program spec for one trial; centers drawn from the trial seed.
pub fn trial_spec(model: CenterModel, n: usize, d: usize, sigma: f64, seed: u64) -> SmoothedSpec {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (centers_a, centers_b) = match model {
        CenterModel::Origin => (vec![vec![0.0; d]; n], vec![1.0; n]),
        CenterModel::Sphere => {
            let mut rng = stream(seed, Purpose::Centers, 0);
            let a = (0..n).map(|_| unit_vector(&mut rng, d).into_iter().map(|v| v * r).collect()).collect();
            (a, vec![r; n])
        }
    };
    SmoothedSpec { centers_a, centers_b, sigma, seed, objective: None }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PivotRow {
    pub schema: &'static str,
    pub kind: &'static str,
    pub n: usize,
    pub d: usize,
    pub sigma: f64,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub status: String,
    pub pivots_phase1: f64,
    pub pivots_phase2: f64,
    pub pivots_total: f64,
    pub pivots_total_se: Option<f64>,
    pub iterations: f64,
    pub iterations_se: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionRow {
    pub schema: &'static str,
    pub kind: &'static str,
    pub n: usize,
    pub d: usize,
    pub sigma: f64,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub status: String,
    pub degenerate: f64,
    pub edge_count: f64,
    pub edge_count_se: Option<f64>,
    pub margin: f64,
    pub wall_ms: f64,
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn tasks(cfg: &ExperimentConfig) -> Vec<(Cell, usize)> {
    cfg.cells().into_iter().flat_map(|c| (0..cfg.trials).map(move |t| (c, t))).collect()
}

/// One pivot-count trial; `Err` carries the failure message for the row.
pub fn pivot_trial(model: CenterModel, cell: &Cell, seed: u64, opts: &SolverOptions) -> Result<(String, usize, usize, usize), String> {
    let spec = trial_spec(model, cell.n, cell.d, cell.sigma, seed);
    let lp = sample_instance(&spec, &mut stream(seed, Purpose::Instance, 0)).map_err(|e| e.to_string())?;
    let res = solve_lp(&lp, &mut stream(seed, Purpose::Phase1, 0), opts).map_err(|e| e.to_string())?;
    Ok((res.status.as_str().to_string(), res.pivots_phase1, res.pivots_phase2, res.phase1_iterations))
}

pub fn run_pivots(cfg: &ExperimentConfig, opts: &SolverOptions) -> Vec<PivotRow> {
    let work = tasks(cfg);
    let trials: Vec<PivotRow> = work
        .par_iter()
        .map(|(cell, t)| {
            let seed = cfg.trial_seed(cell.index, *t);
            let clock = Instant::now();
            let outcome = pivot_trial(cfg.centers, cell, seed, opts);
            let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
            let (status, p1, p2, it) = match outcome {
                Ok(v) => v,
                Err(msg) => (format!("error: {msg}"), 0, 0, 0),
            };
            PivotRow {
                schema: PIVOT_SCHEMA,
                kind: "trial",
                n: cell.n,
                d: cell.d,
                sigma: cell.sigma,
                trial: Some(*t),
                seed: Some(seed),
                status,
                pivots_phase1: p1 as f64,
                pivots_phase2: p2 as f64,
                pivots_total: (p1 + p2) as f64,
                pivots_total_se: None,
                iterations: it as f64,
                iterations_se: None,
                wall_ms,
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(trials.len() + cfg.cells().len());
    for chunk in trials.chunks(cfg.trials) {
        let ok: Vec<&PivotRow> = chunk.iter().filter(|r| !r.status.starts_with("error")).collect();
        let col = |f: fn(&PivotRow) -> f64| mean_se(&ok.iter().map(|r| f(r)).collect::<Vec<_>>());
        let (p1, _) = col(|r| r.pivots_phase1);
        let (p2, _) = col(|r| r.pivots_phase2);
        let (pt, pt_se) = col(|r| r.pivots_total);
        let (it, it_se) = col(|r| r.iterations);
        let first = &chunk[0];
        let agg = PivotRow {
            kind: "aggregate",
            trial: None,
            seed: None,
            status: format!("ok {}/{}", ok.len(), chunk.len()),
            pivots_phase1: p1,
            pivots_phase2: p2,
            pivots_total: pt,
            pivots_total_se: Some(pt_se),
            iterations: it,
            iterations_se: Some(it_se),
            wall_ms: chunk.iter().map(|r| r.wall_ms).sum(),
            ..first.clone()
        };
        rows.extend(chunk.iter().cloned());
        rows.push(agg);
    }
    rows
}

/// Points of a section trial: `n` Gaussians around the model's centers.
pub fn section_points(model: CenterModel, cell: &Cell, seed: u64) -> PointSet {
    let spec = trial_spec(model, cell.n, cell.d, cell.sigma, seed);
    let mut rng = stream(seed, Purpose::Instance, 0);
    let coords = spec
        .centers_a
        .iter()
        .flat_map(|c| c.iter().map(|&x| x + cell.sigma * gaussian(&mut rng)).collect::<Vec<_>>())
        .collect();
    PointSet::new(cell.d, coords).expect("finite coordinates")
}

/// Haar-random plane of the trial; the whole space when `d = 2`.
pub fn section_plane(d: usize, seed: u64) -> SweepPlane {
    let u = haar_rotation(d, &mut stream(seed, Purpose::Rotation, 0));
    SweepPlane::through(&u.column(0), &u.column(1)).expect("orthonormal columns")
}

pub fn section_trial(model: CenterModel, cell: &Cell, seed: u64, opts: &SolverOptions) -> Result<(bool, usize, f64), String> {
    let points = section_points(model, cell, seed);
    let plane = section_plane(cell.d, seed);
    let r = section_edges(&points, &plane, &mut stream(seed, Purpose::Phase1, 0), opts).map_err(|e| e.to_string())?;
    Ok((r.degenerate, r.edge_count, r.margin))
}

pub fn run_sections(cfg: &ExperimentConfig, opts: &SolverOptions) -> Vec<SectionRow> {
    let work = tasks(cfg);
    let trials: Vec<SectionRow> = work
        .par_iter()
        .map(|(cell, t)| {
            let seed = cfg.trial_seed(cell.index, *t);
            let clock = Instant::now();
            let outcome = section_trial(cfg.centers, cell, seed, opts);
            let wall_ms = clock.elapsed().as_secs_f64() * 1e3;
            let (status, degenerate, edges, margin) = match outcome {
                Ok((deg, e, m)) => ("ok".to_string(), deg, e, m),
                Err(msg) => (format!("error: {msg}"), false, 0, 0.0),
            };
            SectionRow {
                schema: SECTION_SCHEMA,
                kind: "trial",
                n: cell.n,
                d: cell.d,
                sigma: cell.sigma,
                trial: Some(*t),
                seed: Some(seed),
                status,
                degenerate: if degenerate { 1.0 } else { 0.0 },
                edge_count: edges as f64,
                edge_count_se: None,
                margin,
                wall_ms,
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(trials.len() + cfg.cells().len());
    for chunk in trials.chunks(cfg.trials) {
        let ok: Vec<&SectionRow> = chunk.iter().filter(|r| r.status == "ok").collect();
        let (e, e_se) = mean_se(&ok.iter().map(|r| r.edge_count).collect::<Vec<_>>());
        let (deg, _) = mean_se(&ok.iter().map(|r| r.degenerate).collect::<Vec<_>>());
        let (m, _) = mean_se(&ok.iter().map(|r| r.margin).collect::<Vec<_>>());
        let agg = SectionRow {
            kind: "aggregate",
            trial: None,
            seed: None,
            status: format!("ok {}/{}", ok.len(), chunk.len()),
            degenerate: deg,
            edge_count: e,
            edge_count_se: Some(e_se),
            margin: m,
            wall_ms: chunk.iter().map(|r| r.wall_ms).sum(),
            ..chunk[0].clone()
        };
        rows.extend(chunk.iter().cloned());
        rows.push(agg);
    }
    rows
}

/// Write rows as CSV with a header. Timing sits in the last column.
pub fn write_csv<W: Write, T: Serialize>(out: W, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV text with the trailing `wall_ms` column removed from every line.
pub fn strip_timing(csv_text: &str) -> String {
    csv_text
        .lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}
