//! Polar shadow-vertex walk.
//!
//! The objective direction `q(theta) = basis1 cos(theta) + basis2 sin(theta)`
//! rotates monotonically in a fixed plane while the walk maintains the facet
//! of `P = Conv(0, a_i)` pierced by `q`. For a facet basis `B`, the cone
//! coefficients `lambda(theta) = B^-1 q(theta)` are sinusoids, so each exit
//! angle is found in closed form; the entering index comes from a minimal
//! ratio test that rotates the supporting hyperplane about the leaving ridge.

use crate::error::GeometryError;
use crate::geometry::{all_below, FacetFrame, FacetIndexSet, PointSet, Tolerance};
use crate::linalg::{dot, norm, norm_inf};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, TAU};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum WalkError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid sweep plane: {0}")]
    InvalidPlane(&'static str),
    #[error("direction at angle {theta} does not pierce the current facet {indices:?}")]
    NotPierced { indices: Vec<usize>, theta: f64 },
    #[error("target angle {target} does not lie ahead of start angle {start}")]
    BadArc { start: f64, target: f64 },
    #[error("no entering index: direction leaves the cone of the constraint points")]
    NoEntering,
    #[error("walk exceeded {0} iterations; tolerance breakdown suspected")]
    CycleSuspected(usize),
    #[error("full sweep left the cone of the points; origin is not interior to the slice")]
    SweepEscaped,
    #[error("full sweep requires a point set without a vertex at infinity")]
    InfiniteVertexInSweep,
    #[error("trace audit failed: {0}")]
    AuditFailed(String),
}

/// Oriented orthonormal pair spanning the rotation plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPlane {
    basis1: Vec<f64>,
    basis2: Vec<f64>,
}

impl SweepPlane {
    pub fn new(basis1: Vec<f64>, basis2: Vec<f64>, tol: &Tolerance) -> Result<Self, WalkError> {
        if basis1.len() != basis2.len() || basis1.len() < 2 {
            return Err(WalkError::InvalidPlane("basis vectors must share a dimension of at least 2"));
        }
        if (norm(&basis1) - 1.0).abs() > tol.eps_angle || (norm(&basis2) - 1.0).abs() > tol.eps_angle {
            return Err(WalkError::InvalidPlane("basis vectors must be unit length"));
        }
        if dot(&basis1, &basis2).abs() > tol.eps_angle {
            return Err(WalkError::InvalidPlane("basis vectors must be orthogonal"));
        }
        Ok(SweepPlane { basis1, basis2 })
    }

    /// Plane oriented so that `start` sits at angle 0 and `toward` at an angle
    /// in `(0, pi)`. Fails if the two are collinear.
    pub fn through(start: &[f64], toward: &[f64]) -> Result<Self, WalkError> {
        let ns = norm(start);
        if ns == 0.0 || start.len() != toward.len() {
            return Err(WalkError::InvalidPlane("start direction must be nonzero"));
        }
        let b1: Vec<f64> = start.iter().map(|v| v / ns).collect();
        let proj = dot(toward, &b1);
        let mut b2: Vec<f64> = toward.iter().zip(&b1).map(|(t, b)| t - proj * b).collect();
        // second Gram-Schmidt pass for orthogonality at full precision
        let proj2 = dot(&b2, &b1);
        b2.iter_mut().zip(&b1).for_each(|(t, b)| *t -= proj2 * b);
        let n2 = norm(&b2);
        if n2 <= 1e-12 * norm(toward).max(f64::MIN_POSITIVE) {
            return Err(WalkError::InvalidPlane("directions are collinear"));
        }
        b2.iter_mut().for_each(|v| *v /= n2);
        Ok(SweepPlane { basis1: b1, basis2: b2 })
    }

    /// Plane from `start` toward `target`, falling back to the explicit
    /// `rotation` direction when the two are collinear. Returns the plane and
    /// the angle of `target`.
    pub fn with_rotation(start: &[f64], target: &[f64], rotation: &[f64]) -> Result<(Self, f64), WalkError> {
        let plane = match Self::through(start, target) {
            Ok(p) => p,
            Err(WalkError::InvalidPlane("directions are collinear")) => Self::through(start, rotation)?,
            Err(e) => return Err(e),
        };
        let theta = plane.angle_of(target);
        Ok((plane, theta))
    }

    pub fn basis1(&self) -> &[f64] {
        &self.basis1
    }

    pub fn basis2(&self) -> &[f64] {
        &self.basis2
    }

    pub fn dim(&self) -> usize {
        self.basis1.len()
    }

    pub fn direction(&self, theta: f64) -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        self.basis1.iter().zip(&self.basis2).map(|(a, b)| a * c + b * s).collect()
    }

    /// Angle in `[0, 2 pi)` of the projection of `v` onto the plane.
    pub fn angle_of(&self, v: &[f64]) -> f64 {
        let t = dot(v, &self.basis2).atan2(dot(v, &self.basis1));
        let t = t.rem_euclid(TAU);
        if t >= TAU {
            0.0
        } else {
            t
        }
    }

    /// Orthonormal basis of the orthogonal complement, `d - 2` vectors.
    pub fn complement(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        let mut basis: Vec<Vec<f64>> = vec![self.basis1.clone(), self.basis2.clone()];
        for k in 0..d {
            if basis.len() == d {
                break;
            }
            let mut v = vec![0.0; d];
            v[k] = 1.0;
            for _ in 0..2 {
                for q in &basis {
                    let p = dot(&v, q);
                    v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
                }
            }
            let nv = norm(&v);
            if nv > 1e-6 {
                basis.push(v.into_iter().map(|a| a / nv).collect());
            }
        }
        basis.split_off(2)
    }
}

/// Explicit direction of rotation for antiparallel start/target objectives.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationDirection(pub Vec<f64>);

impl RotationDirection {
    /// First coordinate axis not parallel to `z`, orthogonalized against it.
    pub fn default_for(z: &[f64]) -> Self {
        let nz = norm(z);
        let mut best = vec![0.0; z.len()];
        for k in 0..z.len() {
            let mut e = vec![0.0; z.len()];
            e[k] = 1.0;
            let p = z[k] / (nz * nz);
            let cand: Vec<f64> = e.iter().zip(z).map(|(a, b)| a - p * b).collect();
            if norm(&cand) > 1e-6 {
                best = cand;
                break;
            }
        }
        RotationDirection(best)
    }
}

/// Where the current facet's angular interval ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exit {
    At { theta: f64, leaving: usize },
    Never,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub facet: FacetIndexSet,
    pub start: f64,
    pub end: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum WalkStatus {
    /// Limit facet at the target angle, approached from below.
    OptimalFacet(FacetIndexSet),
    Unbounded,
    /// A full sweep completed its circle.
    ExhaustedArc,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkOutcome {
    pub status: WalkStatus,
    pub pivots: usize,
    pub trace: Vec<TraceStep>,
}

impl WalkOutcome {
    /// Facets in order of first appearance, each once.
    pub fn distinct_facets(&self) -> Vec<FacetIndexSet> {
        let mut out: Vec<FacetIndexSet> = Vec::new();
        for step in &self.trace {
            if !out.contains(&step.facet) {
                out.push(step.facet.clone());
            }
        }
        out
    }

    pub fn total_angle(&self) -> f64 {
        self.trace.iter().map(|s| s.end - s.start).sum()
    }
}

/// Entering-index selection. `Reversed` flips the sign of the ratio and is
/// only useful as a deliberately broken rule when testing the checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RatioRule {
    #[default]
    Minimal,
    Reversed,
}

#[derive(Clone, Copy, Debug)]
pub struct WalkOptions {
    pub tol: Tolerance,
    /// Defaults to `10 n d + 10^6`.
    pub iteration_cap: Option<usize>,
    /// Check every trace for locality, validity and monotonicity.
    pub audit: bool,
    pub rule: RatioRule,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions { tol: Tolerance::default(), iteration_cap: None, audit: false, rule: RatioRule::Minimal }
    }
}

impl WalkOptions {
    fn cap(&self, points: &PointSet) -> usize {
        self.iteration_cap.unwrap_or(10 * points.total() * points.dim() + 1_000_000)
    }
}

fn pierced_at(frame: &FacetFrame, plane: &SweepPlane, theta: f64, tol: &Tolerance) -> bool {
    tol.in_cone(&frame.coefficients(&plane.direction(theta)))
}

pub(crate) fn exit_from_frame(frame: &FacetFrame, plane: &SweepPlane, theta_now: f64, tol: &Tolerance) -> Exit {
    let alpha = frame.coefficients(plane.basis1());
    let beta = frame.coefficients(plane.basis2());
    let amps: Vec<f64> = alpha.iter().zip(&beta).map(|(a, b)| a.hypot(*b)).collect();
    let amp_floor = 1e-14 * norm_inf(&amps);
    let slack = tol.angle_slack();
    let mut best: Option<(f64, usize)> = None;
    for (pos, (&a, &b)) in alpha.iter().zip(&beta).enumerate() {
        if !(amps[pos] > amp_floor) {
            continue;
        }
        // lambda(theta) = r cos(theta - phi) falls through zero at phi + pi/2
        let phi = b.atan2(a);
        let mut delta = (phi + FRAC_PI_2 - theta_now).rem_euclid(TAU);
        if delta > TAU - slack {
            delta = 0.0;
        }
        let index = frame.order()[pos];
        let better = match best {
            None => true,
            Some((bd, bi)) => delta < bd || (delta == bd && index < bi),
        };
        if better {
            best = Some((delta, index));
        }
    }
    match best {
        Some((delta, leaving)) => Exit::At { theta: theta_now + delta, leaving },
        None => Exit::Never,
    }
}

/// Minimal-ratio entering index for the ridge left by `leaving`.
pub(crate) fn entering_index(
    points: &PointSet,
    frame: &FacetFrame,
    leaving: usize,
    tol: &Tolerance,
    rule: RatioRule,
) -> Option<usize> {
    let pos = frame.position(leaving)?;
    let g = frame.ridge_direction(pos);
    let h = frame.normal();
    let gscale = norm_inf(&g);
    let mut best: Option<(f64, usize)> = None;
    for k in 0..points.total() {
        if frame.order().contains(&k) {
            continue;
        }
        let c = points.column(k);
        let den = dot(&g, c);
        if den <= tol.eps_feas * gscale * norm_inf(c) {
            continue;
        }
        let s = (points.rhs(k) - dot(h, c)) / den;
        let s = if rule == RatioRule::Reversed { -s } else { s };
        if best.is_none_or(|(bs, _)| s < bs) {
            best = Some((s, k));
        }
    }
    best.map(|(_, k)| k)
}

fn replaced(frame: &FacetFrame, leaving: usize, entering: usize) -> Vec<usize> {
    frame.order().iter().map(|&i| if i == leaving { entering } else { i }).collect()
}

/// End of the angular interval on which `facet` stays pierced, starting at
/// `theta_now`.
pub fn exit_angle(
    points: &PointSet,
    facet: &FacetIndexSet,
    plane: &SweepPlane,
    theta_now: f64,
    tol: &Tolerance,
) -> Result<Exit, WalkError> {
    let frame = FacetFrame::new(points, facet.indices.clone(), tol)?;
    if !pierced_at(&frame, plane, theta_now, tol) {
        return Err(WalkError::NotPierced { indices: facet.indices.clone(), theta: theta_now });
    }
    Ok(exit_from_frame(&frame, plane, theta_now, tol))
}

/// Replace `leaving` by the minimal-ratio entering index.
pub fn pivot(points: &PointSet, facet: &FacetIndexSet, leaving: usize, tol: &Tolerance) -> Result<FacetIndexSet, WalkError> {
    let frame = FacetFrame::new(points, facet.indices.clone(), tol)?;
    if frame.position(leaving).is_none() {
        return Err(GeometryError::BadIndexSet { expected: points.dim(), got: vec![leaving] }.into());
    }
    let entering = entering_index(points, &frame, leaving, tol, RatioRule::Minimal).ok_or(WalkError::NoEntering)?;
    Ok(FacetIndexSet::new(points, &replaced(&frame, leaving, entering), tol)?)
}

enum Mode {
    Arc,
    FullTurn,
}

fn run(
    points: &PointSet,
    plane: &SweepPlane,
    start: &FacetIndexSet,
    theta_start: f64,
    theta_target: f64,
    opts: &WalkOptions,
    mode: Mode,
) -> Result<WalkOutcome, WalkError> {
    let tol = &opts.tol;
    if plane.dim() != points.dim() {
        return Err(GeometryError::DimensionMismatch { expected: points.dim(), got: plane.dim() }.into());
    }
    let mut frame = FacetFrame::new(points, start.indices.clone(), tol)?;
    if !pierced_at(&frame, plane, theta_start, tol) {
        return Err(WalkError::NotPierced { indices: start.indices.clone(), theta: theta_start });
    }
    let cap = opts.cap(points);
    let slack = tol.angle_slack();
    let mut trace = Vec::new();
    let mut theta = theta_start;
    let mut pivots = 0;
    let finished = |frame: &FacetFrame, trace: &mut Vec<TraceStep>, theta: f64, pivots: usize| {
        trace.push(TraceStep { facet: frame.to_index_set(points), start: theta, end: theta_target });
        let status = match mode {
            Mode::Arc => WalkStatus::OptimalFacet(frame.to_index_set(points)),
            Mode::FullTurn => WalkStatus::ExhaustedArc,
        };
        WalkOutcome { status, pivots, trace: std::mem::take(trace) }
    };
    for _ in 0..cap {
        let (theta_exit, leaving) = match exit_from_frame(&frame, plane, theta, tol) {
            Exit::Never => return Ok(finished(&frame, &mut trace, theta, pivots)),
            Exit::At { theta, leaving } => (theta, leaving),
        };
        if theta_exit >= theta_target - slack {
            return Ok(finished(&frame, &mut trace, theta, pivots));
        }
        trace.push(TraceStep { facet: frame.to_index_set(points), start: theta, end: theta_exit });
        match entering_index(points, &frame, leaving, tol, opts.rule) {
            Some(entering) => {
                frame = FacetFrame::new(points, replaced(&frame, leaving, entering), tol)?;
                pivots += 1;
                theta = theta_exit;
            }
            None => {
                return match mode {
                    Mode::Arc => Ok(WalkOutcome { status: WalkStatus::Unbounded, pivots, trace }),
                    Mode::FullTurn => Err(WalkError::SweepEscaped),
                };
            }
        }
    }
    Err(WalkError::CycleSuspected(cap))
}

/// Rotate from `theta_start` to `theta_target` and return the limit facet at
/// the target (approached from below), or `Unbounded` if the direction leaves
/// the cone of the points first.
pub fn walk(
    points: &PointSet,
    plane: &SweepPlane,
    start: &FacetIndexSet,
    theta_start: f64,
    theta_target: f64,
    opts: &WalkOptions,
) -> Result<WalkOutcome, WalkError> {
    if !(theta_target > theta_start) || theta_target - theta_start > TAU + opts.tol.angle_slack() {
        return Err(WalkError::BadArc { start: theta_start, target: theta_target });
    }
    let out = run(points, plane, start, theta_start, theta_target, opts, Mode::Arc)?;
    if opts.audit {
        audit_trace(points, &out, &opts.tol).map_err(WalkError::AuditFailed)?;
    }
    Ok(out)
}

/// Walk the whole circle `[theta_start, theta_start + 2 pi)`. The origin must
/// be interior to the slice of `Conv(points)` by the plane.
pub fn sweep_full(
    points: &PointSet,
    plane: &SweepPlane,
    start: &FacetIndexSet,
    theta_start: f64,
    opts: &WalkOptions,
) -> Result<WalkOutcome, WalkError> {
    if points.infinite_index().is_some() {
        return Err(WalkError::InfiniteVertexInSweep);
    }
    let out = run(points, plane, start, theta_start, theta_start + TAU, opts, Mode::FullTurn)?;
    if opts.audit {
        audit_trace(points, &out, &opts.tol).map_err(WalkError::AuditFailed)?;
        audit_sweep(&out, theta_start)?;
    }
    Ok(out)
}

fn audit_sweep(out: &WalkOutcome, theta_start: f64) -> Result<(), WalkError> {
    let total = out.total_angle();
    if (total - TAU).abs() > 1e-9 {
        return Err(WalkError::AuditFailed(format!("sweep covers {total} rad, expected 2 pi")));
    }
    if out.trace.first().map(|s| s.start) != Some(theta_start) {
        return Err(WalkError::AuditFailed("sweep does not start at theta_start".into()));
    }
    if out.pivots + 1 != out.trace.len() {
        return Err(WalkError::AuditFailed("pivot count disagrees with trace length".into()));
    }
    Ok(())
}

/// Structural checks on a trace: adjacent facets share `d - 1` indices, every
/// facet is a valid supporting facet, and intervals are contiguous with
/// strictly increasing starts.
pub fn audit_trace(points: &PointSet, out: &WalkOutcome, tol: &Tolerance) -> Result<(), String> {
    let d = points.dim();
    for (k, step) in out.trace.iter().enumerate() {
        let f = &step.facet;
        let frame = FacetFrame::new(points, f.indices.clone(), tol).map_err(|e| format!("facet {:?}: {e}", f.indices))?;
        let h = frame.normal();
        for &i in &f.indices {
            let r = dot(h, points.column(i)) - points.rhs(i);
            if r.abs() > 10.0 * tol.eps_feas {
                return Err(format!("facet {:?}: residual {r:e} at index {i}", f.indices));
            }
        }
        if !all_below(points, h, tol) {
            return Err(format!("facet {:?} is not supporting", f.indices));
        }
        if step.end < step.start {
            return Err(format!("interval {k} is reversed"));
        }
        if k > 0 {
            let prev = &out.trace[k - 1];
            if f.overlap(&prev.facet) != d - 1 {
                return Err(format!("facets {:?} -> {:?} are not adjacent", prev.facet.indices, f.indices));
            }
            if step.start != prev.end {
                return Err(format!("gap between intervals {} and {k}", k - 1));
            }
            if !(step.start > prev.start) {
                return Err(format!("interval starts not increasing at {k}"));
            }
        }
    }
    Ok(())
}
