//! Randomized phase-I for unit programs `max <z, x>` s.t. `<a_i, x> <= 1`.
//!
//! Instead of searching for a feasible vertex, `d` constraints are added whose
//! facet is known to be optimal for an auxiliary objective `z0`: a tiny
//! smoothed regular simplex far out in a Haar-random direction. The walk
//! then rotates `z0` toward `z`. If the final facet avoids the added indices
//! the augmented program was equivalent and its answer is returned;
//! otherwise the whole step is redrawn.

use crate::error::GeometryError;
use crate::geometry::{cone_coefficients, facet_normal, FacetIndexSet, PointSet, Tolerance};
use crate::linalg::{axpy, dot, norm, scale};
use crate::randgen::{self, gaussian, haar_rotation, stream, Purpose, Rotation};
use crate::shadow_walk::{walk, RotationDirection, SweepPlane, WalkError, WalkOptions, WalkStatus};
use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Phase1Error {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("phase-I gave up after {0} iterations")]
    GaveUp(usize),
    #[error("unit program needs n > d and a nonzero objective")]
    Invalid,
}

/// Size and smoothing of the added simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Phase1Params {
    pub c1: f64,
    pub ell: f64,
    pub sigma1: f64,
}

impl Phase1Params {
    pub fn new(d: usize, n: usize) -> Self {
        Phase1Params { c1: randgen::C1, ell: randgen::ell(d), sigma1: randgen::sigma1(d, n) }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub walk: WalkOptions,
    pub retry_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { walk: WalkOptions::default(), retry_cap: 1000 }
    }
}

impl SolverOptions {
    pub fn tol(&self) -> &Tolerance {
        &self.walk.tol
    }
}

/// Unit vector `e_d` and the vertices of a regular simplex of radius `ell`
/// centered at it inside the hyperplane `<e_d, x> = 1`.
pub fn simplex_vertices(d: usize, ell: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    assert!(d >= 2 && ell > 0.0);
    let df = d as f64;
    let mut z0 = vec![0.0; d];
    z0[d - 1] = 1.0;
    // f_i = e_i - 1/d lives in the complement of the all-ones direction;
    // the Householder reflection swapping 1/sqrt(d) with e_d carries that
    // complement onto the complement of e_d.
    let f_norm = ((df - 1.0) / df).sqrt();
    let mut w: Vec<f64> = vec![1.0 / df.sqrt(); d];
    w[d - 1] -= 1.0;
    let ww = dot(&w, &w);
    let vertices = (0..d)
        .map(|i| {
            let mut f = vec![-1.0 / df; d];
            f[i] += 1.0;
            let f = scale(&f, ell / f_norm);
            let reflected = axpy(&f, -2.0 * dot(&w, &f) / ww, &w);
            axpy(&z0, 1.0, &reflected)
        })
        .collect();
    (z0, vertices)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AddedBlock {
    pub added_points: Vec<Vec<f64>>,
    pub z0: Vec<f64>,
    pub m0: f64,
    pub rotation: Rotation,
    /// Rotated and dilated simplex vertices before smoothing.
    pub centers: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AddFailure {
    #[error("z0 is not in the cone of the added points")]
    NotInCone,
    #[error("added hyperplane at distance {distance} is closer than M = {max_norm}")]
    TooClose { distance: f64, max_norm: f64 },
    #[error("added points are affinely degenerate")]
    Singular,
    #[error("M0 = {m0} is smaller than the largest point norm {max_norm}")]
    SizeTooSmall { m0: f64, max_norm: f64 },
}

/// Rotate, dilate and smooth the fixed simplex, then check that `z0` lies
/// in the cone of the added points and that their hyperplane keeps every
/// original point strictly below it.
pub fn add_constraints<R: RngCore + ?Sized>(
    points: &PointSet,
    m0: f64,
    rotation: &Rotation,
    params: &Phase1Params,
    rng: &mut R,
    tol: &Tolerance,
) -> Result<AddedBlock, AddFailure> {
    let d = points.dim();
    let max_norm = points.max_norm();
    if m0 < max_norm {
        return Err(AddFailure::SizeTooSmall { m0, max_norm });
    }
    let (z0p, simplex) = simplex_vertices(d, params.ell);
    let dil = 2.0 * m0;
    let z0 = scale(&rotation.apply(&z0p), dil);
    let centers: Vec<Vec<f64>> = simplex.iter().map(|v| scale(&rotation.apply(v), dil)).collect();
    let sd = dil * params.sigma1;
    let added_points: Vec<Vec<f64>> =
        centers.iter().map(|c| c.iter().map(|&x| x + sd * gaussian(rng)).collect()).collect();

    let block = PointSet::from_rows(&added_points).map_err(|_| AddFailure::Singular)?;
    let all: Vec<usize> = (0..d).collect();
    let lam = cone_coefficients(&block, &all, &z0, tol).map_err(|_| AddFailure::Singular)?;
    if !tol.in_cone(&lam) {
        return Err(AddFailure::NotInCone);
    }
    let h = facet_normal(&block, &all, tol).map_err(|_| AddFailure::Singular)?;
    let distance = 1.0 / norm(&h);
    if distance < max_norm {
        return Err(AddFailure::TooClose { distance, max_norm });
    }
    Ok(AddedBlock { added_points, z0, m0, rotation: rotation.clone(), centers })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum UnitStatus {
    /// Optimal facet; indices refer to the original points only.
    OptimalFacet(FacetIndexSet),
    Unbounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitResult {
    pub status: UnitStatus,
    pub pivots_total: usize,
    /// Passes through the retry loop, including failed ones.
    pub iterations: usize,
    /// Passes where adding constraints returned a failure.
    pub failures: usize,
}

/// Solve the unit program by repeatedly adding a random facet and walking
/// from its objective `z0` to `z`. Every retry draws from its own stream
/// derived from one base seed taken from `rng`.
pub fn solve_unit<R: RngCore + ?Sized>(
    points: &PointSet,
    z: &[f64],
    rng: &mut R,
    opts: &SolverOptions,
) -> Result<UnitResult, Phase1Error> {
    let n = points.len();
    let d = points.dim();
    if n <= d || points.infinite_index().is_some() || z.len() != d || norm(z) == 0.0 {
        return Err(Phase1Error::Invalid);
    }
    let tol = opts.tol();
    let params = Phase1Params::new(d, n);
    let m0 = randgen::m0(points.max_norm().max(f64::MIN_POSITIVE));
    let rotation_dir = RotationDirection::default_for(z);
    let base = rng.next_u64();
    let mut pivots_total = 0;
    let mut failures = 0;
    for iteration in 0..opts.retry_cap {
        let mut it_rng = stream(base, Purpose::Phase1Retry, iteration as u64);
        let rotation = haar_rotation(d, &mut it_rng);
        let block = match add_constraints(points, m0, &rotation, &params, &mut it_rng, tol) {
            Ok(b) => b,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let mut augmented = points.clone();
        block.added_points.iter().for_each(|p| augmented.push(p));
        let start_idx: Vec<usize> = (n..n + d).collect();
        let start = FacetIndexSet::new(&augmented, &start_idx, tol)?;
        let (plane, target) = SweepPlane::with_rotation(&block.z0, z, &rotation_dir.0)?;
        let status = if target <= tol.angle_slack() {
            WalkStatus::OptimalFacet(start)
        } else {
            let out = walk(&augmented, &plane, &start, 0.0, target, &opts.walk)?;
            pivots_total += out.pivots;
            out.status
        };
        match status {
            WalkStatus::Unbounded => {
                return Ok(UnitResult { status: UnitStatus::Unbounded, pivots_total, iterations: iteration + 1, failures })
            }
            WalkStatus::OptimalFacet(f) if f.indices.iter().all(|&i| i < n) => {
                let facet = FacetIndexSet::new(points, &f.indices, tol)?;
                return Ok(UnitResult {
                    status: UnitStatus::OptimalFacet(facet),
                    pivots_total,
                    iterations: iteration + 1,
                    failures,
                });
            }
            _ => continue,
        }
    }
    Err(Phase1Error::GaveUp(opts.retry_cap))
}

/// Normal of the affine span of the optimal facet; every point below it is
/// in the numb set of the program.
pub fn numb_halfspace_witness(points: &PointSet, oracle_facet: &FacetIndexSet, tol: &Tolerance) -> Result<Vec<f64>, GeometryError> {
    facet_normal(points, &oracle_facet.indices, tol)
}
