//! Edge counts of two-dimensional sections `Conv(a_i) ∩ E`.
//!
//! The points are recentred at a relative-interior point of the slice, a
//! starting facet for `q(0)` comes from the unit-program solver, and a full
//! sweep of the plane enumerates the edges.

use crate::geometry::{FacetIndexSet, PointSet};
use crate::linalg::{dot, norm};
use crate::phase1::{solve_unit, Phase1Error, SolverOptions, UnitStatus};
use crate::shadow_walk::{sweep_full, SweepPlane, WalkError};
use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SectionError {
    #[error("section needs n > d points without an infinite vertex")]
    Invalid,
    #[error("plane dimension {plane} does not match points of dimension {points}")]
    DimensionMismatch { plane: usize, points: usize },
    #[error(transparent)]
    Phase1(#[from] Phase1Error),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum InteriorPoint {
    /// A point of `E` with strictly positive convex weights on every input
    /// point, hence interior to the slice relative to `E`.
    Point { x0: Vec<f64>, weights: Vec<f64> },
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionReport {
    pub edge_count: usize,
    pub interior_point: Option<Vec<f64>>,
    pub facets: Vec<FacetIndexSet>,
    pub degenerate: bool,
    /// Largest `eps` with `x0 ± eps basis1` and `x0 ± eps basis2` inside
    /// the slice; zero when degenerate.
    pub margin: f64,
    pub pivots_phase1: usize,
    pub pivots_sweep: usize,
}

impl SectionReport {
    fn degenerate() -> Self {
        SectionReport {
            edge_count: 0,
            interior_point: None,
            facets: Vec::new(),
            degenerate: true,
            margin: 0.0,
            pivots_phase1: 0,
            pivots_sweep: 0,
        }
    }
}

/// Find a point of the plane that is a strictly positive convex combination
/// of the points. With `p_i` the projections onto the orthogonal complement
/// of `E` and `p` their mean, the facet of `Conv(0, p_i)` pierced by `-p`
/// yields `lambda >= 0` with `sum lambda_i p_i = -p`, so weights proportional
/// to `lambda_i + 1/n` balance to zero.
pub fn interior_point_in_slice<R: RngCore + ?Sized>(
    points: &PointSet,
    plane: &SweepPlane,
    rng: &mut R,
    opts: &SolverOptions,
) -> Result<InteriorPoint, SectionError> {
    let (n, d) = (points.len(), points.dim());
    if n <= d || points.infinite_index().is_some() {
        return Err(SectionError::Invalid);
    }
    if plane.dim() != d {
        return Err(SectionError::DimensionMismatch { plane: plane.dim(), points: d });
    }
    let tol = opts.tol();
    let perp = plane.complement();
    let m = perp.len();
    let proj: Vec<Vec<f64>> = points.points().map(|p| perp.iter().map(|w| dot(w, p)).collect()).collect();
    let mean: Vec<f64> = (0..m).map(|k| proj.iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
    let spread = proj.iter().map(|p| norm(p)).fold(0.0_f64, f64::max);

    let mut lambda = vec![0.0; n];
    if m > 0 && norm(&mean) > tol.eps_feas * spread.max(1.0) {
        if m == 1 {
            let target = -mean[0];
            let best = (0..n)
                .filter(|&i| proj[i][0] * target > 0.0)
                .max_by(|&i, &j| proj[i][0].abs().total_cmp(&proj[j][0].abs()));
            let Some(k) = best else { return Ok(InteriorPoint::Degenerate) };
            lambda[k] = target / proj[k][0];
        } else {
            let ps = PointSet::new(m, proj.concat()).map_err(|_| SectionError::Invalid)?;
            if n <= m {
                return Ok(InteriorPoint::Degenerate);
            }
            let target: Vec<f64> = mean.iter().map(|v| -v).collect();
            let res = match solve_unit(&ps, &target, rng, opts) {
                Ok(r) => r,
                Err(Phase1Error::Geometry(_)) | Err(Phase1Error::GaveUp(_)) => return Ok(InteriorPoint::Degenerate),
                Err(e) => return Err(e.into()),
            };
            let facet = match res.status {
                UnitStatus::OptimalFacet(f) => f,
                UnitStatus::Unbounded => return Ok(InteriorPoint::Degenerate),
            };
            let frame = crate::geometry::FacetFrame::new(&ps, facet.indices.clone(), tol).map_err(Phase1Error::from)?;
            for (&i, l) in frame.order().iter().zip(frame.coefficients(&target)) {
                lambda[i] = l.max(0.0);
            }
        }
    }
    let total: f64 = lambda.iter().sum::<f64>() + 1.0;
    let weights: Vec<f64> = lambda.iter().map(|l| (l + 1.0 / n as f64) / total).collect();
    let mut x0 = vec![0.0; d];
    for (w, p) in weights.iter().zip(points.points()) {
        x0.iter_mut().zip(p).for_each(|(x, a)| *x += w * a);
    }
    // snap onto the plane to remove rounding drift
    let (c1, c2) = (dot(&x0, plane.basis1()), dot(&x0, plane.basis2()));
    let x0: Vec<f64> = plane.basis1().iter().zip(plane.basis2()).map(|(a, b)| c1 * a + c2 * b).collect();
    Ok(InteriorPoint::Point { x0, weights })
}

/// Count the edges of `Conv(points) ∩ E` with a full sweep of the plane.
pub fn section_edges<R: RngCore + ?Sized>(
    points: &PointSet,
    plane: &SweepPlane,
    rng: &mut R,
    opts: &SolverOptions,
) -> Result<SectionReport, SectionError> {
    let x0 = match interior_point_in_slice(points, plane, rng, opts)? {
        InteriorPoint::Point { x0, .. } => x0,
        InteriorPoint::Degenerate => return Ok(SectionReport::degenerate()),
    };
    let centred = points.translated(&x0);
    let unit = match solve_unit(&centred, &plane.direction(0.0), rng, opts) {
        Ok(u) => u,
        Err(Phase1Error::Geometry(_)) => return Ok(SectionReport::degenerate()),
        Err(e) => return Err(e.into()),
    };
    let start = match unit.status {
        UnitStatus::OptimalFacet(f) => f,
        UnitStatus::Unbounded => return Ok(SectionReport::degenerate()),
    };
    let out = sweep_full(&centred, plane, &start, 0.0, &opts.walk)?;
    let facets = out.distinct_facets();
    let margin = facets
        .iter()
        .map(|f| 1.0 / dot(&f.normal, plane.basis1()).abs().max(dot(&f.normal, plane.basis2()).abs()))
        .fold(f64::INFINITY, f64::min);
    if !(margin > 10.0 * opts.tol().eps_feas) {
        return Ok(SectionReport::degenerate());
    }
    Ok(SectionReport {
        edge_count: facets.len(),
        interior_point: Some(x0),
        facets,
        degenerate: false,
        margin,
        pivots_phase1: unit.pivots_total,
        pivots_sweep: out.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Tolerance;
    use crate::randgen::{gaussian_vec, stream, Purpose};

    fn square() -> PointSet {
        PointSet::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [0.2, 0.3]]).unwrap()
    }

    fn whole_plane() -> SweepPlane {
        SweepPlane::new(vec![1.0, 0.0], vec![0.0, 1.0], &Tolerance::default()).unwrap()
    }

    #[test]
    fn square_has_four_edges() {
        let mut rng = stream(1, Purpose::Trial, 0);
        let sq = PointSet::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap();
        let opts = SolverOptions::default();
        match interior_point_in_slice(&sq, &whole_plane(), &mut rng, &opts).unwrap() {
            InteriorPoint::Point { x0, .. } => assert!(norm(&x0) < 1e-15),
            other => panic!("{other:?}"),
        }
        let r = section_edges(&sq, &whole_plane(), &mut rng, &opts).unwrap();
        assert_eq!(r.edge_count, 4);
        assert!((r.margin - 1.0).abs() < 1e-12);
        // an interior extra point does not add edges
        let r = section_edges(&square(), &whole_plane(), &mut rng, &opts).unwrap();
        assert_eq!(r.edge_count, 4);
    }

    #[test]
    fn empty_slice_is_degenerate() {
        let mut rng = stream(2, Purpose::Trial, 0);
        let tol = Tolerance::default();
        let pts: Vec<Vec<f64>> = (0..8).map(|i| vec![1.0 + i as f64 * 0.1, (i as f64).sin(), (i as f64).cos()]).collect();
        let ps = PointSet::from_rows(&pts).unwrap();
        let plane = SweepPlane::new(vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], &tol).unwrap();
        let opts = SolverOptions::default();
        assert_eq!(interior_point_in_slice(&ps, &plane, &mut rng, &opts).unwrap(), InteriorPoint::Degenerate);
        let r = section_edges(&ps, &plane, &mut rng, &opts).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.edge_count, 0);
    }

    #[test]
    fn interior_point_is_a_positive_combination_in_the_plane() {
        let opts = SolverOptions::default();
        for d in 3..6 {
            let mut rng = stream(3, Purpose::Trial, d as u64);
            let pts: Vec<Vec<f64>> = (0..(d + 8)).map(|_| gaussian_vec(&mut rng, d)).collect();
            let ps = PointSet::from_rows(&pts).unwrap();
            let plane = SweepPlane::through(&gaussian_vec(&mut rng, d), &gaussian_vec(&mut rng, d)).unwrap();
            let InteriorPoint::Point { x0, weights } = interior_point_in_slice(&ps, &plane, &mut rng, &opts).unwrap() else {
                continue;
            };
            assert!(weights.iter().all(|&w| w > 0.0));
            assert!((weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for w in plane.complement() {
                assert!(dot(&w, &x0).abs() < 1e-9);
            }
            let mut comb = vec![0.0; d];
            for (w, p) in weights.iter().zip(ps.points()) {
                comb.iter_mut().zip(p).for_each(|(c, a)| *c += w * a);
            }
            let gap: f64 = comb.iter().zip(&x0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-9, "gap {gap}");
            let r = section_edges(&ps, &plane, &mut rng, &opts).unwrap();
            assert!(r.edge_count >= 3);
        }
    }

    #[test]
    fn translation_within_plane_is_consistent() {
        let opts = SolverOptions::default();
        let mut rng = stream(4, Purpose::Trial, 0);
        let pts: Vec<Vec<f64>> = (0..12).map(|_| gaussian_vec(&mut rng, 3)).collect();
        let ps = PointSet::from_rows(&pts).unwrap();
        let plane = SweepPlane::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], &Tolerance::default()).unwrap();
        let shift = [0.7, -1.3, 0.0];
        let moved = ps.translated(&shift.map(|v| -v));
        let a = section_edges(&ps, &plane, &mut stream(5, Purpose::Trial, 0), &opts).unwrap();
        let b = section_edges(&moved, &plane, &mut stream(5, Purpose::Trial, 0), &opts).unwrap();
        assert_eq!(a.edge_count, b.edge_count);
        let (xa, xb) = (a.interior_point.unwrap(), b.interior_point.unwrap());
        for k in 0..3 {
            assert!((xb[k] - xa[k] - shift[k]).abs() < 1e-9);
        }
    }
}
