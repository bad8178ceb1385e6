//! Brute-force ground truth for small instances.
//!
//! Everything here enumerates `d`-subsets. Facet enumeration uses the
//! geometry primitives; LP classification and section counting solve their
//! systems through `nalgebra` so they share no code path with the walker.

use crate::geometry::{all_below, FacetFrame, FacetIndexSet, PointSet, Tolerance};
use crate::interpolate::GeneralLP;
use crate::linalg::{dot, norm};
use crate::shadow_walk::SweepPlane;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_SUBSET_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum OracleError {
    #[error("{subsets} subsets exceed the enumeration cap {cap}")]
    TooLarge { subsets: u64, cap: u64 },
    #[error("oracle needs n > d, got n = {n}, d = {d}")]
    TooFewConstraints { n: usize, d: usize },
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_cap(n: usize, d: usize, cap: u64) -> Result<(), OracleError> {
    let subsets = binomial(n, d);
    if subsets > cap {
        return Err(OracleError::TooLarge { subsets, cap });
    }
    Ok(())
}

/// All facets of `Conv(0, points)` (with the infinite vertex, if any) whose
/// hyperplane does not pass through the origin.
pub fn enumerate_facets(points: &PointSet, tol: &Tolerance) -> Result<Vec<FacetIndexSet>, OracleError> {
    check_cap(points.total(), points.dim(), DEFAULT_SUBSET_CAP)?;
    let mut out = Vec::new();
    for_each_subset(points.total(), points.dim(), |idx| {
        if let Ok(f) = FacetIndexSet::new(points, idx, tol) {
            if all_below(points, &f.normal, tol) {
                out.push(f);
            }
        }
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum FacetLookup {
    Facet(FacetIndexSet),
    /// No facet is pierced: the unit program is unbounded in this direction.
    Empty,
    /// Several facets claim the direction within the oracle band.
    Ambiguous(Vec<FacetIndexSet>),
}

/// The facet of `Conv(0, points)` pierced by `z`.
pub fn facet_of(points: &PointSet, z: &[f64], tol: &Tolerance) -> Result<FacetLookup, OracleError> {
    check_cap(points.total(), points.dim(), DEFAULT_SUBSET_CAP)?;
    let band = tol.eps_feas / 10.0;
    let mut claims = Vec::new();
    for_each_subset(points.total(), points.dim(), |idx| {
        let Ok(frame) = FacetFrame::new(points, idx.to_vec(), tol) else { return };
        let lam = frame.coefficients(z);
        let scale = lam.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        if lam.iter().any(|&l| l < -band * scale) {
            return;
        }
        if all_below(points, frame.normal(), tol) {
            claims.push(frame.to_index_set(points));
        }
    });
    Ok(match claims.len() {
        0 => FacetLookup::Empty,
        1 => FacetLookup::Facet(claims.pop().unwrap()),
        _ => FacetLookup::Ambiguous(claims),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OracleStatus {
    Optimal { basis: Vec<usize>, x_opt: Vec<f64>, value: f64 },
    Unbounded,
    Infeasible,
    Ambiguous(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub status: OracleStatus,
    pub enumerated_facets: Option<Vec<FacetIndexSet>>,
}

impl OracleVerdict {
    fn of(status: OracleStatus) -> Self {
        OracleVerdict { status, enumerated_facets: None }
    }
}

/// Solve the square system, refusing when it is numerically rank deficient.
fn solve_square(m: DMatrix<f64>, rhs: DVector<f64>) -> Option<DVector<f64>> {
    let sv = m.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-11 * smax) {
        return None;
    }
    m.lu().solve(&rhs)
}

fn rows_matrix(lp: &GeneralLP, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), lp.d(), |r, c| lp.row(idx[r])[c])
}

struct Vertex {
    basis: Vec<usize>,
    x: Vec<f64>,
    /// Scale-free worst violation over rows outside the basis.
    margin: f64,
    value: f64,
}

/// Classify `max <z, x>` s.t. `A x <= b` by vertex enumeration and a
/// recession-cone test: when feasible, the program is bounded iff `z` lies
/// in the cone of the rows.
pub fn classify_lp(lp: &GeneralLP, tol: &Tolerance) -> Result<OracleVerdict, OracleError> {
    let (n, d) = (lp.n(), lp.d());
    if n <= d {
        return Err(OracleError::TooFewConstraints { n, d });
    }
    check_cap(n, d, DEFAULT_SUBSET_CAP)?;
    let band = 10.0 * tol.eps_feas;
    let row_scale: Vec<f64> = lp.rows().zip(lp.b()).map(|(a, b)| norm(a) + b.abs()).collect();

    let mut vertices = Vec::new();
    let mut nonsingular = 0usize;
    // z in cone(a_I): best (largest) scale-free minimum coefficient
    let mut best_cone = f64::NEG_INFINITY;
    let zn = norm(lp.z());
    for_each_subset(n, d, |idx| {
        let m = rows_matrix(lp, idx);
        let b = DVector::from_iterator(d, idx.iter().map(|&i| lp.b()[i]));
        let Some(x) = solve_square(m.clone(), b) else { return };
        nonsingular += 1;
        let x: Vec<f64> = x.iter().copied().collect();
        let margin = (0..n)
            .filter(|k| !idx.contains(k))
            .map(|k| (dot(lp.row(k), &x) - lp.b()[k]) / row_scale[k].max(f64::MIN_POSITIVE))
            .fold(f64::NEG_INFINITY, f64::max);
        let value = lp.objective_value(&x);
        vertices.push(Vertex { basis: idx.to_vec(), x, margin, value });
        if let Some(lam) = solve_square(m.transpose(), DVector::from_column_slice(lp.z())) {
            let min = idx
                .iter()
                .zip(lam.iter())
                .map(|(&i, l)| l * norm(lp.row(i)) / zn)
                .fold(f64::INFINITY, f64::min);
            best_cone = best_cone.max(min);
        }
    });

    if nonsingular == 0 {
        return Ok(OracleVerdict::of(rank_deficient_fallback(lp, band)));
    }

    let feasible: Vec<&Vertex> = vertices.iter().filter(|v| v.margin < -band).collect();
    let borderline = vertices.iter().any(|v| v.margin.abs() <= band);
    if feasible.is_empty() {
        return Ok(OracleVerdict::of(if borderline {
            OracleStatus::Ambiguous("feasibility decided within the tolerance band".into())
        } else {
            OracleStatus::Infeasible
        }));
    }
    if best_cone.abs() <= band {
        return Ok(OracleVerdict::of(OracleStatus::Ambiguous("objective on the boundary of the row cone".into())));
    }
    if best_cone < 0.0 {
        return Ok(OracleVerdict::of(OracleStatus::Unbounded));
    }

    let best = feasible.iter().copied().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
    let vband = band * (1.0 + best.value.abs());
    let ties = feasible.iter().filter(|v| best.value - v.value <= vband).count();
    let shadowed = vertices.iter().any(|v| v.margin.abs() <= band && v.value >= best.value - vband);
    if ties > 1 || shadowed {
        return Ok(OracleVerdict::of(OracleStatus::Ambiguous("optimal vertex not unique within band".into())));
    }
    Ok(OracleVerdict::of(OracleStatus::Optimal { basis: best.basis.clone(), x_opt: best.x.clone(), value: best.value }))
}

/// Rows of rank below `d`: no vertex exists. Decide feasibility on a coarse
/// grid by the largest minimum slack; boundedness cannot be certified from
/// `d`-subsets, so feasible cases stay ambiguous unless `z` leaves the row
/// space entirely.
fn rank_deficient_fallback(lp: &GeneralLP, band: f64) -> OracleStatus {
    let d = lp.d();
    let reach = 1.0 + lp.b().iter().fold(0.0_f64, |m, v| m.max(v.abs())) * 10.0;
    let steps = (20_000f64.powf(1.0 / d as f64).floor() as usize).max(3);
    let mut best = f64::NEG_INFINITY;
    let mut x = vec![0.0; d];
    let total = steps.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        for xi in x.iter_mut() {
            *xi = -reach + 2.0 * reach * (c % steps) as f64 / (steps - 1) as f64;
            c /= steps;
        }
        best = best.max(-lp.max_violation(&x));
    }
    if best > band {
        let rows = DMatrix::from_fn(lp.n(), d, |r, c| lp.row(r)[c]);
        let z = DVector::from_column_slice(lp.z());
        let proj = rows.clone().svd(true, true).solve(&(rows.clone() * &z), 1e-12).ok();
        match proj {
            Some(p) if (&p - &z).norm() > 1e-6 => OracleStatus::Unbounded,
            _ => OracleStatus::Ambiguous("rank-deficient feasible program".into()),
        }
    } else {
        OracleStatus::Ambiguous("rank-deficient program without a certified feasible point".into())
    }
}

/// Cofactor null vector of a `k x (k + 1)` matrix.
fn null_vector(m: &DMatrix<f64>) -> DVector<f64> {
    let k = m.nrows();
    DVector::from_fn(k + 1, |j, _| {
        let minor = m.clone().remove_column(j);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor.determinant()
    })
}

/// Number of facets of `Conv(points)` (two-sided supporting hyperplanes)
/// that meet the plane in a segment of positive length.
pub fn section_edge_count_bruteforce(points: &PointSet, plane: &SweepPlane, tol: &Tolerance) -> Result<usize, OracleError> {
    let (n, d) = (points.len(), points.dim());
    check_cap(n, d, DEFAULT_SUBSET_CAP)?;
    let perp = plane.complement();
    let proj: Vec<Vec<f64>> = points.points().map(|p| perp.iter().map(|w| dot(w, p)).collect()).collect();
    let spread = points.max_norm().max(1.0);
    let mut count = 0;
    for_each_subset(n, d, |idx| {
        // hyperplane <normal, x> = offset through the subset
        let m = DMatrix::from_fn(d, d + 1, |r, c| if c < d { points.point(idx[r])[c] } else { -1.0 });
        let nv = null_vector(&m);
        let normal: Vec<f64> = nv.iter().take(d).copied().collect();
        let nn = norm(&normal);
        if !(nn > 1e-12 * spread.powi(d as i32 - 1)) {
            return;
        }
        let offset = nv[d] / nn;
        let normal: Vec<f64> = normal.iter().map(|v| v / nn).collect();
        let slack = tol.eps_feas * spread;
        let (mut lo, mut hi) = (false, false);
        for (k, p) in points.points().enumerate() {
            if idx.contains(&k) {
                continue;
            }
            let s = dot(&normal, p) - offset;
            lo |= s < -slack;
            hi |= s > slack;
        }
        if lo && hi {
            return;
        }
        if segment_length(points, idx, &proj, d) > 10.0 * tol.eps_feas * spread {
            count += 1;
        }
    });
    Ok(count)
}

/// Length of `conv(a_I)` intersected with the plane: convex weights `mu`
/// with `sum mu_i p_i = 0` form a segment `mu0 + t kappa`, clipped to
/// `mu >= 0`.
fn segment_length(points: &PointSet, idx: &[usize], proj: &[Vec<f64>], d: usize) -> f64 {
    let m = d - 2;
    let sys = DMatrix::from_fn(m + 1, d, |r, c| if r < m { proj[idx[c]][r] } else { 1.0 });
    let mut rhs = DVector::zeros(m + 1);
    rhs[m] = 1.0;
    let kappa = null_vector(&sys);
    let kn = kappa.norm();
    if !(kn > 1e-14) {
        return 0.0;
    }
    let kappa = kappa / kn;
    let Ok(mu0) = sys.clone().svd(true, true).solve(&rhs, 1e-13) else { return 0.0 };
    if (&sys * &mu0 - &rhs).norm() > 1e-8 {
        return 0.0;
    }
    // mu0 + t kappa >= 0
    let (mut tlo, mut thi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..d {
        let (a, k) = (mu0[i], kappa[i]);
        if k.abs() < 1e-15 {
            if a < -1e-12 {
                return 0.0;
            }
            continue;
        }
        let t = -a / k;
        if k > 0.0 {
            tlo = tlo.max(t);
        } else {
            thi = thi.min(t);
        }
    }
    if !(thi > tlo) || !thi.is_finite() || !tlo.is_finite() {
        return 0.0;
    }
    let dir: Vec<f64> = (0..d)
        .map(|c| idx.iter().enumerate().map(|(r, &i)| kappa[r] * points.point(i)[c]).sum())
        .collect();
    (thi - tlo) * norm(&dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> PointSet {
        PointSet::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.9, 0.9]]).unwrap()
    }

    #[test]
    fn subsets_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_subset(12, 4, |_| count += 1);
        assert_eq!(count as u64, binomial(12, 4));
        let mut single = 0;
        for_each_subset(3, 3, |_| single += 1);
        assert_eq!(single, 1);
    }

    #[test]
    fn enumerates_planar_facets() {
        let tol = Tolerance::default();
        let basis = PointSet::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let f: Vec<_> = enumerate_facets(&basis, &tol).unwrap().into_iter().map(|f| f.indices).collect();
        assert_eq!(f, vec![vec![0, 1]]);
        let f: Vec<_> = enumerate_facets(&tri(), &tol).unwrap().into_iter().map(|f| f.indices).collect();
        assert_eq!(f, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn facet_lookup() {
        let tol = Tolerance::default();
        match facet_of(&tri(), &[1.0, 0.1], &tol).unwrap() {
            FacetLookup::Facet(f) => assert_eq!(f.indices, vec![0, 2]),
            other => panic!("{other:?}"),
        }
        let orthant = PointSet::from_rows(&[[1.0, 0.5], [0.5, 1.0], [2.0, 2.0]]).unwrap();
        assert_eq!(facet_of(&orthant, &[-1.0, 0.0], &tol).unwrap(), FacetLookup::Empty);
        // ray through a vertex is claimed by both adjacent facets
        assert!(matches!(facet_of(&tri(), &[0.9, 0.9], &tol).unwrap(), FacetLookup::Ambiguous(_)));
    }

    #[test]
    fn classifies_reference_programs() {
        let tol = Tolerance::default();
        let lp = GeneralLP::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]], vec![1.0; 3], vec![1.0, 1.0]).unwrap();
        match classify_lp(&lp, &tol).unwrap().status {
            OracleStatus::Optimal { basis, x_opt, value } => {
                assert_eq!(basis, vec![0, 1]);
                assert!((x_opt[0] - 1.0).abs() < 1e-12 && (x_opt[1] - 1.0).abs() < 1e-12);
                assert!((value - 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let lp = GeneralLP::from_rows(&[vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]], vec![1.0; 3], vec![1.0, 0.0]).unwrap();
        assert_eq!(classify_lp(&lp, &tol).unwrap().status, OracleStatus::Unbounded);
        let lp = GeneralLP::from_rows(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]], vec![-3.0, -3.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(classify_lp(&lp, &tol).unwrap().status, OracleStatus::Infeasible);
    }

    #[test]
    fn square_section_has_four_edges() {
        let tol = Tolerance::default();
        let sq = PointSet::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).unwrap();
        let plane = SweepPlane::new(vec![1.0, 0.0], vec![0.0, 1.0], &tol).unwrap();
        assert_eq!(section_edge_count_bruteforce(&sq, &plane, &tol).unwrap(), 4);
    }

    #[test]
    fn simplex_sections_cut_three_or_four_facets() {
        // regular tetrahedron centered at the origin
        let tol = Tolerance::default();
        let tet = PointSet::from_rows(&[[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]).unwrap();
        // a plane isolating one vertex from the other three cuts 3 facets
        let s = 1.0 / 3f64.sqrt();
        let n = [s, s, s];
        let b1 = {
            let v = [1.0, -1.0, 0.0];
            let l = norm(&v);
            v.map(|x| x / l).to_vec()
        };
        let b2 = vec![n[1] * b1[2] - n[2] * b1[1], n[2] * b1[0] - n[0] * b1[2], n[0] * b1[1] - n[1] * b1[0]];
        let plane = SweepPlane::new(b1, b2, &tol).unwrap();
        assert_eq!(section_edge_count_bruteforce(&tet, &plane, &tol).unwrap(), 3);
        // a plane splitting the vertices two and two cuts all 4 facets
        let plane = SweepPlane::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], &tol).unwrap();
        assert_eq!(section_edge_count_bruteforce(&tet, &plane, &tol).unwrap(), 4);
    }

    #[test]
    fn refuses_oversized_enumeration() {
        assert!(check_cap(100, 10, DEFAULT_SUBSET_CAP).is_err());
        assert!(check_cap(12, 4, DEFAULT_SUBSET_CAP).is_ok());
    }
}
