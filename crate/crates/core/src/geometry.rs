//! Polar geometry primitives.
//!
//! A [`PointSet`] holds the constraint points `a_1..a_n` of a unit program and,
//! optionally, one vertex at infinity given by a direction `u`. The infinite
//! vertex always takes index `n` (one past the last finite point). A facet
//! `I` of `P = Conv(0, a_i) (+ ray u)` has normal `h` with `<h, a_i> = 1` on
//! its finite members and `<h, u> = 0` when it contains the infinite vertex.

use crate::error::{GeometryError, Singular};
use crate::linalg::{dot, norm, norm_inf, Lu};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Scaled-pivot threshold for basis factorizations.
    pub eps_singular: f64,
    /// Slack in below-hyperplane and cone-membership tests.
    pub eps_feas: f64,
    /// Angular comparisons and orthonormality checks.
    pub eps_angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_singular: 1e-10, eps_feas: 1e-9, eps_angle: 1e-12 }
    }
}

impl Tolerance {
    pub fn validate(&self, dim: usize) -> Result<(), GeometryError> {
        if !(self.eps_singular > 0.0 && self.eps_feas > 0.0 && self.eps_angle > 0.0) {
            return Err(GeometryError::InvalidTolerance("all tolerances must be strictly positive"));
        }
        if self.eps_feas < f64::EPSILON * dim as f64 {
            return Err(GeometryError::InvalidTolerance("eps_feas below machine precision x dimension"));
        }
        Ok(())
    }

    /// Slack used when two computed crossing angles are meant to coincide
    /// (limit facets at arc endpoints, immediate exits after a pivot).
    pub fn angle_slack(&self) -> f64 {
        1e3 * self.eps_angle
    }

    /// Cone membership for coefficients returned by [`cone_coefficients`].
    pub fn in_cone(&self, coeffs: &[f64]) -> bool {
        let floor = -self.eps_feas * norm_inf(coeffs).max(1.0);
        coeffs.iter().all(|&c| c >= floor)
    }
}

/// Constraint points of a unit program, optionally with one vertex at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    infinite: Option<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, GeometryError> {
        if dim < 2 {
            return Err(GeometryError::DimensionMismatch { expected: 2, got: dim });
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, got: coords.len() % dim });
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(PointSet { dim, coords, infinite: None })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, GeometryError> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(GeometryError::DimensionMismatch { expected: dim, got: r.len() });
            }
            coords.extend_from_slice(r);
        }
        Self::new(dim, coords)
    }

    pub fn with_infinite(mut self, direction: Vec<f64>) -> Result<Self, GeometryError> {
        if direction.len() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, got: direction.len() });
        }
        if norm(&direction) == 0.0 {
            return Err(GeometryError::ZeroVector);
        }
        self.infinite = Some(direction);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of finite points.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Finite points plus the infinite vertex, if any.
    pub fn total(&self) -> usize {
        self.len() + usize::from(self.infinite.is_some())
    }

    pub fn infinite_index(&self) -> Option<usize> {
        self.infinite.as_ref().map(|_| self.len())
    }

    pub fn infinite_direction(&self) -> Option<&[f64]> {
        self.infinite.as_deref()
    }

    pub fn is_infinite(&self, i: usize) -> bool {
        self.infinite.is_some() && i == self.len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// The point itself, or the direction of the infinite vertex.
    pub fn column(&self, i: usize) -> &[f64] {
        if self.is_infinite(i) {
            self.infinite.as_deref().unwrap()
        } else {
            self.point(i)
        }
    }

    /// Right-hand side of the normal equation for index `i`: 1 for finite
    /// points, 0 for the infinite vertex.
    pub fn rhs(&self, i: usize) -> f64 {
        if self.is_infinite(i) {
            0.0
        } else {
            1.0
        }
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn push(&mut self, p: &[f64]) {
        assert_eq!(p.len(), self.dim);
        assert!(self.infinite.is_none(), "finite points must precede the infinite vertex");
        self.coords.extend_from_slice(p);
    }

    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    /// Same points with `shift` subtracted from every finite point.
    pub fn translated(&self, shift: &[f64]) -> PointSet {
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(shift).map(|(a, b)| a - b))
            .collect();
        PointSet { dim: self.dim, coords, infinite: self.infinite.clone() }
    }

    pub(crate) fn check_index_set(&self, indices: &[usize]) -> Result<(), GeometryError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.dim || indices.len() != self.dim || sorted.iter().any(|&i| i >= self.total()) {
            return Err(GeometryError::BadIndexSet { expected: self.dim, got: indices.to_vec() });
        }
        Ok(())
    }
}

/// A `d`-set of constraint indices together with its supporting normal.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FacetIndexSet {
    pub indices: Vec<usize>,
    pub normal: Vec<f64>,
    pub contains_infinite: bool,
}

impl FacetIndexSet {
    pub fn new(points: &PointSet, indices: &[usize], tol: &Tolerance) -> Result<Self, GeometryError> {
        let normal = facet_normal(points, indices, tol)?;
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        Ok(FacetIndexSet {
            contains_infinite: sorted.iter().any(|&i| points.is_infinite(i)),
            indices: sorted,
            normal,
        })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Number of shared indices with `other`.
    pub fn overlap(&self, other: &FacetIndexSet) -> usize {
        self.indices.iter().filter(|i| other.contains(**i)).count()
    }
}

impl PartialEq for FacetIndexSet {
    fn eq(&self, other: &Self) -> bool {
        self.indices == other.indices
    }
}

impl Eq for FacetIndexSet {}

/// A factored facet basis: columns in positional order, ready for cone
/// coefficients, normals and ridge directions.
#[derive(Clone, Debug)]
pub struct FacetFrame {
    order: Vec<usize>,
    lu: Lu,
    normal: Vec<f64>,
}

impl FacetFrame {
    pub fn new(points: &PointSet, order: Vec<usize>, tol: &Tolerance) -> Result<Self, GeometryError> {
        points.check_index_set(&order)?;
        let cols: Vec<&[f64]> = order.iter().map(|&i| points.column(i)).collect();
        let lu = Lu::from_columns(&cols, tol.eps_singular)?;
        let rhs: Vec<f64> = order.iter().map(|&i| points.rhs(i)).collect();
        let normal = lu.solve_transpose(&rhs);
        if normal.iter().any(|v| !v.is_finite()) {
            return Err(Singular.into());
        }
        Ok(FacetFrame { order, lu, normal })
    }

    /// Indices in basis (column) order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    /// `lambda` with `q = sum_k lambda_k * column(order[k])`.
    pub fn coefficients(&self, q: &[f64]) -> Vec<f64> {
        self.lu.solve(q)
    }

    /// Direction `g` with `<g, c_i> = 0` on the ridge and `<g, c_leaving> = -1`,
    /// where `leaving = order[pos]`.
    pub fn ridge_direction(&self, pos: usize) -> Vec<f64> {
        let mut rhs = vec![0.0; self.order.len()];
        rhs[pos] = -1.0;
        self.lu.solve_transpose(&rhs)
    }

    pub fn position(&self, index: usize) -> Option<usize> {
        self.order.iter().position(|&i| i == index)
    }

    pub fn to_index_set(&self, points: &PointSet) -> FacetIndexSet {
        let mut indices = self.order.clone();
        indices.sort_unstable();
        FacetIndexSet {
            contains_infinite: indices.iter().any(|&i| points.is_infinite(i)),
            indices,
            normal: self.normal.clone(),
        }
    }
}

/// Normal `h` of the affine hyperplane through the points of `indices`
/// (`<h, u> = 0` for the infinite vertex).
pub fn facet_normal(points: &PointSet, indices: &[usize], tol: &Tolerance) -> Result<Vec<f64>, GeometryError> {
    Ok(FacetFrame::new(points, indices.to_vec(), tol)?.normal)
}

/// Whether every point (and the infinite direction) lies below `<h, x> = 1`.
pub fn all_below(points: &PointSet, h: &[f64], tol: &Tolerance) -> bool {
    points.points().all(|p| dot(h, p) <= 1.0 + tol.eps_feas)
        && points.infinite_direction().is_none_or(|u| dot(h, u) <= tol.eps_feas)
}

/// Coefficients `lambda` (in the order of `indices`) with `z = sum lambda_i a_i`.
pub fn cone_coefficients(
    points: &PointSet,
    indices: &[usize],
    z: &[f64],
    tol: &Tolerance,
) -> Result<Vec<f64>, GeometryError> {
    if z.len() != points.dim() {
        return Err(GeometryError::DimensionMismatch { expected: points.dim(), got: z.len() });
    }
    Ok(FacetFrame::new(points, indices.to_vec(), tol)?.coefficients(z))
}

/// `cos^-1(|<x,y>| / (|x| |y|))`, in `[0, pi/2]`.
pub fn angular_distance(x: &[f64], y: &[f64]) -> Result<f64, GeometryError> {
    if x.len() != y.len() {
        return Err(GeometryError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    let (nx, ny) = (norm(x), norm(y));
    if nx == 0.0 || ny == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    let c = (dot(x, y).abs() / (nx * ny)).clamp(0.0, 1.0);
    Ok(c.acos())
}

pub const VIEWPOINT_RADIUS: f64 = 4.0;

/// The three fixed viewpoints: an equilateral triangle of circumradius 4 at
/// angles 90, 210 and 330 degrees.
pub fn viewpoints() -> [[f64; 2]; 3] {
    let at = |deg: f64| {
        let t = deg * PI / 180.0;
        [VIEWPOINT_RADIUS * t.cos(), VIEWPOINT_RADIUS * t.sin()]
    };
    [at(90.0), at(210.0), at(330.0)]
}

/// Line through `p` and `q` as `(n, c)` with unit `n` and `<n, x> = c`.
fn line_through(p: [f64; 2], q: [f64; 2]) -> Option<([f64; 2], f64)> {
    let dir = [q[0] - p[0], q[1] - p[1]];
    let len = dir[0].hypot(dir[1]);
    if len == 0.0 {
        return None;
    }
    let n = [-dir[1] / len, dir[0] / len];
    Some((n, n[0] * p[0] + n[1] * p[1]))
}

/// Pick a viewpoint (index into [`viewpoints`]) from which the hull edge
/// `(k, m)` of `polygon` stays an edge and is at distance at least 1.
pub fn viewpoint_for_edge(polygon: &[[f64; 2]], edge: (usize, usize)) -> Result<usize, GeometryError> {
    let (k, m) = edge;
    if k >= polygon.len() || m >= polygon.len() || k == m {
        return Err(GeometryError::NotAnEdge(k, m));
    }
    let (n, c) = line_through(polygon[k], polygon[m]).ok_or(GeometryError::NotAnEdge(k, m))?;
    let side = |x: [f64; 2]| n[0] * x[0] + n[1] * x[1] - c;
    let eps = 1e-12;
    let (mut below, mut above) = (false, false);
    for x in polygon {
        let s = side(*x);
        below |= s < -eps;
        above |= s > eps;
    }
    if below == above {
        // Either both sides are occupied (not a hull edge) or the polygon is flat.
        return Err(GeometryError::NotAnEdge(k, m));
    }
    let inward = if below { -1.0 } else { 1.0 };
    viewpoints()
        .iter()
        .position(|&o| {
            side(o) * inward >= 1.0
        })
        .ok_or(GeometryError::NoViewpoint(k, m))
}

/// Vertices of the convex hull in counterclockwise order (indices into
/// `pts`), collinear points dropped.
pub fn convex_hull_2d(pts: &[[f64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]).then(pts[a][1].total_cmp(&pts[b][1])));
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in [idx.clone(), idx.iter().rev().copied().collect()] {
        let base = hull.len();
        for &p in &pass {
            while hull.len() >= base + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}
