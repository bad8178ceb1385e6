//! General programs `max <z, x>` s.t. `A x <= b` via interpolation.
//!
//! The program is lifted to a unit program in dimension `d + 1` with
//! constraint points `(a_i, 1 - b_i)`, the top point `(0, 1)` and a vertex at
//! infinity in direction `(0, -1)`. Phase-I solves the unit program
//! `A x <= 1`; its facet plus the infinite vertex is the limit facet for
//! objectives `(eps z, -1)`. Phase-II rotates the objective from `(0, -1)`
//! through `(z, 0)` to `(0, 1)`; the program is feasible exactly when the
//! limit facet there contains the top point.

use crate::error::GeometryError;
use crate::geometry::{FacetIndexSet, PointSet};
use crate::linalg::{dot, norm, Lu};
use crate::phase1::{solve_unit, Phase1Error, SolverOptions, UnitStatus};
use crate::shadow_walk::{walk, SweepPlane, WalkError, WalkStatus};
use rand::RngCore;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid program: {0}")]
    Invalid(String),
    #[error(transparent)]
    Phase1(#[from] Phase1Error),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("numeric failure: {0}")]
    Numeric(&'static str),
}

/// `max <z, x>` subject to `A x <= b`, `A` stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralLP {
    d: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    z: Vec<f64>,
}

impl GeneralLP {
    pub fn new(d: usize, a: Vec<f64>, b: Vec<f64>, z: Vec<f64>) -> Result<Self, SolveError> {
        if d < 2 {
            return Err(SolveError::Invalid(format!("dimension {d} < 2")));
        }
        if a.len() != b.len() * d {
            return Err(SolveError::Invalid(format!("A has {} entries, expected {} x {d}", a.len(), b.len())));
        }
        if b.len() <= d {
            return Err(SolveError::Invalid(format!("need n > d, got n = {} and d = {d}", b.len())));
        }
        if z.len() != d {
            return Err(SolveError::Invalid(format!("objective has length {}, expected {d}", z.len())));
        }
        if a.iter().chain(&b).chain(&z).any(|v| !v.is_finite()) {
            return Err(SolveError::Invalid("non-finite entry".into()));
        }
        if norm(&z) == 0.0 {
            return Err(SolveError::Invalid("objective is zero".into()));
        }
        Ok(GeneralLP { d, a, b, z })
    }

    pub fn from_rows(rows: &[Vec<f64>], b: Vec<f64>, z: Vec<f64>) -> Result<Self, SolveError> {
        let d = z.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(SolveError::Invalid("ragged constraint rows".into()));
        }
        Self::new(d, rows.concat(), b, z)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.a.chunks_exact(self.d)
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn with_objective(&self, z: Vec<f64>) -> Result<Self, SolveError> {
        Self::new(self.d, self.a.clone(), self.b.clone(), z)
    }

    /// Multiply row `i` and `b_i` by `factors[i] > 0`.
    pub fn scale_rows(&self, factors: &[f64]) -> Self {
        let mut out = self.clone();
        for (i, &t) in factors.iter().enumerate() {
            out.a[i * self.d..(i + 1) * self.d].iter_mut().for_each(|v| *v *= t);
            out.b[i] *= t;
        }
        out
    }

    /// Constraint rows as points of the unit program `A x <= 1`.
    pub fn unit_points(&self) -> PointSet {
        PointSet::new(self.d, self.a.clone()).expect("validated on construction")
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        dot(&self.z, x)
    }

    /// `max_i (<a_i, x> - b_i)`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows().zip(&self.b).map(|(a, b)| dot(a, x) - b).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The lifted unit program in dimension `d + 1`.
#[derive(Clone, Debug)]
pub struct IntLPLift {
    pub points: PointSet,
    pub top_index: usize,
    pub infinity_index: usize,
    /// `(0, -1)`: the infinite vertex direction and the initial objective.
    pub z0_bar: Vec<f64>,
    /// `(0, 1)`.
    pub z_bar: Vec<f64>,
    /// `(z, 0)`.
    pub u_bar: Vec<f64>,
}

pub fn lift(lp: &GeneralLP) -> IntLPLift {
    lift_with_objective(lp, lp.z())
}

fn lift_with_objective(lp: &GeneralLP, z: &[f64]) -> IntLPLift {
    let d = lp.d();
    let n = lp.n();
    let mut coords = Vec::with_capacity((n + 1) * (d + 1));
    for (a, b) in lp.rows().zip(lp.b()) {
        coords.extend_from_slice(a);
        coords.push(1.0 - b);
    }
    coords.extend(std::iter::repeat_n(0.0, d));
    coords.push(1.0);
    let mut z0_bar = vec![0.0; d + 1];
    z0_bar[d] = -1.0;
    let mut z_bar = vec![0.0; d + 1];
    z_bar[d] = 1.0;
    let mut u_bar = z.to_vec();
    u_bar.push(0.0);
    let points = PointSet::new(d + 1, coords)
        .and_then(|p| p.with_infinite(z0_bar.clone()))
        .expect("lift of a validated program");
    IntLPLift { points, top_index: n, infinity_index: n + 1, z0_bar, z_bar, u_bar }
}

/// Phase-I facet plus the vertex at infinity: the facet pierced by
/// `(eps z, -1)` for small `eps > 0`.
pub fn initial_limit_facet(lift: &IntLPLift, unit_solution: &[usize], tol: &crate::geometry::Tolerance) -> Result<FacetIndexSet, GeometryError> {
    let mut idx = unit_solution.to_vec();
    idx.push(lift.infinity_index);
    FacetIndexSet::new(&lift.points, &idx, tol)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FinalClass {
    Optimal(Vec<usize>),
    Infeasible,
}

/// Feasible iff the interpolation variable ends at `t = 1`, i.e. the top
/// point is in the final facet; the rest of the facet is the basis.
pub fn classify_final(final_facet: &FacetIndexSet, lift: &IntLPLift) -> FinalClass {
    if final_facet.contains(lift.top_index) {
        FinalClass::Optimal(final_facet.indices.iter().copied().filter(|&i| i != lift.top_index).collect())
    } else {
        FinalClass::Infeasible
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

impl LpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Unbounded => "unbounded",
            LpStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LPResult {
    pub status: LpStatus,
    pub basis: Option<Vec<usize>>,
    pub x_opt: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub pivots_phase1: usize,
    pub pivots_phase2: usize,
    pub phase1_iterations: usize,
}

struct PhaseTwo {
    class: FinalClass,
    pivots: usize,
    unbounded: bool,
}

fn phase_two(lp: &GeneralLP, objective: &[f64], unit_facet: &[usize], opts: &SolverOptions) -> Result<PhaseTwo, SolveError> {
    let lifted = lift_with_objective(lp, objective);
    let start = initial_limit_facet(&lifted, unit_facet, opts.tol())?;
    let nu = norm(&lifted.u_bar);
    let b2: Vec<f64> = lifted.u_bar.iter().map(|v| v / nu).collect();
    let plane = SweepPlane::new(lifted.z0_bar.clone(), b2, opts.tol())?;
    let out = walk(&lifted.points, &plane, &start, 0.0, PI, &opts.walk)?;
    Ok(match out.status {
        WalkStatus::OptimalFacet(f) => PhaseTwo { class: classify_final(&f, &lifted), pivots: out.pivots, unbounded: false },
        _ => PhaseTwo { class: FinalClass::Infeasible, pivots: out.pivots, unbounded: true },
    })
}

/// Some direction strictly inside the cone of the rows: the sum of the
/// normalized rows, or the first nonzero row if that sum vanishes.
fn interior_cone_direction(lp: &GeneralLP) -> Vec<f64> {
    let mut s = vec![0.0; lp.d()];
    for r in lp.rows() {
        let nr = norm(r);
        if nr > 0.0 {
            s.iter_mut().zip(r).for_each(|(a, b)| *a += b / nr);
        }
    }
    if norm(&s) > 1e-8 * lp.n() as f64 {
        return s;
    }
    lp.rows().find(|r| norm(r) > 0.0).map(<[f64]>::to_vec).unwrap_or(s)
}

/// Two-phase solve. When the unit program is unbounded the program is
/// either unbounded or infeasible; feasibility is then settled by a second
/// pass with an objective inside the cone of the rows, for which the unit
/// program is bounded.
pub fn solve_lp<R: RngCore + ?Sized>(lp: &GeneralLP, rng: &mut R, opts: &SolverOptions) -> Result<LPResult, SolveError> {
    let points = lp.unit_points();
    let unit = solve_unit(&points, lp.z(), rng, opts)?;
    let mut res = LPResult {
        status: LpStatus::Infeasible,
        basis: None,
        x_opt: None,
        objective: None,
        pivots_phase1: unit.pivots_total,
        pivots_phase2: 0,
        phase1_iterations: unit.iterations,
    };
    let facet = match unit.status {
        UnitStatus::OptimalFacet(f) => f,
        UnitStatus::Unbounded => {
            let probe = interior_cone_direction(lp);
            let unit2 = solve_unit(&points, &probe, rng, opts)?;
            res.pivots_phase1 += unit2.pivots_total;
            res.phase1_iterations += unit2.iterations;
            let UnitStatus::OptimalFacet(f2) = unit2.status else {
                return Err(SolveError::Numeric("unit program unbounded for an objective inside the row cone"));
            };
            let two = phase_two(lp, &probe, &f2.indices, opts)?;
            res.pivots_phase2 = two.pivots;
            res.status = match two.class {
                FinalClass::Optimal(_) => LpStatus::Unbounded,
                FinalClass::Infeasible if two.unbounded => LpStatus::Unbounded,
                FinalClass::Infeasible => LpStatus::Infeasible,
            };
            return Ok(res);
        }
    };
    let two = phase_two(lp, lp.z(), &facet.indices, opts)?;
    res.pivots_phase2 = two.pivots;
    if two.unbounded {
        res.status = LpStatus::Unbounded;
        return Ok(res);
    }
    match two.class {
        FinalClass::Infeasible => res.status = LpStatus::Infeasible,
        FinalClass::Optimal(basis) => {
            let x = recover_vertex(lp, &basis, opts.tol().eps_singular)?;
            res.objective = Some(lp.objective_value(&x));
            res.x_opt = Some(x);
            res.basis = Some(basis);
            res.status = LpStatus::Optimal;
        }
    }
    Ok(res)
}

/// Solve `<a_i, x> = b_i` for `i` in `basis`.
pub fn recover_vertex(lp: &GeneralLP, basis: &[usize], eps_singular: f64) -> Result<Vec<f64>, SolveError> {
    if basis.len() != lp.d() {
        return Err(SolveError::Numeric("basis has the wrong size"));
    }
    let cols: Vec<&[f64]> = basis.iter().map(|&i| lp.row(i)).collect();
    let lu = Lu::from_columns(&cols, eps_singular).map_err(|_| SolveError::Numeric("singular basis"))?;
    let rhs: Vec<f64> = basis.iter().map(|&i| lp.b()[i]).collect();
    Ok(lu.solve_transpose(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{all_below, Tolerance};
    use crate::randgen::{stream, Purpose};

    fn lp2() -> GeneralLP {
        GeneralLP::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]], vec![1.0, 1.0, 1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn lift_layout() {
        let lp = GeneralLP::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]], vec![1.0, -2.0, 1.0], vec![1.0, 1.0]).unwrap();
        let l = lift(&lp);
        assert_eq!(l.points.dim(), 3);
        assert_eq!(l.points.point(0), &[1.0, 0.0, 0.0]);
        assert_eq!(l.points.point(1), &[0.0, 1.0, 3.0]);
        assert_eq!(l.points.point(l.top_index), &[0.0, 0.0, 1.0]);
        assert_eq!(l.points.column(l.infinity_index), &[0.0, 0.0, -1.0]);
        assert_eq!(l.z0_bar, vec![0.0, 0.0, -1.0]);
        assert_eq!(l.u_bar, vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn initial_facet_is_valid_limit_facet() {
        let tol = Tolerance::default();
        let lp = lp2();
        let l = lift(&lp);
        // unit program facet for z = (1, 1) is rows {0, 1}
        let f = initial_limit_facet(&l, &[0, 1], &tol).unwrap();
        assert_eq!(f.indices, vec![0, 1, l.infinity_index]);
        assert!(f.contains_infinite);
        assert!(dot(&f.normal, &l.z0_bar).abs() < 1e-15);
        assert!(all_below(&l.points, &f.normal, &tol));
        let eps = 1e-4;
        let q: Vec<f64> = l.z0_bar.iter().zip(&l.u_bar).map(|(a, b)| a + eps * b).collect();
        let lam = crate::geometry::cone_coefficients(&l.points, &f.indices, &q, &tol).unwrap();
        assert!(tol.in_cone(&lam));
    }

    #[test]
    fn classify_by_top_membership() {
        let l = lift(&lp2());
        let top = l.top_index;
        let with_top = FacetIndexSet { indices: vec![0, 2, top], normal: vec![], contains_infinite: false };
        assert_eq!(classify_final(&with_top, &l), FinalClass::Optimal(vec![0, 2]));
        let without = FacetIndexSet { indices: vec![0, 1, 2], normal: vec![], contains_infinite: false };
        assert_eq!(classify_final(&without, &l), FinalClass::Infeasible);
    }

    #[test]
    fn solves_small_optimal_program() {
        let res = solve_lp(&lp2(), &mut stream(1, Purpose::Phase1, 0), &SolverOptions::default()).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert_eq!(res.basis, Some(vec![0, 1]));
        let x = res.x_opt.unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        assert!((res.objective.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn detects_unbounded_program() {
        let lp = GeneralLP::from_rows(&[vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]], vec![1.0; 3], vec![1.0, 0.0]).unwrap();
        let res = solve_lp(&lp, &mut stream(2, Purpose::Phase1, 0), &SolverOptions::default()).unwrap();
        assert_eq!(res.status, LpStatus::Unbounded);
    }

    #[test]
    fn detects_infeasible_program() {
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        for z in [vec![1.0, 0.0], vec![0.3, -1.0], vec![-1.0, 2.0]] {
            let lp = GeneralLP::from_rows(&rows, vec![-3.0, -3.0, 1.0, 1.0], z).unwrap();
            let res = solve_lp(&lp, &mut stream(3, Purpose::Phase1, 0), &SolverOptions::default()).unwrap();
            assert_eq!(res.status, LpStatus::Infeasible);
        }
    }

    #[test]
    fn infeasible_with_unbounded_unit_program() {
        // z leaves the row cone, yet x1 <= -3 and -x1 <= -3 clash
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, -1.0]];
        let lp = GeneralLP::from_rows(&rows, vec![-3.0, -3.0, 1.0], vec![0.0, 1.0]).unwrap();
        let res = solve_lp(&lp, &mut stream(4, Purpose::Phase1, 0), &SolverOptions::default()).unwrap();
        assert_eq!(res.status, LpStatus::Infeasible);
    }

    #[test]
    fn rejects_malformed_programs() {
        assert!(GeneralLP::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(GeneralLP::from_rows(&vec![vec![1.0, 0.0]; 3], vec![1.0; 3], vec![0.0, 0.0]).is_err());
        assert!(GeneralLP::new(2, vec![1.0; 5], vec![1.0; 3], vec![1.0, 0.0]).is_err());
    }
}
