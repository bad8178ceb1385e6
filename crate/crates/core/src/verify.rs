//! The verification battery: oracle agreement, phase-I statistics, pivot
//! growth, section counts, planar hull growth, the two planar lemmas, trace
//! audits and reproducibility. Every suite is seeded and returns a report
//! instead of panicking.

use crate::experiment::{
    loglog_slope, run_pivots, run_sections, section_plane, section_points, strip_timing, trial_spec, write_csv, Cell,
    CenterModel, ExperimentConfig, PivotRow,
};
use crate::geometry::{angular_distance, convex_hull_2d, viewpoint_for_edge, viewpoints, PointSet, Tolerance};
use crate::interpolate::{solve_lp, LpStatus, SolveError};
use crate::linalg::dot;
use crate::oracle::{classify_lp, facet_of, section_edge_count_bruteforce, FacetLookup, OracleStatus};
use crate::phase1::{add_constraints, numb_halfspace_witness, solve_unit, Phase1Error, Phase1Params, SolverOptions, UnitStatus};
use crate::randgen::{derive_seed, haar_rotation, m0, open_unit, sample_instance, stream, unit_vector, Purpose};
use crate::sections::{section_edges, SectionError};
use crate::shadow_walk::{RatioRule, SweepPlane, WalkError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sizes of every suite. The defaults are the acceptance sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub oracle_instances: usize,
    pub phase1_instances: usize,
    pub phase1_draws_per_instance: usize,
    pub pivot_ns: Vec<usize>,
    pub pivot_trials: usize,
    pub section_instances: usize,
    pub hull_ns: Vec<usize>,
    pub hull_trials: usize,
    pub angle_configs: usize,
    pub polygons: usize,
    /// Pivot rule for every walk; only changed to test that the suites
    /// catch a broken rule.
    #[serde(skip)]
    pub rule: RatioRule,
    #[serde(skip)]
    pub iteration_cap: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 20_240_601,
            oracle_instances: 1000,
            phase1_instances: 40,
            phase1_draws_per_instance: 50,
            pivot_ns: vec![16, 64, 256, 1024, 4096],
            pivot_trials: 100,
            section_instances: 200,
            hull_ns: vec![100, 10_000],
            hull_trials: 50,
            angle_configs: 10_000,
            polygons: 1000,
            rule: RatioRule::Minimal,
            iteration_cap: None,
        }
    }
}

impl VerifyConfig {
    pub fn solver_options(&self) -> SolverOptions {
        let mut opts = SolverOptions::default();
        opts.walk.audit = true;
        opts.walk.rule = self.rule;
        opts.walk.iteration_cap = self.iteration_cap;
        opts
    }

    fn tol(&self) -> Tolerance {
        Tolerance::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Cases examined.
    pub checked: usize,
    /// Cases that violated the criterion.
    pub failures: usize,
    /// Cases excluded by design (oracle ambiguity, unbounded programs).
    pub skipped: usize,
    pub metric: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl SuiteReport {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("[{verdict}] {}. {}: {}", self.id, self.name, self.detail)
    }
}

/// Outcome of trace audits run inside other suites.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditTally {
    pub runs: usize,
    pub failures: Vec<String>,
}

impl AuditTally {
    fn record(&mut self, failure: Option<String>) {
        self.runs += 1;
        if let Some(f) = failure {
            self.failures.push(f);
        }
    }

    fn merge(&mut self, other: AuditTally) {
        self.runs += other.runs;
        self.failures.extend(other.failures);
    }
}

fn audit_of_walk(e: &WalkError) -> Option<String> {
    match e {
        WalkError::AuditFailed(m) => Some(m.clone()),
        _ => None,
    }
}

fn audit_of_phase1(e: &Phase1Error) -> Option<String> {
    match e {
        Phase1Error::Walk(w) => audit_of_walk(w),
        _ => None,
    }
}

fn audit_of_solve(e: &SolveError) -> Option<String> {
    match e {
        SolveError::Walk(w) => audit_of_walk(w),
        SolveError::Phase1(p) => audit_of_phase1(p),
        _ => None,
    }
}

fn audit_of_section(e: &SectionError) -> Option<String> {
    match e {
        SectionError::Walk(w) => audit_of_walk(w),
        SectionError::Phase1(p) => audit_of_phase1(p),
        _ => None,
    }
}

fn audit_of_row(status: &str) -> Option<String> {
    status.contains("trace audit failed").then(|| status.to_string())
}

/// Smoothed program number `k` of the oracle suite: `d` cycles through
/// 2..=4, `n` through 5..=12 and sigma through 0.1 and 0.5.
pub fn oracle_instance(seed: u64, k: usize) -> crate::interpolate::GeneralLP {
    let d = 2 + k % 3;
    let n = 5 + (k / 3) % 8;
    let sigma = if (k / 24).is_multiple_of(2) { 0.1 } else { 0.5 };
    let s = derive_seed(seed, Purpose::Trial, k as u64);
    let mut spec = trial_spec(CenterModel::Sphere, n, d, sigma, s);
    spec.objective = Some(unit_vector(&mut stream(s, Purpose::Instance, 1), d));
    sample_instance(&spec, &mut stream(s, Purpose::Instance, 0)).expect("valid spec")
}

enum Agreement {
    Match(LpStatus),
    Skipped,
    Mismatch(String),
}

fn compare_with_oracle(k: usize, cfg: &VerifyConfig, opts: &SolverOptions) -> (Agreement, Option<String>) {
    let lp = oracle_instance(cfg.seed, k);
    let verdict = classify_lp(&lp, &cfg.tol()).expect("instances are within the enumeration cap");
    let s = derive_seed(cfg.seed, Purpose::Trial, k as u64);
    let solved = solve_lp(&lp, &mut stream(s, Purpose::Phase1, 0), opts);
    let audit = solved.as_ref().err().and_then(audit_of_solve);
    let res = match (&verdict.status, solved) {
        (OracleStatus::Ambiguous(_), _) => return (Agreement::Skipped, audit),
        (_, Err(e)) => return (Agreement::Mismatch(format!("instance {k}: solver error {e}")), audit),
        (_, Ok(r)) => r,
    };
    let agreement = match (&verdict.status, res.status) {
        (OracleStatus::Unbounded, LpStatus::Unbounded) => Agreement::Match(LpStatus::Unbounded),
        (OracleStatus::Infeasible, LpStatus::Infeasible) => Agreement::Match(LpStatus::Infeasible),
        (OracleStatus::Optimal { basis, value, .. }, LpStatus::Optimal) => {
            let mut got = res.basis.clone().unwrap_or_default();
            got.sort_unstable();
            let v = res.objective.unwrap_or(f64::NAN);
            if &got != basis {
                Agreement::Mismatch(format!("instance {k}: basis {got:?}, oracle {basis:?}"))
            } else if !((v - value).abs() <= 1e-7 * value.abs().max(1.0)) {
                Agreement::Mismatch(format!("instance {k}: objective {v}, oracle {value}"))
            } else {
                Agreement::Match(LpStatus::Optimal)
            }
        }
        (o, s) => Agreement::Mismatch(format!("instance {k}: solver {}, oracle {o:?}", s.as_str())),
    };
    (agreement, audit)
}

pub fn oracle_equivalence(cfg: &VerifyConfig, audits: &mut AuditTally) -> SuiteReport {
    let opts = cfg.solver_options();
    let results: Vec<(Agreement, Option<String>)> =
        (0..cfg.oracle_instances).into_par_iter().map(|k| compare_with_oracle(k, cfg, &opts)).collect();
    let (mut counts, mut skipped, mut mismatches) = ([0usize; 3], 0, Vec::new());
    for (a, audit) in results {
        audits.record(audit);
        match a {
            Agreement::Match(s) => counts[s as usize] += 1,
            Agreement::Skipped => skipped += 1,
            Agreement::Mismatch(m) => mismatches.push(m),
        }
    }
    let checked = cfg.oracle_instances - skipped;
    let mut detail = format!(
        "{} agree of {checked} decided ({} optimal, {} unbounded, {} infeasible), {skipped} ambiguous",
        checked - mismatches.len(),
        counts[LpStatus::Optimal as usize],
        counts[LpStatus::Unbounded as usize],
        counts[LpStatus::Infeasible as usize],
    );
    if let Some(first) = mismatches.first() {
        detail.push_str(&format!("; first mismatch: {first}"));
    }
    SuiteReport {
        id: 1,
        name: "oracle equivalence",
        passed: mismatches.is_empty() && checked > 0,
        checked,
        failures: mismatches.len(),
        skipped,
        metric: None,
        threshold: None,
        detail,
    }
}

struct Phase1Sample {
    bounded: bool,
    successes: usize,
    draws: usize,
    iterations: usize,
    wrong_facet: bool,
    audit: Option<String>,
}

fn phase1_instance(cfg: &VerifyConfig, k: usize, opts: &SolverOptions) -> Phase1Sample {
    let tol = cfg.tol();
    let d = 3 + k % 2;
    let s = derive_seed(cfg.seed, Purpose::Phase1, k as u64);
    let cell = Cell { index: 0, n: 50, d, sigma: 0.3 };
    let points = section_points(CenterModel::Sphere, &cell, s);
    let z = unit_vector(&mut stream(s, Purpose::Instance, 1), d);
    let mut sample = Phase1Sample { bounded: false, successes: 0, draws: 0, iterations: 0, wrong_facet: false, audit: None };
    let FacetLookup::Facet(facet) = facet_of(&points, &z, &tol).expect("within the enumeration cap") else {
        return sample;
    };
    sample.bounded = true;
    let h = numb_halfspace_witness(&points, &facet, &tol).expect("oracle facet is nonsingular");
    let params = Phase1Params::new(d, points.len());
    let size = m0(points.max_norm());
    for draw in 0..cfg.phase1_draws_per_instance {
        let mut rng = stream(s, Purpose::Phase1Retry, draw as u64);
        let rotation = haar_rotation(d, &mut rng);
        sample.draws += 1;
        if let Ok(block) = add_constraints(&points, size, &rotation, &params, &mut rng, &tol) {
            if block.added_points.iter().all(|p| dot(&h, p) <= 1.0) {
                sample.successes += 1;
            }
        }
    }
    match solve_unit(&points, &z, &mut stream(s, Purpose::Phase1, 0), opts) {
        Ok(r) => {
            sample.iterations = r.iterations;
            sample.wrong_facet = r.status != UnitStatus::OptimalFacet(facet);
        }
        Err(e) => {
            sample.audit = audit_of_phase1(&e);
            sample.wrong_facet = true;
        }
    }
    sample
}

pub fn phase1_statistics(cfg: &VerifyConfig, audits: &mut AuditTally) -> SuiteReport {
    let opts = cfg.solver_options();
    let samples: Vec<Phase1Sample> =
        (0..cfg.phase1_instances).into_par_iter().map(|k| phase1_instance(cfg, k, &opts)).collect();
    let bounded: Vec<&Phase1Sample> = samples.iter().filter(|s| s.bounded).collect();
    for s in &samples {
        if s.bounded {
            audits.record(s.audit.clone());
        }
    }
    let draws: usize = bounded.iter().map(|s| s.draws).sum();
    let successes: usize = bounded.iter().map(|s| s.successes).sum();
    let fraction = successes as f64 / draws.max(1) as f64;
    let floor = 0.25 - 3.0 * (0.1875 / draws.max(1) as f64).sqrt();
    let mean_iter = bounded.iter().map(|s| s.iterations as f64).sum::<f64>() / bounded.len().max(1) as f64;
    let wrong = bounded.iter().filter(|s| s.wrong_facet).count();
    SuiteReport {
        id: 2,
        name: "phase-I statistics",
        passed: !bounded.is_empty() && fraction >= floor && mean_iter <= 6.0 && wrong == 0,
        checked: draws,
        failures: draws - successes,
        skipped: samples.len() - bounded.len(),
        metric: Some(fraction),
        threshold: Some(floor),
        detail: format!(
            "success fraction {fraction:.4} over {draws} draws (floor {floor:.4}); mean solve iterations {mean_iter:.3} (cap 6); \
             {wrong} of {} unit solves disagree with the oracle facet",
            bounded.len()
        ),
    }
}

pub fn pivot_config(cfg: &VerifyConfig) -> ExperimentConfig {
    ExperimentConfig {
        n: cfg.pivot_ns.clone(),
        d: vec![3],
        sigma: vec![0.1],
        trials: cfg.pivot_trials,
        seed: cfg.seed,
        out: None,
        centers: CenterModel::Sphere,
    }
}

fn render_csv(rows: &[PivotRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8 csv")
}

/// Pivot growth and reproducibility: returns the growth report (3) and the
/// determinism report (8).
pub fn pivot_growth(cfg: &VerifyConfig, audits: &mut AuditTally) -> (SuiteReport, SuiteReport) {
    let opts = cfg.solver_options();
    let ecfg = pivot_config(cfg);
    let rows = run_pivots(&ecfg, &opts);
    let trials: Vec<&PivotRow> = rows.iter().filter(|r| r.kind == "trial").collect();
    for r in &trials {
        audits.record(audit_of_row(&r.status));
    }
    let errors = trials.iter().filter(|r| r.status.starts_with("error")).count();
    let agg: Vec<&PivotRow> = rows.iter().filter(|r| r.kind == "aggregate").collect();
    let ns: Vec<f64> = agg.iter().map(|r| r.n as f64).collect();
    let means: Vec<f64> = agg.iter().map(|r| r.pivots_total).collect();
    let slope = if ns.len() >= 2 { loglog_slope(&ns, &means) } else { f64::NAN };
    let table = agg.iter().map(|r| format!("n={} {:.2}", r.n, r.pivots_total)).collect::<Vec<_>>().join(", ");
    let growth = SuiteReport {
        id: 3,
        name: "pivot growth",
        passed: slope <= 0.4 && errors == 0,
        checked: trials.len(),
        failures: errors,
        skipped: 0,
        metric: Some(slope),
        threshold: Some(0.4),
        detail: format!("log-log slope {slope:.4} (limit 0.4); mean total pivots {table}; {errors} failed trials"),
    };

    let first = ExperimentConfig { n: vec![ecfg.n[0]], ..ecfg.clone() };
    let a = strip_timing(&render_csv(&run_pivots(&first, &opts)));
    let b = strip_timing(&render_csv(&run_pivots(&first, &opts)));
    let from_full = strip_timing(&render_csv(&rows[..=ecfg.trials]));
    let same = a == b && a == from_full;
    let determinism = SuiteReport {
        id: 8,
        name: "determinism",
        passed: same,
        checked: 3,
        failures: usize::from(!same),
        skipped: 0,
        metric: None,
        threshold: None,
        detail: format!(
            "first cell ({} rows) {} across two reruns and the full grid",
            ecfg.trials + 1,
            if same { "byte-identical" } else { "differs" }
        ),
    };
    (growth, determinism)
}

/// Random section instance `k`: `d = 3`, `n` in 4..=10, sigma 0.1 or 0.5,
/// Haar-random plane.
pub fn section_instance(seed: u64, k: usize) -> (PointSet, SweepPlane, u64) {
    let n = 4 + k % 7;
    let sigma = if (k / 7).is_multiple_of(2) { 0.1 } else { 0.5 };
    let s = derive_seed(seed, Purpose::Centers, k as u64);
    let cell = Cell { index: 0, n, d: 3, sigma };
    (section_points(CenterModel::Sphere, &cell, s), section_plane(3, s), s)
}

pub fn section_counts(cfg: &VerifyConfig, audits: &mut AuditTally) -> SuiteReport {
    let opts = cfg.solver_options();
    let tol = cfg.tol();
    type Outcome = (Result<(usize, usize), String>, Option<String>);
    let results: Vec<Outcome> = (0..cfg.section_instances)
        .into_par_iter()
        .map(|k| {
            let (points, plane, s) = section_instance(cfg.seed, k);
            let brute = section_edge_count_bruteforce(&points, &plane, &tol).expect("within the enumeration cap");
            match section_edges(&points, &plane, &mut stream(s, Purpose::Phase1, 0), &opts) {
                Ok(r) => (Ok((r.edge_count, brute)), None),
                Err(e) => (Err(format!("instance {k}: {e}")), audit_of_section(&e)),
            }
        })
        .collect();
    let mut failures = Vec::new();
    let mut empty = 0;
    for (k, (res, audit)) in results.into_iter().enumerate() {
        audits.record(audit);
        match res {
            Ok((walked, brute)) if walked == brute => empty += usize::from(brute == 0),
            Ok((walked, brute)) => failures.push(format!("instance {k}: sweep {walked}, brute force {brute}")),
            Err(e) => failures.push(e),
        }
    }
    let square = PointSet::from_rows(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]).expect("square");
    let whole = SweepPlane::new(vec![1.0, 0.0], vec![0.0, 1.0], &tol).expect("axes");
    let square_edges =
        section_edges(&square, &whole, &mut stream(cfg.seed, Purpose::Trial, 0), &opts).map(|r| r.edge_count).map_err(|e| e.to_string());
    if square_edges != Ok(4) {
        failures.push(format!("square fixture gave {square_edges:?}"));
    }
    let mut detail = format!(
        "{} of {} instances match brute force ({empty} with an empty slice); square fixture {:?}",
        cfg.section_instances + 1 - failures.len(),
        cfg.section_instances + 1,
        square_edges,
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first failure: {f}"));
    }
    SuiteReport {
        id: 4,
        name: "section counting",
        passed: failures.is_empty(),
        checked: cfg.section_instances + 1,
        failures: failures.len(),
        skipped: 0,
        metric: None,
        threshold: None,
        detail,
    }
}

pub fn hull_growth(cfg: &VerifyConfig) -> SuiteReport {
    let ecfg = ExperimentConfig {
        n: cfg.hull_ns.clone(),
        d: vec![2],
        sigma: vec![1.0],
        trials: cfg.hull_trials,
        seed: cfg.seed,
        out: None,
        centers: CenterModel::Origin,
    };
    let rows = run_sections(&ecfg, &cfg.solver_options());
    let errors = rows.iter().filter(|r| r.kind == "trial" && r.status != "ok").count();
    let agg: Vec<_> = rows.iter().filter(|r| r.kind == "aggregate").collect();
    let above_floor = agg.iter().all(|r| r.edge_count > (r.n as f64).ln().sqrt());
    let increasing = agg.windows(2).all(|w| w[1].edge_count > w[0].edge_count);
    let table = agg
        .iter()
        .map(|r| format!("n={} mean {:.2} (floor {:.3})", r.n, r.edge_count, (r.n as f64).ln().sqrt()))
        .collect::<Vec<_>>()
        .join(", ");
    SuiteReport {
        id: 5,
        name: "planar hull growth",
        passed: errors == 0 && above_floor && increasing && agg.len() >= 2,
        checked: rows.len() - agg.len(),
        failures: errors,
        skipped: 0,
        metric: agg.last().map(|r| r.edge_count),
        threshold: None,
        detail: format!("{table}; {}", if increasing { "strictly increasing" } else { "not increasing" }),
    }
}

/// Lemma checks: angular against Euclidean distance on lines at distance
/// at least 1 from the origin, and the three-viewpoint certificate on
/// random polygons.
pub fn lemma_suites(cfg: &VerifyConfig) -> SuiteReport {
    let slack = 10.0 * cfg.tol().eps_feas;
    let c = 1.0 / 101.0;
    let mut rng = stream(cfg.seed, Purpose::Trial, u64::MAX);
    let mut angle_violations = 0;
    for _ in 0..cfg.angle_configs {
        let r = 1.0 + 9.0 * open_unit(&mut rng);
        let phi = std::f64::consts::TAU * open_unit(&mut rng);
        let (u, v) = ([phi.cos(), phi.sin()], [-phi.sin(), phi.cos()]);
        let tmax = (100.0 - r * r).sqrt();
        let (t1, t2) = (tmax * (2.0 * open_unit(&mut rng) - 1.0), tmax * (2.0 * open_unit(&mut rng) - 1.0));
        let x1 = [r * u[0] + t1 * v[0], r * u[1] + t1 * v[1]];
        let x2 = [r * u[0] + t2 * v[0], r * u[1] + t2 * v[1]];
        let dist = (t2 - t1).abs();
        let ang = angular_distance(&x1, &x2).expect("nonzero points");
        if c * dist - ang > slack || ang - dist > slack {
            angle_violations += 1;
        }
    }

    let mut no_viewpoint = 0;
    let mut bad_certificate = 0;
    let mut edges = 0;
    for k in 0..cfg.polygons {
        let count = 3 + k % 18;
        let poly: Vec<[f64; 2]> = (0..count)
            .map(|_| {
                let (rad, t) = (open_unit(&mut rng).sqrt(), std::f64::consts::TAU * open_unit(&mut rng));
                [rad * t.cos(), rad * t.sin()]
            })
            .collect();
        let hull = convex_hull_2d(&poly);
        for e in 0..hull.len() {
            let (a, b) = (hull[e], hull[(e + 1) % hull.len()]);
            edges += 1;
            match viewpoint_for_edge(&poly, (a, b)) {
                Ok(i) => {
                    if !viewpoint_certificate(&poly, (a, b), viewpoints()[i]) {
                        bad_certificate += 1;
                    }
                }
                Err(_) => no_viewpoint += 1,
            }
        }
    }
    let failures = angle_violations + no_viewpoint + bad_certificate;
    SuiteReport {
        id: 6,
        name: "planar lemmas",
        passed: failures == 0,
        checked: cfg.angle_configs + edges,
        failures,
        skipped: 0,
        metric: None,
        threshold: None,
        detail: format!(
            "{angle_violations} distance violations in {} configurations; {no_viewpoint} edges without a viewpoint and \
             {bad_certificate} bad certificates over {edges} edges of {} polygons",
            cfg.angle_configs, cfg.polygons
        ),
    }
}

/// The edge stays a hull edge once the viewpoint is added, and the
/// viewpoint is at distance at least 1 from its line.
fn viewpoint_certificate(poly: &[[f64; 2]], (a, b): (usize, usize), o: [f64; 2]) -> bool {
    let (p, q) = (poly[a], poly[b]);
    let len = (q[0] - p[0]).hypot(q[1] - p[1]);
    let dist = ((q[0] - p[0]) * (o[1] - p[1]) - (q[1] - p[1]) * (o[0] - p[0])).abs() / len;
    let mut with = poly.to_vec();
    with.push(o);
    let hull = convex_hull_2d(&with);
    let adjacent = (0..hull.len()).any(|i| {
        let (x, y) = (hull[i], hull[(i + 1) % hull.len()]);
        (x, y) == (a, b) || (x, y) == (b, a)
    });
    dist >= 1.0 && adjacent
}

pub fn audit_report(audits: &AuditTally) -> SuiteReport {
    let mut detail = format!("{} audited solves, {} audit failures", audits.runs, audits.failures.len());
    if let Some(f) = audits.failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    SuiteReport {
        id: 7,
        name: "walk invariants",
        passed: audits.failures.is_empty() && audits.runs > 0,
        checked: audits.runs,
        failures: audits.failures.len(),
        skipped: 0,
        metric: None,
        threshold: None,
        detail,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

/// Run all suites in criterion order.
pub fn run_all(cfg: &VerifyConfig) -> VerifySummary {
    let mut audits = AuditTally::default();
    let mut suites = vec![oracle_equivalence(cfg, &mut audits)];
    let mut a2 = AuditTally::default();
    suites.push(phase1_statistics(cfg, &mut a2));
    let (growth, determinism) = pivot_growth(cfg, &mut a2);
    suites.push(growth);
    suites.push(section_counts(cfg, &mut a2));
    audits.merge(a2);
    suites.push(hull_growth(cfg));
    suites.push(lemma_suites(cfg));
    suites.push(audit_report(&audits));
    suites.push(determinism);
    VerifySummary { passed: suites.iter().all(|s| s.passed), seed: cfg.seed, suites }
}
