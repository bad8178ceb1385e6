use proptest::prelude::*;
use shadowlp::geometry::cone_coefficients;
use shadowlp::oracle::{classify_lp, facet_of, for_each_subset, section_edge_count_bruteforce, FacetLookup, OracleStatus};
use shadowlp::randgen::{gaussian_vec, stream, unit_vector, Purpose};
use shadowlp::sections::section_edges;
use shadowlp::verify::{oracle_instance, section_instance};
use shadowlp::{GeneralLP, PointSet, SolverOptions, Tolerance};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classification_ignores_row_scaling_and_order(k in 0usize..5000, seed in any::<u64>()) {
        let tol = Tolerance::default();
        let lp = oracle_instance(seed, k);
        let base = classify_lp(&lp, &tol).unwrap().status;
        prop_assume!(!matches!(base, OracleStatus::Ambiguous(_)));
        let mut rng = stream(seed, Purpose::Trial, 1);
        let factors: Vec<f64> = (0..lp.n()).map(|_| 0.2 + 3.0 * shadowlp::randgen::open_unit(&mut rng)).collect();
        let scaled = classify_lp(&lp.scale_rows(&factors), &tol).unwrap().status;
        let perm: Vec<usize> = (0..lp.n()).rev().collect();
        let rows: Vec<Vec<f64>> = perm.iter().map(|&i| lp.row(i).to_vec()).collect();
        let b: Vec<f64> = perm.iter().map(|&i| lp.b()[i]).collect();
        let permuted = classify_lp(&GeneralLP::from_rows(&rows, b, lp.z().to_vec()).unwrap(), &tol).unwrap().status;
        match (&base, &scaled, &permuted) {
            (OracleStatus::Optimal { basis, value, .. }, OracleStatus::Optimal { basis: b1, value: v1, .. }, OracleStatus::Optimal { basis: b2, value: v2, .. }) => {
                prop_assert_eq!(basis, b1);
                let mut relabeled: Vec<usize> = b2.iter().map(|&j| perm[j]).collect();
                relabeled.sort_unstable();
                prop_assert_eq!(basis, &relabeled);
                prop_assert!((value - v1).abs() < 1e-9 * value.abs().max(1.0));
                prop_assert!((value - v2).abs() < 1e-9 * value.abs().max(1.0));
            }
            _ => {
                prop_assert_eq!(std::mem::discriminant(&base), std::mem::discriminant(&scaled));
                prop_assert_eq!(std::mem::discriminant(&base), std::mem::discriminant(&permuted));
            }
        }
    }

    #[test]
    fn facet_exists_iff_z_in_cone(seed in any::<u64>(), d in 2usize..5, extra in 1usize..6, shift in 0.0..2.0f64) {
        let tol = Tolerance::default();
        let mut rng = stream(seed, Purpose::Instance, 0);
        let rows: Vec<Vec<f64>> = (0..d + extra)
            .map(|_| {
                let mut v = gaussian_vec(&mut rng, d);
                v[0] += shift;
                v
            })
            .collect();
        let points = PointSet::from_rows(&rows).unwrap();
        let z = unit_vector(&mut rng, d);
        // Caratheodory: z is in the cone iff some d-subset represents it
        let mut margin = f64::NEG_INFINITY;
        for_each_subset(points.len(), d, |idx| {
            if let Ok(lam) = cone_coefficients(&points, idx, &z, &tol) {
                let scale = lam.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                margin = margin.max(lam.iter().fold(f64::INFINITY, |m, &v| m.min(v)) / scale);
            }
        });
        prop_assume!(margin.abs() > 1e-6);
        match facet_of(&points, &z, &tol).unwrap() {
            FacetLookup::Facet(_) => prop_assert!(margin > 0.0),
            FacetLookup::Empty => prop_assert!(margin < 0.0),
            FacetLookup::Ambiguous(_) => {}
        }
    }
}

#[test]
fn sections_match_bruteforce_on_fresh_seeds() {
    let tol = Tolerance::default();
    let opts = SolverOptions::default();
    for k in 0..100 {
        let (points, plane, s) = section_instance(7_777, k);
        let brute = section_edge_count_bruteforce(&points, &plane, &tol).unwrap();
        let walked = section_edges(&points, &plane, &mut stream(s, Purpose::Phase1, 0), &opts).unwrap();
        assert_eq!(walked.edge_count, brute, "instance {k}");
        assert_eq!(walked.degenerate, brute == 0);
    }
}
