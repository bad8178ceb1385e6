use approx::assert_relative_eq;
use proptest::prelude::*;
use shadowlp::geometry::{
    all_below, angular_distance, cone_coefficients, convex_hull_2d, facet_normal, viewpoint_for_edge, viewpoints,
};
use shadowlp::linalg::dot;
use shadowlp::{PointSet, Tolerance};

fn vec_in(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, d).prop_filter("nonzero", |v| dot(v, v) > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn angular_distance_symmetric_and_scale_free(x in vec_in(3), y in vec_in(3), s in 0.1..10.0f64, flip in any::<bool>()) {
        let a = angular_distance(&x, &y).unwrap();
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&a));
        prop_assert_eq!(a, angular_distance(&y, &x).unwrap());
        let sign = if flip { -s } else { s };
        let scaled: Vec<f64> = x.iter().map(|v| v * sign).collect();
        prop_assert!((angular_distance(&scaled, &y).unwrap() - a).abs() < 1e-7);
    }

    #[test]
    fn facet_normal_touches_its_points(rows in prop::collection::vec(vec_in(3), 3)) {
        let tol = Tolerance::default();
        let ps = PointSet::from_rows(&rows).unwrap();
        if let Ok(h) = facet_normal(&ps, &[0, 1, 2], &tol) {
            for r in &rows {
                prop_assert!((dot(&h, r) - 1.0).abs() < 1e-6 * (1.0 + dot(&h, &h).sqrt() * 5.0));
            }
        }
    }

    #[test]
    fn cone_coefficients_reconstruct_z(rows in prop::collection::vec(vec_in(3), 3), z in vec_in(3)) {
        let tol = Tolerance::default();
        let ps = PointSet::from_rows(&rows).unwrap();
        if let Ok(lam) = cone_coefficients(&ps, &[0, 1, 2], &z, &tol) {
            let big = lam.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for k in 0..3 {
                let rebuilt: f64 = (0..3).map(|i| lam[i] * rows[i][k]).sum();
                prop_assert!((rebuilt - z[k]).abs() < 1e-7 * big * 5.0);
            }
        }
    }

    #[test]
    fn every_hull_edge_has_a_viewpoint(pts in prop::collection::vec((0.0..1.0f64, 0.0..std::f64::consts::TAU), 3..24)) {
        let poly: Vec<[f64; 2]> = pts.iter().map(|&(r, t)| [r * t.cos(), r * t.sin()]).collect();
        let hull = convex_hull_2d(&poly);
        prop_assume!(hull.len() >= 3);
        for e in 0..hull.len() {
            let (a, b) = (hull[e], hull[(e + 1) % hull.len()]);
            let i = viewpoint_for_edge(&poly, (a, b)).unwrap();
            let o = viewpoints()[i];
            let (p, q) = (poly[a], poly[b]);
            let dist = ((q[0] - p[0]) * (o[1] - p[1]) - (q[1] - p[1]) * (o[0] - p[0])).abs() / (q[0] - p[0]).hypot(q[1] - p[1]);
            prop_assert!(dist >= 1.0);
        }
    }
}

#[test]
fn hexagon_edges_each_have_a_viewpoint() {
    let hex: Vec<[f64; 2]> = (0..6)
        .map(|k| {
            let t = k as f64 * std::f64::consts::PI / 3.0;
            [t.cos(), t.sin()]
        })
        .collect();
    for k in 0..6 {
        assert!(viewpoint_for_edge(&hex, (k, (k + 1) % 6)).is_ok());
    }
}

#[test]
fn all_below_tracks_the_hull() {
    let tol = Tolerance::default();
    let ps = PointSet::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.9, 0.9]]).unwrap();
    let h01 = facet_normal(&ps, &[0, 1], &tol).unwrap();
    assert!(!all_below(&ps, &h01, &tol));
    let h02 = facet_normal(&ps, &[0, 2], &tol).unwrap();
    assert!(all_below(&ps, &h02, &tol));
    assert_relative_eq!(dot(&h02, &[0.9, 0.9]), 1.0, epsilon = 1e-12);
}
