use proptest::prelude::*;
use shadowlp::linalg::norm;
use shadowlp::randgen::{
    gaussian, gaussian_vec, haar_rotation, m0, normalize, sample_instance, sigma1, sigma_cap, stream, Purpose, SmoothedSpec,
};

#[test]
fn haar_image_of_a_fixed_vector_is_centred() {
    let mut rng = stream(11, Purpose::Rotation, 0);
    for d in [2, 3, 5] {
        let mut sum = vec![0.0; d];
        for _ in 0..10_000 {
            let u = haar_rotation(d, &mut rng);
            sum.iter_mut().zip(u.column(0)).for_each(|(s, v)| *s += v);
        }
        assert!(norm(&sum) / 10_000.0 <= 0.05);
    }
}

#[test]
fn planar_haar_angle_is_uniform() {
    // Kolmogorov-Smirnov against the uniform law on [0, 2 pi)
    let mut rng = stream(12, Purpose::Rotation, 0);
    let n = 10_000;
    let mut angles: Vec<f64> = (0..n)
        .map(|_| {
            let c = haar_rotation(2, &mut rng).column(0);
            c[1].atan2(c[0]).rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    let ks = angles
        .iter()
        .enumerate()
        .map(|(i, &a)| ((i + 1) as f64 / n as f64 - a).max(a - i as f64 / n as f64))
        .fold(0.0, f64::max);
    assert!(ks < 1.63 / (n as f64).sqrt(), "KS statistic {ks}");
}

#[test]
fn sample_mean_matches_center() {
    let spec = SmoothedSpec {
        centers_a: vec![vec![0.3, -0.2], vec![0.0, 0.0], vec![0.1, 0.1]],
        centers_b: vec![0.5, 1.0, 0.2],
        sigma: 0.05,
        seed: 0,
        objective: None,
    };
    let mut rng = stream(13, Purpose::Instance, 0);
    let draws = 100_000;
    let mut sum = 0.0;
    for _ in 0..draws {
        sum += sample_instance(&spec, &mut rng).unwrap().row(0)[0];
    }
    let se = spec.sigma / (draws as f64).sqrt();
    assert!((sum / draws as f64 - 0.3).abs() < 5.0 * se);
}

#[test]
fn gaussian_tail_is_thin() {
    // fraction of |g - center| >= 3 sigma sqrt(d log n) for d = 3, n = 10
    let (d, n) = (3usize, 10usize);
    let radius = 3.0 * (d as f64 * (n as f64).ln()).sqrt();
    let bound = 10.0 * (n as f64).powf(-2.9 * d as f64 + 1.0);
    let mut rng = stream(14, Purpose::Instance, 0);
    let batches = 20_000;
    let mut hits = 0;
    for _ in 0..batches {
        if (0..n).any(|_| norm(&gaussian_vec(&mut rng, d)) >= radius) {
            hits += 1;
        }
    }
    let slack = 3.0 / (batches as f64).sqrt();
    assert!((hits as f64 / batches as f64) <= bound + slack);
}

#[test]
fn standard_normal_moments() {
    let mut rng = stream(15, Purpose::Instance, 0);
    let xs: Vec<f64> = (0..200_000).map(|_| gaussian(&mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    assert!(mean.abs() < 0.01);
    assert!((var - 1.0).abs() < 0.02);
}

proptest! {
    #[test]
    fn m0_is_the_next_power_of_e(m in 1e-6..1e6f64) {
        let r = m0(m) / m;
        prop_assert!((1.0..std::f64::consts::E * (1.0 + 1e-12)).contains(&r));
    }

    #[test]
    fn sigma1_respects_the_cap(d in 2usize..40, extra in 1usize..1000) {
        let n = d + extra;
        prop_assert!(sigma1(d, n) <= sigma_cap(d, n));
    }

    #[test]
    fn normalize_is_idempotent_and_scale_free(t in 0.01..100.0f64, sigma in 0.0..2.0f64) {
        let spec = SmoothedSpec {
            centers_a: vec![vec![1.0, 0.5], vec![-0.3, 0.2], vec![0.0, 2.0], vec![0.7, -0.7]],
            centers_b: vec![1.0, 0.0, -1.0, 0.5],
            sigma,
            seed: 1,
            objective: None,
        };
        let once = normalize(&spec).unwrap();
        let twice = normalize(&once).unwrap();
        let scaled = SmoothedSpec {
            centers_a: spec.centers_a.iter().map(|r| r.iter().map(|v| v * t).collect()).collect(),
            centers_b: spec.centers_b.iter().map(|v| v * t).collect(),
            sigma: spec.sigma * t,
            ..spec.clone()
        };
        let other = normalize(&scaled).unwrap();
        for (a, b) in once.centers_b.iter().zip(&twice.centers_b).chain(once.centers_b.iter().zip(&other.centers_b)) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!((once.sigma - other.sigma).abs() < 1e-12);
        prop_assert!(once.sigma <= sigma_cap(2, 4) * (1.0 + 1e-12));
    }
}
