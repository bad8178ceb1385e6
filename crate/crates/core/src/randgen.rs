//! Randomness: Gaussian smoothing, Haar rotations, phase-I parameters.
//!
//! Streams are derived, never shared. A stream is a `ChaCha8Rng` seeded
//! from `mix(seed, purpose, index)` (SplitMix64 finalizer chained over the
//! three words), so any `(seed, purpose, index)` triple names the same
//! sequence on every platform. Gaussians use the inverse-CDF method on a
//! 53-bit uniform, which keeps samples bit-stable across platforms.

use crate::interpolate::GeneralLP;
use crate::linalg::{dot, norm};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RandError {
    #[error("smoothed spec has all-zero data")]
    ZeroData,
    #[error("smoothed spec is malformed: {0}")]
    Malformed(&'static str),
}

/// Stream purposes; part of the seed-derivation contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Instance = 1,
    Phase1 = 2,
    Phase1Retry = 3,
    Rotation = 4,
    Trial = 5,
    Centers = 6,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, purpose: Purpose, index: u64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ purpose as u64) ^ index)
}

pub fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, purpose, index))
}

fn standard() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).expect("valid normal"))
}

/// Uniform on the open interval `(0, 1)` with 53 random bits.
pub fn open_unit<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal by inverse CDF.
pub fn gaussian<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    standard().inverse_cdf(open_unit(rng))
}

pub fn gaussian_vec<R: RngCore + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| gaussian(rng)).collect()
}

/// Uniform direction on the unit sphere.
pub fn unit_vector<R: RngCore + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vec(rng, d);
        let n = norm(&g);
        if n > 1e-12 {
            return g.into_iter().map(|v| v / n).collect();
        }
    }
}

pub const C1: f64 = 1.0 / 300.0;

/// Radius of the added regular simplex.
pub fn ell(d: usize) -> f64 {
    assert!(d >= 2, "ell needs d >= 2");
    C1 / (d as f64).ln().sqrt()
}

/// `1 / (6 sqrt(d log n))`: the largest standard deviation the normalized
/// smoothed model allows.
pub fn sigma_cap(d: usize, n: usize) -> f64 {
    1.0 / (6.0 * (d as f64 * (n as f64).ln()).sqrt())
}

/// Standard deviation (relative to `2 M0`) for smoothing the added simplex.
pub fn sigma1(d: usize, n: usize) -> f64 {
    assert!(d >= 2 && n > d, "sigma1 needs n > d >= 2");
    let df = d as f64;
    sigma_cap(d, n).min(C1 / (df.powf(1.5) * df.ln()))
}

/// `e^{ceil(log M)}`.
pub fn m0(m: f64) -> f64 {
    assert!(m > 0.0 && m.is_finite(), "m0 needs a positive finite M");
    m.ln().ceil().exp()
}

/// Orthogonal `d x d` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    d: usize,
    m: Vec<f64>,
}

impl Rotation {
    pub fn identity(d: usize) -> Self {
        let mut m = vec![0.0; d * d];
        (0..d).for_each(|i| m[i * d + i] = 1.0);
        Rotation { d, m }
    }

    /// From a row-major matrix; no orthogonality check.
    pub fn from_row_major(d: usize, m: Vec<f64>) -> Self {
        assert_eq!(m.len(), d * d);
        Rotation { d, m }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.d + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.d).map(|i| self.entry(i, j)).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.m.chunks_exact(self.d).map(|row| dot(row, x)).collect()
    }

    /// `max |U^T U - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0_f64;
        for a in 0..d {
            for b in 0..d {
                let s: f64 = (0..d).map(|k| self.entry(k, a) * self.entry(k, b)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt on the columns of a
/// standard Gaussian matrix. Gram-Schmidt leaves the triangular factor with a
/// positive diagonal, which is the sign convention that makes `Q` Haar.
pub fn haar_rotation<R: RngCore + ?Sized>(d: usize, rng: &mut R) -> Rotation {
    assert!(d >= 2);
    'draw: loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut v = gaussian_vec(rng, d);
            let raw = norm(&v);
            for _pass in 0..2 {
                for q in &cols {
                    let p = dot(&v, q);
                    v.iter_mut().zip(q).for_each(|(a, b)| *a -= p * b);
                }
            }
            let n = norm(&v);
            if n <= 1e-10 * raw.max(1.0) {
                continue 'draw;
            }
            v.iter_mut().for_each(|a| *a /= n);
            cols.push(v);
        }
        let mut m = vec![0.0; d * d];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..d {
                m[i * d + j] = c[i];
            }
        }
        return Rotation { d, m };
    }
}

/// Centers and noise level of a smoothed program `A x <= b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothedSpec {
    pub centers_a: Vec<Vec<f64>>,
    pub centers_b: Vec<f64>,
    pub sigma: f64,
    pub seed: u64,
    /// Defaults to the first coordinate axis.
    #[serde(default)]
    pub objective: Option<Vec<f64>>,
}

impl SmoothedSpec {
    pub fn n(&self) -> usize {
        self.centers_a.len()
    }

    pub fn d(&self) -> usize {
        self.centers_a.first().map_or(0, Vec::len)
    }

    fn check(&self) -> Result<(), RandError> {
        let d = self.d();
        if d < 2 || self.n() <= d {
            return Err(RandError::Malformed("need n > d >= 2"));
        }
        if self.centers_b.len() != self.n() || self.centers_a.iter().any(|r| r.len() != d) {
            return Err(RandError::Malformed("ragged centers"));
        }
        if !(self.sigma >= 0.0) {
            return Err(RandError::Malformed("sigma must be nonnegative"));
        }
        Ok(())
    }

    fn scaled(&self, s: f64) -> SmoothedSpec {
        SmoothedSpec {
            centers_a: self.centers_a.iter().map(|r| r.iter().map(|v| v * s).collect()).collect(),
            centers_b: self.centers_b.iter().map(|v| v * s).collect(),
            sigma: self.sigma * s,
            seed: self.seed,
            objective: self.objective.clone(),
        }
    }
}

/// Scale so that `max |(a_i, b_i)| = 1`, then further so that sigma does
/// not exceed `1 / (6 sqrt(d log n))`.
pub fn normalize(spec: &SmoothedSpec) -> Result<SmoothedSpec, RandError> {
    spec.check()?;
    let mx = spec
        .centers_a
        .iter()
        .zip(&spec.centers_b)
        .map(|(a, b)| (dot(a, a) + b * b).sqrt())
        .fold(0.0, f64::max);
    if mx == 0.0 {
        return Err(RandError::ZeroData);
    }
    let mut out = spec.scaled(1.0 / mx);
    let cap = sigma_cap(spec.d(), spec.n());
    if out.sigma > cap {
        out = out.scaled(cap / out.sigma);
        out.sigma = cap;
    }
    Ok(out)
}

/// Draw `(A, b)` coordinatewise as `center + sigma * N(0, 1)`.
pub fn sample_instance<R: RngCore + ?Sized>(spec: &SmoothedSpec, rng: &mut R) -> Result<GeneralLP, RandError> {
    spec.check()?;
    let d = spec.d();
    let mut a = Vec::with_capacity(spec.n() * d);
    let mut b = Vec::with_capacity(spec.n());
    for (row, &bc) in spec.centers_a.iter().zip(&spec.centers_b) {
        for &c in row {
            a.push(c + spec.sigma * gaussian(rng));
        }
        b.push(bc + spec.sigma * gaussian(rng));
    }
    let z = spec.objective.clone().unwrap_or_else(|| {
        let mut e = vec![0.0; d];
        e[0] = 1.0;
        e
    });
    GeneralLP::new(d, a, b, z).map_err(|_| RandError::Malformed("sampled program rejected"))
}
