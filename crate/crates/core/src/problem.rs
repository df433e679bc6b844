//! Compressed-sensing problem instances and their seeded generators.

use std::fmt;

use ndarray::{Array1, Array2};
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, norm2_sq};
use crate::rng::{self, StreamRng, TAG_MATRIX, TAG_NOISE, TAG_SIGNAL};
use crate::scalar::Real;

/// Measurement noise level attached to an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseLevel {
    None,
    SnrDb(f64),
}

impl NoiseLevel {
    pub fn snr_db(self) -> Option<f64> {
        match self {
            NoiseLevel::None => None,
            NoiseLevel::SnrDb(v) => Some(v),
        }
    }
}

impl fmt::Display for NoiseLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseLevel::None => f.write_str("none"),
            NoiseLevel::SnrDb(v) => write!(f, "{v:.16e}"),
        }
    }
}

/// Sensing matrix, measurements and (optionally) the ground truth.
///
/// Immutable after construction. The transpose of `a` is cached because
/// every solver iteration multiplies by it.
#[derive(Debug, Clone)]
pub struct ProblemInstance<T: Real> {
    a: Array2<T>,
    a_t: Array2<T>,
    y: Array1<T>,
    x0: Option<Array1<T>>,
    k: usize,
    noise: NoiseLevel,
    seed: u64,
}

impl<T: Real> ProblemInstance<T> {
    /// Builds an instance from raw parts, validating shapes and finiteness.
    pub fn new(
        a: Array2<T>,
        y: Array1<T>,
        x0: Option<Array1<T>>,
        k: usize,
        noise: NoiseLevel,
        seed: u64,
    ) -> Result<Self> {
        let (m, n) = a.dim();
        if m == 0 || n == 0 {
            return Err(Error::invalid(format!(
                "matrix must be non-empty, got {m}x{n}"
            )));
        }
        if m >= n {
            return Err(Error::invalid(format!("need m < n, got m={m}, n={n}")));
        }
        ensure_finite(a.view(), "sensing matrix")?;
        if y.len() != m {
            return Err(Error::invalid(format!(
                "y has length {}, expected {m}",
                y.len()
            )));
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("y has non-finite entries"));
        }
        if let Some(x0) = &x0 {
            if x0.len() != n {
                return Err(Error::invalid(format!(
                    "x0 has length {}, expected {n}",
                    x0.len()
                )));
            }
            if !x0.iter().all(|v| v.is_finite()) {
                return Err(Error::invalid("x0 has non-finite entries"));
            }
        }
        if k > n {
            return Err(Error::invalid(format!("k={k} exceeds n={n}")));
        }
        if let NoiseLevel::SnrDb(s) = noise {
            if !s.is_finite() {
                return Err(Error::invalid("noise SNR must be finite"));
            }
        }
        let a_t = a.t().as_standard_layout().into_owned();
        Ok(ProblemInstance {
            a,
            a_t,
            y,
            x0,
            k,
            noise,
            seed,
        })
    }

    /// Seeded synthetic instance: Gaussian `A`, sparse `x0`, `y = A·x0` plus
    /// optional noise at an exact SNR.
    pub fn generate(spec: &InstanceSpec) -> Result<Self> {
        spec.validate()?;
        let a = generate_gaussian_matrix::<T>(
            spec.m,
            spec.n,
            spec.column_normalized,
            rng::substream(spec.seed, TAG_MATRIX),
        )?;
        let signal_seed = rng::substream(spec.seed, TAG_SIGNAL);
        let x0 = match spec.signal {
            SignalModel::ExactSparse => generate_k_sparse_signal::<T>(spec.n, spec.k, signal_seed)?,
            SignalModel::BernoulliGaussian => {
                let p = spec.k as f64 / spec.n as f64;
                generate_bernoulli_gaussian::<T>(spec.n, p, signal_seed)?
            }
        };
        let clean = a.dot(&x0);
        let y = match spec.noise {
            NoiseLevel::None => clean,
            NoiseLevel::SnrDb(db) => {
                add_noise_snr(&clean, db, rng::substream(spec.seed, TAG_NOISE))?
            }
        };
        Self::new(a, y, Some(x0), spec.k, spec.noise, spec.seed)
    }

    pub fn a(&self) -> &Array2<T> {
        &self.a
    }

    /// `Aᵀ` in standard (row-major) layout.
    pub fn a_transpose(&self) -> &Array2<T> {
        &self.a_t
    }

    pub fn y(&self) -> &Array1<T> {
        &self.y
    }

    pub fn x0(&self) -> Option<&Array1<T>> {
        self.x0.as_ref()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn noise(&self) -> NoiseLevel {
        self.noise
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same sensing matrix and ground truth with a different measurement vector.
    pub fn with_measurements(&self, y: Array1<T>) -> Result<Self> {
        Self::new(
            self.a.clone(),
            y,
            self.x0.clone(),
            self.k,
            self.noise,
            self.seed,
        )
    }
}

/// How the ground truth is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalModel {
    /// Exactly `k` nonzeros on a uniformly random support.
    ExactSparse,
    /// Each entry nonzero with probability `k / n`.
    BernoulliGaussian,
}

/// Parameters of [`ProblemInstance::generate`].
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub column_normalized: bool,
    pub signal: SignalModel,
    pub noise: NoiseLevel,
    pub seed: u64,
}

impl InstanceSpec {
    fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= self.n {
            return Err(Error::invalid(format!(
                "need 0 < m < n, got m={}, n={}",
                self.m, self.n
            )));
        }
        if self.k > self.n {
            return Err(Error::invalid(format!("k={} exceeds n={}", self.k, self.n)));
        }
        Ok(())
    }
}

fn gaussian<T: Real>(rng: &mut StreamRng) -> T {
    let v: f64 = rng.sample(StandardNormal);
    T::lit(v)
}

/// `m × n` matrix with i.i.d. `N(0, 1)` entries, or `N(0, 1/m)` when
/// `column_normalized` (unit expected column norm).
pub fn generate_gaussian_matrix<T: Real>(
    m: usize,
    n: usize,
    column_normalized: bool,
    seed: u64,
) -> Result<Array2<T>> {
    if m == 0 || n == 0 {
        return Err(Error::invalid(format!(
            "matrix dimensions must be positive, got {m}x{n}"
        )));
    }
    let mut rng = rng::stream(seed);
    let scale = if column_normalized {
        1.0 / (m as f64).sqrt()
    } else {
        1.0
    };
    let data: Vec<T> = (0..m * n)
        .map(|_| {
            let v: f64 = rng.sample(StandardNormal);
            T::lit(v * scale)
        })
        .collect();
    Ok(Array2::from_shape_vec((m, n), data).expect("shape matches length"))
}

/// Length-`n` vector with exactly `k` standard-Gaussian nonzeros.
pub fn generate_k_sparse_signal<T: Real>(n: usize, k: usize, seed: u64) -> Result<Array1<T>> {
    if k > n {
        return Err(Error::invalid(format!("k={k} exceeds n={n}")));
    }
    let mut rng = rng::stream(seed);
    let mut x = Array1::zeros(n);
    let support = index::sample(&mut rng, n, k);
    for i in support.iter() {
        // a Gaussian draw of exactly 0.0 would lose a support element
        let mut v: T = gaussian(&mut rng);
        while v == T::zero() {
            v = gaussian(&mut rng);
        }
        x[i] = v;
    }
    Ok(x)
}

/// Length-`n` Bernoulli-Gaussian vector: entry `i` is nonzero with
/// probability `p`, nonzero values standard Gaussian.
pub fn generate_bernoulli_gaussian<T: Real>(n: usize, p: f64, seed: u64) -> Result<Array1<T>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability p={p} outside [0, 1]")));
    }
    let mut rng = rng::stream(seed);
    let mut x = Array1::zeros(n);
    for xi in x.iter_mut() {
        let keep = rng.random::<f64>() < p;
        if keep {
            let mut v: T = gaussian(&mut rng);
            while v == T::zero() {
                v = gaussian(&mut rng);
            }
            *xi = v;
        }
    }
    Ok(x)
}

/// `y + e` where `e` is a Gaussian direction rescaled so that
/// `‖y‖₂² / ‖e‖₂² = 10^(snr_db/10)` holds for this draw, not just in expectation.
pub fn add_noise_snr<T: Real>(y: &Array1<T>, snr_db: f64, seed: u64) -> Result<Array1<T>> {
    if !snr_db.is_finite() {
        return Err(Error::invalid("snr_db must be finite"));
    }
    let signal_power = norm2_sq(y.view()).as_f64();
    if signal_power == 0.0 {
        return Err(Error::invalid(
            "SNR undefined for a zero measurement vector",
        ));
    }
    let mut rng = rng::stream(seed);
    let dir: Vec<f64> = (0..y.len()).map(|_| rng.sample(StandardNormal)).collect();
    let dir_power: f64 = dir.iter().map(|v| v * v).sum();
    let target_power = signal_power / 10f64.powf(snr_db / 10.0);
    let scale = (target_power / dir_power).sqrt();
    Ok(y.iter()
        .zip(dir)
        .map(|(&yi, d)| yi + T::lit(d * scale))
        .collect())
}
