//! Sparse recovery from underdetermined linear measurements `y = A·x0`.
//!
//! The centrepiece is QISTA, a proximal-gradient iteration for the
//! non-convex ℓq-regularized least-squares problem (`0 < q ≤ 1`) whose
//! per-component threshold `λ / (|rᵢ| + εᵢ)^(1−q)` shrinks large entries
//! less than small ones. Around it:
//!
//! - [`problem`]: seeded Gaussian instances (exact-sparse or
//!   Bernoulli-Gaussian ground truth, optional noise at an exact SNR);
//! - [`prox`]: soft / adaptive / hard thresholding and the proximal
//!   operator of a weighted ℓ1 penalty composed with a tight frame;
//! - [`solvers`]: ISTA, FISTA, IHT, QISTA, QISTA with momentum over all
//!   previous layers, and the fixed-depth unfolded forward pass;
//! - [`bench`]: success-rate sweeps and convergence traces with CSV output;
//! - [`io`]: the instance text format and the layer-parameter JSON file.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, with `*32` variants for `f32`.
//!
//! ```
//! use qista::{InstanceSpec, NoiseLevel, Preset, ProblemInstance, solvers};
//!
//! let spec = Preset::Exact1024.instance_spec(32, 64, 2, NoiseLevel::None, 7);
//! let inst = ProblemInstance::<f64>::generate(&spec).unwrap();
//! let mut cfg = Preset::Exact1024.solver_config(&inst).unwrap();
//! cfg.max_iter = 50;
//! let rec = solvers::solve_qista(&inst, &cfg).unwrap();
//! assert_eq!(rec.report.iterations, 50);
//! ```

pub mod bench;
mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod objective;
pub mod preset;
pub mod problem;
pub mod prox;
pub mod rng;
mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::spectral_norm;
pub use metrics::{relative_error, snr_db, SNR_CAP_DB};
pub use objective::{functional_h, objective_approx, objective_lasso, objective_lq};
pub use preset::Preset;
pub use problem::{
    add_noise_snr, generate_bernoulli_gaussian, generate_gaussian_matrix, generate_k_sparse_signal,
    InstanceSpec, NoiseLevel, ProblemInstance, SignalModel,
};
pub use prox::{
    generalized_prox, hard_threshold_keep_k, qista_threshold, soft_threshold, ThresholdRule,
};
pub use scalar::Real;
pub use solvers::{
    IterateTrace, LayerParams, RecoveryReport, SolverConfig, SolverKind, UnfoldedModel,
};

pub type Instance = ProblemInstance<f64>;
pub type Instance32 = ProblemInstance<f32>;
pub type Config = SolverConfig<f64>;
pub type Config32 = SolverConfig<f32>;
pub type Report = RecoveryReport<f64>;
pub type Report32 = RecoveryReport<f32>;
pub type Trace = IterateTrace<f64>;
pub type Trace32 = IterateTrace<f32>;
pub type Model = UnfoldedModel<f64>;
pub type Model32 = UnfoldedModel<f32>;
