//! Named parameter presets for the two experimental regimes.

use std::fmt;
use std::str::FromStr;

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::problem::{InstanceSpec, NoiseLevel, ProblemInstance, SignalModel};
use crate::scalar::Real;
use crate::solvers::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `n = 1024`, `m = 256`, unnormalized `N(0, 1)` matrix, exactly
    /// `k`-sparse signal; `β = 1/‖A‖₂²`, `λ = 1e-4·β`, `q = 0.05`, `ε = 𝟙`.
    Exact1024,
    /// `n = 500`, `m = 250`, `N(0, 1/m)` matrix, Bernoulli-Gaussian signal
    /// with `p = k/n` (default `k = 50`); same `β`, `λ`, `q`, with
    /// `ε = 0.1·𝟙` and momentum `γ = 0.1`.
    Bg500,
}

impl Preset {
    pub const ALL: [Preset; 2] = [Preset::Exact1024, Preset::Bg500];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Exact1024 => "exact-1024",
            Preset::Bg500 => "bg-500",
        }
    }

    /// `(m, n)` of the regime.
    pub fn dims(self) -> (usize, usize) {
        match self {
            Preset::Exact1024 => (256, 1024),
            Preset::Bg500 => (250, 500),
        }
    }

    pub fn default_k(self) -> usize {
        match self {
            Preset::Exact1024 => 94,
            Preset::Bg500 => 50,
        }
    }

    pub fn column_normalized(self) -> bool {
        matches!(self, Preset::Bg500)
    }

    pub fn signal(self) -> SignalModel {
        match self {
            Preset::Exact1024 => SignalModel::ExactSparse,
            Preset::Bg500 => SignalModel::BernoulliGaussian,
        }
    }

    pub fn instance_spec(
        self,
        m: usize,
        n: usize,
        k: usize,
        noise: NoiseLevel,
        seed: u64,
    ) -> InstanceSpec {
        InstanceSpec {
            m,
            n,
            k,
            column_normalized: self.column_normalized(),
            signal: self.signal(),
            noise,
            seed,
        }
    }

    /// Solver parameters for `inst`; `β` depends on the instance's matrix.
    pub fn solver_config<T: Real>(self, inst: &ProblemInstance<T>) -> Result<SolverConfig<T>> {
        let mut cfg = SolverConfig::standard(inst)?;
        if self == Preset::Bg500 {
            cfg.eps = Array1::from_elem(inst.n(), T::lit(0.1));
            cfg.gamma = T::lit(0.1);
        }
        Ok(cfg)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown preset `{s}` (expected exact-1024 or bg-500)"
                ))
            })
    }
}
