//! Independent oracles shared by the integration tests and the acceptance
//! runner. None of them calls the closed-form operators under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use ndarray::{Array1, Array2};
use qista::{Instance, InstanceSpec, NoiseLevel, Preset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact-sparse instance with an unnormalized Gaussian matrix.
pub fn instance(m: usize, n: usize, k: usize, seed: u64) -> Instance {
    Instance::generate(&Preset::Exact1024.instance_spec(m, n, k, NoiseLevel::None, seed)).unwrap()
}

pub fn instance_from(spec: &InstanceSpec) -> Instance {
    Instance::generate(spec).unwrap()
}

pub fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn norm(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a convex function on `[lo, hi]`.
///
/// `less(a, b)` decides `f(a) < f(b)`; callers pass a cancellation-free
/// form of the difference so the bracket can shrink to machine precision.
fn golden(mut lo: f64, mut hi: f64, less: impl Fn(f64, f64) -> bool) -> f64 {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if less(c, d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - INV_PHI * (hi - lo);
        d = lo + INV_PHI * (hi - lo);
    }
    0.5 * (lo + hi)
}

/// `argmin_z ½(z − r)² + θ|z|` by golden-section search on `z ≤ 0` and on
/// `z ≥ 0`, keeping the better of the two.
pub fn prox1d_oracle(r: f64, theta: f64) -> f64 {
    let f = |z: f64| 0.5 * (z - r) * (z - r) + theta * z.abs();
    let span = r.abs() + theta + 1.0;
    // on a half-line f is a quadratic; f(a) − f(b) = (a − b)·((a + b)/2 − r ± θ)
    let pos = golden(0.0, span, |a, b| {
        (a - b) * (0.5 * (a + b) - r + theta) < 0.0
    });
    let neg = golden(-span, 0.0, |a, b| {
        (a - b) * (0.5 * (a + b) - r - theta) < 0.0
    });
    if f(pos) <= f(neg) {
        pos
    } else {
        neg
    }
}

/// `Φ(z) = ½‖z − r‖² + Σ wᵢ|(ψz + b)ᵢ|` for 2-vectors.
pub fn prox2d_objective(
    z: [f64; 2],
    r: [f64; 2],
    psi: [[f64; 2]; 2],
    b: [f64; 2],
    w: [f64; 2],
) -> f64 {
    let quad = 0.5 * ((z[0] - r[0]).powi(2) + (z[1] - r[1]).powi(2));
    let pen: f64 = (0..2)
        .map(|i| w[i] * (psi[i][0] * z[0] + psi[i][1] * z[1] + b[i]).abs())
        .sum();
    quad + pen
}

/// Brute-force minimizer of `Φ` in two dimensions: a fine grid around `r`
/// followed by coordinate descent along a direction set (the axes, the
/// diagonals, and the rows of `ψ` with their normals, so kink lines of the
/// ℓ1 term can be followed) with step halving.
pub fn prox2d_oracle(r: [f64; 2], psi: [[f64; 2]; 2], b: [f64; 2], w: [f64; 2]) -> [f64; 2] {
    let f = |z: [f64; 2]| prox2d_objective(z, r, psi, b, w);
    let reach = 1.0
        + (psi[0][0].powi(2) + psi[0][1].powi(2) + psi[1][0].powi(2) + psi[1][1].powi(2)).sqrt()
            * (w[0] + w[1]);
    let steps = 400;
    let h = 2.0 * reach / steps as f64;
    let mut best = r;
    let mut best_f = f(r);
    for i in 0..=steps {
        for j in 0..=steps {
            let z = [r[0] - reach + i as f64 * h, r[1] - reach + j as f64 * h];
            let v = f(z);
            if v < best_f {
                best = z;
                best_f = v;
            }
        }
    }
    let mut dirs: Vec<[f64; 2]> = vec![[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]];
    for row in psi {
        let len = (row[0] * row[0] + row[1] * row[1]).sqrt();
        if len > 0.0 {
            dirs.push([row[0] / len, row[1] / len]);
            dirs.push([-row[1] / len, row[0] / len]);
        }
    }
    let mut step = h;
    while step > 1e-13 {
        let mut moved = true;
        while moved {
            moved = false;
            for d in &dirs {
                for s in [step, -step] {
                    let z = [best[0] + s * d[0], best[1] + s * d[1]];
                    let v = f(z);
                    if v < best_f {
                        best = z;
                        best_f = v;
                        moved = true;
                    }
                }
            }
        }
        step *= 0.5;
    }
    best
}

/// `argmin_x ½(y − a·x)² + λ‖x‖₁` over `x ∈ ℝ²` by grid search with
/// repeated zooming around the best cell.
pub fn lasso2_oracle(a: [f64; 2], y: f64, lambda: f64) -> [f64; 2] {
    let f = |x: [f64; 2]| {
        let res = y - a[0] * x[0] - a[1] * x[1];
        0.5 * res * res + lambda * (x[0].abs() + x[1].abs())
    };
    // ½y² bounds λ‖x*‖₁
    let mut half = 0.5 * y * y / lambda + 1.0;
    let mut center = [0.0, 0.0];
    let steps = 80;
    while half > 1e-10 {
        let h = 2.0 * half / steps as f64;
        let mut best = center;
        let mut best_f = f(center);
        for i in 0..=steps {
            for j in 0..=steps {
                let x = [
                    center[0] - half + i as f64 * h,
                    center[1] - half + j as f64 * h,
                ];
                let v = f(x);
                if v < best_f {
                    best = x;
                    best_f = v;
                }
            }
        }
        center = best;
        half = 8.0 * h;
    }
    center
}

/// Sparsest exact solution of `Ax = y` by enumerating supports of growing
/// size and solving least squares on each (SVD).
pub fn l0_oracle(a: &Array2<f64>, y: &Array1<f64>) -> Array1<f64> {
    let (m, n) = a.dim();
    let ynorm = norm(y);
    let yv = DVector::from_iterator(m, y.iter().copied());
    for size in 1..=m {
        let mut best: Option<(f64, Vec<usize>, DVector<f64>)> = None;
        for support in combinations(n, size) {
            let sub = DMatrix::from_fn(m, size, |i, j| a[[i, support[j]]]);
            let sol = sub.clone().svd(true, true).solve(&yv, 1e-14).unwrap();
            let res = (&yv - &sub * &sol).norm();
            if best.as_ref().is_none_or(|(r, _, _)| res < *r) {
                best = Some((res, support, sol));
            }
        }
        let (res, support, sol) = best.unwrap();
        if res <= 1e-9 * ynorm {
            let mut x = Array1::zeros(n);
            for (j, &i) in support.iter().enumerate() {
                x[i] = sol[j];
            }
            return x;
        }
    }
    unreachable!("a generic m×n matrix with m < n reaches y with m columns")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest singular value from a dense symmetric eigendecomposition of `AᵀA`.
pub fn spectral_norm_oracle(a: &Array2<f64>) -> f64 {
    let (m, n) = a.dim();
    let dm = DMatrix::from_fn(m, n, |i, j| a[[i, j]]);
    let gram = dm.transpose() * &dm;
    gram.symmetric_eigenvalues().max().sqrt()
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub mod criteria;
