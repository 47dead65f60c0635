//! Symmetric eigensolvers: cyclic Jacobi for dense matrices, and a
//! shift-and-invert subspace iteration for the lowest eigenpairs of the
//! narrow-band Fock matrices.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fock::FockOperator;
use super::SpectraError;

pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// vectors[i] is the unit eigenvector of values[i].
    pub vectors: Vec<Vec<f64>>,
}

fn sorted(values: Vec<f64>, vectors: Vec<Vec<f64>>) -> Eigen {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Eigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| vectors[i].clone()).collect(),
    }
}

/// Cyclic Jacobi on a dense row-major symmetric n×n matrix. Stops once the
/// off-diagonal Frobenius norm is below 1e-12·‖M‖_F.
pub fn jacobi_eigen(mat: &[f64], n: usize) -> Result<Eigen, SpectraError> {
    assert_eq!(mat.len(), n * n, "matrix must be n×n");
    let mut a = mat.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..=JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * norm {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            let vectors = (0..n)
                .map(|c| (0..n).map(|r| v[r * n + c]).collect())
                .collect();
            return Ok(sorted(values, vectors));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(SpectraError::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Full eigendecomposition by cyclic Jacobi.
pub fn sym_eig(op: &FockOperator) -> Result<Eigen, SpectraError> {
    jacobi_eigen(&op.matrix, op.size())
}

/// Symmetric band matrix in lower storage: rows[i][d] = A[i][i − d].
struct Band {
    n: usize,
    b: usize,
    data: Vec<f64>,
}

impl Band {
    fn at(&self, i: usize, d: usize) -> f64 {
        self.data[i * (self.b + 1) + d]
    }

    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            y[i] += self.at(i, 0) * x[i];
            for d in 1..=self.b.min(i) {
                let a = self.at(i, d);
                y[i] += a * x[i - d];
                y[i - d] += a * x[i];
            }
        }
        y
    }

    fn inf_norm(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        for i in 0..self.n {
            rows[i] += self.at(i, 0).abs();
            for d in 1..=self.b.min(i) {
                let a = self.at(i, d).abs();
                rows[i] += a;
                rows[i - d] += a;
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Cholesky factor of A − σI, or None when it is not positive definite.
    fn cholesky(&self, sigma: f64) -> Option<Band> {
        let (n, b) = (self.n, self.b);
        let mut l = vec![0.0; n * (b + 1)];
        for i in 0..n {
            for d in (0..=b.min(i)).rev() {
                let j = i - d;
                let mut s = self.at(i, d) - if d == 0 { sigma } else { 0.0 };
                let k0 = i.saturating_sub(b);
                for k in k0..j {
                    s -= l[i * (b + 1) + (i - k)] * l[j * (b + 1) + (j - k)];
                }
                if d == 0 {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l[i * (b + 1)] = s.sqrt();
                } else {
                    l[i * (b + 1) + d] = s / l[j * (b + 1)];
                }
            }
        }
        Some(Band { n, b, data: l })
    }

    /// Solves L Lᵀ y = x with self = L.
    fn chol_solve(&self, x: &[f64]) -> Vec<f64> {
        let (n, b) = (self.n, self.b);
        let mut y = x.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for d in 1..=b.min(i) {
                s -= self.at(i, d) * y[i - d];
            }
            y[i] = s / self.at(i, 0);
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for d in 1..=b.min(n - 1 - i) {
                s -= self.at(i + d, d) * y[i + d];
            }
            y[i] = s / self.at(i, 0);
        }
        y
    }
}

/// Interleaved position 2n + s of spin-major index s·dim + n.
fn interleave(op: &FockOperator) -> (Vec<usize>, Band) {
    let dim = op.dim_fock;
    let n = op.size();
    // perm[q] = spin-major index of interleaved position q
    let perm: Vec<usize> = (0..n).map(|q| (q % 2) * dim + q / 2).collect();
    let mut pos = vec![0; n];
    for (q, &i) in perm.iter().enumerate() {
        pos[i] = q;
    }
    let mut b = 0;
    for i in 0..n {
        for j in 0..n {
            if op.matrix[i * n + j] != 0.0 {
                b = b.max(pos[i].abs_diff(pos[j]));
            }
        }
    }
    let mut data = vec![0.0; n * (b + 1)];
    for q in 0..n {
        for d in 0..=b.min(q) {
            let (i, j) = (perm[q], perm[q - d]);
            data[q * (b + 1) + d] = 0.5 * (op.matrix[i * n + j] + op.matrix[j * n + i]);
        }
    }
    (perm, Band { n, b, data })
}

/// Below this size the Jacobi solver is used directly.
pub const JACOBI_MAX_DIM: usize = 64;
/// Below this size a dense Householder/QR solve beats the band iteration.
pub const DENSE_MAX_DIM: usize = 320;

fn dense_lowest(op: &FockOperator, k: usize) -> Eigen {
    let n = op.size();
    let e = DMatrix::from_row_slice(n, n, &op.matrix).symmetric_eigen();
    let values: Vec<f64> = e.eigenvalues.iter().copied().collect();
    let vectors: Vec<Vec<f64>> = (0..n)
        .map(|c| e.eigenvectors.column(c).iter().copied().collect())
        .collect();
    let mut s = sorted(values, vectors);
    s.values.truncate(k);
    s.vectors.truncate(k);
    s
}

const SUBSPACE_MAX_ITER: usize = 1000;
const SUBSPACE_SEED: u64 = 0x5eed_0002;

/// The lowest k eigenpairs of a Fock matrix whose spectrum lies above
/// `lower_bound`. The matrix is permuted to interleaved (n, s) order, where it
/// is narrow-banded, and (M − σI)⁻² with σ < lower_bound is iterated on a
/// block of k + max(k, 10) vectors with a Rayleigh–Ritz step after each
/// application. Small problems go to Jacobi or a dense solve.
pub fn lowest_eigenpairs(
    op: &FockOperator,
    k: usize,
    lower_bound: f64,
) -> Result<Eigen, SpectraError> {
    let n = op.size();
    let p = (k + k.max(10)).min(n);
    if n <= JACOBI_MAX_DIM {
        let e = sym_eig(op)?;
        let k = k.min(n);
        return Ok(Eigen {
            values: e.values[..k].to_vec(),
            vectors: e.vectors[..k].to_vec(),
        });
    }
    if 2 * p >= n || n <= DENSE_MAX_DIM {
        return Ok(dense_lowest(op, k));
    }
    let (perm, band) = interleave(op);
    let norm = band.inf_norm().max(1.0);
    let mut sigma = lower_bound - 1.0;
    let chol = loop {
        if let Some(c) = band.cholesky(sigma) {
            break c;
        }
        sigma -= sigma.abs() + norm;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SUBSPACE_SEED);
    let mut x = DMatrix::from_fn(n, p, |_, _| rng.gen_range(-1.0..1.0));
    let tol = 1e-13 * norm;
    let (mut best, mut stall) = (f64::INFINITY, 0);
    for _it in 0..SUBSPACE_MAX_ITER {
        let mut y = DMatrix::zeros(n, p);
        for c in 0..p {
            let once = chol.chol_solve(x.column(c).as_slice());
            y.set_column(c, &DVector::from_vec(chol.chol_solve(&once)));
        }
        let y = y.qr().q();
        let mut hy = DMatrix::zeros(n, p);
        for c in 0..p {
            hy.set_column(c, &DVector::from_vec(band.matvec(y.column(c).as_slice())));
        }
        let gm = y.transpose() * &hy;
        let gm = (&gm + gm.transpose()) * 0.5;
        let small = gm.symmetric_eigen();
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| small.eigenvalues[a].total_cmp(&small.eigenvalues[b]));
        let w = DMatrix::from_fn(p, p, |r, c| small.eigenvectors[(r, order[c])]);
        let theta: Vec<f64> = order.iter().map(|&i| small.eigenvalues[i]).collect();
        x = &y * &w;
        let hx = &hy * w.columns(0, k);
        let worst = (0..k)
            .map(|i| (hx.column(i) - x.column(i) * theta[i]).norm())
            .fold(0.0, f64::max);
        let done = if worst <= tol {
            true
        } else if worst < 0.5 * best {
            best = worst;
            stall = 0;
            false
        } else {
            stall += 1;
            // rounding floor reached
            stall >= 5 && worst <= 1e-9 * norm
        };
        if done {
            let vecs: Vec<Vec<f64>> = (0..k)
                .map(|i| x.column(i).iter().copied().collect())
                .collect();
            return Ok(finish(&perm, &theta[..k], &vecs));
        }
    }
    Err(SpectraError::NoConvergence {
        sweeps: SUBSPACE_MAX_ITER,
    })
}

fn finish(perm: &[usize], values: &[f64], vecs: &[Vec<f64>]) -> Eigen {
    let vectors = vecs
        .iter()
        .map(|v| {
            let mut out = vec![0.0; v.len()];
            for (q, &i) in perm.iter().enumerate() {
                out[i] = v[q];
            }
            out
        })
        .collect();
    Eigen {
        values: values.to_vec(),
        vectors,
    }
}
