//! Cyclic Jacobi eigensolver for complex Hermitian matrices and a one-sided
//! (Hestenes) Jacobi routine for singular values.
//!
//! Both work on the same 2×2 complex rotation: with `b = a_pq = |b| e^{iφ}`
//! the rotation
//!
//! ```text
//! J = [[ c,        s e^{iφ} ],
//!      [ -s e^{-iφ}, c       ]]
//! ```
//!
//! annihilates the `(p, q)` entry of `J† A J`.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Hard cap on Jacobi sweeps. Cyclic Jacobi converges quadratically; fewer
/// than 15 sweeps suffice for every dimension up to several hundred.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

#[inline]
fn rotation(app: f64, aqq: f64, b: Complex64) -> (f64, f64, Complex64, f64) {
    let babs = b.norm();
    let e = b / babs;
    let theta = (aqq - app) / (2.0 * babs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, e, t * babs)
}

pub fn eigh(m: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.matrix().data().to_vec();
    let mut v = ComplexMatrix::identity(n).into_data();
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweep += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[p * n + q];
                let babs = b.norm();
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if babs <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt()
                    || babs < 1e-300
                {
                    continue;
                }
                rotated = true;
                let (c, s, e, shift) = rotation(app, aqq, b);
                let se = e * s;
                let sec = e.conj() * s;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let nkp = akp * c - sec * akq;
                    let nkq = se * akp + akq * c;
                    a[k * n + p] = nkp;
                    a[k * n + q] = nkq;
                    a[p * n + k] = nkp.conj();
                    a[q * n + k] = nkq.conj();
                }
                a[p * n + p] = Complex64::new(app - shift, 0.0);
                a[q * n + q] = Complex64::new(aqq + shift, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c - sec * vkq;
                    v[k * n + q] = se * vkp + vkq * c;
                }
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(EigenDecomposition { values, vectors })
}

/// Singular values of an arbitrary complex matrix, in descending order,
/// `min(rows, cols)` of them.
pub fn singular_values(l: &ComplexMatrix) -> Vec<f64> {
    // work on the orientation with at least as many rows as columns
    let a = if l.cols() > l.rows() { l.adjoint() } else { l.clone() };
    let (m, n) = (a.rows(), a.cols());
    // column-major copy so that column operations are contiguous
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)]).collect())
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let gabs = gamma.norm();
                if gabs <= f64::EPSILON * (alpha * beta).sqrt() || gabs < 1e-300 {
                    continue;
                }
                rotated = true;
                let (c, s, e, _) = rotation(alpha, beta, gamma);
                let se = e * s;
                let sec = e.conj() * s;
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let xi = *x;
                    let yj = *y;
                    *x = xi * c - sec * yj;
                    *y = se * xi + yj * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Largest eigenvalue magnitude, i.e. the operator norm.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Global rank threshold `dim · ‖M‖_∞ · 1e-12`.
    pub fn rank_tolerance(&self) -> f64 {
        self.dim() as f64 * self.norm() * 1e-12
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V†` for a real spectral function.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        HermitianOperator::from_spectrum(&mapped, &self.vectors)
    }

    /// Spectral function applied on the support only: eigenvalues at or
    /// below the rank tolerance map to zero.
    pub fn map_support(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let tol = self.rank_tolerance();
        self.map(|x| if x > tol { f(x) } else { 0.0 })
    }

    pub fn support_projector(&self) -> HermitianOperator {
        self.map_support(|_| 1.0)
    }

    pub fn rank(&self) -> usize {
        let tol = self.rank_tolerance();
        self.values.iter().filter(|&&x| x > tol).count()
    }

    /// Orthonormal basis of the support as the columns of a `dim × rank`
    /// isometry.
    pub fn support_isometry(&self) -> ComplexMatrix {
        let tol = self.rank_tolerance();
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.values[i] > tol).collect();
        ComplexMatrix::from_fn(self.dim(), idx.len(), |r, c| self.vectors[(r, idx[c])])
    }

    /// Sum of `f(λ)` over the `k` largest eigenvalues (clamped at zero).
    /// For use when the rank is known structurally: tiny but genuine
    /// eigenvalues then survive, which matters for small powers.
    pub fn trace_top(&self, k: usize, f: impl Fn(f64) -> f64) -> f64 {
        let n = self.dim();
        self.values[n - k.min(n)..].iter().map(|&x| f(x.max(0.0))).sum()
    }

    /// `V f(Λ) V†` on the `k` largest eigenvalues, zero elsewhere.
    pub fn map_top(&self, k: usize, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let cut = self.dim() - k.min(self.dim());
        let mapped: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &x)| if i >= cut { f(x.max(0.0)) } else { 0.0 })
            .collect();
        HermitianOperator::from_spectrum(&mapped, &self.vectors)
    }

    /// Sum of `f(λ)` over the eigenvalues above the rank tolerance.
    pub fn trace_support(&self, f: impl Fn(f64) -> f64) -> f64 {
        let tol = self.rank_tolerance();
        self.values.iter().filter(|&&x| x > tol).map(|&x| f(x)).sum()
    }
}
