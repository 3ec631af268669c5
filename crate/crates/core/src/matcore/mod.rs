//! Dense complex-matrix kernel.
//!
//! Everything downstream works with [`HermitianOperator`]s: the eigensolver,
//! matrix powers with generalized-inverse conventions, tensor products and
//! partial traces. All matrices are dense and row-major.

mod eigen;
pub mod io;

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{eigh, singular_values, EigenDecomposition, MAX_SWEEPS};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative asymmetry accepted by [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Absolute floor for negative eigenvalues that are clamped to zero when an
/// operator is treated as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(data.len(), rows * cols));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: n,
            cols: p,
            data: out,
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!((self.cols, self.rows), (other.rows, other.cols));
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.data[i * self.cols + k] * other.data[k * other.cols + i];
            }
        }
        acc
    }

    /// Partial trace of a square matrix over the factors not listed in
    /// `keep`. Kept factors stay in their original order.
    pub fn partial_trace(&self, profile: &DimensionProfile, keep: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        profile.check(self.rows)?;
        let factors = profile.factors();
        let mut keep_mask = vec![false; factors.len()];
        for &k in keep {
            if k >= factors.len() {
                return Err(Error::InvalidArgument(format!(
                    "kept factor {k} out of range for profile {factors:?}"
                )));
            }
            keep_mask[k] = true;
        }
        let strides_v = profile.strides();
        let strides = &strides_v;
        let kept: Vec<usize> = (0..factors.len()).filter(|&i| keep_mask[i]).collect();
        let traced: Vec<usize> = (0..factors.len()).filter(|&i| !keep_mask[i]).collect();
        // flat offsets of every multi-index over `axes`, first axis slowest
        let offsets = |axes: &[usize]| -> Vec<usize> {
            let mut offs = vec![0usize];
            for &ax in axes {
                offs = offs
                    .iter()
                    .flat_map(|&o| (0..factors[ax]).map(move |d| o + d * strides[ax]))
                    .collect();
            }
            offs
        };
        let kept_off = offsets(&kept);
        let traced_off = offsets(&traced);
        let n = kept_off.len();
        let mut out = Self::zeros(n, n);
        for (i, &ri) in kept_off.iter().enumerate() {
            for (j, &cj) in kept_off.iter().enumerate() {
                let mut acc = ZERO;
                for &t in &traced_off {
                    acc += self[(ri + t, cj + t)];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Ordered subsystem dimensions `(|A|, |B|, …)` of a composite space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct DimensionProfile {
    factors: Vec<usize>,
}

impl DimensionProfile {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "dimension profile needs positive factors, got {factors:?}"
            )));
        }
        Ok(Self { factors })
    }

    pub fn single(dim: usize) -> Self {
        Self { factors: vec![dim] }
    }

    pub fn bipartite(a: usize, b: usize) -> Self {
        Self { factors: vec![a, b] }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if self.total() != dim {
            return Err(Error::InvalidProfile {
                profile: self.factors.clone(),
                dim,
            });
        }
        Ok(())
    }

    /// Row-major strides of each factor.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.factors[i + 1];
        }
        s
    }

    /// Profile restricted to the listed factors, in order.
    pub fn select(&self, keep: &[usize]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        Self {
            factors: keep.iter().map(|&k| self.factors[k]).collect(),
        }
    }
}

/// Square complex matrix certified Hermitian. The stored matrix is exactly
/// `(M + M†)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Certifies `‖M − M†‖ ≤ 1e-12 · max(1, ‖M‖)` and hermitizes.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows, m.cols));
        }
        let asym = m.sub(&m.adjoint()).frobenius_norm();
        let scale = m.frobenius_norm().max(1.0);
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::hermitize(m))
    }

    /// Hermitian part of a square matrix, without certification. For
    /// matrices that are Hermitian up to rounding by construction.
    pub fn hermitize(m: ComplexMatrix) -> Self {
        assert!(m.is_square(), "hermitize needs a square matrix");
        let n = m.rows;
        let matrix = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Self { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(n, n),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            matrix: ComplexMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    /// `V diag(λ) V†` for a matrix `V` whose columns are orthonormal (or any
    /// `n × k` matrix with `k = λ.len()`).
    pub fn from_spectrum(values: &[f64], vectors: &ComplexMatrix) -> Self {
        let n = vectors.rows();
        assert_eq!(vectors.cols(), values.len());
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in values.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = vectors[(i, k)] * lam;
                if vik == ZERO {
                    continue;
                }
                for j in i..n {
                    out[(i, j)] += vik * vectors[(j, k)].conj();
                }
            }
        }
        for i in 0..n {
            out[(i, i)].im = 0.0;
            for j in 0..i {
                out[(i, j)] = out[(j, i)].conj();
            }
        }
        Self { matrix: out }
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(psi: &[Complex64]) -> Self {
        Self::hermitize(ComplexMatrix::outer(psi, psi))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn add(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &HermitianOperator) -> Self {
        Self {
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale_real(s),
        }
    }

    /// `X M X†`, which stays Hermitian.
    pub fn conjugate_by(&self, x: &ComplexMatrix) -> Self {
        Self::hermitize(x.matmul(&self.matrix).matmul(&x.adjoint()))
    }

    /// `N M N` for Hermitian `N`.
    pub fn sandwich(&self, outer: &HermitianOperator) -> Self {
        Self::hermitize(outer.matrix.matmul(&self.matrix).matmul(&outer.matrix))
    }

    /// `Re tr(M N)`
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        self.matrix.trace_product(&other.matrix).re
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(self)
    }

    pub fn distance(&self, other: &HermitianOperator) -> f64 {
        self.matrix.sub(&other.matrix).max_abs()
    }
}

/// Eigendecomposition of an operator asserted positive semidefinite:
/// eigenvalues down to `-1e-10 · max(1, ‖M‖)` are clamped to zero.
pub fn eigh_psd(m: &HermitianOperator) -> Result<EigenDecomposition> {
    let mut e = eigh(m)?;
    let tol = PSD_TOL * e.norm().max(1.0);
    if e.min() < -tol {
        return Err(Error::NotPsd(e.min()));
    }
    for v in &mut e.values {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(e)
}

/// `M^p` of a positive semidefinite operator. Eigenvalues at or below the
/// rank tolerance `dim · ‖M‖_∞ · 1e-12` map to zero for every `p`, so
/// negative powers are generalized inverses and `p = 0` is the support
/// projector.
pub fn mat_pow(m: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
    Ok(eigh_psd(m)?.map_support(|x| x.powf(p)))
}

/// Lower-triangular `L` with `L L† = M` for positive definite `M`.
pub fn cholesky(m: &HermitianOperator) -> Result<ComplexMatrix> {
    let n = m.dim();
    let a = m.matrix();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPsd(d));
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Exponent of a Schatten (quasi-)norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schatten {
    P(f64),
    Inf,
}

impl Schatten {
    pub fn from_f64(p: f64) -> Self {
        if p.is_infinite() {
            Schatten::Inf
        } else {
            Schatten::P(p)
        }
    }
}

/// Schatten `p`-(quasi-)norm from singular values. Singular values below
/// `max(rows, cols) · s_max · 1e-14` are treated as exact zeros, which
/// matters for `p < 1`.
pub fn schatten_norm(l: &ComplexMatrix, p: Schatten) -> Result<f64> {
    schatten_from_values(&singular_values(l), l.rows().max(l.cols()), p)
}

/// Schatten norm of a Hermitian operator from its eigenvalue moduli.
pub fn schatten_norm_hermitian(m: &HermitianOperator, p: Schatten) -> Result<f64> {
    let e = eigh(m)?;
    let s: Vec<f64> = e.values.iter().map(|v| v.abs()).collect();
    schatten_from_values(&s, m.dim(), p)
}

fn schatten_from_values(s: &[f64], dim: usize, p: Schatten) -> Result<f64> {
    let smax = s.iter().fold(0.0_f64, |m, &x| m.max(x));
    match p {
        Schatten::Inf => Ok(smax),
        Schatten::P(p) if p > 0.0 => {
            let cut = dim as f64 * smax * 1e-14;
            let sum: f64 = s.iter().filter(|&&x| x > cut).map(|x| x.powf(p)).sum();
            Ok(sum.powf(1.0 / p))
        }
        Schatten::P(p) => Err(Error::InvalidArgument(format!(
            "Schatten exponent must be positive, got {p}"
        ))),
    }
}

pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator {
        matrix: a.matrix.kron(&b.matrix),
    }
}

/// `𝟙_n ⊗ M`
pub fn identity_tensor(n: usize, m: &HermitianOperator) -> HermitianOperator {
    tensor(&HermitianOperator::identity(n), m)
}

pub fn partial_trace(
    m: &HermitianOperator,
    profile: &DimensionProfile,
    keep: &[usize],
) -> Result<HermitianOperator> {
    Ok(HermitianOperator::hermitize(
        m.matrix.partial_trace(profile, keep)?,
    ))
}

/// `‖MN − NM‖_∞`
pub fn commutator_norm(m: &HermitianOperator, n: &HermitianOperator) -> Result<f64> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch(m.dim(), n.dim()));
    }
    let mn = m.matrix.matmul(&n.matrix);
    let comm = mn.sub(&mn.adjoint());
    // [M,N] is anti-Hermitian; i[M,N] is Hermitian with the same norm
    let herm = HermitianOperator::hermitize(comm.scale(Complex64::new(0.0, 1.0)));
    schatten_norm_hermitian(&herm, Schatten::Inf)
}
