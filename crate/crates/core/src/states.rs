//! States, ensembles and purifications, plus the seeded generators the
//! randomized checks draw from.
//!
//! Random inputs come from ChaCha8 streams: `substream(seed, index)` seeds
//! the generator from the master seed and selects stream `index`, so each
//! trial owns an independent, reproducible bit-stream regardless of how
//! trials are scheduled.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::io::MatrixJson;
use crate::matcore::{
    eigh, eigh_psd, mat_pow, partial_trace, ComplexMatrix, DimensionProfile, HermitianOperator,
    ONE, ZERO,
};

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `index` under master seed `seed`.
pub fn substream(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub const TRACE_TOL: f64 = 1e-10;

/// Positive semidefinite, unit-trace operator with a tensor-factor profile.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
    profile: DimensionProfile,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator, profile: DimensionProfile) -> Result<Self> {
        profile.check(op.dim())?;
        let tr = op.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotNormalized(tr));
        }
        let e = eigh(&op)?;
        if e.min() < -crate::matcore::PSD_TOL {
            return Err(Error::NotPsd(e.min()));
        }
        Ok(Self { op, profile })
    }

    /// Rescales a nonzero positive semidefinite operator to unit trace.
    pub fn normalized(op: HermitianOperator, profile: DimensionProfile) -> Result<Self> {
        let tr = op.trace();
        if tr <= 0.0 {
            return Err(Error::ZeroOperator);
        }
        Self::new(op.scale(1.0 / tr), profile)
    }

    pub fn single(op: HermitianOperator) -> Result<Self> {
        let n = op.dim();
        Self::new(op, DimensionProfile::single(n))
    }

    pub fn maximally_mixed(profile: DimensionProfile) -> Self {
        let n = profile.total();
        Self {
            op: HermitianOperator::identity(n).scale(1.0 / n as f64),
            profile,
        }
    }

    pub fn pure(psi: &PureState) -> Self {
        Self {
            op: HermitianOperator::projector(&psi.amplitudes),
            profile: psi.profile.clone(),
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn with_profile(self, profile: DimensionProfile) -> Result<Self> {
        profile.check(self.op.dim())?;
        Ok(Self { op: self.op, profile })
    }

    /// Reduced state on the listed factors.
    pub fn marginal(&self, keep: &[usize]) -> Result<Self> {
        let op = partial_trace(&self.op, &self.profile, keep)?;
        Ok(Self {
            op,
            profile: self.profile.select(keep),
        })
    }

    /// `(|A|, |B|)` of a bipartite state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.profile.factors() {
            [a, b] => Ok((*a, *b)),
            f => Err(Error::InvalidArgument(format!(
                "expected a bipartite profile, got {f:?}"
            ))),
        }
    }

    pub fn purity(&self) -> f64 {
        self.op.trace_product(&self.op)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_operator(&self.op, Some(&self.profile))
    }

    pub fn from_json(m: &MatrixJson) -> Result<Self> {
        Self::new(m.to_operator()?, m.profile()?)
    }
}

/// Unit vector on a composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    profile: DimensionProfile,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, profile: DimensionProfile) -> Result<Self> {
        profile.check(amplitudes.len())?;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, profile })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn profile(&self) -> &DimensionProfile {
        &self.profile
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::pure(self)
    }

    /// Reduced state on the listed factors.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.density().marginal(keep)
    }
}

/// Probability vector with matching states on a common space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() {
            return Err(Error::DimensionMismatch(probs.len(), states.len()));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidArgument("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(total));
        }
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch(d, s.dim()));
        }
        Ok(Self { probs, states })
    }

    /// Ensemble of pure states given by (not necessarily normalized) vectors.
    pub fn from_vectors(probs: Vec<f64>, vectors: &[Vec<Complex64>]) -> Result<Self> {
        let states = vectors
            .iter()
            .map(|v| {
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let psi = PureState::new(v.iter().map(|z| z / n).collect(), DimensionProfile::single(v.len()))?;
                Ok(DensityOperator::pure(&psi))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(probs, states)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Dimension of the common space `B`.
    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `Σ_x p_x ρ_x`
    pub fn average(&self) -> HermitianOperator {
        self.probs
            .iter()
            .zip(&self.states)
            .fold(HermitianOperator::zeros(self.dim()), |acc, (&p, s)| {
                acc.add(&s.op().scale(p))
            })
    }

    pub fn to_json(&self) -> EnsembleJson {
        EnsembleJson {
            probs: self.probs.clone(),
            states: self.states.iter().map(|s| MatrixJson::from_operator(s.op(), None)).collect(),
        }
    }

    pub fn from_json(e: &EnsembleJson) -> Result<Self> {
        let states = e
            .states
            .iter()
            .map(|m| DensityOperator::single(m.to_operator()?))
            .collect::<Result<Vec<_>>>()?;
        Self::new(e.probs.clone(), states)
    }
}

/// Ensemble file format: `{"probs": [...], "states": [<matrix objects>]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub probs: Vec<f64>,
    pub states: Vec<MatrixJson>,
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// `G G† / tr(G G†)` for a `dim × rank` matrix `G` of standard complex
/// Gaussians.
pub fn random_density_from(dim: usize, rank: usize, rng: &mut impl Rng) -> DensityOperator {
    assert!(rank >= 1 && rank <= dim, "rank must lie in 1..=dim");
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| complex_gaussian(rng));
    let ggh = HermitianOperator::hermitize(g.matmul(&g.adjoint()));
    let tr = ggh.trace();
    DensityOperator {
        op: ggh.scale(1.0 / tr),
        profile: DimensionProfile::single(dim),
    }
}

pub fn random_density(dim: usize, rank: usize, seed: u64) -> DensityOperator {
    random_density_from(dim, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Full-rank random state on a composite space.
pub fn random_state(profile: &DimensionProfile, rank: usize, rng: &mut impl Rng) -> DensityOperator {
    let rho = random_density_from(profile.total(), rank, rng);
    DensityOperator {
        op: rho.op,
        profile: profile.clone(),
    }
}

pub fn random_pure(profile: &DimensionProfile, rng: &mut impl Rng) -> PureState {
    let v: Vec<Complex64> = (0..profile.total()).map(|_| complex_gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    PureState {
        amplitudes: v.into_iter().map(|z| z / n).collect(),
        profile: profile.clone(),
    }
}

/// Unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let h = HermitianOperator::hermitize(g.add(&g.adjoint()));
    eigh(&h).expect("Jacobi converges on Gaussian matrices").vectors
}

/// Random probability vector bounded away from zero.
pub fn random_probs(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// Random ensemble of `n` members on `dim`, each member pure or full rank.
pub fn random_ensemble(n: usize, dim: usize, mixed: bool, rng: &mut impl Rng) -> Ensemble {
    let probs = random_probs(n, rng);
    let states = (0..n)
        .map(|_| random_density_from(dim, if mixed { dim } else { 1 }, rng))
        .collect();
    Ensemble { probs, states }
}

/// Canonical purification `(√ρ ⊗ 𝟙)|Ω⟩`, `|Ω⟩ = Σ_k |k⟩|k⟩`, on `ρ ⊗ copy`.
pub fn canonical_purification(rho: &DensityOperator) -> Result<PureState> {
    let n = rho.dim();
    let sqrt = mat_pow(rho.op(), 0.5)?;
    let mut amps = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            amps[i * n + k] = sqrt.matrix()[(i, k)];
        }
    }
    let mut factors = rho.profile().factors().to_vec();
    factors.extend_from_slice(rho.profile().factors());
    PureState::new(renormalize(amps), DimensionProfile::new(factors)?)
}

fn renormalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// `Σ_x p_x |x⟩⟨x| ⊗ ρ_x` with profile `(|X|, |B|)`.
pub fn cq_state(e: &Ensemble) -> DensityOperator {
    let (nx, d) = (e.len(), e.dim());
    let mut m = ComplexMatrix::zeros(nx * d, nx * d);
    for (x, (&p, s)) in e.probs.iter().zip(&e.states).enumerate() {
        for i in 0..d {
            for j in 0..d {
                m[(x * d + i, x * d + j)] = s.op().matrix()[(i, j)] * p;
            }
        }
    }
    DensityOperator {
        op: HermitianOperator::hermitize(m),
        profile: DimensionProfile::bipartite(nx, d),
    }
}

/// `|τ⟩ = Σ_x √p_x |x⟩_X |x⟩_X' |ξ_x⟩_BB'` with `ξ_x` the canonical
/// purification of `ρ_x`. Profile `(|X|, |X|, |B|, |B|)`.
pub fn classically_coherent_purification(e: &Ensemble) -> Result<PureState> {
    let (nx, d) = (e.len(), e.dim());
    let block = d * d;
    let mut amps = vec![ZERO; nx * nx * block];
    for (x, (&p, s)) in e.probs.iter().zip(&e.states).enumerate() {
        let xi = canonical_purification(s)?;
        let offset = (x * nx + x) * block;
        for (k, a) in xi.amplitudes.iter().enumerate() {
            amps[offset + k] = a * p.sqrt();
        }
    }
    PureState::new(
        renormalize(amps),
        DimensionProfile::new(vec![nx, nx, d, d])?,
    )
}

/// Generalized Gram matrix on `X' ⊗ B'`:
/// `G = Σ_{x,x'} √(p_x p_x') |x⟩⟨x'| ⊗ tr_B |ξ_x⟩⟨ξ_x'|`, row index the ket.
pub fn gram_matrix(e: &Ensemble) -> Result<HermitianOperator> {
    let (nx, d) = (e.len(), e.dim());
    let xis = e
        .states
        .iter()
        .map(canonical_purification)
        .collect::<Result<Vec<_>>>()?;
    let bb = DimensionProfile::bipartite(d, d);
    let mut g = ComplexMatrix::zeros(nx * d, nx * d);
    for x in 0..nx {
        for y in 0..nx {
            let w = (e.probs[x] * e.probs[y]).sqrt();
            let outer = ComplexMatrix::outer(&xis[x].amplitudes, &xis[y].amplitudes);
            let blk = outer.partial_trace(&bb, &[1])?;
            for i in 0..d {
                for j in 0..d {
                    g[(x * d + i, y * d + j)] = blk[(i, j)] * w;
                }
            }
        }
    }
    Ok(HermitianOperator::hermitize(g))
}

/// Ordinary Gram matrix `G_xx' = √(p_x p_x') ⟨ψ_x'|ψ_x⟩` for an ensemble of
/// pure states (trivial `B'`). Each `|ψ_x⟩` is the top eigenvector of `ρ_x`
/// with its first nonzero component made real positive.
pub fn pure_gram_matrix(e: &Ensemble) -> Result<HermitianOperator> {
    let vecs = e
        .states
        .iter()
        .map(|s| {
            let ev = eigh_psd(s.op())?;
            if ev.rank() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "ensemble member has rank {}, expected a pure state",
                    ev.rank()
                )));
            }
            let mut v = ev.vectors.column(ev.dim() - 1);
            if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
                let phase = lead.conj() / lead.norm();
                v.iter_mut().for_each(|z| *z *= phase);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = e.len();
    let g = ComplexMatrix::from_fn(n, n, |x, y| {
        let overlap: Complex64 = vecs[y].iter().zip(&vecs[x]).map(|(a, b)| a.conj() * b).sum();
        overlap * (e.probs[x] * e.probs[y]).sqrt()
    });
    Ok(HermitianOperator::hermitize(g))
}

/// `Σ_j q_j ρ_j ⊗ |b_j⟩⟨b_j|` for random full-rank `ρ_j` on `A` and a
/// random orthonormal basis `{b_j}` of `B`. Such states commute with
/// `𝟙 ⊗ f(ρ_B)` for every spectral function `f`.
pub fn random_block_state(da: usize, db: usize, rng: &mut impl Rng) -> DensityOperator {
    let u = random_unitary(db, rng);
    let q = random_probs(db, rng);
    let mut m = HermitianOperator::zeros(da * db);
    for (j, &qj) in q.iter().enumerate() {
        let rho_a = random_density_from(da, da, rng).op;
        let b = HermitianOperator::projector(&u.column(j));
        m = m.add(&crate::matcore::tensor(&rho_a, &b).scale(qj));
    }
    DensityOperator {
        op: m,
        profile: DimensionProfile::bipartite(da, db),
    }
}

/// `Σ_j q_j |ψ_j⟩⟨ψ_j|_{AB} ⊗ |j⟩⟨j|_F` for `k` random pure `ψ_j`, as a
/// state on `A | BF`.
pub fn random_flagged_mixture(da: usize, db: usize, k: usize, rng: &mut impl Rng) -> DensityOperator {
    let q = random_probs(k, rng);
    let mut m = HermitianOperator::zeros(da * db * k);
    for (j, &qj) in q.iter().enumerate() {
        let psi = random_pure(&DimensionProfile::bipartite(da, db), rng).density();
        let mut flag = vec![0.0; k];
        flag[j] = 1.0;
        m = m.add(&crate::matcore::tensor(&psi.op, &HermitianOperator::diag(&flag)).scale(qj));
    }
    DensityOperator {
        op: m,
        profile: DimensionProfile::bipartite(da, db * k),
    }
}

/// Commuting pair `(B, A₀)`: a full-rank density operator and a positive
/// definite operator with eigenvalues in `[0.2, 1]`, diagonal in the same
/// random basis.
pub fn random_commuting_pair(dim: usize, rng: &mut impl Rng) -> (HermitianOperator, HermitianOperator) {
    let v = random_unitary(dim, rng);
    let b = random_probs(dim, rng);
    let a: Vec<f64> = (0..dim).map(|_| rng.random_range(0.2..1.0)).collect();
    (
        HermitianOperator::from_spectrum(&b, &v),
        HermitianOperator::from_spectrum(&a, &v),
    )
}

/// Random Hermitian matrix with standard Gaussian entries (GUE-like).
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianOperator {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    HermitianOperator::hermitize(g.add(&g.adjoint()).scale_real(0.5))
}

/// `U = Σ_{x',x} |x − x'⟩⟨x| ⊗ |x'⟩⟨x'|` on `X ⊗ X'`, arithmetic mod `|X|`.
pub fn shift_unitary(dim_x: usize) -> ComplexMatrix {
    let n = dim_x;
    ComplexMatrix::from_fn(n * n, n * n, |r, c| {
        let (y, xp_row) = (r / n, r % n);
        let (x, xp_col) = (c / n, c % n);
        if xp_row == xp_col && y == (x + n - xp_col) % n {
            ONE
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{commutator_norm, tensor};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn random_density_properties() {
        let full = random_density(4, 4, 11);
        assert!(eigh(full.op()).unwrap().min() > 0.0);
        assert!((full.op().trace() - 1.0).abs() < 1e-14);
        let pure = random_density(3, 1, 12);
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        assert_eq!(random_density(3, 2, 99), random_density(3, 2, 99));
    }

    #[test]
    fn substreams_are_independent_and_reproducible() {
        let a: u64 = substream(7, 0).random();
        let b: u64 = substream(7, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, substream(7, 0).random::<u64>());
    }

    #[test]
    fn density_validation() {
        let bad = HermitianOperator::diag(&[0.7, 0.7]);
        assert!(matches!(DensityOperator::single(bad), Err(Error::NotNormalized(_))));
        let neg = HermitianOperator::diag(&[1.5, -0.5]);
        assert!(matches!(DensityOperator::single(neg), Err(Error::NotPsd(_))));
    }

    #[test]
    fn canonical_purification_examples() {
        let zero = DensityOperator::single(HermitianOperator::diag(&[1.0, 0.0])).unwrap();
        let psi = canonical_purification(&zero).unwrap();
        assert!((psi.amplitudes()[0] - ONE).norm() < 1e-15);
        assert!(psi.amplitudes()[1..].iter().all(|z| z.norm() < 1e-15));

        let mixed = DensityOperator::maximally_mixed(DimensionProfile::single(2));
        let psi = canonical_purification(&mixed).unwrap();
        let s = 0.5_f64.sqrt();
        let want = [c(s), ZERO, ZERO, c(s)];
        for (a, b) in psi.amplitudes().iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }

        let rho = random_density(3, 3, 5);
        let back = canonical_purification(&rho).unwrap().marginal(&[0]).unwrap();
        assert!(back.op().distance(rho.op()) < 1e-10);
    }

    #[test]
    fn cq_state_examples() {
        let rho0 = random_density(2, 2, 1);
        let single = Ensemble::new(vec![1.0], vec![rho0.clone()]).unwrap();
        let cq = cq_state(&single);
        assert!(cq.op().distance(rho0.op()) < 1e-15);
        assert_eq!(cq.profile().factors(), &[1, 2]);

        let d1 = DensityOperator::single(HermitianOperator::diag(&[0.3, 0.7])).unwrap();
        let d2 = DensityOperator::single(HermitianOperator::diag(&[0.9, 0.1])).unwrap();
        let diag = cq_state(&Ensemble::new(vec![0.5, 0.5], vec![d1, d2]).unwrap());
        let m = diag.op().matrix();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(m[(i, j)], ZERO);
                }
            }
        }

        let mut rng = substream(3, 0);
        let e = random_ensemble(3, 2, true, &mut rng);
        let cq = cq_state(&e);
        assert!(cq.marginal(&[1]).unwrap().op().distance(&e.average()) < 1e-14);
        // block diagonal: commutes with the X-register dephasing projectors
        for x in 0..3 {
            let mut d = vec![0.0; 3];
            d[x] = 1.0;
            let px = tensor(&HermitianOperator::diag(&d), &HermitianOperator::identity(2));
            assert!(commutator_norm(cq.op(), &px).unwrap() < 1e-14);
        }
    }

    #[test]
    fn classically_coherent_purification_examples() {
        let s = 0.5_f64.sqrt();
        // orthogonal pure members: amplitudes 1/√2 on |0 0 0 0⟩ and |1 1 1 1⟩
        let e = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![ZERO, ONE]]).unwrap();
        let tau = classically_coherent_purification(&e).unwrap();
        for (k, a) in tau.amplitudes().iter().enumerate() {
            let want = if k == 0 || k == 15 { s } else { 0.0 };
            assert!((a - c(want)).norm() < 1e-15, "k={k}");
        }

        // single pure member |ψ⟩: |0⟩|0⟩|ψ⟩|ψ̄⟩
        let psi = vec![c(0.6), Complex64::new(0.0, 0.8)];
        let e = Ensemble::from_vectors(vec![1.0], &[psi.clone()]).unwrap();
        let tau = classically_coherent_purification(&e).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = psi[i] * psi[j].conj();
                assert!((tau.amplitudes()[i * 2 + j] - want).norm() < 1e-14);
            }
        }

        let mut rng = substream(4, 0);
        let e = random_ensemble(3, 2, true, &mut rng);
        let tau = classically_coherent_purification(&e).unwrap();
        let xb = tau.marginal(&[0, 2]).unwrap();
        assert!(xb.op().distance(cq_state(&e).op()) < 1e-12);
    }

    #[test]
    fn gram_matrix_examples() {
        let s = 0.5_f64.sqrt();
        let e = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![c(s), c(s)]]).unwrap();
        let g = pure_gram_matrix(&e).unwrap();
        let want = HermitianOperator::new(ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j { c(0.5) } else { c(0.5 * s) }
        }))
        .unwrap();
        assert!(g.distance(&want) < 1e-14);

        let mut rng = substream(5, 0);
        let e = random_ensemble(3, 2, true, &mut rng);
        let g = gram_matrix(&e).unwrap();
        assert!((g.trace() - 1.0).abs() < 1e-12);
        assert!(eigh(&g).unwrap().min() > -1e-12);
        let blocks = partial_trace(&g, &DimensionProfile::bipartite(3, 2), &[0]).unwrap();
        for x in 0..3 {
            assert!((blocks.matrix()[(x, x)].re - e.probs()[x]).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_unitary_examples() {
        assert_eq!(shift_unitary(1), ComplexMatrix::identity(1));
        for n in 1..5 {
            let u = shift_unitary(n);
            let uu = u.adjoint().matmul(&u);
            assert!(uu.sub(&ComplexMatrix::identity(n * n)).max_abs() < 1e-15);
        }
    }

    #[test]
    fn shift_conjugation_exposes_gram_matrix() {
        for seed in 0..4 {
            let mut rng = substream(6, seed);
            let nx = 2 + seed as usize % 3;
            let e = random_ensemble(nx, 2, seed % 2 == 0, &mut rng);
            let tau = classically_coherent_purification(&e).unwrap().density();
            // τ_{XX'B'} on (X, X', B')
            let tau_xxb = tau.marginal(&[0, 1, 3]).unwrap();
            let u = shift_unitary(nx).kron(&ComplexMatrix::identity(2));
            let rotated = tau_xxb.op().conjugate_by(&u);
            let mut p0 = vec![0.0; nx];
            p0[0] = 1.0;
            let want = tensor(&HermitianOperator::diag(&p0), &gram_matrix(&e).unwrap());
            assert!(rotated.distance(&want) < 1e-12);
        }
    }
}
