//! Pretty good fidelity, fidelity and trace distance; the pretty good
//! measurement and guessing probabilities; singlet fractions; and the
//! commutator criteria for when the pretty good quantities are optimal.

use serde::{Deserialize, Serialize};

use crate::divergence::{q_alpha, DivergenceFamily, COMMUTE_TOL};
use crate::entropy::{h_down, h_up, ChainReport, OPTIMIZER_TOL};
use crate::error::{Error, Result};
use crate::matcore::{
    commutator_norm, eigh, eigh_psd, identity_tensor, mat_pow, partial_trace, singular_values, ComplexMatrix,
    DimensionProfile, HermitianOperator,
};
use crate::report::InequalityReport;
use crate::sdpsolve::{solve_guessing, solve_min_entropy};
use crate::states::{canonical_purification, cq_state, gram_matrix, DensityOperator, Ensemble};

/// Slack for the fidelity and trace-distance chains.
pub const BOUND_TOL: f64 = 1e-9;
/// Slack for chains involving an SDP value.
pub const SDP_BOUND_TOL: f64 = 1e-8;
/// Probability / fraction difference under which two values count as equal.
pub const GAP_TOL: f64 = 1e-6;
pub const POVM_TOL: f64 = 1e-9;

/// `F_pg(ρ, σ) = tr √ρ √σ`
pub fn pretty_good_fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    q_alpha(DivergenceFamily::Petz, rho.op(), sigma.op(), 0.5)
}

/// `⟨Ψ_a|Ψ_b⟩` for the canonical purifications `(√M ⊗ 𝟙)|Ω⟩` of two
/// positive operators, computed entrywise.
pub fn purification_overlap(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let (sa, sb) = (mat_pow(a, 0.5)?, mat_pow(b, 0.5)?);
    Ok(sa
        .matrix()
        .data()
        .iter()
        .zip(sb.matrix().data())
        .map(|(x, y)| (x.conj() * y).re)
        .sum())
}

/// `F(ρ, σ) = ‖√ρ √σ‖₁`
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let prod = mat_pow(rho.op(), 0.5)?.matrix().matmul(mat_pow(sigma.op(), 0.5)?.matrix());
    Ok(singular_values(&prod).iter().sum())
}

/// `½ ‖ρ − σ‖₁`
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let e = eigh(&rho.op().sub(sigma.op()))?;
    Ok(0.5 * e.values.iter().map(|v| v.abs()).sum::<f64>())
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MeasureReport {
    pub f_pg: f64,
    pub f: f64,
    pub delta: f64,
    /// `F_pg ≤ F ≤ √F_pg`
    pub fidelities: ChainReport,
    /// `1 − F_pg ≤ δ ≤ √(1 − F_pg²)`
    pub pg_distance: ChainReport,
    /// `1 − F ≤ δ ≤ √(1 − F²)`
    pub distance: ChainReport,
}

impl MeasureReport {
    pub fn holds(&self) -> bool {
        self.fidelities.holds() && self.pg_distance.holds() && self.distance.holds()
    }

    pub fn worst_slack(&self) -> f64 {
        self.fidelities
            .worst_slack()
            .min(self.pg_distance.worst_slack())
            .min(self.distance.worst_slack())
    }
}

fn chain(lo: f64, mid: f64, hi: f64, tol: f64) -> ChainReport {
    ChainReport {
        lower: InequalityReport::le(lo, mid, tol),
        upper: InequalityReport::le(mid, hi, tol),
    }
}

pub fn check_fidelity_bounds(rho: &DensityOperator, sigma: &DensityOperator) -> Result<MeasureReport> {
    let f_pg = pretty_good_fidelity(rho, sigma)?;
    let f = fidelity(rho, sigma)?;
    let delta = trace_distance(rho, sigma)?;
    let root = |x: f64| x.max(0.0).sqrt();
    Ok(MeasureReport {
        f_pg,
        f,
        delta,
        fidelities: chain(f_pg, f, root(f_pg), BOUND_TOL),
        pg_distance: chain(1.0 - f_pg, delta, root(1.0 - f_pg * f_pg), BOUND_TOL),
        distance: chain(1.0 - f, delta, root(1.0 - f * f), BOUND_TOL),
    })
}

/// A measurement: positive elements summing to the identity.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>) -> Result<Self> {
        let d = elements.first().ok_or_else(|| Error::InvalidArgument("empty POVM".into()))?.dim();
        let mut total = HermitianOperator::zeros(d);
        for m in &elements {
            if m.dim() != d {
                return Err(Error::DimensionMismatch(d, m.dim()));
            }
            let lo = eigh(m)?.min();
            if lo < -POVM_TOL {
                return Err(Error::NotPsd(lo));
            }
            total = total.add(m);
        }
        let dev = total.distance(&HermitianOperator::identity(d));
        if dev > POVM_TOL {
            return Err(Error::InvalidArgument(format!("POVM elements sum to 𝟙 only up to {dev:.3e}")));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    /// `Σ_x p_x tr(M_x ρ_x)`
    pub fn success_probability(&self, e: &Ensemble) -> Result<f64> {
        if e.len() != self.elements.len() {
            return Err(Error::DimensionMismatch(e.len(), self.elements.len()));
        }
        Ok(self
            .elements
            .iter()
            .zip(e.probs().iter().zip(e.states()))
            .map(|(m, (&p, s))| p * m.trace_product(s.op()))
            .sum())
    }
}

/// `M_x = p_x ρ̄^{-1/2} ρ_x ρ̄^{-1/2}`, plus `𝟙 − Π_ρ̄` on the first element.
pub fn pgm(e: &Ensemble) -> Result<Povm> {
    let avg = e.average();
    let ev = eigh_psd(&avg)?;
    let isqrt = ev.map_support(|x| 1.0 / x.sqrt());
    let kernel = HermitianOperator::identity(avg.dim()).sub(&ev.support_projector());
    let elements = e
        .probs()
        .iter()
        .zip(e.states())
        .enumerate()
        .map(|(x, (&p, s))| {
            let m = s.op().scale(p).sandwich(&isqrt);
            if x == 0 {
                m.add(&kernel)
            } else {
                m
            }
        })
        .collect();
    Povm::new(elements)
}

pub fn pgm_guess_probability(e: &Ensemble) -> Result<f64> {
    pgm(e)?.success_probability(e)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GuessingReport {
    pub p_pg: f64,
    pub p_guess: f64,
    /// `p_pg ≤ p_guess ≤ √p_pg`
    pub chain: ChainReport,
    pub sdp_gap: f64,
}

impl GuessingReport {
    pub fn holds(&self) -> bool {
        self.chain.holds()
    }
}

pub fn check_guessing_bounds(e: &Ensemble) -> Result<GuessingReport> {
    let p_pg = pgm_guess_probability(e)?;
    let sol = solve_guessing(e)?;
    let p_guess = sol.primal_value;
    Ok(GuessingReport {
        p_pg,
        p_guess,
        chain: chain(p_pg, p_guess, p_pg.sqrt(), SDP_BOUND_TOL),
        sdp_gap: sol.gap,
    })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SingletFractions {
    pub r: f64,
    pub r_pg: f64,
    /// `R_pg ≤ R ≤ √R_pg`
    pub chain: ChainReport,
}

/// `R = 2^{−H̃↑_∞}/|A|` from the min-entropy SDP and
/// `R_pg = 2^{−H̃↓₂}/|A|` in closed form.
pub fn singlet_fractions(state: &DensityOperator) -> Result<SingletFractions> {
    let (da, _) = state.bipartite_dims()?;
    let r = solve_min_entropy(state)?.primal_value / da as f64;
    let r_pg = (-h_down(DivergenceFamily::Minimal, 2.0, state)?).exp2() / da as f64;
    Ok(SingletFractions {
        r,
        r_pg,
        chain: chain(r_pg, r, r_pg.sqrt(), SDP_BOUND_TOL),
    })
}

#[derive(Clone, Debug)]
pub struct OptimalityReport {
    pub commutator: f64,
    pub commutes: bool,
    /// `|optimal − pretty good|`
    pub gap: f64,
    pub optimal: bool,
    pub sigma_hat: HermitianOperator,
}

impl OptimalityReport {
    pub fn consistent(&self) -> bool {
        self.commutes == self.optimal
    }
}

/// `Σ_x |x⟩⟨x| ⊗ ⟨x|M|x⟩` for blocks of size `block`.
fn block_pinch(m: &HermitianOperator, block: usize) -> HermitianOperator {
    let n = m.dim();
    let mm = m.matrix();
    HermitianOperator::hermitize(ComplexMatrix::from_fn(n, n, |i, j| {
        if i / block == j / block {
            mm[(i, j)]
        } else {
            crate::matcore::ZERO
        }
    }))
}

/// Commutator of the generalized Gram matrix with the block pinch of its
/// square root, against whether the PGM attains the optimal guessing
/// probability.
pub fn pgm_optimality(e: &Ensemble) -> Result<OptimalityReport> {
    let g = gram_matrix(e)?;
    let sigma_hat = block_pinch(&mat_pow(&g, 0.5)?, e.dim());
    let commutator = commutator_norm(&g, &sigma_hat)?;
    let p_pg = pgm_guess_probability(e)?;
    let p_guess = solve_guessing(e)?.primal_value;
    let gap = (p_guess - p_pg).abs();
    Ok(OptimalityReport {
        commutator,
        commutes: commutator <= COMMUTE_TOL,
        gap,
        optimal: gap <= GAP_TOL,
        sigma_hat,
    })
}

/// `τ_AC` for the canonical purification of `ρ_AB`, with `C = A'B'`.
pub fn complementary_state(state: &DensityOperator) -> Result<DensityOperator> {
    let (da, db) = state.bipartite_dims()?;
    let pur = canonical_purification(state)?;
    pur.marginal(&[0, 2, 3])?.with_profile(DimensionProfile::bipartite(da, da * db))
}

/// Commutator `[τ_AC, 𝟙 ⊗ tr_A √τ_AC]` on `supp τ_C` against whether the
/// pretty good singlet fraction is optimal.
pub fn singlet_optimality(state: &DensityOperator) -> Result<OptimalityReport> {
    let (da, _) = state.bipartite_dims()?;
    let tau = complementary_state(state)?;
    let tau_c = tau.marginal(&[1])?;
    let v = eigh_psd(tau_c.op())?.support_isometry();
    let pv = ComplexMatrix::identity(da).kron(&v);
    let tau_r = tau.op().conjugate_by(&pv.adjoint());
    let root = mat_pow(&tau_r, 0.5)?;
    let profile = DimensionProfile::bipartite(da, v.cols());
    let sigma_hat = partial_trace(&root, &profile, &[1])?;
    let commutator = commutator_norm(&tau_r, &identity_tensor(da, &sigma_hat))?;
    let f = singlet_fractions(state)?;
    let gap = (f.r - f.r_pg).abs();
    Ok(OptimalityReport {
        commutator,
        commutes: commutator <= COMMUTE_TOL,
        gap,
        optimal: gap <= GAP_TOL,
        sigma_hat,
    })
}

/// The two equalities that characterize optimality of the pretty good
/// singlet fraction: `H̃↓₂(A|B) = H̃↑_∞(A|B)` and, on the complementary
/// system, `H̄↑_½(A|C) = H̃↑_½(A|C)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DualPictureReport {
    pub min_like_gap: f64,
    pub max_like_gap: f64,
    pub min_like_equal: bool,
    pub max_like_equal: bool,
}

impl DualPictureReport {
    pub fn consistent(&self) -> bool {
        self.min_like_equal == self.max_like_equal
    }
}

pub fn dual_picture_check(state: &DensityOperator) -> Result<DualPictureReport> {
    use DivergenceFamily::{Minimal, Petz};
    let min_like_gap = (h_down(Minimal, 2.0, state)? - h_up(Minimal, f64::INFINITY, state)?.value).abs();
    let tau = complementary_state(state)?;
    let max_like_gap = (h_up(Petz, 0.5, &tau)?.value - h_up(Minimal, 0.5, &tau)?.value).abs();
    Ok(DualPictureReport {
        min_like_gap,
        max_like_gap,
        min_like_equal: min_like_gap <= OPTIMIZER_TOL,
        max_like_equal: max_like_gap <= OPTIMIZER_TOL,
    })
}

/// `2^{−H̃↓₂(X|B)}` on the cq state of the ensemble.
pub fn pgm_guess_from_entropy(e: &Ensemble) -> Result<f64> {
    Ok((-h_down(DivergenceFamily::Minimal, 2.0, &cq_state(e))?).exp2())
}
