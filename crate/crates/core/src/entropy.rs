//! Conditional Rényi entropies `H↓_α(A|B) = −D_α(ρ_AB ‖ 𝟙_A ⊗ ρ_B)` and
//! `H↑_α(A|B) = sup_σ −D_α(ρ_AB ‖ 𝟙_A ⊗ σ_B)` for both families, the
//! relations between them, and the first-order optimality tools for the
//! minimal family.
//!
//! The Petz `↑` entropy has a closed-form optimizer. The minimal `↑`
//! entropy is computed by BFGS over a Cholesky factor of `σ`, using the
//! exact gradient of `log Q̃_α`, except at `α = ∞` where it is the
//! min-entropy semidefinite program.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::divergence::{d_alpha, DivergenceFamily, COMMUTE_TOL};
use crate::error::{Error, Result};
use crate::matcore::{
    cholesky, commutator_norm, eigh, eigh_psd, identity_tensor, mat_pow, ComplexMatrix, DimensionProfile,
    HermitianOperator, ZERO,
};
use crate::report::InequalityReport;
use crate::sdpsolve::solve_min_entropy;
use crate::states::{DensityOperator, PureState};

/// Tolerance for relations between closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Tolerance for relations involving a numerically optimized entropy.
pub const OPTIMIZER_TOL: f64 = 1e-5;
/// Gradient norm (of `log Q̃` in the normalized factor) at which the
/// optimizer stops.
pub const GRADIENT_TOL: f64 = 1e-7;
pub const MAX_ITERATIONS: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arrow {
    Down,
    Up,
}

/// Maximizer of `−D_α(ρ_AB ‖ 𝟙 ⊗ σ_B)` and its value in bits.
#[derive(Clone, Debug)]
pub struct OptimizerResult {
    pub sigma: DensityOperator,
    pub value: f64,
    pub iterations: usize,
    pub gradient_residual: f64,
}

fn lifted(state: &DensityOperator, sigma: &HermitianOperator) -> Result<HermitianOperator> {
    let (da, _) = state.bipartite_dims()?;
    Ok(identity_tensor(da, sigma))
}

/// `−D_α(ρ_AB ‖ 𝟙_A ⊗ σ_B)`
pub fn conditional_value(
    family: DivergenceFamily,
    alpha: f64,
    state: &DensityOperator,
    sigma: &HermitianOperator,
) -> Result<f64> {
    Ok(-d_alpha(family, state.op(), &lifted(state, sigma)?, alpha)?)
}

pub fn h_down(family: DivergenceFamily, alpha: f64, state: &DensityOperator) -> Result<f64> {
    let rho_b = state.marginal(&[1])?;
    conditional_value(family, alpha, state, rho_b.op())
}

/// `H↓` or `H↑` as a plain number.
pub fn h(family: DivergenceFamily, arrow: Arrow, alpha: f64, state: &DensityOperator) -> Result<f64> {
    match arrow {
        Arrow::Down => h_down(family, alpha, state),
        Arrow::Up => Ok(h_up(family, alpha, state)?.value),
    }
}

/// `(tr_A ρ^α)^{1/α}`, normalized: the maximizer of `−D̄_α(ρ ‖ 𝟙⊗σ)`.
///
/// The same expression is also the optimizer for `α > 1` (there it
/// minimizes `tr (tr_A ρ^α) σ^{1−α}` by Hölder's inequality), which is how
/// orders above one are supported.
pub fn petz_up_optimizer(alpha: f64, state: &DensityOperator) -> Result<DensityOperator> {
    if !(alpha > 0.0 && alpha.is_finite() && alpha != 1.0) {
        return Err(Error::UnsupportedOrder { alpha, what: "the Petz optimizer" });
    }
    let (_, db) = state.bipartite_dims()?;
    let rho_alpha = mat_pow(state.op(), alpha)?;
    let marg = crate::matcore::partial_trace(&rho_alpha, state.profile(), &[1])?;
    let root = mat_pow(&marg, 1.0 / alpha)?;
    DensityOperator::normalized(root, DimensionProfile::single(db))
}

/// `H↑_α` with its optimizer.
pub fn h_up(family: DivergenceFamily, alpha: f64, state: &DensityOperator) -> Result<OptimizerResult> {
    let (_, db) = state.bipartite_dims()?;
    let closed = |sigma: DensityOperator, value: f64| OptimizerResult {
        sigma,
        value,
        iterations: 0,
        gradient_residual: 0.0,
    };
    if alpha == 1.0 {
        let rho_b = state.marginal(&[1])?.with_profile(DimensionProfile::single(db))?;
        let value = h_down(DivergenceFamily::Petz, 1.0, state)?;
        return Ok(closed(rho_b, value));
    }
    match family {
        DivergenceFamily::Petz => {
            if alpha == 0.0 {
                // sup_σ log tr Π_ρ (𝟙⊗σ) = log λ_max(tr_A Π_ρ)
                let proj = mat_pow(state.op(), 0.0)?;
                let marg = crate::matcore::partial_trace(&proj, state.profile(), &[1])?;
                let e = eigh(&marg)?;
                let top = e.vectors.column(e.dim() - 1);
                let sigma = DensityOperator::single(HermitianOperator::projector(&top))?;
                let value = conditional_value(family, 0.0, state, sigma.op())?;
                return Ok(closed(sigma, value));
            }
            let sigma = petz_up_optimizer(alpha, state)?;
            let value = conditional_value(family, alpha, state, sigma.op())?;
            Ok(closed(sigma, value))
        }
        DivergenceFamily::Minimal => {
            if alpha == 0.0 || alpha.is_nan() || alpha < 0.0 {
                return Err(Error::UnsupportedOrder { alpha, what: "the minimal conditional entropy" });
            }
            if alpha.is_infinite() {
                let sol = solve_min_entropy(state)?;
                let sigma = DensityOperator::normalized(
                    crate::matcore::eigh(&sol.primal_vars[0])?.map(|x| x.max(0.0)),
                    DimensionProfile::single(db),
                )?;
                return Ok(OptimizerResult {
                    sigma,
                    value: -sol.primal_value.log2(),
                    iterations: sol.iterations,
                    gradient_residual: sol.gap,
                });
            }
            minimal_up(alpha, state)
        }
    }
}

/// `log Q̃_α(ρ ‖ 𝟙⊗σ)` and its gradient in `σ` for `σ > 0` on a space
/// where `ρ` is already restricted to `supp(𝟙⊗ρ_B)`.
struct MinimalObjective {
    rho: HermitianOperator,
    da: usize,
    r: usize,
    alpha: f64,
    /// rank of `ρ`, which is the rank of `DρD` for every `σ > 0`
    rank: usize,
}

impl MinimalObjective {
    fn new(rho: HermitianOperator, da: usize, r: usize, alpha: f64) -> Result<Self> {
        let rank = eigh_psd(&rho)?.rank();
        Ok(Self { rho, da, r, alpha, rank })
    }

    /// `(log Q̃, G)` with `d log Q̃ = Re tr(G dσ)`; `None` outside the
    /// positive definite cone.
    fn eval(&self, sigma: &HermitianOperator) -> Result<Option<(f64, HermitianOperator)>> {
        let (da, r, alpha) = (self.da, self.r, self.alpha);
        let beta = (1.0 - alpha) / alpha;
        let es = eigh(sigma)?;
        let smax = es.max();
        if !(es.min() > 1e-13 * smax) {
            return Ok(None);
        }
        let s = &es.values;
        // ρ in the basis 𝟙⊗U, graded by D = 𝟙⊗diag(s^{β/2})
        let u = ComplexMatrix::identity(da).kron(&es.vectors);
        let rot = self.rho.conjugate_by(&u.adjoint());
        let d: Vec<f64> = (0..da * r).map(|k| s[k % r].powf(beta / 2.0)).collect();
        let m = rot.matrix();
        let n = da * r;
        let k = HermitianOperator::hermitize(ComplexMatrix::from_fn(n, n, |i, j| m[(i, j)] * (d[i] * d[j])));
        let ek = eigh_psd(&k)?;
        let top = ek.max();
        if !(top > 0.0) {
            return Ok(None);
        }
        let q_rel = ek.trace_top(self.rank, |x| (x / top).powf(alpha));
        let log_q = alpha * top.ln() + q_rel.ln();
        // P = D^{-1} K^α D^{-1}, scaled by 1/Q
        let kp = ek.map_top(self.rank, |x| (x / top).powf(alpha) / q_rel);
        let kpm = kp.matrix();
        let p = ComplexMatrix::from_fn(n, n, |i, j| kpm[(i, j)] / (d[i] * d[j]));
        let pb = p.partial_trace(&DimensionProfile::bipartite(da, r), &[1])?;
        // Fréchet derivative of x^β in the eigenbasis of σ
        let g_eig = ComplexMatrix::from_fn(r, r, |i, j| pb[(i, j)] * (alpha * divided_power(s[i], s[j], beta)));
        let g = HermitianOperator::hermitize(es.vectors.matmul(&g_eig).matmul(&es.vectors.adjoint()));
        Ok(Some((log_q, g)))
    }
}

/// `(x^β − y^β)/(x − y)`, with the derivative on the diagonal.
fn divided_power(x: f64, y: f64, beta: f64) -> f64 {
    let t = (x / y).ln();
    if t.abs() < 1e-12 {
        return beta * y.powf(beta - 1.0);
    }
    y.powf(beta - 1.0) * (beta * t).exp_m1() / t.exp_m1()
}

/// Real coordinates of a lower-triangular factor: diagonal real parts,
/// then real and imaginary parts of the strict lower triangle.
fn pack(l: &ComplexMatrix) -> Vec<f64> {
    let r = l.rows();
    let mut x = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..=i {
            x.push(l[(i, j)].re);
            if i != j {
                x.push(l[(i, j)].im);
            }
        }
    }
    x
}

fn unpack(x: &[f64], r: usize) -> ComplexMatrix {
    let mut l = ComplexMatrix::zeros(r, r);
    let mut k = 0;
    for i in 0..r {
        for j in 0..=i {
            if i == j {
                l[(i, j)] = Complex64::new(x[k], 0.0);
                k += 1;
            } else {
                l[(i, j)] = Complex64::new(x[k], x[k + 1]);
                k += 2;
            }
        }
    }
    l
}

struct Run {
    x: Vec<f64>,
    iterations: usize,
    residual: f64,
}

impl MinimalObjective {
    /// Objective `sign · log Q̃(LL†/tr LL†)` and its gradient in the packed
    /// coordinates, where `sign` turns the problem into a minimization.
    fn value_grad(&self, x: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
        let sign = if self.alpha < 1.0 { -1.0 } else { 1.0 };
        let l = unpack(x, self.r);
        let t: f64 = x.iter().map(|v| v * v).sum();
        let sigma = HermitianOperator::hermitize(l.matmul(&l.adjoint()).scale_real(1.0 / t));
        let Some((f, g)) = self.eval(&sigma)? else { return Ok(None) };
        // ∇_L = (2/t)(G − tr(Gσ)) L
        let shift = g.trace_product(&sigma);
        let gt = g.sub(&HermitianOperator::identity(self.r).scale(shift));
        let grad_l = gt.matrix().matmul(&l).scale_real(2.0 * sign / t);
        let mut grad = Vec::with_capacity(x.len());
        for i in 0..self.r {
            for j in 0..=i {
                grad.push(grad_l[(i, j)].re);
                if i != j {
                    grad.push(grad_l[(i, j)].im);
                }
            }
        }
        Ok(Some((sign * f, grad)))
    }

    /// BFGS with Armijo backtracking. The objective is invariant under
    /// scaling of `L`, so the iterate is renormalized after each step.
    fn bfgs(&self, start: &HermitianOperator) -> Result<Run> {
        let mut x = pack(&cholesky(start)?);
        normalize(&mut x);
        let n = x.len();
        let Some((mut f, mut g)) = self.value_grad(&x)? else {
            return Err(Error::Singular(0.0));
        };
        let mut hinv = identity(n);
        let mut first = true;
        for it in 0..MAX_ITERATIONS {
            let residual = norm(&g);
            if residual <= GRADIENT_TOL {
                return Ok(Run { x, iterations: it, residual });
            }
            let mut dir: Vec<f64> = mat_vec(&hinv, &g).into_iter().map(|v| -v).collect();
            let mut slope = dot(&dir, &g);
            if slope >= 0.0 {
                hinv = identity(n);
                dir = g.iter().map(|v| -v).collect();
                slope = -dot(&g, &g);
            }
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
                if let Some((ft, gt)) = self.value_grad(&trial)? {
                    // near the optimum the Armijo decrease drops below rounding
                    // error; then accept any step that is flat in value and
                    // shrinks the gradient
                    let flat = ft <= f + 1e-14 * f.abs().max(1.0) && norm(&gt) < norm(&g);
                    if ft <= f + 1e-4 * step * slope || flat {
                        accepted = Some((trial, ft, gt));
                        break;
                    }
                }
                step *= 0.5;
            }
            let Some((mut xn, fnew, mut gn)) = accepted else {
                return Ok(Run { x, iterations: it, residual });
            };
            // rescale to ‖x‖ = 1; the gradient scales inversely
            let scale = norm(&xn);
            xn.iter_mut().for_each(|v| *v /= scale);
            gn.iter_mut().for_each(|v| *v *= scale);
            let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-14 * norm(&s) * norm(&y) {
                if first {
                    let gamma = sy / dot(&y, &y);
                    hinv = identity(n).into_iter().map(|v| v * gamma).collect();
                    first = false;
                }
                bfgs_update(&mut hinv, &s, &y, sy);
            }
            x = xn;
            f = fnew;
            g = gn;
        }
        Ok(Run { x, iterations: MAX_ITERATIONS, residual: norm(&g) })
    }
}

impl MinimalObjective {
    /// BFGS from `start`, returning the local optimizer. When the run stalls
    /// against the boundary of the cone, the problem is restricted to the
    /// support of the stalled iterate and solved again there: on that face the
    /// objective is smooth, and since negative powers are taken on the
    /// support the restricted value is the same function.
    fn solve(&self, start: &HermitianOperator) -> Result<(HermitianOperator, Run)> {
        let run = self.bfgs(start)?;
        let l = unpack(&run.x, self.r);
        let sigma = HermitianOperator::hermitize(l.matmul(&l.adjoint()));
        if run.residual <= GRADIENT_TOL {
            return Ok((sigma, run));
        }
        let es = eigh(&sigma)?;
        let cut = FACE_TOL * es.max();
        let keep: Vec<usize> = (0..self.r).filter(|&i| es.values[i] > cut).collect();
        if keep.is_empty() || keep.len() == self.r {
            return Ok((sigma, run));
        }
        let w = ComplexMatrix::from_fn(self.r, keep.len(), |i, j| es.vectors[(i, keep[j])]);
        let pw = ComplexMatrix::identity(self.da).kron(&w);
        let face = MinimalObjective::new(self.rho.conjugate_by(&pw.adjoint()), self.da, keep.len(), self.alpha)?;
        let (local, inner) = face.solve(&sigma.conjugate_by(&w.adjoint()))?;
        let lifted = HermitianOperator::hermitize(w.matmul(local.matrix()).matmul(&w.adjoint()));
        Ok((
            lifted,
            Run {
                x: Vec::new(),
                iterations: run.iterations + inner.iterations,
                residual: inner.residual,
            },
        ))
    }
}

/// Relative eigenvalue below which a stalled iterate is treated as lying on
/// a face of the cone.
const FACE_TOL: f64 = 1e-9;

fn normalize(x: &mut [f64]) {
    let n = norm(x);
    x.iter_mut().for_each(|v| *v /= n);
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy = mat_vec(h, y);
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
    }
}

fn minimal_up(alpha: f64, state: &DensityOperator) -> Result<OptimizerResult> {
    let (da, db) = state.bipartite_dims()?;
    let rho_b = state.marginal(&[1])?;
    let eb = eigh_psd(rho_b.op())?;
    let v = eb.support_isometry();
    let r = v.cols();
    let pv = ComplexMatrix::identity(da).kron(&v);
    let rho = state.op().conjugate_by(&pv.adjoint());
    let objective = MinimalObjective::new(rho, da, r, alpha)?;
    let restrict = |s: &HermitianOperator| s.conjugate_by(&v.adjoint());
    let petz = petz_up_optimizer(alpha, state)?;
    let starts = [restrict(petz.op()), restrict(rho_b.op())];
    let mut best: Option<OptimizerResult> = None;
    for (i, start) in starts.iter().enumerate() {
        let (local, run) = objective.solve(start)?;
        let sigma = DensityOperator::normalized(
            HermitianOperator::hermitize(v.matmul(local.matrix()).matmul(&v.adjoint())),
            DimensionProfile::single(db),
        )?;
        let value = conditional_value(DivergenceFamily::Minimal, alpha, state, sigma.op())?;
        let candidate = OptimizerResult {
            sigma,
            value,
            iterations: run.iterations,
            gradient_residual: run.residual,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                let converged = candidate.gradient_residual <= GRADIENT_TOL;
                let b_conv = b.gradient_residual <= GRADIENT_TOL;
                (converged && !b_conv) || (converged == b_conv && candidate.value > b.value)
            }
        };
        if better {
            best = Some(candidate);
        }
        // the concave range needs no second start
        let done = best.as_ref().unwrap().gradient_residual <= GRADIENT_TOL;
        if i == 0 && done && alpha >= 0.5 {
            break;
        }
    }
    let best = best.expect("at least one start");
    if best.gradient_residual > GRADIENT_TOL {
        return Err(Error::OptimizerNoConvergence {
            residual: best.gradient_residual,
            iterations: best.iterations,
        });
    }
    Ok(best)
}

/// Which of the three duality relations for pure tripartite states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DualityRelation {
    /// `H̄↓_α(A|B) + H̄↓_β(A|C) = 0`, `α + β = 2`
    PetzDown,
    /// `H̃↑_α(A|B) + H̃↑_β(A|C) = 0`, `1/α + 1/β = 2`
    MinUp,
    /// `H̄↑_α(A|B) + H̃↓_β(A|C) = 0`, `αβ = 1`
    Mixed,
}

impl DualityRelation {
    pub const ALL: [DualityRelation; 3] = [Self::PetzDown, Self::MinUp, Self::Mixed];

    /// Dual order `β` for `α`, or an error outside the admissible range.
    pub fn dual_order(self, alpha: f64) -> Result<f64> {
        let bad = || Error::UnsupportedOrder { alpha, what: "this duality relation" };
        match self {
            Self::PetzDown if (0.0..=2.0).contains(&alpha) => Ok(2.0 - alpha),
            Self::MinUp if alpha >= 0.5 => Ok(if alpha.is_infinite() {
                0.5
            } else if alpha == 0.5 {
                f64::INFINITY
            } else {
                alpha / (2.0 * alpha - 1.0)
            }),
            Self::Mixed if alpha >= 0.0 && alpha.is_finite() => {
                Ok(if alpha == 0.0 { f64::INFINITY } else { 1.0 / alpha })
            }
            _ => Err(bad()),
        }
    }

    /// Whether either side needs the numerical optimizer (or the SDP).
    pub fn numerical(self) -> bool {
        self == Self::MinUp
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualityReport {
    pub relation: DualityRelation,
    pub alpha: f64,
    pub beta: f64,
    /// Entropy of `A` given `B`.
    pub given_b: f64,
    /// Entropy of `A` given `C`.
    pub given_c: f64,
    pub sum: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Evaluates one duality relation on a pure state with profile `(A, B, C)`.
pub fn duality_check(state3: &PureState, alpha: f64, which: DualityRelation) -> Result<DualityReport> {
    if state3.profile().len() != 3 {
        return Err(Error::InvalidProfile {
            profile: state3.profile().factors().to_vec(),
            dim: state3.amplitudes().len(),
        });
    }
    let beta = which.dual_order(alpha)?;
    let ab = state3.marginal(&[0, 1])?;
    let ac = state3.marginal(&[0, 2])?;
    use DivergenceFamily::{Minimal, Petz};
    let (given_b, given_c) = match which {
        DualityRelation::PetzDown => (h_down(Petz, alpha, &ab)?, h_down(Petz, beta, &ac)?),
        DualityRelation::MinUp => (h_up(Minimal, alpha, &ab)?.value, h_up(Minimal, beta, &ac)?.value),
        DualityRelation::Mixed => (h_up(Petz, alpha, &ab)?.value, h_down(Minimal, beta, &ac)?),
    };
    let sum = given_b + given_c;
    let tolerance = if which.numerical() { OPTIMIZER_TOL } else { CLOSED_FORM_TOL };
    Ok(DualityReport {
        relation: which,
        alpha,
        beta,
        given_b,
        given_c,
        sum,
        tolerance,
        holds: sum.abs() <= tolerance,
    })
}

/// `lower ≤ middle ≤ upper`
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    pub lower: InequalityReport,
    pub upper: InequalityReport,
}

impl ChainReport {
    fn new(lo: f64, mid: f64, hi: f64, tol: f64) -> Self {
        Self {
            lower: InequalityReport::le(lo, mid, tol),
            upper: InequalityReport::le(mid, hi, tol),
        }
    }

    pub fn holds(&self) -> bool {
        self.lower.holds && self.upper.holds
    }

    pub fn worst_slack(&self) -> f64 {
        self.lower.slack.min(self.upper.slack)
    }
}

/// `H̄ ≤ H̃ ≤ αH̄ + (1−α) log|A|` for both arrows.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PetzMinimalChains {
    pub alpha: f64,
    pub down: ChainReport,
    pub up: ChainReport,
}

impl PetzMinimalChains {
    pub fn holds(&self) -> bool {
        self.down.holds() && self.up.holds()
    }
}

pub fn check_cor5(state: &DensityOperator, alpha: f64) -> Result<PetzMinimalChains> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedOrder { alpha, what: "the Petz–minimal entropy chain" });
    }
    let (da, _) = state.bipartite_dims()?;
    let log_a = (da as f64).log2();
    use DivergenceFamily::{Minimal, Petz};
    let chain = |petz: f64, min: f64, tol: f64| ChainReport::new(petz, min, alpha * petz + (1.0 - alpha) * log_a, tol);
    let down = chain(h_down(Petz, alpha, state)?, h_down(Minimal, alpha, state)?, CLOSED_FORM_TOL);
    let up = chain(h_up(Petz, alpha, state)?.value, h_up(Minimal, alpha, state)?.value, OPTIMIZER_TOL);
    Ok(PetzMinimalChains { alpha, down, up })
}

/// `H̃ ≤ α H̄` on a classically coherent state, for each arrow where the
/// order is admissible (`↓` on `(0, 1]`, `↑` on `[½, 1]`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoherentReport {
    pub alpha: f64,
    pub down: Option<InequalityReport>,
    pub up: Option<InequalityReport>,
}

impl CoherentReport {
    pub fn holds(&self) -> bool {
        self.down.is_none_or(|r| r.holds) && self.up.is_none_or(|r| r.holds)
    }
}

/// `ρ_{X X'B}` from the classically coherent purification, as a bipartite
/// state `X | X'B`.
pub fn classically_coherent_state(e: &crate::states::Ensemble) -> Result<DensityOperator> {
    let tau = crate::states::classically_coherent_purification(e)?;
    let (nx, d) = (e.len(), e.dim());
    tau.marginal(&[0, 1, 2])?.with_profile(DimensionProfile::bipartite(nx, nx * d))
}

pub fn check_prop6(e: &crate::states::Ensemble, alpha: f64) -> Result<CoherentReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedOrder { alpha, what: "the classically coherent bound" });
    }
    let rho = classically_coherent_state(e)?;
    use DivergenceFamily::{Minimal, Petz};
    let down = InequalityReport::le(
        h_down(Minimal, alpha, &rho)?,
        alpha * h_down(Petz, alpha, &rho)?,
        CLOSED_FORM_TOL,
    );
    let up = if alpha >= 0.5 {
        Some(InequalityReport::le(
            h_up(Minimal, alpha, &rho)?.value,
            alpha * h_up(Petz, alpha, &rho)?.value,
            OPTIMIZER_TOL,
        ))
    } else {
        None
    };
    Ok(CoherentReport { alpha, down: Some(down), up })
}

/// Upper bounds on the min-like `↓` entropies by `↑` entropies of order
/// `1/(2−α)`, with or without the `(α−1) log|A|` term.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MinLikeReport {
    pub alpha: f64,
    pub cq: bool,
    /// `H̃↓_α ≤ α H̃↑_{1/(2−α)} (+ (α−1) log|A|)`
    pub minimal: InequalityReport,
    /// `H̄↓_α ≤ (H̄↑_{1/(2−α)} (+ (α−1) log|A|)) / (2−α)`; absent at `α = 2`,
    /// where it would need the Petz entropy of order `∞`.
    pub petz: Option<InequalityReport>,
    /// `α = 2`, the case known from earlier work.
    pub known_case: bool,
}

impl MinLikeReport {
    pub fn holds(&self) -> bool {
        self.minimal.holds && self.petz.is_none_or(|r| r.holds)
    }
}

/// Largest entry outside the diagonal blocks of the first factor.
pub fn off_block_norm(state: &DensityOperator) -> Result<f64> {
    let (da, db) = state.bipartite_dims()?;
    let m = state.op().matrix();
    let mut worst = 0.0_f64;
    for i in 0..da * db {
        for j in 0..da * db {
            if i / db != j / db {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    Ok(worst)
}

pub fn check_minlike_bounds(state: &DensityOperator, alpha: f64, cq: bool) -> Result<MinLikeReport> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::UnsupportedOrder { alpha, what: "the min-like entropy bounds" });
    }
    let (da, _) = state.bipartite_dims()?;
    if cq {
        let off = off_block_norm(state)?;
        if off > COMMUTE_TOL {
            return Err(Error::NotClassical(off));
        }
    }
    let log_term = if cq { 0.0 } else { (alpha - 1.0) * (da as f64).log2() };
    let order = if alpha == 2.0 { f64::INFINITY } else { 1.0 / (2.0 - alpha) };
    use DivergenceFamily::{Minimal, Petz};
    let minimal = InequalityReport::le(
        h_down(Minimal, alpha, state)?,
        alpha * h_up(Minimal, order, state)?.value + log_term,
        OPTIMIZER_TOL,
    );
    let petz = if alpha < 2.0 {
        Some(InequalityReport::le(
            h_down(Petz, alpha, state)?,
            (h_up(Petz, order, state)?.value + log_term) / (2.0 - alpha),
            CLOSED_FORM_TOL,
        ))
    } else {
        None
    };
    Ok(MinLikeReport {
        alpha,
        cq,
        minimal,
        petz,
        known_case: alpha == 2.0,
    })
}

/// Both sides of the equivalence "`[ρ_AB, 𝟙⊗σ̂] = 0` iff `H̄↑_α = H̃↑_α`"
/// with `σ̂ = tr_A ρ^α`.
#[derive(Clone, Debug)]
pub struct UpEqualityReport {
    pub alpha: f64,
    pub sigma_hat: HermitianOperator,
    pub commutator: f64,
    pub gap: f64,
    pub commutes: bool,
    pub entropies_equal: bool,
}

impl UpEqualityReport {
    pub fn consistent(&self) -> bool {
        self.commutes == self.entropies_equal
    }
}

pub fn equality_condition_up(alpha: f64, state: &DensityOperator) -> Result<UpEqualityReport> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::UnsupportedOrder { alpha, what: "the entropy equality condition" });
    }
    let rho_alpha = mat_pow(state.op(), alpha)?;
    let sigma_hat = crate::matcore::partial_trace(&rho_alpha, state.profile(), &[1])?;
    let commutator = commutator_norm(state.op(), &lifted(state, &sigma_hat)?)?;
    let petz = h_up(DivergenceFamily::Petz, alpha, state)?.value;
    let minimal = h_up(DivergenceFamily::Minimal, alpha, state)?.value;
    let gap = (minimal - petz).abs();
    Ok(UpEqualityReport {
        alpha,
        sigma_hat,
        commutator,
        gap,
        commutes: commutator <= COMMUTE_TOL,
        entropies_equal: gap <= OPTIMIZER_TOL,
    })
}

/// Pinches the first factor of a state on `X' ⊗ B`.
pub fn dephase_cq(sigma: &DensityOperator) -> Result<DensityOperator> {
    let (nx, db) = sigma.bipartite_dims()?;
    let m = sigma.op().matrix();
    let n = nx * db;
    let out = ComplexMatrix::from_fn(n, n, |i, j| if i / db == j / db { m[(i, j)] } else { ZERO });
    DensityOperator::new(HermitianOperator::hermitize(out), sigma.profile().clone())
}

/// `(1−α) Re tr(B^α A₀^{−α} A₁)`: the derivative of
/// `t ↦ Q̃_α(B ‖ A₀ + t A₁)` at `t = 0`, valid when `[B, A₀] = 0` and
/// `A₀ > 0`.
pub fn qtilde_directional_derivative(
    b: &HermitianOperator,
    a0: &HermitianOperator,
    a1: &HermitianOperator,
    alpha: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::UnsupportedOrder { alpha, what: "the directional derivative" });
    }
    if b.dim() != a0.dim() || a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch(b.dim(), a0.dim().max(a1.dim())));
    }
    let c = commutator_norm(b, a0)?;
    if c > COMMUTE_TOL {
        return Err(Error::NonCommuting(c));
    }
    let e = eigh(a0)?;
    if e.min() <= 0.0 {
        return Err(Error::Singular(e.min()));
    }
    let a0_pow = e.map(|x| x.powf(-alpha));
    let b_pow = mat_pow(b, alpha)?;
    let prod = b_pow.matrix().matmul(a0_pow.matrix()).matmul(a1.matrix());
    Ok((1.0 - alpha) * prod.trace().re)
}

/// Largest `|d/dt Q̃_α(ρ ‖ 𝟙 ⊗ (σ* + tΔ))|` at `t = 0` over an orthonormal
/// basis of trace-zero Hermitian `Δ` on `supp σ*`, with `σ*` the Petz
/// optimizer. Requires `[ρ, 𝟙⊗σ*] = 0`.
pub fn stationarity_residual(alpha: f64, state: &DensityOperator) -> Result<f64> {
    let (da, _) = state.bipartite_dims()?;
    let sigma = petz_up_optimizer(alpha, state)?;
    let es = eigh_psd(sigma.op())?;
    let v = es.support_isometry();
    let r = v.cols();
    let pv = ComplexMatrix::identity(da).kron(&v);
    let rho = state.op().conjugate_by(&pv.adjoint());
    let s_loc = sigma.op().conjugate_by(&v.adjoint());
    let a0 = identity_tensor(da, &s_loc);
    let mut worst = 0.0_f64;
    for delta in traceless_basis(r) {
        let a1 = identity_tensor(da, &delta);
        worst = worst.max(qtilde_directional_derivative(&rho, &a0, &a1, alpha)?.abs());
    }
    Ok(worst)
}

/// Orthonormal basis of trace-zero Hermitian `n × n` matrices.
pub fn traceless_basis(n: usize) -> Vec<HermitianOperator> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for k in 1..n {
        // (Σ_{j<k} E_jj − k E_kk)/√(k(k+1))
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut diag = vec![0.0; n];
        diag[..k].iter_mut().for_each(|d| *d = 1.0 / norm);
        diag[k] = -(k as f64) / norm;
        out.push(HermitianOperator::diag(&diag));
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re[(j, k)] = Complex64::new(h, 0.0);
            re[(k, j)] = Complex64::new(h, 0.0);
            let mut im = ComplexMatrix::zeros(n, n);
            im[(j, k)] = Complex64::new(0.0, h);
            im[(k, j)] = Complex64::new(0.0, -h);
            out.push(HermitianOperator::hermitize(re));
            out.push(HermitianOperator::hermitize(im));
        }
    }
    out
}
