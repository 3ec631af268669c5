//! Dense primal-dual interior-point solver for the three semidefinite
//! programs used here: optimal state discrimination, the conditional
//! min-entropy, and the optimal conditional fidelity.
//!
//! Internally every problem is put in the standard form
//!
//! ```text
//! min ⟨C, X⟩  s.t. ⟨A_i, X⟩ = b_i,  X ⪰ 0        (X block diagonal)
//! max bᵀy     s.t. S = C − Σ y_i A_i ⪰ 0
//! ```
//!
//! and solved with HKM search directions and Mehrotra predictor-corrector
//! steps from an infeasible start.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::io::MatrixJson;
use crate::matcore::{
    eigh, identity_tensor, mat_pow, partial_trace, schatten_norm, tensor, ComplexMatrix, DimensionProfile,
    HermitianOperator, Schatten, ONE,
};
use crate::entropy::petz_up_optimizer;
use crate::pretty_good::purification_overlap;
use crate::states::{canonical_purification, DensityOperator, Ensemble};

/// Relative duality gap at which a solve counts as converged.
pub const TARGET_GAP: f64 = 1e-9;
/// Gap that a returned solution must meet, relative to `max(1, |value|)`.
pub const GAP_TOL: f64 = 1e-6;
pub const MAX_ITERATIONS: usize = 200;
/// Lowest admissible eigenvalue of any slack in a returned solution.
pub const FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpShape {
    Guessing,
    MinEntropy,
    FidelityPrimal,
}

/// Optimal values and variables of one solve, in the natural orientation of
/// the problem (see the individual `solve_*` functions).
#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub shape: SdpShape,
    pub primal_value: f64,
    pub dual_value: f64,
    pub primal_vars: Vec<HermitianOperator>,
    pub dual_vars: Vec<HermitianOperator>,
    pub gap: f64,
    pub min_slack_eig: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpSolutionJson {
    pub shape: SdpShape,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub min_slack_eig: f64,
    pub iterations: usize,
    pub primal_vars: Vec<MatrixJson>,
    pub dual_vars: Vec<MatrixJson>,
}

impl SdpSolution {
    /// Whether the gap is within `GAP_TOL · max(1, |primal|)` and all slacks
    /// are above `-FEASIBILITY_TOL`.
    pub fn healthy(&self) -> bool {
        self.gap <= GAP_TOL * self.primal_value.abs().max(1.0) && self.min_slack_eig >= -FEASIBILITY_TOL
    }

    pub fn to_json(&self) -> SdpSolutionJson {
        let conv = |v: &[HermitianOperator]| v.iter().map(|m| MatrixJson::from_operator(m, None)).collect();
        SdpSolutionJson {
            shape: self.shape,
            primal_value: self.primal_value,
            dual_value: self.dual_value,
            gap: self.gap,
            min_slack_eig: self.min_slack_eig,
            iterations: self.iterations,
            primal_vars: conv(&self.primal_vars),
            dual_vars: conv(&self.dual_vars),
        }
    }
}

/// One nonzero entry of a block-diagonal constraint matrix.
#[derive(Clone, Copy, Debug)]
struct Entry {
    block: usize,
    row: usize,
    col: usize,
    val: Complex64,
}

/// A Hermitian block-diagonal `A_i` with both `(r, c)` and `(c, r)` stored.
#[derive(Clone, Debug, Default)]
struct Constraint {
    entries: Vec<Entry>,
    rhs: f64,
}

impl Constraint {
    fn push(&mut self, block: usize, row: usize, col: usize, val: Complex64) {
        self.entries.push(Entry { block, row, col, val });
    }

    /// `⟨A_i, M⟩ = Re Σ a_rc M_cr`
    fn apply(&self, m: &[ComplexMatrix]) -> f64 {
        self.entries
            .iter()
            .map(|e| (e.val * m[e.block][(e.col, e.row)]).re)
            .sum()
    }
}

/// Orthonormal Hermitian basis of `n × n` matrices as `(row, col, value)`
/// triplets: `E_jj`, `(E_jk + E_kj)/√2`, `i(E_jk − E_kj)/√2`.
fn hermitian_basis(n: usize) -> Vec<Vec<(usize, usize, Complex64)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        out.push(vec![(j, j, ONE)]);
        for k in j + 1..n {
            out.push(vec![(j, k, Complex64::new(h, 0.0)), (k, j, Complex64::new(h, 0.0))]);
            out.push(vec![(j, k, Complex64::new(0.0, h)), (k, j, Complex64::new(0.0, -h))]);
        }
    }
    out
}

fn basis_trace(e: &[(usize, usize, Complex64)]) -> f64 {
    e.iter().filter(|(r, c, _)| r == c).map(|(_, _, v)| v.re).sum()
}

struct StandardSdp {
    blocks: Vec<usize>,
    c: Vec<ComplexMatrix>,
    constraints: Vec<Constraint>,
}

struct IpmResult {
    x: Vec<ComplexMatrix>,
    y: Vec<f64>,
    primal_obj: f64,
    dual_obj: f64,
    iterations: usize,
}

fn inner(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.trace_product(y).re).sum()
}

fn herm_blocks(v: Vec<ComplexMatrix>) -> Vec<ComplexMatrix> {
    v.into_iter().map(|m| HermitianOperator::hermitize(m).into_matrix()).collect()
}

fn fro(v: &[ComplexMatrix]) -> f64 {
    v.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt()
}

/// Inverse and inverse square root of a positive definite block.
fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh(&HermitianOperator::hermitize(m.clone()))?;
    if e.min() <= 0.0 {
        return Err(Error::Singular(e.min()));
    }
    Ok(e.map(|x| 1.0 / x).into_matrix())
}

/// Largest `t ≤ 1` keeping `M + t·D ⪰ 0`, from the spectrum of
/// `M^{-1/2} D M^{-1/2}`.
fn max_step(m: &[ComplexMatrix], d: &[ComplexMatrix]) -> Result<f64> {
    let mut step = f64::INFINITY;
    for (mb, db) in m.iter().zip(d) {
        let e = eigh(&HermitianOperator::hermitize(mb.clone()))?;
        if e.min() <= 0.0 {
            return Err(Error::Singular(e.min()));
        }
        let isq = e.map(|x| 1.0 / x.sqrt());
        let scaled = HermitianOperator::hermitize(db.clone()).sandwich(&isq);
        let lo = eigh(&scaled)?.min();
        if lo < 0.0 {
            step = step.min(-1.0 / lo);
        }
    }
    Ok(step)
}

/// Dense real LU solve with partial pivoting.
fn solve_real(mut a: Vec<f64>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .unwrap();
        let piv = a[p * n + k];
        if piv.abs() < 1e-300 {
            return Err(Error::Singular(piv));
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            b.swap(k, p);
        }
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            if f == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            b[i] -= f * b[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k * n + j] * b[j]).sum();
        b[k] = (b[k] - s) / a[k * n + k];
    }
    Ok(b)
}

impl StandardSdp {
    fn zeros(&self) -> Vec<ComplexMatrix> {
        self.blocks.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect()
    }

    fn op(&self, m: &[ComplexMatrix]) -> Vec<f64> {
        self.constraints.iter().map(|c| c.apply(m)).collect()
    }

    fn adjoint_op(&self, y: &[f64]) -> Vec<ComplexMatrix> {
        let mut out = self.zeros();
        for (c, &yi) in self.constraints.iter().zip(y) {
            for e in &c.entries {
                out[e.block][(e.row, e.col)] += e.val * yi;
            }
        }
        out
    }

    /// `M_ij = Re tr(A_i X A_j S⁻¹)`
    fn schur(&self, x: &[ComplexMatrix], sinv: &[ComplexMatrix]) -> Vec<f64> {
        let m = self.constraints.len();
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let mut acc = 0.0;
                for a in &self.constraints[i].entries {
                    for b in &self.constraints[j].entries {
                        if a.block != b.block {
                            continue;
                        }
                        let k = a.block;
                        acc += (a.val * x[k][(a.col, b.row)] * b.val * sinv[k][(b.col, a.row)]).re;
                    }
                }
                out[i * m + j] = acc;
                out[j * m + i] = acc;
            }
        }
        out
    }

    /// HKM direction for complementarity target `rc` (i.e. `ΔX S + X ΔS = rc`).
    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        schur: &[f64],
        x: &[ComplexMatrix],
        sinv: &[ComplexMatrix],
        rp: &[f64],
        rd: &[ComplexMatrix],
        rc: &[ComplexMatrix],
    ) -> Result<(Vec<ComplexMatrix>, Vec<f64>, Vec<ComplexMatrix>)> {
        let rc_sinv: Vec<ComplexMatrix> = rc.iter().zip(sinv).map(|(r, s)| r.matmul(s)).collect();
        let x_rd_sinv: Vec<ComplexMatrix> = x
            .iter()
            .zip(rd)
            .zip(sinv)
            .map(|((xb, r), s)| xb.matmul(r).matmul(s))
            .collect();
        let a1 = self.op(&rc_sinv);
        let a2 = self.op(&x_rd_sinv);
        let rhs: Vec<f64> = (0..rp.len()).map(|i| rp[i] - a1[i] + a2[i]).collect();
        let dy = solve_real(schur.to_vec(), rhs)?;
        let ady = self.adjoint_op(&dy);
        let ds: Vec<ComplexMatrix> = rd.iter().zip(&ady).map(|(r, a)| r.sub(a)).collect();
        let dx = herm_blocks(
            rc.iter()
                .zip(x)
                .zip(&ds)
                .zip(sinv)
                .map(|(((r, xb), d), s)| r.sub(&xb.matmul(d)).matmul(s))
                .collect(),
        );
        Ok((dx, dy, herm_blocks(ds)))
    }

    fn solve(&self) -> Result<IpmResult> {
        let n_total: usize = self.blocks.iter().sum();
        let b: Vec<f64> = self.constraints.iter().map(|c| c.rhs).collect();
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let c_norm = fro(&self.c);
        let start = 10.0_f64.max((n_total as f64).sqrt());
        let mut x: Vec<ComplexMatrix> = self.blocks.iter().map(|&n| ComplexMatrix::identity(n).scale_real(start)).collect();
        let mut s = x.clone();
        let mut y = vec![0.0; self.constraints.len()];
        let mut best: Option<(f64, IpmResult)> = None;
        for it in 0..MAX_ITERATIONS {
            let ax = self.op(&x);
            let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let aty = self.adjoint_op(&y);
            let rd: Vec<ComplexMatrix> = herm_blocks(
                self.c
                    .iter()
                    .zip(&s)
                    .zip(&aty)
                    .map(|((c, sb), a)| c.sub(sb).sub(a))
                    .collect(),
            );
            let pobj = inner(&self.c, &x);
            let dobj: f64 = b.iter().zip(&y).map(|(bi, yi)| bi * yi).sum();
            let mu = inner(&x, &s) / n_total as f64;
            let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
            let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + b_norm);
            let dinf = fro(&rd) / (1.0 + c_norm);
            let merit = rel_gap.max(pinf).max(dinf);
            let snapshot = || IpmResult {
                x: x.clone(),
                y: y.clone(),
                primal_obj: pobj,
                dual_obj: dobj,
                iterations: it,
            };
            if best.as_ref().map_or(true, |(m, _)| merit < *m) {
                best = Some((merit, snapshot()));
            }
            if rel_gap < TARGET_GAP && pinf < TARGET_GAP && dinf < TARGET_GAP {
                return Ok(snapshot());
            }
            let sinv = s.iter().map(inverse).collect::<Result<Vec<_>>>();
            let Ok(sinv) = sinv else { break };
            let schur = self.schur(&x, &sinv);
            // predictor
            let xs: Vec<ComplexMatrix> = x.iter().zip(&s).map(|(a, b)| a.matmul(b)).collect();
            let rc_aff: Vec<ComplexMatrix> = xs.iter().map(|m| m.scale_real(-1.0)).collect();
            let Ok((dx_a, _, ds_a)) = self.direction(&schur, &x, &sinv, &rp, &rd, &rc_aff) else { break };
            let ap = max_step(&x, &dx_a)?.min(1.0);
            let ad = max_step(&s, &ds_a)?.min(1.0);
            let x_a: Vec<ComplexMatrix> = x.iter().zip(&dx_a).map(|(a, d)| a.add(&d.scale_real(ap))).collect();
            let s_a: Vec<ComplexMatrix> = s.iter().zip(&ds_a).map(|(a, d)| a.add(&d.scale_real(ad))).collect();
            let mu_a = inner(&x_a, &s_a) / n_total as f64;
            let sigma = (mu_a / mu).clamp(0.0, 1.0).powi(3);
            // corrector
            let rc: Vec<ComplexMatrix> = xs
                .iter()
                .zip(dx_a.iter().zip(&ds_a))
                .map(|(m, (dxa, dsa))| {
                    ComplexMatrix::identity(m.rows())
                        .scale_real(sigma * mu)
                        .sub(m)
                        .sub(&dxa.matmul(dsa))
                })
                .collect();
            let Ok((dx, dy, ds)) = self.direction(&schur, &x, &sinv, &rp, &rd, &rc) else { break };
            let ap = (0.98 * max_step(&x, &dx)?).min(1.0);
            let ad = (0.98 * max_step(&s, &ds)?).min(1.0);
            if ap < 1e-12 && ad < 1e-12 {
                break;
            }
            for (a, d) in x.iter_mut().zip(&dx) {
                *a = a.add(&d.scale_real(ap));
            }
            for (a, d) in s.iter_mut().zip(&ds) {
                *a = a.add(&d.scale_real(ad));
            }
            for (a, d) in y.iter_mut().zip(&dy) {
                *a += ad * d;
            }
        }
        let (merit, res) = best.expect("at least one iterate");
        if merit < 1e-7 {
            return Ok(res);
        }
        Err(Error::SdpNoConvergence {
            gap: (res.primal_obj - res.dual_obj).abs(),
            infeasibility: merit,
            iterations: res.iterations,
        })
    }
}

fn min_eig(m: &HermitianOperator) -> Result<f64> {
    Ok(eigh(m)?.min())
}

/// Projection of `Σ y_k E_k` back to a matrix for the basis of
/// [`hermitian_basis`].
fn from_basis(n: usize, y: &[f64]) -> HermitianOperator {
    let mut m = ComplexMatrix::zeros(n, n);
    for (e, &yk) in hermitian_basis(n).iter().zip(y) {
        for &(r, c, v) in e {
            m[(r, c)] += v * yk;
        }
    }
    HermitianOperator::hermitize(m)
}

static SOLVES: AtomicUsize = AtomicUsize::new(0);
static UNHEALTHY: AtomicUsize = AtomicUsize::new(0);
static WORST_GAP_BITS: AtomicU64 = AtomicU64::new(0);

/// Process-wide tally of finished solves: how many, how many were rejected,
/// and the largest relative gap `gap / max(1, |primal|)` seen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SdpStats {
    pub solves: usize,
    pub unhealthy: usize,
    pub worst_relative_gap: f64,
}

pub fn sdp_stats() -> SdpStats {
    SdpStats {
        solves: SOLVES.load(Ordering::Relaxed),
        unhealthy: UNHEALTHY.load(Ordering::Relaxed),
        worst_relative_gap: f64::from_bits(WORST_GAP_BITS.load(Ordering::Relaxed)),
    }
}

fn finish(
    shape: SdpShape,
    primal_value: f64,
    dual_value: f64,
    primal_vars: Vec<HermitianOperator>,
    dual_vars: Vec<HermitianOperator>,
    min_slack_eig: f64,
    iterations: usize,
) -> Result<SdpSolution> {
    let gap = (primal_value - dual_value).abs();
    let sol = SdpSolution {
        shape,
        primal_value,
        dual_value,
        primal_vars,
        dual_vars,
        gap,
        min_slack_eig,
        iterations,
    };
    SOLVES.fetch_add(1, Ordering::Relaxed);
    // non-negative floats order like their bit patterns
    let rel = gap / primal_value.abs().max(1.0);
    WORST_GAP_BITS.fetch_max(if rel.is_nan() { f64::INFINITY } else { rel }.to_bits(), Ordering::Relaxed);
    if !sol.healthy() {
        UNHEALTHY.fetch_add(1, Ordering::Relaxed);
        return Err(Error::SdpNoConvergence {
            gap,
            infeasibility: -min_slack_eig.min(0.0),
            iterations,
        });
    }
    Ok(sol)
}

/// Optimal guessing probability `max Σ_x p_x tr(M_x ρ_x)` over POVMs.
/// `primal_vars` are the POVM elements, `dual_vars = [Y]` with
/// `Y ⪰ p_x ρ_x` and `dual_value = tr Y`.
pub fn solve_guessing(e: &Ensemble) -> Result<SdpSolution> {
    let (n, d) = (e.len(), e.dim());
    let c = e
        .probs()
        .iter()
        .zip(e.states())
        .map(|(&p, s)| s.op().matrix().scale_real(-p))
        .collect();
    let constraints = hermitian_basis(d)
        .iter()
        .map(|basis| {
            let mut con = Constraint { rhs: basis_trace(basis), ..Default::default() };
            for x in 0..n {
                for &(r, c, v) in basis {
                    con.push(x, r, c, v);
                }
            }
            con
        })
        .collect();
    let sdp = StandardSdp { blocks: vec![d; n], c, constraints };
    let res = sdp.solve()?;
    let povm: Vec<HermitianOperator> = res.x.into_iter().map(HermitianOperator::hermitize).collect();
    // S_x = −p_x ρ_x − Σ y_k E_k, so Y = Σ y_k E_k negated
    let y_op = from_basis(d, &res.y).scale(-1.0);
    let primal: f64 = povm
        .iter()
        .zip(e.probs().iter().zip(e.states()))
        .map(|(m, (&p, s))| p * m.trace_product(s.op()))
        .sum();
    let mut slack = f64::INFINITY;
    let mut total = HermitianOperator::zeros(d);
    for (m, (&p, s)) in povm.iter().zip(e.probs().iter().zip(e.states())) {
        slack = slack.min(min_eig(m)?);
        slack = slack.min(min_eig(&y_op.sub(&s.op().scale(p)))?);
        total = total.add(m);
    }
    let completeness = total.distance(&HermitianOperator::identity(d));
    slack = slack.min(-completeness);
    finish(SdpShape::Guessing, primal, y_op.trace(), povm, vec![y_op], slack, res.iterations)
}

/// Conditional min-entropy program: `primal_value = min tr σ` over
/// `𝟙_A ⊗ σ ⪰ ρ_AB` (so `H̃↑_∞ = −log₂ primal_value`), `dual_value =
/// max tr(ρ X)` over `X ⪰ 0`, `tr_A X ⪯ 𝟙`. `primal_vars = [σ]`,
/// `dual_vars = [X]`.
pub fn solve_min_entropy(state: &DensityOperator) -> Result<SdpSolution> {
    let (da, db) = state.bipartite_dims()?;
    let n = da * db;
    let c = vec![state.op().matrix().scale_real(-1.0), ComplexMatrix::zeros(db, db)];
    let constraints = hermitian_basis(db)
        .iter()
        .map(|basis| {
            let mut con = Constraint { rhs: basis_trace(basis), ..Default::default() };
            for a in 0..da {
                for &(r, c, v) in basis {
                    con.push(0, a * db + r, a * db + c, v);
                }
            }
            for &(r, c, v) in basis {
                con.push(1, r, c, v);
            }
            con
        })
        .collect();
    let sdp = StandardSdp { blocks: vec![n, db], c, constraints };
    let res = sdp.solve()?;
    let sigma = from_basis(db, &res.y).scale(-1.0);
    let x = HermitianOperator::hermitize(res.x[0].clone());
    let profile = state.profile().clone();
    let lifted = identity_tensor(da, &sigma);
    let marg = partial_trace(&x, &profile, &[1])?;
    let slack = [
        min_eig(&lifted.sub(state.op()))?,
        min_eig(&sigma)?,
        min_eig(&x)?,
        min_eig(&HermitianOperator::identity(db).sub(&marg))?,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    let dual = x.trace_product(state.op());
    finish(SdpShape::MinEntropy, sigma.trace(), dual, vec![sigma], vec![x], slack, res.iterations)
}

/// `γ = max tr(W τ_{ACA'C'})` over `tr_{A'C'} W ⪯ 𝟙_A ⊗ σ_C`, `tr σ ≤ 1`,
/// with `τ_{ACA'C'}` the canonical purification; `γ = sup_σ F(τ, 𝟙⊗σ)²`.
/// `primal_vars = [W, σ]`; the dual is `min μ` over `Z_AC ⊗ 𝟙 ⪰ τ_{ACA'C'}`,
/// `μ 𝟙 ⪰ tr_A Z`, with `dual_vars = [Z_AC]` and `dual_value = μ`.
pub fn solve_fidelity_primal(tau: &DensityOperator) -> Result<SdpSolution> {
    let (da, dc) = tau.bipartite_dims()?;
    let n = da * dc;
    let big = n * n;
    let pur = canonical_purification(tau)?;
    let tau_pur = HermitianOperator::projector(pur.amplitudes());
    // blocks: W, σ, S1 (slack of the operator constraint), s (slack of tr σ ≤ 1)
    let c = vec![
        tau_pur.matrix().scale_real(-1.0),
        ComplexMatrix::zeros(dc, dc),
        ComplexMatrix::zeros(n, n),
        ComplexMatrix::zeros(1, 1),
    ];
    let mut constraints: Vec<Constraint> = hermitian_basis(n)
        .iter()
        .map(|basis| {
            let mut con = Constraint::default();
            for &(r, c, v) in basis {
                for k in 0..n {
                    con.push(0, r * n + k, c * n + k, v);
                }
                con.push(2, r, c, v);
                if r / dc == c / dc {
                    con.push(1, r % dc, c % dc, -v);
                }
            }
            con
        })
        .collect();
    let mut trace_con = Constraint { rhs: 1.0, ..Default::default() };
    for i in 0..dc {
        trace_con.push(1, i, i, ONE);
    }
    trace_con.push(3, 0, 0, ONE);
    constraints.push(trace_con);
    let sdp = StandardSdp { blocks: vec![big, dc, n, 1], c, constraints };
    let res = sdp.solve()?;
    let w = HermitianOperator::hermitize(res.x[0].clone());
    let sigma = HermitianOperator::hermitize(res.x[1].clone());
    let m = res.y.len();
    // dual: S_W = −τ_pur − Z⊗𝟙 ⪰ 0 with Z = Σ y_k E_k, so Z_AC := −Z; μ = −y_last
    let z = from_basis(n, &res.y[..m - 1]).scale(-1.0);
    let mu = -res.y[m - 1];
    let primal = w.trace_product(&tau_pur);
    let profile = DimensionProfile::bipartite(n, n);
    let marg = partial_trace(&w, &profile, &[0])?;
    let z_big = tensor(&z, &HermitianOperator::identity(n));
    let tr_a_z = partial_trace(&z, tau.profile(), &[1])?;
    let slack = [
        min_eig(&w)?,
        min_eig(&sigma)?,
        min_eig(&identity_tensor(da, &sigma).sub(&marg))?,
        1.0 - sigma.trace(),
        min_eig(&z_big.sub(&tau_pur))?,
        min_eig(&HermitianOperator::identity(dc).scale(mu).sub(&tr_a_z))?,
        min_eig(&z)?,
        mu,
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    finish(SdpShape::FidelityPrimal, primal, mu, vec![w, sigma], vec![z], slack, res.iterations)
}

/// The explicit dual point `(μ*, Z*)` built from the Petz optimizer at
/// order ½, and its feasibility.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateReport {
    pub mu_star: f64,
    /// `F_pg(τ, 𝟙⊗σ*)²`
    pub f_pg_squared: f64,
    /// `λ_min(Z ⊗ 𝟙 − τ_{ACA'C'})` for the Hermitian part `Z` of `Z*`.
    pub min_eig_operator: f64,
    /// `λ_min(μ* 𝟙 − tr_A Z)`
    pub min_eig_trace: f64,
    /// `‖Z* − Z*†‖_∞`; a dual variable has to be Hermitian.
    pub non_hermiticity: f64,
    pub feasible: bool,
    pub matches_fpg: bool,
}

/// Builds `μ* = (tr √τ √(𝟙⊗σ*))²` and
/// `Z* = tr(√τ √(𝟙⊗σ*)) · τ^{1/2} (𝟙⊗σ*)^{-1/2}` and checks them against the
/// dual constraints `Z ⊗ 𝟙 ⪰ τ_{ACA'C'}`, `μ 𝟙 ⪰ tr_A Z`.
///
/// `Z*` is not Hermitian unless `τ` commutes with `𝟙⊗σ*`; feasibility is
/// then judged on its Hermitian part and the defect is reported separately.
pub fn verify_fidelity_certificate(tau: &DensityOperator) -> Result<CertificateReport> {
    let (da, dc) = tau.bipartite_dims()?;
    let n = da * dc;
    let sigma = petz_up_optimizer(0.5, tau)?;
    let lifted = identity_tensor(da, sigma.op());
    let sqrt_tau = mat_pow(tau.op(), 0.5)?;
    let sqrt_s = mat_pow(&lifted, 0.5)?;
    let inv_sqrt_s = mat_pow(&lifted, -0.5)?;
    let fpg = sqrt_tau.trace_product(&sqrt_s);
    let mu_star = fpg * fpg;
    let z_full = sqrt_tau.matrix().matmul(inv_sqrt_s.matrix()).scale_real(fpg);
    let asym = z_full.sub(&z_full.adjoint());
    let non_hermiticity = schatten_norm(&asym, Schatten::Inf)? / 2.0;
    let z = HermitianOperator::hermitize(z_full);
    let pur = canonical_purification(tau)?;
    let tau_pur = HermitianOperator::projector(pur.amplitudes());
    let z_big = tensor(&z, &HermitianOperator::identity(n));
    let min_eig_operator = min_eig(&z_big.sub(&tau_pur))?;
    let tr_a_z = partial_trace(&z, tau.profile(), &[1])?;
    let min_eig_trace = min_eig(&HermitianOperator::identity(dc).scale(mu_star).sub(&tr_a_z))?;
    let feasible = min_eig_operator >= -FEASIBILITY_TOL && min_eig_trace >= -FEASIBILITY_TOL && non_hermiticity <= FEASIBILITY_TOL;
    let f_pg_squared = purification_overlap(tau.op(), &lifted)?.powi(2);
    Ok(CertificateReport {
        mu_star,
        f_pg_squared,
        min_eig_operator,
        min_eig_trace,
        non_hermiticity,
        feasible,
        matches_fpg: (mu_star - f_pg_squared).abs() <= 1e-10,
    })
}
