//! Petz and minimal Rényi divergences, their limit orders, and verifiers for
//! the ALT inequality, its reverse, and the sandwich between the families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{
    commutator_norm, eigh_psd, mat_pow, schatten_norm_hermitian, ComplexMatrix, HermitianOperator,
    Schatten,
};
use crate::report::InequalityReport;

/// Slack for inequality checks, scaled by `max(1, |rhs|)`.
pub const INEQUALITY_TOL: f64 = 1e-9;
/// Threshold under which two divergences count as equal.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Commutator norm under which two operators count as commuting.
pub const COMMUTE_TOL: f64 = 1e-10;
/// Mass of `ρ` outside `supp σ`, relative to `tr ρ`, that counts as a
/// support violation.
pub const SUPPORT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivergenceFamily {
    Petz,
    Minimal,
}

impl DivergenceFamily {
    pub fn name(self) -> &'static str {
        match self {
            DivergenceFamily::Petz => "Petz",
            DivergenceFamily::Minimal => "Minimal",
        }
    }
}

/// Exponents `(q, r, a, b)` of the reverse ALT inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AltExponents {
    pub q: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
}

impl AltExponents {
    /// Validates `1/(2rq) = 1/(2q) + 1/a + 1/b` for `r ≤ 1`, or
    /// `1/(2q) = 1/(2rq) + 1/a + 1/b` for `r ≥ 1`, to 1e-12.
    pub fn new(q: f64, r: f64, a: f64, b: f64) -> Result<Self> {
        if !(q > 0.0 && r > 0.0 && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "exponents must be positive: q={q}, r={r}, a={a}, b={b}"
            )));
        }
        let e = Self { q, r, a, b };
        let res = e.residual();
        if res.abs() > 1e-12 {
            return Err(Error::ExponentConstraint(res));
        }
        Ok(e)
    }

    /// Fills in `a` from `(q, r, b)` so the constraint holds exactly.
    pub fn solve_a(q: f64, r: f64, b: f64) -> Result<Self> {
        let inv_a = ((1.0 / (2.0 * r * q)) - 1.0 / (2.0 * q)).abs() - 1.0 / b;
        if inv_a < 0.0 {
            return Err(Error::ExponentConstraint(inv_a));
        }
        Self::new(q, r, 1.0 / inv_a, b)
    }

    fn residual(&self) -> f64 {
        let (q, r) = (self.q, self.r);
        let tail = 1.0 / self.a + 1.0 / self.b;
        if r <= 1.0 {
            1.0 / (2.0 * r * q) - 1.0 / (2.0 * q) - tail
        } else {
            1.0 / (2.0 * q) - 1.0 / (2.0 * r * q) - tail
        }
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::UnsupportedOrder {
            alpha,
            what: "Q_alpha (use d_alpha for the limit orders)",
        });
    }
    Ok(())
}

/// `tr ρ^α σ^{1−α}` (Petz) or `tr (σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α`
/// (minimal), negative powers taken as generalized inverses.
pub fn q_alpha(
    family: DivergenceFamily,
    rho: &HermitianOperator,
    sigma: &HermitianOperator,
    alpha: f64,
) -> Result<f64> {
    check_order(alpha)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    match family {
        DivergenceFamily::Petz => {
            // Σ_ij |⟨r_i|s_j⟩|² r_i^α s_j^{1−α}, which keeps small eigenvalues accurate
            let er = eigh_psd(rho)?;
            let es = eigh_psd(sigma)?;
            let (tr_, ts) = (er.rank_tolerance(), es.rank_tolerance());
            let overlap = er.vectors.adjoint().matmul(&es.vectors);
            let mut acc = 0.0;
            for (i, &r) in er.values.iter().enumerate() {
                if r <= tr_ {
                    continue;
                }
                let ra = r.powf(alpha);
                for (j, &s) in es.values.iter().enumerate() {
                    if s > ts {
                        acc += overlap[(i, j)].norm_sqr() * ra * s.powf(1.0 - alpha);
                    }
                }
            }
            Ok(acc)
        }
        DivergenceFamily::Minimal => Ok(minimal_log2_q(rho, sigma, alpha)?.exp2()),
    }
}

/// `log₂ Q̃_α`, scaled by the largest eigenvalue so large orders do not
/// overflow.
fn minimal_log2_q(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    let (k, rank) = graded_sandwich(rho, sigma, (1.0 - alpha) / (2.0 * alpha))?;
    if rank == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    let e = eigh_psd(&k)?;
    let top = e.max();
    let rel = e.trace_top(rank, |x| (x / top).powf(alpha));
    Ok(alpha * top.log2() + rel.log2())
}

/// `σ^p ρ σ^p` compressed to `supp σ` and expressed in the eigenbasis of `σ`
/// (same nonzero spectrum), with its rank. The result is a diagonally
/// graded matrix `D ρ' D`, on which Jacobi resolves small eigenvalues to
/// high relative accuracy. Since `D` is invertible on the support, the rank
/// is that of the compression `ρ'` and is read off there, where it is well
/// conditioned; eigenvalues of `D ρ' D` far below any global tolerance are
/// genuine and matter once raised to a small power.
fn graded_sandwich(rho: &HermitianOperator, sigma: &HermitianOperator, p: f64) -> Result<(HermitianOperator, usize)> {
    let es = eigh_psd(sigma)?;
    let tol = es.rank_tolerance();
    let idx: Vec<usize> = (0..es.dim()).filter(|&i| es.values[i] > tol).collect();
    let d: Vec<f64> = idx.iter().map(|&i| es.values[i].powf(p)).collect();
    let rotated = rho.conjugate_by(&es.vectors.adjoint());
    let m = rotated.matrix();
    let n = idx.len();
    let compressed = HermitianOperator::hermitize(ComplexMatrix::from_fn(n, n, |i, j| m[(idx[i], idx[j])]));
    let rank = if n == 0 { 0 } else { eigh_psd(&compressed)?.rank() };
    let c = compressed.matrix();
    let k = HermitianOperator::hermitize(ComplexMatrix::from_fn(n, n, |i, j| c[(i, j)] * (d[i] * d[j])));
    Ok((k, rank))
}

/// Whether `ker σ ⊄ ker ρ`, measured by the weight of `ρ` outside `supp σ`.
pub fn support_violated(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<bool> {
    let proj = eigh_psd(sigma)?.support_projector();
    let outside = rho.trace() - rho.trace_product(&proj);
    Ok(outside > SUPPORT_TOL * rho.trace().abs().max(f64::MIN_POSITIVE))
}

fn require_nonzero(rho: &HermitianOperator) -> Result<f64> {
    let tr = rho.trace();
    if !(tr > 0.0) {
        return Err(Error::ZeroOperator);
    }
    Ok(tr)
}

/// `D_α(ρ‖σ)` in bits as an extended real. Orders `0`, `1` and `∞` are the
/// limits; `+∞` whenever `α ≥ 1` and `supp ρ ⊄ supp σ`, or `α < 1` and the
/// supports are orthogonal.
pub fn d_alpha(
    family: DivergenceFamily,
    rho: &HermitianOperator,
    sigma: &HermitianOperator,
    alpha: f64,
) -> Result<f64> {
    let tr = require_nonzero(rho)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    match (family, alpha) {
        (_, a) if a.is_nan() || a < 0.0 => {
            return Err(Error::UnsupportedOrder { alpha, what: "D_alpha" })
        }
        (DivergenceFamily::Petz, a) if a.is_infinite() => {
            return Err(Error::UnsupportedOrder { alpha, what: "the Petz divergence" })
        }
        (DivergenceFamily::Minimal, a) if a == 0.0 => {
            return Err(Error::UnsupportedOrder { alpha, what: "the minimal divergence" })
        }
        _ => {}
    }
    if alpha >= 1.0 && support_violated(rho, sigma)? {
        return Ok(f64::INFINITY);
    }
    if alpha == 1.0 {
        return relative_entropy(rho, sigma, tr);
    }
    if alpha == 0.0 {
        let proj = eigh_psd(rho)?.support_projector();
        return Ok(neg_log2(sigma.trace_product(&proj) / tr));
    }
    if alpha.is_infinite() {
        let (k, _) = graded_sandwich(rho, sigma, -0.5)?;
        return Ok(schatten_norm_hermitian(&k, Schatten::Inf)?.log2());
    }
    let log_q = match family {
        DivergenceFamily::Petz => q_alpha(family, rho, sigma, alpha)?.log2(),
        DivergenceFamily::Minimal => minimal_log2_q(rho, sigma, alpha)?,
    };
    if log_q == f64::NEG_INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok((log_q - tr.log2()) / (alpha - 1.0))
}

fn neg_log2(x: f64) -> f64 {
    if x <= 0.0 {
        f64::INFINITY
    } else {
        -x.log2()
    }
}

/// `tr ρ (log ρ − log σ) / tr ρ`, assuming `supp ρ ⊆ supp σ`.
fn relative_entropy(rho: &HermitianOperator, sigma: &HermitianOperator, tr: f64) -> Result<f64> {
    let er = eigh_psd(rho)?;
    let self_term = er.trace_support(|x| x * x.log2());
    let log_sigma = eigh_psd(sigma)?.map_support(f64::log2);
    Ok((self_term - rho.trace_product(&log_sigma)) / tr)
}

/// `(lhs, rhs)` of the reverse ALT inequality for the given exponents.
pub fn reverse_alt_sides(
    a: &HermitianOperator,
    b: &HermitianOperator,
    e: &AltExponents,
) -> Result<(f64, f64)> {
    let AltExponents { q, r, a: sa, b: sb } = *e;
    let lhs = sandwich_trace(a, b, 1.0, r * q)?;
    let core = sandwich_trace(a, b, r, q)?.powf(r);
    let rq2 = 2.0 * r * q;
    let rhs = if r <= 1.0 {
        let na = power_norm(a, (1.0 - r) / 2.0, sa)?;
        let nb = power_norm(b, (1.0 - r) / 2.0, sb)?;
        core * na.powf(rq2) * nb.powf(rq2)
    } else {
        let na = power_norm(a, (r - 1.0) / 2.0, sa)?;
        let nb = power_norm(b, (r - 1.0) / 2.0, sb)?;
        core * na.powf(-rq2) * nb.powf(-rq2)
    };
    Ok((lhs, rhs))
}

/// `tr (B^{r/2} A^r B^{r/2})^q`
pub fn sandwich_trace(a: &HermitianOperator, b: &HermitianOperator, r: f64, q: f64) -> Result<f64> {
    let (k, rank) = graded_sandwich(&mat_pow(a, r)?, b, r / 2.0)?;
    if rank == 0 {
        return Ok(0.0);
    }
    Ok(eigh_psd(&k)?.trace_top(rank, |x| x.powf(q)))
}

/// `‖M^p‖_s` for positive semidefinite `M` and `p ≥ 0`.
fn power_norm(m: &HermitianOperator, p: f64, s: f64) -> Result<f64> {
    schatten_norm_hermitian(&mat_pow(m, p)?, Schatten::from_f64(s))
}

/// Reverse ALT: `≤` for `r ≤ 1`, `≥` for `r > 1`.
pub fn check_reverse_alt(
    a: &HermitianOperator,
    b: &HermitianOperator,
    e: &AltExponents,
) -> Result<InequalityReport> {
    AltExponents::new(e.q, e.r, e.a, e.b)?;
    let (lhs, rhs) = reverse_alt_sides(a, b, e)?;
    Ok(if e.r <= 1.0 {
        InequalityReport::le(lhs, rhs, INEQUALITY_TOL)
    } else {
        InequalityReport::ge(lhs, rhs, INEQUALITY_TOL)
    })
}

/// The earlier reverse ALT bound
/// `(tr(B^{r/2}A^rB^{r/2})^q)^r (tr A^{rq} ‖B‖_∞^{rq})^{1−r}`.
pub fn audenaert_bound(a: &HermitianOperator, b: &HermitianOperator, q: f64, r: f64) -> Result<f64> {
    let core = sandwich_trace(a, b, r, q)?.powf(r);
    let tra = eigh_psd(a)?.trace_support(|x| x.powf(r * q));
    let nb = schatten_norm_hermitian(b, Schatten::Inf)?;
    Ok(core * (tra * nb.powf(r * q)).powf(1.0 - r))
}

/// ALT: `tr(B^{r/2}A^rB^{r/2})^q ≤ tr(B^{1/2}AB^{1/2})^{rq}` for
/// `r ∈ [0,1]`, reversed for `r ≥ 1`.
pub fn check_alt(a: &HermitianOperator, b: &HermitianOperator, q: f64, r: f64) -> Result<InequalityReport> {
    if !(q >= 0.0) || !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("need q, r ≥ 0, got q={q}, r={r}")));
    }
    let lhs = sandwich_trace(a, b, r, q)?;
    let rhs = sandwich_trace(a, b, 1.0, r * q)?;
    Ok(if r <= 1.0 {
        InequalityReport::le(lhs, rhs, INEQUALITY_TOL)
    } else {
        InequalityReport::ge(lhs, rhs, INEQUALITY_TOL)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub alpha: f64,
    pub petz: f64,
    pub minimal: f64,
    /// `(1−α)(log tr ρ − log tr σ)`
    pub correction: f64,
    /// `α D̄ + correction ≤ D̃`
    pub lower: InequalityReport,
    /// `D̃ ≤ D̄`
    pub upper: InequalityReport,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower.holds && self.upper.holds
    }
}

/// `α D̄_α + (1−α)(log tr ρ − log tr σ) ≤ D̃_α ≤ D̄_α` for `α ∈ (0, 1]`.
pub fn check_sandwich(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<SandwichReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::UnsupportedOrder {
            alpha,
            what: "the sandwich bound (needs 0 < alpha <= 1)",
        });
    }
    let petz = d_alpha(DivergenceFamily::Petz, rho, sigma, alpha)?;
    let minimal = d_alpha(DivergenceFamily::Minimal, rho, sigma, alpha)?;
    let correction = (1.0 - alpha) * (rho.trace().log2() - sigma.trace().log2());
    Ok(SandwichReport {
        alpha,
        petz,
        minimal,
        correction,
        lower: InequalityReport::le(alpha * petz + correction, minimal, INEQUALITY_TOL),
        upper: InequalityReport::le(minimal, petz, INEQUALITY_TOL),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub commutator: f64,
    pub gap: f64,
    pub commute: bool,
    pub divergences_equal: bool,
}

impl EqualityReport {
    /// The two booleans agree, as the equivalence asserts.
    pub fn consistent(&self) -> bool {
        self.commute == self.divergences_equal
    }
}

/// Compares `[ρ, σ] = 0` against `D̄_α = D̃_α` for `α ∈ (0, 1)`.
pub fn equality_condition(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<EqualityReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::UnsupportedOrder {
            alpha,
            what: "the commutation equality condition (needs 0 < alpha < 1)",
        });
    }
    let commutator = commutator_norm(rho, sigma)?;
    let petz = d_alpha(DivergenceFamily::Petz, rho, sigma, alpha)?;
    let minimal = d_alpha(DivergenceFamily::Minimal, rho, sigma, alpha)?;
    let gap = if petz == minimal { 0.0 } else { (petz - minimal).abs() };
    Ok(EqualityReport {
        commutator,
        gap,
        commute: commutator <= COMMUTE_TOL,
        divergences_equal: gap <= EQUALITY_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ONE;
    use crate::states::{random_density, random_unitary, substream};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use DivergenceFamily::{Minimal, Petz};

    fn plus() -> HermitianOperator {
        HermitianOperator::projector(&[ONE * 0.5_f64.sqrt(), ONE * 0.5_f64.sqrt()])
    }

    fn rand_op(dim: usize, seed: u64) -> HermitianOperator {
        random_density(dim, dim, seed).into_operator()
    }

    #[test]
    fn q_alpha_examples() {
        let half = HermitianOperator::diag(&[0.5, 0.5]);
        for fam in [Petz, Minimal] {
            assert!((q_alpha(fam, &half, &half, 0.5).unwrap() - 1.0).abs() < 1e-15);
            let rho = HermitianOperator::diag(&[0.75, 0.25]);
            let classical = 0.75_f64.sqrt() * 0.5_f64.sqrt() + 0.25_f64.sqrt() * 0.5_f64.sqrt();
            assert!((q_alpha(fam, &rho, &half, 0.5).unwrap() - classical).abs() < 1e-14);
            assert!((classical - 0.965926).abs() < 1e-6);
        }
        let sigma = HermitianOperator::diag(&[0.75, 0.25]);
        let petz = q_alpha(Petz, &plus(), &sigma, 0.5).unwrap();
        let min = q_alpha(Minimal, &plus(), &sigma, 0.5).unwrap();
        assert!((petz - (3f64.sqrt() + 1.0) / 4.0).abs() < 1e-14);
        assert!((min - 0.5_f64.sqrt()).abs() < 1e-14);
        assert!(q_alpha(Petz, &sigma, &sigma, 1.0).is_err());
        assert!(q_alpha(Petz, &sigma, &sigma, 0.0).is_err());
    }

    #[test]
    fn d_alpha_examples() {
        for seed in 0..3 {
            let rho = rand_op(3, seed);
            for fam in [Petz, Minimal] {
                for a in [0.25, 0.5, 1.0, 2.0] {
                    assert!(d_alpha(fam, &rho, &rho, a).unwrap().abs() < 1e-12, "{fam:?} {a}");
                }
            }
        }
        let rho = HermitianOperator::diag(&[0.75, 0.25]);
        let half = HermitianOperator::diag(&[0.5, 0.5]);
        for fam in [Petz, Minimal] {
            let d = d_alpha(fam, &rho, &half, 0.5).unwrap();
            assert!((d + 2.0 * 0.965926_f64.log2()).abs() < 1e-6, "{d}");
        }
        let p0 = HermitianOperator::diag(&[1.0, 0.0]);
        let p1 = HermitianOperator::diag(&[0.0, 1.0]);
        for fam in [Petz, Minimal] {
            assert_eq!(d_alpha(fam, &p0, &p1, 2.0).unwrap(), f64::INFINITY);
            assert_eq!(d_alpha(fam, &p0, &p1, 1.0).unwrap(), f64::INFINITY);
            assert_eq!(d_alpha(fam, &p0, &p1, 0.5).unwrap(), f64::INFINITY);
        }
        assert!(d_alpha(Petz, &p0, &p1, f64::INFINITY).is_err());
        assert!(d_alpha(Minimal, &p0, &p1, 0.0).is_err());
        assert!(matches!(
            d_alpha(Petz, &HermitianOperator::zeros(2), &p1, 0.5),
            Err(Error::ZeroOperator)
        ));
    }

    #[test]
    fn limit_orders_match_nearby_orders() {
        let rho = rand_op(3, 21);
        let sigma = rand_op(3, 22);
        for fam in [Petz, Minimal] {
            let d1 = d_alpha(fam, &rho, &sigma, 1.0).unwrap();
            let below = d_alpha(fam, &rho, &sigma, 1.0 - 1e-6).unwrap();
            let above = d_alpha(fam, &rho, &sigma, 1.0 + 1e-6).unwrap();
            assert!((d1 - below).abs() < 1e-5 && (d1 - above).abs() < 1e-5);
        }
        let d0 = d_alpha(Petz, &rho, &sigma, 0.0).unwrap();
        assert!((d0 - d_alpha(Petz, &rho, &sigma, 1e-7).unwrap()).abs() < 1e-5);
        // full-rank ρ: D̄_0 = −log tr σ = 0
        assert!(d0.abs() < 1e-12);
        let dinf = d_alpha(Minimal, &rho, &sigma, f64::INFINITY).unwrap();
        let d_large = d_alpha(Minimal, &rho, &sigma, 300.0).unwrap();
        assert!((dinf - d_large).abs() < 2e-2, "{dinf} vs {d_large}");
        assert!(d_large <= dinf + 1e-12);
    }

    #[test]
    fn petz_zero_on_rank_deficient_rho() {
        let rho = HermitianOperator::diag(&[1.0, 0.0]);
        let sigma = HermitianOperator::diag(&[0.25, 0.75]);
        assert!((d_alpha(Petz, &rho, &sigma, 0.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reverse_alt_examples() {
        let a = rand_op(3, 1).scale(2.0);
        let b = rand_op(3, 2).scale(0.7);
        let trivial = AltExponents::new(1.3, 1.0, f64::INFINITY, f64::INFINITY).unwrap();
        let (lhs, rhs) = reverse_alt_sides(&a, &b, &trivial).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * lhs.max(1.0));

        let e = AltExponents::new(1.0, 0.5, 4.0, 4.0).unwrap();
        assert!(AltExponents::new(1.0, 0.5, 8.0, 8.0).is_err());
        assert!(check_reverse_alt(&a, &b, &e).unwrap().holds);

        for (q, r) in [(1.0, 0.5), (0.7, 0.3), (2.0, 3.0), (0.5, 1.7)] {
            let a_exp = 2.0 * r * q / (1.0_f64 - r).abs();
            let e = AltExponents::new(q, r, a_exp, f64::INFINITY).unwrap();
            let (_, rhs) = reverse_alt_sides(&a, &b, &e).unwrap();
            let old = audenaert_bound(&a, &b, q, r).unwrap();
            assert!((rhs - old).abs() < 1e-10 * old.max(1.0), "q={q} r={r}: {rhs} vs {old}");
            assert!(check_reverse_alt(&a, &b, &e).unwrap().holds);
        }
        assert!(matches!(
            AltExponents::new(1.0, 0.5, 2.0, 2.0),
            Err(Error::ExponentConstraint(_))
        ));
    }

    #[test]
    fn alt_examples() {
        let a = HermitianOperator::diag(&[0.3, 1.2, 2.0]);
        let b = HermitianOperator::diag(&[1.5, 0.1, 0.4]);
        for (q, r) in [(1.0, 0.5), (2.0, 3.0)] {
            let rep = check_alt(&a, &b, q, r).unwrap();
            assert!((rep.lhs - rep.rhs).abs() < 1e-12);
        }
        let a = rand_op(3, 5);
        let b = rand_op(3, 6);
        assert!(check_alt(&a, &b, 2.0, 0.5).unwrap().holds);
        assert!(check_alt(&a, &b, 1.0, 2.0).unwrap().holds);
    }

    #[test]
    fn sandwich_examples() {
        let d1 = HermitianOperator::diag(&[0.2, 0.8]);
        let d2 = HermitianOperator::diag(&[0.6, 0.4]);
        let rep = check_sandwich(&d1, &d2, 0.5).unwrap();
        assert!(rep.holds() && (rep.petz - rep.minimal).abs() < 1e-12);

        let sigma = HermitianOperator::diag(&[0.75, 0.25]);
        let rep = check_sandwich(&plus(), &sigma, 0.5).unwrap();
        let petz = -2.0 * ((3f64.sqrt() + 1.0) / 4.0).log2();
        assert!((rep.petz - petz).abs() < 1e-13 && (petz - 1.1000).abs() < 1e-4);
        assert!((rep.minimal - 1.0).abs() < 1e-13);
        assert!((rep.lower.lhs - 0.5 * petz).abs() < 1e-13);
        assert!(rep.holds());

        let rho = rand_op(3, 7).scale(2.0);
        let sigma = rand_op(3, 8).scale(0.5);
        let rep = check_sandwich(&rho, &sigma, 0.3).unwrap();
        assert!(rep.correction > 0.0 && rep.holds());
    }

    #[test]
    fn equality_condition_examples() {
        let d1 = HermitianOperator::diag(&[0.2, 0.8]);
        let d2 = HermitianOperator::diag(&[0.6, 0.4]);
        let rep = equality_condition(&d1, &d2, 0.5).unwrap();
        assert!(rep.commute && rep.divergences_equal);

        let sigma = HermitianOperator::diag(&[0.75, 0.25]);
        let rep = equality_condition(&plus(), &sigma, 0.5).unwrap();
        assert!(!rep.commute && !rep.divergences_equal);
        assert!((rep.gap - 0.1000).abs() < 1e-4);

        let mut rng = substream(1, 0);
        let v = random_unitary(3, &mut rng);
        let r = HermitianOperator::from_spectrum(&[0.1, 0.3, 0.6], &v);
        let s = HermitianOperator::from_spectrum(&[0.5, 0.2, 0.3], &v);
        let rep = equality_condition(&r, &s, 0.5).unwrap();
        assert!(rep.commute && rep.divergences_equal && rep.consistent());
    }

    fn dephase(m: &HermitianOperator) -> HermitianOperator {
        let n = m.dim();
        HermitianOperator::hermitize(ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                m.matrix()[(i, i)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn minimal_below_petz(seed in any::<u64>(), dim in 2usize..5, alpha in prop::sample::select(vec![0.2, 0.5, 0.8, 1.3, 1.7, 2.0])) {
            let rho = rand_op(dim, seed);
            let sigma = rand_op(dim, seed ^ 0x9e37);
            let petz = d_alpha(Petz, &rho, &sigma, alpha).unwrap();
            let min = d_alpha(Minimal, &rho, &sigma, alpha).unwrap();
            prop_assert!(min <= petz + 1e-9 * petz.abs().max(1.0));
        }

        #[test]
        fn reverse_direction_is_substitution(seed in any::<u64>(), q in 0.3f64..2.0, r in 1.1f64..3.0, split in 0.1f64..0.9) {
            // the inequality for r ≥ 1 at (A, B, r, q) equals the r ≤ 1 form at (A^r, B^r, 1/r, qr)
            let a = rand_op(3, seed).scale(1.5);
            let b = rand_op(3, seed.wrapping_add(1));
            let total = 1.0 / (2.0 * q) - 1.0 / (2.0 * r * q);
            let e = AltExponents::new(q, r, 1.0 / (split * total), 1.0 / ((1.0 - split) * total)).unwrap();
            let (lhs, rhs) = reverse_alt_sides(&a, &b, &e).unwrap();
            let ar = mat_pow(&a, r).unwrap();
            let br = mat_pow(&b, r).unwrap();
            let sub = AltExponents::new(q * r, 1.0 / r, e.a, e.b).unwrap();
            let (slhs, srhs) = reverse_alt_sides(&ar, &br, &sub).unwrap();
            // rearranging the substituted r ≤ 1 form gives the r ≥ 1 form exactly
            let rearranged = lhs * (slhs / srhs).powf(r);
            prop_assert!((rearranged - rhs).abs() <= 1e-9 * rhs.max(1.0));
            prop_assert!(slhs <= srhs * (1.0 + 1e-9));
            prop_assert!(lhs >= rhs * (1.0 - 1e-9));
        }

        #[test]
        fn dephasing_does_not_increase(seed in any::<u64>(), alpha in prop::sample::select(vec![0.5, 0.75, 2.0])) {
            let rho = rand_op(3, seed);
            let sigma = rand_op(3, seed ^ 0x51);
            let mut fams = vec![Petz];
            if alpha <= 1.0 { fams.push(Minimal); }
            for fam in fams {
                let before = d_alpha(fam, &rho, &sigma, alpha).unwrap();
                let after = d_alpha(fam, &dephase(&rho), &dephase(&sigma), alpha).unwrap();
                prop_assert!(after <= before + 1e-9);
            }
        }

        #[test]
        fn dominance_below_one(seed in any::<u64>(), alpha in 0.1f64..0.99, extra in 0.0f64..1.0) {
            let rho = rand_op(3, seed);
            let sigma = rand_op(3, seed ^ 7);
            let bigger = sigma.add(&rand_op(3, seed ^ 11).scale(extra));
            for fam in [Petz, Minimal] {
                let q = q_alpha(fam, &rho, &sigma, alpha).unwrap();
                let q2 = q_alpha(fam, &rho, &bigger, alpha).unwrap();
                prop_assert!(q <= q2 + 1e-12);
            }
        }
    }
}
