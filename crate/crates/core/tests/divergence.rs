use num_complex::Complex64;
use proptest::prelude::*;
use renyi_core::divergence::*;
use renyi_core::matcore::{ComplexMatrix, HermitianOperator};
use renyi_core::states::{random_density_from, substream};
use DivergenceFamily::{Minimal, Petz};

/// `λ₁|u⟩⟨u| + λ₂|v⟩⟨v|` with `u = (cos θ, e^{iφ} sin θ)`.
fn qubit(l1: f64, l2: f64, theta: f64, phi: f64) -> HermitianOperator {
    let (c, s) = (theta.cos(), theta.sin());
    let e = Complex64::from_polar(1.0, phi);
    let u = [Complex64::new(c, 0.0), e * s];
    let v = [-e.conj() * s, Complex64::new(c, 0.0)];
    let data = (0..4)
        .map(|k| {
            let (i, j) = (k / 2, k % 2);
            u[i] * u[j].conj() * l1 + v[i] * v[j].conj() * l2
        })
        .collect();
    HermitianOperator::new(ComplexMatrix::new(2, 2, data).unwrap()).unwrap()
}

/// Minimal `Q̃` for a qubit `ρ` against `σ = diag(s)`: the eigenvalues of
/// `σ^{p/2} ρ σ^{p/2}` from its trace and determinant, the small one as
/// `det/λ_max` so that it stays accurate.
fn minimal_oracle(l: (f64, f64, f64, f64), s: [f64; 2], alpha: f64) -> f64 {
    let (l1, l2, theta, _) = l;
    let p = (1.0 - alpha) / alpha;
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let rho11 = l1 * c2 + l2 * s2;
    let rho22 = l1 * s2 + l2 * c2;
    let t = s[0].powf(p) * rho11 + s[1].powf(p) * rho22;
    let d = (s[0] * s[1]).powf(p) * l1 * l2;
    let big = 0.5 * (t + (t * t - 4.0 * d).max(0.0).sqrt());
    big.powf(alpha) + (d / big).powf(alpha)
}

/// Petz `Q̄` for the same pair: `Σ |⟨r_i|j⟩|² r_i^α s_j^{1−α}`.
fn petz_oracle(l: (f64, f64, f64, f64), s: [f64; 2], alpha: f64) -> f64 {
    let (l1, l2, theta, _) = l;
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let b = 1.0 - alpha;
    l1.powf(alpha) * (c2 * s[0].powf(b) + s2 * s[1].powf(b)) + l2.powf(alpha) * (s2 * s[0].powf(b) + c2 * s[1].powf(b))
}

fn classical(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    p.iter().zip(q).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum::<f64>().log2() / (alpha - 1.0)
}

#[test]
fn commuting_pairs_reduce_to_classical_divergence() {
    let (p, q) = ([0.5, 0.3, 0.2], [0.1, 0.6, 0.3]);
    let (rho, sigma) = (HermitianOperator::diag(&p), HermitianOperator::diag(&q));
    for alpha in [0.1, 0.5, 0.9, 1.5, 2.0, 3.0] {
        let want = classical(&p, &q, alpha);
        for fam in [Petz, Minimal] {
            let got = d_alpha(fam, &rho, &sigma, alpha).unwrap();
            assert!((got - want).abs() < 1e-12, "{fam:?} {alpha}: {got} vs {want}");
        }
    }
    let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).log2()).sum();
    assert!((d_alpha(Minimal, &rho, &sigma, 1.0).unwrap() - kl).abs() < 1e-12);
    let dmax = p.iter().zip(&q).map(|(a, b)| (a / b).log2()).fold(f64::MIN, f64::max);
    assert!((d_alpha(Minimal, &rho, &sigma, f64::INFINITY).unwrap() - dmax).abs() < 1e-10);
}

#[test]
fn qubit_pairs_match_closed_form() {
    let s = [0.7, 0.3];
    let sigma = HermitianOperator::diag(&s);
    for l in [(0.8, 0.2, 0.4, 0.3), (0.6, 0.4, 1.1, -2.0), (1.0 - 1e-6, 1e-6, 0.7, 0.5)] {
        let rho = qubit(l.0, l.1, l.2, l.3);
        for alpha in [0.1, 0.25, 0.5, 0.75, 0.9, 1.5, 2.0] {
            let m = q_alpha(Minimal, &rho, &sigma, alpha).unwrap();
            let p = q_alpha(Petz, &rho, &sigma, alpha).unwrap();
            assert!((m - minimal_oracle(l, s, alpha)).abs() < 1e-11, "minimal {l:?} {alpha}");
            assert!((p - petz_oracle(l, s, alpha)).abs() < 1e-11, "petz {l:?} {alpha}");
        }
    }
}

#[test]
fn tiny_eigenvalues_count_at_small_orders() {
    // the smallest eigenvalue of σ^{p/2}ρσ^{p/2} is ≈ 3e-14 here, yet it adds
    // ≈ 0.045 to Q̃ at α = 0.1; dropping it as numerical noise is wrong
    let l = (1.0 - 1e-10, 1e-10, 0.9, 1.2);
    let rho = qubit(l.0, l.1, l.2, l.3);
    let s = [0.6, 0.4];
    let sigma = HermitianOperator::diag(&s);
    let want = minimal_oracle(l, s, 0.1);
    let got = q_alpha(Minimal, &rho, &sigma, 0.1).unwrap();
    assert!((got - want).abs() < 1e-4, "{got} vs {want}");
    assert!(check_sandwich(&rho, &sigma, 0.1).unwrap().holds());
}

#[test]
fn pure_state_against_full_rank() {
    // ρ = |u⟩⟨u|: Q̃ = ⟨u|σ^{(1−α)/α}|u⟩^α, Q̄ = ⟨u|σ^{1−α}|u⟩
    let (theta, s) = (0.6_f64, [0.8, 0.2]);
    let rho = qubit(1.0, 0.0, theta, 0.9);
    let sigma = HermitianOperator::diag(&s);
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    for alpha in [0.25, 0.5, 2.0, 3.0] {
        let p = (1.0 - alpha) / alpha;
        let m = (c2 * s[0].powf(p) + s2 * s[1].powf(p)).powf(alpha);
        let b = c2 * s[0].powf(1.0 - alpha) + s2 * s[1].powf(1.0 - alpha);
        assert!((q_alpha(Minimal, &rho, &sigma, alpha).unwrap() - m).abs() < 1e-12);
        assert!((q_alpha(Petz, &rho, &sigma, alpha).unwrap() - b).abs() < 1e-12);
    }
}

#[test]
fn support_conditions() {
    let rho = HermitianOperator::diag(&[0.5, 0.5]);
    let sigma = HermitianOperator::diag(&[1.0, 0.0]);
    assert!(support_violated(&rho, &sigma).unwrap());
    assert_eq!(d_alpha(Minimal, &rho, &sigma, 2.0).unwrap(), f64::INFINITY);
    assert!(d_alpha(Minimal, &rho, &sigma, 0.5).unwrap().is_finite());
    let orth = HermitianOperator::diag(&[0.0, 1.0]);
    assert_eq!(d_alpha(Petz, &sigma, &orth, 0.5).unwrap(), f64::INFINITY);
    assert!(d_alpha(Petz, &rho, &sigma, -0.5).is_err());
}

#[test]
fn sandwich_with_unnormalized_inputs() {
    let mut rng = substream(300, 0);
    for _ in 0..20 {
        let rho = random_density_from(3, 3, &mut rng).into_operator().scale(2.5);
        let sigma = random_density_from(3, 2, &mut rng).into_operator().scale(0.4);
        for alpha in [0.1, 0.5, 0.9] {
            let r = check_sandwich(&rho, &sigma, alpha).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!((r.correction - (1.0 - alpha) * (2.5_f64 / 0.4).log2()).abs() < 1e-12);
        }
    }
    assert!(check_sandwich(&HermitianOperator::identity(2), &HermitianOperator::identity(2), 1.5).is_err());
}

#[test]
fn reverse_alt_specialization() {
    // b = ∞ recovers the earlier bound
    let mut rng = substream(301, 0);
    let a = random_density_from(3, 3, &mut rng).into_operator();
    let b = random_density_from(3, 3, &mut rng).into_operator();
    let (q, r) = (0.8, 0.5);
    let e = AltExponents::new(q, r, 2.0 * r * q / (1.0 - r), f64::INFINITY).unwrap();
    let (_, rhs) = reverse_alt_sides(&a, &b, &e).unwrap();
    let want = audenaert_bound(&a, &b, q, r).unwrap();
    assert!((rhs - want).abs() <= 1e-10 * want.max(1.0));
    assert!(AltExponents::new(q, r, 1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sandwich_on_qubits(l1 in 1e-12f64..1.0, theta in 0.0f64..3.2, phi in -3.2f64..3.2, s0 in 0.01f64..0.99,
                          alpha in prop::sample::select(vec![0.1, 0.25, 0.5, 0.75, 0.9])) {
        let l = (l1, 1.0 - l1, theta, phi);
        let rho = qubit(l.0, l.1, theta, phi);
        let s = [s0, 1.0 - s0];
        let r = check_sandwich(&rho, &HermitianOperator::diag(&s), alpha).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        // eigenvalues far below machine precision relative to the largest are
        // not resolved by any dense eigensolver; compare only when resolved
        let p = (1.0 - alpha) / alpha;
        if l1.min(1.0 - l1) * (s0.min(1.0 - s0) / s0.max(1.0 - s0)).powf(p) > 1e-8 {
            let want = minimal_oracle(l, s, alpha).log2() / (alpha - 1.0);
            prop_assert!((r.minimal - want).abs() < 1e-9, "{} vs {}", r.minimal, want);
        }
    }
}
