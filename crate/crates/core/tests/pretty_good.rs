use proptest::prelude::*;
use renyi_core::matcore::{tensor, DimensionProfile, HermitianOperator, ONE, ZERO};
use renyi_core::pretty_good::*;
use renyi_core::sdpsolve::solve_guessing;
use renyi_core::states::*;

fn qubit(v: &[f64]) -> DensityOperator {
    DensityOperator::single(HermitianOperator::diag(v)).unwrap()
}

fn ket(a: f64, b: f64) -> DensityOperator {
    DensityOperator::single(HermitianOperator::projector(&[ONE * a, ONE * b])).unwrap()
}

#[test]
fn fidelity_examples() {
    let rho = qubit(&[0.5, 0.5]);
    let sigma = qubit(&[0.9, 0.1]);
    let fpg = pretty_good_fidelity(&rho, &sigma).unwrap();
    let want = (0.45_f64).sqrt() + (0.05_f64).sqrt();
    assert!((fpg - want).abs() < 1e-14);
    // commuting states: F = F_pg
    assert!((fidelity(&rho, &sigma).unwrap() - want).abs() < 1e-12);
    assert!((trace_distance(&rho, &sigma).unwrap() - 0.4).abs() < 1e-14);

    // pure states: F = |⟨ψ|φ⟩|, F_pg = |⟨ψ|φ⟩|², δ = √(1 − F²)
    let c = 0.3_f64.cos();
    let (a, b) = (ket(1.0, 0.0), ket(c, 0.3_f64.sin()));
    assert!((fidelity(&a, &b).unwrap() - c).abs() < 1e-7);
    assert!((pretty_good_fidelity(&a, &b).unwrap() - c * c).abs() < 1e-12);
    assert!((trace_distance(&a, &b).unwrap() - (1.0 - c * c).sqrt()).abs() < 1e-12);
    assert!(check_fidelity_bounds(&a, &b).unwrap().holds());
}

#[test]
fn purification_overlap_is_pretty_good_fidelity() {
    let mut rng = substream(200, 0);
    for _ in 0..10 {
        let a = random_density_from(3, 2, &mut rng);
        let b = random_density_from(3, 3, &mut rng);
        let overlap = purification_overlap(a.op(), b.op()).unwrap();
        assert!((overlap - pretty_good_fidelity(&a, &b).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn bounds_hold_across_ranks() {
    let mut rng = substream(201, 0);
    for dim in 2..=4 {
        for rank in 1..=dim {
            for _ in 0..10 {
                let rho = random_density_from(dim, rank, &mut rng);
                let sigma = random_density_from(dim, dim, &mut rng);
                let r = check_fidelity_bounds(&rho, &sigma).unwrap();
                assert!(r.holds(), "{r:?}");
            }
        }
    }
}

#[test]
fn pgm_examples() {
    let h = 0.5_f64.sqrt();
    let e = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![ONE * h, ONE * h]]).unwrap();
    let p = pgm_guess_probability(&e).unwrap();
    // symmetric pure pair: the PGM is the Helstrom measurement
    assert!((p - (0.5 + 0.5 * h)).abs() < 1e-12);
    assert!((pgm_guess_from_entropy(&e).unwrap() - p).abs() < 1e-12);

    let e = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![ZERO, ONE]]).unwrap();
    assert!((pgm_guess_probability(&e).unwrap() - 1.0).abs() < 1e-12);

    // rank-deficient average: kernel completion keeps the POVM complete
    let e = Ensemble::from_vectors(vec![0.3, 0.7], &[vec![ONE, ZERO, ZERO], vec![ZERO, ONE, ZERO]]).unwrap();
    let povm = pgm(&e).unwrap();
    let total = povm.elements().iter().fold(HermitianOperator::zeros(3), |acc, m| acc.add(m));
    assert!(total.distance(&HermitianOperator::identity(3)) < POVM_TOL);
}

#[test]
fn povm_validation() {
    let half = HermitianOperator::identity(2).scale(0.5);
    assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
    assert!(Povm::new(vec![half.clone()]).is_err());
    let neg = HermitianOperator::diag(&[1.5, 0.5]);
    let other = HermitianOperator::diag(&[-0.5, 0.5]);
    assert!(Povm::new(vec![neg, other]).is_err());
}

#[test]
fn guessing_bounds() {
    let mut rng = substream(202, 0);
    for n in 2..=4 {
        for _ in 0..5 {
            let e = random_ensemble(n, 3, true, &mut rng);
            let r = check_guessing_bounds(&e).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!((pgm_guess_from_entropy(&e).unwrap() - r.p_pg).abs() < 1e-10);
        }
    }
}

#[test]
fn singlet_fraction_examples() {
    let h = 0.5_f64.sqrt();
    let bell = PureState::new(vec![ONE * h, ZERO, ZERO, ONE * h], DimensionProfile::bipartite(2, 2)).unwrap();
    let f = singlet_fractions(&bell.density()).unwrap();
    assert!((f.r - 1.0).abs() < 1e-7 && (f.r_pg - 1.0).abs() < 1e-12);

    let mixed = DensityOperator::maximally_mixed(DimensionProfile::bipartite(2, 2));
    let f = singlet_fractions(&mixed).unwrap();
    assert!((f.r - 0.25).abs() < 1e-7 && (f.r_pg - 0.25).abs() < 1e-12);

    // product state: R = λ_max(ρ_A)/|A|, R_pg = tr ρ_A²/|A|
    let rho_a = HermitianOperator::diag(&[0.7, 0.3]);
    let rho = DensityOperator::new(tensor(&rho_a, &HermitianOperator::diag(&[0.4, 0.6])), DimensionProfile::bipartite(2, 2))
        .unwrap();
    let f = singlet_fractions(&rho).unwrap();
    assert!((f.r - 0.35).abs() < 1e-7);
    assert!((f.r_pg - 0.29).abs() < 1e-12);
    assert!(f.chain.holds());
}

#[test]
fn pgm_optimality_examples() {
    let h = 0.5_f64.sqrt();
    let e = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![ONE * h, ONE * h]]).unwrap();
    let r = pgm_optimality(&e).unwrap();
    assert!(r.commutes && r.optimal, "{} {}", r.commutator, r.gap);

    let e = Ensemble::from_vectors(vec![0.9, 0.1], &[vec![ONE, ZERO], vec![ONE * h, ONE * h]]).unwrap();
    let r = pgm_optimality(&e).unwrap();
    assert!(!r.commutes && !r.optimal);
    assert!(r.consistent());

    let mut rng = substream(203, 0);
    for _ in 0..5 {
        let r = pgm_optimality(&random_ensemble(3, 2, true, &mut rng)).unwrap();
        assert!(r.consistent());
    }
}

#[test]
fn singlet_optimality_examples() {
    let mut rng = substream(204, 0);
    let psi = random_pure(&DimensionProfile::bipartite(2, 2), &mut rng);
    let r = singlet_optimality(&psi.density()).unwrap();
    assert!(r.commutes && r.optimal, "{} {}", r.commutator, r.gap);

    // flagged mixture: Σ q_j |ψ_j⟩⟨ψ_j| ⊗ |j⟩⟨j| on A ⊗ (B F)
    let q = [0.6, 0.4];
    let mut m = HermitianOperator::zeros(8);
    for (j, &qj) in q.iter().enumerate() {
        let psi = random_pure(&DimensionProfile::bipartite(2, 2), &mut rng).density();
        let flag = HermitianOperator::diag(&[if j == 0 { 1.0 } else { 0.0 }, if j == 1 { 1.0 } else { 0.0 }]);
        m = m.add(&tensor(psi.op(), &flag).scale(qj));
    }
    let flagged = DensityOperator::new(m, DimensionProfile::bipartite(2, 4)).unwrap();
    let r = singlet_optimality(&flagged).unwrap();
    assert!(r.commutes && r.optimal, "{} {}", r.commutator, r.gap);

    let generic = random_state(&DimensionProfile::bipartite(2, 2), 2, &mut rng);
    let r = singlet_optimality(&generic).unwrap();
    let f = singlet_fractions(&generic).unwrap();
    assert!(!r.commutes && !r.optimal);
    assert!(f.r_pg < f.r);
}

#[test]
fn dual_picture_agrees() {
    let mut rng = substream(205, 0);
    let psi = random_pure(&DimensionProfile::bipartite(2, 2), &mut rng);
    let r = dual_picture_check(&psi.density()).unwrap();
    assert!(r.min_like_equal && r.max_like_equal);
    let generic = random_state(&DimensionProfile::bipartite(2, 2), 2, &mut rng);
    let r = dual_picture_check(&generic).unwrap();
    assert!(r.consistent() && !r.min_like_equal);
}

#[test]
fn pgm_never_beats_the_optimum() {
    let e = random_ensemble(4, 2, false, &mut substream(206, 0));
    let p_pg = pgm_guess_probability(&e).unwrap();
    let p = solve_guessing(&e).unwrap().primal_value;
    assert!(p_pg <= p + 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fidelity_chain(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = substream(seed, 0);
        let rho = random_density_from(dim, dim, &mut rng);
        let sigma = random_density_from(dim, 1 + (seed as usize % dim), &mut rng);
        prop_assert!(check_fidelity_bounds(&rho, &sigma).unwrap().holds());
    }
}
