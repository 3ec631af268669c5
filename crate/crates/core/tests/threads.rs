// Separate test binary: the thread cap is read from the process environment.
use renyi_core::harness::*;

#[test]
fn thread_cap_does_not_change_results() {
    let cfg = SuiteConfig::new(5, &[Check::PgmIdentity], 6);
    let mut free = run_suite(&cfg).unwrap();
    free.wall_time = 0.0;
    std::env::set_var(THREADS_ENV, "1");
    let capped = run_suite(&cfg).map(|mut r| {
        r.wall_time = 0.0;
        r
    });
    std::env::set_var(THREADS_ENV, "zero");
    let bad = run_suite(&cfg);
    std::env::remove_var(THREADS_ENV);
    assert_eq!(free, capped.unwrap());
    assert!(bad.is_err());
}

