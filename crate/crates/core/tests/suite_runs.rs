use gq_core::catalog::Catalog;
use gq_core::par::Exec;
use gq_core::suite::{format_report, run_suite, SuiteConfig};

#[test]
fn sequential_and_parallel_reports_agree() {
    let cat = Catalog::builtin();
    let par = SuiteConfig::default();
    let seq = SuiteConfig {
        exec: Exec::Sequential,
        ..SuiteConfig::default()
    };
    let only = [1, 2, 3, 5, 6];
    let a = format_report(&run_suite(&cat, &par, &only).unwrap(), &par);
    let b = format_report(&run_suite(&cat, &seq, &only).unwrap(), &seq);
    assert_eq!(a, b);
}

#[test]
fn sweep_covers_the_catalog() {
    let cat = Catalog::builtin();
    let cfg = SuiteConfig::default();
    let r = run_suite(&cat, &cfg, &[1]).unwrap();
    assert!(r[0].pass, "{}", r[0]);
    let expected: usize = cat
        .groups
        .iter()
        .filter(|(_, g)| g.order() <= 24)
        .map(|(name, g)| g.normal_subgroups(64).unwrap().len() * cat.cocycles_on(name).len())
        .sum();
    assert!(
        r[0].summary.starts_with(&format!("{expected}/{expected} ")),
        "{}",
        r[0].summary
    );
}

#[test]
fn seed_does_not_change_verdicts() {
    let cat = Catalog::builtin();
    let mut cfg = SuiteConfig::default();
    cfg.oracle.seed = 12345;
    for r in run_suite(&cat, &cfg, &[1, 2, 3, 4, 5, 6]).unwrap() {
        assert!(r.pass, "{r}");
    }
}
