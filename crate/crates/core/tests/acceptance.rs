//! The twelve acceptance criteria, one test each. Every test prints a single
//! `criterion N [PASS|FAIL] ...` line before asserting.

use corrector_lab::acceptance::Acceptance;
use corrector_lab::config::RunConfig;
use once_cell::sync::Lazy;

static SUITE: Lazy<Acceptance> = Lazy::new(|| {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.toml");
    let cfg = RunConfig::load(path).expect("shipped default config");
    Acceptance::new(cfg.ensemble.seed)
});

fn criterion(id: u8) {
    let outcome = SUITE.run(id).unwrap_or_else(|e| panic!("criterion {id} could not run: {e}"));
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_exactness_and_coincidence() {
    criterion(1);
}

#[test]
fn criterion_02_msfem_super_convergence() {
    criterion(2);
}

#[test]
fn criterion_03_error_bounds() {
    criterion(3);
}

#[test]
fn criterion_04_analytic_covariance_value() {
    criterion(4);
}

#[test]
fn criterion_05_src_corrector_test() {
    criterion(5);
}

#[test]
fn criterion_06_kernel_convergence() {
    criterion(6);
}

#[test]
fn criterion_07_hmm_amplification() {
    criterion(7);
}

#[test]
fn criterion_08_lrc_no_amplification() {
    criterion(8);
}

#[test]
fn criterion_09_hybrid_corrector_test() {
    criterion(9);
}

#[test]
fn criterion_10_rate_fits() {
    criterion(10);
}

#[test]
fn criterion_11_oscillatory_bound() {
    criterion(11);
}

#[test]
fn criterion_12_lrc_quadrature_oracle() {
    criterion(12);
}
