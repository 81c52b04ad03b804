use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use fockcomm::optics::lossy_lambda;
use fockcomm_cli::validate::{validate, ValidateOptions};

fn broken_lambda(eta: f64) -> fockcomm::Result<DMatrix<C64>> {
    let mut m = lossy_lambda(eta)?;
    m[(0, 0)] *= 1.01;
    Ok(m)
}

fn run(only: &str, lambda: fockcomm_cli::validate::LambdaFn) -> Vec<(String, bool)> {
    let opts = ValidateOptions { only: vec![only.into()], lambda, ..Default::default() };
    validate(&opts).unwrap().into_iter().map(|r| (r.check, r.pass)).collect()
}

#[test]
fn unitarity_suite_passes_with_the_real_matrix() {
    assert!(run("unitarity", lossy_lambda).iter().all(|(_, pass)| *pass));
}

#[test]
fn perturbed_lambda_fails_the_unitarity_suite() {
    let results = run("unitarity", broken_lambda);
    let lambda = results.iter().find(|(c, _)| c.starts_with("Lambda")).unwrap();
    assert!(!lambda.1);
}

#[test]
fn filter_leaves_other_suites_out() {
    let opts = ValidateOptions { only: vec!["fock".into(), "optics".into()], ..Default::default() };
    let results = validate(&opts).unwrap();
    assert!(!results.is_empty());
    assert!(results.iter().all(|r| r.suite == "fock" || r.suite == "optics"));
    assert!(results.iter().all(|r| r.pass), "{results:?}");
}

#[test]
fn suites_are_reproducible_for_a_seed() {
    let opts = ValidateOptions { only: vec!["gyni".into()], seed: 7, ..Default::default() };
    assert_eq!(validate(&opts).unwrap(), validate(&opts).unwrap());
}
