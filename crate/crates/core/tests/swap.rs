use nongauss_core::fock::{make_coherent, make_fock};
use nongauss_core::linalg::trace_product;
use nongauss_core::swap::{
    joint_pnr_distribution, photon_cdf, sample_outcomes, samples_for_accuracy, simulate_nongauss_protocol,
    simulate_swap_test, swap_estimator, systematic_error_bound, truncated_swap_expectation,
};
use nongauss_core::{c64, DensityOperator};

fn fock(n: usize, c: usize) -> DensityOperator {
    make_fock(n, c).unwrap().to_density()
}

#[test]
fn distribution_examples() {
    let d = joint_pnr_distribution(&fock(1, 3), &fock(1, 3)).unwrap();
    assert!((d.prob(2, 0) - 0.5).abs() < 1e-14);
    assert!((d.prob(0, 2) - 0.5).abs() < 1e-14);
    assert!(d.prob(1, 1) < 1e-14);
    let c = make_coherent(c64::new(1.1, 0.3), 25).unwrap().to_density();
    let t = fock(2, 25);
    assert!((joint_pnr_distribution(&c, &t).unwrap().total() - 1.0).abs() < 1e-10);
}

#[test]
fn estimator_examples() {
    assert_eq!(swap_estimator(&[(0, 0); 17], 0).unwrap(), 1.0);
    assert!(swap_estimator(&[], 3).is_err());
    assert!(truncated_swap_expectation(&fock(0, 3), &fock(1, 3), 2).unwrap().abs() < 1e-14);
    assert!((truncated_swap_expectation(&fock(1, 3), &fock(1, 3), 1).unwrap() - 1.0).abs() < 1e-14);
    // outcomes with n + m = 2M are kept, those above are dropped
    assert_eq!(swap_estimator(&[(2, 0), (1, 2)], 1).unwrap(), 0.5);
}

#[test]
fn error_budget_examples() {
    // states supported below M
    let a = fock(1, 6);
    let b = fock(2, 6);
    let (j, p) = systematic_error_bound(&a, &b, 3).unwrap();
    assert!(j.abs() < 1e-14 && p.abs() < 1e-14);
    let t = truncated_swap_expectation(&a, &b, 3).unwrap();
    assert!((t - trace_product(a.matrix(), b.matrix()).re).abs() < 1e-14);

    // coherent α = 2, M = 2: Poisson tails
    let c = make_coherent(c64::new(2.0, 0.0), 40).unwrap().to_density();
    let q2: f64 = (0..=2).map(|k| (-4.0f64).exp() * 4f64.powi(k) / [1.0, 1.0, 2.0][k as usize]).sum();
    let (joint, prod) = systematic_error_bound(&c, &c, 2).unwrap();
    assert!((prod - (1.0 - q2 * q2)).abs() < 1e-12);
    assert!((photon_cdf(&c, 2) - q2).abs() < 1e-12);
    let exact = trace_product(c.matrix(), c.matrix()).re;
    let trunc = truncated_swap_expectation(&c, &c, 2).unwrap();
    assert!((exact - trunc).abs() <= joint && joint <= prod);
}

#[test]
fn symmetry_and_determinism() {
    let a = make_coherent(c64::new(0.5, -0.2), 20).unwrap().to_density();
    let b = DensityOperator::diagonal(1, 20, &{
        let mut p = vec![0.0; 21];
        p[..4].copy_from_slice(&[0.4, 0.3, 0.2, 0.1]);
        p
    })
    .unwrap();
    for m in [0, 1, 3, 8] {
        let ab = truncated_swap_expectation(&a, &b, m).unwrap();
        let ba = truncated_swap_expectation(&b, &a, m).unwrap();
        assert!((ab - ba).abs() < 1e-10);
    }
    let d = joint_pnr_distribution(&a, &b).unwrap();
    assert_eq!(sample_outcomes(&d, 10_000, 42), sample_outcomes(&d, 10_000, 42));
    assert_ne!(sample_outcomes(&d, 10_000, 42), sample_outcomes(&d, 10_000, 43));
}

#[test]
fn report_fields() {
    let a = make_coherent(c64::new(0.8, 0.0), 20).unwrap().to_density();
    let r = simulate_swap_test(&a, &a, 4, 20_000, 9).unwrap();
    assert!(r.estimate.abs() <= 1.0);
    assert!((0.0..=1.0).contains(&r.systematic_bound));
    assert!(r.statistical_stderr >= 0.0);
    assert!(r.systematic_bound_joint <= r.systematic_bound);
    assert_eq!(r, simulate_swap_test(&a, &a, 4, 20_000, 9).unwrap());
    assert!(simulate_swap_test(&a, &a, 4, 0, 9).is_err());
}

#[test]
fn protocol_examples() {
    let coh = make_coherent(c64::new(1.0, 0.0), 30).unwrap();
    let r = simulate_nongauss_protocol(&coh, 10, 100_000, 1).unwrap();
    assert!((r.purity - 1.0).abs() <= 3.0 * r.swap.statistical_stderr + 1e-12);
    assert!(r.e2_estimate.abs() <= 3.0 * r.e2_stderr + 1e-12);

    // exact (infinite-shot) path for |1⟩: ρ_A = diag(½, 0, ½)
    let one = simulate_nongauss_protocol(&make_fock(1, 1).unwrap(), 10, 1000, 1).unwrap();
    assert!((one.swap.truncated_expectation - 0.5).abs() < 1e-14);
    assert!((one.e2_truncated - 1.0).abs() < 1e-12);
    assert!((one.e2_exact - 1.0).abs() < 1e-12);
    assert!(!one.unreliable);

    assert_eq!(samples_for_accuracy(0.01).unwrap(), 10_000);
    assert_eq!(samples_for_accuracy(0.3).unwrap(), 12);
    assert!(samples_for_accuracy(0.0).is_err());
}
