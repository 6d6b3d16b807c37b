//! Fast invariant checks run by `nongauss selftest`.

use std::panic::{catch_unwind, AssertUnwindSafe};

use nongauss_core::cubic::wigner_negativity_x;
use nongauss_core::fock::{
    block_unitary, characteristic_function, make_coherent, make_fock, make_squeezed, partial_trace,
    purity, Keep,
};
use nongauss_core::gaussian::{apply_loss_fock, apply_symplectic, beam_splitter_symplectic, embed_gaussian_to_fock};
use nongauss_core::linalg::trace_product;
use nongauss_core::measures::{beam_splitter_output, fock_renyi_analytic, n_renyi};
use nongauss_core::shadows::{purity_u_statistic, sample_shadows, shadow_average};
use nongauss_core::swap::{joint_pnr_distribution, sample_outcomes, systematic_error_bound, truncated_swap_expectation};
use nongauss_core::{c64, GaussianState, Mat, PhasePoint, Result};

type Check = fn() -> Result<(bool, String)>;

fn hom() -> Result<(bool, String)> {
    let v = n_renyi(&make_fock(1, 1)?, 2.0)?;
    Ok(((v - 1.0).abs() < 1e-12, format!("N_E2(|1⟩) = {v}")))
}

fn gaussian_zero() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for psi in [make_coherent(c64::new(1.1, -0.6), 40)?, make_squeezed(0.4, 60)?] {
        for a in [0.5, 1.0, 2.0, 3.0] {
            worst = worst.max(n_renyi(&psi, a)?);
        }
    }
    Ok((worst < 1e-8, format!("max N_Eα = {worst:.1e}")))
}

fn fock_analytic() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 0..=8 {
        for a in [1.0, 2.0] {
            worst = worst.max((n_renyi(&make_fock(n, n.max(1))?, a)? - fock_renyi_analytic(n, a)?).abs());
        }
    }
    Ok((worst < 1e-9, format!("max deviation {worst:.1e}")))
}

fn block_unitarity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 0..=30 {
        let u = block_unitary(n);
        let d = n + 1;
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| u[k * d + i] * u[k * d + j]).sum();
                worst = worst.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("max |UᵀU − I| = {worst:.1e}")))
}

fn characteristic() -> Result<(bool, String)> {
    let rho = make_coherent(c64::new(0.3, 0.7), 30)?.to_density();
    let z = characteristic_function(&rho, &PhasePoint::qp(0.0, 0.0))?;
    let pt = PhasePoint::qp(0.8, -1.3);
    let a = characteristic_function(&rho, &pt)?;
    let b = characteristic_function(&rho, &pt.neg())?;
    let err = (z - c64::new(1.0, 0.0)).norm().max((a - b.conj()).norm());
    Ok((err < 1e-12, format!("χ(0) and χ(−r) = χ(r)* within {err:.1e}")))
}

fn marginal_purities() -> Result<(bool, String)> {
    let out = beam_splitter_output(&make_fock(3, 3)?)?.to_density();
    let d = (purity(&partial_trace(&out, Keep::A)?) - purity(&partial_trace(&out, Keep::B)?)).abs();
    Ok((d < 1e-10, format!("|Tr ρ_A² − Tr ρ_B²| = {d:.1e}")))
}

fn gaussian_covariance() -> Result<(bool, String)> {
    let g = GaussianState::single_mode(0.4, -0.2, 0.3, 0.5, 1.1)?;
    let both = g.direct_sum(&g);
    let out = apply_symplectic(&both, &beam_splitter_symplectic(1)?, &[0.0; 4])?;
    let d = (out.cov() - both.cov()).norm_max();
    Ok((d < 1e-12, format!("covariance change {d:.1e}")))
}

fn loss_identity() -> Result<(bool, String)> {
    let rho = embed_gaussian_to_fock(&GaussianState::thermal(1, 0.4)?, 30)?;
    let d = apply_loss_fock(&rho, 1.0)?.trace_distance(&rho)?;
    let v = apply_loss_fock(&rho, 0.0)?.matrix()[(0, 0)].re;
    Ok((d < 1e-12 && (v - 1.0).abs() < 1e-8, format!("η=1 distance {d:.1e}; η=0 vacuum weight {v}")))
}

fn swap_chain() -> Result<(bool, String)> {
    let a = make_coherent(c64::new(1.5, 0.0), 30)?.to_density();
    let b = embed_gaussian_to_fock(&GaussianState::thermal(1, 0.8)?, 30)?;
    let mut ok = true;
    for cap in [0, 1, 2, 4, 8] {
        let ab = truncated_swap_expectation(&a, &b, cap)?;
        let ba = truncated_swap_expectation(&b, &a, cap)?;
        let (joint, prod) = systematic_error_bound(&a, &b, cap)?;
        let gap = (trace_product(a.matrix(), b.matrix()).re - ab).abs();
        ok &= (ab - ba).abs() < 1e-10 && gap <= joint + 1e-12 && joint <= prod + 1e-12;
    }
    let d = joint_pnr_distribution(&a, &b)?;
    ok &= sample_outcomes(&d, 1000, 5) == sample_outcomes(&d, 1000, 5);
    Ok((ok, "symmetry, error chain and determinism at M ∈ {0,1,2,4,8}".into()))
}

fn negativity() -> Result<(bool, String)> {
    let small = wigner_negativity_x(1e-3)?.value;
    let (w1, w2) = (wigner_negativity_x(1.0)?.value, wigner_negativity_x(2.0)?.value);
    Ok(((small - 1.0).abs() < 1e-3 && w2 > w1 && w1 > 1.0, format!("𝒲(1e-3) = {small:.6}; 𝒲(1) = {w1:.6}; 𝒲(2) = {w2:.6}")))
}

fn shadows() -> Result<(bool, String)> {
    let probs = [0.5, 0.3, 0.2];
    let diag = Mat::from_fn(3, 3, |i, j| c64::new(if i == j { probs[i] } else { 0.0 }, 0.0));
    let u = purity_u_statistic(&[diag.clone(), diag.clone(), diag])?;
    let n = 20_000;
    let avg = shadow_average(&sample_shadows(&make_fock(0, 4)?.to_density(), n, 1)?, 4)?;
    let mut err: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let t = if i == 0 && j == 0 { 1.0 } else { 0.0 };
            err = err.max((avg.matrix[(i, j)] - c64::new(t, 0.0)).norm());
        }
    }
    let bound = 4.0 / (n as f64).sqrt();
    Ok((
        (u - 0.38).abs() < 1e-14 && err < bound,
        format!("U-statistic {u}; vacuum shadow error {err:.4} (< {bound:.4})"),
    ))
}

const CHECKS: [(&str, Check); 11] = [
    ("hom-anchor", hom),
    ("gaussian-inputs", gaussian_zero),
    ("fock-analytic", fock_analytic),
    ("block-unitarity", block_unitarity),
    ("characteristic-symmetry", characteristic),
    ("marginal-purities", marginal_purities),
    ("gaussian-covariance", gaussian_covariance),
    ("loss-limits", loss_identity),
    ("swap-budget", swap_chain),
    ("negativity", negativity),
    ("shadows", shadows),
];

/// Report text and the number of failed checks.
pub fn run() -> (String, usize) {
    let mut text = String::new();
    let mut failed = 0;
    for (name, check) in CHECKS {
        let (pass, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(v)) => v,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".into()),
        };
        failed += usize::from(!pass);
        text += &format!("{} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    }
    text += &format!("{} of {} checks passed\n", CHECKS.len() - failed, CHECKS.len());
    (text, failed)
}
