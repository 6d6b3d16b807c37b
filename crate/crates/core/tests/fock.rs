use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nongauss_core::fock::{
    apply_beam_splitter, characteristic_function, characteristic_function_pure,
    displacement_matrix_element, make_coherent, make_cubic_phase, make_fock, make_squeezed,
    make_zero_n, mean_photon_number_pure, partial_trace, position_wavefunction, purity,
    renyi_entropy, schmidt_spectrum, wigner_function, Keep,
};
use nongauss_core::linalg::expm;
use nongauss_core::quadrature::integrate_gl;
use nongauss_core::{c64, DensityOperator, Error, Mat, PhasePoint, PureState};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn fock_constructor() {
    let v = make_fock(0, 10).unwrap();
    assert_eq!(v.amplitude(0), c64::new(1.0, 0.0));
    let two = make_fock(2, 10).unwrap();
    for n in 0..=10 {
        let want = if n == 2 { 1.0 } else { 0.0 };
        assert_eq!(two.amplitude(n).re, want);
    }
    assert!(matches!(make_fock(11, 10), Err(Error::InvalidArgument(_))));
}

#[test]
fn coherent_constructor() {
    let v = make_coherent(c64::new(0.0, 0.0), 10).unwrap();
    assert!(close(v.amplitude(0).norm(), 1.0, 1e-15));
    let a = make_coherent(c64::new(1.0, 0.0), 40).unwrap();
    let mut fact = 1.0;
    for n in 0..=10 {
        if n > 0 {
            fact *= n as f64;
        }
        assert!(close(a.amplitude(n).re, (-0.5f64).exp() / fact.sqrt(), 1e-14));
    }
    assert!(close(mean_photon_number_pure(&a), 1.0, 1e-10));
    assert!(matches!(
        make_coherent(c64::new(5.0, 0.0), 10),
        Err(Error::CutoffTooSmall { .. })
    ));
}

#[test]
fn zero_n_constructor() {
    let s = make_zero_n(2, 10).unwrap();
    assert!(close(s.amplitude(0).re, FRAC_1_SQRT_2, 1e-15));
    assert!(close(s.amplitude(2).re, FRAC_1_SQRT_2, 1e-15));
    assert!(close(make_zero_n(0, 10).unwrap().amplitude(0).re, 1.0, 1e-15));
    assert!(close(mean_photon_number_pure(&make_zero_n(4, 20).unwrap()), 2.0, 1e-14));
    assert!(make_zero_n(11, 10).is_err());
}

#[test]
fn squeezed_and_cubic_constructors() {
    let v = make_squeezed(0.0, 10).unwrap();
    assert!(close(v.amplitude(0).re, 1.0, 1e-14));
    let a = make_squeezed(0.5, 80).unwrap();
    let b = make_squeezed(1.0, 80).unwrap();
    assert!(close(a.overlap(&b).unwrap().norm_sqr(), 1.0 / 0.5f64.cosh(), 1e-8));
    // ⟨n⟩ = 18γ² + ¼(6γ)² at r = 0, P = 0; the heavy Fock tail needs
    // more than 60 levels at the 1e-8 leakage threshold
    assert!(matches!(make_cubic_phase(0.1, 0.0, 60), Err(Error::CutoffTooSmall { .. })));
    let c = make_cubic_phase(0.1, 0.0, 150).unwrap();
    assert!(close(mean_photon_number_pure(&c), 0.27, 1e-6));
    assert!(matches!(make_squeezed(3.0, 10), Err(Error::CutoffTooSmall { .. })));
}

#[test]
fn beam_splitter_examples() {
    let vac = make_fock(0, 3).unwrap();
    let out = apply_beam_splitter(&vac.tensor(&vac).unwrap()).unwrap();
    assert!(close(out.amplitude2(0, 0).re, 1.0, 1e-15));

    let one = make_fock(1, 3).unwrap();
    let hom = apply_beam_splitter(&one.tensor(&one).unwrap()).unwrap();
    assert!(close(hom.amplitude2(2, 0).re, -FRAC_1_SQRT_2, 1e-14));
    assert!(close(hom.amplitude2(0, 2).re, FRAC_1_SQRT_2, 1e-14));
    assert!(hom.amplitude2(1, 1).norm() < 1e-14);

    let a = c64::new(0.7, -0.4);
    let coh = make_coherent(a, 30).unwrap();
    let out = apply_beam_splitter(&coh.tensor(&coh).unwrap()).unwrap();
    let rho_a = partial_trace(&out.to_density(), Keep::A).unwrap();
    assert!(close(purity(&rho_a), 1.0, 1e-10));
    // mode A is vacuum, mode B is |√2 α⟩
    assert!(close(out.amplitude2(0, 0).norm_sqr(), (-2.0 * a.norm_sqr()).exp(), 1e-12));
    assert!(apply_beam_splitter(&one).is_err());
}

#[test]
fn characteristic_function_examples() {
    let vac = make_fock(0, 10).unwrap().to_density();
    let one = make_fock(1, 10).unwrap().to_density();
    for (q, p) in [(0.3, -0.2), (1.5, 0.7), (-2.0, 2.5)] {
        let pt = PhasePoint::qp(q, p);
        let r2 = q * q + p * p;
        let cv = characteristic_function(&vac, &pt).unwrap();
        assert!((cv - c64::new((-r2 / 4.0).exp(), 0.0)).norm() < 1e-12);
        let c1 = characteristic_function(&one, &pt).unwrap();
        assert!((c1 - c64::new((1.0 - r2 / 2.0) * (-r2 / 4.0).exp(), 0.0)).norm() < 1e-12);
    }
    let cat = make_zero_n(3, 10).unwrap().to_density();
    let z = characteristic_function(&cat, &PhasePoint::qp(0.0, 0.0)).unwrap();
    assert!((z - c64::new(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn displacement_elements() {
    let pt = PhasePoint::qp(0.8, -1.1);
    let r2 = pt.norm_sqr();
    let d00 = displacement_matrix_element(0, 0, &pt).unwrap();
    assert!((d00 - c64::new((-r2 / 4.0).exp(), 0.0)).norm() < 1e-14);
    for n in [0, 3, 7] {
        let e = displacement_matrix_element(n, n, &PhasePoint::qp(0.0, 0.0)).unwrap();
        assert!((e - c64::new(1.0, 0.0)).norm() < 1e-14);
    }
    // D(r) = exp(i rᵀΩ r̂) = exp(i(q p̂ − p q̂)) from truncated quadratures
    let dim = 80;
    let s = FRAC_1_SQRT_2;
    let (q, p) = (0.8, -1.1);
    let gen = Mat::from_fn(dim, dim, |i, j| {
        // i(q p̂ − p q̂) with q̂ = (a + a†)/√2, p̂ = (a − a†)/(i√2)
        let a = if j == i + 1 { (j as f64).sqrt() } else { 0.0 };
        let ad = if i == j + 1 { (i as f64).sqrt() } else { 0.0 };
        let qh = c64::new(s * (a + ad), 0.0);
        let ph = c64::new(0.0, -s * (a - ad));
        c64::new(0.0, 1.0) * (ph * q - qh * p)
    });
    let d = expm(gen.as_ref()).unwrap();
    let e10 = displacement_matrix_element(1, 0, &pt).unwrap();
    let e01 = displacement_matrix_element(0, 1, &pt).unwrap();
    assert!((d[(1, 0)] - e10).norm() < 1e-10, "{:?} vs {e10:?}", d[(1, 0)]);
    assert!((d[(0, 1)] - e01).norm() < 1e-10);
    // ⟨n1|D|n2⟩ = ⟨n2|D†|n1⟩* = ⟨n2|D(−r)|n1⟩*
    let back = displacement_matrix_element(0, 1, &pt.neg()).unwrap();
    assert!((e10 - back.conj()).norm() < 1e-14);
}

#[test]
fn wigner_examples() {
    let vac = make_fock(0, 10).unwrap().to_density();
    let one = make_fock(1, 10).unwrap().to_density();
    let o = PhasePoint::qp(0.0, 0.0);
    assert!(close(wigner_function(&vac, &o).unwrap(), 1.0 / PI, 1e-14));
    assert!(close(wigner_function(&one, &o).unwrap(), -1.0 / PI, 1e-14));
    let psi = make_zero_n(2, 10).unwrap().to_density();
    let total = integrate_gl(
        |q| integrate_gl(|p| wigner_function(&psi, &PhasePoint::qp(q, p)).unwrap(), -9.0, 9.0, 80),
        -9.0,
        9.0,
        80,
    );
    assert!(close(total, 1.0, 1e-6), "{total}");
}

#[test]
fn partial_trace_examples() {
    let a = make_coherent(c64::new(0.3, 0.1), 12).unwrap().to_density();
    let b = make_fock(2, 12).unwrap().to_density();
    let ab = a.tensor(&b).unwrap();
    let ra = partial_trace(&ab, Keep::A).unwrap();
    assert!(ra.trace_distance(&a).unwrap() < 1e-12);
    assert!(partial_trace(&ab, Keep::B).unwrap().trace_distance(&b).unwrap() < 1e-12);

    let one = make_fock(1, 2).unwrap();
    let hom = apply_beam_splitter(&one.tensor(&one).unwrap()).unwrap().to_density();
    let ha = partial_trace(&hom, Keep::A).unwrap();
    assert!(close(ha.matrix()[(0, 0)].re, 0.5, 1e-14));
    assert!(close(ha.matrix()[(2, 2)].re, 0.5, 1e-14));
    assert!(ha.matrix()[(0, 2)].norm() < 1e-14);

    // Σ_n |n,n⟩⟨n,n|/3
    let c = 2;
    let d = (c + 1) * (c + 1);
    let m = Mat::from_fn(d, d, |i, j| {
        if i == j && i / (c + 1) == i % (c + 1) {
            c64::new(1.0 / 3.0, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    let rho = DensityOperator::new(2, c, m).unwrap();
    let r = partial_trace(&rho, Keep::B).unwrap();
    for n in 0..=c {
        assert!(close(r.matrix()[(n, n)].re, 1.0 / 3.0, 1e-15));
    }
    assert!(Keep::try_from(2).is_err());
}

#[test]
fn entropies_and_purity() {
    assert!(close(renyi_entropy(&[0.5, 0.5], 2.0).unwrap(), 1.0, 1e-15));
    for a in [0.5, 1.0, 2.0, 3.0] {
        assert!(renyi_entropy(&[1.0], a).unwrap().abs() < 1e-15);
    }
    assert!(renyi_entropy(&[0.5, 0.5], 0.0).is_err());

    let one = make_fock(1, 3).unwrap();
    let hom = apply_beam_splitter(&one.tensor(&one).unwrap()).unwrap();
    let spec = schmidt_spectrum(&hom).unwrap();
    assert!(close(spec.coefficients()[0], 0.5, 1e-14));
    assert!(close(spec.renyi(2.0).unwrap(), 1.0, 1e-14));

    // Tr ρ² = (1/2π) ∫ |χ|² for |1⟩ at cutoff 40
    let rho = make_fock(1, 40).unwrap().to_density();
    let psi = make_fock(1, 40).unwrap();
    let integral = integrate_gl(
        |q| integrate_gl(|p| characteristic_function_pure(&psi, q, p).norm_sqr(), -14.0, 14.0, 120),
        -14.0,
        14.0,
        120,
    ) / (2.0 * PI);
    assert!(close(integral, purity(&rho), 1e-6));
}

#[test]
fn rotated_wavefunction_normalized() {
    let psi = PureState::normalized(
        1,
        6,
        vec![
            c64::new(0.3, 0.1),
            c64::new(0.0, 0.5),
            c64::new(-0.2, 0.0),
            c64::new(0.1, 0.4),
            c64::new(0.0, 0.0),
            c64::new(0.2, -0.1),
            c64::new(0.05, 0.0),
        ],
    )
    .unwrap();
    for theta in [0.0, 0.7, 2.5] {
        let n = integrate_gl(|x| position_wavefunction(&psi, x, theta).unwrap().norm_sqr(), -12.0, 12.0, 200);
        assert!(close(n, 1.0, 1e-8));
    }
}
