//! Displacement matrix elements, characteristic functions, Wigner
//! functions and rotated-quadrature wavefunctions.
//!
//! `D(r) = exp(i rᵀΩ r̂) = exp(i(r_q p − r_p q))`, which is the usual
//! `exp(β a† − β* a)` with `β = −(r_q + i r_p)/√2`.

use faer::c64;

use super::state::{DensityOperator, PhasePoint, PureState};
use crate::error::{invalid, Error, Result};
use crate::linalg::ZERO;
use crate::special::{hermite_functions, ln_factorial};

/// Complex amplitude `β` of the displacement `D(r)` for a single-mode point.
pub fn beta_of(rq: f64, rp: f64) -> c64 {
    c64::new(-rq, -rp) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix `⟨m|D(β)|n⟩`, `m, n < dim`, row-major, in the `exp(βa† − β*a)`
/// convention, via `√(n!/m!) β^{m−n} e^{−|β|²/2} L_n^{(m−n)}(|β|²)`.
pub fn displacement_matrix_beta(beta: c64, dim: usize) -> Vec<c64> {
    let x = beta.norm_sqr();
    let mut out = vec![ZERO; dim * dim];
    let lnb = beta.norm().ln();
    let arg = beta.arg();
    for k in 0..dim {
        // L_n^{(k)}(x) for n = 0..dim-k by forward recurrence
        let kf = k as f64;
        let (mut prev, mut cur) = (0.0, 1.0);
        for n in 0..dim - k {
            let m = n + k;
            let mag = if k == 0 {
                (-0.5 * x).exp()
            } else if x == 0.0 {
                0.0
            } else {
                (0.5 * (ln_factorial(n) - ln_factorial(m)) + kf * lnb - 0.5 * x).exp()
            };
            let lower = c64::from_polar(mag * cur, kf * arg); // ⟨m|D|n⟩, m ≥ n
            out[m * dim + n] = lower;
            if k > 0 {
                // ⟨n|D(β)|m⟩ = ⟨m|D(−β)|n⟩*
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                out[n * dim + m] = lower.conj() * sign;
            }
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + kf - x) * cur - (nf + kf) * prev) / (nf + 1.0);
            prev = cur;
            cur = next;
        }
    }
    out
}

/// `⟨n1|D(r)|n2⟩` for a single-mode phase point.
pub fn displacement_matrix_element(n1: usize, n2: usize, point: &PhasePoint) -> Result<c64> {
    if point.modes() != 1 {
        return Err(invalid("displacement_matrix_element takes a single-mode point"));
    }
    let c = point.coords();
    let dim = n1.max(n2) + 1;
    Ok(displacement_matrix_beta(beta_of(c[0], c[1]), dim)[n1 * dim + n2])
}

/// `χ_ρ(r) = Tr[D(r) ρ]`.
pub fn characteristic_function(rho: &DensityOperator, point: &PhasePoint) -> Result<c64> {
    if point.modes() != rho.modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * rho.modes(),
            actual: point.coords().len(),
        });
    }
    let d = rho.cutoff() + 1;
    let m = rho.matrix();
    let c = point.coords();
    let da = displacement_matrix_beta(beta_of(c[0], c[1]), d);
    if rho.modes() == 1 {
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                acc += da[i * d + j] * m[(j, i)];
            }
        }
        return Ok(acc);
    }
    let db = displacement_matrix_beta(beta_of(c[2], c[3]), d);
    let mut acc = ZERO;
    for ia in 0..d {
        for ja in 0..d {
            let xa = da[ia * d + ja];
            if xa == ZERO {
                continue;
            }
            for ib in 0..d {
                for jb in 0..d {
                    acc += xa * db[ib * d + jb] * m[(ja * d + jb, ia * d + ib)];
                }
            }
        }
    }
    Ok(acc)
}

/// `χ_ψ(r) = ⟨ψ|D(r)|ψ⟩` for a single-mode pure state.
pub fn characteristic_function_pure(psi: &PureState, rq: f64, rp: f64) -> c64 {
    let d = psi.dim();
    let dm = displacement_matrix_beta(beta_of(rq, rp), d);
    let a = psi.amplitudes();
    let mut acc = ZERO;
    for i in 0..d {
        if a[i] == ZERO {
            continue;
        }
        let mut row = ZERO;
        for j in 0..d {
            row += dm[i * d + j] * a[j];
        }
        acc += a[i].conj() * row;
    }
    acc
}

/// Wigner function of a single-mode state, normalized so `∫W dq dp = 1`:
/// `W(q,p) = (1/π) Σ ρ_mn (−1)^m ⟨n|D(2α)|m⟩`, `α = (q + ip)/√2`.
pub fn wigner_function(rho: &DensityOperator, point: &PhasePoint) -> Result<f64> {
    if rho.modes() != 1 || point.modes() != 1 {
        return Err(invalid("wigner_function is single-mode"));
    }
    let c = point.coords();
    let d = rho.dim();
    let beta = c64::new(c[0], c[1]) * std::f64::consts::SQRT_2;
    let dm = displacement_matrix_beta(beta, d);
    let m = rho.matrix();
    let mut acc = ZERO;
    for mi in 0..d {
        let sign = if mi % 2 == 0 { 1.0 } else { -1.0 };
        for ni in 0..d {
            acc += m[(mi, ni)] * dm[ni * d + mi] * sign;
        }
    }
    Ok(acc.re / std::f64::consts::PI)
}

/// `⟨x_θ|ψ⟩` for the rotated quadrature `X_θ = q cos θ + p sin θ`:
/// `Σ ψ_n e^{−inθ} φ_n(x)`.
pub fn position_wavefunction(psi: &PureState, x: f64, theta: f64) -> Result<c64> {
    if psi.modes() != 1 {
        return Err(invalid("position_wavefunction is single-mode"));
    }
    let phi = hermite_functions(psi.cutoff(), x);
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&phi)
        .enumerate()
        .map(|(n, (a, f))| a * c64::from_polar(*f, -(n as f64) * theta))
        .sum())
}

/// Density of the rotated quadrature `X_θ` for a mixed single-mode state.
pub fn quadrature_density(rho: &DensityOperator, x: f64, theta: f64) -> Result<f64> {
    if rho.modes() != 1 {
        return Err(invalid("quadrature_density is single-mode"));
    }
    let d = rho.dim();
    let phi = hermite_functions(d - 1, x);
    let m = rho.matrix();
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            // ⟨x_θ|i⟩ ρ_ij ⟨j|x_θ⟩
            acc += m[(i, j)] * c64::from_polar(phi[i] * phi[j], (j as f64 - i as f64) * theta);
        }
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, make_coherent, make_fock};
    use crate::linalg::expm;
    use faer::Mat;

    #[test]
    fn vacuum_and_one_photon_characteristic() {
        let vac = make_fock(0, 20).unwrap().to_density();
        let one = make_fock(1, 20).unwrap().to_density();
        for &(q, p) in &[(0.3, -0.2), (1.5, 0.7), (-2.0, 2.5)] {
            let r2: f64 = q * q + p * p;
            let pt = PhasePoint::qp(q, p);
            let cv = characteristic_function(&vac, &pt).unwrap();
            assert!((cv - c64::new((-r2 / 4.0).exp(), 0.0)).norm() < 1e-14);
            let c1 = characteristic_function(&one, &pt).unwrap();
            let want = (1.0 - r2 / 2.0) * (-r2 / 4.0).exp();
            assert!((c1 - c64::new(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn matrix_elements_match_exponentiated_generator() {
        let dim = 60 + 40;
        let (q, p) = (0.9, -0.4);
        let beta = beta_of(q, p);
        let a = annihilation(dim);
        let g = Mat::from_fn(dim, dim, |i, j| beta * a[(j, i)].conj() - beta.conj() * a[(i, j)]);
        let u = expm(g.as_ref()).unwrap();
        let dm = displacement_matrix_beta(beta, 61);
        for m in 0..30 {
            for n in 0..30 {
                assert!((u[(m, n)] - dm[m * 61 + n]).norm() < 1e-10, "({m},{n})");
            }
        }
        // and D(r) = exp(i(r_q p − r_p q)) in quadrature form
        let pt = PhasePoint::qp(q, p);
        let e10 = displacement_matrix_element(1, 0, &pt).unwrap();
        assert!((e10 - u[(1, 0)]).norm() < 1e-10);
    }

    #[test]
    fn coherent_state_displacement_label() {
        // D(r)|0⟩ is the coherent state with α = −(r_q + i r_p)/√2
        let (q, p) = (1.2, 0.4);
        let d = displacement_matrix_beta(beta_of(q, p), 41);
        let coh = make_coherent(beta_of(q, p), 40).unwrap();
        for n in 0..41 {
            assert!((d[n * 41] - coh.amplitude(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn wigner_origin_values() {
        let vac = make_fock(0, 10).unwrap().to_density();
        let one = make_fock(1, 10).unwrap().to_density();
        let o = PhasePoint::qp(0.0, 0.0);
        let pi = std::f64::consts::PI;
        assert!((wigner_function(&vac, &o).unwrap() - 1.0 / pi).abs() < 1e-14);
        assert!((wigner_function(&one, &o).unwrap() + 1.0 / pi).abs() < 1e-14);
        // vacuum is exp(−q² − p²)/π
        let pt = PhasePoint::qp(0.7, -1.1);
        let want = (-(0.49 + 1.21f64)).exp() / pi;
        assert!((wigner_function(&vac, &pt).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn coherent_wigner_centre() {
        // |α⟩ has ⟨q⟩ = √2 Re α, ⟨p⟩ = √2 Im α
        let alpha = c64::new(0.5, -0.25);
        let rho = make_coherent(alpha, 30).unwrap().to_density();
        let s2 = std::f64::consts::SQRT_2;
        let w = wigner_function(&rho, &PhasePoint::qp(s2 * 0.5, -s2 * 0.25)).unwrap();
        assert!((w - 1.0 / std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rotated_wavefunction_of_coherent_state() {
        // θ = π/2 measures p; |α⟩ with real α has p-density e^{−p²}/√π
        let rho = make_coherent(c64::new(1.0, 0.0), 40).unwrap();
        let psi = position_wavefunction(&rho, 0.3, std::f64::consts::FRAC_PI_2).unwrap();
        let want = (-0.09f64).exp() / std::f64::consts::PI.sqrt();
        assert!((psi.norm_sqr() - want).abs() < 1e-12);
        let dens = quadrature_density(&rho.to_density(), 0.3, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((dens - want).abs() < 1e-12);
    }
}
