//! Ladder operators and state constructors.

use faer::{c64, Mat};

use super::state::PureState;
use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ZERO};
use crate::special::ln_factorial;

/// Norm-deficit tolerance for states built from exponentiated generators.
pub const GATE_LEAKAGE_TOL: f64 = 1e-8;
/// Poisson-tail tolerance for coherent states.
pub const COHERENT_LEAKAGE_TOL: f64 = 1e-10;

/// Truncated annihilation operator on `dim` levels.
pub fn annihilation(dim: usize) -> Mat<c64> {
    Mat::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            c64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

pub fn creation(dim: usize) -> Mat<c64> {
    annihilation(dim).adjoint().to_owned()
}

pub fn number(dim: usize) -> Mat<c64> {
    Mat::from_fn(dim, dim, |i, j| if i == j { c64::new(i as f64, 0.0) } else { ZERO })
}

/// `q = (a + a†)/√2`.
pub fn position(dim: usize) -> Mat<c64> {
    let a = annihilation(dim);
    Mat::from_fn(dim, dim, |i, j| (a[(i, j)] + a[(j, i)].conj()) * std::f64::consts::FRAC_1_SQRT_2)
}

/// `p = (a − a†)/(i√2)`.
pub fn momentum(dim: usize) -> Mat<c64> {
    let a = annihilation(dim);
    let k = c64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
    Mat::from_fn(dim, dim, |i, j| (a[(i, j)] - a[(j, i)].conj()) * k)
}

/// Working dimension for exponentiating generators destined for `cutoff`.
fn padded_dim(cutoff: usize) -> usize {
    cutoff + 1 + 20usize.max(cutoff / 2)
}

fn apply(m: &Mat<c64>, v: &[c64]) -> Vec<c64> {
    (0..m.nrows())
        .map(|i| (0..v.len()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Exponentiates `generator` (padded dimension) and applies it to `v`.
fn evolve(generator: &Mat<c64>, v: &[c64]) -> Result<Vec<c64>> {
    let u = linalg::expm(generator.as_ref())?;
    Ok(apply(&u, v))
}

/// Cuts a padded vector to `cutoff`, failing if the discarded norm exceeds
/// the gate tolerance; otherwise renormalizes and records the deficit.
fn truncate(v: Vec<c64>, cutoff: usize) -> Result<PureState> {
    let total: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    let kept: f64 = v.iter().take(cutoff + 1).map(|a| a.norm_sqr()).sum();
    let leakage = (total - kept).max(0.0) / total;
    if leakage > GATE_LEAKAGE_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            leakage,
            tolerance: GATE_LEAKAGE_TOL,
        });
    }
    let mut amps = v;
    amps.truncate(cutoff + 1);
    let mut st = PureState::normalized(1, cutoff, amps)?;
    st.diagnostics.leakage = 1.0 - kept;
    Ok(st)
}

fn basis(dim: usize, n: usize) -> Vec<c64> {
    let mut v = vec![ZERO; dim];
    v[n] = c64::new(1.0, 0.0);
    v
}

/// `|n⟩`.
pub fn make_fock(n: usize, cutoff: usize) -> Result<PureState> {
    if n > cutoff {
        return Err(invalid(format!("Fock index {n} exceeds cutoff {cutoff}")));
    }
    PureState::new(1, cutoff, basis(cutoff + 1, n))
}

/// Coherent-state amplitudes `e^{-|α|²/2} αⁿ/√n!` for `n < dim` (unnormalized).
fn coherent_amplitudes(alpha: c64, dim: usize) -> Vec<c64> {
    let r2 = alpha.norm_sqr();
    (0..dim)
        .map(|n| {
            if r2 == 0.0 {
                return if n == 0 { c64::new(1.0, 0.0) } else { ZERO };
            }
            let mag = (-0.5 * r2 + n as f64 * alpha.norm().ln() - 0.5 * ln_factorial(n)).exp();
            c64::from_polar(mag, n as f64 * alpha.arg())
        })
        .collect()
}

/// Poisson tail `Σ_{n>cutoff} e^{-λ} λⁿ/n!`, summed directly.
pub(crate) fn poisson_tail(lambda: f64, cutoff: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut tail = 0.0;
    let mut n = cutoff + 1;
    loop {
        let t = (-lambda + n as f64 * lambda.ln() - ln_factorial(n)).exp();
        tail += t;
        if (n as f64 > lambda && t < 1e-20 * tail.max(1e-300)) || n > cutoff + 100_000 {
            break;
        }
        n += 1;
    }
    tail
}

/// Coherent state `|α⟩`; fails if the Poisson tail beyond `cutoff`
/// exceeds 1e-10.
pub fn make_coherent(alpha: c64, cutoff: usize) -> Result<PureState> {
    let leakage = poisson_tail(alpha.norm_sqr(), cutoff);
    if leakage > COHERENT_LEAKAGE_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            leakage,
            tolerance: COHERENT_LEAKAGE_TOL,
        });
    }
    let mut st = PureState::normalized(1, cutoff, coherent_amplitudes(alpha, cutoff + 1))?;
    st.diagnostics.leakage = leakage;
    Ok(st)
}

/// `(|0⟩ + |N⟩)/√2`; `N = 0` gives the vacuum.
pub fn make_zero_n(n: usize, cutoff: usize) -> Result<PureState> {
    if n > cutoff {
        return Err(invalid(format!("Fock index {n} exceeds cutoff {cutoff}")));
    }
    let mut v = basis(cutoff + 1, 0);
    v[n] += c64::new(1.0, 0.0);
    PureState::normalized(1, cutoff, v).map(|mut s| {
        s.diagnostics.leakage = 0.0;
        s
    })
}

/// Generator of `S(s) = exp((s/2)(a² − a†²))` on `dim` levels.
fn squeeze_generator(s: f64, dim: usize) -> Mat<c64> {
    let a = annihilation(dim);
    let a2 = &a * &a;
    Mat::from_fn(dim, dim, |i, j| (a2[(i, j)] - a2[(j, i)].conj()) * (0.5 * s))
}

/// Squeezed vacuum `S(s)|0⟩`; `s > 0` squeezes `q` to variance `e^{-2s}/2`.
pub fn make_squeezed(s: f64, cutoff: usize) -> Result<PureState> {
    if !s.is_finite() {
        return Err(invalid("squeezing must be finite"));
    }
    let d = padded_dim(cutoff);
    let v = evolve(&squeeze_generator(s, d), &basis(d, 0))?;
    truncate(v, cutoff)
}

/// Squeezed cat `∝ Σ_i c_i S(s)|α_i⟩`.
pub fn make_cat(coeffs: &[c64], alphas: &[c64], s: f64, cutoff: usize) -> Result<PureState> {
    if coeffs.len() != alphas.len() || coeffs.is_empty() {
        return Err(invalid("cat state needs matching, nonempty coefficient and amplitude lists"));
    }
    let d = padded_dim(cutoff);
    let mut v = vec![ZERO; d];
    for (c, a) in coeffs.iter().zip(alphas) {
        let leak = poisson_tail(a.norm_sqr(), d - 1);
        if leak > COHERENT_LEAKAGE_TOL {
            return Err(Error::CutoffTooSmall {
                cutoff,
                leakage: leak,
                tolerance: COHERENT_LEAKAGE_TOL,
            });
        }
        for (vi, ai) in v.iter_mut().zip(coherent_amplitudes(*a, d)) {
            *vi += c * ai;
        }
    }
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    if norm < 1e-24 {
        return Err(invalid("cat superposition vanishes"));
    }
    let v = if s == 0.0 { v } else { evolve(&squeeze_generator(s, d), &v)? };
    let kept: f64 = v.iter().take(cutoff + 1).map(|x| x.norm_sqr()).sum();
    let leakage = 1.0 - kept / norm;
    if leakage > GATE_LEAKAGE_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            leakage,
            tolerance: GATE_LEAKAGE_TOL,
        });
    }
    let mut amps = v;
    amps.truncate(cutoff + 1);
    let mut st = PureState::normalized(1, cutoff, amps)?;
    st.diagnostics.leakage = leakage;
    Ok(st)
}

/// Cubic phase state `|γ, r⟩` with `P = 0`; see [`make_cubic_phase_displaced`].
pub fn make_cubic_phase(gamma: f64, r: f64, cutoff: usize) -> Result<PureState> {
    make_cubic_phase_displaced(gamma, r, 0.0, cutoff)
}

/// `exp(iγ x³ + i(P/2) x) S(−r)|0⟩` with `x = a + a† = √2 q`.
///
/// This is the scaling under which the energy formula
/// `E = ½(cosh 2r − 1) + 18γ²e^{4r} + ¼(P + 6γe^{2r})²`, the invariant
/// `x = γe^{3r}` and the fidelity `1/cosh(r − r')` hold; `r > 0`
/// anti-squeezes `q`, so `⟨x²⟩ = e^{2r}` for the Gaussian seed.
pub fn make_cubic_phase_displaced(gamma: f64, r: f64, p_shift: f64, cutoff: usize) -> Result<PureState> {
    if !(gamma.is_finite() && r.is_finite() && p_shift.is_finite()) {
        return Err(invalid("cubic phase parameters must be finite"));
    }
    let d = padded_dim(cutoff);
    let seed = evolve(&squeeze_generator(-r, d), &basis(d, 0))?;
    let a = annihilation(d);
    let x = Mat::from_fn(d, d, |i, j| a[(i, j)] + a[(j, i)].conj());
    let x3 = &(&x * &x) * &x;
    let gen = Mat::from_fn(d, d, |i, j| {
        c64::new(0.0, gamma * x3[(i, j)].re + 0.5 * p_shift * x[(i, j)].re)
    });
    // x³ is wrong in the last three rows of the truncated space; those
    // levels are far above the cutoff and carry no weight.
    let v = evolve(&gen, &seed)?;
    truncate(v, cutoff)
}

/// `D(α)|ψ⟩` for a single-mode state, computed in a padded space.
pub fn displace(psi: &PureState, alpha: c64) -> Result<PureState> {
    if psi.modes() != 1 {
        return Err(invalid("displace is single-mode"));
    }
    let c = psi.cutoff();
    let d = padded_dim(c);
    let a = annihilation(d);
    let gen = Mat::from_fn(d, d, |i, j| alpha * a[(j, i)].conj() - alpha.conj() * a[(i, j)]);
    let mut v = psi.amplitudes().to_vec();
    v.resize(d, ZERO);
    truncate(evolve(&gen, &v)?, c)
}

/// `e^{iφ n}|ψ⟩`.
pub fn rotate(psi: &PureState, phi: f64) -> PureState {
    let amps: Vec<c64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| a * c64::from_polar(1.0, phi * n as f64))
        .collect();
    let mut out = PureState::normalized(psi.modes(), psi.cutoff(), amps).expect("unitary");
    out.diagnostics = psi.diagnostics;
    out
}
