//! Cubic phase states `|γ, r⟩ = e^{iγx̂³ + i(P/2)x̂} S(−r)|0⟩` (`x̂ = √2 q̂`):
//! closed-form Wigner function, Wigner negativity, energy/fidelity formulas
//! and the sample-complexity lower bound for negativity estimation.
//!
//! Natural logarithms throughout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, gk15, integrate_adaptive};
use crate::special::{airy_ai_scaled, airy_ai_zero, airy_pair};

use std::f64::consts::{PI, SQRT_2};

/// Largest `x = γe^{3r}` accepted by the negativity routines.
pub const MAX_X: f64 = 2.0e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicPhaseParams {
    pub gamma: f64,
    pub r: f64,
    /// Momentum displacement `P`.
    #[serde(default)]
    pub p_shift: f64,
}

impl CubicPhaseParams {
    pub fn new(gamma: f64, r: f64, p_shift: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() || !r.is_finite() || !p_shift.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "cubic phase parameters need finite γ ≥ 0, r, P (got {gamma}, {r}, {p_shift})"
            )));
        }
        Ok(Self { gamma, r, p_shift })
    }

    /// Minimal-energy representative with the given `x`.
    pub fn min_energy(x: f64) -> Result<Self> {
        let r = optimal_squeezing(x);
        let gamma = x * (-3.0 * r).exp();
        Self::new(gamma, r, -6.0 * gamma * (2.0 * r).exp())
    }

    /// The negativity invariant `x = γe^{3r}`.
    pub fn x(&self) -> f64 {
        self.gamma * (3.0 * self.r).exp()
    }

    pub fn mean_photon(&self) -> f64 {
        cubic_mean_photon(self.gamma, self.r, self.p_shift)
    }
}

/// Wigner function of the squeezed vacuum `S(−r)|0⟩` (the `γ = 0` member).
pub fn squeezed_vacuum_wigner(r: f64, q: f64, p: f64) -> f64 {
    let s2 = (2.0 * r).exp();
    (-q * q / s2 - p * p * s2).exp() / PI
}

/// Closed-form Wigner function. With `γ' = 2√2γ`, `s² = e^{2r}`,
/// `a = 3γ'/4`, `c = 1/(4s²)`, `b = 3γ'q² − p`:
///
/// `W = (πs²)^{−1/2} a^{−1/3} exp(−q²/s² + bc/a + 2c³/(3a²)) Ai((b + c²/a) a^{−1/3})`.
///
/// For a nonnegative Airy argument the exponent and the Airy decay are
/// combined analytically, which removes the cancellation at small γ.
pub fn cubic_wigner(params: &CubicPhaseParams, q: f64, p: f64) -> Result<f64> {
    if params.gamma == 0.0 {
        return Err(Error::InvalidParameters(
            "γ = 0 is a Gaussian state; use squeezed_vacuum_wigner".into(),
        ));
    }
    let g = 2.0 * SQRT_2 * params.gamma;
    let s2 = (2.0 * params.r).exp();
    let a = 0.75 * g;
    let c = 0.25 / s2;
    let b = 3.0 * g * q * q - (p - params.p_shift / SQRT_2);
    let big_b = b + c * c / a;
    let z = big_b * a.powf(-1.0 / 3.0);
    let base = -0.5 * (PI * s2).ln() - a.ln() / 3.0 - q * q / s2;
    if big_b >= 0.0 {
        // bc/a + 2c³/(3a²) − (2/3)z^{3/2} = −(2/3) b²(v + ½)/(c(1 + v)²), v = √(1 + ab/c²)
        let v = (1.0 + a * b / (c * c)).max(0.0).sqrt();
        let e = -2.0 / 3.0 * b * b * (v + 0.5) / (c * (1.0 + v) * (1.0 + v));
        Ok((base + e).exp() * airy_ai_scaled(z))
    } else {
        let e = b * c / a + 2.0 * c * c * c / (3.0 * a * a);
        Ok((base + e).exp() * airy_pair(z).0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityResult {
    /// `𝒲 = ∫|W| dq dp`.
    pub value: f64,
    /// Estimated absolute quadrature error.
    pub error: f64,
    /// Range of the oscillatory integration variable that was covered.
    pub region: (f64, f64),
    /// Number of sign-definite pieces integrated.
    pub lobes: usize,
}

/// Shear parameter `σ = ¼ (√2/(3x))^{2/3}`.
fn shear_sigma(x: f64) -> f64 {
    0.25 * (SQRT_2 / (3.0 * x)).powf(2.0 / 3.0)
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=MAX_X).contains(&x) {
        return Err(Error::OutOfRange(format!("x = {x} outside [0, {MAX_X}]")));
    }
    Ok(())
}

const TAIL_TOL: f64 = 1e-13;

/// Wigner negativity as a function of `x` alone.
///
/// Integrating `|W|` over `p` at fixed `q` in the Airy variable gives
/// `𝒲 = e^{−σ³/3} ∫ e^{σz}|Ai(z)| dz`; since `∫ e^{σz}Ai(z) dz = e^{σ³/3}`,
/// `𝒲 = 1 + 2 e^{−σ³/3} Σ_lobes ∫ e^{σz}(−Ai(z)) dz` over the intervals
/// `(a_{2j}, a_{2j−1})` between Airy zeros where `Ai < 0`.
pub fn wigner_negativity_x(x: f64) -> Result<NegativityResult> {
    check_x(x)?;
    if x == 0.0 {
        return Ok(NegativityResult {
            value: 1.0,
            error: 0.0,
            region: (0.0, 0.0),
            lobes: 0,
        });
    }
    let sigma = shear_sigma(x);
    let shift = sigma * sigma * sigma / 3.0;
    let f = |z: f64| -(sigma * z - shift).exp() * airy_pair(z).0;
    let (mut total, mut err) = (0.0, 0.0);
    let mut j = 1;
    let mut upper = airy_ai_zero(1);
    let lower = loop {
        let lo = airy_ai_zero(2 * j);
        let (v, e) = gk15(&f, lo, upper);
        total += v;
        err += e;
        let y = -lo;
        let tail = y.powf(-0.25) * (-sigma * y - shift).exp() / (sigma * PI.sqrt());
        if tail < TAIL_TOL * (1.0 + total) {
            err += tail;
            break lo;
        }
        j += 1;
        upper = airy_ai_zero(2 * j - 1);
    };
    Ok(NegativityResult {
        value: 1.0 + 2.0 * total,
        error: 2.0 * err,
        region: (lower, 0.0),
        lobes: j,
    })
}

/// Wigner negativity of a cubic phase state; depends on `params` only
/// through `x = γe^{3r}`.
pub fn wigner_negativity(params: &CubicPhaseParams) -> Result<NegativityResult> {
    wigner_negativity_x(params.x())
}

/// Direct iterated quadrature of `|cubic_wigner|` at the given `(γ, r, P)`:
/// Gauss–Legendre in `q`, and in `p` one Gauss–Kronrod panel per sign-
/// definite lobe (split at the images of the Airy zeros). The error is the
/// change under refinement of the `q` rule plus the lobe estimates.
/// Serves as an independent check of [`wigner_negativity`].
pub fn wigner_negativity_2d(params: &CubicPhaseParams, q_points: usize) -> Result<NegativityResult> {
    check_x(params.x())?;
    if params.gamma == 0.0 {
        return wigner_negativity_x(0.0);
    }
    let g = 2.0 * SQRT_2 * params.gamma;
    let s = params.r.exp();
    let a = 0.75 * g;
    let c = 0.25 / (s * s);
    let a13 = a.powf(1.0 / 3.0);
    let sigma = shear_sigma(params.x());
    let p0 = params.p_shift / SQRT_2;
    let qmax = 8.5 * s;

    // ∫ |W(q, p)| dp at fixed q
    let inner = |q: f64| -> (f64, f64, usize) {
        let f = |p: f64| cubic_wigner(params, q, p).map(f64::abs).unwrap_or(f64::NAN);
        // p ↦ z is decreasing; z = a_k at p_k
        let p_of = |z: f64| 3.0 * g * q * q + c * c / a + p0 - z * a13;
        let (mut total, mut err) = (0.0, 0.0);
        // positive region z ∈ [a_1, ∞): Ai decays like e^{−(2/3)z^{3/2}}
        let zmax = (40.0f64 + sigma.powi(3)).powf(2.0 / 3.0) * 1.5 + 40.0;
        let pos = integrate_adaptive(f, p_of(zmax), p_of(airy_ai_zero(1)), 1e-14, 400)
            .unwrap_or_else(|e| panic!("{e}"));
        total += pos.value;
        err += pos.error;
        let mut k = 1;
        loop {
            let (hi, lo) = (airy_ai_zero(k), airy_ai_zero(k + 1));
            let (v, e) = gk15(&f, p_of(hi), p_of(lo));
            total += v;
            err += e;
            let y = -lo;
            // envelope of the remaining lobes (in the sheared variable)
            let tail = a13 * y.powf(-0.25) * (-sigma * y).exp() / (sigma * PI.sqrt())
                * (-q * q / (s * s) + sigma * sigma * sigma * 2.0 / 3.0).exp()
                / (PI.sqrt() * s * a13);
            if tail < 1e-15 || k > 5_000_000 {
                err += tail;
                return (total, err, k + 1);
            }
            k += 1;
        }
    };

    let run = |n: usize| -> (f64, f64, usize) {
        let rule = gauss_legendre(n);
        let parts: Vec<(f64, f64, usize)> = rule
            .0
            .par_iter()
            .zip(rule.1.par_iter())
            .map(|(&t, &w)| {
                let (v, e, k) = inner(qmax * t);
                (w * qmax * v, w * qmax * e, k)
            })
            .collect();
        parts
            .into_iter()
            .fold((0.0, 0.0, 0), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2.max(p.2)))
    };
    let (coarse, _, _) = run(q_points);
    let (fine, ferr, lobes) = run(q_points + q_points / 2);
    if !fine.is_finite() {
        return Err(Error::NumericalFailure("non-finite Wigner values in 2D quadrature".into()));
    }
    Ok(NegativityResult {
        value: fine,
        error: (fine - coarse).abs() + ferr,
        region: (-qmax, qmax),
        lobes,
    })
}

/// `F(|γ,r⟩, |γ,r'⟩) = 1/cosh(r − r')`: with equal `γ` the cubic gates
/// cancel and only the squeezed-vacuum overlap remains.
pub fn cubic_fidelity(r: f64, r2: f64) -> f64 {
    1.0 / (r - r2).cosh()
}

/// Squeezing minimising the mean photon number at fixed `x`:
/// `r* = ¼ ln(72x² + 1)`.
pub fn optimal_squeezing(x: f64) -> f64 {
    0.25 * (72.0 * x * x + 1.0).ln()
}

/// Minimal mean photon number at fixed `x`: `(√(72x² + 1) − 1)/2`.
pub fn min_energy(x: f64) -> f64 {
    0.5 * ((72.0 * x * x + 1.0).sqrt() - 1.0)
}

/// `⟨n̂⟩ = ½(cosh 2r − 1) + 18γ²e^{4r} + ¼(P + 6γe^{2r})²`.
pub fn cubic_mean_photon(gamma: f64, r: f64, p_shift: f64) -> f64 {
    let e2 = (2.0 * r).exp();
    0.5 * ((2.0 * r).cosh() - 1.0)
        + 18.0 * gamma * gamma * e2 * e2
        + 0.25 * (p_shift + 6.0 * gamma * e2).powi(2)
}

/// `N_{E_2}` (bits) of a cubic phase state, from the position
/// representation: after the beam splitter the only entangling factor is
/// `e^{i6√2 γe^{3r}·u v²}`, which gives
/// `Tr ρ_A² = E_z[(1 + 36x²z²)^{−1/2}]`, `z ~ N(0, 1)`.
pub fn cubic_n_renyi2(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameters(format!("x = {x} must be finite and ≥ 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // z = sinh(t)/a turns the expectation into √(2/π)/a ∫₀^∞ e^{−sinh²t/(2a²)} dt
    let a = 6.0 * x;
    let tmax = (a * 1500f64.sqrt()).asinh();
    let i = integrate_adaptive(|t| (-(t.sinh() / a).powi(2) / 2.0).exp(), 0.0, tmax, 1e-15, 2000)?;
    let purity = (2.0 / PI).sqrt() / a * i.value;
    Ok(-purity.log2())
}

/// Success probability of discriminating two pure states with fidelity
/// `F` given `n` copies: `(1 + √(1 − Fⁿ))/2`.
pub fn discrimination_success(fidelity: f64, n: f64) -> Result<f64> {
    if !(fidelity > 0.0 && fidelity <= 1.0) || !(n >= 0.0) {
        return Err(Error::InvalidParameters(format!("need F ∈ (0,1], n ≥ 0 (got {fidelity}, {n})")));
    }
    Ok(0.5 * (1.0 + (1.0 - fidelity.powf(n)).max(0.0).sqrt()))
}

/// `N = ln(1/(4δ(1−δ))) / ln cosh Δr`.
pub fn samples_from_gap(delta: f64, dr: f64) -> f64 {
    (1.0 / (4.0 * delta * (1.0 - delta))).ln() / dr.cosh().ln()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec {
    pub epsilon: f64,
    pub delta: f64,
    pub x: f64,
    pub r_opt: f64,
    pub mean_photon: f64,
    pub negativity: f64,
    /// Squeezing gap `Δr` with `𝒲(e^{3Δr}x) − 𝒲(x) = 2ε`.
    pub dr: f64,
    /// Sample lower bound `N(ε, δ)`.
    pub samples: f64,
}

const DR_MAX: f64 = 2.0;
const DR_TOL: f64 = 1e-9;

/// Lower bound on the number of copies needed to estimate `𝒲` to
/// additive error `ε` with failure probability `δ`, at the minimal-energy
/// state with invariant `x`.
pub fn sample_lower_bound(epsilon: f64, delta: f64, x: f64) -> Result<BoundSpec> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameters(format!("ε = {epsilon} must be positive")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidParameters(format!("δ = {delta} must lie in (0, 1/2)")));
    }
    check_x(x)?;
    let w0 = wigner_negativity_x(x)?.value;
    let gap = |dr: f64| -> Result<f64> {
        let x2 = x * (3.0 * dr).exp();
        if x2 > MAX_X {
            return Err(Error::OutOfRange(format!(
                "Δr root not bracketed: x e^{{3Δr}} = {x2:.3e} exceeds {MAX_X}"
            )));
        }
        Ok(wigner_negativity_x(x2)?.value - w0 - 2.0 * epsilon)
    };
    let (mut lo, mut hi) = (0.0, 0.01);
    while gap(hi)? < 0.0 {
        if hi >= DR_MAX {
            return Err(Error::OutOfRange(format!("Δr root not bracketed within (0, {DR_MAX}]")));
        }
        lo = hi;
        hi = (2.0 * hi).min(DR_MAX);
    }
    while hi - lo > DR_TOL {
        let mid = 0.5 * (lo + hi);
        if gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dr = 0.5 * (lo + hi);
    Ok(BoundSpec {
        epsilon,
        delta,
        x,
        r_opt: optimal_squeezing(x),
        mean_photon: min_energy(x),
        negativity: w0,
        dr,
        samples: samples_from_gap(delta, dr),
    })
}

/// [`sample_lower_bound`] over a grid of `x`.
pub fn lower_bound_curve(epsilon: f64, delta: f64, xs: &[f64]) -> Result<Vec<BoundSpec>> {
    xs.par_iter().map(|&x| sample_lower_bound(epsilon, delta, x)).collect()
}
