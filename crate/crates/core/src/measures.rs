//! Beam-splitter non-Gaussianity measures: correlations of
//! `U_BS (ρ ⊗ ρ) U_BS†`, which vanish exactly for Gaussian `ρ`.

use faer::{c64, Mat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{
    self, apply_beam_splitter, apply_beam_splitter_density_with_cutoff, characteristic_function_pure,
    partial_trace, renyi_entropy, renyi_entropy_of, schmidt_spectrum, DensityOperator, Keep,
    PureState, SchmidtSpectrum,
};
use crate::gaussian::{apply_loss_fock, embed_gaussian_to_fock, GaussianState};
use crate::linalg;
use crate::quadrature::gauss_legendre;
use crate::special::ln_factorial;

/// Pseudo-inverse cutoff for `ρ^{−1/2}`.
pub const PINV_TOL: f64 = 1e-12;

/// `U_BS |ψ⟩|ψ⟩` (exact: the output cutoff doubles).
pub fn beam_splitter_output(psi: &PureState) -> Result<PureState> {
    if psi.modes() != 1 {
        return Err(invalid("beam_splitter_output takes a single-mode state"));
    }
    let c = psi.effective_cutoff(1e-30).max(1);
    let trimmed = if c < psi.cutoff() { psi.with_cutoff(c)? } else { psi.clone() };
    apply_beam_splitter(&trimmed.tensor(&trimmed)?)
}

/// Restricts a single-mode operator to the photon numbers carrying more
/// than `tail` of the trace.
pub fn trim_density(rho: &DensityOperator, tail: f64) -> Result<DensityOperator> {
    let mut acc = 0.0;
    let mut c = rho.cutoff();
    while c > 0 {
        acc += rho.matrix()[(c, c)].re.max(0.0);
        if acc > tail {
            break;
        }
        c -= 1;
    }
    let c = (c + 1).min(rho.cutoff()).max(1);
    let d = c + 1;
    let m = Mat::from_fn(d, d, |i, j| rho.matrix()[(i, j)]);
    let mut out = DensityOperator::from_matrix_unchecked(1, c, m)?;
    out.diagnostics = rho.diagnostics;
    Ok(out)
}

/// `U_BS (ρ ⊗ ρ) U_BS†`, exact (output cutoff twice the trimmed input cutoff).
pub fn beam_splitter_output_mixed(rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.modes() != 1 {
        return Err(invalid("beam_splitter_output takes a single-mode state"));
    }
    let t = trim_density(rho, 1e-15)?;
    apply_beam_splitter_density_with_cutoff(&t.tensor(&t)?, 2 * t.cutoff())
}

/// Schmidt spectrum of the beam-splitter output of `ψ ⊗ ψ`.
pub fn output_spectrum(psi: &PureState) -> Result<SchmidtSpectrum> {
    schmidt_spectrum(&beam_splitter_output(psi)?)
}

/// `N_{E_α}(ψ)`: Rényi-α entanglement entropy (bits) of `U_BS |ψ, ψ⟩`.
pub fn n_renyi(psi: &PureState, alpha: f64) -> Result<f64> {
    output_spectrum(psi)?.renyi(alpha)
}

/// Exact binomial coefficient.
fn binom_i128(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// `c_m^n`, `m = 0..=n`: amplitudes of `|2m, 2n−2m⟩` in the beam-splitter
/// output of `|n, n⟩`,
/// `c_m^n = 2^{−n} Σ_k (−1)^{n−k} C(n,k) C(n,2m−k) √((2m)!(2n−2m)!)/n!`.
/// The simulated output carries an extra global sign `(−1)^n`.
pub fn fock_bs_coefficients(n: usize) -> Result<Vec<f64>> {
    if n > 60 {
        return Err(invalid("fock_bs_coefficients supports n ≤ 60"));
    }
    Ok((0..=n)
        .map(|m| {
            let mut s: i128 = 0;
            for k in 0..=n {
                if 2 * m < k || 2 * m - k > n {
                    continue;
                }
                let t = binom_i128(n, k) * binom_i128(n, 2 * m - k);
                s += if (n - k) % 2 == 0 { t } else { -t };
            }
            if s == 0 {
                return 0.0;
            }
            let ln = (s.unsigned_abs() as f64).ln()
                + 0.5 * (ln_factorial(2 * m) + ln_factorial(2 * n - 2 * m))
                - ln_factorial(n)
                - n as f64 * std::f64::consts::LN_2;
            s.signum() as f64 * ln.exp()
        })
        .collect())
}

/// `N_{E_α}(|n⟩)` from the analytic coefficients.
pub fn fock_renyi_analytic(n: usize, alpha: f64) -> Result<f64> {
    let p: Vec<f64> = fock_bs_coefficients(n)?.iter().map(|c| c * c).collect();
    renyi_entropy(&p, alpha)
}

/// Options for [`n_renyi2_via_char_integral`].
#[derive(Debug, Clone, Copy)]
pub struct CharIntegralOptions {
    /// Half-width of the square `[−R, R]²`.
    pub radius: f64,
    /// Gauss–Legendre points per axis.
    pub points: usize,
    /// Largest integrand value tolerated on the boundary.
    pub decay_tol: f64,
}

impl Default for CharIntegralOptions {
    fn default() -> Self {
        Self {
            radius: 12.0,
            points: 400,
            decay_tol: 1e-10,
        }
    }
}

/// `N_{E_2}(ψ) = −log₂[(1/2π) ∫ |χ_ψ(r/√2)|⁴ d²r]` by tensor-product
/// Gauss–Legendre quadrature.
pub fn n_renyi2_via_char_integral(psi: &PureState, opts: CharIntegralOptions) -> Result<f64> {
    if psi.modes() != 1 {
        return Err(invalid("characteristic-function integral is single-mode"));
    }
    let c = psi.effective_cutoff(1e-30).max(1);
    let psi = if c < psi.cutoff() { psi.with_cutoff(c)? } else { psi.clone() };
    let r = opts.radius;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let f = |x: f64, y: f64| characteristic_function_pure(&psi, x * s, y * s).norm_sqr().powi(2);

    // boundary decay check
    let edge = (0..64)
        .map(|i| -r + 2.0 * r * i as f64 / 63.0)
        .flat_map(|t| [f(t, r), f(t, -r), f(r, t), f(-r, t)])
        .fold(0.0, f64::max);
    if edge > opts.decay_tol {
        return Err(Error::NumericalFailure(format!(
            "characteristic function not decayed at R = {r} (|χ|⁴ = {edge:.2e}); increase R"
        )));
    }
    let rule = gauss_legendre(opts.points);
    let (x, w) = (&rule.0, &rule.1);
    let total: f64 = (0..x.len())
        .into_par_iter()
        .map(|i| {
            (0..x.len())
                .map(|j| w[i] * w[j] * f(r * x[i], r * x[j]))
                .sum::<f64>()
        })
        .sum::<f64>()
        * r
        * r;
    let purity = total / (2.0 * std::f64::consts::PI);
    Ok(-purity.log2())
}

/// Orthogonal-branch approximation for squeezed cats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatApprox {
    /// Entropy from grouping branches by their local coherent labels.
    pub value: f64,
    /// Entropy of the four-label distribution `|c_i c_j|²` taken at face
    /// value (double counts when local labels coincide).
    pub four_label_value: f64,
    /// False when distinct local labels are closer than 3.
    pub valid: bool,
    /// Smallest separation between distinct local labels.
    pub min_separation: f64,
}

/// Approximate `N_{E_α}` of `∝ Σ_i c_i S(s)|α_i⟩` assuming distinct
/// coherent labels are orthogonal. Branch `(i, j)` carries
/// `|(α_i − α_j)/√2⟩ ⊗ |(α_i + α_j)/√2⟩`; squeezing factors out.
pub fn cat_entropy_approx(coeffs: &[c64], alphas: &[c64], _s: f64, alpha: f64) -> Result<CatApprox> {
    if coeffs.len() != alphas.len() || coeffs.is_empty() {
        return Err(invalid("coefficient and amplitude lists must match"));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut la: Vec<c64> = Vec::new();
    let mut lb: Vec<c64> = Vec::new();
    let find = |labels: &mut Vec<c64>, z: c64| -> usize {
        if let Some(i) = labels.iter().position(|l| (l - z).norm() < 1e-9) {
            i
        } else {
            labels.push(z);
            labels.len() - 1
        }
    };
    let mut entries = Vec::new();
    let mut four = Vec::new();
    for (ci, ai) in coeffs.iter().zip(alphas) {
        for (cj, aj) in coeffs.iter().zip(alphas) {
            let ka = find(&mut la, (ai - aj) * h);
            let kb = find(&mut lb, (ai + aj) * h);
            entries.push((ka, kb, ci * cj));
            four.push((ci * cj).norm_sqr());
        }
    }
    let mut m = Mat::<c64>::zeros(la.len(), lb.len());
    for (a, b, v) in entries {
        m[(a, b)] += v;
    }
    let sv = m
        .singular_values()
        .map_err(|e| Error::NumericalFailure(format!("SVD: {e:?}")))?;
    let mut p: Vec<f64> = sv.iter().map(|x| x * x).collect();
    let tot: f64 = p.iter().sum();
    if tot <= 0.0 {
        return Err(invalid("cat coefficients vanish"));
    }
    p.iter_mut().for_each(|x| *x /= tot);
    let t4: f64 = four.iter().sum();
    four.iter_mut().for_each(|x| *x /= t4);
    let sep = |labels: &[c64]| {
        let mut best = f64::INFINITY;
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                best = best.min((labels[i] - labels[j]).norm());
            }
        }
        best
    };
    let min_separation = sep(&la).min(sep(&lb));
    Ok(CatApprox {
        value: renyi_entropy(&p, alpha)?,
        four_label_value: renyi_entropy(&four, alpha)?,
        valid: min_separation >= 3.0,
        min_separation,
    })
}

fn check_two_mode(rho: &DensityOperator) -> Result<()> {
    if rho.modes() != 2 {
        Err(invalid("expected a two-mode operator"))
    } else {
        Ok(())
    }
}

/// `I₁(A:B) = S(A) + S(B) − S(AB)` in bits.
pub fn mutual_information_vn(rho: &DensityOperator) -> Result<f64> {
    check_two_mode(rho)?;
    let sa = fock::von_neumann_entropy(&partial_trace(rho, Keep::A)?)?;
    let sb = fock::von_neumann_entropy(&partial_trace(rho, Keep::B)?)?;
    let sab = fock::von_neumann_entropy(rho)?;
    Ok((sa + sb - sab).max(0.0))
}

/// `S₂(A) + S₂(B) − S₂(AB)`, a Rényi-2 analogue of the mutual information
/// (not a monotone in general).
pub fn renyi2_mutual_information(rho: &DensityOperator) -> Result<f64> {
    check_two_mode(rho)?;
    let s2 = |r: &DensityOperator| -fock::purity(r).log2();
    Ok(s2(&partial_trace(rho, Keep::A)?) + s2(&partial_trace(rho, Keep::B)?) - s2(rho))
}

/// Exchanges the two modes.
pub fn swap_modes(rho: &DensityOperator) -> Result<DensityOperator> {
    check_two_mode(rho)?;
    let d = rho.cutoff() + 1;
    let m = rho.matrix();
    let perm = |i: usize| (i % d) * d + i / d;
    let out = Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(perm(i), perm(j))]);
    let mut r = DensityOperator::from_matrix_unchecked(2, rho.cutoff(), out)?;
    r.diagnostics = rho.diagnostics;
    Ok(r)
}

/// `H↑_α(A|B) = (α/(1−α)) log₂ Tr[(Tr_A ρ^α)^{1/α}]`.
pub fn conditional_renyi_up(rho: &DensityOperator, alpha: f64) -> Result<f64> {
    check_two_mode(rho)?;
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(invalid(format!("conditional Rényi order must be in (0,1)∪(1,∞), got {alpha}")));
    }
    let herm = linalg::hermitize(rho.matrix());
    let pow = linalg::hermitian_function(herm.as_ref(), |x| {
        if x > fock::EIGEN_CLAMP {
            x.powf(alpha)
        } else {
            0.0
        }
    })?;
    let d = rho.cutoff() + 1;
    let rb = linalg::partial_trace(pow.as_ref(), d, d, false);
    let ev = linalg::hermitian_eigenvalues(linalg::hermitize(rb.as_ref()).as_ref())?;
    let tr: f64 = ev.iter().filter(|&&x| x > 0.0).map(|x| x.powf(1.0 / alpha)).sum();
    Ok(alpha / (1.0 - alpha) * tr.log2())
}

/// `H↓₂(A|B) = −log₂ Tr[ρ (I ⊗ ρ_B^{−1/2}) ρ (I ⊗ ρ_B^{−1/2})]`, with the
/// pseudo-inverse taken on the support of `ρ_B`.
pub fn conditional_renyi2_down(rho: &DensityOperator) -> Result<f64> {
    check_two_mode(rho)?;
    let d = rho.cutoff() + 1;
    let rb = partial_trace(rho, Keep::B)?;
    let inv_half = linalg::hermitian_function(linalg::hermitize(rb.matrix()).as_ref(), |x| {
        if x > PINV_TOL {
            x.powf(-0.5)
        } else {
            0.0
        }
    })?;
    let id = Mat::<c64>::identity(d, d);
    let k = linalg::kron(id.as_ref(), inv_half.as_ref());
    let x = &(&k * rho.matrix()) * &k;
    let tr = linalg::trace_product(rho.matrix(), x.as_ref()).re;
    Ok(-tr.log2())
}

/// Whether a mutual-information bound is an upper or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundDirection {
    Lower,
    Upper,
}

/// Which Rényi mutual information is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MiVariant {
    /// `I↑_α`, bounded through `H↓_α(B|A)`; only `α = 2` is available.
    Up,
    /// `I↓_α`, bounded through `H↑_α(B|A)`.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiBound {
    pub value: f64,
    pub gamma: f64,
    pub direction: BoundDirection,
}

/// Solves `α/(α−1) = β/(β−1) + γ/(γ−1)` for γ and reads off the bound
/// direction from the sign of `(α−1)(β−1)(γ−1)`.
pub fn mi_bound_parameters(alpha: f64, beta: f64) -> Result<(f64, BoundDirection)> {
    let ok = |x: f64| x > 0.0 && x.is_finite() && x != 1.0;
    if !ok(alpha) || !ok(beta) {
        return Err(Error::InvalidParameters(format!(
            "α = {alpha}, β = {beta} must be positive and ≠ 1"
        )));
    }
    let f = |x: f64| x / (x - 1.0);
    let c = f(alpha) - f(beta);
    let gamma = if (c - 1.0).abs() < 1e-15 { f64::INFINITY } else { c / (c - 1.0) };
    if !(gamma >= 0.5) || (gamma - 1.0).abs() < 1e-15 {
        return Err(Error::InvalidParameters(format!(
            "no admissible γ ≥ 1/2 for α = {alpha}, β = {beta} (γ = {gamma})"
        )));
    }
    let sign = (alpha - 1.0) * (beta - 1.0) * if gamma.is_infinite() { 1.0 } else { gamma - 1.0 };
    let dir = if sign > 0.0 { BoundDirection::Lower } else { BoundDirection::Upper };
    Ok((gamma, dir))
}

/// `H_β(B) − H_α(B|A)` with the conditional entropy matching `variant`.
pub fn mi_bound(rho: &DensityOperator, alpha: f64, beta: f64, variant: MiVariant) -> Result<MiBound> {
    check_two_mode(rho)?;
    let (gamma, direction) = mi_bound_parameters(alpha, beta)?;
    let hb = renyi_entropy_of(&partial_trace(rho, Keep::B)?, beta)?;
    // H(B|A): condition on A by exchanging the modes
    let swapped = swap_modes(rho)?;
    let cond = match variant {
        MiVariant::Up => {
            if alpha != 2.0 {
                return Err(Error::InvalidParameters(
                    "the I↑ bound is only available for α = 2".into(),
                ));
            }
            conditional_renyi2_down(&swapped)?
        }
        MiVariant::Down => conditional_renyi_up(&swapped, alpha)?,
    };
    Ok(MiBound {
        value: hb - cond,
        gamma,
        direction,
    })
}

/// Input and closed-form output of the displaced-Gaussian mixture
/// `ρ = Σ p_i D(μ_i) ρ_G D(μ_i)†` through the beam splitter:
/// `Σ_ij p_i p_j D((μ_i−μ_j)/√2) ρ_G D† ⊗ D((μ_i+μ_j)/√2) ρ_G D†`.
pub struct DisplacedMixture {
    pub input: DensityOperator,
    pub closed_form_output: DensityOperator,
}

pub fn displaced_mixture(
    weights: &[f64],
    means: &[(f64, f64)],
    base: &GaussianState,
    cutoff: usize,
) -> Result<DisplacedMixture> {
    if weights.len() != means.len() || weights.is_empty() {
        return Err(invalid("weights and means must match"));
    }
    if base.modes() != 1 || base.mean().iter().any(|x| *x != 0.0) {
        return Err(invalid("base Gaussian must be single-mode with zero mean"));
    }
    let wsum: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0) || (wsum - 1.0).abs() > 1e-12 {
        return Err(invalid("weights must be a probability vector"));
    }
    let cov = base.cov().to_owned();
    let shifted = |q: f64, p: f64| -> Result<DensityOperator> {
        embed_gaussian_to_fock(&GaussianState::new(vec![q, p], cov.clone())?, cutoff)
    };
    let d = cutoff + 1;
    let mut input = Mat::<c64>::zeros(d, d);
    for (w, &(q, p)) in weights.iter().zip(means) {
        let r = shifted(q, p)?;
        input = &input + &Mat::from_fn(d, d, |i, j| r.matrix()[(i, j)] * *w);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Mat::<c64>::zeros(d * d, d * d);
    for (wi, mi) in weights.iter().zip(means) {
        for (wj, mj) in weights.iter().zip(means) {
            let a = shifted((mi.0 - mj.0) * h, (mi.1 - mj.1) * h)?;
            let b = shifted((mi.0 + mj.0) * h, (mi.1 + mj.1) * h)?;
            let k = linalg::kron(a.matrix(), b.matrix());
            let w = wi * wj;
            out = &out + &Mat::from_fn(d * d, d * d, |i, j| k[(i, j)] * w);
        }
    }
    Ok(DisplacedMixture {
        input: DensityOperator::from_matrix_unchecked(1, cutoff, input)?,
        closed_form_output: DensityOperator::from_matrix_unchecked(2, cutoff, out)?,
    })
}

/// Correlation measure used by [`monotonicity_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeMeasure {
    /// Von Neumann mutual information of the output.
    MutualInformation,
    /// `S₂(A) + S₂(B) − S₂(AB)` of the output.
    Renyi2MutualInformation,
}

/// Measure of `U_BS (L_η(ρ) ⊗ L_η(ρ)) U_BS†` along a grid of loss
/// transmissivities `η`.
pub fn monotonicity_probe(
    rho: &DensityOperator,
    etas: &[f64],
    measure: ProbeMeasure,
) -> Result<Vec<(f64, f64)>> {
    etas.par_iter()
        .map(|&eta| {
            let lossy = apply_loss_fock(rho, eta)?;
            let out = beam_splitter_output_mixed(&lossy)?;
            let v = match measure {
                ProbeMeasure::MutualInformation => mutual_information_vn(&out)?,
                ProbeMeasure::Renyi2MutualInformation => renyi2_mutual_information(&out)?,
            };
            Ok((eta, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_coherent, make_fock, make_squeezed, make_zero_n};

    #[test]
    fn hom_anchor() {
        let one = make_fock(1, 10).unwrap();
        for a in [0.5, 1.0, 2.0, 3.0] {
            assert!((n_renyi(&one, a).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fock_coefficients() {
        assert_eq!(fock_bs_coefficients(0).unwrap(), vec![1.0]);
        let c1 = fock_bs_coefficients(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c1[0] + h).abs() < 1e-15 && (c1[1] - h).abs() < 1e-15);
        for n in 0..=40 {
            let s: f64 = fock_bs_coefficients(n).unwrap().iter().map(|c| c * c).sum();
            assert!((s - 1.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn gaussian_inputs_give_product_outputs() {
        let coh = make_coherent(c64::new(1.0, 0.5), 40).unwrap();
        assert!(n_renyi(&coh, 2.0).unwrap() < 1e-8);
        let sq = make_squeezed(0.4, 60).unwrap();
        assert!(n_renyi(&sq, 1.0).unwrap() < 1e-8);
        assert!(n_renyi(&make_zero_n(2, 10).unwrap(), 2.0).unwrap() > 0.5);
    }

    #[test]
    fn mi_parameters() {
        let (g, d) = mi_bound_parameters(2.0, 0.5).unwrap();
        assert!((g - 1.5).abs() < 1e-12 && d == BoundDirection::Upper);
        let (g, d) = mi_bound_parameters(0.5, 2.0).unwrap();
        assert!((g - 0.75).abs() < 1e-12 && d == BoundDirection::Lower);
        assert!(mi_bound_parameters(1.0, 2.0).is_err());
    }

    #[test]
    fn cat_grouping() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = [c64::new(h, 0.0), c64::new(h, 0.0)];
        let a = [c64::new(4.0, 0.0), c64::new(-4.0, 0.0)];
        let approx = cat_entropy_approx(&c, &a, 0.0, 2.0).unwrap();
        assert!((approx.value - 1.0).abs() < 1e-12);
        assert!((approx.four_label_value - 2.0).abs() < 1e-12);
        assert!(approx.valid);
        let single = cat_entropy_approx(&c[..1], &a[..1], 0.0, 2.0).unwrap();
        assert_eq!(single.value, 0.0);
        let close = [c64::new(0.5, 0.0), c64::new(-0.5, 0.0)];
        assert!(!cat_entropy_approx(&c, &close, 0.0, 2.0).unwrap().valid);
    }
}
