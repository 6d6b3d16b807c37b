//! Reduced states, Schmidt spectra and Rényi entropies (bits).

use faer::{c64, Mat};

use super::state::{DensityOperator, PureState, SchmidtSpectrum};
use crate::error::{invalid, Error, Result};
use crate::linalg;

/// Eigenvalues below this are treated as exact zeros before taking logs.
pub const EIGEN_CLAMP: f64 = 1e-14;

/// Which mode to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

impl TryFrom<usize> for Keep {
    type Error = Error;
    fn try_from(i: usize) -> Result<Self> {
        match i {
            0 => Ok(Keep::A),
            1 => Ok(Keep::B),
            _ => Err(invalid(format!("mode index {i} out of range for two modes"))),
        }
    }
}

/// Reduced state of a two-mode operator.
pub fn partial_trace(rho: &DensityOperator, keep: Keep) -> Result<DensityOperator> {
    if rho.modes() != 2 {
        return Err(invalid("partial trace needs a two-mode operator"));
    }
    let d = rho.cutoff() + 1;
    let red = linalg::partial_trace(rho.matrix(), d, d, keep == Keep::A);
    let mut out = DensityOperator::from_matrix_unchecked(1, rho.cutoff(), red)?;
    out.diagnostics = rho.diagnostics;
    Ok(out)
}

/// Reduced state of a two-mode pure state, without forming `|ψ⟩⟨ψ|`.
pub fn reduced_pure(psi: &PureState, keep: Keep) -> Result<DensityOperator> {
    if psi.modes() != 2 {
        return Err(invalid("reduced state needs a two-mode state"));
    }
    let c = coefficient_matrix(psi);
    let m = match keep {
        Keep::A => &c * c.adjoint(),
        Keep::B => (c.adjoint() * &c).transpose().to_owned(),
    };
    let mut out = DensityOperator::from_matrix_unchecked(1, psi.cutoff(), m)?;
    out.diagnostics = psi.diagnostics;
    Ok(out)
}

/// `C[n_a, n_b] = ⟨n_a, n_b|ψ⟩`.
fn coefficient_matrix(psi: &PureState) -> Mat<c64> {
    let d = psi.cutoff() + 1;
    let a = psi.amplitudes();
    Mat::from_fn(d, d, |i, j| a[i * d + j])
}

/// Schmidt coefficients (squared singular values of the coefficient matrix).
pub fn schmidt_spectrum(psi: &PureState) -> Result<SchmidtSpectrum> {
    if psi.modes() != 2 {
        return Err(invalid("Schmidt decomposition needs a two-mode state"));
    }
    let sv = coefficient_matrix(psi)
        .singular_values()
        .map_err(|e| Error::NumericalFailure(format!("SVD: {e:?}")))?;
    let lambdas: Vec<f64> = sv.into_iter().map(|s| s * s).collect();
    let total: f64 = lambdas.iter().sum();
    SchmidtSpectrum::new(lambdas.into_iter().map(|l| l / total).collect())
}

/// Rényi-α entropy (bits) of a probability vector; α = 1 is the Shannon
/// limit, α = ∞ is not supported.
pub fn renyi_entropy(probs: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("Rényi order must be positive and finite, got {alpha}")));
    }
    let p = probs.iter().copied().filter(|&x| x > EIGEN_CLAMP);
    let h = if alpha == 1.0 {
        -p.map(|x| x * x.log2()).sum::<f64>()
    } else {
        p.map(|x| x.powf(alpha)).sum::<f64>().log2() / (1.0 - alpha)
    };
    Ok(h.max(0.0))
}

/// Rényi-α entropy (bits) of a density operator's spectrum.
pub fn renyi_entropy_of(rho: &DensityOperator, alpha: f64) -> Result<f64> {
    let ev = linalg::hermitian_eigenvalues(linalg::hermitize(rho.matrix()).as_ref())?;
    renyi_entropy(&ev, alpha)
}

/// Von Neumann entropy (bits).
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    renyi_entropy_of(rho, 1.0)
}

/// `Tr[ρ²]`.
pub fn purity(rho: &DensityOperator) -> f64 {
    let m = rho.matrix();
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            acc += m[(i, j)].norm_sqr();
        }
    }
    acc
}

/// `⟨n̂⟩` (total photon number for two modes).
pub fn mean_photon_number(rho: &DensityOperator) -> f64 {
    let d = rho.cutoff() + 1;
    let m = rho.matrix();
    (0..m.nrows())
        .map(|i| {
            let n = if rho.modes() == 1 { i } else { i / d + i % d };
            n as f64 * m[(i, i)].re
        })
        .sum()
}

/// `⟨ψ|n̂|ψ⟩` for a single-mode pure state.
pub fn mean_photon_number_pure(psi: &PureState) -> f64 {
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(n, a)| n as f64 * a.norm_sqr())
        .sum()
}
