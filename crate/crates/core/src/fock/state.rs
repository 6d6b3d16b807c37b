use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, ZERO};

/// Truncation bookkeeping attached to states built by exponentiating
/// truncated generators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Norm (or trace) deficit removed by renormalization.
    pub leakage: f64,
}

fn check_modes(modes: usize) -> Result<()> {
    if modes == 1 || modes == 2 {
        Ok(())
    } else {
        Err(invalid(format!("only 1 or 2 modes supported, got {modes}")))
    }
}

/// A pure state on `modes` bosonic modes, each truncated at photon number
/// `cutoff` (inclusive). Two-mode amplitudes are stored row-major:
/// index `n_a * (cutoff + 1) + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    modes: usize,
    cutoff: usize,
    amps: Vec<c64>,
    pub diagnostics: Diagnostics,
}

impl PureState {
    /// Wraps amplitudes, requiring unit norm within 1e-12.
    pub fn new(modes: usize, cutoff: usize, amps: Vec<c64>) -> Result<Self> {
        check_modes(modes)?;
        let dim = (cutoff + 1).pow(modes as u32);
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 || !norm.is_finite() {
            return Err(invalid(format!("state not normalized: ‖ψ‖² = {norm}")));
        }
        Ok(Self {
            modes,
            cutoff,
            amps,
            diagnostics: Diagnostics::default(),
        })
    }

    /// Normalizes arbitrary nonzero amplitudes, recording the norm deficit.
    pub fn normalized(modes: usize, cutoff: usize, mut amps: Vec<c64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(invalid("cannot normalize zero or non-finite vector"));
        }
        let s = norm.sqrt().recip();
        amps.iter_mut().for_each(|a| *a *= s);
        let mut st = Self::new(modes, cutoff, amps)?;
        st.diagnostics.leakage = (1.0 - norm).max(0.0);
        Ok(st)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amps
    }

    /// Amplitude of `|n⟩` (single mode) or of flat index `n`.
    pub fn amplitude(&self, n: usize) -> c64 {
        self.amps.get(n).copied().unwrap_or(ZERO)
    }

    /// Amplitude of `|n_a, n_b⟩`; zero outside the truncation.
    pub fn amplitude2(&self, na: usize, nb: usize) -> c64 {
        if self.modes != 2 || na > self.cutoff || nb > self.cutoff {
            return ZERO;
        }
        self.amps[na * (self.cutoff + 1) + nb]
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Result<c64> {
        if self.modes != other.modes {
            return Err(invalid("overlap between states with different mode counts"));
        }
        if self.modes == 1 {
            let n = self.dim().min(other.dim());
            return Ok((0..n).map(|i| self.amps[i].conj() * other.amps[i]).sum());
        }
        let c = self.cutoff.min(other.cutoff);
        let mut acc = ZERO;
        for na in 0..=c {
            for nb in 0..=c {
                acc += self.amplitude2(na, nb).conj() * other.amplitude2(na, nb);
            }
        }
        Ok(acc)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityOperator {
        let d = self.dim();
        let m = Mat::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        DensityOperator {
            modes: self.modes,
            cutoff: self.cutoff,
            matrix: m,
            diagnostics: self.diagnostics,
        }
    }

    /// `|self⟩ ⊗ |other⟩` for two single-mode states; the result uses the
    /// larger of the two cutoffs.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if self.modes != 1 || other.modes != 1 {
            return Err(invalid("tensor product needs two single-mode states"));
        }
        let c = self.cutoff.max(other.cutoff);
        let mut amps = vec![ZERO; (c + 1) * (c + 1)];
        for (i, a) in self.amps.iter().enumerate() {
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * (c + 1) + j] = a * b;
            }
        }
        Ok(PureState {
            modes: 2,
            cutoff: c,
            amps,
            diagnostics: Diagnostics {
                leakage: self.diagnostics.leakage + other.diagnostics.leakage,
            },
        })
    }

    /// Re-expresses a single-mode state at another cutoff. Shrinking fails
    /// if more than `1e-12` of the norm would be discarded.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<PureState> {
        if self.modes != 1 {
            return Err(invalid("with_cutoff is single-mode only"));
        }
        let lost: f64 = self.amps.iter().skip(cutoff + 1).map(|a| a.norm_sqr()).sum();
        if lost > 1e-12 {
            return Err(Error::CutoffTooSmall {
                cutoff,
                leakage: lost,
                tolerance: 1e-12,
            });
        }
        let mut amps = vec![ZERO; cutoff + 1];
        for (i, a) in self.amps.iter().take(cutoff + 1).enumerate() {
            amps[i] = *a;
        }
        let mut st = PureState::normalized(1, cutoff, amps)?;
        st.diagnostics.leakage += self.diagnostics.leakage;
        Ok(st)
    }

    /// Largest occupation (per mode) carrying non-negligible weight.
    pub(crate) fn effective_cutoff(&self, tail: f64) -> usize {
        let c = self.cutoff;
        let mut weight = vec![0.0; c + 1];
        for (i, a) in self.amps.iter().enumerate() {
            let w = a.norm_sqr();
            if self.modes == 1 {
                weight[i] += w;
            } else {
                let (na, nb) = (i / (c + 1), i % (c + 1));
                weight[na.max(nb)] += w;
            }
        }
        let mut acc = 0.0;
        for n in (0..=c).rev() {
            acc += weight[n];
            if acc > tail {
                return n;
            }
        }
        0
    }
}

/// A density operator on 1 or 2 truncated modes.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    modes: usize,
    cutoff: usize,
    matrix: Mat<c64>,
    pub diagnostics: Diagnostics,
}

impl DensityOperator {
    /// Validates Hermiticity (1e-12), unit trace (1e-10) and, for
    /// dimensions up to 1024, positivity (−1e-10).
    pub fn new(modes: usize, cutoff: usize, matrix: Mat<c64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(modes, cutoff, matrix)?;
        let m = rho.matrix.as_ref();
        let herm = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm > 1e-12 {
            return Err(invalid(format!("density matrix not Hermitian (defect {herm:.2e})")));
        }
        let tr = linalg::trace(m);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(invalid(format!("density matrix trace {tr} ≠ 1")));
        }
        if m.nrows() <= 1024 {
            let min = linalg::hermitian_eigenvalues(m)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if min < -1e-10 {
                return Err(invalid(format!("density matrix not positive (λ_min = {min:.3e})")));
            }
        }
        Ok(rho)
    }

    /// Shape checks only.
    pub fn from_matrix_unchecked(modes: usize, cutoff: usize, matrix: Mat<c64>) -> Result<Self> {
        check_modes(modes)?;
        let dim = (cutoff + 1).pow(modes as u32);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows(),
            });
        }
        Ok(Self {
            modes,
            cutoff,
            matrix,
            diagnostics: Diagnostics::default(),
        })
    }

    /// Diagonal state `Σ p_n |n⟩⟨n|`.
    pub fn diagonal(modes: usize, cutoff: usize, probs: &[f64]) -> Result<Self> {
        let dim = (cutoff + 1).pow(modes as u32);
        if probs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: probs.len(),
            });
        }
        let m = Mat::from_fn(dim, dim, |i, j| {
            if i == j {
                c64::new(probs[i], 0.0)
            } else {
                ZERO
            }
        });
        Self::new(modes, cutoff, m)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(self.matrix.as_ref()).re
    }

    /// `ρ₁ ⊗ ρ₂` for two single-mode operators with equal cutoffs.
    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        if self.modes != 1 || other.modes != 1 {
            return Err(invalid("tensor product needs two single-mode operators"));
        }
        if self.cutoff != other.cutoff {
            return Err(Error::DimensionMismatch {
                expected: self.cutoff,
                actual: other.cutoff,
            });
        }
        Ok(DensityOperator {
            modes: 2,
            cutoff: self.cutoff,
            matrix: linalg::kron(self.matrix.as_ref(), other.matrix.as_ref()),
            diagnostics: Diagnostics {
                leakage: self.diagnostics.leakage + other.diagnostics.leakage,
            },
        })
    }

    /// Single-mode operator re-expressed at a new cutoff (zero-padded or
    /// truncated; truncation fails above 1e-10 discarded trace).
    pub fn with_cutoff(&self, cutoff: usize) -> Result<DensityOperator> {
        if self.modes != 1 {
            return Err(invalid("with_cutoff is single-mode only"));
        }
        let lost: f64 = (cutoff + 1..self.dim()).map(|i| self.matrix[(i, i)].re).sum();
        if lost > 1e-10 {
            return Err(Error::CutoffTooSmall {
                cutoff,
                leakage: lost,
                tolerance: 1e-10,
            });
        }
        let d = cutoff + 1;
        let src = self.dim();
        let m = Mat::from_fn(d, d, |i, j| {
            if i < src && j < src {
                self.matrix[(i, j)]
            } else {
                ZERO
            }
        });
        let mut out = DensityOperator::from_matrix_unchecked(1, cutoff, m)?;
        out.diagnostics.leakage = self.diagnostics.leakage + lost;
        Ok(out)
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * linalg::trace_norm_hermitian(linalg::hermitize(diff.as_ref()).as_ref())?)
    }
}

/// A phase-space point `(q_1, p_1, …, q_m, p_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint(Vec<f64>);

impl PhasePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() % 2 != 0 {
            return Err(invalid("phase point needs an even, nonzero number of coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("phase point coordinates must be finite"));
        }
        Ok(Self(coords))
    }

    /// Single-mode point `(q, p)`.
    pub fn qp(q: f64, p: f64) -> Self {
        Self(vec![q, p])
    }

    pub fn modes(&self) -> usize {
        self.0.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// Schmidt coefficients `λ_i` (squared singular values), nonincreasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum(Vec<f64>);

impl SchmidtSpectrum {
    /// Sorts, clamps negatives to zero and checks normalization (1e-10).
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite() || *c < -1e-12) {
            return Err(invalid("Schmidt coefficients must be finite and nonnegative"));
        }
        coeffs.iter_mut().for_each(|c| *c = c.max(0.0));
        coeffs.sort_by(|a, b| b.total_cmp(a));
        let s: f64 = coeffs.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("Schmidt coefficients sum to {s}")));
        }
        Ok(Self(coeffs))
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.0
    }

    /// Rényi-α entropy in bits.
    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        super::renyi_entropy(&self.0, alpha)
    }

    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&c| c > tol).count()
    }
}
