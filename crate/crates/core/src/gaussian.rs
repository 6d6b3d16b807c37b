//! Mean/covariance description of Gaussian states and channels, and the
//! bridge to the Fock representation.
//!
//! Covariance convention: `σ = ⟨{Δr̂, Δr̂ᵀ}⟩`, so the vacuum has `σ = I`.
//! Quadratures are interleaved `(q_1, p_1, …, q_m, p_m)`.

use faer::{c64, Mat, MatRef};

use crate::error::{invalid, Error, Result};
use crate::fock::{self, DensityOperator, PhasePoint};
use crate::linalg::{self, ZERO};
use crate::special::binomial;

/// Symplectic form `Ω = ⊕ [[0, 1], [−1, 0]]`.
pub fn omega(modes: usize) -> Mat<f64> {
    Mat::from_fn(2 * modes, 2 * modes, |i, j| {
        if i / 2 != j / 2 {
            0.0
        } else if i % 2 == 0 && j == i + 1 {
            1.0
        } else if i % 2 == 1 && j + 1 == i {
            -1.0
        } else {
            0.0
        }
    })
}

fn is_symmetric(m: MatRef<'_, f64>, tol: f64) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= tol))
}

/// Smallest eigenvalue of the Hermitian matrix `a + i b` (`b` antisymmetric).
fn min_eig_complex(a: MatRef<'_, f64>, b: MatRef<'_, f64>) -> Result<f64> {
    let m = Mat::<c64>::from_fn(a.nrows(), a.ncols(), |i, j| c64::new(a[(i, j)], b[(i, j)]));
    let ev = linalg::hermitian_eigenvalues(linalg::hermitize(m.as_ref()).as_ref())?;
    Ok(ev.into_iter().fold(f64::INFINITY, f64::min))
}

fn matvec(m: MatRef<'_, f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum()).collect()
}

/// A Gaussian state given by its first and second moments.
#[derive(Debug, Clone)]
pub struct GaussianState {
    mean: Vec<f64>,
    cov: Mat<f64>,
}

impl GaussianState {
    /// Validates symmetry (1e-12) and the uncertainty relation
    /// `σ + iΩ ⪰ 0` (within 1e-10).
    pub fn new(mean: Vec<f64>, cov: Mat<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 || n % 2 != 0 {
            return Err(invalid("mean vector must have even, nonzero length"));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: cov.nrows(),
            });
        }
        if !is_symmetric(cov.as_ref(), 1e-12) {
            return Err(Error::InvalidCovariance("not symmetric".into()));
        }
        let min = min_eig_complex(cov.as_ref(), omega(n / 2).as_ref())?;
        if min < -1e-10 {
            return Err(Error::InvalidCovariance(format!(
                "violates the uncertainty relation (λ_min(σ + iΩ) = {min:.3e})"
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::thermal(modes, 0.0).expect("vacuum is valid")
    }

    /// Thermal state with mean photon number `nbar` per mode.
    pub fn thermal(modes: usize, nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0) {
            return Err(invalid("thermal occupation must be nonnegative"));
        }
        let v = 2.0 * nbar + 1.0;
        Self::new(
            vec![0.0; 2 * modes],
            Mat::from_fn(2 * modes, 2 * modes, |i, j| if i == j { v } else { 0.0 }),
        )
    }

    /// Single-mode displaced squeezed thermal state: `σ = ν R(φ) diag(e^{−2s}, e^{2s}) R(φ)ᵀ`.
    pub fn single_mode(q: f64, p: f64, nbar: f64, s: f64, phi: f64) -> Result<Self> {
        let nu = 2.0 * nbar + 1.0;
        let (sn, cs) = phi.sin_cos();
        let (l1, l2) = (nu * (-2.0 * s).exp(), nu * (2.0 * s).exp());
        let cov = Mat::from_fn(2, 2, |i, j| {
            let r = [[cs, -sn], [sn, cs]];
            r[i][0] * l1 * r[j][0] + r[i][1] * l2 * r[j][1]
        });
        Self::new(vec![q, p], cov)
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> MatRef<'_, f64> {
        self.cov.as_ref()
    }

    /// `σ_A ⊕ σ_B`, `μ_A ⊕ μ_B`.
    pub fn direct_sum(&self, other: &GaussianState) -> GaussianState {
        let (n1, n2) = (self.mean.len(), other.mean.len());
        let cov = Mat::from_fn(n1 + n2, n1 + n2, |i, j| {
            if i < n1 && j < n1 {
                self.cov[(i, j)]
            } else if i >= n1 && j >= n1 {
                other.cov[(i - n1, j - n1)]
            } else {
                0.0
            }
        });
        let mut mean = self.mean.clone();
        mean.extend_from_slice(&other.mean);
        GaussianState { mean, cov }
    }

    /// Symplectic eigenvalues (single mode: `√det σ`).
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        // eigenvalues of iΩσ come in ±ν pairs
        let n = self.mean.len();
        let om = omega(n / 2);
        // iΩσ is not Hermitian; σ^{1/2} iΩ σ^{1/2} has the same spectrum
        let sc = Mat::<c64>::from_fn(n, n, |i, j| c64::new(self.cov[(i, j)], 0.0));
        let half = linalg::hermitian_function(sc.as_ref(), |x| x.max(0.0).sqrt())?;
        let om_c = Mat::<c64>::from_fn(n, n, |i, j| c64::new(0.0, om[(i, j)]));
        let h = &(&half * &om_c) * &half;
        let mut ev: Vec<f64> = linalg::hermitian_eigenvalues(linalg::hermitize(h.as_ref()).as_ref())?
            .into_iter()
            .filter(|x| *x > 0.0)
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }
}

/// `χ_G(r) = exp(−¼ rᵀΩᵀσΩr − i μᵀΩr)`.
pub fn gaussian_characteristic(g: &GaussianState, point: &PhasePoint) -> Result<c64> {
    let r = point.coords();
    let n = g.mean.len();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: r.len(),
        });
    }
    let om = omega(n / 2);
    let w = matvec(om.as_ref(), r); // Ωr
    let sw = matvec(g.cov.as_ref(), &w);
    let quad: f64 = w.iter().zip(&sw).map(|(a, b)| a * b).sum();
    let lin: f64 = g.mean.iter().zip(&w).map(|(a, b)| a * b).sum();
    Ok(c64::from_polar((-0.25 * quad).exp(), -lin))
}

/// A real matrix with `SΩSᵀ = Ω`.
#[derive(Debug, Clone)]
pub struct SymplecticMatrix(Mat<f64>);

impl SymplecticMatrix {
    /// Validates `SΩSᵀ = Ω` within 1e-10.
    pub fn new(s: Mat<f64>) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n || n % 2 != 0 || n == 0 {
            return Err(invalid("symplectic matrix must be square of even size"));
        }
        let om = omega(n / 2);
        let defect = (&(&s * &om) * s.transpose() - &om).norm_max();
        if defect > 1e-10 {
            return Err(invalid(format!("matrix is not symplectic (defect {defect:.2e})")));
        }
        Ok(Self(s))
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.0.as_ref()
    }

    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        SymplecticMatrix::new(&self.0 * &other.0)
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = omega(self.0.nrows() / 2);
        let inv = &(&om * self.0.transpose()) * &om;
        SymplecticMatrix(Mat::from_fn(inv.nrows(), inv.ncols(), |i, j| -inv[(i, j)]))
    }

    /// Phase rotation by `phi` on a single mode.
    pub fn rotation(phi: f64) -> SymplecticMatrix {
        let (s, c) = phi.sin_cos();
        SymplecticMatrix(Mat::from_fn(2, 2, |i, j| [[c, -s], [s, c]][i][j]))
    }

    /// Single-mode squeezer `diag(e^{−s}, e^{s})`.
    pub fn squeezer(s: f64) -> SymplecticMatrix {
        SymplecticMatrix(Mat::from_fn(2, 2, |i, j| {
            if i != j {
                0.0
            } else if i == 0 {
                (-s).exp()
            } else {
                s.exp()
            }
        }))
    }
}

/// `(1/√2)[[I, I], [−I, I]]` on two `m`-mode systems, the Heisenberg-picture
/// matrix of `U_BS`: `U r̂ U† = S r̂`. Moments of the output state transform
/// with `Sᵀ`.
pub fn beam_splitter_symplectic(m: usize) -> Result<SymplecticMatrix> {
    if m == 0 {
        return Err(invalid("beam splitter needs m ≥ 1"));
    }
    let n = 2 * m;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(SymplecticMatrix(Mat::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        if i % n != j % n {
            0.0
        } else if bi == 1 && bj == 0 {
            -h
        } else {
            h
        }
    })))
}

/// `μ → Sμ + d`, `σ → SσSᵀ`.
pub fn apply_symplectic(g: &GaussianState, s: &SymplecticMatrix, d: &[f64]) -> Result<GaussianState> {
    let n = g.mean.len();
    if s.0.nrows() != n || d.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: s.0.nrows(),
        });
    }
    let mean: Vec<f64> = matvec(s.0.as_ref(), &g.mean).iter().zip(d).map(|(a, b)| a + b).collect();
    let cov = &(&s.0 * &g.cov) * s.0.transpose();
    let cov = Mat::from_fn(n, n, |i, j| 0.5 * (cov[(i, j)] + cov[(j, i)]));
    Ok(GaussianState { mean, cov })
}

/// A Gaussian channel `σ → XᵀσX + Y`, `μ → Xᵀμ + d`.
#[derive(Debug, Clone)]
pub struct GaussianChannelSpec {
    pub x: Mat<f64>,
    pub y: Mat<f64>,
    pub d: Vec<f64>,
}

impl GaussianChannelSpec {
    pub fn identity(modes: usize) -> Self {
        Self::pure_loss(modes, 1.0).expect("η = 1 is valid")
    }

    /// Pure loss with transmissivity `eta`: `σ → ησ + (1−η)I`.
    pub fn pure_loss(modes: usize, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidChannel(format!("transmissivity {eta} outside [0, 1]")));
        }
        let n = 2 * modes;
        Ok(Self {
            x: Mat::from_fn(n, n, |i, j| if i == j { eta.sqrt() } else { 0.0 }),
            y: Mat::from_fn(n, n, |i, j| if i == j { 1.0 - eta } else { 0.0 }),
            d: vec![0.0; n],
        })
    }
}

/// `Y + iΩ − i XᵀΩX ⪰ 0` (within 1e-10), the complete-positivity condition
/// matching the `XᵀσX` orientation.
pub fn check_cp(ch: &GaussianChannelSpec) -> Result<bool> {
    let (nin, nout) = (ch.x.nrows(), ch.x.ncols());
    if nin % 2 != 0 || nout % 2 != 0 || ch.y.nrows() != nout || ch.y.ncols() != nout || ch.d.len() != nout {
        return Err(invalid("inconsistent channel dimensions"));
    }
    if !is_symmetric(ch.y.as_ref(), 1e-12) {
        return Ok(false);
    }
    let om_in = omega(nin / 2);
    let om_out = omega(nout / 2);
    let xox = &(ch.x.transpose() * &om_in) * &ch.x;
    let b = Mat::from_fn(nout, nout, |i, j| om_out[(i, j)] - xox[(i, j)]);
    Ok(min_eig_complex(ch.y.as_ref(), b.as_ref())? >= -1e-10)
}

pub fn channel_apply(g: &GaussianState, ch: &GaussianChannelSpec) -> Result<GaussianState> {
    if ch.x.nrows() != g.mean.len() {
        return Err(Error::DimensionMismatch {
            expected: g.mean.len(),
            actual: ch.x.nrows(),
        });
    }
    if !check_cp(ch)? {
        return Err(Error::InvalidChannel("complete-positivity condition violated".into()));
    }
    let xt = ch.x.transpose();
    let mean: Vec<f64> = matvec(xt, &g.mean).iter().zip(&ch.d).map(|(a, b)| a + b).collect();
    let cov = &(&(xt * &g.cov) * &ch.x) + &ch.y;
    let n = cov.nrows();
    let cov = Mat::from_fn(n, n, |i, j| 0.5 * (cov[(i, j)] + cov[(j, i)]));
    Ok(GaussianState { mean, cov })
}

/// Mean vector and covariance matrix of a one- or two-mode Fock operator,
/// from truncated ladder-operator moments.
pub fn covariance_of(rho: &DensityOperator) -> Result<(Vec<f64>, Mat<f64>)> {
    let c = rho.cutoff();
    let d = c + 1;
    let m = rho.matrix();
    let modes = rho.modes();
    // ⟨O⟩ for an operator given by its single-mode matrix elements acting on `mode`
    let sqrt = |n: usize| (n as f64).sqrt();
    let idx = |na: usize, nb: usize| if modes == 1 { na } else { na * d + nb };
    // ⟨a_k⟩, ⟨a_k²⟩, ⟨a_k† a_k⟩ and ⟨a b⟩, ⟨a† b⟩
    let mut a1 = [ZERO; 2];
    let mut a2 = [ZERO; 2];
    let mut nn = [0.0; 2];
    let (mut ab, mut adb) = (ZERO, ZERO);
    let nb_range = if modes == 1 { 0..1 } else { 0..d };
    for na in 0..d {
        for nb in nb_range.clone() {
            let i = idx(na, nb);
            nn[0] += na as f64 * m[(i, i)].re;
            nn[1] += nb as f64 * m[(i, i)].re;
            // ⟨a⟩ = Σ ρ_{(n+1), n} ... Tr[a ρ] = Σ_{n} √(n+1) ρ[(n+1),(n)] over matching other index
            if na + 1 < d {
                a1[0] += m[(idx(na + 1, nb), i)] * sqrt(na + 1);
            }
            if na + 2 < d {
                a2[0] += m[(idx(na + 2, nb), i)] * (sqrt(na + 1) * sqrt(na + 2));
            }
            if modes == 2 {
                if nb + 1 < d {
                    a1[1] += m[(idx(na, nb + 1), i)] * sqrt(nb + 1);
                }
                if nb + 2 < d {
                    a2[1] += m[(idx(na, nb + 2), i)] * (sqrt(nb + 1) * sqrt(nb + 2));
                }
                if na + 1 < d && nb + 1 < d {
                    ab += m[(idx(na + 1, nb + 1), i)] * (sqrt(na + 1) * sqrt(nb + 1));
                }
                // a† b |na, nb⟩ = √(na+1)√nb |na+1, nb−1⟩ → Tr[a†b ρ] = Σ ⟨na,nb|ρ|na+1,nb−1⟩ …
                if na + 1 < d && nb >= 1 {
                    adb += m[(i, idx(na + 1, nb - 1))] * (sqrt(na + 1) * sqrt(nb));
                }
            }
        }
    }
    let mut mean = vec![0.0; 2 * modes];
    let mut cov = Mat::<f64>::zeros(2 * modes, 2 * modes);
    let s2 = std::f64::consts::SQRT_2;
    for k in 0..modes {
        let (mq, mp) = (s2 * a1[k].re, s2 * a1[k].im);
        mean[2 * k] = mq;
        mean[2 * k + 1] = mp;
        cov[(2 * k, 2 * k)] = 2.0 * a2[k].re + 2.0 * nn[k] + 1.0 - 2.0 * mq * mq;
        cov[(2 * k + 1, 2 * k + 1)] = -2.0 * a2[k].re + 2.0 * nn[k] + 1.0 - 2.0 * mp * mp;
        let qp = 2.0 * a2[k].im - 2.0 * mq * mp;
        cov[(2 * k, 2 * k + 1)] = qp;
        cov[(2 * k + 1, 2 * k)] = qp;
    }
    if modes == 2 {
        let (qa, pa, qb, pb) = (mean[0], mean[1], mean[2], mean[3]);
        let qq = ab.re + adb.re;
        let qp = ab.im + adb.im;
        let pq = ab.im - adb.im;
        let pp = -ab.re + adb.re;
        let entries = [
            (0, 2, qq - qa * qb),
            (0, 3, qp - qa * pb),
            (1, 2, pq - pa * qb),
            (1, 3, pp - pa * pb),
        ];
        for (i, j, v) in entries {
            cov[(i, j)] = 2.0 * v;
            cov[(j, i)] = 2.0 * v;
        }
    }
    Ok((mean, cov))
}

fn padded(cutoff: usize) -> usize {
    cutoff + 1 + 20usize.max(cutoff / 2)
}

/// Fock representation of a single-mode Gaussian state:
/// `D(μ) R(φ) S(s) τ(n̄) S† R† D†` built in a padded space, then cut to
/// `cutoff` (fails if more than 1e-8 of the trace is lost).
pub fn embed_gaussian_to_fock(g: &GaussianState, cutoff: usize) -> Result<DensityOperator> {
    if g.modes() != 1 {
        return Err(invalid("Fock embedding is single-mode"));
    }
    let cov = g.cov();
    let det = cov[(0, 0)] * cov[(1, 1)] - cov[(0, 1)] * cov[(1, 0)];
    let nu = det.max(0.0).sqrt();
    if nu < 1.0 - 1e-8 {
        return Err(Error::InvalidCovariance(format!("symplectic eigenvalue {nu} < 1")));
    }
    let nu = nu.max(1.0);
    let nbar = (nu - 1.0) / 2.0;
    // σ/ν = R(φ) diag(e^{−2s}, e^{2s}) R(φ)ᵀ
    let (a, b, c) = (cov[(0, 0)] / nu, cov[(0, 1)] / nu, cov[(1, 1)] / nu);
    let tr = a + c;
    let disc = ((a - c) * (a - c) / 4.0 + b * b).sqrt();
    let lmin = (tr / 2.0 - disc).max(1e-300);
    let s = -0.5 * lmin.ln();
    // eigenvector of lmin
    let phi = if disc < 1e-15 {
        0.0
    } else {
        let (vx, vy) = if b.abs() > 1e-300 { (b, lmin - a) } else if a <= c { (1.0, 0.0) } else { (0.0, 1.0) };
        vy.atan2(vx)
    };

    let dim = padded(cutoff);
    // thermal seed
    let mut probs = vec![0.0; dim];
    for (n, p) in probs.iter_mut().enumerate() {
        *p = if nbar == 0.0 {
            if n == 0 { 1.0 } else { 0.0 }
        } else {
            (n as f64 * (nbar / (nbar + 1.0)).ln()).exp() / (nbar + 1.0)
        };
    }
    let mut rho = Mat::<c64>::from_fn(dim, dim, |i, j| if i == j { c64::new(probs[i], 0.0) } else { ZERO });

    let ann = fock::annihilation(dim);
    let conj = |u: &Mat<c64>, r: &Mat<c64>| &(u * r) * u.adjoint();
    if s != 0.0 {
        let a2 = &ann * &ann;
        let gen = Mat::from_fn(dim, dim, |i, j| (a2[(i, j)] - a2[(j, i)].conj()) * (0.5 * s));
        rho = conj(&linalg::expm(gen.as_ref())?, &rho);
    }
    if phi != 0.0 {
        let u = Mat::from_fn(dim, dim, |i, j| if i == j { c64::from_polar(1.0, phi * i as f64) } else { ZERO });
        rho = conj(&u, &rho);
    }
    let mu = g.mean();
    if mu[0] != 0.0 || mu[1] != 0.0 {
        let alpha = c64::new(mu[0], mu[1]) * std::f64::consts::FRAC_1_SQRT_2;
        let gen = Mat::from_fn(dim, dim, |i, j| alpha * ann[(j, i)].conj() - alpha.conj() * ann[(i, j)]);
        rho = conj(&linalg::expm(gen.as_ref())?, &rho);
    }
    let d = cutoff + 1;
    let kept: f64 = (0..d).map(|i| rho[(i, i)].re).sum();
    let leakage = 1.0 - kept;
    if leakage > fock::GATE_LEAKAGE_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            leakage,
            tolerance: fock::GATE_LEAKAGE_TOL,
        });
    }
    let out = Mat::from_fn(d, d, |i, j| rho[(i, j)] / kept);
    let mut res = DensityOperator::from_matrix_unchecked(1, cutoff, out)?;
    res.diagnostics.leakage = leakage;
    Ok(res)
}

/// Pure-loss channel on a single-mode Fock operator via the Kraus operators
/// `K_k = √((1−η)^k / k!) η^{n̂/2} a^k`.
pub fn apply_loss_fock(rho: &DensityOperator, eta: f64) -> Result<DensityOperator> {
    if rho.modes() != 1 {
        return Err(invalid("loss channel is single-mode"));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidChannel(format!("transmissivity {eta} outside [0, 1]")));
    }
    let d = rho.dim();
    let m = rho.matrix();
    let mut out = Mat::<c64>::zeros(d, d);
    for k in 0..d {
        // ⟨n−k|K_k|n⟩ = √C(n,k) (1−η)^{k/2} η^{(n−k)/2}
        let kamp = |n: usize| -> f64 {
            if n < k {
                return 0.0;
            }
            let lb = 0.5 * binomial(n as i64, k as i64).ln();
            let le = if k == 0 { 0.0 } else { 0.5 * k as f64 * (1.0 - eta).ln() };
            let lt = if n == k { 0.0 } else { 0.5 * (n - k) as f64 * eta.ln() };
            (lb + le + lt).exp()
        };
        if k > 0 && eta == 1.0 {
            break;
        }
        let amps: Vec<f64> = (0..d).map(kamp).collect();
        for n1 in k..d {
            for n2 in k..d {
                out[(n1 - k, n2 - k)] += m[(n1, n2)] * (amps[n1] * amps[n2]);
            }
        }
    }
    let mut res = DensityOperator::from_matrix_unchecked(1, rho.cutoff(), out)?;
    res.diagnostics = rho.diagnostics;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{characteristic_function, make_coherent, make_fock, make_squeezed};

    #[test]
    fn vacuum_characteristic() {
        let g = GaussianState::vacuum(1);
        let pt = PhasePoint::qp(0.8, -1.3);
        let chi = gaussian_characteristic(&g, &pt).unwrap();
        assert!((chi.re - (-(0.64 + 1.69) / 4.0f64).exp()).abs() < 1e-15 && chi.im.abs() < 1e-15);
    }

    #[test]
    fn beam_splitter_symplectic_properties() {
        let s = beam_splitter_symplectic(1).unwrap();
        assert!(SymplecticMatrix::new(s.matrix().to_owned()).is_ok());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.matrix()[(0, 2)] - h).abs() < 1e-15 && (s.matrix()[(2, 0)] + h).abs() < 1e-15);
        let inv = s.inverse();
        let id = &s.matrix() * inv.matrix();
        assert!((&id - Mat::<f64>::identity(4, 4)).norm_max() < 1e-14);
    }

    #[test]
    fn loss_on_thermal() {
        let g = GaussianState::thermal(1, 1.0).unwrap();
        let out = channel_apply(&g, &GaussianChannelSpec::pure_loss(1, 0.5).unwrap()).unwrap();
        assert!((out.cov()[(0, 0)] - 2.0).abs() < 1e-14); // n̄ = 0.5
        let gone = channel_apply(&g, &GaussianChannelSpec::pure_loss(1, 0.0).unwrap()).unwrap();
        assert!((gone.cov()[(1, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cp_check_rejects_amplifier_without_noise() {
        let ch = GaussianChannelSpec {
            x: Mat::from_fn(2, 2, |i, j| if i == j { 1.5 } else { 0.0 }),
            y: Mat::zeros(2, 2),
            d: vec![0.0; 2],
        };
        assert!(!check_cp(&ch).unwrap());
        assert!(channel_apply(&GaussianState::vacuum(1), &ch).is_err());
    }

    #[test]
    fn covariance_of_simple_states() {
        let (mu, cov) = covariance_of(&make_fock(0, 10).unwrap().to_density()).unwrap();
        assert!(mu.iter().all(|x| x.abs() < 1e-15));
        assert!((&cov - Mat::<f64>::identity(2, 2)).norm_max() < 1e-14);
        let (_, cov) = covariance_of(&make_fock(1, 10).unwrap().to_density()).unwrap();
        assert!((cov[(0, 0)] - 3.0).abs() < 1e-14 && (cov[(1, 1)] - 3.0).abs() < 1e-14);
        let alpha = c64::new(0.4, -0.9);
        let (mu, cov) = covariance_of(&make_coherent(alpha, 40).unwrap().to_density()).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert!((mu[0] - s2 * 0.4).abs() < 1e-10 && (mu[1] + s2 * 0.9).abs() < 1e-10);
        assert!((&cov - Mat::<f64>::identity(2, 2)).norm_max() < 1e-9);
        let (_, cov) = covariance_of(&make_squeezed(0.3, 60).unwrap().to_density()).unwrap();
        assert!((cov[(0, 0)] - (-0.6f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn embedding_round_trip() {
        let g = GaussianState::single_mode(0.4, -0.3, 0.2, 0.25, 0.7).unwrap();
        let rho = embed_gaussian_to_fock(&g, 60).unwrap();
        let (mu, cov) = covariance_of(&rho).unwrap();
        assert!((mu[0] - 0.4).abs() < 1e-9 && (mu[1] + 0.3).abs() < 1e-9);
        assert!((&cov - g.cov()).norm_max() < 1e-8);
        for &(q, p) in &[(0.5, 0.2), (-1.0, 2.0), (3.0, -1.5)] {
            let pt = PhasePoint::qp(q, p);
            let a = characteristic_function(&rho, &pt).unwrap();
            let b = gaussian_characteristic(&g, &pt).unwrap();
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn thermal_embedding_is_geometric() {
        let rho = embed_gaussian_to_fock(&GaussianState::thermal(1, 1.0).unwrap(), 60).unwrap();
        for n in 0..10 {
            assert!((rho.matrix()[(n, n)].re - 0.5f64.powi(n as i32 + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn loss_on_single_photon() {
        let rho = make_fock(1, 8).unwrap().to_density();
        let out = apply_loss_fock(&rho, 0.3).unwrap();
        assert!((out.matrix()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!((out.matrix()[(0, 0)].re - 0.7).abs() < 1e-15);
        let same = apply_loss_fock(&rho, 1.0).unwrap();
        assert!((&same.into_matrix() - rho.matrix()).norm_max() < 1e-15);
    }
}
