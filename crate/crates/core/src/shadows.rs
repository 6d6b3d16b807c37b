//! Single-mode classical shadows from random-axis homodyne detection.
//!
//! A shot rotates by a uniform angle θ and measures `X_θ = q cos θ + p sin θ`
//! (vacuum variance ½). Since `D(t n_θ) = e^{itX_θ}` with
//! `n_θ = (sin θ, −cos θ)`, inverting the characteristic function in polar
//! coordinates gives the unbiased single-shot estimator
//!
//! `ρ̂(θ, x) = ½ ∫ |t| e^{itx} D(−t n_θ) dt`,
//!
//! whose Fock matrix elements up to `M` are finite. With
//! `D(−t n_θ) = R(θ − π/2) D(t/√2) R†` and the parity of the real matrix
//! `g_mn(u) = ⟨m|D(u)|n⟩`, each element reduces to a one-sided cosine or
//! sine transform in `t`.

use faer::{c64, Mat};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{displacement_matrix_beta, DensityOperator};
use crate::quadrature::gauss_legendre;
use crate::rng::{chunks, stream};
use crate::special::hermite_functions;

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

/// Largest Fock cap for shadow matrices.
pub const MAX_SHADOW_CAP: usize = 20;
/// Grid intervals for inverse-CDF sampling.
const GRID: usize = 4096;
/// Density threshold used to find the support.
const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowSample {
    pub theta: f64,
    pub x: f64,
}

/// Averaged shadow matrix `σ^(N)(M)`.
#[derive(Debug, Clone)]
pub struct ShadowEstimate {
    pub matrix: Mat<c64>,
    pub cap: usize,
    pub samples: usize,
}

/// Inverse-CDF sampler for the rotated-quadrature distributions of `ρ`.
pub struct ShadowSampler {
    xs: Vec<f64>,
    /// `G_k(x_j) = ∫_{x_0}^{x_j} Σ_{m−n=k} ρ_mn φ_m φ_n`, `k ≥ 0`.
    cumulative: Vec<Vec<c64>>,
}

impl ShadowSampler {
    pub fn new(rho: &DensityOperator) -> Result<Self> {
        if rho.modes() != 1 {
            return Err(invalid("shadows are single-mode"));
        }
        let c = rho.cutoff();
        let m = rho.matrix();
        let amp: Vec<f64> = (0..=c).map(|n| m[(n, n)].re.max(0.0).sqrt()).collect();
        // |ρ_mn| ≤ √(ρ_mm ρ_nn) bounds every p_θ by (Σ √ρ_nn |φ_n|)²
        let envelope = |x: f64| -> f64 {
            let phi = hermite_functions(c, x);
            amp.iter().zip(&phi).map(|(a, p)| a * p.abs()).sum::<f64>().powi(2)
        };
        let mut xmax = 4.0;
        while envelope(xmax) > SUPPORT_TOL || envelope(-xmax) > SUPPORT_TOL {
            xmax += 0.5;
            if xmax > 200.0 {
                return Err(Error::NumericalFailure("quadrature support exceeds |x| = 200".into()));
            }
        }
        let h = 2.0 * xmax / GRID as f64;
        let xs: Vec<f64> = (0..=GRID).map(|j| -xmax + h * j as f64).collect();
        let dens: Vec<Vec<c64>> = xs
            .par_iter()
            .map(|&x| {
                let phi = hermite_functions(c, x);
                (0..=c)
                    .map(|k| (k..=c).map(|mm| m[(mm, mm - k)] * (phi[mm] * phi[mm - k])).sum())
                    .collect()
            })
            .collect();
        let mut cumulative = vec![vec![c64::new(0.0, 0.0); GRID + 1]; c + 1];
        for (k, g) in cumulative.iter_mut().enumerate() {
            for j in 1..=GRID {
                g[j] = g[j - 1] + (dens[j - 1][k] + dens[j][k]) * (0.5 * h);
            }
        }
        let s = Self { xs, cumulative };
        for i in 0..8 {
            let mass = s.cdf(i as f64 * PI / 8.0, GRID);
            if mass < 1.0 - 1e-6 {
                return Err(Error::NumericalFailure(format!(
                    "homodyne mass {mass:.9} on [−{xmax}, {xmax}] below 1 − 1e-6"
                )));
            }
        }
        Ok(s)
    }

    /// `P(X_θ ≤ x_j)` on the grid.
    fn cdf(&self, theta: f64, j: usize) -> f64 {
        let mut acc = self.cumulative[0][j].re;
        for (k, g) in self.cumulative.iter().enumerate().skip(1) {
            let (s, c) = (k as f64 * theta).sin_cos();
            // e^{−ikθ} G_k + c.c.
            acc += 2.0 * (g[j].re * c + g[j].im * s);
        }
        acc
    }

    pub fn sample(&self, rng: &mut impl Rng) -> ShadowSample {
        let theta = rng.random::<f64>() * TAU;
        let u: f64 = rng.random::<f64>() * self.cdf(theta, GRID);
        let (mut lo, mut hi) = (0, GRID);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.cdf(theta, mid) <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (f0, f1) = (self.cdf(theta, lo), self.cdf(theta, hi));
        let frac = if f1 > f0 { ((u - f0) / (f1 - f0)).clamp(0.0, 1.0) } else { 0.5 };
        ShadowSample {
            theta,
            x: self.xs[lo] + frac * (self.xs[hi] - self.xs[lo]),
        }
    }
}

/// One shot for `ρ`, keyed by `seed`.
pub fn sample_shadow(rho: &DensityOperator, seed: u64) -> Result<ShadowSample> {
    Ok(ShadowSampler::new(rho)?.sample(&mut stream(seed, 0)))
}

/// `n` shots; chunk `k` uses the stream `(seed, k)`.
pub fn sample_shadows(rho: &DensityOperator, n: usize, seed: u64) -> Result<Vec<ShadowSample>> {
    let sampler = ShadowSampler::new(rho)?;
    let parts: Vec<Vec<ShadowSample>> = chunks(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, _, len)| {
            let mut rng = stream(seed, k);
            (0..len).map(|_| sampler.sample(&mut rng)).collect()
        })
        .collect();
    Ok(parts.concat())
}

/// Precomputed `t`-quadrature for shadow matrices with cap `M`.
pub struct ShadowKernel {
    cap: usize,
    nodes: Vec<f64>,
    /// `w_k t_k g_mn(t_k/√2)` for `m ≤ n`, packed row-major per node.
    weights: Vec<Vec<f64>>,
    pairs: Vec<(usize, usize)>,
    /// Largest `t` retained.
    pub t_max: f64,
}

impl ShadowKernel {
    pub fn new(cap: usize) -> Result<Self> {
        if cap > MAX_SHADOW_CAP {
            return Err(invalid(format!("shadow cap {cap} exceeds {MAX_SHADOW_CAP}")));
        }
        let d = cap + 1;
        let g = |t: f64| displacement_matrix_beta(c64::new(t * FRAC_1_SQRT_2, 0.0), d);
        let peak = |t: f64| g(t).iter().map(|z| z.norm()).fold(0.0, f64::max) * t;
        // integrand ∝ t e^{−t²/4} poly(t): truncate once it stays below 1e-14
        let mut t_max: f64 = 6.0;
        while (0..4).any(|i| peak(t_max + 0.5 * i as f64) > 1e-14) {
            t_max += 0.5;
            if t_max > 80.0 {
                return Err(Error::NumericalFailure("shadow integrand does not decay".into()));
            }
        }
        let panels = t_max.ceil() as usize;
        let width = t_max / panels as f64;
        let rule = gauss_legendre(16);
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|m| (m..d).map(move |n| (m, n))).collect();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in 0..panels {
            let (a, b) = (p as f64 * width, (p + 1) as f64 * width);
            for (x, w) in rule.0.iter().zip(&rule.1) {
                let t = 0.5 * (a + b) + 0.5 * (b - a) * x;
                let wt = 0.5 * (b - a) * w * t;
                let gm = g(t);
                nodes.push(t);
                weights.push(pairs.iter().map(|&(m, n)| wt * gm[m * d + n].re).collect());
            }
        }
        Ok(Self {
            cap,
            nodes,
            weights,
            pairs,
            t_max,
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Single-shot shadow matrix restricted to `{0..M}`.
    pub fn matrix(&self, s: &ShadowSample) -> Mat<c64> {
        let d = self.cap + 1;
        let mut even = vec![0.0; self.pairs.len()];
        let mut odd = vec![0.0; self.pairs.len()];
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let (sn, cs) = (t * s.x).sin_cos();
            for (i, &(m, n)) in self.pairs.iter().enumerate() {
                if (n - m) % 2 == 0 {
                    even[i] += w[i] * cs;
                } else {
                    odd[i] += w[i] * sn;
                }
            }
        }
        let phi = s.theta - 0.5 * PI;
        let mut out = Mat::<c64>::zeros(d, d);
        for (i, &(m, n)) in self.pairs.iter().enumerate() {
            let h = if (n - m) % 2 == 0 {
                c64::new(even[i], 0.0)
            } else {
                c64::new(0.0, odd[i])
            };
            let ph = (m as f64 - n as f64) * phi;
            let v = h * c64::new(ph.cos(), ph.sin());
            out[(m, n)] = v;
            out[(n, m)] = v.conj();
        }
        out
    }
}

/// Single-sample shadow matrix.
pub fn shadow_matrix(sample: &ShadowSample, cap: usize) -> Result<ShadowEstimate> {
    Ok(ShadowEstimate {
        matrix: ShadowKernel::new(cap)?.matrix(sample),
        cap,
        samples: 1,
    })
}

/// Per-chunk sums of shadow matrices and of their squared Frobenius norms.
fn chunk_sums(samples: &[ShadowSample], kernel: &ShadowKernel) -> Vec<(Mat<c64>, f64, usize)> {
    let d = kernel.cap + 1;
    chunks(samples.len())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, start, len)| {
            let mut acc = Mat::<c64>::zeros(d, d);
            let mut sq = 0.0;
            for s in &samples[start..start + len] {
                let m = kernel.matrix(s);
                sq += m.squared_norm_l2();
                acc += &m;
            }
            (acc, sq, len)
        })
        .collect()
}

/// `σ^(N)(M) = (1/N) Σ_i ρ̂_i(M)`.
pub fn shadow_average(samples: &[ShadowSample], cap: usize) -> Result<ShadowEstimate> {
    if samples.is_empty() {
        return Err(invalid("no shadow samples"));
    }
    let kernel = ShadowKernel::new(cap)?;
    let d = cap + 1;
    let mut total = Mat::<c64>::zeros(d, d);
    for (m, _, _) in chunk_sums(samples, &kernel) {
        total += &m;
    }
    let inv = 1.0 / samples.len() as f64;
    Ok(ShadowEstimate {
        matrix: Mat::from_fn(d, d, |i, j| total[(i, j)] * inv),
        cap,
        samples: samples.len(),
    })
}

/// Unbiased purity from matrices: `(2/(N(N−1))) Σ_{i<j} Re Tr[ρ̂_i ρ̂_j]`.
pub fn purity_u_statistic(mats: &[Mat<c64>]) -> Result<f64> {
    if mats.len() < 2 {
        return Err(invalid("purity needs at least two samples"));
    }
    let d = mats[0].nrows();
    let mut sum = Mat::<c64>::zeros(d, d);
    let mut sq = 0.0;
    for m in mats {
        sq += m.squared_norm_l2();
        sum += m;
    }
    let n = mats.len() as f64;
    Ok((sum.squared_norm_l2() - sq) / (n * (n - 1.0)))
}

/// Shadow purity estimate with a batch-bootstrap standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityEstimate {
    pub purity: f64,
    pub stderr_bootstrap: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
}

/// U-statistic purity of the shadows.
pub fn shadow_purity(samples: &[ShadowSample], cap: usize) -> Result<f64> {
    Ok(shadow_purity_with_error(samples, cap, 0)?.purity)
}

const BOOTSTRAP_REPS: usize = 200;

/// As [`shadow_purity`], with a standard error from resampling the
/// per-chunk sums (seeded by `seed`).
pub fn shadow_purity_with_error(samples: &[ShadowSample], cap: usize, seed: u64) -> Result<PurityEstimate> {
    if samples.len() < 2 {
        return Err(invalid("purity needs at least two samples"));
    }
    let kernel = ShadowKernel::new(cap)?;
    let parts = chunk_sums(samples, &kernel);
    let ustat = |idx: &mut dyn Iterator<Item = usize>| -> f64 {
        let d = cap + 1;
        let mut sum = Mat::<c64>::zeros(d, d);
        let (mut sq, mut n) = (0.0, 0usize);
        for i in idx {
            sum += &parts[i].0;
            sq += parts[i].1;
            n += parts[i].2;
        }
        let n = n as f64;
        (sum.squared_norm_l2() - sq) / (n * (n - 1.0))
    };
    let purity = ustat(&mut (0..parts.len()));
    let stderr = if parts.len() < 2 {
        f64::NAN
    } else {
        let mut rng = stream(seed ^ 0x5eed_b007, u64::MAX);
        let reps: Vec<f64> = (0..BOOTSTRAP_REPS)
            .map(|_| {
                let picks: Vec<usize> = (0..parts.len()).map(|_| rng.random_range(0..parts.len())).collect();
                ustat(&mut picks.into_iter())
            })
            .collect();
        let mean = reps.iter().sum::<f64>() / reps.len() as f64;
        (reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (reps.len() - 1) as f64).sqrt()
    };
    Ok(PurityEstimate {
        purity,
        stderr_bootstrap: stderr,
        n: samples.len(),
        m: cap,
        seed,
    })
}

/// Truncated Mercator series for the von Neumann entropy (nats):
/// `H(d_p)(σ) = Tr[P_M − σ] − Σ_{k=2}^{d_p} Tr[(P_M − σ)^k]/(k(k−1))`.
///
/// Per eigenvalue λ this is `(1−λ) − Σ_k (1−λ)^k/(k(k−1))`, which tends to
/// `−λ ln λ`; a zero eigenvalue contributes exactly `1/d_p`.
pub fn shadow_entropy_functional(sigma: &Mat<c64>, d_p: usize) -> Result<f64> {
    if sigma.nrows() != sigma.ncols() {
        return Err(invalid("shadow matrix must be square"));
    }
    if d_p < 1 {
        return Err(invalid("d_p must be at least 1"));
    }
    let d = sigma.nrows();
    let x = Mat::<c64>::from_fn(d, d, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        c64::new(id, 0.0) - sigma[(i, j)]
    });
    let tr = |m: &Mat<c64>| (0..d).map(|i| m[(i, i)].re).sum::<f64>();
    let mut value = tr(&x);
    let mut pow = x.clone();
    for k in 2..=d_p {
        pow = &pow * &x;
        value -= tr(&pow) / (k as f64 * (k as f64 - 1.0));
    }
    Ok(value)
}

/// Inputs of the purity sample-count bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowCountSpec {
    pub epsilon: f64,
    pub delta: f64,
    /// Local energy bound `E_r`.
    pub energy: f64,
    /// `Σ⁽⁰⁾(M)`, supplied by the caller.
    pub sigma0: f64,
    /// Number of observables `L`.
    pub observables: usize,
    /// Region size `r`.
    pub region: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowCount {
    pub m: u64,
    pub n: f64,
}

/// `M = ⌈(4E_r/ε)²⌉` (unless `cap` is given) and
/// `N ≥ (M+1)^{2r}/(3ε²) (24Σ⁰² + 4(Σ⁰ + E_r)ε) ln(2L(M+1)^r/δ)`.
pub fn shadow_sample_count(spec: &ShadowCountSpec, cap: Option<u64>) -> Result<ShadowCount> {
    let ShadowCountSpec {
        epsilon,
        delta,
        energy,
        sigma0,
        observables,
        region,
    } = *spec;
    if !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameters("ε and δ must lie in (0, 1)".into()));
    }
    if !(energy >= 0.0) || !(sigma0 >= 0.0) || observables == 0 || region == 0 {
        return Err(Error::InvalidParameters("need E_r ≥ 0, Σ⁰ ≥ 0, L ≥ 1, r ≥ 1".into()));
    }
    let m = cap.unwrap_or_else(|| (4.0 * energy / epsilon).powi(2).ceil() as u64);
    let dim = (m as f64 + 1.0).powi(region as i32);
    let n = dim * dim / (3.0 * epsilon * epsilon)
        * (24.0 * sigma0 * sigma0 + 4.0 * (sigma0 + energy) * epsilon)
        * (2.0 * observables as f64 * dim / delta).ln();
    Ok(ShadowCount { m, n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::make_fock;

    #[test]
    fn vacuum_shadow_expectation_by_quadrature() {
        // E_x[ρ̂] over the exact vacuum distribution is |0⟩⟨0|
        let k = ShadowKernel::new(3).unwrap();
        let rule = gauss_legendre(120);
        let mut acc = Mat::<c64>::zeros(4, 4);
        for (t, w) in rule.0.iter().zip(&rule.1) {
            let x = 8.0 * t;
            let dens = (-x * x).exp() / PI.sqrt();
            for th in 0..16 {
                let theta = th as f64 * TAU / 16.0;
                let m = k.matrix(&ShadowSample { theta, x });
                acc += &Mat::from_fn(4, 4, |i, j| m[(i, j)] * (8.0 * w * dens / 16.0));
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!((acc[(i, j)] - c64::new(want, 0.0)).norm() < 1e-9, "{i} {j} {:?}", acc[(i, j)]);
            }
        }
    }

    #[test]
    fn single_shot_is_hermitian() {
        let m = shadow_matrix(&ShadowSample { theta: 1.1, x: -0.7 }, 5).unwrap().matrix;
        assert!((&m - m.adjoint()).norm_max() < 1e-15);
        assert!(shadow_matrix(&ShadowSample { theta: 0.0, x: 0.0 }, 21).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        let rho = make_fock(1, 4).unwrap().to_density();
        let a = sample_shadows(&rho, 5000, 9).unwrap();
        assert_eq!(a, sample_shadows(&rho, 5000, 9).unwrap());
    }

    #[test]
    fn entropy_functional() {
        let one = Mat::<c64>::from_fn(1, 1, |_, _| c64::new(1.0, 0.0));
        assert!(shadow_entropy_functional(&one, 20).unwrap().abs() < 1e-15);
        // zero eigenvalues leave exactly 1/d_p each
        let vac = Mat::<c64>::from_fn(5, 5, |i, j| c64::new((i == 0 && j == 0) as u8 as f64, 0.0));
        assert!((shadow_entropy_functional(&vac, 20).unwrap() - 4.0 / 20.0).abs() < 1e-12);
        let p = [0.5, 0.3, 0.2];
        let diag = Mat::<c64>::from_fn(3, 3, |i, j| c64::new(if i == j { p[i] } else { 0.0 }, 0.0));
        let s: f64 = -p.iter().map(|x| x * x.ln()).sum::<f64>();
        assert!((shadow_entropy_functional(&diag, 200).unwrap() - s).abs() < 1e-4);
    }

    #[test]
    fn sample_count() {
        let spec = ShadowCountSpec {
            epsilon: 0.5,
            delta: 0.1,
            energy: 1.0,
            sigma0: 1.0,
            observables: 1,
            region: 1,
        };
        let c = shadow_sample_count(&spec, None).unwrap();
        assert_eq!(c.m, 64);
        let hand = 65.0f64.powi(2) / 0.75 * (24.0 + 4.0 * 2.0 * 0.5) * (2.0 * 65.0 / 0.1f64).ln();
        assert!((c.n - hand).abs() < 1e-9 * hand);
        let tighter = shadow_sample_count(&ShadowCountSpec { delta: 0.01, ..spec }, None).unwrap();
        assert!(tighter.n > c.n);
    }
}
