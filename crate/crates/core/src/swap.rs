//! Destructive SWAP test with photon-number-resolving detectors: the
//! beam splitter maps the SWAP operator to the parity `(−1)^{n_A}` of the
//! first output mode, so `E[(−1)^{n_A}] = Tr[ρσ]`. A detector cap `M`
//! discards shots with `n_A + n_B > 2M`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{block_unitary, reduced_pure, DensityOperator, Keep, PureState};
use crate::linalg;
use crate::measures::beam_splitter_output;
use crate::rng::{chunks, stream};

/// Floor applied to a purity estimate before taking its logarithm.
pub const PURITY_FLOOR: f64 = 1e-6;

/// Joint photon-count distribution `p(n, m)` at the two output ports.
#[derive(Debug, Clone)]
pub struct PnrDistribution {
    /// Largest count per port (twice the input cutoff).
    max_count: usize,
    probs: Vec<f64>,
}

impl PnrDistribution {
    pub fn max_count(&self) -> usize {
        self.max_count
    }

    pub fn prob(&self, n: usize, m: usize) -> f64 {
        if n > self.max_count || m > self.max_count {
            return 0.0;
        }
        self.probs[n * (self.max_count + 1) + m]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Nonzero entries as `(n, m, p)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let w = self.max_count + 1;
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(move |(i, p)| (i / w, i % w, *p))
    }
}

fn diag_weights(rho: &DensityOperator) -> Vec<f64> {
    (0..=rho.cutoff()).map(|k| rho.matrix()[(k, k)].re.max(0.0)).collect()
}

/// `p(n,m) = ⟨n,m|U_BS(ρ⊗σ)U_BS†|n,m⟩`, computed block by block in the
/// total photon number.
pub fn joint_pnr_distribution(rho: &DensityOperator, sigma: &DensityOperator) -> Result<PnrDistribution> {
    if rho.modes() != 1 || sigma.modes() != 1 {
        return Err(invalid("SWAP test takes two single-mode states"));
    }
    if rho.cutoff() != sigma.cutoff() {
        return Err(Error::DimensionMismatch {
            expected: rho.cutoff(),
            actual: sigma.cutoff(),
        });
    }
    let c = rho.cutoff();
    let (r, s) = (rho.matrix(), sigma.matrix());
    let w = 2 * c + 1;
    let rows: Vec<Vec<(usize, f64)>> = (0..=2 * c)
        .into_par_iter()
        .map(|n| {
            let u = block_unitary(n);
            let d = n + 1;
            let ks: Vec<usize> = (n.saturating_sub(c)..=n.min(c)).collect();
            // block of ρ⊗σ on |k, n−k⟩
            let blk: Vec<Vec<faer::c64>> = ks
                .iter()
                .map(|&k| ks.iter().map(|&l| r[(k, l)] * s[(n - k, n - l)]).collect())
                .collect();
            (0..=n)
                .map(|kout| {
                    let mut acc = 0.0;
                    for (i, &k) in ks.iter().enumerate() {
                        let uk = u[kout * d + k];
                        if uk == 0.0 {
                            continue;
                        }
                        let mut inner = faer::c64::new(0.0, 0.0);
                        for (j, &l) in ks.iter().enumerate() {
                            inner += blk[i][j] * u[kout * d + l];
                        }
                        acc += uk * inner.re;
                    }
                    (kout, acc.max(0.0))
                })
                .collect()
        })
        .collect();
    let mut probs = vec![0.0; w * w];
    for (n, row) in rows.into_iter().enumerate() {
        for (kout, p) in row {
            probs[kout * w + (n - kout)] = p;
        }
    }
    Ok(PnrDistribution { max_count: 2 * c, probs })
}

/// Detector outcome `(n_A, n_B)`.
pub type Outcome = (u32, u32);

/// Draws `shots` outcomes; chunk `k` uses the stream keyed by `(seed, k)`.
pub fn sample_outcomes(dist: &PnrDistribution, shots: usize, seed: u64) -> Vec<Outcome> {
    let support: Vec<(usize, usize, f64)> = dist.support().collect();
    let mut cdf = Vec::with_capacity(support.len());
    let mut acc = 0.0;
    for &(_, _, p) in &support {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let parts: Vec<Vec<Outcome>> = chunks(shots)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(k, _, len)| {
            let mut rng = stream(seed, k);
            (0..len)
                .map(|_| {
                    let u: f64 = rng.random::<f64>() * total;
                    let i = cdf.partition_point(|&c| c <= u).min(support.len() - 1);
                    (support[i].0 as u32, support[i].1 as u32)
                })
                .collect()
        })
        .collect();
    parts.concat()
}

fn shot_value(o: Outcome, cap: usize) -> f64 {
    let (n, m) = (o.0 as usize, o.1 as usize);
    if n + m > 2 * cap {
        0.0
    } else if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `(1/S) Σ_s (−1)^{n_s} Θ(2M − n_s − m_s)` with `Θ(0) = 1`.
pub fn swap_estimator(outcomes: &[Outcome], cap: usize) -> Result<f64> {
    Ok(swap_estimator_with_stderr(outcomes, cap)?.0)
}

/// Estimator and its standard error (sample standard deviation / √S).
pub fn swap_estimator_with_stderr(outcomes: &[Outcome], cap: usize) -> Result<(f64, f64)> {
    if outcomes.is_empty() {
        return Err(invalid("no outcomes"));
    }
    let s = outcomes.len() as f64;
    let (sum, sum2) = outcomes.iter().fold((0.0, 0.0), |(a, b), &o| {
        let v = shot_value(o, cap);
        (a + v, b + v * v)
    });
    let mean = sum / s;
    let var = if outcomes.len() > 1 {
        ((sum2 - s * mean * mean) / (s - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok((mean, (var / s).sqrt()))
}

/// Exact expectation of the capped estimator: `Σ_{n+m≤2M} (−1)^n p(n,m)`.
pub fn truncated_swap_expectation(rho: &DensityOperator, sigma: &DensityOperator, cap: usize) -> Result<f64> {
    Ok(truncated_expectation_of(&joint_pnr_distribution(rho, sigma)?, cap))
}

pub fn truncated_expectation_of(dist: &PnrDistribution, cap: usize) -> f64 {
    dist.support()
        .filter(|(n, m, _)| n + m <= 2 * cap)
        .map(|(n, _, p)| if n % 2 == 0 { p } else { -p })
        .sum()
}

/// Cumulative photon-number weight `q_M = Σ_{n≤M} ρ_nn`.
pub fn photon_cdf(rho: &DensityOperator, cap: usize) -> f64 {
    diag_weights(rho).iter().take(cap + 1).sum()
}

/// `(1 − q_{2M}, 1 − q_M^ρ q_M^σ)`: weight of `ρ⊗σ` above `2M` total
/// photons, and the looser product form.
pub fn systematic_error_bound(rho: &DensityOperator, sigma: &DensityOperator, cap: usize) -> Result<(f64, f64)> {
    if rho.modes() != 1 || sigma.modes() != 1 {
        return Err(invalid("SWAP test takes two single-mode states"));
    }
    let (a, b) = (diag_weights(rho), diag_weights(sigma));
    let mut q2m = 0.0;
    for (k, pa) in a.iter().enumerate().take(2 * cap + 1) {
        q2m += pa * b.iter().take(2 * cap - k + 1).sum::<f64>();
    }
    let prod = photon_cdf(rho, cap) * photon_cdf(sigma, cap);
    Ok(((1.0 - q2m).max(0.0), (1.0 - prod).clamp(0.0, 1.0)))
}

/// Shots needed for standard deviation `δ` of a ±1-valued estimator.
pub fn samples_for_accuracy(delta: f64) -> Result<u64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(invalid("δ must be positive"));
    }
    Ok((1.0 / (delta * delta)).ceil() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub estimate: f64,
    pub shots: usize,
    pub detector_cap: usize,
    pub statistical_stderr: f64,
    /// `1 − q_M^ρ q_M^σ`.
    pub systematic_bound: f64,
    /// `1 − q_{2M}`.
    pub systematic_bound_joint: f64,
    pub truncated_expectation: f64,
    /// `Tr[ρσ]`.
    pub exact_overlap: f64,
    pub seed: u64,
}

/// Samples the capped SWAP test on `ρ ⊗ σ`.
pub fn simulate_swap_test(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    cap: usize,
    shots: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    if shots == 0 {
        return Err(invalid("shots must be positive"));
    }
    let dist = joint_pnr_distribution(rho, sigma)?;
    let outcomes = sample_outcomes(&dist, shots, seed);
    let (estimate, stderr) = swap_estimator_with_stderr(&outcomes, cap)?;
    let (joint, prod) = systematic_error_bound(rho, sigma, cap)?;
    Ok(EstimatorReport {
        estimate,
        shots,
        detector_cap: cap,
        statistical_stderr: stderr,
        systematic_bound: prod,
        systematic_bound_joint: joint,
        truncated_expectation: truncated_expectation_of(&dist, cap),
        exact_overlap: linalg::trace_product(rho.matrix(), sigma.matrix()).re,
        seed,
    })
}

/// Four-copy estimate of `N_{E_2}(ψ)`: two beam-splitter outputs, then a
/// SWAP test between their `A` marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    #[serde(flatten)]
    pub swap: EstimatorReport,
    /// Estimated purity of `ρ_A` clamped to `[1e-6, 1]`.
    pub purity: f64,
    /// `−log₂` of the clamped purity.
    pub e2_estimate: f64,
    /// Delta-method standard error of `e2_estimate`.
    pub e2_stderr: f64,
    /// `−log₂` of the capped expectation (infinite-shot limit).
    pub e2_truncated: f64,
    /// `−log₂ Tr[ρ_A²]`.
    pub e2_exact: f64,
    /// Raw estimate fell below the floor.
    pub unreliable: bool,
}

/// `ρ_A = Tr_B[U_BS |ψ,ψ⟩⟨ψ,ψ| U_BS†]`.
pub fn bs_marginal(psi: &PureState) -> Result<DensityOperator> {
    reduced_pure(&beam_splitter_output(psi)?, Keep::A)
}

pub fn simulate_nongauss_protocol(psi: &PureState, cap: usize, shots: usize, seed: u64) -> Result<ProtocolReport> {
    let rho_a = bs_marginal(psi)?;
    let swap = simulate_swap_test(&rho_a, &rho_a, cap, shots, seed)?;
    let raw = swap.estimate;
    let purity = raw.clamp(PURITY_FLOOR, 1.0);
    let e2 = -purity.log2();
    let e2_stderr = swap.statistical_stderr / (purity * std::f64::consts::LN_2);
    let e2_truncated = -swap.truncated_expectation.clamp(PURITY_FLOOR, 1.0).log2();
    let e2_exact = -swap.exact_overlap.log2();
    Ok(ProtocolReport {
        swap,
        purity,
        e2_estimate: e2,
        e2_stderr,
        e2_truncated,
        e2_exact,
        unreliable: raw < PURITY_FLOOR,
    })
}
