//! Special functions: factorials, Laguerre polynomials, Hermite functions
//! and the Airy function of the first kind.

mod airy;

pub use airy::airy_ai;
pub(crate) use airy::{airy_ai_scaled, airy_ai_zero, airy_pair};

use std::sync::OnceLock;

const LN_FACT_TABLE: usize = 4096;

fn ln_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACT_TABLE];
        for n in 1..LN_FACT_TABLE {
            t[n] = t[n - 1] + (n as f64).ln();
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < LN_FACT_TABLE {
        return ln_fact_table()[n];
    }
    // Stirling series; far beyond any cutoff used in practice.
    let x = n as f64 + 1.0;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

/// Binomial coefficient as a float, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    (ln_factorial(n as usize) - ln_factorial(k as usize) - ln_factorial((n - k) as usize))
        .exp()
        .round()
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` by three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite functions `φ_0(x) … φ_nmax(x)` for the convention
/// `[q, p] = i` (vacuum position density `e^{-x²}/√π`).
pub fn hermite_functions(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    out[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if nmax >= 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for n in 1..nmax {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * x * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
    out
}
