//! Airy function `Ai` on the real line.
//!
//! Three regimes:
//! * `|x| ≤ 12`: Taylor expansion around the nearest node of a table of
//!   `(Ai, Ai')` values. The table is seeded with the Maclaurin values at 0
//!   and propagated through the Airy equation `y'' = x y`; the positive
//!   half is propagated downward from the asymptotic value at `x = 12`,
//!   which keeps the recessive solution stable.
//! * `|x| > 12`: the standard asymptotic expansions in `ζ = (2/3)|x|^{3/2}`.
//!
//! A straight Maclaurin/asymptotic split at `|x| = 6` cannot reach 1e-10
//! relative accuracy on the positive axis (series cancellation on one side,
//! asymptotic truncation error ~e^{-2ζ} on the other); the node table
//! closes that gap.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Ai(0) = 3^{-2/3} / Γ(2/3)
pub(crate) const AI0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = -3^{-1/3} / Γ(1/3)
pub(crate) const AIP0: f64 = -0.258_819_403_792_806_8;

const TABLE_EDGE: f64 = 12.0;
const NODE_STEP: f64 = 0.25;

struct NodeTable {
    /// node i sits at x = -TABLE_EDGE + i * NODE_STEP
    values: Vec<(f64, f64)>,
}

fn node_x(i: usize) -> f64 {
    -TABLE_EDGE + i as f64 * NODE_STEP
}

/// Evaluates `(y, y')` at `x0 + h` from `(y, y')` at `x0` for `y'' = x y`.
fn taylor_step(x0: f64, y0: f64, d0: f64, h: f64) -> (f64, f64) {
    // c_{k+2} = (x0 c_k + c_{k-1}) / ((k+2)(k+1))
    let mut c_km1 = 0.0;
    let mut c_k = y0;
    let mut c_k1 = d0;
    let mut y = y0 + d0 * h;
    let mut dy = d0;
    let mut hk = h; // h^{k+1} for the term c_{k+1}
    let scale = y0.abs() + (d0 * h).abs();
    let mut k = 0usize;
    let mut small = 0;
    while k < 120 {
        let c_k2 = (x0 * c_k + c_km1) / (((k + 2) * (k + 1)) as f64);
        let term_d = (k + 2) as f64 * c_k2 * hk;
        hk *= h;
        let term = c_k2 * hk;
        y += term;
        dy += term_d;
        if term.abs() <= 1e-18 * scale && term_d.abs() <= 1e-18 * (dy.abs() + scale) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        c_km1 = c_k;
        c_k = c_k1;
        c_k1 = c_k2;
        k += 1;
    }
    (y, dy)
}

fn table() -> &'static NodeTable {
    static TABLE: OnceLock<NodeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = (2.0 * TABLE_EDGE / NODE_STEP).round() as usize + 1;
        let zero = count / 2;
        let mut values = vec![(0.0, 0.0); count];
        values[zero] = (AI0, AIP0);
        // negative half: oscillatory, forward propagation from 0 is stable
        for i in (0..zero).rev() {
            let (y, d) = values[i + 1];
            values[i] = taylor_step(node_x(i + 1), y, d, -NODE_STEP);
        }
        // positive half: propagate the recessive solution downward
        values[count - 1] = asymptotic_positive(TABLE_EDGE);
        for i in (zero + 1..count - 1).rev() {
            let (y, d) = values[i + 1];
            values[i] = taylor_step(node_x(i + 1), y, d, -NODE_STEP);
        }
        NodeTable { values }
    })
}

fn asymptotic_coefficients() -> &'static [(f64, f64)] {
    static COEFFS: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = Vec::with_capacity(40);
        let mut u = 1.0;
        out.push((1.0, 1.0));
        for k in 1..40 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0));
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sums `Σ_k sign_k c_k ζ^{-k}` over the selected indices until the terms
/// stop decreasing.
fn asymptotic_sum(zeta: f64, pick: impl Fn(usize) -> Option<(usize, f64)>, use_v: bool) -> f64 {
    let coeffs = asymptotic_coefficients();
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for j in 0.. {
        let Some((k, sign)) = pick(j) else { break };
        if k >= coeffs.len() {
            break;
        }
        let c = if use_v { coeffs[k].1 } else { coeffs[k].0 };
        let term = sign * c * zeta.powi(-(k as i32));
        if term.abs() >= last {
            break;
        }
        sum += term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Returns `(e^{ζ} Ai(x), e^{ζ} Ai'(x))` for large positive `x`.
fn asymptotic_positive_scaled(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let alt = |j: usize| Some((j, if j % 2 == 0 { 1.0 } else { -1.0 }));
    let su = asymptotic_sum(zeta, alt, false);
    let sv = asymptotic_sum(zeta, alt, true);
    let q = x.powf(0.25);
    let pref = 1.0 / (2.0 * PI.sqrt());
    (pref / q * su, -pref * q * sv)
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (a, d) = asymptotic_positive_scaled(x);
    let e = (-zeta).exp();
    (a * e, d * e)
}

/// `(Ai(-t), Ai'(-t))` for large positive `t`.
fn asymptotic_negative(t: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
    let even = |j: usize| Some((2 * j, sign(j)));
    let odd = |j: usize| Some((2 * j + 1, sign(j)));
    let ue = asymptotic_sum(zeta, even, false);
    let uo = asymptotic_sum(zeta, odd, false);
    let ve = asymptotic_sum(zeta, even, true);
    let vo = asymptotic_sum(zeta, odd, true);
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let q = t.powf(0.25);
    let rp = 1.0 / PI.sqrt();
    let ai = rp / q * (c * ue + s * uo);
    let aip = rp * q * (s * ve - c * vo);
    (ai, aip)
}

/// `(Ai(x), Ai'(x))` for any finite `x`.
pub(crate) fn airy_pair(x: f64) -> (f64, f64) {
    if x > TABLE_EDGE {
        asymptotic_positive(x)
    } else if x < -TABLE_EDGE {
        asymptotic_negative(-x)
    } else {
        let t = table();
        let i = ((x + TABLE_EDGE) / NODE_STEP).round() as usize;
        let i = i.min(t.values.len() - 1);
        let x0 = node_x(i);
        let (y0, d0) = t.values[i];
        taylor_step(x0, y0, d0, x - x0)
    }
}

/// `e^{(2/3) x^{3/2}} Ai(x)` for `x ≥ 0`; finite for arbitrarily large `x`.
pub(crate) fn airy_ai_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x > TABLE_EDGE {
        asymptotic_positive_scaled(x).0
    } else {
        airy_pair(x).0 * (2.0 / 3.0 * x.powf(1.5)).exp()
    }
}

/// Airy function of the first kind for `|x| ≤ 200`.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 200.0 {
        return Err(Error::InvalidArgument(format!(
            "airy_ai argument {x} outside [-200, 200]"
        )));
    }
    Ok(airy_pair(x).0)
}

/// k-th zero (k ≥ 1) of Ai on the negative axis.
pub(crate) fn airy_ai_zero(k: usize) -> f64 {
    debug_assert!(k >= 1);
    let t = 3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    let mut x = -t.powf(2.0 / 3.0)
        * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2 + 77125.0 / 82944.0 * t2 * t2 * t2);
    for _ in 0..4 {
        let (a, d) = airy_pair(x);
        let step = a / d;
        x -= step;
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}
