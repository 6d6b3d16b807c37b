//! 50:50 beam splitter `U = exp(θ(a b† − a† b))`, θ = π/4, applied block by
//! block: `U` conserves `n_a + n_b`, so on the block of total photon
//! number `N` (basis `|k, N−k⟩`, `k = 0..N`) it is the exponential of a real
//! antisymmetric tridiagonal matrix of size `N + 1`.
//!
//! Heisenberg action: `a → (a + b)/√2`, `b → (b − a)/√2`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use faer::{c64, Mat};

use super::state::{DensityOperator, Diagnostics, PureState};
use crate::error::{invalid, Result};
use crate::linalg::{self, ZERO};

/// Block unitary for total photon number `n`, as a dense real matrix
/// indexed by the photon number `k` in mode `a`.
pub fn block_unitary(n: usize) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(u) = cache.lock().unwrap().get(&n) {
        return u.clone();
    }
    let u = Arc::new(compute_block(n));
    cache.lock().unwrap().insert(n, u.clone());
    u
}

fn compute_block(n: usize) -> Vec<f64> {
    let d = n + 1;
    let theta = std::f64::consts::FRAC_PI_4;
    // (a b†)|k, n−k⟩ = √(k(n−k+1)) |k−1, n−k+1⟩
    let g = Mat::<c64>::from_fn(d, d, |i, j| {
        let (i, j) = (i as f64, j as f64);
        let nf = n as f64;
        if i + 1.0 == j {
            c64::new(theta * (j * (nf - j + 1.0)).sqrt(), 0.0)
        } else if j + 1.0 == i {
            c64::new(-theta * (i * (nf - i + 1.0)).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let u = linalg::expm(g.as_ref()).expect("finite generator");
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = u[(i, j)].re;
        }
    }
    out
}

/// Applies `U_BS` to a two-mode pure state. The output cutoff is twice the
/// effective input cutoff, so no amplitude is lost.
pub fn apply_beam_splitter(psi: &PureState) -> Result<PureState> {
    if psi.modes() != 2 {
        return Err(invalid("beam splitter needs a two-mode state"));
    }
    let ceff = psi.effective_cutoff(1e-30);
    let cout = (2 * ceff).max(1);
    let dout = cout + 1;
    let mut out = vec![ZERO; dout * dout];
    for n in 0..=2 * ceff {
        let u = block_unitary(n);
        let d = n + 1;
        let kmin = n.saturating_sub(ceff);
        let kmax = n.min(ceff);
        for kout in 0..=n {
            let mut acc = ZERO;
            for kin in kmin..=kmax {
                acc += psi.amplitude2(kin, n - kin) * u[kout * d + kin];
            }
            out[kout * dout + (n - kout)] = acc;
        }
    }
    let mut st = PureState::normalized(2, cout, out)?;
    st.diagnostics = psi.diagnostics;
    Ok(st)
}

/// `U_BS ρ U_BS†` keeping the input cutoff; trace lost to photon numbers
/// above the cutoff is added to the diagnostics.
pub fn apply_beam_splitter_density(rho: &DensityOperator) -> Result<DensityOperator> {
    apply_beam_splitter_density_with_cutoff(rho, rho.cutoff())
}

/// As [`apply_beam_splitter_density`] with an explicit output cutoff.
/// An output cutoff of twice the input cutoff is exact.
pub fn apply_beam_splitter_density_with_cutoff(
    rho: &DensityOperator,
    cout: usize,
) -> Result<DensityOperator> {
    if rho.modes() != 2 {
        return Err(invalid("beam splitter needs a two-mode operator"));
    }
    let cin = rho.cutoff();
    let din = cin + 1;
    let dout = cout + 1;
    let m = rho.matrix();
    // per-block index lists: (k_in list), (k_out list)
    let nmax = 2 * cin;
    let ins: Vec<Vec<usize>> = (0..=nmax)
        .map(|n| (n.saturating_sub(cin)..=n.min(cin)).collect())
        .collect();
    let outs: Vec<Vec<usize>> = (0..=nmax)
        .map(|n| (n.saturating_sub(cout)..=n.min(cout)).collect())
        .collect();
    let blocks: Vec<Arc<Vec<f64>>> = (0..=nmax).map(block_unitary).collect();

    let mut out = Mat::<c64>::zeros(dout * dout, dout * dout);
    for n1 in 0..=nmax {
        if outs[n1].is_empty() {
            continue;
        }
        let u1 = &blocks[n1];
        let d1 = n1 + 1;
        for n2 in 0..=nmax {
            if outs[n2].is_empty() {
                continue;
            }
            let u2 = &blocks[n2];
            let d2 = n2 + 1;
            // input block ρ_{n1,n2}
            let rin = Mat::<c64>::from_fn(ins[n1].len(), ins[n2].len(), |i, j| {
                let (k1, k2) = (ins[n1][i], ins[n2][j]);
                m[(k1 * din + n1 - k1, k2 * din + n2 - k2)]
            });
            if rin.norm_max() == 0.0 {
                continue;
            }
            let left = Mat::<c64>::from_fn(outs[n1].len(), ins[n1].len(), |i, j| {
                c64::new(u1[outs[n1][i] * d1 + ins[n1][j]], 0.0)
            });
            let right = Mat::<c64>::from_fn(ins[n2].len(), outs[n2].len(), |i, j| {
                c64::new(u2[outs[n2][j] * d2 + ins[n2][i]], 0.0)
            });
            let blk = &(&left * &rin) * &right;
            for (i, &k1) in outs[n1].iter().enumerate() {
                for (j, &k2) in outs[n2].iter().enumerate() {
                    out[(k1 * dout + n1 - k1, k2 * dout + n2 - k2)] = blk[(i, j)];
                }
            }
        }
    }
    let tr = linalg::trace(out.as_ref()).re;
    let mut res = DensityOperator::from_matrix_unchecked(2, cout, out)?;
    res.diagnostics = Diagnostics {
        leakage: rho.diagnostics.leakage + (rho.trace() - tr).max(0.0),
    };
    Ok(res)
}
