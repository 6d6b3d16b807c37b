use nongauss_core::cubic::{sample_lower_bound, wigner_negativity_x};
use nongauss_core::fock::{make_cubic_phase_displaced, make_fock, make_zero_n, mean_photon_number_pure, DEFAULT_CUTOFF};
use nongauss_core::measures::output_spectrum;
use nongauss_core::shadows::{sample_shadows, shadow_purity_with_error};
use nongauss_core::swap::{simulate_nongauss_protocol, simulate_swap_test};
use nongauss_core::{CubicPhaseParams, PureState};
use rayon::prelude::*;

use crate::grid::Grid;
use crate::output::{json, num, Csv};
use crate::state::{even_cat, StateSpec};
use crate::{BoundArgs, CliError, Family, MeasureArgs, NegativityArgs, ShadowArgs, SwapArgs};

type Out = Result<String, CliError>;

fn required<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag} (flag or config)")))
}

fn grid_or(g: Option<Grid>, default: &str) -> Grid {
    g.unwrap_or_else(|| default.parse().expect("valid default grid"))
}

fn parse_state(s: &str) -> Result<StateSpec, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn json_out<T: serde::Serialize>(v: &T) -> Out {
    json(v).map_err(|e| CliError::Usage(format!("serialization failed: {e}")))
}

pub fn measure(a: MeasureArgs) -> Out {
    let family = required(a.family, "family")?;
    let params = required(a.param, "param")?;
    let alphas = grid_or(a.alpha, "2");
    let cutoff = a.cutoff.unwrap_or(DEFAULT_CUTOFF);
    let squeeze = a.squeeze.unwrap_or(0.0);
    if let Some(&bad) = alphas.values().iter().find(|&&v| !(v > 0.0)) {
        return Err(CliError::Usage(format!("Rényi order {bad} must be positive")));
    }
    let counts = match family {
        Family::Fock | Family::ZeroN => Some(params.counts()?),
        Family::Cubic | Family::Cat => None,
    };
    let build = |i: usize| -> nongauss_core::Result<PureState> {
        let p = params.values()[i];
        match family {
            Family::Fock => make_fock(counts.as_ref().unwrap()[i], cutoff),
            Family::ZeroN => make_zero_n(counts.as_ref().unwrap()[i], cutoff),
            Family::Cubic => {
                let c = CubicPhaseParams::min_energy(p)?;
                make_cubic_phase_displaced(c.gamma, c.r, c.p_shift, cutoff)
            }
            Family::Cat => even_cat(p, squeeze, cutoff),
        }
    };
    let rows: Vec<(f64, Vec<f64>)> = (0..params.values().len())
        .into_par_iter()
        .map(|i| {
            let psi = build(i)?;
            let spec = output_spectrum(&psi)?;
            let values = alphas.values().iter().map(|&al| spec.renyi(al)).collect::<Result<_, _>>()?;
            Ok((mean_photon_number_pure(&psi), values))
        })
        .collect::<nongauss_core::Result<_>>()?;

    let mut csv = Csv::new(&["family", "param", "mean_photon", "alpha", "value"]);
    for (&p, (n, values)) in params.values().iter().zip(&rows) {
        for (&al, &v) in alphas.values().iter().zip(values) {
            csv.row(&[family.name().into(), num(p), num(*n), num(al), num(v)]);
        }
    }
    Ok(csv.finish())
}

pub fn swap_sim(a: SwapArgs) -> Out {
    let state = parse_state(&required(a.state, "state")?)?;
    let cap = a.m.unwrap_or(10);
    let shots = a.shots.unwrap_or(100_000);
    let seed = a.seed.unwrap_or(0);
    let cutoff = a.cutoff.unwrap_or(DEFAULT_CUTOFF);
    match a.with {
        Some(other) => {
            let other = parse_state(&other)?;
            let r = simulate_swap_test(&state.density(cutoff)?, &other.density(cutoff)?, cap, shots, seed)?;
            json_out(&r)
        }
        None => {
            let psi = state
                .pure(cutoff)
                .ok_or_else(|| CliError::Usage("the non-Gaussianity protocol needs a pure --state".into()))??;
            json_out(&simulate_nongauss_protocol(&psi, cap, shots, seed)?)
        }
    }
}

pub fn negativity(a: NegativityArgs) -> Out {
    let xs = grid_or(a.x, "0.01:100:41:log");
    let rows = xs
        .values()
        .par_iter()
        .map(|&x| wigner_negativity_x(x))
        .collect::<nongauss_core::Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["x", "W", "err"]);
    for (&x, w) in xs.values().iter().zip(&rows) {
        csv.row(&[num(x), num(w.value), num(w.error)]);
    }
    Ok(csv.finish())
}

pub fn bound(a: BoundArgs) -> Out {
    let xs = grid_or(a.x, "1:40:20:log");
    let eps = a.epsilon.unwrap_or(0.1);
    let delta = a.delta.unwrap_or(0.05);
    let rows = xs
        .values()
        .par_iter()
        .map(|&x| sample_lower_bound(eps, delta, x))
        .collect::<nongauss_core::Result<Vec<_>>>()?;
    let mut csv = Csv::new(&["x", "r_opt", "mean_photon", "dr", "N"]);
    for b in &rows {
        csv.row(&[num(b.x), num(b.r_opt), num(b.mean_photon), num(b.dr), num(b.samples)]);
    }
    Ok(csv.finish())
}

pub fn shadow(a: ShadowArgs) -> Out {
    let state = parse_state(&required(a.state, "state")?)?;
    let n = a.n.unwrap_or(100_000);
    let cap = a.m.unwrap_or(10);
    let seed = a.seed.unwrap_or(0);
    let rho = state.density(a.cutoff.unwrap_or(DEFAULT_CUTOFF))?;
    let samples = sample_shadows(&rho, n, seed)?;
    json_out(&shadow_purity_with_error(&samples, cap, seed)?)
}
