//! Single-mode state specifications such as `fock:1` or `coherent:1.2,-0.3`.

use std::str::FromStr;

use nongauss_core::fock::{make_cat, make_coherent, make_cubic_phase, make_fock, make_squeezed, make_zero_n};
use nongauss_core::gaussian::embed_gaussian_to_fock;
use nongauss_core::{c64, DensityOperator, GaussianState, PureState, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    ZeroN(usize),
    Coherent(c64),
    Squeezed(f64),
    /// Even cat `∝ S(s)(|α⟩ + |−α⟩)`.
    Cat { alpha: f64, s: f64 },
    Cubic { gamma: f64, r: f64 },
    Thermal(f64),
}

impl StateSpec {
    /// `None` for mixed states.
    pub fn pure(&self, cutoff: usize) -> Option<Result<PureState>> {
        Some(match *self {
            StateSpec::Fock(n) => make_fock(n, cutoff),
            StateSpec::ZeroN(n) => make_zero_n(n, cutoff),
            StateSpec::Coherent(a) => make_coherent(a, cutoff),
            StateSpec::Squeezed(s) => make_squeezed(s, cutoff),
            StateSpec::Cat { alpha, s } => even_cat(alpha, s, cutoff),
            StateSpec::Cubic { gamma, r } => make_cubic_phase(gamma, r, cutoff),
            StateSpec::Thermal(_) => return None,
        })
    }

    pub fn density(&self, cutoff: usize) -> Result<DensityOperator> {
        match *self {
            StateSpec::Thermal(nbar) => embed_gaussian_to_fock(&GaussianState::thermal(1, nbar)?, cutoff),
            _ => Ok(self.pure(cutoff).expect("pure spec")?.to_density()),
        }
    }
}

pub fn even_cat(alpha: f64, s: f64, cutoff: usize) -> Result<PureState> {
    let one = c64::new(1.0, 0.0);
    make_cat(&[one, one], &[c64::new(alpha, 0.0), c64::new(-alpha, 0.0)], s, cutoff)
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<f64> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| a.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| format!("state `{s}`: parameters must be finite numbers"))?
        };
        let count = |v: f64| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(format!("state `{s}`: photon number must be a nonnegative integer"))
            }
        };
        let arity = |lo: usize, hi: usize| {
            if (lo..=hi).contains(&nums.len()) {
                Ok(())
            } else {
                Err(format!("state `{s}`: `{kind}` takes {lo} to {hi} parameters"))
            }
        };
        match kind {
            "vacuum" => arity(0, 0).map(|_| StateSpec::Fock(0)),
            "fock" => arity(1, 1).and_then(|_| count(nums[0])).map(StateSpec::Fock),
            "zero-n" => arity(1, 1).and_then(|_| count(nums[0])).map(StateSpec::ZeroN),
            "coherent" => arity(1, 2).map(|_| StateSpec::Coherent(c64::new(nums[0], *nums.get(1).unwrap_or(&0.0)))),
            "squeezed" => arity(1, 1).map(|_| StateSpec::Squeezed(nums[0])),
            "cat" => arity(1, 2).map(|_| StateSpec::Cat {
                alpha: nums[0],
                s: *nums.get(1).unwrap_or(&0.0),
            }),
            "cubic" => arity(1, 2).map(|_| StateSpec::Cubic {
                gamma: nums[0],
                r: *nums.get(1).unwrap_or(&0.0),
            }),
            "thermal" => arity(1, 1).map(|_| StateSpec::Thermal(nums[0])),
            _ => Err(format!(
                "unknown state `{kind}` (expected vacuum, fock, zero-n, coherent, squeezed, cat, cubic or thermal)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!("fock:1".parse(), Ok(StateSpec::Fock(1)));
        assert_eq!("vacuum".parse(), Ok(StateSpec::Fock(0)));
        assert_eq!("coherent:1,-0.5".parse(), Ok(StateSpec::Coherent(c64::new(1.0, -0.5))));
        assert_eq!("cat:2".parse(), Ok(StateSpec::Cat { alpha: 2.0, s: 0.0 }));
        assert_eq!("cubic:0.1,0.2".parse(), Ok(StateSpec::Cubic { gamma: 0.1, r: 0.2 }));
        for bad in ["fock", "fock:1.5", "fock:1,2", "coherent:x", "laser:1", "thermal:"] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn construction() {
        assert!(StateSpec::Thermal(0.5).pure(20).is_none());
        let rho = StateSpec::Thermal(0.5).density(40).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        let cat = StateSpec::Cat { alpha: 1.5, s: 0.0 }.pure(30).unwrap().unwrap();
        assert!(cat.amplitude(1).norm() < 1e-14);
    }
}
