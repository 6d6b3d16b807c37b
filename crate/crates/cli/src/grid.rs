//! Parameter grids: `a..b` (inclusive integers), `start:stop:count[:log]`,
//! comma lists, or a single number.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid(Vec<f64>);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid grid `{input}`: {reason}")]
pub struct GridError {
    input: String,
    reason: String,
}

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// The grid as photon numbers; every entry must be a nonnegative integer.
    pub fn counts(&self) -> Result<Vec<usize>, GridError> {
        self.0
            .iter()
            .map(|&v| {
                if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                    Ok(v as usize)
                } else {
                    Err(GridError {
                        input: self.to_string(),
                        reason: format!("{v} is not a nonnegative integer"),
                    })
                }
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn number(s: &str, input: &str) -> Result<f64, GridError> {
    let v: f64 = s.trim().parse().map_err(|_| GridError {
        input: input.into(),
        reason: format!("`{s}` is not a number"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GridError {
            input: input.into(),
            reason: format!("`{s}` is not finite"),
        })
    }
}

impl FromStr for Grid {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GridError {
            input: s.into(),
            reason: reason.into(),
        };
        let s = s.trim();
        if let Some((a, b)) = s.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| err("range bounds must be integers"))?;
            let b: i64 = b.trim().parse().map_err(|_| err("range bounds must be integers"))?;
            if a > b {
                return Err(err("range start exceeds its end"));
            }
            return Ok(Grid((a..=b).map(|k| k as f64).collect()));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let log = match parts.as_slice() {
                [_, _, _] => false,
                [_, _, _, "log"] => true,
                _ => return Err(err("expected start:stop:count or start:stop:count:log")),
            };
            let start = number(parts[0], s)?;
            let stop = number(parts[1], s)?;
            let count: usize = parts[2].trim().parse().map_err(|_| err("count must be a positive integer"))?;
            if count == 0 {
                return Err(err("count must be a positive integer"));
            }
            if log && !(start > 0.0 && stop > 0.0) {
                return Err(err("log grids need positive endpoints"));
            }
            if count == 1 {
                return Ok(Grid(vec![start]));
            }
            let step = |i: usize| i as f64 / (count - 1) as f64;
            let mut v: Vec<f64> = (0..count)
                .map(|i| {
                    if log {
                        (start.ln() + step(i) * (stop.ln() - start.ln())).exp()
                    } else {
                        start + step(i) * (stop - start)
                    }
                })
                .collect();
            v[0] = start;
            v[count - 1] = stop;
            return Ok(Grid(v));
        }
        let v = s.split(',').map(|p| number(p, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(Grid(v))
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            One(f64),
            Many(Vec<f64>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::One(v) => Ok(Grid(vec![v])),
            Raw::Many(v) if !v.is_empty() => Ok(Grid(v)),
            Raw::Many(_) => Err(serde::de::Error::custom("empty grid")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Vec<f64> {
        s.parse::<Grid>().unwrap().0
    }

    #[test]
    fn syntaxes() {
        assert_eq!(g("1..6"), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(g("3..3"), vec![3.0]);
        assert_eq!(g("0:1:5"), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g("1e-3"), vec![1e-3]);
        assert_eq!(g("0.5, 1,2"), vec![0.5, 1.0, 2.0]);
        let l = g("1:100:3:log");
        assert_eq!((l[0], l[2]), (1.0, 100.0));
        assert!((l[1] - 10.0).abs() < 1e-12);
        assert_eq!(g("-1:1:1"), vec![-1.0]);
    }

    #[test]
    fn rejects() {
        for bad in ["", "6..1", "1.5..3", "0:1:0", "0:1:2:lin", "0:1:3:log", "a", "1,,2", "inf"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
        assert!(g("0..2").len() == 3 && "0.5".parse::<Grid>().unwrap().counts().is_err());
    }

    #[test]
    fn from_json() {
        let a: Grid = serde_json::from_str("\"1..3\"").unwrap();
        let b: Grid = serde_json::from_str("2").unwrap();
        let c: Grid = serde_json::from_str("[1, 2.5]").unwrap();
        assert_eq!((a.0.len(), b.0, c.0), (3, vec![2.0], vec![1.0, 2.5]));
        assert!(serde_json::from_str::<Grid>("[]").is_err());
    }
}
