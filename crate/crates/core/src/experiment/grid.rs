use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lossnet::NetworkTopology;

/// Evenly spaced values `start, …, stop` (inclusive), written
/// `start:stop:steps`. A single number is a one-point grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    values: Vec<f64>,
}

impl LambdaGrid {
    pub fn linspace(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidExperiment(
                "grid needs at least one point".into(),
            ));
        }
        if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start {
            return Err(Error::InvalidExperiment(format!(
                "grid bounds must satisfy 0 <= start <= stop (got {start}:{stop})"
            )));
        }
        let values = if steps == 1 {
            vec![start]
        } else {
            let h = (stop - start) / (steps - 1) as f64;
            (0..steps)
                .map(|i| {
                    if i + 1 == steps {
                        stop
                    } else {
                        start + h * i as f64
                    }
                })
                .collect()
        };
        Ok(LambdaGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl FromStr for LambdaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::InvalidExperiment(format!(
                "expected `start:stop:steps` or a number, got `{s}`"
            ))
        };
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        match parts.as_slice() {
            [x] => {
                let x: f64 = x.parse().map_err(|_| bad())?;
                Self::linspace(x, x, 1)
            }
            [a, b, n] => Self::linspace(
                a.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
                n.parse().map_err(|_| bad())?,
            ),
            _ => Err(bad()),
        }
    }
}

/// Which node pairs an experiment covers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PairFilter {
    /// Every unordered pair of the topology.
    #[default]
    All,
    Pairs(Vec<(String, String)>),
}

impl PairFilter {
    /// Resolves the filter against `topo`, checking node names.
    pub fn resolve(&self, topo: &NetworkTopology) -> Result<Vec<(String, String)>> {
        match self {
            PairFilter::All => Ok(topo.all_pairs()),
            PairFilter::Pairs(list) => {
                for (a, b) in list {
                    for n in [a, b] {
                        if !topo.contains(n) {
                            return Err(Error::UnknownNode(n.clone()));
                        }
                    }
                }
                Ok(list.clone())
            }
        }
    }
}

impl FromStr for PairFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.eq_ignore_ascii_case("all") {
            return Ok(PairFilter::All);
        }
        let pairs = s
            .split(',')
            .map(|p| {
                p.trim()
                    .split_once('-')
                    .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| Error::InvalidExperiment(format!("expected `A-B`, got `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PairFilter::Pairs(pairs))
    }
}
