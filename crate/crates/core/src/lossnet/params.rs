use std::path::Path;

use crate::error::{Error, Result};

/// Hardware constants for the loss model. Quantities ending in `_db` are in
/// decibels; everything else is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct LossParameters {
    /// SPDC pair generation rate (pairs/s).
    pub n: f64,
    /// Free-space to fiber coupling efficiency.
    pub eta_coup: f64,
    /// Bell-state measurement success probability.
    pub p_bsm: f64,
    pub l_demux_db: f64,
    pub l_wss_db: f64,
    pub l_sw_db: f64,
    pub alpha_db_per_km: f64,
    /// Per-DEMUX losses seen by the EDSS sources. `None` means three DEMUXes
    /// (one per photon `a`, `b`, `c`) each at `l_demux_db`.
    pub demux_losses_db: Option<Vec<f64>>,
}

impl Default for LossParameters {
    fn default() -> Self {
        LossParameters {
            n: 2.87e7,
            eta_coup: 0.85,
            p_bsm: 0.5,
            l_demux_db: 3.0,
            l_wss_db: 3.5,
            l_sw_db: 1.0,
            alpha_db_per_km: 0.17,
            demux_losses_db: None,
        }
    }
}

pub const PARAMETER_KEYS: [&str; 8] = [
    "n",
    "eta_coup",
    "p_bsm",
    "l_demux_db",
    "l_wss_db",
    "l_sw_db",
    "alpha_db_per_km",
    "demux_losses_db",
];

impl LossParameters {
    /// DEMUX losses used by the EDSS rate, in dB.
    pub fn edss_demux_losses_db(&self) -> Vec<f64> {
        self.demux_losses_db
            .clone()
            .unwrap_or_else(|| vec![self.l_demux_db; 3])
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("n", self.n),
            ("l_demux_db", self.l_demux_db),
            ("l_wss_db", self.l_wss_db),
            ("l_sw_db", self.l_sw_db),
            ("alpha_db_per_km", self.alpha_db_per_km),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::OutOfRange {
                    name: static_name(name),
                    value: v,
                    range: "[0, inf)",
                });
            }
        }
        if !(self.eta_coup > 0.0 && self.eta_coup <= 1.0) {
            return Err(Error::OutOfRange {
                name: "eta_coup",
                value: self.eta_coup,
                range: "(0, 1]",
            });
        }
        if !(0.0..=1.0).contains(&self.p_bsm) {
            return Err(Error::OutOfRange {
                name: "p_bsm",
                value: self.p_bsm,
                range: "[0, 1]",
            });
        }
        if let Some(list) = &self.demux_losses_db {
            if list.is_empty() {
                return Err(Error::InvalidExperiment("demux_losses_db is empty".into()));
            }
            if let Some(bad) = list.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
                return Err(Error::OutOfRange {
                    name: "demux_losses_db",
                    value: *bad,
                    range: "[0, inf)",
                });
            }
        }
        Ok(())
    }

    /// Applies `key = value` overrides on top of `self`. Blank lines and `#`
    /// comments are ignored; `demux_losses_db` takes a comma-separated list.
    pub fn with_overrides(&self, text: &str, source_name: &str) -> Result<Self> {
        let mut out = self.clone();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                source_name: source_name.to_string(),
                line: idx + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            let number = |v: &str| -> Result<f64> {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| err(format!("invalid number `{v}` for `{key}`")))
            };
            match key.as_str() {
                "n" => out.n = number(value)?,
                "eta_coup" => out.eta_coup = number(value)?,
                "p_bsm" => out.p_bsm = number(value)?,
                "l_demux_db" => out.l_demux_db = number(value)?,
                "l_wss_db" => out.l_wss_db = number(value)?,
                "l_sw_db" => out.l_sw_db = number(value)?,
                "alpha_db_per_km" => out.alpha_db_per_km = number(value)?,
                "demux_losses_db" => {
                    let list = value.split(',').map(number).collect::<Result<Vec<_>>>()?;
                    out.demux_losses_db = Some(list);
                }
                other => {
                    return Err(err(format!(
                        "unknown parameter `{other}` (expected one of {})",
                        PARAMETER_KEYS.join(", ")
                    )))
                }
            }
        }
        out.validate()?;
        Ok(out)
    }

    /// Defaults with overrides read from a file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::default().with_overrides(&text, &path.display().to_string())
    }
}

fn static_name(name: &str) -> &'static str {
    PARAMETER_KEYS
        .iter()
        .copied()
        .find(|k| *k == name)
        .unwrap_or("parameter")
}
