//! Depolarising fiber noise.
//!
//! A photon crossing a span of length `L` with inverse length-scale `Λ` is
//! depolarised with surviving weight `q = e^{-ΛL}`:
//!
//! ```text
//! K₁,₂,₃ = σ_{x,y,z} · √(1 - q) / 2      K₄ = I · √(1 + 3q) / 2
//! ```
//!
//! which is the same map as `ρ ↦ qρ + (1 - q) I/2`. Only fibers are noisy;
//! intermediate nodes contribute loss but no depolarisation.

use crate::error::{Error, Result};
use crate::photonics::gates;
use crate::qstate::KrausSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberSegment {
    length_km: f64,
    lambda_per_km: f64,
}

impl FiberSegment {
    pub fn new(length_km: f64, lambda_per_km: f64) -> Result<Self> {
        if !(length_km >= 0.0 && length_km.is_finite()) {
            return Err(Error::OutOfRange {
                name: "fiber length (km)",
                value: length_km,
                range: "[0, inf)",
            });
        }
        if !(lambda_per_km >= 0.0 && lambda_per_km.is_finite()) {
            return Err(Error::OutOfRange {
                name: "noise inverse length-scale (1/km)",
                value: lambda_per_km,
                range: "[0, inf)",
            });
        }
        Ok(FiberSegment {
            length_km,
            lambda_per_km,
        })
    }

    /// A unit-length span whose noise strength is the dimensionless `ΛL`.
    pub fn from_strength(lambda_l: f64) -> Result<Self> {
        Self::new(1.0, lambda_l)
    }

    pub fn length_km(&self) -> f64 {
        self.length_km
    }

    pub fn lambda_per_km(&self) -> f64 {
        self.lambda_per_km
    }

    /// `ΛL`.
    pub fn strength(&self) -> f64 {
        self.length_km * self.lambda_per_km
    }

    /// Surviving weight `q = e^{-ΛL}`.
    pub fn decay(&self) -> f64 {
        (-self.strength()).exp()
    }

    /// The segment covering the first `fraction` of this one.
    pub fn portion(&self, fraction: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::OutOfRange {
                name: "segment fraction",
                value: fraction,
                range: "[0, 1]",
            });
        }
        Self::new(self.length_km * fraction, self.lambda_per_km)
    }
}

/// Kraus operators `{K₁, K₂, K₃, K₄}` for one span.
pub fn depolarizing_kraus(seg: &FiberSegment) -> KrausSet {
    let q = seg.decay();
    let pauli_weight = (1.0 - q).max(0.0).sqrt() / 2.0;
    let id_weight = (1.0 + 3.0 * q).sqrt() / 2.0;
    let ops = vec![
        gates::pauli_x().scale(pauli_weight),
        gates::pauli_y().scale(pauli_weight),
        gates::pauli_z().scale(pauli_weight),
        gates::identity().scale(id_weight),
    ];
    KrausSet::new(ops).expect("depolarizing Kraus set is trace preserving")
}

/// Probability of the H outcome that heralds success in EDSS1.
pub fn p_meas_edss1(seg: &FiberSegment) -> f64 {
    0.5 - seg.decay() / 6.0
}

/// Probability of the A outcome that heralds success in EDSS2.
pub fn p_meas_edss2(seg: &FiberSegment) -> f64 {
    0.5 + seg.decay() / 8.0
}
