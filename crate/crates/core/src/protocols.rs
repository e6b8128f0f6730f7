//! End-to-end state pipelines for the three distribution protocols.
//!
//! * **DED**: node A prepares `|φ⁺⟩`, keeps photon `a` and sends `b` through
//!   the fiber.
//! * **EDSS1**: `a`, `b`, `c` start in a separable, classically correlated
//!   state; `CNOT(a→c)` encodes, the carrier `c` crosses the fiber,
//!   `CNOT(b→c)` decodes, and an H outcome on `c` heralds `|φ⁺⟩` on `ab`.
//! * **EDSS2**: `ab` start in a separable state with `c` uncorrelated;
//!   `CPHASE` encodes and decodes and an A outcome on `c` heralds success.
//!
//! Noise acts only on the photon in the fiber. Gate failures are not simulated
//! here; they enter the throughput through the loss model.

use std::fmt;
use std::str::FromStr;

use crate::correlations::{discord, DiscordConfig};
use crate::error::{Error, Result};
use crate::fiber::{depolarizing_kraus, FiberSegment};
use crate::photonics::{da_basis, gates, hv_basis, psi_k, BellState, Polarization};
use crate::qstate::linalg::{ket_projector, kron_kets};
use crate::qstate::{CMatrix, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProtocolId {
    Ded,
    Edss1,
    Edss2,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 3] = [ProtocolId::Ded, ProtocolId::Edss1, ProtocolId::Edss2];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::Ded => "DED",
            ProtocolId::Edss1 => "EDSS1",
            ProtocolId::Edss2 => "EDSS2",
        }
    }

    /// Probability of the heralding carrier outcome (1 for DED).
    pub fn p_meas(self, seg: &FiberSegment) -> f64 {
        match self {
            ProtocolId::Ded => 1.0,
            ProtocolId::Edss1 => crate::fiber::p_meas_edss1(seg),
            ProtocolId::Edss2 => crate::fiber::p_meas_edss2(seg),
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "DED" => Ok(ProtocolId::Ded),
            "EDSS1" => Ok(ProtocolId::Edss1),
            "EDSS2" => Ok(ProtocolId::Edss2),
            _ => Err(Error::InvalidExperiment(format!("unknown protocol `{s}`"))),
        }
    }
}

/// The post-selected two-qubit state a protocol leaves on nodes A and B.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub protocol: ProtocolId,
    /// State of `a` and `b` after post-selection.
    pub final_state: DensityMatrix,
    /// Probability of the heralding measurement outcome only; photon loss and
    /// gate failure are accounted for in [`crate::lossnet`].
    pub success_probability: f64,
    /// Noise strength `ΛL` seen by the travelling photon.
    pub lambda_l: f64,
}

fn density(m: CMatrix, labels: &[&str]) -> DensityMatrix {
    DensityMatrix::from_parts(m, labels.iter().map(|s| s.to_string()).collect())
}

fn product_projector(a: Polarization, b: Polarization) -> CMatrix {
    ket_projector(&kron_kets(&a.ket(), &b.ket()))
}

/// The EDSS1 resource state on `(a, b, c)`:
///
/// ```text
/// ρ = 1/6 (|HH⟩⟨HH| + |VV⟩⟨VV|)_ab ⊗ |V⟩⟨V|_c
///   + 1/6 Σ_{k=0..3} |Ψ_k⟩⟨Ψ_k|_a ⊗ |Ψ_{-k}⟩⟨Ψ_{-k}|_b ⊗ |H⟩⟨H|_c
/// ```
pub fn edss1_initial_state() -> DensityMatrix {
    use Polarization::{H, V};
    let classical = (product_projector(H, H) + product_projector(V, V)).kronecker(&V.projector());
    let mut twisted = CMatrix::zeros(4, 4);
    for k in 0..4 {
        twisted += ket_projector(&kron_kets(&psi_k(k), &psi_k(-k)));
    }
    let coherent = twisted.kronecker(&H.projector());
    density((classical + coherent).scale(1.0 / 6.0), &["a", "b", "c"])
}

/// The EDSS2 inputs: `ρ_ab` on `(a, b)` and the carrier `ρ_c` on `c`.
pub fn edss2_initial_states() -> (DensityMatrix, DensityMatrix) {
    use Polarization::*;
    let diag = (product_projector(H, H) + product_projector(V, V)).scale(0.25);
    let coherent = (product_projector(D, D)
        + product_projector(A, A)
        + product_projector(R, L)
        + product_projector(L, R))
    .scale(0.125);
    let rho_ab = density(diag + coherent, &["a", "b"]);
    let rho_c = density(
        (D.projector() + A.projector().scale(3.0)).scale(0.25),
        &["c"],
    );
    (rho_ab, rho_c)
}

/// Where along an EDSS pipeline a snapshot was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Prepared,
    Encoded,
    MidFiber,
    BeforeDecode,
}

fn transmit(state: &DensityMatrix, seg: &FiberSegment, photon: &str) -> Result<DensityMatrix> {
    state.apply_channel(&depolarizing_kraus(seg), &[photon])
}

struct EdssPlan {
    prepared: DensityMatrix,
    gate: CMatrix,
    basis: [CMatrix; 2],
    herald: usize,
}

fn plan(protocol: ProtocolId) -> Result<EdssPlan> {
    match protocol {
        ProtocolId::Edss1 => Ok(EdssPlan {
            prepared: edss1_initial_state(),
            gate: gates::cnot(),
            basis: hv_basis(),
            herald: 0,
        }),
        ProtocolId::Edss2 => {
            let (ab, c) = edss2_initial_states();
            Ok(EdssPlan {
                prepared: ab.tensor(&c)?,
                gate: gates::cphase(),
                basis: da_basis(),
                herald: 1,
            })
        }
        ProtocolId::Ded => Err(Error::InvalidExperiment("DED has no carrier photon".into())),
    }
}

/// Snapshots of the three-qubit state at each stage of an EDSS pipeline.
pub fn carrier_checkpoints(
    protocol: ProtocolId,
    seg: &FiberSegment,
) -> Result<Vec<(Stage, DensityMatrix)>> {
    let p = plan(protocol)?;
    let encoded = p.prepared.apply_unitary(&p.gate, &["a", "c"])?;
    let mid = transmit(&encoded, &seg.portion(0.5)?, "c")?;
    let arrived = transmit(&encoded, seg, "c")?;
    Ok(vec![
        (Stage::Prepared, p.prepared),
        (Stage::Encoded, encoded),
        (Stage::MidFiber, mid),
        (Stage::BeforeDecode, arrived),
    ])
}

/// Runs an EDSS pipeline and returns the `ab` state and probability for the
/// carrier outcome `outcome` (index into the protocol's measurement basis).
fn edss_branch(
    protocol: ProtocolId,
    seg: &FiberSegment,
    outcome: usize,
) -> Result<(DensityMatrix, f64)> {
    let p = plan(protocol)?;
    let encoded = p.prepared.apply_unitary(&p.gate, &["a", "c"])?;
    let arrived = transmit(&encoded, seg, "c")?;
    let decoded = arrived.apply_unitary(&p.gate, &["b", "c"])?;
    let branch = decoded
        .measure(&p.basis, &["c"])?
        .into_iter()
        .nth(outcome)
        .ok_or_else(|| Error::InvalidExperiment(format!("no outcome {outcome}")))?;
    let post = branch
        .post_state
        .ok_or(Error::DegenerateRound(branch.probability))?;
    Ok((post.partial_trace(&["a", "b"])?, branch.probability))
}

/// EDSS1 state on `ab` conditioned on finding the carrier in `outcome`
/// (H or V).
pub fn edss1_branch(seg: &FiberSegment, outcome: Polarization) -> Result<(DensityMatrix, f64)> {
    let idx = match outcome {
        Polarization::H => 0,
        Polarization::V => 1,
        other => {
            return Err(Error::InvalidExperiment(format!(
                "EDSS1 measures the carrier in H/V, not {other:?}"
            )))
        }
    };
    edss_branch(ProtocolId::Edss1, seg, idx)
}

pub fn run_ded(seg: &FiberSegment) -> ProtocolOutcome {
    let pair = BellState::PhiPlus.state("a", "b");
    let final_state = transmit(&pair, seg, "b").expect("labels are fixed");
    ProtocolOutcome {
        protocol: ProtocolId::Ded,
        final_state,
        success_probability: 1.0,
        lambda_l: seg.strength(),
    }
}

fn run_edss(protocol: ProtocolId, seg: &FiberSegment) -> ProtocolOutcome {
    let herald = plan(protocol).expect("EDSS protocol").herald;
    let (final_state, success_probability) =
        edss_branch(protocol, seg, herald).expect("heralding outcome has nonzero probability");
    ProtocolOutcome {
        protocol,
        final_state,
        success_probability,
        lambda_l: seg.strength(),
    }
}

pub fn run_edss1(seg: &FiberSegment) -> ProtocolOutcome {
    run_edss(ProtocolId::Edss1, seg)
}

pub fn run_edss2(seg: &FiberSegment) -> ProtocolOutcome {
    run_edss(ProtocolId::Edss2, seg)
}

pub fn run(protocol: ProtocolId, seg: &FiberSegment) -> ProtocolOutcome {
    match protocol {
        ProtocolId::Ded => run_ded(seg),
        other => run_edss(other, seg),
    }
}

/// The EDSS1 state right after the encoding CNOT, before any noise.
pub fn edss1_encoded_state() -> DensityMatrix {
    edss1_initial_state()
        .apply_unitary(&gates::cnot(), &["a", "c"])
        .expect("labels are fixed")
}

/// Discord `D_{ab|c}` of a three-qubit snapshot, measuring the carrier `c`.
pub fn carrier_discord_checkpoint(state: &DensityMatrix, cfg: &DiscordConfig) -> Result<f64> {
    discord(state, "c", cfg)
}
