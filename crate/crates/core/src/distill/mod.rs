//! Recurrence distillation: DEJMPS, BBPSSW (original and improved), MFI,
//! the CNOT-based protocol and the single-shot EPL-D filter.
//!
//! Every round is simulated on the full 16×16 two-copy density matrix (see
//! [`rounds`]). [`distill_to_threshold`] iterates a protocol until the pair
//! reaches the target fidelity with `|φ⁺⟩`, and the yield counts surviving
//! pairs per input pair: each round consumes two pairs and keeps one with
//! probability `p`, so `yield = Π pᵢ/2`.

pub mod rounds;

use std::fmt;
use std::str::FromStr;

pub use self::rounds::{
    bbpssw_round, cnot_based_round, dejmps_round, epl_d, mfi_round, werner_twirl, BbpsswOptions,
    RoundOutcome,
};

use crate::correlations::bell_fidelity;
use crate::error::{Error, Result};
use crate::photonics::BellState;
use crate::qstate::linalg::expectation;
use crate::qstate::{CMatrix, DensityMatrix};
use crate::tolerance::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DistillProtocol {
    Dejmps,
    BbpsswImproved,
    Bbpssw,
    CnotBased,
    Mfi,
    EplD,
}

impl DistillProtocol {
    /// Protocols that can be iterated, in tie-break order.
    pub const REPEATABLE: [DistillProtocol; 5] = [
        DistillProtocol::Dejmps,
        DistillProtocol::BbpsswImproved,
        DistillProtocol::Bbpssw,
        DistillProtocol::CnotBased,
        DistillProtocol::Mfi,
    ];

    pub const ALL: [DistillProtocol; 6] = [
        DistillProtocol::Dejmps,
        DistillProtocol::BbpsswImproved,
        DistillProtocol::Bbpssw,
        DistillProtocol::CnotBased,
        DistillProtocol::Mfi,
        DistillProtocol::EplD,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DistillProtocol::Dejmps => "DEJMPS",
            DistillProtocol::BbpsswImproved => "BBPSSW-improved",
            DistillProtocol::Bbpssw => "BBPSSW",
            DistillProtocol::CnotBased => "CNOT-based",
            DistillProtocol::Mfi => "MFI",
            DistillProtocol::EplD => "EPL-D",
        }
    }

    pub fn is_repeatable(self) -> bool {
        self != DistillProtocol::EplD
    }
}

impl fmt::Display for DistillProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistillProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistillProtocol::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidExperiment(format!("unknown distillation protocol `{s}`")))
    }
}

/// Weights of a two-qubit state on the Bell basis `(φ⁺, φ⁻, ψ⁺, ψ⁻)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalCoeffs(pub [f64; 4]);

fn bell_basis_element(rho: &CMatrix, i: BellState, j: BellState) -> num_complex::Complex64 {
    let bra = i.ket();
    let ket = j.ket();
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            acc += bra[r].conj() * rho[(r, c)] * ket[c];
        }
    }
    acc
}

impl BellDiagonalCoeffs {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let min = p.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -TOL.equality {
            return Err(Error::NotPositive(min));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > TOL.equality {
            return Err(Error::InvalidTrace(sum));
        }
        Ok(BellDiagonalCoeffs(p))
    }

    /// Diagonal of `rho` in the Bell basis. Off-diagonal weight is dropped; see
    /// [`bell_off_diagonal`].
    pub fn extract(rho: &DensityMatrix) -> Result<Self> {
        if rho.num_qubits() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: rho.dim(),
            });
        }
        let mut p = [0.0; 4];
        for b in BellState::ALL {
            p[b.index()] = expectation(rho.matrix(), &b.ket()).re;
        }
        Ok(BellDiagonalCoeffs(p))
    }

    pub fn reconstruct<S: AsRef<str>>(&self, labels: &[S]) -> Result<DensityMatrix> {
        let mut m = CMatrix::zeros(4, 4);
        for b in BellState::ALL {
            m += b.projector().scale(self.0[b.index()]);
        }
        DensityMatrix::new(m, labels)
    }

    pub fn fidelity(&self) -> f64 {
        self.0[0]
    }
}

/// Largest off-diagonal element of `rho` in the Bell basis.
pub fn bell_off_diagonal(rho: &DensityMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in BellState::ALL {
        for j in BellState::ALL {
            if i != j {
                worst = worst.max(bell_basis_element(rho.matrix(), i, j).norm());
            }
        }
    }
    worst
}

/// Whether BBPSSW twirls its input into Werner form every round or only once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlPolicy {
    EveryRound,
    EntryOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistillConfig {
    /// Target fidelity with `|φ⁺⟩`, in `(0.5, 1)`.
    pub threshold: f64,
    pub max_rounds: usize,
    /// Twirl policy of the original BBPSSW. The improved variant twirls only
    /// on entry; re-twirling would undo its `U₁ ⊗ U₁` step.
    pub bbpssw_twirl: TwirlPolicy,
}

impl Default for DistillConfig {
    fn default() -> Self {
        DistillConfig {
            threshold: 0.998,
            max_rounds: 20,
            bbpssw_twirl: TwirlPolicy::EveryRound,
        }
    }
}

impl DistillConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.5 && self.threshold < 1.0) {
            return Err(Error::OutOfRange {
                name: "threshold",
                value: self.threshold,
                range: "(0.5, 1)",
            });
        }
        Ok(())
    }
}

/// Applies one round of `protocol`. `round` counts from 0 and decides
/// whether BBPSSW twirls its input.
pub fn apply_round(
    rho: &DensityMatrix,
    protocol: DistillProtocol,
    round: usize,
    cfg: &DistillConfig,
) -> Result<RoundOutcome> {
    match protocol {
        DistillProtocol::Dejmps => dejmps_round(rho),
        DistillProtocol::BbpsswImproved => bbpssw_round(
            rho,
            BbpsswOptions {
                improved: true,
                twirl_input: round == 0,
            },
        ),
        DistillProtocol::Bbpssw => bbpssw_round(
            rho,
            BbpsswOptions {
                improved: false,
                twirl_input: round == 0 || cfg.bbpssw_twirl == TwirlPolicy::EveryRound,
            },
        ),
        DistillProtocol::CnotBased => cnot_based_round(rho),
        DistillProtocol::Mfi => mfi_round(rho),
        DistillProtocol::EplD => epl_d(rho),
    }
}

#[derive(Debug, Clone)]
pub struct DistillationReport {
    pub protocol: DistillProtocol,
    pub rounds: usize,
    pub per_round_success: Vec<f64>,
    pub final_fidelity: f64,
    /// Surviving pairs per input pair, `Π pᵢ/2`.
    pub yield_per_pair: f64,
    /// `true` when `final_fidelity` reached the threshold.
    pub converged: bool,
    pub final_state: DensityMatrix,
}

impl DistillationReport {
    /// Ebits per input pair: the yield when converged, zero otherwise.
    pub fn ebit_yield(&self) -> f64 {
        if self.converged {
            self.yield_per_pair
        } else {
            0.0
        }
    }
}

/// Runs `protocol` until the fidelity with `|φ⁺⟩` reaches `cfg.threshold`.
///
/// EPL-D runs at most once. Running out of rounds gives a non-convergent
/// report; an input fidelity of 0.5 or less (within [`TOL`]) is rejected.
pub fn distill_to_threshold(
    rho: &DensityMatrix,
    protocol: DistillProtocol,
    cfg: &DistillConfig,
) -> Result<DistillationReport> {
    cfg.validate()?;
    let mut state = rho.clone();
    let mut fidelity = bell_fidelity(&state, BellState::PhiPlus)?;
    let mut per_round_success = Vec::new();
    let mut yield_per_pair = 1.0;

    if fidelity < cfg.threshold && fidelity <= 0.5 + TOL.equality {
        return Err(Error::NotDistillable(fidelity));
    }
    let limit = if protocol.is_repeatable() {
        cfg.max_rounds
    } else {
        cfg.max_rounds.min(1)
    };
    while fidelity < cfg.threshold && per_round_success.len() < limit {
        let out = apply_round(&state, protocol, per_round_success.len(), cfg)?;
        yield_per_pair *= out.p_succ / 2.0;
        per_round_success.push(out.p_succ);
        state = out.state;
        fidelity = bell_fidelity(&state, BellState::PhiPlus)?;
    }
    Ok(DistillationReport {
        protocol,
        rounds: per_round_success.len(),
        per_round_success,
        final_fidelity: fidelity,
        yield_per_pair,
        converged: fidelity >= cfg.threshold,
        final_state: state,
    })
}

/// Repeatable protocol with the highest ebit yield on `rho`. Ties go to the
/// earlier protocol in [`DistillProtocol::REPEATABLE`].
pub fn best_protocol(rho: &DensityMatrix, cfg: &DistillConfig) -> Result<DistillProtocol> {
    let mut best = (DistillProtocol::REPEATABLE[0], f64::NEG_INFINITY);
    for protocol in DistillProtocol::REPEATABLE {
        let y = distill_to_threshold(rho, protocol, cfg)?.ebit_yield();
        if y > best.1 + TOL.equality {
            best = (protocol, y);
        }
    }
    Ok(best.0)
}
