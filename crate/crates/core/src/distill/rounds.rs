//! Single rounds of each distillation protocol, simulated on two copies.
//!
//! Two copies of a pair on `(a, b)` are laid out as `(a1, b1, a2, b2)`. Node A
//! holds `a1, a2` and node B holds `b1, b2`. Pair 1 is the source of the
//! bilateral CNOT and pair 2 its target. Every round returns the surviving pair
//! renormalised, relabelled to the input's labels, and aligned so that its
//! target Bell state is `|φ⁺⟩`.

use crate::error::{Error, Result};
use crate::photonics::{bilocal_twirl, gates, hv_basis, BellState};
use crate::qstate::{CMatrix, DensityMatrix};

const A1: &str = "a1";
const B1: &str = "b1";
const A2: &str = "a2";
const B2: &str = "b2";

/// Success probabilities below this are reported as a degenerate round.
pub const MIN_SUCCESS: f64 = 1e-12;

/// Output of one distillation round.
#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub state: DensityMatrix,
    /// Probability that the round keeps a pair.
    pub p_succ: f64,
}

fn require_pair(rho: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    Ok(())
}

fn two_copies(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_pair(rho)?;
    rho.relabel(&[A1, B1])?.tensor(&rho.relabel(&[A2, B2])?)
}

fn bilateral_cnot(state: &DensityMatrix) -> Result<DensityMatrix> {
    let cnot = gates::cnot();
    state
        .apply_unitary(&cnot, &[A1, A2])?
        .apply_unitary(&cnot, &[B1, B2])
}

fn dejmps_rotations(state: &DensityMatrix) -> Result<DensityMatrix> {
    let (ra, rb) = (gates::dejmps_a(), gates::dejmps_b());
    state
        .apply_unitary(&ra, &[A1])?
        .apply_unitary(&ra, &[A2])?
        .apply_unitary(&rb, &[B1])?
        .apply_unitary(&rb, &[B2])
}

/// Sums the unnormalised branches where `measured` gave the listed H/V
/// outcomes (0 = H, 1 = V), traces out the measured pair and renormalises.
fn keep_branches(
    state: &DensityMatrix,
    measured: [&str; 2],
    kept: [&str; 2],
    outcomes: &[(usize, usize)],
    labels: &[String],
) -> Result<RoundOutcome> {
    let hv = hv_basis();
    let mut acc = CMatrix::zeros(state.dim(), state.dim());
    for &(x, y) in outcomes {
        let proj = hv[x].kronecker(&hv[y]);
        acc += state.project(&proj, &measured)?;
    }
    finish(acc, state, kept, labels)
}

fn finish(
    branch: CMatrix,
    state: &DensityMatrix,
    kept: [&str; 2],
    labels: &[String],
) -> Result<RoundOutcome> {
    let p_succ = crate::qstate::linalg::trace(&branch).re;
    if p_succ < MIN_SUCCESS {
        return Err(Error::DegenerateRound(p_succ));
    }
    let post = DensityMatrix::from_parts(branch.unscale(p_succ), state.labels().to_vec());
    let reduced = post.partial_trace(&kept)?;
    Ok(RoundOutcome {
        state: DensityMatrix::from_parts(reduced.matrix().clone(), labels.to_vec()),
        p_succ: p_succ.min(1.0),
    })
}

/// Unilateral `Y` on the second qubit, which exchanges `φ⁺ ↔ ψ⁻` and
/// `φ⁻ ↔ ψ⁺`. Used to move between the φ⁺ frame and the singlet frame the
/// twirl is defined in.
fn flip_frame(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let second = rho.labels()[1].clone();
    rho.apply_unitary(&gates::pauli_y(), &[second])
}

/// Twirls a φ⁺-aligned pair into the φ⁺-aligned Werner form: the φ⁺ weight is
/// kept and the other three Bell weights are equalised.
pub fn werner_twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_pair(rho)?;
    flip_frame(&bilocal_twirl(&flip_frame(rho)?)?)
}

/// One DEJMPS round: local rotations `R_A`/`R_B`, bilateral CNOT, measure
/// the target pair in H/V and keep coinciding outcomes.
pub fn dejmps_round(rho: &DensityMatrix) -> Result<RoundOutcome> {
    let state = bilateral_cnot(&dejmps_rotations(&two_copies(rho)?)?)?;
    keep_branches(&state, [A2, B2], [A1, B1], &[(0, 0), (1, 1)], rho.labels())
}

/// Options for [`bbpssw_round`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BbpsswOptions {
    /// Replace the closing twirl by the deterministic `U₁ ⊗ U₁`.
    pub improved: bool,
    /// Twirl the input pairs into Werner form before the round.
    pub twirl_input: bool,
}

/// One BBPSSW round.
///
/// In the singlet frame the round is: Werner twirl, unilateral `Y` on each
/// pair, bilateral CNOT, keep coinciding target outcomes, unilateral `Y`, then
/// either the random bilocal twirl (original) or `U₁ ⊗ U₁` (improved). The
/// output is mapped back to the φ⁺ frame.
pub fn bbpssw_round(rho: &DensityMatrix, opts: BbpsswOptions) -> Result<RoundOutcome> {
    require_pair(rho)?;
    let input = if opts.twirl_input {
        werner_twirl(rho)?
    } else {
        rho.clone()
    };
    let state = bilateral_cnot(&two_copies(&input)?)?;
    let kept = keep_branches(&state, [A2, B2], [A1, B1], &[(0, 0), (1, 1)], rho.labels())?;

    let singlet_frame = flip_frame(&kept.state)?;
    let rotated = if opts.improved {
        let u1 = &gates::twirl_generators()[0];
        singlet_frame.apply_unitary(&u1.kronecker(u1), rho.labels())?
    } else {
        bilocal_twirl(&singlet_frame)?
    };
    Ok(RoundOutcome {
        state: flip_frame(&rotated)?,
        p_succ: kept.p_succ,
    })
}

/// `M` is written for pairs aligned to `|φ⁻⟩`. A phase gate `S` at each node
/// takes `φ⁺ ↔ φ⁻` on the way in.
fn mfi_input_frame() -> CMatrix {
    let s = gates::phase_s();
    s.kronecker(&s)
}

/// Local unitary taking the MFI output onto the φ⁺ frame:
/// `(H·S) ⊗ (S†·H·S·H)`.
fn mfi_output_frame() -> CMatrix {
    let (h, s) = (gates::hadamard(), gates::phase_s());
    let a = &h * &s;
    let b = s.adjoint() * &h * &s * &h;
    a.kronecker(&b)
}

/// One MFI round: project each node's two photons onto
/// `M = |ψ⁻⟩⟨ψ⁻| + |φ⁻⟩⟨φ⁻|`, measure pair 2 in H/V and correct pair 1 with
/// the outcome-dependent rotations (node A: H→R¹, V→R²; node B: H→R², V→R¹).
/// All four outcomes are kept; only the projection can fail.
pub fn mfi_round(rho: &DensityMatrix) -> Result<RoundOutcome> {
    require_pair(rho)?;
    let aligned_in = rho.apply_unitary(&mfi_input_frame(), rho.labels())?;
    let copies = two_copies(&aligned_in)?;
    let m = BellState::PsiMinus.projector() + BellState::PhiMinus.projector();
    let projected = copies.project(&m, &[A1, A2])?;
    let projected =
        DensityMatrix::from_parts(projected, copies.labels().to_vec()).project(&m, &[B1, B2])?;
    let p_succ = crate::qstate::linalg::trace(&projected).re;
    if p_succ < MIN_SUCCESS {
        return Err(Error::DegenerateRound(p_succ));
    }
    let projected = DensityMatrix::from_parts(projected.unscale(p_succ), copies.labels().to_vec());

    let hv = hv_basis();
    let node_a = [gates::mfi_r1(), gates::mfi_r2()];
    let node_b = [gates::mfi_r2(), gates::mfi_r1()];
    let mut mixed = CMatrix::zeros(4, 4);
    for x in 0..2 {
        for y in 0..2 {
            let branch = projected.project(&hv[x].kronecker(&hv[y]), &[A2, B2])?;
            let branch = DensityMatrix::from_parts(branch, copies.labels().to_vec())
                .partial_trace(&[A1, B1])?;
            let correction = node_a[x].kronecker(&node_b[y]);
            mixed += &correction * branch.matrix() * correction.adjoint();
        }
    }
    let frame = mfi_output_frame();
    let aligned = &frame * mixed * frame.adjoint();
    Ok(RoundOutcome {
        state: DensityMatrix::from_parts(aligned, rho.labels().to_vec()),
        p_succ: p_succ.min(1.0),
    })
}

/// One round of the CNOT-based protocol: DEJMPS rotations and bilateral
/// CNOT, keeping only the VV outcome on the target pair.
pub fn cnot_based_round(rho: &DensityMatrix) -> Result<RoundOutcome> {
    let state = bilateral_cnot(&dejmps_rotations(&two_copies(rho)?)?)?;
    keep_branches(&state, [A2, B2], [A1, B1], &[(1, 1)], rho.labels())
}

/// EPL-D: bilateral CNOT, measure the control pair in H/V and post-select
/// VV; the target pair is kept. Not repeatable.
pub fn epl_d(rho: &DensityMatrix) -> Result<RoundOutcome> {
    let state = bilateral_cnot(&two_copies(rho)?)?;
    keep_branches(&state, [A1, B1], [A2, B2], &[(1, 1)], rho.labels())
}
