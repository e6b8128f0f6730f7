//! Polarisation states, the Bell basis, the gate set used by the protocols and
//! the correlated local rotations (trilocal preparation and bilocal twirl).
//!
//! Polarisation is the computational basis: `|H⟩ = |0⟩`, `|V⟩ = |1⟩`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::linalg::{c, from_rows, kron_all, kron_kets, CMatrix};
use crate::qstate::DensityMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^{ikπ/2}` evaluated exactly.
fn quarter_phase(k: i32) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// `|Ψ_k⟩ = (|H⟩ + e^{ikπ/2}|V⟩)/√2`. Negative `k` wraps modulo 4.
pub fn psi_k(k: i32) -> [Complex64; 2] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [s, s * quarter_phase(k)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
    /// Diagonal, `Ψ₀`.
    D,
    /// Right circular, `Ψ₁`.
    R,
    /// Anti-diagonal, `Ψ₂`.
    A,
    /// Left circular, `Ψ₃`.
    L,
}

impl Polarization {
    pub fn ket(self) -> [Complex64; 2] {
        match self {
            Polarization::H => [ONE, ZERO],
            Polarization::V => [ZERO, ONE],
            Polarization::D => psi_k(0),
            Polarization::R => psi_k(1),
            Polarization::A => psi_k(2),
            Polarization::L => psi_k(3),
        }
    }

    pub fn projector(self) -> CMatrix {
        crate::qstate::linalg::ket_projector(&self.ket())
    }

    pub fn state(self, label: &str) -> DensityMatrix {
        DensityMatrix::from_parts(self.projector(), vec![label.to_string()])
    }
}

/// Projectors for a measurement in the H/V basis, ordered (H, V).
pub fn hv_basis() -> [CMatrix; 2] {
    [Polarization::H.projector(), Polarization::V.projector()]
}

/// Projectors for a measurement in the D/A basis, ordered (D, A).
pub fn da_basis() -> [CMatrix; 2] {
    [Polarization::D.projector(), Polarization::A.projector()]
}

/// Bell states in the fixed order (φ⁺, φ⁻, ψ⁺, ψ⁻).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PhiPlus,
        BellState::PhiMinus,
        BellState::PsiPlus,
        BellState::PsiMinus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn ket(self) -> [Complex64; 4] {
        let s = FRAC_1_SQRT_2;
        match self {
            BellState::PhiPlus => [c(s, 0.), ZERO, ZERO, c(s, 0.)],
            BellState::PhiMinus => [c(s, 0.), ZERO, ZERO, c(-s, 0.)],
            BellState::PsiPlus => [ZERO, c(s, 0.), c(s, 0.), ZERO],
            BellState::PsiMinus => [ZERO, c(s, 0.), c(-s, 0.), ZERO],
        }
    }

    pub fn projector(self) -> CMatrix {
        crate::qstate::linalg::ket_projector(&self.ket())
    }

    pub fn state(self, a: &str, b: &str) -> DensityMatrix {
        DensityMatrix::from_parts(self.projector(), vec![a.to_string(), b.to_string()])
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Gate constructors. All returned matrices are unitary.
pub mod gates {
    use super::*;

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn pauli_x() -> CMatrix {
        from_rows(2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> CMatrix {
        from_rows(2, &[ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> CMatrix {
        from_rows(2, &[ONE, ZERO, ZERO, -ONE])
    }

    pub fn pauli(axis: Axis) -> CMatrix {
        match axis {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }

    pub fn hadamard() -> CMatrix {
        let s = c(FRAC_1_SQRT_2, 0.);
        from_rows(2, &[s, s, s, -s])
    }

    /// Phase gate `diag(1, i)`.
    pub fn phase_s() -> CMatrix {
        from_rows(2, &[ONE, ZERO, ZERO, I])
    }

    /// `exp(-iθσ/2)` about the given axis.
    pub fn rotation(axis: Axis, theta: f64) -> CMatrix {
        let (cos, sin) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        identity().scale(cos) - pauli(axis) * c(0., sin)
    }

    /// Controlled-NOT; the first qubit is the control.
    pub fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        m
    }

    /// Controlled-Z; symmetric in its two qubits.
    pub fn cphase() -> CMatrix {
        let mut m = CMatrix::identity(4, 4);
        m[(3, 3)] = -ONE;
        m
    }

    /// DEJMPS rotation applied at the first node, `(1/√2)[[1, -i], [-i, 1]]`.
    pub fn dejmps_a() -> CMatrix {
        let s = FRAC_1_SQRT_2;
        from_rows(2, &[c(s, 0.), c(0., -s), c(0., -s), c(s, 0.)])
    }

    /// DEJMPS rotation applied at the second node, `(1/√2)[[1, i], [i, 1]]`.
    pub fn dejmps_b() -> CMatrix {
        let s = FRAC_1_SQRT_2;
        from_rows(2, &[c(s, 0.), c(0., s), c(0., s), c(s, 0.)])
    }

    /// MFI correction `[[i, 0], [0, 1]]`.
    pub fn mfi_r1() -> CMatrix {
        from_rows(2, &[I, ZERO, ZERO, ONE])
    }

    /// MFI correction `[[0, i], [1, 0]]`.
    pub fn mfi_r2() -> CMatrix {
        from_rows(2, &[ZERO, I, ONE, ZERO])
    }

    /// The twirl generators `U₁, U₂, U₃`: π/2 rotations about X, Y and Z.
    pub fn twirl_generators() -> [CMatrix; 3] {
        let q = std::f64::consts::FRAC_PI_2;
        [
            rotation(Axis::X, q),
            rotation(Axis::Y, q),
            rotation(Axis::Z, q),
        ]
    }
}

/// The six correlated rotations `U_a ⊗ U_b ⊗ U_c` that turn `|DDH⟩` into the
/// EDSS1 resource state when applied with equal probability.
///
/// Rows with a π rotation use the Pauli matrix itself; the dropped global
/// phase has no effect on density matrices.
pub fn trilocal_rotation_set() -> Vec<CMatrix> {
    use gates::*;
    let h = std::f64::consts::FRAC_PI_2;
    let rows: [[CMatrix; 3]; 6] = [
        [identity(), identity(), identity()],
        [rotation(Axis::Z, h), rotation(Axis::Z, -h), identity()],
        [pauli_z(), pauli_z(), identity()],
        [rotation(Axis::Z, -h), rotation(Axis::Z, h), identity()],
        [rotation(Axis::Y, -h), rotation(Axis::Y, -h), pauli_x()],
        [rotation(Axis::Y, h), rotation(Axis::Y, h), pauli_x()],
    ];
    rows.iter().map(|r| kron_all(r.iter())).collect()
}

/// `|D⟩⟨D|_a ⊗ |D⟩⟨D|_b ⊗ |H⟩⟨H|_c`, the product state the trilocal rotations
/// act on.
pub fn trilocal_seed_state() -> DensityMatrix {
    let ket = kron_kets(
        &kron_kets(&Polarization::D.ket(), &Polarization::D.ket()),
        &Polarization::H.ket(),
    );
    DensityMatrix::from_parts(
        crate::qstate::linalg::ket_projector(&ket),
        vec!["a".into(), "b".into(), "c".into()],
    )
}

/// Uniform mixture of the six trilocal rotations applied to a three-qubit
/// state. The result is an exact average, not a sample.
pub fn trilocal_average(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.num_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            actual: rho.dim(),
        });
    }
    let set = trilocal_rotation_set();
    let mut acc = CMatrix::zeros(8, 8);
    for u in &set {
        acc += u * rho.matrix() * u.adjoint();
    }
    Ok(DensityMatrix::from_parts(
        acc.scale(1.0 / set.len() as f64),
        rho.labels().to_vec(),
    ))
}

/// Bilocal twirl `(1/3) Σᵢ (Uᵢ⊗Uᵢ) ρ (Uᵢ⊗Uᵢ)†` over the three π/2 rotations.
///
/// On a Bell-diagonal state this keeps the ψ⁻ weight and replaces the other
/// three weights by their mean, i.e. it produces a Werner state.
pub fn bilocal_twirl(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    let mut acc = CMatrix::zeros(4, 4);
    for u in gates::twirl_generators() {
        let uu = u.kronecker(&u);
        acc += &uu * rho.matrix() * uu.adjoint();
    }
    Ok(DensityMatrix::from_parts(
        acc.scale(1.0 / 3.0),
        rho.labels().to_vec(),
    ))
}

/// Werner state `f|ψ⁻⟩⟨ψ⁻| + (1-f) I/4` on qubits `a`, `b`.
pub fn werner_state(f: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            name: "Werner weight",
            value: f,
            range: "[0, 1]",
        });
    }
    let m =
        BellState::PsiMinus.projector().scale(f) + CMatrix::identity(4, 4).scale((1.0 - f) / 4.0);
    DensityMatrix::new(m, &["a", "b"])
}

#[cfg(test)]
mod tests {
    use super::gates::*;
    use super::*;
    use crate::qstate::linalg::{max_abs_diff, unitarity_error};

    fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn psi_family_orthogonality() {
        for k in 0..2 {
            assert!(inner(&psi_k(k), &psi_k(k + 2)).norm() < 1e-15);
        }
        for p in [
            Polarization::H,
            Polarization::V,
            Polarization::D,
            Polarization::A,
            Polarization::R,
            Polarization::L,
        ] {
            assert!((inner(&p.ket(), &p.ket()).re - 1.0).abs() < 1e-15);
        }
        assert_eq!(psi_k(-1), psi_k(3));
        assert_eq!(Polarization::L.ket(), psi_k(3));
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for a in BellState::ALL {
            for b in BellState::ALL {
                let ip = inner(&a.ket(), &b.ket()).norm();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-15, "{a} {b}");
            }
        }
    }

    #[test]
    fn all_gates_unitary() {
        let mut all = vec![
            identity(),
            pauli_x(),
            pauli_y(),
            pauli_z(),
            hadamard(),
            phase_s(),
            cnot(),
            cphase(),
            dejmps_a(),
            dejmps_b(),
            mfi_r1(),
            mfi_r2(),
            rotation(Axis::Y, 0.37),
        ];
        all.extend(twirl_generators());
        all.extend(trilocal_rotation_set());
        for g in &all {
            assert!(unitarity_error(g) < 1e-12);
        }
    }

    #[test]
    fn cnot_and_cphase_square_to_identity() {
        let id = CMatrix::identity(4, 4);
        assert!(max_abs_diff(&(cnot() * cnot()), &id) < 1e-15);
        assert!(max_abs_diff(&(cphase() * cphase()), &id) < 1e-15);
    }

    #[test]
    fn cnot_is_hadamard_conjugated_cphase() {
        let ih = identity().kronecker(&hadamard());
        let conj = &ih * cphase() * &ih;
        assert!(max_abs_diff(&conj, &cnot()) < 1e-15);
    }

    #[test]
    fn rotation_by_pi_is_pauli_up_to_phase() {
        let r = rotation(Axis::Z, std::f64::consts::PI);
        let expected = pauli_z() * c(0., -1.);
        assert!(max_abs_diff(&r, &expected) < 1e-15);
    }

    #[test]
    fn trilocal_first_and_third_rows() {
        let set = trilocal_rotation_set();
        assert_eq!(set.len(), 6);
        assert!(max_abs_diff(&set[0], &CMatrix::identity(8, 8)) < 1e-15);
        let zz = kron_all([&pauli_z(), &pauli_z(), &identity()]);
        assert!(max_abs_diff(&set[2], &zz) < 1e-15);
    }

    #[test]
    fn twirl_fixes_singlet_and_identity() {
        let singlet = BellState::PsiMinus.state("a", "b");
        let t = bilocal_twirl(&singlet).unwrap();
        assert!(max_abs_diff(t.matrix(), singlet.matrix()) < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(&["a", "b"]).unwrap();
        let t = bilocal_twirl(&mixed).unwrap();
        assert!(max_abs_diff(t.matrix(), mixed.matrix()) < 1e-15);
    }

    #[test]
    fn werner_endpoints() {
        let w1 = werner_state(1.0).unwrap();
        assert!(max_abs_diff(w1.matrix(), &BellState::PsiMinus.projector()) < 1e-15);
        let w0 = werner_state(0.0).unwrap();
        assert!(max_abs_diff(w0.matrix(), &CMatrix::identity(4, 4).scale(0.25)) < 1e-15);
        assert!(matches!(werner_state(1.2), Err(Error::OutOfRange { .. })));
        assert!(matches!(werner_state(-0.1), Err(Error::OutOfRange { .. })));
    }
}
