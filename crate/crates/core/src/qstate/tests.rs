use num_complex::Complex64;
use proptest::prelude::*;

use super::linalg::{c, from_rows, identity, kron, max_abs_diff};
use super::*;
use crate::photonics::{gates, BellState, Polarization};

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

/// Random full-rank state `GG†/Tr(GG†)` from entries in `[-1, 1]`.
fn random_state(n: usize) -> impl Strategy<Value = DensityMatrix> {
    let dim = 1usize << n;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        let g = CMatrix::from_iterator(dim, dim, v.into_iter().map(|(r, i)| c(r, i)));
        let m = &g * g.adjoint();
        let tr = linalg::trace(&m).re;
        DensityMatrix::new(m.unscale(tr), &labels(n)).unwrap()
    })
}

fn depolarizing(q: f64) -> KrausSet {
    let a = ((1.0 - q).sqrt() / 2.0, (1.0 + 3.0 * q).sqrt() / 2.0);
    KrausSet::new(vec![
        gates::pauli_x().scale(a.0),
        gates::pauli_y().scale(a.0),
        gates::pauli_z().scale(a.0),
        identity(2).scale(a.1),
    ])
    .unwrap()
}

#[test]
fn tensor_examples() {
    let half = DensityMatrix::maximally_mixed(&["a"]).unwrap();
    let t = half.tensor(&half.relabel(&["b"]).unwrap()).unwrap();
    assert!(max_abs_diff(t.matrix(), &identity(4).scale(0.25)) < 1e-15);
    assert_eq!(t.labels(), ["a", "b"]);

    let hv = Polarization::H
        .state("a")
        .tensor(&Polarization::V.state("b"))
        .unwrap();
    assert_eq!(hv.matrix()[(1, 1)], c(1.0, 0.0));
    assert!(half.tensor(&half).is_err());
}

#[test]
fn partial_trace_examples() {
    let phi = BellState::PhiPlus.state("a", "b");
    let a = phi.partial_trace(&["a"]).unwrap();
    assert!(max_abs_diff(a.matrix(), &identity(2).scale(0.5)) < 1e-15);

    let hv = Polarization::H
        .state("a")
        .tensor(&Polarization::V.state("b"))
        .unwrap();
    let b = hv.partial_trace(&["b"]).unwrap();
    assert!(max_abs_diff(b.matrix(), &Polarization::V.projector()) < 1e-15);
    assert!(matches!(
        hv.partial_trace(&["z"]),
        Err(Error::UnknownLabel(_))
    ));
}

#[test]
fn partial_trace_keeps_register_order() {
    let s = Polarization::H
        .state("a")
        .tensor(&Polarization::V.state("b"))
        .unwrap()
        .tensor(&Polarization::D.state("c"))
        .unwrap();
    let kept = s.partial_trace(&["c", "a"]).unwrap();
    assert_eq!(kept.labels(), ["a", "c"]);
    let expect = kron(&Polarization::H.projector(), &Polarization::D.projector());
    assert!(max_abs_diff(kept.matrix(), &expect) < 1e-15);
}

#[test]
fn partial_transpose_of_phi_plus() {
    let pt = BellState::PhiPlus
        .state("a", "b")
        .partial_transpose(&["a"])
        .unwrap();
    let ev = linalg::hermitian_eigenvalues(&pt);
    assert!((ev[0] + 0.5).abs() < 1e-12);
    assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn unitary_examples() {
    let h = Polarization::H.state("a");
    let v = h.apply_unitary(&gates::pauli_x(), &["a"]).unwrap();
    assert!(max_abs_diff(v.matrix(), &Polarization::V.projector()) < 1e-15);

    let vh = Polarization::V
        .state("a")
        .tensor(&Polarization::H.state("c"))
        .unwrap();
    let vv = vh.apply_unitary(&gates::cnot(), &["a", "c"]).unwrap();
    let expect = kron(&Polarization::V.projector(), &Polarization::V.projector());
    assert!(max_abs_diff(vv.matrix(), &expect) < 1e-15);

    let bad = from_rows(2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
    assert!(matches!(
        h.apply_unitary(&bad, &["a"]),
        Err(Error::NotUnitary(_))
    ));
    assert!(h.apply_unitary(&gates::cnot(), &["a"]).is_err());
}

#[test]
fn kraus_validation() {
    assert!(KrausSet::new(vec![identity(2).scale(0.5)]).is_err());
    assert!(KrausSet::new(vec![identity(2), identity(4)]).is_err());
    let rho = Polarization::D.state("a");
    let same = rho.apply_channel(&KrausSet::identity(2), &["a"]).unwrap();
    assert!(max_abs_diff(same.matrix(), rho.matrix()) < 1e-15);
    let noiseless = rho.apply_channel(&depolarizing(1.0), &["a"]).unwrap();
    assert!(max_abs_diff(noiseless.matrix(), rho.matrix()) < 1e-15);
}

#[test]
fn measurement_examples() {
    let d = Polarization::D.state("a");
    let hv = crate::photonics::hv_basis();
    let out = d.measure(&hv, &["a"]).unwrap();
    assert!((out[0].probability - 0.5).abs() < 1e-15);
    assert!((out[1].probability - 0.5).abs() < 1e-15);

    let h = Polarization::H.state("a");
    let out = h.measure(&hv, &["a"]).unwrap();
    assert!(out[1].post_state.is_none());

    let incomplete = [Polarization::H.projector()];
    assert!(matches!(
        d.measure(&incomplete, &["a"]),
        Err(Error::IncompleteProjectors(_))
    ));
}

#[test]
fn entropy_examples() {
    assert!(
        BellState::PhiPlus
            .state("a", "b")
            .von_neumann_entropy()
            .abs()
            < 1e-12
    );
    let half = DensityMatrix::maximally_mixed(&["a"]).unwrap();
    assert!((half.von_neumann_entropy() - 1.0).abs() < 1e-12);
    let m = from_rows(
        4,
        &[
            c(0.5, 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0.25, 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0.25, 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
            c(0., 0.),
        ],
    );
    let rho = DensityMatrix::new(m, &["a", "b"]).unwrap();
    assert!((rho.von_neumann_entropy() - 1.5).abs() < 1e-12);
}

#[test]
fn construction_errors() {
    let m = identity(4).scale(0.5);
    assert!(matches!(
        DensityMatrix::new(m, &["a", "b"]),
        Err(Error::InvalidTrace(_))
    ));
    let neg = from_rows(2, &[c(1.5, 0.), c(0., 0.), c(0., 0.), c(-0.5, 0.)]);
    assert!(matches!(
        DensityMatrix::new(neg, &["a"]),
        Err(Error::NotPositive(_))
    ));
    let skew = from_rows(2, &[c(0.5, 0.), c(0.1, 0.), c(0., 0.), c(0.5, 0.)]);
    assert!(matches!(
        DensityMatrix::new(skew, &["a"]),
        Err(Error::NotHermitian(_))
    ));
    assert!(DensityMatrix::new(identity(2).scale(0.5), &["a", "b"]).is_err());
    assert!(DensityMatrix::maximally_mixed(&["a", "a"]).is_err());
    let zero = [Complex64::new(0.0, 0.0); 2];
    assert!(DensityMatrix::from_ket(&zero, &["a"]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn channels_preserve_state_invariants(rho in random_state(2), q in 0.0f64..=1.0) {
        let out = rho.apply_channel(&depolarizing(q), &["q1"]).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!(linalg::hermiticity_error(out.matrix()) < 1e-12);
        prop_assert!(out.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn depolarizing_closed_form(rho in random_state(1), q in 0.0f64..=1.0) {
        let out = rho.apply_channel(&depolarizing(q), &["q0"]).unwrap();
        let expect = rho.matrix().scale(q) + identity(2).scale((1.0 - q) / 2.0);
        prop_assert!(max_abs_diff(out.matrix(), &expect) < 1e-12);
    }

    #[test]
    fn depolarizing_composes(rho in random_state(2), q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0) {
        let twice = rho
            .apply_channel(&depolarizing(q1), &["q0"]).unwrap()
            .apply_channel(&depolarizing(q2), &["q0"]).unwrap();
        let once = rho.apply_channel(&depolarizing(q1 * q2), &["q0"]).unwrap();
        prop_assert!(max_abs_diff(twice.matrix(), once.matrix()) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(rho in random_state(3)) {
        let pt = rho.partial_transpose(&["q0", "q2"]).unwrap();
        let back = DensityMatrix::from_parts(pt, rho.labels().to_vec())
            .partial_transpose(&["q0", "q2"]).unwrap();
        prop_assert!(max_abs_diff(&back, rho.matrix()) < 1e-15);
    }

    #[test]
    fn trace_norm_of_a_state_is_one(rho in random_state(2)) {
        prop_assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(rho in random_state(3)) {
        let bell: Vec<CMatrix> = BellState::ALL.iter().map(|b| b.projector()).collect();
        let out = rho.measure(&bell, &["q2", "q0"]).unwrap();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for o in out {
            if let Some(post) = o.post_state {
                prop_assert!(post.validate(&crate::tolerance::TOL).is_ok());
            }
        }
    }

    #[test]
    fn unitaries_preserve_spectrum(rho in random_state(2), theta in 0.0f64..6.3) {
        let u = gates::rotation(crate::photonics::Axis::Y, theta);
        let out = rho.apply_unitary(&kron(&u, &gates::hadamard()), &["q1", "q0"]).unwrap();
        let (a, b) = (rho.eigenvalues(), out.eigenvalues());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_matches_index_contraction(rho in random_state(3)) {
        let kept = rho.partial_trace(&["q0", "q2"]).unwrap();
        // q1 is the middle bit: index = 4·q0 + 2·q1 + q2.
        let m = rho.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let spread = |k: usize| ((k >> 1) << 2) | (k & 1);
                let expect = m[(spread(i), spread(j))] + m[(spread(i) | 2, spread(j) | 2)];
                prop_assert!((kept.matrix()[(i, j)] - expect).norm() < 1e-15);
            }
        }
    }
}
