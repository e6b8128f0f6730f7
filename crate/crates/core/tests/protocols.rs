use proptest::prelude::*;

use edss::correlations::{bell_fidelity, negativity};
use edss::distill::{bell_off_diagonal, BellDiagonalCoeffs};
use edss::fiber::FiberSegment;
use edss::photonics::BellState;
use edss::protocols::{run, ProtocolId};
use edss::tolerance::TOL;

fn protocol() -> impl Strategy<Value = ProtocolId> {
    prop::sample::select(ProtocolId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn outputs_are_bell_diagonal_states(p in protocol(), x in 0.0f64..6.0) {
        let rho = run(p, &FiberSegment::from_strength(x).unwrap()).final_state;
        prop_assert!(rho.validate(&TOL).is_ok());
        prop_assert!(bell_off_diagonal(&rho) < 1e-12);
        let coeffs = BellDiagonalCoeffs::extract(&rho).unwrap();
        let f = bell_fidelity(&rho, BellState::PhiPlus).unwrap();
        prop_assert!((coeffs.fidelity() - f).abs() < 1e-12);
        // For a Bell-diagonal state the negativity is max(0, largest weight - 1/2).
        let largest = coeffs.0.iter().cloned().fold(0.0, f64::max);
        let n = negativity(&rho, &["a"]).unwrap();
        prop_assert!((n - (largest - 0.5).max(0.0)).abs() < 1e-10);
    }

    #[test]
    fn more_noise_never_helps(p in protocol(), x in 0.0f64..3.0, dx in 0.0f64..1.0) {
        let at = |x: f64| run(p, &FiberSegment::from_strength(x).unwrap());
        let (near, far) = (at(x), at(x + dx));
        let n = |o: &edss::protocols::ProtocolOutcome| negativity(&o.final_state, &["b"]).unwrap();
        prop_assert!(n(&far) <= n(&near) + 1e-12);
    }

    #[test]
    fn only_the_product_lambda_l_matters(p in protocol(), len in 0.1f64..50.0, lambda in 0.0f64..0.1) {
        let a = run(p, &FiberSegment::new(len, lambda).unwrap());
        let b = run(p, &FiberSegment::from_strength(len * lambda).unwrap());
        prop_assert!((a.success_probability - b.success_probability).abs() < 1e-12);
        let d = edss::qstate::linalg::max_abs_diff(a.final_state.matrix(), b.final_state.matrix());
        prop_assert!(d < 1e-12);
    }
}

#[test]
fn strong_noise_leaves_edss2_closer_to_a_bell_state_than_ded() {
    let seg = FiberSegment::from_strength(5.0).unwrap();
    let f = |p| bell_fidelity(&run(p, &seg).final_state, BellState::PhiPlus).unwrap();
    assert!(f(ProtocolId::Edss2) > f(ProtocolId::Ded));
}
