//! Simulation of entanglement distribution over depolarizing, lossy fiber
//! networks.
//!
//! The crate models three ways of sharing a Bell pair between two nodes:
//! sending one half of a pair directly (DED) and two variants that send a
//! carrier photon which never becomes entangled with the nodes (EDSS1 and
//! EDSS2). It covers:
//!
//! * exact density-matrix pipelines for each protocol ([`protocols`]),
//! * depolarizing fiber noise ([`fiber`]),
//! * negativity, fidelity and discord ([`correlations`]),
//! * photon-loss budgets and pair rates on a topology ([`lossnet`]),
//! * recurrence distillation and ebit yields ([`distill`]),
//! * sweeps that produce CSV tables ([`experiment`]).
//!
//! ```
//! use edss::{fiber::FiberSegment, protocols::{run, ProtocolId}, correlations::negativity};
//!
//! let seg = FiberSegment::from_strength(0.0).unwrap();
//! let out = run(ProtocolId::Edss1, &seg);
//! assert!((out.success_probability - 1.0 / 3.0).abs() < 1e-12);
//! assert!((negativity(&out.final_state, &["a"]).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod correlations;
pub mod distill;
pub mod error;
pub mod experiment;
pub mod fiber;
pub mod lossnet;
pub mod photonics;
pub mod protocols;
pub mod qstate;
pub mod tolerance;

pub use error::{Error, Result};
pub use qstate::{CMatrix, DensityMatrix, KrausSet};

/// Guide chapters, compiled and run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    pub mod states {}
    #[doc = include_str!("../../../book/src/fiber-noise.md")]
    pub mod fiber_noise {}
    #[doc = include_str!("../../../book/src/protocols.md")]
    pub mod protocols {}
    #[doc = include_str!("../../../book/src/losses.md")]
    pub mod losses {}
    #[doc = include_str!("../../../book/src/distillation.md")]
    pub mod distillation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub mod experiments {}
}
