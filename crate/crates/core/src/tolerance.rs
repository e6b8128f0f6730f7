//! Numerical tolerances shared by every invariant check.

/// One record holding every threshold the crate compares against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Entrywise equality, trace and Hermiticity checks.
    pub equality: f64,
    /// Allowed negative slack on eigenvalues of a positive semidefinite matrix.
    pub psd_slack: f64,
    /// Unitarity (`U†U = I`) and trace preservation of Kraus sets.
    pub operator: f64,
    /// Outcome probabilities at or below this are treated as impossible.
    pub zero_probability: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        equality: 1e-12,
        psd_slack: 1e-10,
        operator: 1e-10,
        zero_probability: 1e-14,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// The tolerances used by all library entry points.
pub const TOL: Tolerances = Tolerances::DEFAULT;
