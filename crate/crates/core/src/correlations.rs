//! Entanglement and correlation measures: negativity, Bell fidelity, quantum
//! mutual information and quantum discord.
//!
//! Entropies are in bits. Discord is computed by maximising the classical
//! correlation over rank-one projective measurements on a single qubit,
//! parametrised by Bloch angles `(θ, φ)`:
//!
//! ```text
//! |n⟩  = cos(θ/2)|H⟩ + e^{iφ} sin(θ/2)|V⟩
//! |n⊥⟩ = -e^{-iφ} sin(θ/2)|H⟩ + cos(θ/2)|V⟩
//! ```
//!
//! The search is a uniform grid followed by coordinate descent. For registers
//! larger than two qubits a projective search gives an upper bound on discord,
//! not the POVM-optimal value.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::photonics::BellState;
use crate::qstate::linalg::{c, ket_projector, trace_norm};
use crate::qstate::{CMatrix, DensityMatrix};

/// Negativity `(‖ρ^{T_A}‖₁ - 1)/2` with `A` the qubits in `partition`.
pub fn negativity<S: AsRef<str>>(rho: &DensityMatrix, partition: &[S]) -> Result<f64> {
    if partition.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let pt = rho.partial_transpose(partition)?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

/// `⟨B|ρ|B⟩` for a two-qubit state.
pub fn bell_fidelity(rho: &DensityMatrix, target: BellState) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    rho.overlap(&target.ket())
}

fn complement<S: AsRef<str>>(rho: &DensityMatrix, part: &[S]) -> Result<Vec<String>> {
    rho.positions(part)?;
    let named: Vec<&str> = part.iter().map(|s| s.as_ref()).collect();
    Ok(rho
        .labels()
        .iter()
        .filter(|l| !named.contains(&l.as_str()))
        .cloned()
        .collect())
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ_AB)` where `A` is `part` and `B` is every
/// other qubit.
pub fn mutual_information<S: AsRef<str>>(rho: &DensityMatrix, part: &[S]) -> Result<f64> {
    if part.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let rest = complement(rho, part)?;
    if rest.is_empty() {
        return Err(Error::EmptyPartition);
    }
    let sa = rho.partial_trace(part)?.von_neumann_entropy();
    let sb = rho.partial_trace(&rest)?.von_neumann_entropy();
    Ok((sa + sb - rho.von_neumann_entropy()).max(0.0))
}

/// Search settings for the measurement optimisation in [`discord`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordConfig {
    /// Polar grid cells; θ is sampled at `iπ/theta_steps`, `i = 0..=theta_steps`.
    pub theta_steps: usize,
    /// Azimuthal samples at `2πj/phi_steps`, `j = 0..phi_steps`.
    pub phi_steps: usize,
    /// Maximum coordinate-descent sweeps after the grid; zero disables refinement.
    pub refine_iterations: usize,
    /// Refinement stops once a sweep improves the objective by less than this.
    pub tolerance: f64,
}

impl Default for DiscordConfig {
    fn default() -> Self {
        DiscordConfig {
            theta_steps: 64,
            phi_steps: 64,
            refine_iterations: 500,
            tolerance: 1e-6,
        }
    }
}

impl DiscordConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_steps < 16 || self.phi_steps < 16 {
            return Err(Error::OutOfRange {
                name: "discord grid resolution",
                value: self.theta_steps.min(self.phi_steps) as f64,
                range: "[16, inf)",
            });
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-3) {
            return Err(Error::OutOfRange {
                name: "discord tolerance",
                value: self.tolerance,
                range: "(0, 1e-3]",
            });
        }
        Ok(())
    }
}

/// Result of maximising the classical correlation `J(rest|measured)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
}

struct MeasurementObjective<'a> {
    rho: &'a DensityMatrix,
    measured: [&'a str; 1],
    rest: Vec<String>,
    rest_entropy: f64,
}

impl<'a> MeasurementObjective<'a> {
    fn new(rho: &'a DensityMatrix, measured: &'a str) -> Result<Self> {
        let rest = complement(rho, &[measured])?;
        if rest.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let rest_entropy = rho.partial_trace(&rest)?.von_neumann_entropy();
        Ok(MeasurementObjective {
            rho,
            measured: [measured],
            rest,
            rest_entropy,
        })
    }

    /// `S(ρ_rest) - Σᵢ pᵢ S(ρ_rest^i)` for the basis at `(θ, φ)`.
    fn evaluate(&self, theta: f64, phi: f64) -> f64 {
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let phase = c(phi.cos(), phi.sin());
        let up = [c(ct, 0.0), phase * st];
        let down = [-phase.conj() * st, c(ct, 0.0)];
        let mut conditional = 0.0;
        for ket in [up, down] {
            let p: CMatrix = ket_projector(&ket);
            let branch = self
                .rho
                .project(&p, &self.measured)
                .expect("measured label resolved at construction");
            let prob = crate::qstate::linalg::trace(&branch).re;
            if prob <= 1e-14 {
                continue;
            }
            let post = DensityMatrix::from_parts(branch.unscale(prob), self.rho.labels().to_vec());
            let reduced = post
                .partial_trace(&self.rest)
                .expect("rest labels resolved at construction");
            conditional += prob * reduced.von_neumann_entropy();
        }
        self.rest_entropy - conditional
    }
}

/// Maximises `J(rest|measured)` over projective measurements on `measured`.
pub fn classical_correlation(
    rho: &DensityMatrix,
    measured: &str,
    cfg: &DiscordConfig,
) -> Result<ClassicalCorrelation> {
    cfg.validate()?;
    let objective = MeasurementObjective::new(rho, measured)?;
    let pi = std::f64::consts::PI;
    let d_theta = pi / cfg.theta_steps as f64;
    let d_phi = 2.0 * pi / cfg.phi_steps as f64;

    // Grid stage; ties resolve to the lowest (i, j) so the result is stable.
    let best = (0..=cfg.theta_steps)
        .into_par_iter()
        .map(|i| {
            let theta = i as f64 * d_theta;
            let mut row_best = (f64::NEG_INFINITY, i, 0usize);
            for j in 0..cfg.phi_steps {
                let v = objective.evaluate(theta, j as f64 * d_phi);
                if v > row_best.0 {
                    row_best = (v, i, j);
                }
            }
            row_best
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );

    let mut value = best.0;
    let mut theta = best.1 as f64 * d_theta;
    let mut phi = best.2 as f64 * d_phi;

    let mut step = [d_theta, d_phi];
    for _ in 0..cfg.refine_iterations {
        let start = value;
        for axis in 0..2 {
            for dir in [1.0, -1.0] {
                let (t, p) = if axis == 0 {
                    (theta + dir * step[0], phi)
                } else {
                    (theta, phi + dir * step[1])
                };
                let v = objective.evaluate(t, p);
                if v > value {
                    value = v;
                    theta = t;
                    phi = p;
                    break;
                }
            }
        }
        let gain = value - start;
        if gain == 0.0 {
            step[0] *= 0.5;
            step[1] *= 0.5;
            if step[0] < 1e-9 {
                break;
            }
        } else if gain < cfg.tolerance && step[0] < 1e-6 {
            break;
        }
    }

    Ok(ClassicalCorrelation {
        value: value.max(0.0),
        theta,
        phi,
    })
}

/// Quantum discord `D_{rest|measured} = I(rest:measured) - J(rest|measured)`,
/// with the measurement on the single qubit `measured`.
pub fn discord(rho: &DensityMatrix, measured: &str, cfg: &DiscordConfig) -> Result<f64> {
    let mi = mutual_information(rho, &[measured])?;
    let j = classical_correlation(rho, measured, cfg)?;
    Ok((mi - j.value).max(0.0))
}
