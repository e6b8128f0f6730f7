//! Multi-qubit density matrices.
//!
//! A [`DensityMatrix`] carries its qubit labels. The first label is the most
//! significant bit of the computational index, so `|HV⟩` on labels `["a", "b"]`
//! is basis index `0b01`. Every operation that takes labels resolves them
//! against this ordering; nothing else in the crate deals in raw bit positions.
//!
//! Values are immutable. Operations return new states, and every state produced
//! by a channel or gate is re-symmetrised as `(ρ + ρ†)/2` so that round-off does
//! not accumulate along long pipelines.

mod kraus;
pub mod linalg;

#[cfg(test)]
mod tests;

use num_complex::Complex64;

pub use self::kraus::KrausSet;
pub use self::linalg::{trace_norm, CMatrix};

use self::linalg::{embed, hermitian_eigenvalues, hermiticity_error, symmetrize};
use crate::error::{Error, Result};
use crate::tolerance::{Tolerances, TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<String>,
    matrix: CMatrix,
}

/// One branch of a projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    /// Index of the projector in the list passed to [`DensityMatrix::measure`].
    pub outcome: usize,
    pub probability: f64,
    /// `PρP / Tr(PρP)`, or `None` when the outcome is impossible.
    pub post_state: Option<DensityMatrix>,
}

fn owned_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::with_capacity(labels.len());
    for l in labels {
        let l = l.as_ref();
        if out.iter().any(|x| x == l) {
            return Err(Error::DuplicateLabel(l.to_string()));
        }
        out.push(l.to_string());
    }
    Ok(out)
}

impl DensityMatrix {
    /// Validates `matrix` against the density-matrix invariants and attaches
    /// `labels` (one per qubit, most significant first).
    pub fn new<S: AsRef<str>>(matrix: CMatrix, labels: &[S]) -> Result<Self> {
        let labels = owned_labels(labels)?;
        let expected = 1usize << labels.len();
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: matrix.nrows().max(matrix.ncols()),
            });
        }
        let rho = DensityMatrix { labels, matrix };
        rho.validate(&TOL)?;
        Ok(rho)
    }

    /// The pure state `|ψ⟩⟨ψ|`; the ket is normalised first.
    pub fn from_ket<S: AsRef<str>>(ket: &[Complex64], labels: &[S]) -> Result<Self> {
        let norm = ket.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::OutOfRange {
                name: "ket norm",
                value: 0.0,
                range: "(0, inf)",
            });
        }
        let scaled: Vec<Complex64> = ket.iter().map(|a| a / norm).collect();
        Self::new(linalg::ket_projector(&scaled), labels)
    }

    /// `I / 2ⁿ` on the given labels.
    pub fn maximally_mixed<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let n = labels.len();
        let dim = 1usize << n;
        Self::new(linalg::identity(dim).scale(1.0 / dim as f64), labels)
    }

    /// Wraps a matrix produced internally. The matrix is symmetrised but not
    /// otherwise validated.
    pub(crate) fn from_parts(matrix: CMatrix, labels: Vec<String>) -> Self {
        DensityMatrix {
            labels,
            matrix: symmetrize(&matrix),
        }
    }

    /// Checks Hermiticity, unit trace and positivity against `tol`.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let herm = hermiticity_error(&self.matrix);
        if herm > tol.equality {
            return Err(Error::NotHermitian(herm));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol.equality {
            return Err(Error::InvalidTrace(tr));
        }
        let min = self.min_eigenvalue();
        if min < -tol.psd_slack {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `⟨ψ|ρ|ψ⟩` for a normalised ket on the full register.
    pub fn overlap(&self, ket: &[Complex64]) -> Result<f64> {
        if ket.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: ket.len(),
            });
        }
        Ok(linalg::expectation(&self.matrix, ket).re)
    }

    /// Same matrix, new labels.
    pub fn relabel<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let labels = owned_labels(labels)?;
        if labels.len() != self.labels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.labels.len(),
                actual: labels.len(),
            });
        }
        Ok(DensityMatrix {
            labels,
            matrix: self.matrix.clone(),
        })
    }

    /// Bit positions of `labels`, in the order given.
    pub(crate) fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let pos = self
                .labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            if out.contains(&pos) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            out.push(pos);
        }
        Ok(out)
    }

    /// `self ⊗ other`, labels concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        let mut labels = self.labels.clone();
        for l in &other.labels {
            if labels.contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
            labels.push(l.clone());
        }
        Ok(DensityMatrix {
            labels,
            matrix: linalg::kron(&self.matrix, &other.matrix),
        })
    }

    /// Traces out every qubit not named in `keep`. The kept qubits retain
    /// their relative order from `self`.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let mut keep_pos = self.positions(keep)?;
        keep_pos.sort_unstable();
        let n = self.num_qubits();
        let traced: Vec<usize> = (0..n).filter(|p| !keep_pos.contains(p)).collect();

        let compose = |kept: usize, rest: usize| -> usize {
            let mut idx = 0usize;
            for (j, &p) in keep_pos.iter().enumerate() {
                if kept & (1 << (keep_pos.len() - 1 - j)) != 0 {
                    idx |= 1 << (n - 1 - p);
                }
            }
            for (j, &p) in traced.iter().enumerate() {
                if rest & (1 << (traced.len() - 1 - j)) != 0 {
                    idx |= 1 << (n - 1 - p);
                }
            }
            idx
        };

        let kd = 1usize << keep_pos.len();
        let td = 1usize << traced.len();
        let mut out = CMatrix::zeros(kd, kd);
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.matrix[(compose(i, t), compose(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        let labels = keep_pos.iter().map(|&p| self.labels[p].clone()).collect();
        Ok(DensityMatrix::from_parts(out, labels))
    }

    /// Partial transpose over the qubits in `subsystem`.
    pub fn partial_transpose<S: AsRef<str>>(&self, subsystem: &[S]) -> Result<CMatrix> {
        let pos = self.positions(subsystem)?;
        let n = self.num_qubits();
        let mask: usize = pos.iter().map(|&p| 1usize << (n - 1 - p)).sum();
        let dim = self.dim();
        Ok(CMatrix::from_fn(dim, dim, |i, j| {
            let ii = (i & !mask) | (j & mask);
            let jj = (j & !mask) | (i & mask);
            self.matrix[(ii, jj)]
        }))
    }

    /// `UρU†` with `u` acting on `targets` (first target = most significant
    /// bit of `u`'s index).
    pub fn apply_unitary<S: AsRef<str>>(&self, u: &CMatrix, targets: &[S]) -> Result<Self> {
        let pos = self.positions(targets)?;
        let expected = 1usize << pos.len();
        if u.nrows() != expected || u.ncols() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: u.nrows(),
            });
        }
        linalg::ensure_unitary(u)?;
        let full = embed(u, &pos, self.num_qubits());
        let out = &full * &self.matrix * full.adjoint();
        Ok(DensityMatrix::from_parts(out, self.labels.clone()))
    }

    /// `Σᵢ KᵢρKᵢ†` with the Kraus operators acting on `targets`.
    pub fn apply_channel<S: AsRef<str>>(&self, kraus: &KrausSet, targets: &[S]) -> Result<Self> {
        let pos = self.positions(targets)?;
        let expected = 1usize << pos.len();
        if kraus.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: kraus.dim(),
            });
        }
        let n = self.num_qubits();
        let dim = self.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for k in kraus.operators() {
            let full = embed(k, &pos, n);
            out += &full * &self.matrix * full.adjoint();
        }
        Ok(DensityMatrix::from_parts(out, self.labels.clone()))
    }

    /// Projective measurement of `targets` with the given projectors.
    ///
    /// The projectors must be orthogonal and sum to the identity. Post-states
    /// keep all qubits; use [`partial_trace`](Self::partial_trace) to discard
    /// the measured ones.
    pub fn measure<S: AsRef<str>>(
        &self,
        projectors: &[CMatrix],
        targets: &[S],
    ) -> Result<Vec<MeasurementOutcome>> {
        let pos = self.positions(targets)?;
        let sub = 1usize << pos.len();
        check_projectors(projectors, sub)?;

        let n = self.num_qubits();
        let mut outcomes = Vec::with_capacity(projectors.len());
        for (outcome, p) in projectors.iter().enumerate() {
            let full = embed(p, &pos, n);
            let branch = &full * &self.matrix * &full;
            let probability = linalg::trace(&branch).re.clamp(0.0, 1.0);
            let post_state = (probability > TOL.zero_probability).then(|| {
                DensityMatrix::from_parts(branch.unscale(probability), self.labels.clone())
            });
            outcomes.push(MeasurementOutcome {
                outcome,
                probability,
                post_state,
            });
        }
        Ok(outcomes)
    }

    /// Unnormalised branch `PρP` for a projector acting on `targets`.
    pub(crate) fn project<S: AsRef<str>>(
        &self,
        projector: &CMatrix,
        targets: &[S],
    ) -> Result<CMatrix> {
        let pos = self.positions(targets)?;
        let full = embed(projector, &pos, self.num_qubits());
        Ok(&full * &self.matrix * &full)
    }

    /// Von Neumann entropy in bits, `0·log 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        let s: f64 = self
            .eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-15)
            .map(|l| -l * l.log2())
            .sum();
        s.clamp(0.0, self.num_qubits() as f64)
    }
}

/// Free-function form of [`DensityMatrix::tensor`].
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    a.tensor(b)
}

fn check_projectors(projectors: &[CMatrix], dim: usize) -> Result<()> {
    if projectors.is_empty() {
        return Err(Error::IncompleteProjectors("no projectors given".into()));
    }
    let mut sum = CMatrix::zeros(dim, dim);
    for (i, p) in projectors.iter().enumerate() {
        if p.nrows() != dim || p.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: p.nrows(),
            });
        }
        let idem = linalg::max_abs_diff(&(p * p), p);
        if idem > TOL.operator || hermiticity_error(p) > TOL.operator {
            return Err(Error::IncompleteProjectors(format!(
                "element {i} is not an orthogonal projector"
            )));
        }
        sum += p;
    }
    let err = linalg::max_abs_diff(&sum, &linalg::identity(dim));
    if err > TOL.operator {
        return Err(Error::IncompleteProjectors(format!(
            "projectors sum to identity only within {err:e}"
        )));
    }
    Ok(())
}
