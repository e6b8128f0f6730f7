//! Small dense complex linear algebra helpers.
//!
//! Everything here works on [`CMatrix`], a heap-allocated complex matrix. The
//! largest matrices the crate ever touches are 16×16 (two copies of a qubit
//! pair), so all routines are plain dense loops and eigenvalues come from a
//! Hermitian solve.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::TOL;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a square matrix from row-major entries.
pub fn from_rows(dim: usize, entries: &[Complex64]) -> CMatrix {
    assert_eq!(entries.len(), dim * dim, "expected {} entries", dim * dim);
    CMatrix::from_row_slice(dim, dim, entries)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a sequence of matrices, left to right.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, m| kron(&acc, m))
}

/// Kronecker product of kets given as coefficient slices.
pub fn kron_kets(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// `|ψ⟩⟨ψ|` for a (not necessarily normalised) ket.
pub fn ket_projector(ket: &[Complex64]) -> CMatrix {
    let n = ket.len();
    CMatrix::from_fn(n, n, |i, j| ket[i] * ket[j].conj())
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation(m: &CMatrix, ket: &[Complex64]) -> Complex64 {
    let n = ket.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        if ket[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..n {
            acc += ket[i].conj() * m[(i, j)] * ket[j];
        }
    }
    acc
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise `|m - m†|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entrywise deviation of `u†u` from the identity.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn ensure_unitary(u: &CMatrix) -> Result<()> {
    let err = unitarity_error(u);
    if err > TOL.operator {
        return Err(Error::NotUnitary(err));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the Hermitian part is used; callers check Hermiticity where it matters.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = symmetrize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Trace norm `Tr √(m†m)`, computed as `Σ|λᵢ|` over the eigenvalues of a
/// Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let err = hermiticity_error(m);
    if err > TOL.equality {
        return Err(Error::NotHermitian(err));
    }
    Ok(hermitian_eigenvalues(m).iter().map(|l| l.abs()).sum())
}

/// Lifts `op`, acting on the qubits at `positions` (in that order), to the
/// full `n`-qubit space. Qubit 0 is the most significant bit of an index.
pub(crate) fn embed(op: &CMatrix, positions: &[usize], n: usize) -> CMatrix {
    let k = positions.len();
    debug_assert_eq!(op.nrows(), 1 << k);
    let dim = 1usize << n;
    let weights: Vec<usize> = positions.iter().map(|&p| 1usize << (n - 1 - p)).collect();
    let mask: usize = weights.iter().sum();

    let sub_index = |full: usize| -> usize {
        weights
            .iter()
            .fold(0usize, |acc, &w| (acc << 1) | usize::from(full & w != 0))
    };
    let scatter = |sub: usize| -> usize {
        weights.iter().enumerate().fold(0usize, |acc, (j, &w)| {
            if sub & (1 << (k - 1 - j)) != 0 {
                acc | w
            } else {
                acc
            }
        })
    };

    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let rest = col & !mask;
        let sc = sub_index(col);
        for sr in 0..(1usize << k) {
            let amp = op[(sr, sc)];
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            out[(rest | scatter(sr), col)] += amp;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> CMatrix {
        from_rows(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    #[test]
    fn embed_on_single_qubit_matches_kron() {
        let id = identity(2);
        let full = embed(&x(), &[1], 3);
        let expected = kron_all([&id, &x(), &id]);
        assert!(max_abs_diff(&full, &expected) < 1e-15);
    }

    #[test]
    fn embed_respects_target_order() {
        // CNOT with control on qubit 1 and target on qubit 0 of two qubits.
        let cnot = from_rows(
            4,
            &[
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(0., 0.),
                c(1., 0.),
                c(0., 0.),
                c(0., 0.),
                c(1., 0.),
                c(0., 0.),
            ],
        );
        let reversed = embed(&cnot, &[1, 0], 2);
        // |01> (control=1) -> |11>
        assert_eq!(reversed[(3, 1)], c(1., 0.));
        assert_eq!(reversed[(2, 2)], c(1., 0.));
    }

    #[test]
    fn trace_norm_of_diag() {
        let m = from_rows(2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        assert!((trace_norm(&m).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_rejects_non_hermitian() {
        let m = from_rows(2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian(_))));
    }
}
