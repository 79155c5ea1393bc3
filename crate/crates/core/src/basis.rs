//! Unitary basis maps produced by rewrites and chain decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::graph::NodeId;

/// A unitary map from an original node basis to a new set of basis states.
///
/// Row `i` holds `<new_i|old_j>` over the source columns, so the Hamiltonian
/// in the new basis is `T H T†` and state coordinates map as `psi_new = T psi`.
/// Each row carries the index of the chain it belongs to; local rewrites use a
/// single chain index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTransform {
    source_labels: Vec<NodeId>,
    matrix: DMatrix<Complex64>,
    chain_of: Vec<usize>,
}

impl BasisTransform {
    pub fn new(
        source_labels: Vec<NodeId>,
        matrix: DMatrix<Complex64>,
        chain_of: Vec<usize>,
    ) -> Self {
        assert_eq!(matrix.ncols(), source_labels.len());
        assert_eq!(matrix.nrows(), chain_of.len());
        BasisTransform {
            source_labels,
            matrix,
            chain_of,
        }
    }

    /// Identity transform over the given labels.
    pub fn identity(source_labels: Vec<NodeId>) -> Self {
        let n = source_labels.len();
        BasisTransform {
            source_labels,
            matrix: DMatrix::identity(n, n),
            chain_of: vec![0; n],
        }
    }

    pub fn source_labels(&self) -> &[NodeId] {
        &self.source_labels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn chain_of(&self) -> &[usize] {
        &self.chain_of
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// New basis state `i` as a coordinate vector over the source basis.
    pub fn state(&self, i: usize) -> DVector<Complex64> {
        DVector::from_iterator(self.ncols(), self.matrix.row(i).iter().map(|z| z.conj()))
    }

    /// Conjugates a Hamiltonian into the new basis: `T H T†`.
    pub fn apply(&self, h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.matrix * h * self.matrix.adjoint()
    }

    /// Coordinates of a source-basis vector in the new basis.
    pub fn apply_state(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        &self.matrix * psi
    }

    /// Largest deviation of `T T†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = &self.matrix * self.matrix.adjoint();
        let n = p.nrows();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                dev = dev.max((p[(i, j)] - expect).norm());
            }
        }
        dev
    }
}

/// Largest entrywise absolute difference between two matrices.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
