//! Exact continuous-time quantum-walk propagation.
//!
//! Propagators are built by Hermitian eigendecomposition,
//! `U(t) = V diag(exp(-i lambda t)) V†`, which keeps them unitary to roundoff
//! and exposes the spectrum for direct checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::basis::max_abs_diff;
use crate::chain::ChainDecomposition;
use crate::graph::{NodeId, WeightedGraph};

#[derive(Debug, Error)]
pub enum EvolveError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("dimension mismatch: graph has {graph} nodes, decomposition covers {decomposition}")]
    DimensionMismatch { graph: usize, decomposition: usize },
}

/// Eigendecomposition of a Hermitian Hamiltonian, reusable across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Propagator {
    pub fn new(g: &WeightedGraph) -> Self {
        Self::from_matrix(&g.hamiltonian())
    }

    pub fn from_matrix(h: &DMatrix<Complex64>) -> Self {
        assert_eq!(h.nrows(), h.ncols(), "Hamiltonian must be square");
        let eig = h.clone().symmetric_eigen();
        Propagator {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// The unitary `exp(-iHt)`. At `t = 0` this is the identity exactly.
    pub fn at(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        if t == 0.0 {
            return DMatrix::identity(n, n);
        }
        let phases = DVector::from_iterator(
            n,
            self.eigenvalues
                .iter()
                .map(|&e| (Complex64::new(0.0, -e * t)).exp()),
        );
        let mut scaled = self.eigenvectors.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[j];
        }
        &scaled * self.eigenvectors.adjoint()
    }

    /// Evolves a state for time `t`.
    pub fn evolve(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        if t == 0.0 {
            return psi.clone();
        }
        let coeffs = self.eigenvectors.adjoint() * psi;
        let n = self.dim();
        let rotated = DVector::from_iterator(
            n,
            coeffs
                .iter()
                .zip(self.eigenvalues.iter())
                .map(|(c, &e)| c * Complex64::new(0.0, -e * t).exp()),
        );
        &self.eigenvectors * rotated
    }

    /// `<target| exp(-iHt) |source>` for one time.
    pub fn amplitude(&self, source: usize, target: usize, t: f64) -> Complex64 {
        let mut psi = DVector::from_element(self.dim(), Complex64::new(0.0, 0.0));
        psi[source] = Complex64::new(1.0, 0.0);
        self.evolve(&psi, t)[target]
    }
}

/// The unitary `exp(-iHt)` for the graph Hamiltonian.
pub fn propagator(g: &WeightedGraph, t: f64) -> DMatrix<Complex64> {
    Propagator::new(g).at(t)
}

/// Sorted eigenvalues of a Hermitian matrix, ascending.
pub fn sorted_spectrum(h: &DMatrix<Complex64>) -> Vec<f64> {
    let eig = h.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Sampled transfer amplitudes `<target|U(t)|source>` over a time grid.
#[derive(Debug, Clone)]
pub struct WalkTrace {
    pub source: NodeId,
    pub target: NodeId,
    pub times: Vec<f64>,
    pub amplitudes: Vec<Complex64>,
}

impl WalkTrace {
    /// CSV rows `t,re,im,abs` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im,abs\n");
        for (t, amp) in self.times.iter().zip(&self.amplitudes) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                t,
                amp.re,
                amp.im,
                amp.norm()
            ));
        }
        out
    }
}

/// Trace of `<target|U(t)|source>` over the given times.
pub fn walk_trace(
    g: &WeightedGraph,
    source: &NodeId,
    target: &NodeId,
    times: &[f64],
) -> Result<WalkTrace, EvolveError> {
    let si = g
        .index_of(source)
        .ok_or_else(|| EvolveError::UnknownNode(source.as_str().to_owned()))?;
    let ti = g
        .index_of(target)
        .ok_or_else(|| EvolveError::UnknownNode(target.as_str().to_owned()))?;
    let prop = Propagator::new(g);
    let amplitudes = times.iter().map(|&t| prop.amplitude(si, ti, t)).collect();
    Ok(WalkTrace {
        source: source.clone(),
        target: target.clone(),
        times: times.to_vec(),
        amplitudes,
    })
}

/// Return-amplitude trace `<node|U(t)|node>`.
pub fn return_amplitude(
    g: &WeightedGraph,
    node: &NodeId,
    times: &[f64],
) -> Result<WalkTrace, EvolveError> {
    walk_trace(g, node, node, times)
}

/// Largest entrywise deviation of `U` from `sign * I`.
pub fn deviation_from_signed_identity(u: &DMatrix<Complex64>, sign: i32) -> f64 {
    let s = if sign < 0 { -1.0 } else { 1.0 };
    let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    max_abs_diff(u, &(id * Complex64::new(s, 0.0)))
}

/// Tests whether `U` is `+I` or `-I` within `tol`, returning the sign.
pub fn is_identity_up_to_sign(u: &DMatrix<Complex64>, tol: f64) -> (bool, i32) {
    let n = u.nrows();
    let id = DMatrix::<Complex64>::identity(n, n);
    if max_abs_diff(u, &id) < tol {
        (true, 1)
    } else if max_abs_diff(&(-u.clone()), &id) < tol {
        (true, -1)
    } else {
        (false, 0)
    }
}

/// Per-node outcome of a walk comparison.
#[derive(Debug, Clone)]
pub struct WalkComparison {
    /// Nodes that are fixed by the transform (identity rows), with the largest
    /// amplitude deviation observed for each across the time grid.
    pub per_node: Vec<(NodeId, f64)>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares walk amplitudes on the original graph against the decomposed
/// chains, for the chain start state and every original node the transform
/// leaves fixed (rows of the basis matrix that are unit vectors).
pub fn compare_walks(
    g: &WeightedGraph,
    decomposition: &ChainDecomposition,
    times: &[f64],
    tol: f64,
) -> Result<WalkComparison, EvolveError> {
    let transform = &decomposition.transform;
    if transform.ncols() != g.node_count() || transform.source_labels() != g.nodes() {
        return Err(EvolveError::DimensionMismatch {
            graph: g.node_count(),
            decomposition: transform.ncols(),
        });
    }
    let prop_orig = Propagator::new(g);
    let prop_chain = Propagator::from_matrix(&decomposition.block_matrix());

    // Rows that are (numerically exact) unit vectors pin a new state to an
    // original node; only those nodes have directly comparable amplitudes.
    let mut fixed: Vec<(usize, usize)> = Vec::new(); // (row, original column)
    for i in 0..transform.nrows() {
        let row = transform.matrix().row(i);
        let mut unit_col = None;
        let mut ok = true;
        for (j, z) in row.iter().enumerate() {
            let r = z.norm();
            if (r - 1.0).abs() <= 1e-12 {
                if (z - Complex64::new(1.0, 0.0)).norm() <= 1e-12 && unit_col.is_none() {
                    unit_col = Some(j);
                } else {
                    ok = false;
                }
            } else if r > 1e-12 {
                ok = false;
            }
        }
        if ok {
            if let Some(j) = unit_col {
                fixed.push((i, j));
            }
        }
    }

    // The start state is row 0 of the transform by construction.
    let start_state = transform.state(0);
    let mut per_node = Vec::new();
    let mut max_dev: f64 = 0.0;
    for &(row, col) in &fixed {
        let mut dev: f64 = 0.0;
        for &t in times {
            let evolved = prop_orig.evolve(&start_state, t);
            let orig = evolved[col];
            let chain = prop_chain.amplitude(0, row, t);
            dev = dev.max((orig - chain).norm());
        }
        per_node.push((g.nodes()[col].clone(), dev));
        max_dev = max_dev.max(dev);
    }
    Ok(WalkComparison {
        per_node,
        max_deviation: max_dev,
        pass: max_dev <= tol,
    })
}

/// 64 sample times on `[0, 10]` plus `t = pi`, the default verification grid.
pub fn default_time_grid() -> Vec<f64> {
    let mut times: Vec<f64> = (0..64).map(|i| 10.0 * i as f64 / 63.0).collect();
    times.push(std::f64::consts::PI);
    times
}
