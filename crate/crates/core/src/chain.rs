//! General linearization of Hermitian graphs into one or more chains.
//!
//! Starting from a node (or a normalized superposition), each next basis state
//! is `H` applied to the previous one with projections onto all earlier states
//! subtracted and the remainder normalized. On a linear chain the Hamiltonian
//! is tridiagonal with real nonnegative hoppings; non-bipartite graphs pick up
//! real diagonal energies along the way. When a chain terminates before the
//! span is complete, the next chain is seeded from the lowest-index original
//! node with a residual component outside the accumulated span.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{max_abs_diff, BasisTransform};
use crate::evolve::Propagator;
use crate::graph::{NodeId, WeightedGraph};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("start state norm is {norm}, expected 1 within 1e-12")]
    StartNotNormalized { norm: f64 },
    #[error("start state refers to unknown node `{0}`")]
    StartNotInSpace(String),
    #[error("start state is empty")]
    EmptyStart,
}

/// One linear chain: hoppings between consecutive states and a real diagonal
/// energy per state. Bipartite sources yield all-zero diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub start_label: NodeId,
    pub hoppings: Vec<f64>,
    pub diagonals: Vec<f64>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }
}

/// A complete decomposition: chains, the unitary basis map (rows grouped by
/// chain), and the dimension of any residual subspace the seeding rule could
/// not reach (zero in practice).
#[derive(Debug, Clone)]
pub struct ChainDecomposition {
    pub chains: Vec<Chain>,
    pub transform: BasisTransform,
    pub residual_dim: usize,
}

impl ChainDecomposition {
    pub fn total_len(&self) -> usize {
        self.chains.iter().map(Chain::len).sum()
    }

    /// Block-diagonal matrix with one tridiagonal block per chain.
    pub fn block_matrix(&self) -> DMatrix<Complex64> {
        let n = self.total_len();
        let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let mut offset = 0;
        for chain in &self.chains {
            for (k, &d) in chain.diagonals.iter().enumerate() {
                h[(offset + k, offset + k)] = Complex64::new(d, 0.0);
            }
            for (k, &w) in chain.hoppings.iter().enumerate() {
                h[(offset + k, offset + k + 1)] = Complex64::new(w, 0.0);
                h[(offset + k + 1, offset + k)] = Complex64::new(w, 0.0);
            }
            offset += chain.len();
        }
        h
    }
}

/// A single Krylov chain along with the orthonormal states that realize it.
#[derive(Debug, Clone)]
pub struct KrylovOutcome {
    pub chain: Chain,
    pub states: Vec<DVector<Complex64>>,
}

fn project_out(v: &mut DVector<Complex64>, basis: &[DVector<Complex64>]) {
    // Two passes of classical Gram-Schmidt keep orthogonality at roundoff.
    for _ in 0..2 {
        for b in basis {
            let overlap = b.dotc(v);
            v.axpy(-overlap, b, Complex64::new(1.0, 0.0));
        }
    }
}

/// Runs the recursion from `start` (assumed normalized and orthogonal to
/// `prior`), orthogonalizing every new state against `prior` and the chain so
/// far. Terminates when the residual norm drops to `cutoff`.
fn krylov_from_vector(
    h: &DMatrix<Complex64>,
    start: DVector<Complex64>,
    prior: &[DVector<Complex64>],
    cutoff: f64,
    start_label: NodeId,
) -> KrylovOutcome {
    let mut states: Vec<DVector<Complex64>> = vec![start];
    let mut hoppings = Vec::new();
    let mut diagonals = Vec::new();
    loop {
        let current = states.last().unwrap();
        let mut w = h * current;
        diagonals.push(current.dotc(&w).re);
        project_out(&mut w, prior);
        project_out(&mut w, &states);
        let omega = w.norm();
        if omega <= cutoff {
            break;
        }
        w /= Complex64::new(omega, 0.0);
        hoppings.push(omega);
        states.push(w);
    }
    KrylovOutcome {
        chain: Chain {
            start_label,
            hoppings,
            diagonals,
        },
        states,
    }
}

fn effective_cutoff(g: &WeightedGraph, cutoff: Option<f64>) -> f64 {
    cutoff.unwrap_or_else(|| 1e-12 * g.max_abs_entry())
}

/// Builds the chain reachable from `start`, given as label-amplitude pairs.
/// The start must be normalized to 1e-12. `cutoff` defaults to 1e-12 times the
/// largest Hamiltonian entry.
pub fn krylov_chain(
    g: &WeightedGraph,
    start: &[(NodeId, Complex64)],
    cutoff: Option<f64>,
) -> Result<KrylovOutcome, ChainError> {
    if start.is_empty() {
        return Err(ChainError::EmptyStart);
    }
    let n = g.node_count();
    let mut v = DVector::from_element(n, Complex64::new(0.0, 0.0));
    for (node, amp) in start {
        let i = g
            .index_of(node)
            .ok_or_else(|| ChainError::StartNotInSpace(node.as_str().to_owned()))?;
        v[i] += amp;
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(ChainError::StartNotNormalized { norm });
    }
    let label = start
        .iter()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(node, _)| node.clone())
        .unwrap();
    let h = g.hamiltonian();
    Ok(krylov_from_vector(
        &h,
        v,
        &[],
        effective_cutoff(g, cutoff),
        label,
    ))
}

/// Decomposes the whole space into chains. The first chain starts at `start`;
/// each further chain is seeded from the lowest-index node whose component
/// orthogonal to the accumulated span is still above the cutoff.
pub fn full_decompose(
    g: &WeightedGraph,
    start: &NodeId,
    cutoff: Option<f64>,
) -> Result<ChainDecomposition, ChainError> {
    let n = g.node_count();
    let start_idx = g
        .index_of(start)
        .ok_or_else(|| ChainError::StartNotInSpace(start.as_str().to_owned()))?;
    let h = g.hamiltonian();
    let cutoff = effective_cutoff(g, cutoff);
    // Seed residuals are dimensionless while the hopping cutoff scales with H.
    let seed_cutoff = cutoff.max(1e-13);

    let mut all_states: Vec<DVector<Complex64>> = Vec::new();
    let mut chains: Vec<Chain> = Vec::new();
    let mut chain_of: Vec<usize> = Vec::new();

    let mut e_start = DVector::from_element(n, Complex64::new(0.0, 0.0));
    e_start[start_idx] = Complex64::new(1.0, 0.0);
    let mut seed = Some((e_start, start.clone()));

    while let Some((vector, label)) = seed.take() {
        let outcome = krylov_from_vector(&h, vector, &all_states, cutoff, label);
        let idx = chains.len();
        chain_of.extend(std::iter::repeat_n(idx, outcome.chain.len()));
        chains.push(outcome.chain);
        all_states.extend(outcome.states);

        if all_states.len() >= n {
            break;
        }
        for j in 0..n {
            let mut r = DVector::from_element(n, Complex64::new(0.0, 0.0));
            r[j] = Complex64::new(1.0, 0.0);
            project_out(&mut r, &all_states);
            let norm = r.norm();
            if norm > seed_cutoff {
                r /= Complex64::new(norm, 0.0);
                seed = Some((r, g.nodes()[j].clone()));
                break;
            }
        }
    }

    let rows = all_states.len();
    let mut t = DMatrix::from_element(rows, n, Complex64::new(0.0, 0.0));
    for (i, state) in all_states.iter().enumerate() {
        for j in 0..n {
            t[(i, j)] = state[j].conj();
        }
    }
    Ok(ChainDecomposition {
        chains,
        transform: BasisTransform::new(g.nodes().to_vec(), t, chain_of),
        residual_dim: n - rows,
    })
}

/// Outcome of checking a decomposition against its source graph.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Largest deviation of `T T†` from the identity.
    pub unitarity_dev: f64,
    /// Largest entrywise deviation of `T H T†` from the block-tridiagonal
    /// matrix assembled from the chains.
    pub congruence_dev: f64,
    /// Largest return-amplitude deviation between the original graph and the
    /// chain representation across the time grid.
    pub walk_dev: f64,
    pub tol: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Checks unitary congruence, block-tridiagonality, and return-amplitude
/// equality for a decomposition of `g`. Failures are carried in the report.
pub fn verify_chain(
    g: &WeightedGraph,
    decomposition: &ChainDecomposition,
    times: &[f64],
    tol: f64,
) -> VerifyReport {
    let mut notes = Vec::new();
    let transform = &decomposition.transform;
    if transform.ncols() != g.node_count() {
        return VerifyReport {
            unitarity_dev: f64::INFINITY,
            congruence_dev: f64::INFINITY,
            walk_dev: f64::INFINITY,
            tol,
            pass: false,
            notes: vec![format!(
                "decomposition covers {} columns but the graph has {} nodes",
                transform.ncols(),
                g.node_count()
            )],
        };
    }
    let unitarity_dev = transform.unitarity_deviation();
    let h = g.hamiltonian();
    let congruence_dev = max_abs_diff(&transform.apply(&h), &decomposition.block_matrix());

    let prop_orig = Propagator::from_matrix(&h);
    let prop_chain = Propagator::from_matrix(&decomposition.block_matrix());
    let start_state = transform.state(0);
    let mut walk_dev: f64 = 0.0;
    for &t in times {
        let evolved = prop_orig.evolve(&start_state, t);
        let orig = start_state.dotc(&evolved);
        let chain = prop_chain.amplitude(0, 0, t);
        walk_dev = walk_dev.max((orig - chain).norm());
    }
    if decomposition.residual_dim > 0 {
        notes.push(format!(
            "residual subspace of dimension {}",
            decomposition.residual_dim
        ));
    }
    let pass = unitarity_dev <= tol && congruence_dev <= tol && walk_dev <= tol;
    VerifyReport {
        unitarity_dev,
        congruence_dev,
        walk_dev,
        tol,
        pass,
        notes,
    }
}

#[derive(Serialize, Deserialize)]
struct ChainDoc {
    start: String,
    hoppings: Vec<f64>,
    diagonals: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionDoc {
    chains: Vec<ChainDoc>,
    basis: Vec<[f64; 2]>,
    labels: Vec<String>,
}

/// Serializes a decomposition: chains, then the basis matrix row-major as
/// `[re, im]` pairs over the labeled source columns.
pub fn decomposition_to_json(d: &ChainDecomposition) -> String {
    let doc = DecompositionDoc {
        chains: d
            .chains
            .iter()
            .map(|c| ChainDoc {
                start: c.start_label.as_str().to_owned(),
                hoppings: c.hoppings.clone(),
                diagonals: c.diagonals.clone(),
            })
            .collect(),
        basis: d.transform.matrix().iter_rows_major(),
        labels: d
            .transform
            .source_labels()
            .iter()
            .map(|n| n.as_str().to_owned())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("decomposition serialization cannot fail")
}

trait RowMajorPairs {
    fn iter_rows_major(&self) -> Vec<[f64; 2]>;
}

impl RowMajorPairs for DMatrix<Complex64> {
    fn iter_rows_major(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let z = self[(i, j)];
                out.push([z.re, z.im]);
            }
        }
        out
    }
}

/// Parses a decomposition document back into memory.
pub fn json_to_decomposition(text: &str) -> Result<ChainDecomposition, serde_json::Error> {
    let doc: DecompositionDoc = serde_json::from_str(text)?;
    let ncols = doc.labels.len();
    let rows: usize = doc.chains.iter().map(|c| c.diagonals.len()).sum();
    let mut matrix = DMatrix::from_element(rows, ncols, Complex64::new(0.0, 0.0));
    for (k, pair) in doc.basis.iter().enumerate().take(rows * ncols) {
        matrix[(k / ncols, k % ncols)] = Complex64::new(pair[0], pair[1]);
    }
    let mut chain_of = Vec::with_capacity(rows);
    for (idx, c) in doc.chains.iter().enumerate() {
        chain_of.extend(std::iter::repeat_n(idx, c.diagonals.len()));
    }
    let labels: Vec<NodeId> = doc.labels.iter().map(|s| NodeId::from(s.clone())).collect();
    Ok(ChainDecomposition {
        chains: doc
            .chains
            .into_iter()
            .map(|c| Chain {
                start_label: NodeId::from(c.start),
                hoppings: c.hoppings,
                diagonals: c.diagonals,
            })
            .collect(),
        residual_dim: ncols - rows,
        transform: BasisTransform::new(labels, matrix, chain_of),
    })
}
