//! Shared fixtures and independent oracles for the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use walkchain_core::{build_graph, Edge, NodeId, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform sample from the complex unit disk.
pub fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, theta)
}

/// Like `unit_disk`, but keeps the magnitude away from zero.
pub fn unit_disk_nonzero(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = 0.2 + 0.8 * rng.gen::<f64>();
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, theta)
}

/// Random graph on `n` nodes with edge probability `p` and amplitudes in the
/// unit disk. Diagonals appear with probability `diag_p` per node.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, diag_p: f64) -> WeightedGraph {
    let nodes: Vec<NodeId> = (0..n).map(|i| NodeId::new(format!("n{i}"))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push(Edge::new(
                    nodes[i].clone(),
                    nodes[j].clone(),
                    unit_disk(rng),
                ));
            }
        }
    }
    let mut diag = Vec::new();
    for node in &nodes {
        if rng.gen::<f64>() < diag_p {
            diag.push((node.clone(), rng.gen_range(-1.0..1.0)));
        }
    }
    build_graph(nodes, edges, diag).unwrap()
}

/// Random bipartite graph: parts of size `na` and `nb`, cross edges only.
pub fn random_bipartite(rng: &mut ChaCha8Rng, na: usize, nb: usize, p: f64) -> WeightedGraph {
    let nodes: Vec<NodeId> = (0..na + nb).map(|i| NodeId::new(format!("n{i}"))).collect();
    let mut edges = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            if rng.gen::<f64>() < p {
                edges.push(Edge::new(
                    nodes[i].clone(),
                    nodes[na + j].clone(),
                    unit_disk(rng),
                ));
            }
        }
    }
    build_graph(nodes, edges, vec![]).unwrap()
}

/// Path graph with the given real hoppings and optional diagonals, labeled
/// `p0, p1, ...`.
pub fn chain_graph(hoppings: &[Complex64], diagonals: &[f64]) -> WeightedGraph {
    let n = hoppings.len() + 1;
    let nodes: Vec<NodeId> = (0..n).map(|i| NodeId::new(format!("p{i}"))).collect();
    let edges = hoppings
        .iter()
        .enumerate()
        .map(|(i, &w)| Edge::new(nodes[i].clone(), nodes[i + 1].clone(), w))
        .collect();
    let diag = diagonals
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0.0)
        .map(|(i, &d)| (nodes[i].clone(), d))
        .collect();
    build_graph(nodes, edges, diag).unwrap()
}

/// Exhaustive two-coloring oracle: tries every assignment on up to 16 nodes.
pub fn brute_force_bipartite(g: &WeightedGraph) -> bool {
    let n = g.node_count();
    assert!(n <= 16, "brute force oracle is exponential");
    let pairs: Vec<(usize, usize)> = {
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if g.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    };
    'outer: for mask in 0u32..(1 << n) {
        for &(i, j) in &pairs {
            if (mask >> i) & 1 == (mask >> j) & 1 {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

/// Non-normalized chain recursion, independent of the library path:
/// `y_1 = e_start`, `y_{i+1} = H y_i - (N_i^2 / N_{i-1}^2) y_{i-1}`, and the
/// hoppings are the norm ratios `N_{j+1}/N_j`. Valid for graphs that generate
/// no diagonal terms (bipartite sources).
pub fn gamma_recursion_hoppings(h: &DMatrix<Complex64>, start: usize) -> Vec<f64> {
    let n = h.nrows();
    let mut y_prev: Option<DVector<Complex64>> = None;
    let mut y_curr = DVector::from_element(n, c64(0.0, 0.0));
    y_curr[start] = c64(1.0, 0.0);
    let mut norms = vec![1.0f64];
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let mut hoppings = Vec::new();
    for _ in 0..n {
        let mut next = h * &y_curr;
        if let Some(prev) = &y_prev {
            let ratio = norms[norms.len() - 1] / norms[norms.len() - 2];
            next -= prev * c64(ratio * ratio, 0.0);
        }
        let norm = next.norm();
        if norm <= 1e-10 * scale * norms[norms.len() - 1] {
            break;
        }
        norms.push(norm);
        hoppings.push(norms[norms.len() - 1] / norms[norms.len() - 2]);
        y_prev = Some(y_curr);
        y_curr = next;
    }
    hoppings
}

/// Reads the hopping magnitudes of a path graph by walking from `start`
/// (which must have exactly one neighbor) to the far end.
pub fn path_hoppings_from(g: &WeightedGraph, start: &NodeId) -> Vec<f64> {
    let mut prev = usize::MAX;
    let mut here = g.index_of(start).expect("start exists");
    let mut out = Vec::new();
    loop {
        let next: Vec<usize> = g
            .neighbors(here)
            .into_iter()
            .filter(|&x| x != prev)
            .collect();
        match next.len() {
            0 => return out,
            1 => {
                out.push(g.amp(here, next[0]).norm());
                prev = here;
                here = next[0];
            }
            _ => panic!("graph is not a path at node {}", g.nodes()[here]),
        }
    }
}
