//! Reduction of complex-weighted Hamiltonian graphs to linear chain graphs.
//!
//! A graph with complex Hermitian hopping amplitudes supports a continuous-time
//! quantum walk generated by `U(t) = exp(-iHt)`, where `H` is the weighted
//! adjacency matrix. This crate implements local basis rotations that rewrite
//! branching and looped subgraphs into equivalent linear chains, a general
//! Krylov-style linearization of arbitrary Hermitian graphs, and the
//! construction of cube-graph Hamiltonians whose walk returns exactly,
//! `U(tau) = ±1`.
//!
//! The main entry points:
//!
//! * [`graph`] — validated complex-weighted graphs and their JSON form,
//! * [`transform`] — the named local rewrites and their equivalence conditions,
//! * [`chain`] — full linearization into one or more chains,
//! * [`cube`] — cube splitting and the return-walk phase solution,
//! * [`evolve`] — exact propagators, walk traces, and gate checks.

pub mod basis;
pub mod chain;
pub mod cube;
pub mod evolve;
pub mod graph;
pub mod transform;

pub use basis::BasisTransform;
pub use chain::{
    decomposition_to_json, full_decompose, json_to_decomposition, krylov_chain, verify_chain,
    Chain, ChainDecomposition, ChainError, KrylovOutcome, VerifyReport,
};
pub use cube::{
    build_cube, check_split_conditions, solve_return_walk, split_cube, CubeAmplitudes, CubeError,
    CubePhases, CubeSolution, PhaseSystem, SplitCheck,
};
pub use evolve::{
    compare_walks, default_time_grid, deviation_from_signed_identity, is_identity_up_to_sign,
    propagator, return_amplitude,
    sorted_spectrum, walk_trace, EvolveError, Propagator, WalkComparison, WalkTrace,
};
pub use graph::{
    bipartite_partition, build_graph, graph_to_json, json_to_graph, Bipartition, Edge, GraphError,
    NodeId, WeightedGraph,
};
pub use transform::{
    branches_to_fourloop, check_condition, fourloop_to_branches, reduce_three_loop,
    rhomboid_expand, rhomboid_reduce, shift_one_segment_branch, sixloop_reduce, ConditionInput,
    ConditionReport, RewriteResult, SiteSelector, TransformError,
};
