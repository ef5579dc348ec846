//! Minimum spanning in-branchings of weighted directed graphs.
//!
//! The general solver is Chu-Liu/Edmonds with cycle contraction. For weight
//! matrices of the potential form `Q_ij = phi_ij - phi_ii` with symmetric
//! `phi`, the directed problem collapses to one undirected minimum spanning
//! tree plus picking the root with the smallest diagonal entry. This crate
//! implements both routes, a recognizer that recovers `phi` from raw
//! weights, classic MST algorithms, and seeded instance generators, so that
//! the fast path can be cross-validated against the general algorithm and an
//! exhaustive oracle.

pub mod error;
pub mod gen;
pub mod graph;
pub mod msa;
pub mod mst;
pub mod potential;

pub use error::Error;
pub use gen::{gen_general, gen_potential, perturb, GenSpec};
pub use graph::{
    branching_weight, connected_components, validate_branching, Arc, Diagnostic, DirectedGraph,
    Edge, InBranching, PotentialSystem, UndirectedGraph, UndirectedTree, VertexId, Violation,
    Weight,
};
pub use msa::{
    edmonds_best_root, edmonds_fixed_root, enumerate_optimal, RootSpec, ENUMERATION_CAP,
};
pub use mst::{kruskal, prim, DisjointSetForest};
pub use potential::{
    build_q, recover_phi, solve_fast, validate_phi, weight_by_formula, FastSolution,
    NotPotentialWitness, RecoveryResult, DEFAULT_RECOVERY_TOL,
};
