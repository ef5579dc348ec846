//! Error type shared across the solver modules.

use crate::graph::Diagnostic;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A validator rejected the instance; the diagnostic lists every violated
    /// rule with a witness.
    #[error("invalid instance: {0}")]
    Invalid(Diagnostic),

    /// The undirected graph is not connected; the payload is its component
    /// partition.
    #[error("graph is not connected: {} components", components.len())]
    Disconnected { components: Vec<Vec<usize>> },

    /// Prim ran out of frontier before spanning the graph.
    #[error("vertices {missing:?} are not reachable from the start vertex")]
    Unreached { missing: Vec<usize> },

    /// Some vertices have no directed path to the requested root.
    #[error("vertices {stranded:?} cannot reach root {root}")]
    Infeasible { root: usize, stranded: Vec<usize> },

    /// No vertex can serve as the root of a spanning in-branching.
    #[error("no feasible root exists")]
    NoFeasibleRoot,

    /// Exhaustive enumeration refused an oversized instance.
    #[error("exhaustive search is capped at {cap} vertices, got {n}")]
    TooLarge { n: usize, cap: usize },

    /// A generator or perturbation was configured with unusable parameters.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The arc named by a perturbation does not exist in the graph.
    #[error("arc ({0}, {1}) is not present")]
    MissingArc(usize, usize),
}
