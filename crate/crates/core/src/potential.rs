//! Potential weight matrices: building the directed weights from a
//! potential system, recognizing and recovering potentiality from raw
//! weights, and the fast solver that answers the directed problem with one
//! undirected MST plus root selection.

use std::collections::{HashSet, VecDeque};

use crate::error::Error;
use crate::graph::{Diagnostic, DirectedGraph, InBranching, PotentialSystem, VertexId, Weight};
use crate::mst::kruskal;

/// Default relative tolerance for the consistency checks in [`recover_phi`].
pub const DEFAULT_RECOVERY_TOL: f64 = 1e-9;

/// Checks the diagonal-dominance conditions: for every present edge
/// `{i, k}`, both `phi_ii < phi_ik` and `phi_kk < phi_ik` must hold
/// strictly. Each failing side yields one `diagonal-dominance` violation
/// carrying the vertex pair and values.
pub fn validate_phi(phi: &PotentialSystem) -> Diagnostic {
    let d = phi.diagonal();
    let mut diag = Diagnostic::default();
    for e in phi.support().edges() {
        if d[e.u] >= e.weight {
            diag.push(
                "diagonal-dominance",
                format!(
                    "({}, {}): diagonal {} >= off-diagonal {}",
                    e.u, e.v, d[e.u], e.weight
                ),
            );
        }
        if d[e.v] >= e.weight {
            diag.push(
                "diagonal-dominance",
                format!(
                    "({}, {}): diagonal {} >= off-diagonal {}",
                    e.v, e.u, d[e.v], e.weight
                ),
            );
        }
    }
    diag
}

/// Directed weights from a potential system: every edge `{i, j}` emits the
/// arc pair `(i, j)` with weight `phi_ij - phi_ii` and `(j, i)` with weight
/// `phi_ij - phi_jj`. All emitted weights are strictly positive because the
/// system must pass [`validate_phi`] first.
pub fn build_q(phi: &PotentialSystem) -> Result<DirectedGraph, Diagnostic> {
    let check = validate_phi(phi);
    if !check.ok() {
        return Err(check);
    }
    let d = phi.diagonal();
    let arcs = phi
        .support()
        .edges()
        .iter()
        .flat_map(|e| [(e.u, e.v, e.weight - d[e.u]), (e.v, e.u, e.weight - d[e.v])]);
    Ok(DirectedGraph::new(phi.vertex_count(), arcs)
        .expect("a valid potential system yields a simple digraph"))
}

/// Why a weight matrix is not potential.
#[derive(Debug, Clone, PartialEq)]
pub enum NotPotentialWitness {
    /// `(tail, head)` is present but the reverse arc is missing.
    AsymmetricSupport { tail: VertexId, head: VertexId },
    /// An arc weight is not strictly positive.
    NonPositive {
        tail: VertexId,
        head: VertexId,
        weight: Weight,
    },
    /// A closed walk whose diagonal-difference constraints contradict each
    /// other; `mismatch` is the accumulated inconsistency.
    InconsistentCycle { cycle: Vec<VertexId>, mismatch: f64 },
}

/// Outcome of [`recover_phi`].
#[derive(Debug, Clone, PartialEq)]
pub enum RecoveryResult {
    /// The weights are potential. Diagonals are normalized to minimum 0
    /// within each listed component; the component partition marks the
    /// remaining freedom (any per-component constant shift reproduces the
    /// same weights).
    Potential {
        phi: PotentialSystem,
        components: Vec<Vec<VertexId>>,
    },
    NotPotential {
        witness: NotPotentialWitness,
    },
}

/// Decides whether `q` is a potential weight matrix and recovers the system
/// when it is.
///
/// `q` is potential exactly when (a) its arc support is symmetric, (b) every
/// weight is strictly positive, and (c) the diagonal differences are
/// consistent: writing `d_i` for the diagonal, the construction forces
/// `d_i - d_j = Q_ji - Q_ij` on every arc pair. Diagonals are assigned along
/// a BFS tree from each component's smallest vertex and every remaining pair
/// is checked against the implied difference within
/// `tol * max(1, |Q_ij|, |Q_ji|)`.
pub fn recover_phi(q: &DirectedGraph, tol: f64) -> RecoveryResult {
    let n = q.vertex_count();
    for a in q.arcs() {
        if q.arc_weight(a.head, a.tail).is_none() {
            return RecoveryResult::NotPotential {
                witness: NotPotentialWitness::AsymmetricSupport {
                    tail: a.tail,
                    head: a.head,
                },
            };
        }
    }
    for a in q.arcs() {
        if a.weight <= 0.0 {
            return RecoveryResult::NotPotential {
                witness: NotPotentialWitness::NonPositive {
                    tail: a.tail,
                    head: a.head,
                    weight: a.weight,
                },
            };
        }
    }

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in q.arcs() {
        if a.tail < a.head {
            adj[a.tail].push(a.head);
            adj[a.head].push(a.tail);
            pairs.push((a.tail, a.head));
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut d = vec![0.0f64; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut comp_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        comp_of[start] = c;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &to in &adj[v] {
                if comp_of[to] != usize::MAX {
                    continue;
                }
                comp_of[to] = c;
                parent[to] = Some(v);
                let q_to_v = q.arc_weight(to, v).unwrap();
                let q_v_to = q.arc_weight(v, to).unwrap();
                // d_v - d_to = Q(to,v) - Q(v,to)
                d[to] = d[v] - q_to_v + q_v_to;
                comp.push(to);
                queue.push_back(to);
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }

    for &(u, v) in &pairs {
        let q_uv = q.arc_weight(u, v).unwrap();
        let q_vu = q.arc_weight(v, u).unwrap();
        let mismatch = (d[u] - d[v]) - (q_vu - q_uv);
        let scale = 1.0f64.max(q_uv.abs()).max(q_vu.abs());
        if mismatch.abs() > tol * scale {
            return RecoveryResult::NotPotential {
                witness: NotPotentialWitness::InconsistentCycle {
                    cycle: tree_cycle(&parent, u, v),
                    mismatch,
                },
            };
        }
    }

    for comp in &components {
        let min = comp.iter().map(|&v| d[v]).fold(f64::INFINITY, f64::min);
        for &v in comp {
            d[v] -= min;
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .iter()
        .map(|&(u, v)| (u, v, q.arc_weight(u, v).unwrap() + d[u]))
        .collect();
    let phi = PotentialSystem::new(d, edges).expect("recovered system is structurally valid");
    RecoveryResult::Potential { phi, components }
}

// The BFS-tree path u -> ... -> lca -> ... -> v; together with the direct
// pair {v, u} it is the closed walk carrying the contradiction.
fn tree_cycle(parent: &[Option<usize>], u: usize, v: usize) -> Vec<usize> {
    let mut up_u = vec![u];
    let mut x = u;
    while let Some(p) = parent[x] {
        up_u.push(p);
        x = p;
    }
    let mut up_v = vec![v];
    let mut x = v;
    while let Some(p) = parent[x] {
        up_v.push(p);
        x = p;
    }
    let on_u: HashSet<usize> = up_u.iter().copied().collect();
    let lca_pos = up_v.iter().position(|x| on_u.contains(x)).unwrap();
    let lca = up_v[lca_pos];
    let mut cycle: Vec<usize> = up_u.iter().take_while(|&&x| x != lca).copied().collect();
    cycle.push(lca);
    cycle.extend(up_v[..lca_pos].iter().rev().copied());
    cycle
}

/// Solution of the fast path.
#[derive(Debug, Clone, PartialEq)]
pub struct FastSolution {
    pub root: VertexId,
    pub branching: InBranching,
    pub weight: Weight,
}

/// Solves the directed problem for a valid, connected potential system
/// without ever materializing the directed graph: one undirected MST of the
/// support, rooted at the vertex with the smallest diagonal (ties to the
/// smallest index), every tree edge oriented toward that root and weighted
/// by the difference construction.
pub fn solve_fast(phi: &PotentialSystem) -> Result<FastSolution, Error> {
    let check = validate_phi(phi);
    if !check.ok() {
        return Err(Error::Invalid(check));
    }
    let tree = kruskal(phi.support())?;
    let d = phi.diagonal();
    let root = argmin_diagonal(d);

    let n = phi.vertex_count();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in tree.edges() {
        adj[e.u].push((e.v, e.weight));
        adj[e.v].push((e.u, e.weight));
    }
    let mut arcs: Vec<(usize, usize, f64)> = Vec::with_capacity(n - 1);
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(to, w) in &adj[v] {
            if seen[to] {
                continue;
            }
            seen[to] = true;
            arcs.push((to, v, w - d[to]));
            queue.push_back(to);
        }
    }
    arcs.sort_by_key(|a| a.0);
    let branching = InBranching::new(root, arcs);
    let weight = branching.total_weight();
    Ok(FastSolution {
        root,
        branching,
        weight,
    })
}

/// Closed-form optimum for a valid, connected potential system: the MST
/// weight of the support, minus the sum of all diagonal entries, plus the
/// smallest diagonal entry.
pub fn weight_by_formula(phi: &PotentialSystem) -> Result<Weight, Error> {
    let check = validate_phi(phi);
    if !check.ok() {
        return Err(Error::Invalid(check));
    }
    let tree = kruskal(phi.support())?;
    let d = phi.diagonal();
    let sum: f64 = d.iter().sum();
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(tree.total_weight() - sum + min)
}

fn argmin_diagonal(d: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in d.iter().enumerate().skip(1) {
        if x < d[best] {
            best = i;
        }
    }
    best
}
