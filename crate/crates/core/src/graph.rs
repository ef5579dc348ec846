//! Core graph representations, solution objects, and the validity and weight
//! checks shared by every solver.

use std::collections::HashSet;
use std::fmt;

/// Dense 0-based vertex index in `[0, n)` for the owning graph.
pub type VertexId = usize;

/// Arc or edge weight. Always finite inside a constructed graph; the "absent"
/// marker (`*`) exists only in the instance file format.
pub type Weight = f64;

/// A weighted directed arc `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
    pub weight: Weight,
}

/// A weighted undirected edge, stored normalized with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

/// One violated validity rule together with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: String,
}

/// Structured verdict returned by every validator and constructor check.
///
/// `ok()` holds exactly when no rule was violated; each entry names the rule
/// and carries a witness (the offending vertex pair, arc, or values).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostic {
    violations: Vec<Violation>,
}

impl Diagnostic {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    /// True when some violation cites the given rule.
    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub(crate) fn push(&mut self, rule: &'static str, witness: String) {
        self.violations.push(Violation { rule, witness });
    }

    pub(crate) fn absorb(&mut self, other: Diagnostic) {
        self.violations.extend(other.violations);
    }

    pub(crate) fn into_result<T>(self, value: T) -> Result<T, Diagnostic> {
        if self.ok() {
            Ok(value)
        } else {
            Err(self)
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", v.rule, v.witness)?;
        }
        Ok(())
    }
}

/// A simple weighted digraph: no self-loops, at most one arc per ordered
/// pair, all weights finite. Arcs are kept sorted by `(tail, head)`, so two
/// graphs compare equal exactly when they hold the same arc set.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl DirectedGraph {
    pub fn new(
        n: usize,
        arcs: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, Diagnostic> {
        let mut diag = Diagnostic::default();
        if n == 0 {
            diag.push("vertex-count", "graph needs at least one vertex".into());
        }
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (tail, head, weight) in arcs {
            if tail >= n || head >= n {
                diag.push(
                    "vertex-range",
                    format!("arc ({tail}, {head}) references a vertex outside [0, {n})"),
                );
                continue;
            }
            if tail == head {
                diag.push("self-loop", format!("arc ({tail}, {tail})"));
                continue;
            }
            if !weight.is_finite() {
                diag.push(
                    "non-finite-weight",
                    format!("arc ({tail}, {head}) has weight {weight}"),
                );
                continue;
            }
            if !seen.insert((tail, head)) {
                diag.push(
                    "duplicate-arc",
                    format!("arc ({tail}, {head}) appears twice"),
                );
                continue;
            }
            list.push(Arc { tail, head, weight });
        }
        list.sort_by_key(|a| (a.tail, a.head));
        diag.into_result(Self { n, arcs: list })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// All arcs, sorted by `(tail, head)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_weight(&self, tail: VertexId, head: VertexId) -> Option<Weight> {
        self.arcs
            .binary_search_by(|a| (a.tail, a.head).cmp(&(tail, head)))
            .ok()
            .map(|i| self.arcs[i].weight)
    }

    /// The same graph with every arc reversed.
    pub fn transposed(&self) -> DirectedGraph {
        let mut arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| Arc {
                tail: a.head,
                head: a.tail,
                weight: a.weight,
            })
            .collect();
        arcs.sort_by_key(|a| (a.tail, a.head));
        DirectedGraph { n: self.n, arcs }
    }
}

/// A simple weighted undirected graph: no self-loops, at most one edge per
/// unordered pair, all weights finite. Edges are stored with `u < v` and
/// sorted, so equality is edge-set equality.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl UndirectedGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, Diagnostic> {
        let mut diag = Diagnostic::default();
        if n == 0 {
            diag.push("vertex-count", "graph needs at least one vertex".into());
        }
        let mut list = Vec::new();
        let mut seen = HashSet::new();
        for (a, b, weight) in edges {
            if a >= n || b >= n {
                diag.push(
                    "vertex-range",
                    format!("edge {{{a}, {b}}} references a vertex outside [0, {n})"),
                );
                continue;
            }
            if a == b {
                diag.push("self-loop", format!("edge {{{a}, {a}}}"));
                continue;
            }
            if !weight.is_finite() {
                diag.push(
                    "non-finite-weight",
                    format!("edge {{{a}, {b}}} has weight {weight}"),
                );
                continue;
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                diag.push("duplicate-edge", format!("edge {{{u}, {v}}} appears twice"));
                continue;
            }
            list.push(Edge { u, v, weight });
        }
        list.sort_by_key(|a| (a.u, a.v));
        diag.into_result(Self { n, edges: list })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// All edges, normalized `u < v` and sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_weight(&self, a: VertexId, b: VertexId) -> Option<Weight> {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(u, v)))
            .ok()
            .map(|i| self.edges[i].weight)
    }

    /// Neighbor lists sorted by neighbor index.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, Weight)>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        for list in &mut adj {
            list.sort_by_key(|a| a.0);
        }
        adj
    }
}

/// Symmetric off-diagonal weights plus one diagonal value per vertex: the
/// undirected side of the directed-to-undirected reduction.
///
/// Construction only enforces structural rules (finite values, simple
/// support); the diagonal-dominance conditions are checked separately by
/// `potential::validate_phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSystem {
    diag: Vec<Weight>,
    support: UndirectedGraph,
}

impl PotentialSystem {
    pub fn new(
        diag: Vec<Weight>,
        offdiag: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Result<Self, Diagnostic> {
        let mut check = Diagnostic::default();
        for (i, d) in diag.iter().enumerate() {
            if !d.is_finite() {
                check.push("non-finite-weight", format!("diagonal entry {i} is {d}"));
            }
        }
        match UndirectedGraph::new(diag.len(), offdiag) {
            Ok(support) => check.into_result(Self { diag, support }),
            Err(diag_graph) => {
                check.absorb(diag_graph);
                Err(check)
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.diag.len()
    }

    /// Per-vertex diagonal values.
    pub fn diagonal(&self) -> &[Weight] {
        &self.diag
    }

    /// The off-diagonal weights as an undirected graph.
    pub fn support(&self) -> &UndirectedGraph {
        &self.support
    }

    pub fn off_diagonal(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        self.support.edge_weight(u, v)
    }
}

/// A root plus, for every non-root vertex, one outgoing arc.
///
/// The shape is deliberately not enforced at construction so that
/// [`validate_branching`] can report exactly which invariant an arbitrary
/// candidate violates. Solver outputs always validate cleanly.
#[derive(Debug, Clone, PartialEq)]
pub struct InBranching {
    pub root: VertexId,
    pub arcs: Vec<Arc>,
}

impl InBranching {
    pub fn new(
        root: VertexId,
        arcs: impl IntoIterator<Item = (VertexId, VertexId, Weight)>,
    ) -> Self {
        Self {
            root,
            arcs: arcs
                .into_iter()
                .map(|(tail, head, weight)| Arc { tail, head, weight })
                .collect(),
        }
    }

    /// The stored outgoing arc of `v`, if any.
    pub fn parent_of(&self, v: VertexId) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.tail == v)
    }

    /// Raw sum of the stored arc weights, without validation.
    pub fn total_weight(&self) -> Weight {
        self.arcs.iter().map(|a| a.weight).sum()
    }
}

/// A spanning tree of an undirected graph. Only the MST algorithms construct
/// these, so the spanning/acyclic invariants hold by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UndirectedTree {
    n: usize,
    edges: Vec<Edge>,
}

impl UndirectedTree {
    pub(crate) fn new(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert_eq!(edges.len() + 1, n);
        Self { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn total_weight(&self) -> Weight {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Sum of the branching's arc weights (zero for a single vertex), after
/// checking it is a valid in-branching of `g`.
pub fn branching_weight(g: &DirectedGraph, b: &InBranching) -> Result<Weight, Diagnostic> {
    validate_branching(g, b).into_result(b.total_weight())
}

/// Checks every in-branching invariant of `b` against `g`.
///
/// Rules reported: `root-range`, `arc-count`, `vertex-range`,
/// `arc-not-in-graph`, `arc-weight-mismatch`, `root-out-degree`,
/// `out-degree`, and `unreachable-root`.
pub fn validate_branching(g: &DirectedGraph, b: &InBranching) -> Diagnostic {
    let n = g.vertex_count();
    let mut diag = Diagnostic::default();
    if b.root >= n {
        diag.push("root-range", format!("root {} outside [0, {n})", b.root));
        return diag;
    }
    if b.arcs.len() != n - 1 {
        diag.push(
            "arc-count",
            format!("{} arcs stored, expected {}", b.arcs.len(), n - 1),
        );
    }
    let mut out_degree = vec![0usize; n];
    let mut shape_ok = true;
    for arc in &b.arcs {
        if arc.tail >= n || arc.head >= n {
            diag.push(
                "vertex-range",
                format!(
                    "arc ({}, {}) references a vertex outside [0, {n})",
                    arc.tail, arc.head
                ),
            );
            shape_ok = false;
            continue;
        }
        out_degree[arc.tail] += 1;
        match g.arc_weight(arc.tail, arc.head) {
            None => {
                diag.push(
                    "arc-not-in-graph",
                    format!(
                        "arc ({}, {}) is not an arc of the graph",
                        arc.tail, arc.head
                    ),
                );
                shape_ok = false;
            }
            Some(w) if w != arc.weight => {
                diag.push(
                    "arc-weight-mismatch",
                    format!(
                        "arc ({}, {}) stores weight {} but the graph has {}",
                        arc.tail, arc.head, arc.weight, w
                    ),
                );
                shape_ok = false;
            }
            Some(_) => {}
        }
    }
    if out_degree[b.root] != 0 {
        diag.push(
            "root-out-degree",
            format!(
                "root {} has {} outgoing arcs, expected 0",
                b.root, out_degree[b.root]
            ),
        );
        shape_ok = false;
    }
    for (v, &degree) in out_degree.iter().enumerate() {
        if v != b.root && degree != 1 {
            diag.push(
                "out-degree",
                format!("vertex {v} has out-degree {degree}, expected 1"),
            );
            shape_ok = false;
        }
    }
    if shape_ok && b.arcs.len() == n - 1 {
        // With one parent arc per non-root vertex, every chain either ends at
        // the root or loops; flag the vertices that loop.
        let mut parent = vec![usize::MAX; n];
        for arc in &b.arcs {
            parent[arc.tail] = arc.head;
        }
        let mut reaches = vec![0u8; n]; // 0 unknown, 1 reaches root, 2 does not
        reaches[b.root] = 1;
        for start in 0..n {
            if reaches[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            let mut seen = vec![false; n];
            while reaches[v] == 0 && !seen[v] {
                seen[v] = true;
                path.push(v);
                v = parent[v];
            }
            let verdict = if reaches[v] == 1 { 1 } else { 2 };
            for p in path {
                reaches[p] = verdict;
            }
        }
        let stuck: Vec<usize> = (0..n).filter(|&v| reaches[v] == 2).collect();
        if !stuck.is_empty() {
            diag.push(
                "unreachable-root",
                format!(
                    "vertices {stuck:?} never reach root {} along parent arcs",
                    b.root
                ),
            );
        }
    }
    diag
}

/// Partition of `[0, n)` into connected components, listed in order of their
/// smallest vertex, each sorted ascending.
pub fn connected_components(g: &UndirectedGraph) -> Vec<Vec<VertexId>> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut visited = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut comp = vec![start];
        while let Some(v) = queue.pop_front() {
            for &(to, _) in &adj[v] {
                if !visited[to] {
                    visited[to] = true;
                    comp.push(to);
                    queue.push_back(to);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}
