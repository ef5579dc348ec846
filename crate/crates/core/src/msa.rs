//! Minimum spanning in-branchings of directed graphs: Chu-Liu/Edmonds with
//! cycle contraction for a fixed root, a best-root scan, and an exhaustive
//! oracle for small instances.
//!
//! The contraction solver is written once, as a minimum out-arborescence,
//! and runs on the arc-reversed graph: an in-branching of `g` rooted at `r`
//! is exactly an out-arborescence of the transpose, arc for arc.

use std::collections::VecDeque;

use crate::error::Error;
use crate::graph::{Arc, DirectedGraph, InBranching, VertexId, Weight};

/// Hard vertex cap for [`enumerate_optimal`].
pub const ENUMERATION_CAP: usize = 8;

const NIL: u32 = u32::MAX;

// Mergeable min-heap of candidate parent arcs, one node per arc, with a lazy
// additive offset per subtree so that contracting a cycle can discount every
// arc still entering it in O(1). Nodes live in one arena per solver run.
//
// Order is lexicographic on (current key, original head, arc index), so the
// cheapest arc wins and weight ties fall to the smallest head.
struct ArcHeap {
    key: Vec<f64>,
    delta: Vec<f64>,
    from: Vec<u32>, // original head of the stored arc
    origin: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    spine: Vec<u32>,
}

impl ArcHeap {
    fn with_capacity(m: usize) -> Self {
        Self {
            key: Vec::with_capacity(m),
            delta: Vec::with_capacity(m),
            from: Vec::with_capacity(m),
            origin: Vec::with_capacity(m),
            left: Vec::with_capacity(m),
            right: Vec::with_capacity(m),
            spine: Vec::new(),
        }
    }

    fn singleton(&mut self, key: f64, from: u32, origin: u32) -> u32 {
        let id = self.key.len() as u32;
        self.key.push(key);
        self.delta.push(0.0);
        self.from.push(from);
        self.origin.push(origin);
        self.left.push(NIL);
        self.right.push(NIL);
        id
    }

    fn settle(&mut self, h: u32) {
        let i = h as usize;
        let d = self.delta[i];
        if d != 0.0 {
            self.key[i] += d;
            for c in [self.left[i], self.right[i]] {
                if c != NIL {
                    self.delta[c as usize] += d;
                }
            }
            self.delta[i] = 0.0;
        }
    }

    // Both sides must be settled.
    fn precedes(&self, a: u32, b: u32) -> bool {
        let (ai, bi) = (a as usize, b as usize);
        (self.key[ai], self.from[ai], self.origin[ai])
            <= (self.key[bi], self.from[bi], self.origin[bi])
    }

    // Iterative skew merge: walk the winners' right spine down, then swap
    // children on the way back up.
    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        self.settle(a);
        self.settle(b);
        let (mut winner, mut loser) = if self.precedes(a, b) { (a, b) } else { (b, a) };
        let top = winner;
        loop {
            self.spine.push(winner);
            let r = self.right[winner as usize];
            if r == NIL {
                self.right[winner as usize] = loser;
                break;
            }
            self.settle(r);
            let (w, l) = if self.precedes(r, loser) {
                (r, loser)
            } else {
                (loser, r)
            };
            self.right[winner as usize] = w;
            winner = w;
            loser = l;
        }
        while let Some(node) = self.spine.pop() {
            let i = node as usize;
            std::mem::swap(&mut self.left[i], &mut self.right[i]);
        }
        top
    }

    fn pop(&mut self, h: u32) -> u32 {
        self.settle(h);
        self.merge(self.left[h as usize], self.right[h as usize])
    }
}

// Union-find with union by size and an undo log; no path compression, so
// rollbacks restore earlier contraction stages exactly.
struct RollbackDsu {
    parent_or_size: Vec<i64>,
    log: Vec<(usize, i64)>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        Self {
            parent_or_size: vec![-1; n],
            log: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent_or_size[x] >= 0 {
            x = self.parent_or_size[x] as usize;
        }
        x
    }

    fn time(&self) -> usize {
        self.log.len()
    }

    fn join(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.parent_or_size[ra] > self.parent_or_size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.log.push((ra, self.parent_or_size[ra]));
        self.log.push((rb, self.parent_or_size[rb]));
        self.parent_or_size[ra] += self.parent_or_size[rb];
        self.parent_or_size[rb] = ra as i64;
        true
    }

    fn rollback(&mut self, t: usize) {
        while self.log.len() > t {
            let (i, v) = self.log.pop().unwrap();
            self.parent_or_size[i] = v;
        }
    }
}

// One contracted cycle: the group representative right after contraction,
// the union-find log position right before it, and the picks it swallowed.
struct Contraction {
    group: usize,
    time: usize,
    member_picks: Vec<u32>,
}

/// Minimum out-arborescence of the arc-reversed graph, which is exactly the
/// minimum in-branching of `g`: every non-root vertex keeps one outgoing arc
/// and all parent chains climb to the root.
///
/// Greedy selection with cycle contraction over mergeable heaps; each
/// contraction is undone afterwards to read the chosen arc per vertex back
/// out. Runs in O(m log n) per call. Callers guarantee feasibility.
fn contract_expand(g: &DirectedGraph, root: usize) -> Vec<u32> {
    let n = g.vertex_count();
    let arcs = g.arcs();
    let mut heaps = ArcHeap::with_capacity(arcs.len());
    // Reversed orientation: vertex v's candidates are the arcs leaving v.
    let mut heap: Vec<u32> = vec![NIL; n];
    for (i, a) in arcs.iter().enumerate() {
        let node = heaps.singleton(a.weight, a.head as u32, i as u32);
        heap[a.tail] = heaps.merge(heap[a.tail], node);
    }

    let mut uf = RollbackDsu::new(n);
    let mut seen: Vec<i64> = vec![-1; n];
    seen[root] = root as i64;
    let mut pick_of: Vec<Option<u32>> = vec![None; n];
    let mut contractions: Vec<Contraction> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut picks: Vec<u32> = Vec::new();

    for start in 0..n {
        let mut group = start;
        path.clear();
        picks.clear();
        while seen[group] < 0 {
            let top = heap[group];
            assert_ne!(top, NIL, "feasible instances always offer a parent arc");
            heaps.settle(top);
            let key = heaps.key[top as usize];
            let origin = heaps.origin[top as usize];
            // Whatever ends up displacing this pick pays the difference.
            heaps.delta[top as usize] -= key;
            heap[group] = heaps.pop(top);

            picks.push(origin);
            path.push(group);
            seen[group] = start as i64;
            group = uf.find(arcs[origin as usize].head as usize);

            if seen[group] == start as i64 {
                // Walked into this very walk: contract the cycle.
                let time = uf.time();
                let mut merged = NIL;
                let mut swallowed = 0;
                loop {
                    let w = path.pop().expect("cycle members are on the current path");
                    swallowed += 1;
                    merged = heaps.merge(merged, heap[w]);
                    if !uf.join(group, w) {
                        break;
                    }
                }
                let member_picks = picks.split_off(picks.len() - swallowed);
                group = uf.find(group);
                heap[group] = merged;
                seen[group] = -1;
                contractions.push(Contraction {
                    group,
                    time,
                    member_picks,
                });
            }
        }
        for &p in &picks {
            pick_of[uf.find(arcs[p as usize].tail)] = Some(p);
        }
    }

    // Undo the contractions newest-first; inside each cycle the entering
    // arc's endpoint drops its own pick, every other member keeps one.
    for c in contractions.iter().rev() {
        uf.rollback(c.time);
        let entering = pick_of[c.group].expect("contracted groups are entered");
        for &m in &c.member_picks {
            pick_of[uf.find(arcs[m as usize].tail)] = Some(m);
        }
        pick_of[uf.find(arcs[entering as usize].tail)] = Some(entering);
    }

    (0..n)
        .filter(|&v| v != root)
        .map(|v| pick_of[v].expect("non-root vertices end up with a parent arc"))
        .collect()
}

// Arcs grouped by head: the tails that can reach each vertex in one step.
fn tails_into(g: &DirectedGraph) -> Vec<Vec<usize>> {
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for a in g.arcs() {
        into[a.head].push(a.tail);
    }
    into
}

// Vertices with no directed path to `root`, by a reverse sweep from it.
fn stranded_from(into: &[Vec<usize>], root: usize) -> Vec<usize> {
    let n = into.len();
    let mut reached = vec![false; n];
    reached[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &t in &into[v] {
            if !reached[t] {
                reached[t] = true;
                queue.push_back(t);
            }
        }
    }
    (0..n).filter(|&v| !reached[v]).collect()
}

fn solve_fixed(g: &DirectedGraph, root: usize, into: &[Vec<usize>]) -> Result<InBranching, Error> {
    let stranded = stranded_from(into, root);
    if !stranded.is_empty() {
        return Err(Error::Infeasible { root, stranded });
    }
    let chosen = contract_expand(g, root);
    let mut arcs: Vec<Arc> = chosen.into_iter().map(|i| g.arcs()[i as usize]).collect();
    arcs.sort_by_key(|a| a.tail);
    Ok(InBranching { root, arcs })
}

/// Minimum-weight spanning in-branching of `g` rooted at `root`.
///
/// Weights may be negative. Vertices that cannot reach the root make the
/// instance infeasible and are reported up front.
///
/// Panics if `root` is out of range.
pub fn edmonds_fixed_root(g: &DirectedGraph, root: VertexId) -> Result<InBranching, Error> {
    let n = g.vertex_count();
    assert!(root < n, "root {root} outside [0, {n})");
    solve_fixed(g, root, &tails_into(g))
}

/// Runs the fixed-root solver on every feasible root and returns the
/// cheapest result; exact weight ties go to the smallest root index.
pub fn edmonds_best_root(g: &DirectedGraph) -> Result<(VertexId, InBranching), Error> {
    let n = g.vertex_count();
    let into = tails_into(g);
    let mut best: Option<(Weight, VertexId, InBranching)> = None;
    for root in 0..n {
        let Ok(b) = solve_fixed(g, root, &into) else {
            continue;
        };
        let w = b.total_weight();
        if best.as_ref().is_none_or(|(bw, _, _)| w < *bw) {
            best = Some((w, root, b));
        }
    }
    match best {
        Some((_, root, b)) => Ok((root, b)),
        None => Err(Error::NoFeasibleRoot),
    }
}

/// Root selection mode for the exhaustive oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSpec {
    Fixed(VertexId),
    All,
}

/// Exhaustive minimum spanning in-branching, the independent ground truth
/// for small instances.
///
/// Every assignment of one outgoing arc per non-root vertex is visited in
/// lexicographic order (vertices ascending, each vertex's candidate arcs
/// sorted by head); assignments whose parent chains miss the root are
/// discarded, and the first minimum encountered wins, so the result is
/// deterministic. Instances beyond [`ENUMERATION_CAP`] vertices are refused.
pub fn enumerate_optimal(
    g: &DirectedGraph,
    roots: RootSpec,
) -> Result<(Weight, InBranching), Error> {
    let n = g.vertex_count();
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    match roots {
        RootSpec::Fixed(root) => {
            assert!(root < n, "root {root} outside [0, {n})");
            enumerate_root(g, root).ok_or_else(|| Error::Infeasible {
                root,
                stranded: stranded_from(&tails_into(g), root),
            })
        }
        RootSpec::All => {
            let mut best: Option<(Weight, InBranching)> = None;
            for root in 0..n {
                if let Some((w, b)) = enumerate_root(g, root) {
                    if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                        best = Some((w, b));
                    }
                }
            }
            best.ok_or(Error::NoFeasibleRoot)
        }
    }
}

fn enumerate_root(g: &DirectedGraph, root: usize) -> Option<(Weight, InBranching)> {
    let n = g.vertex_count();
    let mut out: Vec<Vec<Arc>> = vec![Vec::new(); n];
    for a in g.arcs() {
        if a.tail != root {
            out[a.tail].push(*a); // arcs() is sorted, so heads ascend
        }
    }
    let movers: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    if movers.iter().any(|&v| out[v].is_empty()) {
        return None;
    }

    let mut choice = vec![0usize; n];
    let mut best: Option<(Weight, Vec<Arc>)> = None;
    'assignments: loop {
        let mut parent = vec![usize::MAX; n];
        for &v in &movers {
            parent[v] = out[v][choice[v]].head;
        }
        if all_chains_reach_root(&parent, root) {
            let arcs: Vec<Arc> = movers.iter().map(|&v| out[v][choice[v]]).collect();
            let w: Weight = arcs.iter().map(|a| a.weight).sum();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, arcs));
            }
        }
        for i in (0..movers.len()).rev() {
            let v = movers[i];
            if choice[v] + 1 < out[v].len() {
                choice[v] += 1;
                continue 'assignments;
            }
            choice[v] = 0;
        }
        break;
    }
    // Movers ascend, so the arc list is already sorted by tail.
    best.map(|(w, arcs)| (w, InBranching { root, arcs }))
}

fn all_chains_reach_root(parent: &[usize], root: usize) -> bool {
    let n = parent.len();
    let mut reaches = vec![false; n];
    reaches[root] = true;
    for start in 0..n {
        if reaches[start] {
            continue;
        }
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        let mut v = start;
        while !reaches[v] {
            if on_path[v] {
                return false;
            }
            on_path[v] = true;
            path.push(v);
            v = parent[v];
        }
        for p in path {
            reaches[p] = true;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_branching;

    fn six_arc_instance() -> DirectedGraph {
        DirectedGraph::new(
            3,
            [
                (1, 0, 1.0),
                (2, 1, 1.0),
                (2, 0, 5.0),
                (0, 1, 2.0),
                (1, 2, 2.0),
                (0, 2, 3.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn oracle_finds_cheapest_rooted_branching() {
        let g = six_arc_instance();
        let (w, b) = enumerate_optimal(&g, RootSpec::Fixed(0)).unwrap();
        assert_eq!(w, 2.0);
        let pairs: Vec<(usize, usize)> = b.arcs.iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(pairs, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn oracle_trivial_cases() {
        let g = DirectedGraph::new(2, [(1, 0, 3.0)]).unwrap();
        assert_eq!(enumerate_optimal(&g, RootSpec::Fixed(0)).unwrap().0, 3.0);

        let complete = DirectedGraph::new(
            3,
            [
                (0, 1, 1.0),
                (1, 0, 1.0),
                (0, 2, 1.0),
                (2, 0, 1.0),
                (1, 2, 1.0),
                (2, 1, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(
            enumerate_optimal(&complete, RootSpec::Fixed(0)).unwrap().0,
            2.0
        );
    }

    #[test]
    fn oracle_refuses_large_instances() {
        let arcs: Vec<(usize, usize, f64)> = (1..9).map(|v| (v, 0, 1.0)).collect();
        let g = DirectedGraph::new(9, arcs).unwrap();
        assert!(matches!(
            enumerate_optimal(&g, RootSpec::Fixed(0)),
            Err(Error::TooLarge {
                n: 9,
                cap: ENUMERATION_CAP
            })
        ));
    }

    #[test]
    fn edmonds_matches_oracle_on_worked_instance() {
        let g = six_arc_instance();
        let b = edmonds_fixed_root(&g, 0).unwrap();
        assert!(validate_branching(&g, &b).ok());
        assert_eq!(b.total_weight(), 2.0);
        let pairs: Vec<(usize, usize)> = b.arcs.iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(pairs, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn edmonds_contracts_the_two_cycle() {
        // Greedy would lock 1 and 2 into each other; contraction must break
        // the cycle through the cheaper exit.
        let g =
            DirectedGraph::new(3, [(1, 2, 1.0), (2, 1, 1.0), (1, 0, 10.0), (2, 0, 8.0)]).unwrap();
        let b = edmonds_fixed_root(&g, 0).unwrap();
        assert!(validate_branching(&g, &b).ok());
        assert_eq!(b.total_weight(), 9.0);
        let (w, _) = enumerate_optimal(&g, RootSpec::Fixed(0)).unwrap();
        assert_eq!(w, 9.0);
    }

    #[test]
    fn edmonds_single_vertex() {
        let g = DirectedGraph::new(1, []).unwrap();
        let b = edmonds_fixed_root(&g, 0).unwrap();
        assert!(b.arcs.is_empty());
        assert_eq!(b.total_weight(), 0.0);
    }

    #[test]
    fn edmonds_allows_negative_weights() {
        let g = DirectedGraph::new(3, [(1, 0, -4.0), (2, 0, 3.0), (2, 1, -1.0)]).unwrap();
        let b = edmonds_fixed_root(&g, 0).unwrap();
        assert_eq!(b.total_weight(), -5.0);
        assert_eq!(enumerate_optimal(&g, RootSpec::Fixed(0)).unwrap().0, -5.0);
    }

    #[test]
    fn edmonds_reports_stranded_vertices() {
        let g = DirectedGraph::new(3, [(1, 0, 1.0), (1, 2, 1.0)]).unwrap();
        match edmonds_fixed_root(&g, 0) {
            Err(Error::Infeasible { root: 0, stranded }) => assert_eq!(stranded, vec![2]),
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn best_root_prefers_cheaper_then_smaller() {
        let g = DirectedGraph::new(2, [(0, 1, 5.0), (1, 0, 4.0)]).unwrap();
        let (root, b) = edmonds_best_root(&g).unwrap();
        assert_eq!(root, 0);
        assert_eq!(b.total_weight(), 4.0);
    }

    #[test]
    fn best_root_forced_by_reachability() {
        let g = DirectedGraph::new(3, [(0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let (root, _) = edmonds_best_root(&g).unwrap();
        assert_eq!(root, 2);
    }

    #[test]
    fn best_root_with_no_candidate() {
        let g = DirectedGraph::new(3, [(0, 1, 1.0)]).unwrap();
        assert_eq!(edmonds_best_root(&g), Err(Error::NoFeasibleRoot));
    }

    #[test]
    fn weight_shift_moves_optimum_by_arc_count() {
        let g = six_arc_instance();
        let base = edmonds_fixed_root(&g, 0).unwrap().total_weight();
        let shifted = DirectedGraph::new(
            3,
            g.arcs().iter().map(|a| (a.tail, a.head, a.weight + 10.0)),
        )
        .unwrap();
        let moved = edmonds_fixed_root(&shifted, 0).unwrap().total_weight();
        assert_eq!(moved, base + 10.0 * 2.0);
    }
}
