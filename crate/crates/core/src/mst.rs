//! Undirected minimum spanning trees: Kruskal (the default, with a fully
//! specified tie-break) and Prim (an independent implementation used for
//! cross-checking weights).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Error;
use crate::graph::{connected_components, Edge, UndirectedGraph, UndirectedTree, VertexId};

/// Union-find over a fixed element count, with path halving and union by
/// rank.
#[derive(Debug, Clone)]
pub struct DisjointSetForest {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSetForest {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; false when they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Minimum spanning tree by Kruskal's algorithm.
///
/// Edges are considered in ascending `(weight, u, v)` order, so under weight
/// ties the returned edge set is the unique greedy choice for that order.
/// A disconnected input is rejected with its component partition.
pub fn kruskal(g: &UndirectedGraph) -> Result<UndirectedTree, Error> {
    let n = g.vertex_count();
    let mut order: Vec<Edge> = g.edges().to_vec();
    order.sort_by(|a, b| {
        a.weight
            .total_cmp(&b.weight)
            .then(a.u.cmp(&b.u))
            .then(a.v.cmp(&b.v))
    });
    let mut dsu = DisjointSetForest::new(n);
    let mut picked = Vec::with_capacity(n.saturating_sub(1));
    for e in order {
        if dsu.union(e.u, e.v) {
            picked.push(e);
            if picked.len() + 1 == n {
                break;
            }
        }
    }
    if picked.len() + 1 != n {
        return Err(Error::Disconnected {
            components: connected_components(g),
        });
    }
    Ok(UndirectedTree::new(n, picked))
}

// Min-heap entry; ties broken by vertex index.
#[derive(PartialEq)]
struct Frontier {
    weight: f64,
    vertex: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.vertex.cmp(&other.vertex))
            .reverse()
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum spanning tree by Prim's algorithm, grown from `start` with a
/// binary-heap frontier.
///
/// Total weight always matches [`kruskal`]; the edge set may differ under
/// weight ties. A disconnected input is rejected with the set of vertices
/// the frontier never reached.
///
/// Panics if `start` is out of range.
pub fn prim(g: &UndirectedGraph, start: VertexId) -> Result<UndirectedTree, Error> {
    let n = g.vertex_count();
    assert!(start < n, "start vertex {start} outside [0, {n})");
    let adj = g.adjacency();

    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<(f64, usize)>> = vec![None; n]; // (weight, tree endpoint)
    let mut heap = BinaryHeap::new();
    let mut picked = Vec::with_capacity(n.saturating_sub(1));

    in_tree[start] = true;
    let mut latest = start;
    loop {
        for &(to, w) in &adj[latest] {
            if in_tree[to] {
                continue;
            }
            match best[to] {
                None => {
                    best[to] = Some((w, latest));
                    heap.push(Frontier {
                        weight: w,
                        vertex: to,
                    });
                }
                Some((bw, _)) if w < bw => {
                    best[to] = Some((w, latest));
                    heap.push(Frontier {
                        weight: w,
                        vertex: to,
                    });
                }
                Some((bw, bfrom)) if w == bw && latest < bfrom => {
                    best[to] = Some((w, latest));
                }
                Some(_) => {}
            }
        }
        if picked.len() + 1 == n {
            break;
        }
        let Some(next) = pop_live(&mut heap, &in_tree, &best) else {
            break;
        };
        let (w, from) = best[next].unwrap();
        in_tree[next] = true;
        let (u, v) = if from < next {
            (from, next)
        } else {
            (next, from)
        };
        picked.push(Edge { u, v, weight: w });
        latest = next;
    }

    if picked.len() + 1 != n {
        let missing = (0..n).filter(|&v| !in_tree[v]).collect();
        return Err(Error::Unreached { missing });
    }
    Ok(UndirectedTree::new(n, picked))
}

fn pop_live(
    heap: &mut BinaryHeap<Frontier>,
    in_tree: &[bool],
    best: &[Option<(f64, usize)>],
) -> Option<usize> {
    while let Some(entry) = heap.pop() {
        if in_tree[entry.vertex] {
            continue;
        }
        // Stale offers carry a weight the vertex has since improved on.
        if best[entry.vertex].map(|(w, _)| w) != Some(entry.weight) {
            continue;
        }
        return Some(entry.vertex);
    }
    None
}
