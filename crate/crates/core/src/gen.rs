//! Seeded, reproducible instance generators plus adversarial perturbations
//! for negative testing.

use crate::error::Error;
use crate::graph::{DirectedGraph, PotentialSystem, VertexId, Weight};

/// Parameters for the random generators.
///
/// `weight_range = (lo, hi)` bounds the integer diagonal draws; edge
/// surpluses are drawn from `[1, max(1, hi - lo)]` so every generated edge
/// strictly clears both of its endpoint diagonals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub density: f64,
    pub seed: u64,
    pub weight_range: (i64, i64),
}

impl GenSpec {
    fn validate(&self) -> Result<(), Error> {
        if self.n < 1 {
            return Err(Error::Config("vertex count must be at least 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Config(format!(
                "density must lie in (0, 1], got {}",
                self.density
            )));
        }
        if self.weight_range.0 > self.weight_range.1 {
            return Err(Error::Config(format!(
                "empty weight range [{}, {}]",
                self.weight_range.0, self.weight_range.1
            )));
        }
        Ok(())
    }
}

/// Portable xorshift64* stream.
///
/// The state advances by `x ^= x >> 12; x ^= x << 25; x ^= x >> 27` and each
/// output is `state * 0x2545F4914F6CDD1D`. Seeds pass through one SplitMix64
/// finalizer so that every 64-bit seed (including 0) yields a nonzero state.
/// Same seed, same stream, on every platform — generated instances are
/// stable enough to pin in golden files.
#[derive(Debug, Clone)]
struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    fn new(seed: u64) -> Self {
        let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        Self {
            state: if z == 0 { 0x9E37_79B9_7F4A_7C15 } else { z },
        }
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Unbiased uniform integer in `[lo, hi]` via bit-mask rejection.
    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u64;
        if span == 0 {
            return self.next_u64() as i64;
        }
        let mask = span.next_power_of_two().wrapping_sub(1);
        loop {
            let x = self.next_u64() & mask;
            if x < span {
                return lo.wrapping_add(x as i64);
            }
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn below(&mut self, bound: usize) -> usize {
        self.int_in(0, bound as i64 - 1) as usize
    }
}

// Connected undirected support: a random attachment tree over `0..n` first,
// then every remaining pair independently with probability `density`. The
// draw order (tree attachments by vertex, then pairs lexicographically) is
// part of the reproducibility contract.
fn gen_support(n: usize, density: f64, rng: &mut XorShift64Star) -> Vec<(usize, usize)> {
    let mut in_tree = vec![false; n.saturating_mul(n)];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.below(v);
        in_tree[u * n + v] = true;
        edges.push((u, v));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if in_tree[i * n + j] {
                continue;
            }
            if rng.unit() < density {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Random valid potential system: integer diagonals from `weight_range`,
/// connected support, and each edge weight `max(d_u, d_v)` plus an integer
/// surplus of at least 1, so `validate_phi` passes by construction.
pub fn gen_potential(spec: &GenSpec) -> Result<PotentialSystem, Error> {
    spec.validate()?;
    let mut rng = XorShift64Star::new(spec.seed);
    let (lo, hi) = spec.weight_range;
    let diag: Vec<f64> = (0..spec.n).map(|_| rng.int_in(lo, hi) as f64).collect();
    let support = gen_support(spec.n, spec.density, &mut rng);
    let surplus_max = (hi - lo).max(1);
    let edges: Vec<(usize, usize, f64)> = support
        .into_iter()
        .map(|(u, v)| {
            let s = rng.int_in(1, surplus_max) as f64;
            (u, v, diag[u].max(diag[v]) + s)
        })
        .collect();
    Ok(PotentialSystem::new(diag, edges).expect("generated system is structurally valid"))
}

/// Random directed instance over a connected support, with an independent
/// integer weight per arc direction. With three or more vertices and wide
/// ranges these are almost never potential, which makes them the negative
/// controls for the recognizer.
pub fn gen_general(spec: &GenSpec) -> Result<DirectedGraph, Error> {
    spec.validate()?;
    let mut rng = XorShift64Star::new(spec.seed);
    let support = gen_support(spec.n, spec.density, &mut rng);
    let (lo, hi) = spec.weight_range;
    let mut arcs = Vec::with_capacity(2 * support.len());
    for (u, v) in support {
        arcs.push((u, v, rng.int_in(lo, hi) as f64));
        arcs.push((v, u, rng.int_in(lo, hi) as f64));
    }
    Ok(DirectedGraph::new(spec.n, arcs).expect("generated digraph is simple"))
}

/// Copy of `q` with exactly one arc weight changed by `delta`; every other
/// arc is bit-identical.
pub fn perturb(
    q: &DirectedGraph,
    arc: (VertexId, VertexId),
    delta: Weight,
) -> Result<DirectedGraph, Error> {
    if delta == 0.0 || !delta.is_finite() {
        return Err(Error::Config(format!(
            "perturbation delta must be finite and nonzero, got {delta}"
        )));
    }
    let (tail, head) = arc;
    if q.arc_weight(tail, head).is_none() {
        return Err(Error::MissingArc(tail, head));
    }
    let arcs = q.arcs().iter().map(|a| {
        let w = if (a.tail, a.head) == (tail, head) {
            a.weight + delta
        } else {
            a.weight
        };
        (a.tail, a.head, w)
    });
    DirectedGraph::new(q.vertex_count(), arcs).map_err(Error::Invalid)
}
