//! Instance families: the lower-bound constructions, the hardness gadget,
//! and random always-connected realizations used to exercise explorers.

mod cycle;
mod gadget;
mod planar;
mod random;
mod stars;

pub use cycle::cycle_2n3;
pub use gadget::{hardness_gadget, Gadget, GadgetSpec};
pub use planar::{is_simple_path, planar_rounds, planar_rounds_rotation, rotation_genus};
pub use random::{
    random_realization, regular_draw, regular_instance, regular_scaffold, RegularityProfile,
    ScaffoldParams,
};
pub use stars::{chained_stars, rotating_star};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::dsu::Dsu;
use crate::explorers::treewidth::TreeDecomposition;
use crate::graph::StaticGraph;
use crate::presence::{PresencePattern, StepSet};

/// Lifetime for a generated instance on `vertices` vertices.
pub fn lifetime_for(vertices: usize, requested: Option<usize>) -> usize {
    (vertices * vertices).max(requested.unwrap_or(0))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Pattern present at steps congruent to any of `residues` modulo `modulus`.
pub(crate) fn residue_pattern(residues: &[usize], modulus: usize, lifetime: usize) -> PresencePattern {
    let mut classes = vec![false; modulus];
    for &r in residues {
        classes[r % modulus] = true;
    }
    if classes.iter().all(|&c| c) {
        return PresencePattern::Always;
    }
    if let [r] = residues {
        return PresencePattern::Periodic {
            offset: *r,
            present: 1,
            absent: modulus - 1,
        };
    }
    let mut s = StepSet::with_capacity(lifetime + 1);
    for t in 0..=lifetime {
        if classes[t % modulus] {
            s.insert(t);
        }
    }
    PresencePattern::Steps(s)
}

pub fn path_graph(n: usize) -> StaticGraph {
    StaticGraph::new(n, (1..n).map(|i| (i - 1, i)).collect())
}

pub fn cycle_graph(n: usize) -> StaticGraph {
    StaticGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn star_graph(n: usize) -> StaticGraph {
    StaticGraph::new(n, (1..n).map(|i| (0, i)).collect())
}

/// `n`-cycle plus the chord `{a, b}`.
pub fn cycle_with_chord(n: usize, a: usize, b: usize) -> StaticGraph {
    let mut g = cycle_graph(n);
    g.edges.push((a.min(b), a.max(b)));
    g
}

/// Vertex id of row `r`, column `c` in a 2 x `cols` grid.
pub fn grid_id(cols: usize, r: usize, c: usize) -> usize {
    r * cols + c
}

/// 2 x `cols` grid: horizontals of both rows, then the rungs.
pub fn grid_graph(cols: usize) -> StaticGraph {
    let mut edges = Vec::new();
    for r in 0..2 {
        for c in 1..cols {
            edges.push((grid_id(cols, r, c - 1), grid_id(cols, r, c)));
        }
    }
    for c in 0..cols {
        edges.push((grid_id(cols, 0, c), grid_id(cols, 1, c)));
    }
    StaticGraph::new(2 * cols, edges)
}

/// Random spanning tree (random attachment) plus `extra` random chords.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> StaticGraph {
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut edges = std::collections::BTreeSet::new();
    for i in 1..n {
        let p = order[r.gen_range(0..i)];
        let v = order[i];
        edges.insert((p.min(v), p.max(v)));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (edges.len() + extra).min(max_edges);
    while edges.len() < target {
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    StaticGraph::new(n, edges.into_iter().collect())
}

/// Random partial 2-tree on `n >= 2` vertices with a width-2 decomposition.
/// Starts from an edge and repeatedly attaches a vertex to both ends of an
/// existing edge; `keep` is the probability of keeping the second edge
/// (the first keeps the graph connected).
pub fn two_tree(n: usize, keep: f64, seed: u64) -> (StaticGraph, TreeDecomposition) {
    assert!(n >= 2, "two_tree needs at least two vertices");
    let mut r = rng(seed);
    let mut edges = vec![(0usize, 1usize)];
    // Every pair that may host a new vertex, with the bag containing it.
    let mut slots: Vec<(usize, usize, usize)> = vec![(0, 1, 0)];
    let mut bags: Vec<Vec<usize>> = vec![vec![0, 1]];
    let mut tree = Vec::new();
    for v in 2..n {
        let (a, b, bag) = slots[r.gen_range(0..slots.len())];
        let id = bags.len();
        bags.push(vec![a, b, v]);
        tree.push((bag, id));
        let (first, second) = if r.gen_bool(0.5) { (a, b) } else { (b, a) };
        edges.push((first.min(v), first.max(v)));
        if r.gen_bool(keep) {
            edges.push((second.min(v), second.max(v)));
        }
        slots.push((a, v, id));
        slots.push((b, v, id));
    }
    edges.sort_unstable();
    edges.dedup();
    (StaticGraph::new(n, edges), TreeDecomposition::new(bags, tree))
}

/// Whether `edges` (over `n` vertices) form a connected spanning subgraph.
pub(crate) fn spans(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut d = Dsu::new(n);
    for (a, b) in edges {
        d.union(a, b);
    }
    n <= 1 || d.components() == 1
}
