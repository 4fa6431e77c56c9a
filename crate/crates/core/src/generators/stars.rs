use crate::error::{Error, Result};
use crate::graph::{Instance, TemporalGraph};
use crate::presence::PresencePattern;

use super::{lifetime_for, residue_pattern};

/// Edges of a rotating star with `n` centres: at step `i` the edge set is
/// the star centred at centre `i mod n` over every other vertex.
/// `centre(j)` and `leaf(j)` give global ids.
pub(crate) fn rotating_star_edges(
    n: usize,
    centre: impl Fn(usize) -> usize,
    leaf: impl Fn(usize) -> usize,
    lifetime: usize,
) -> Vec<(usize, usize, PresencePattern)> {
    let mut edges = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            edges.push((centre(j), centre(k), residue_pattern(&[j, k], n, lifetime)));
        }
    }
    for j in 0..n {
        for k in 0..n {
            edges.push((centre(j), leaf(k), residue_pattern(&[j], n, lifetime)));
        }
    }
    edges
}

/// The quadratic lower-bound family: `2n` vertices `c_0..c_{n-1}` (ids
/// `0..n`) and `l_0..l_{n-1}` (ids `n..2n`); at step `i` the graph is the
/// star centred at `c_{i mod n}`. Starts at `c_0`.
pub fn rotating_star(n: usize, lifetime: Option<usize>) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("rotating_star needs n >= 2, got {n}")));
    }
    let lifetime = lifetime_for(2 * n, lifetime);
    let edges = rotating_star_edges(n, |j| j, |k| n + k, lifetime);
    Instance::new(TemporalGraph::new(2 * n, edges, lifetime)?, 0)
}

/// The degree-bounded family: `n / d` copies of the rotating star with
/// `d / 2` centres, leaf `l_1` of copy `i` merged with leaf `l_0` of copy
/// `i + 1`. All copies rotate in lockstep. Starts at `c_0` of copy 0.
pub fn chained_stars(d: usize, n: usize, lifetime: Option<usize>) -> Result<Instance> {
    if d < 4 || d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("chained_stars needs even d >= 4, got {d}")));
    }
    if n == 0 || n % d != 0 {
        return Err(Error::InvalidParameter(format!(
            "chained_stars needs n to be a positive multiple of d, got n={n}, d={d}"
        )));
    }
    let copies = n / d;
    let h = d / 2;
    let total = n - (copies - 1);
    let lifetime = lifetime_for(total, lifetime);
    // Copy 0 uses ids 0..d (centres then leaves). Later copies reuse the
    // previous copy's l_1 as their l_0 and take d - 1 fresh ids.
    let mut edges = Vec::new();
    let mut next_id = 0;
    let mut prev_l1 = None;
    for _ in 0..copies {
        let base = next_id;
        let centres: Vec<usize> = (0..h).map(|j| base + j).collect();
        let mut leaves = Vec::with_capacity(h);
        let mut id = base + h;
        for k in 0..h {
            match (k, prev_l1) {
                (0, Some(shared)) => leaves.push(shared),
                _ => {
                    leaves.push(id);
                    id += 1;
                }
            }
        }
        next_id = id;
        prev_l1 = Some(leaves[1]);
        edges.extend(rotating_star_edges(h, |j| centres[j], |k| leaves[k], lifetime));
    }
    debug_assert_eq!(next_id, total);
    Instance::new(TemporalGraph::new(total, edges, lifetime)?, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_centre(inst: &Instance, t: usize) -> Option<usize> {
        let g = &inst.graph;
        let snap = g.snapshot(t).unwrap();
        if snap.len() != g.n() - 1 {
            return None;
        }
        (0..g.n()).find(|&c| snap.iter().all(|&e| g.edge(e).touches(c)))
    }

    #[test]
    fn snapshot_is_the_rotating_star() {
        let inst = rotating_star(3, None).unwrap();
        assert_eq!(inst.graph.snapshot(0).unwrap().len(), 5);
        assert_eq!(star_centre(&inst, 0), Some(0));
        assert_eq!(star_centre(&inst, 4), Some(1));
        for n in 2..=8 {
            let inst = rotating_star(n, None).unwrap();
            for t in 0..2 * n {
                assert_eq!(star_centre(&inst, t), Some(t % n), "n={n} t={t}");
            }
        }
        let six = rotating_star(6, None).unwrap();
        assert_eq!(six.graph.snapshot(0).unwrap().len(), 11);
        assert_eq!(star_centre(&six, 2), Some(2));
        assert!(six.graph.lifetime() >= 144);
    }

    #[test]
    fn rejects_small_n() {
        assert!(rotating_star(1, None).is_err());
    }

    #[test]
    fn chained_star_counts_and_degrees() {
        let inst = chained_stars(4, 8, None).unwrap();
        let g = inst.graph.underlying();
        assert_eq!(g.n, 7);
        let adj = g.adjacency();
        // Copy 0: centres 0,1 leaves 2,3; copy 1: centres 4,5, leaves 3 (shared), 6.
        assert_eq!(adj[3].len(), 4);
        assert_eq!(adj[0].len(), 3);
        assert_eq!(adj[4].len(), 3);
        assert_eq!(g.max_degree(), 4);
        assert!(inst.graph.is_always_connected().connected);
    }

    #[test]
    fn chained_star_errors() {
        assert!(chained_stars(5, 10, None).is_err());
        assert!(chained_stars(4, 10, None).is_err());
        assert!(chained_stars(2, 8, None).is_err());
    }

    #[test]
    fn chained_star_max_degree_is_d() {
        for d in [4, 6, 8] {
            let inst = chained_stars(d, 3 * d, None).unwrap();
            assert_eq!(inst.graph.underlying().max_degree(), d);
            assert!(inst.graph.is_always_connected().connected);
        }
    }
}
