use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, TemporalGraph, TemporalView};
use crate::walk::TemporalWalk;

/// A cycle listed from its start vertex: `edges[i]` joins `vertices[i]`
/// and `vertices[i + 1]` (indices mod the length). Increasing index is
/// "clockwise".
#[derive(Clone, Debug)]
pub(crate) struct Ring {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

impl Ring {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Ring formed by `edge_set` through `start`; each touched vertex must
    /// have exactly two of these edges and they must form one cycle.
    pub fn from_edges(g: &TemporalGraph, edge_set: &[EdgeId], start: usize) -> Result<Ring> {
        let mut inc: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
        for &e in edge_set {
            let ed = g.edge(e);
            inc[ed.u].push(e);
            inc[ed.v].push(e);
        }
        let not_cycle = || Error::ShapeMismatch("edges do not form a cycle through the start".into());
        if inc.iter().any(|l| !l.is_empty() && l.len() != 2) || inc[start].len() != 2 {
            return Err(not_cycle());
        }
        // Clockwise leaves the start towards its smaller neighbour.
        let mut first = inc[start].clone();
        first.sort_by_key(|&e| g.edge(e).other(start));
        let mut vertices = vec![start];
        let mut edges = vec![first[0]];
        let mut cur = g.edge(first[0]).other(start);
        let mut came = first[0];
        while cur != start {
            vertices.push(cur);
            let next = if inc[cur][0] == came { inc[cur][1] } else { inc[cur][0] };
            edges.push(next);
            came = next;
            cur = g.edge(next).other(cur);
            if vertices.len() > edge_set.len() {
                return Err(not_cycle());
            }
        }
        if vertices.len() != edge_set.len() {
            return Err(not_cycle());
        }
        Ok(Ring { vertices, edges })
    }

    pub fn of_instance(inst: &Instance) -> Result<Ring> {
        let all: Vec<EdgeId> = (0..inst.graph.m()).collect();
        Ring::from_edges(&inst.graph, &all, inst.start)
            .map_err(|_| Error::ShapeMismatch("underlying graph is not a cycle".into()))
    }

    /// Edge crossed when moving from ring index `p` one step in `dir` (+1 / -1).
    fn edge_from(&self, p: usize, cw: bool) -> EdgeId {
        let n = self.len();
        if cw {
            self.edges[p % n]
        } else {
            self.edges[(p + n - 1) % n]
        }
    }
}

fn exhausted<V: TemporalView + ?Sized>(view: &V) -> Error {
    Error::LifetimeExhausted {
        step: if view.is_empty() { 0 } else { view.base_step(view.len() - 1) + 1 },
    }
}

/// Two-agent cycle strategy on `view` from ring start at view time `t0`.
/// Returns the walk (in view steps) of the agent that finishes first.
pub(crate) fn two_agent_walk<V: TemporalView + ?Sized>(
    view: &V,
    ring: &Ring,
    t0: usize,
) -> Result<TemporalWalk> {
    let n = ring.len();
    let v = |p: usize| ring.vertices[p % n];
    let mut wa = TemporalWalk::new(v(0));
    let mut wb = TemporalWalk::new(v(0));
    if n <= 1 {
        return Ok(wa);
    }
    // a: clockwise moves so far; b: counterclockwise moves so far.
    let (mut a, mut b) = (0usize, 0usize);
    let mut faced = false;
    let mut i = t0;
    loop {
        if a == n - 1 {
            return Ok(wa);
        }
        if b == n - 1 {
            return Ok(wb);
        }
        if i >= view.len() {
            return Err(exhausted(view));
        }
        let ea = ring.edges[a];
        let eb = ring.edges[n - 1 - b];
        if a + b == n - 1 && !view.present(ea, i) {
            if faced {
                return Err(Error::Assertion("cycle agents faced each other twice".into()));
            }
            faced = true;
            let window = (i..(i + n).min(view.len())).find(|&j| view.present(ea, j));
            match window {
                Some(j) => i = j,
                None => {
                    // The clockwise agent turns back and goes all the way round.
                    let mut p = a;
                    for _ in 0..(n - 1) {
                        let e = ring.edge_from(p, false);
                        while i < view.len() && !view.present(e, i) {
                            i += 1;
                        }
                        if i >= view.len() {
                            return Err(exhausted(view));
                        }
                        p = (p + n - 1) % n;
                        wa.push(i, v(p));
                        i += 1;
                    }
                    return Ok(wa);
                }
            }
            continue;
        }
        let move_a = view.present(ea, i);
        let move_b = view.present(eb, i);
        if move_a {
            a += 1;
            wa.push(i, v(a));
        }
        if move_b {
            b += 1;
            wb.push(i, v(n - b));
        }
        i += 1;
    }
}

/// Explores a temporal cycle within `3n` steps.
pub fn explore_cycle_3n(inst: &Instance) -> Result<TemporalWalk> {
    let ring = Ring::of_instance(inst)?;
    two_agent_walk(&inst.graph, &ring, 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleResult {
    pub walk: TemporalWalk,
    pub arrival: usize,
    /// False when no schedule type finishes within the lifetime; `walk`
    /// is then the one visiting the most vertices.
    pub complete: bool,
}

/// Follows `route` (ring indices after the start) crossing each edge at
/// its earliest presence. Returns the walk, the number of route vertices
/// reached and the final time.
fn follow(g: &TemporalGraph, ring: &Ring, route: &[(usize, bool)]) -> (TemporalWalk, usize, usize) {
    let n = ring.len();
    let mut w = TemporalWalk::new(ring.vertices[0]);
    let mut t = 0;
    let mut p = 0;
    for (k, &(to, cw)) in route.iter().enumerate() {
        let e = ring.edge_from(p, cw);
        match g.next_present(e, t) {
            Some(s) => {
                w.push(s, ring.vertices[to % n]);
                t = s + 1;
                p = to;
            }
            None => return (w, k, t),
        }
    }
    (w, route.len(), t)
}

/// Minimum-arrival schedule of a temporal cycle, by trying every route of
/// the form "one way to a turning vertex, then the other way until done".
pub fn cycle_optimal(inst: &Instance) -> Result<CycleResult> {
    let ring = Ring::of_instance(inst)?;
    let n = ring.len();
    let g = &inst.graph;
    let mut best: Option<(bool, usize, usize, TemporalWalk)> = None;
    for first_cw in [true, false] {
        for k in 0..n {
            // k moves one way, then (unless that already covers the cycle)
            // n - 1 moves back: k over visited vertices, the rest new.
            let back = if k == n - 1 { 0 } else { n - 1 };
            let mut route = Vec::with_capacity(k + back);
            let mut p = 0;
            for _ in 0..k {
                p = if first_cw { (p + 1) % n } else { (p + n - 1) % n };
                route.push((p, first_cw));
            }
            for _ in 0..back {
                p = if first_cw { (p + n - 1) % n } else { (p + 1) % n };
                route.push((p, !first_cw));
            }
            let (walk, reached, t) = follow(g, &ring, &route);
            let done = reached == route.len();
            let visited = if done { n } else { visited_count(&walk, n) };
            let arrival = if done { t } else { usize::MAX };
            let key = (done, visited, arrival);
            let better = match &best {
                None => true,
                Some((bd, bv, ba, _)) => {
                    (key.0, key.1, std::cmp::Reverse(key.2)) > (*bd, *bv, std::cmp::Reverse(*ba))
                }
            };
            if better {
                best = Some((done, visited, arrival, walk));
            }
        }
    }
    let (complete, _, arrival, walk) = best.expect("at least one route");
    let arrival = if complete { arrival } else { walk.end_time().unwrap_or(0) };
    Ok(CycleResult { walk, arrival, complete })
}

fn visited_count(w: &TemporalWalk, n: usize) -> usize {
    let mut seen = std::collections::HashSet::with_capacity(n);
    seen.insert(w.start);
    seen.extend(w.moves.iter().map(|m| m.to));
    seen.len()
}
