use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{Instance, StaticGraph, TemporalGraph};
use crate::presence::{PresencePattern, StepSet};

use super::{lifetime_for, rng};

const REGULAR_ATTEMPTS: usize = 64;

/// Per-edge bounds on absence runs: every maximal run of absent steps of
/// edge `e` lies in `[ceil(bounds[e] / c), bounds[e]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityProfile {
    pub bounds: Vec<usize>,
    pub c: f64,
}

impl RegularityProfile {
    pub fn uniform(m: usize, bound: usize, c: f64) -> Self {
        Self {
            bounds: vec![bound; m],
            c,
        }
    }

    pub fn min_run(&self, e: usize) -> usize {
        (self.bounds[e] as f64 / self.c).ceil() as usize
    }

    pub fn check(&self, m: usize) -> Result<()> {
        if self.bounds.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "profile has {} bounds for {m} edges",
                self.bounds.len()
            )));
        }
        if !(self.c > 1.0) || !self.c.is_finite() {
            return Err(Error::InvalidParameter(format!("regularity constant must exceed 1, got {}", self.c)));
        }
        if let Some(e) = self.bounds.iter().position(|&b| b == 0) {
            return Err(Error::InvalidParameter(format!("edge {e} has absence bound 0")));
        }
        Ok(())
    }
}

fn check_graph(graph: &StaticGraph) -> Result<()> {
    if !graph.is_connected() {
        return Err(Error::InvalidGraph("underlying graph is not connected".into()));
    }
    Ok(())
}

fn compress(set: StepSet, lifetime: usize) -> PresencePattern {
    if set.len() == lifetime + 1 {
        PresencePattern::Always
    } else {
        PresencePattern::Steps(set)
    }
}

/// At every step: a random spanning tree of `graph` (shuffled Kruskal) plus
/// every other edge independently with probability `density`. Starts at 0.
pub fn random_realization(
    graph: &StaticGraph,
    lifetime: usize,
    density: f64,
    seed: u64,
) -> Result<Instance> {
    check_graph(graph)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density must lie in [0, 1], got {density}")));
    }
    let mut r = rng(seed);
    let m = graph.edges.len();
    let mut sets: Vec<StepSet> = (0..m).map(|_| StepSet::with_capacity(lifetime + 1)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    let mut dsu = Dsu::new(graph.n);
    for t in 0..=lifetime {
        order.shuffle(&mut r);
        dsu.reset();
        for &e in &order {
            let (a, b) = graph.edges[e];
            if dsu.union(a, b) || r.gen_bool(density) {
                sets[e].insert(t);
            }
        }
    }
    let edges = graph
        .edges
        .iter()
        .zip(sets)
        .map(|(&(a, b), s)| (a, b, compress(s, lifetime)))
        .collect();
    Instance::new(TemporalGraph::new(graph.n, edges, lifetime)?, 0)
}

/// One regular draw without the connectivity check: each edge is present
/// for one step, then absent for a run drawn afresh from
/// `[ceil(I_e / c), I_e]`, and so on. The walk through the pattern starts
/// at a random point of the first period, so the run before the first
/// presence (and the one cut off by the lifetime) may be shorter.
pub fn regular_draw(
    graph: &StaticGraph,
    profile: &RegularityProfile,
    lifetime: usize,
    seed: u64,
) -> Result<Vec<PresencePattern>> {
    profile.check(graph.edges.len())?;
    let mut r = rng(seed);
    Ok((0..graph.edges.len())
        .map(|e| {
            let lo = profile.min_run(e);
            let hi = profile.bounds[e];
            let mut set = StepSet::with_capacity(lifetime + 1);
            let first = r.gen_range(lo..=hi);
            let mut t = r.gen_range(0..=first);
            while t <= lifetime {
                set.insert(t);
                t += 1 + r.gen_range(lo..=hi);
            }
            PresencePattern::Steps(set)
        })
        .collect())
}

/// Regular draw on `graph` (at most `3n` edges) redrawn until every step is
/// connected. Lifetime `n^2` unless a longer one is requested. Starts at 0.
pub fn regular_instance(
    graph: &StaticGraph,
    profile: &RegularityProfile,
    seed: u64,
    lifetime: Option<usize>,
) -> Result<Instance> {
    check_graph(graph)?;
    if graph.edges.len() > 3 * graph.n {
        return Err(Error::InvalidParameter(format!(
            "regular instances need at most 3n = {} edges, got {}",
            3 * graph.n,
            graph.edges.len()
        )));
    }
    let lifetime = lifetime_for(graph.n, lifetime);
    for attempt in 0..REGULAR_ATTEMPTS {
        let draw_seed = seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let patterns = regular_draw(graph, profile, lifetime, draw_seed)?;
        let edges = graph
            .edges
            .iter()
            .zip(patterns)
            .map(|(&(a, b), p)| (a, b, p))
            .collect();
        let g = TemporalGraph::new(graph.n, edges, lifetime)?;
        if g.is_always_connected().connected {
            return Instance::new(g, 0);
        }
    }
    Err(Error::GenerationFailed {
        seed,
        attempts: REGULAR_ATTEMPTS,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaffoldParams {
    /// Presence and absence run of the two scaffold trees (a power of two).
    pub q: usize,
    /// Extra edges per vertex on top of the two trees (total stays <= 3n).
    pub extra: f64,
    pub lifetime: Option<usize>,
}

impl Default for ScaffoldParams {
    fn default() -> Self {
        Self {
            q: 1,
            extra: 0.5,
            lifetime: None,
        }
    }
}

/// Regular instance that is connected at every step by construction: two
/// edge-disjoint random spanning trees alternate every `q` steps, and extra
/// edges have periods 4, 8 or 16 with random phase. Returns the instance
/// and a profile it satisfies with `c = 2`.
pub fn regular_scaffold(
    n: usize,
    params: ScaffoldParams,
    seed: u64,
) -> Result<(Instance, RegularityProfile)> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("regular_scaffold needs n >= 4, got {n}")));
    }
    let q = params.q;
    if q == 0 || !q.is_power_of_two() || q > 8 {
        return Err(Error::InvalidParameter(format!("scaffold run q must be 1, 2, 4 or 8, got {q}")));
    }
    let lifetime = lifetime_for(n, params.lifetime);
    let mut r = rng(seed);
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut used = BTreeSet::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let first: Vec<(usize, usize)> = order.windows(2).map(|w| key(w[0], w[1])).collect();
    used.extend(first.iter().copied());
    let second = loop {
        order.shuffle(&mut r);
        let mut tree = Vec::with_capacity(n - 1);
        for i in 1..n {
            let v = order[i];
            let mut found = None;
            for _ in 0..16 {
                let p = order[r.gen_range(0..i)];
                if !used.contains(&key(p, v)) {
                    found = Some(key(p, v));
                    break;
                }
            }
            match found {
                Some(e) => tree.push(e),
                None => break,
            }
        }
        if tree.len() == n - 1 {
            break tree;
        }
    };
    used.extend(second.iter().copied());
    let mut edges = Vec::new();
    let mut bounds = Vec::new();
    for &(a, b) in &first {
        edges.push((a, b, PresencePattern::Periodic { offset: 0, present: q, absent: q }));
        bounds.push(q);
    }
    for &(a, b) in &second {
        edges.push((a, b, PresencePattern::Periodic { offset: q, present: q, absent: q }));
        bounds.push(q);
    }
    let room = (3 * n).saturating_sub(edges.len()).min(n * (n - 1) / 2 - edges.len());
    let extra = ((params.extra.max(0.0) * n as f64) as usize).min(room);
    let mut added = 0;
    while added < extra {
        let a = r.gen_range(0..n);
        let b = r.gen_range(0..n);
        if a == b || !used.insert(key(a, b)) {
            continue;
        }
        let absent = *[3usize, 7, 15].choose(&mut r).unwrap();
        let bound = r.gen_range(absent..=2 * absent);
        let offset = r.gen_range(0..=absent);
        edges.push((a, b, PresencePattern::Periodic { offset, present: 1, absent }));
        bounds.push(bound);
        added += 1;
    }
    let g = TemporalGraph::new(n, edges, lifetime)?;
    debug_assert!(g.is_always_connected().connected);
    Ok((Instance::new(g, 0)?, RegularityProfile { bounds, c: 2.0 }))
}
