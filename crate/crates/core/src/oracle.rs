//! Exact foremost exploration for small instances, plus a brute-force
//! enumerator used only to certify it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Instance;
use crate::walk::{validate_walk, TemporalWalk};

pub const DEFAULT_LIMIT: usize = 15;
/// Largest vertex count the exact solver accepts even when asked.
pub const HARD_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Optimum {
    pub optimum: usize,
    pub walk: TemporalWalk,
}

/// Earliest time to have visited every vertex. Dijkstra over states
/// (visited set, position), keeping only the earliest time per state:
/// waiting is free, so an earlier arrival in a state is never worse. A
/// transition crosses one edge at its first presence at or after the
/// current time.
pub fn exact_optimum(inst: &Instance, limit: usize) -> Result<Optimum> {
    let g = &inst.graph;
    let n = g.n();
    let limit = limit.min(HARD_LIMIT);
    if n > limit {
        return Err(Error::LimitExceeded(format!("exact solver takes at most {limit} vertices, got {n}")));
    }
    let full = (1usize << n) - 1;
    let idx = |mask: usize, v: usize| mask * n + v;
    const NONE: u32 = u32::MAX;
    let mut best = vec![NONE; (full + 1) * n];
    // Predecessor state and the step of the move into this state.
    let mut pred: Vec<(u32, u32)> = vec![(NONE, NONE); (full + 1) * n];
    let s = inst.start;
    let start_state = idx(1 << s, s);
    best[start_state] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0usize, start_state)));
    let mut goal = None;
    while let Some(Reverse((t, state))) = heap.pop() {
        if best[state] as usize != t {
            continue;
        }
        let (mask, v) = (state / n, state % n);
        if mask == full {
            goal = Some((t, state));
            break;
        }
        for &(w, e) in g.neighbors(v) {
            let Some(step) = g.next_present(e, t) else {
                continue;
            };
            let nt = step + 1;
            let next = idx(mask | (1 << w), w);
            if (nt as u64) < best[next] as u64 {
                best[next] = nt as u32;
                pred[next] = (state as u32, step as u32);
                heap.push(Reverse((nt, next)));
            }
        }
    }
    let (optimum, mut state) = goal.ok_or(Error::Infeasible)?;
    let mut rev = Vec::new();
    while state != start_state {
        let (p, step) = pred[state];
        rev.push((step as usize, state % n));
        state = p as usize;
    }
    let mut walk = TemporalWalk::new(s);
    for (step, to) in rev.into_iter().rev() {
        walk.push(step, to);
    }
    let rep = validate_walk(inst, &walk)?;
    if !rep.complete || rep.arrival != optimum {
        return Err(Error::Assertion(format!(
            "oracle witness reaches {} vertices by {}, expected all by {optimum}",
            rep.visited, rep.arrival
        )));
    }
    Ok(Optimum { optimum, walk })
}

pub const ENUM_MAX_VERTICES: usize = 7;
pub const ENUM_MAX_LIFETIME: usize = 64;

/// Optimum by stepping every reachable (position, visited set) forward one
/// step at a time, staying or crossing any present edge.
pub fn exhaustive_enum(inst: &Instance) -> Result<usize> {
    let g = &inst.graph;
    let n = g.n();
    if n > ENUM_MAX_VERTICES || g.lifetime() > ENUM_MAX_LIFETIME {
        return Err(Error::LimitExceeded(format!(
            "enumeration takes n <= {ENUM_MAX_VERTICES} and L <= {ENUM_MAX_LIFETIME}, got n = {n}, L = {}",
            g.lifetime()
        )));
    }
    let full = (1usize << n) - 1;
    let mut now = vec![false; (full + 1) * n];
    now[(1 << inst.start) * n + inst.start] = true;
    if full == 1 << inst.start {
        return Ok(0);
    }
    for t in 0..=g.lifetime() {
        let mut next = now.clone();
        for (state, &on) in now.iter().enumerate() {
            if !on {
                continue;
            }
            let (mask, v) = (state / n, state % n);
            for w in 0..n {
                if let Some(e) = g.edge_between(v, w) {
                    if g.is_present(e, t) {
                        next[(mask | 1 << w) * n + w] = true;
                    }
                }
            }
        }
        if (0..n).any(|v| next[full * n + v]) {
            return Ok(t + 1);
        }
        now = next;
    }
    Err(Error::Infeasible)
}
