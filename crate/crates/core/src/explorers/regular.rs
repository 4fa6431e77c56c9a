use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::generators::RegularityProfile;
use crate::graph::{Instance, TemporalGraph};
use crate::presence::PresencePattern;
use crate::walk::TemporalWalk;

/// Where the absence bounds come from.
#[derive(Clone, Debug)]
pub enum RegularMode<'a> {
    Profile(&'a RegularityProfile),
    /// Measure `I_e` from the instance and verify regularity for this `c`.
    Estimate { c: f64 },
}

/// `I_e` rounded down to a power of two.
pub fn rounded_weight(bound: usize) -> usize {
    1 << (usize::BITS - 1 - bound.max(1).leading_zeros())
}

/// Longest absence run and shortest run that is not cut off by the ends
/// of the lifetime. Periodic patterns are scanned over three periods.
fn absence_extent(p: &PresencePattern, lifetime: usize) -> Option<(usize, Option<usize>)> {
    let horizon = match p {
        PresencePattern::Periodic { offset, .. } => lifetime.min(offset + 3 * p.period()),
        _ => lifetime,
    };
    if p.next_present(0, horizon).is_none() {
        return None;
    }
    let runs = p.absence_runs(horizon);
    let max = runs.iter().map(|r| r.1).max().unwrap_or(0);
    let min = runs
        .iter()
        .filter(|&&(s, len)| s > 0 && s + len <= horizon)
        .map(|r| r.1)
        .min();
    Some((max, min))
}

/// Profile measured from the instance: `I_e` is the longest absence run
/// (at least 1); fails if an edge is never present or if some interior
/// run is shorter than `I_e / c`.
pub fn estimate_profile(g: &TemporalGraph, c: f64) -> Result<RegularityProfile> {
    let mut bounds = Vec::with_capacity(g.m());
    for e in 0..g.m() {
        let (max, min) = absence_extent(g.presence(e), g.lifetime()).ok_or_else(|| {
            Error::InvalidParameter(format!("edge {e} is never present, so it is not regular"))
        })?;
        let bound = max.max(1);
        if let Some(min) = min {
            if (min as f64) < bound as f64 / c {
                return Err(Error::InvalidParameter(format!(
                    "edge {e} is not regular for c = {c}: absence runs range over [{min}, {bound}]"
                )));
            }
        }
        bounds.push(bound);
    }
    let prof = RegularityProfile { bounds, c };
    prof.check(g.m())?;
    Ok(prof)
}

fn check_size(inst: &Instance) -> Result<()> {
    let (n, m) = (inst.n(), inst.graph.m());
    if m > 3 * n {
        return Err(Error::InvalidParameter(format!("regular explorer needs at most 3n = {} edges, got {m}", 3 * n)));
    }
    Ok(())
}

/// Minimum spanning tree under the rounded weights (ties by edge id).
pub fn regular_tree(g: &TemporalGraph, prof: &RegularityProfile) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.m()).collect();
    order.sort_by_key(|&e| (rounded_weight(prof.bounds[e]), e));
    let mut dsu = Dsu::new(g.n());
    order
        .into_iter()
        .filter(|&e| {
            let ed = g.edge(e);
            dsu.union(ed.u, ed.v)
        })
        .collect()
}

/// Closed Euler tour of the tree (vertices after the root, paired with
/// the edge used), depth first with neighbours in id order.
fn euler_tour(g: &TemporalGraph, tree: &[usize], root: usize) -> Vec<(usize, usize)> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n()];
    for &e in tree {
        let ed = g.edge(e);
        adj[ed.u].push((ed.v, e));
        adj[ed.v].push((ed.u, e));
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut tour = Vec::with_capacity(2 * tree.len());
    // (vertex, parent edge, next child index)
    let mut stack: Vec<(usize, Option<(usize, usize)>, usize)> = vec![(root, None, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, up, i) = *top;
        if i < adj[v].len() {
            top.2 += 1;
            let (w, e) = adj[v][i];
            if up.is_some_and(|(p, _)| p == w) {
                continue;
            }
            tour.push((w, e));
            stack.push((w, Some((v, e)), 0));
        } else {
            stack.pop();
            if let Some((p, e)) = up {
                tour.push((p, e));
            }
        }
    }
    tour
}

/// Explores a graph with regularly present edges by following an Euler
/// tour of the minimum spanning tree under rounded absence bounds.
pub fn explore_regular_mst(inst: &Instance, mode: RegularMode<'_>) -> Result<TemporalWalk> {
    check_size(inst)?;
    let g = &inst.graph;
    let estimated;
    let prof = match mode {
        RegularMode::Profile(p) => {
            p.check(g.m())?;
            p
        }
        RegularMode::Estimate { c } => {
            estimated = estimate_profile(g, c)?;
            &estimated
        }
    };
    let tree = regular_tree(g, prof);
    if tree.len() + 1 != g.n() {
        return Err(Error::InvalidGraph("underlying graph is not connected".into()));
    }
    let mut walk = TemporalWalk::new(inst.start);
    let mut seen = vec![false; g.n()];
    seen[inst.start] = true;
    let mut left = g.n() - 1;
    let mut time = 0;
    for (to, e) in euler_tour(g, &tree, inst.start) {
        if left == 0 {
            break;
        }
        let step = g
            .next_present(e, time)
            .ok_or(Error::LifetimeExhausted { step: g.lifetime() + 1 })?;
        if step - time > prof.bounds[e] {
            return Err(Error::Assertion(format!(
                "waited {} steps for edge {e} whose absence bound is {}",
                step - time,
                prof.bounds[e]
            )));
        }
        walk.push(step, to);
        time = step + 1;
        if !std::mem::replace(&mut seen[to], true) {
            left -= 1;
        }
    }
    Ok(walk)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MstAudit {
    /// Sum of rounded weights over the tree.
    pub tree_weight: usize,
    /// Charge received by every edge of the graph.
    pub charges: Vec<f64>,
    pub max_charge: f64,
    /// Smallest ratio (charge a component hands out) / 2^k over all
    /// levels and components; the argument needs it to be at least 1.
    pub min_component_ratio: f64,
    pub charge_ok: bool,
    pub weight_ok: bool,
}

/// Recomputes the charging argument behind the linear bound on the tree
/// weight for a concrete instance and profile.
pub fn mst_weight_audit(inst: &Instance, prof: &RegularityProfile) -> Result<MstAudit> {
    check_size(inst)?;
    let g = &inst.graph;
    prof.check(g.m())?;
    let c = prof.c;
    let weight: Vec<usize> = prof.bounds.iter().map(|&b| rounded_weight(b)).collect();
    let tree = regular_tree(g, prof);
    let tree_weight: usize = tree.iter().map(|&e| weight[e]).sum();
    let mut charges = vec![0.0; g.m()];
    let mut min_ratio = f64::INFINITY;
    let mut levels: Vec<usize> = tree.iter().map(|&e| weight[e]).collect();
    levels.sort_unstable();
    levels.dedup();
    for &level in &levels {
        let mut dsu = Dsu::new(g.n());
        for &e in &tree {
            if weight[e] != level {
                let ed = g.edge(e);
                dsu.union(ed.u, ed.v);
            }
        }
        let comp: Vec<usize> = (0..g.n()).map(|v| dsu.find(v)).collect();
        let mut handed = vec![0.0; g.n()];
        for (e, ed) in g.edges().iter().enumerate() {
            let (a, b) = (comp[ed.u], comp[ed.v]);
            if a != b {
                let share = c * level as f64 / weight[e] as f64;
                charges[e] += 2.0 * share;
                handed[a] += share;
                handed[b] += share;
            }
        }
        for v in 0..g.n() {
            if comp[v] == v {
                min_ratio = min_ratio.min(handed[v] / level as f64);
            }
        }
    }
    let max_charge = charges.iter().copied().fold(0.0, f64::max);
    Ok(MstAudit {
        tree_weight,
        max_charge,
        min_component_ratio: min_ratio,
        charge_ok: max_charge <= 8.0 * c,
        weight_ok: tree_weight as f64 <= 8.0 * c * g.m() as f64,
        charges,
    })
}
