//! Compressing multi-agent schedules to one agent, and carrying schedules
//! over to graphs with contracted edges.

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, TemporalGraph};
use crate::presence::PresencePattern;
use crate::reach::plan_reach;
use crate::walk::{MultiAgentSchedule, TemporalWalk};

/// A k-agent schedule that starts at some step `p` and is done by
/// `p + horizon`.
#[derive(Clone, Debug)]
pub struct Phase {
    pub schedule: MultiAgentSchedule,
    pub horizon: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseRecord {
    pub start: usize,
    pub horizon: usize,
    pub agents: usize,
    /// Targets still unvisited when the phase began.
    pub unvisited_before: usize,
    pub gained: usize,
    pub chosen: usize,
}

#[derive(Clone, Debug)]
pub struct Compression {
    pub walk: TemporalWalk,
    /// Time at which the last target was first visited.
    pub end_time: usize,
    pub phases: Vec<PhaseRecord>,
}

impl Compression {
    /// Largest phase horizon.
    pub fn t(&self) -> usize {
        self.phases.iter().map(|p| p.horizon).max().unwrap_or(0)
    }

    pub fn k(&self) -> usize {
        self.phases.iter().map(|p| p.agents).max().unwrap_or(1)
    }

    /// `(t + n) (ceil(k ln n) + 1)` for an `n`-vertex graph.
    pub fn bound(&self, n: usize) -> usize {
        let phases = (self.k() as f64 * (n.max(1) as f64).ln()).ceil() as usize + 1;
        (self.t() + n) * phases
    }
}

/// Single-agent walk from `start` at `start_time` visiting all `targets`:
/// phase `j` begins at `p_j` back at `start`, asks `builder(start, p_j)`
/// for a k-agent schedule covering the targets, copies the agent that
/// adds the most new targets (lowest index on ties), and returns to
/// `start`; `p_{j+1} = p_j + t_j + n`. The last phase stops at the last
/// new target.
pub fn multi_to_single(
    g: &TemporalGraph,
    start: usize,
    start_time: usize,
    targets: &[usize],
    builder: &mut dyn FnMut(usize, usize) -> Result<Phase>,
) -> Result<Compression> {
    let n = g.n();
    g.check_vertex(start)?;
    let mut is_target = vec![false; n];
    for &v in targets {
        g.check_vertex(v)?;
        is_target[v] = true;
    }
    let mut walk = TemporalWalk::new(start);
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut left = (0..n).filter(|&v| is_target[v] && !seen[v]).count();
    let mut end_time = start_time;
    let mut phases = Vec::new();
    let mut p = start_time;
    let all: Vec<usize> = (0..n).collect();
    while left > 0 {
        if p > g.lifetime() {
            return Err(Error::LifetimeExhausted { step: g.lifetime() + 1 });
        }
        let phase = builder(start, p)?;
        let agents = &phase.schedule.agents;
        if agents.is_empty() {
            return Err(Error::Assertion("phase builder returned no agents".into()));
        }
        let mut union = vec![false; n];
        let mut gains = Vec::with_capacity(agents.len());
        for (a, w) in agents.iter().enumerate() {
            if w.start != start || w.moves.first().is_some_and(|m| m.step < p) {
                return Err(Error::Assertion(format!("phase agent {a} does not start at {start} at step {p}")));
            }
            if w.end_time().is_some_and(|t| t > p + phase.horizon) {
                return Err(Error::Assertion(format!("phase agent {a} runs past its horizon")));
            }
            let mut mine = vec![false; n];
            mine[start] = true;
            for m in &w.moves {
                mine[m.to] = true;
            }
            gains.push((0..n).filter(|&v| mine[v] && is_target[v] && !seen[v]).count());
            for v in 0..n {
                union[v] |= mine[v];
            }
        }
        if (0..n).any(|v| is_target[v] && !seen[v] && !union[v]) {
            return Err(Error::Assertion(format!("phase at step {p} leaves targets unexplored")));
        }
        let chosen = (0..gains.len()).max_by_key(|&a| (gains[a], std::cmp::Reverse(a))).expect("agents");
        let before = left;
        for m in &agents[chosen].moves {
            walk.push(m.step, m.to);
            if is_target[m.to] && !std::mem::replace(&mut seen[m.to], true) {
                left -= 1;
                end_time = m.step + 1;
                if left == 0 {
                    break;
                }
            }
        }
        phases.push(PhaseRecord {
            start: p,
            horizon: phase.horizon,
            agents: agents.len(),
            unvisited_before: before,
            gained: before - left,
            chosen,
        });
        if left == 0 {
            break;
        }
        let mut back = plan_reach(g, walk.end_vertex(), start, p + phase.horizon, &all)?;
        for m in &back.moves {
            if is_target[m.to] && !std::mem::replace(&mut seen[m.to], true) {
                left -= 1;
                end_time = m.step + 1;
            }
        }
        if left == 0 {
            // The way back finished the job; stop where it did.
            back.truncate_at(end_time);
        }
        walk.append(&back);
        p += phase.horizon + n;
    }
    Ok(Compression {
        walk,
        end_time,
        phases,
    })
}

/// Whether each phase gained at least `ceil(U / k)` targets, `U` being the
/// targets left when it began and `k` its agent count. Returns the first
/// failing phase.
pub fn progress_per_phase_audit(run: &Compression) -> std::result::Result<(), usize> {
    for (i, ph) in run.phases.iter().enumerate() {
        if ph.gained < ph.unvisited_before.div_ceil(ph.agents) {
            return Err(i);
        }
    }
    Ok(())
}

/// Phase builder that replays the vertex routes of a fixed multi-agent
/// schedule from any start step, crossing each edge as soon as present.
pub struct RouteReplay<'a> {
    g: &'a TemporalGraph,
    routes: Vec<Vec<usize>>,
}

impl<'a> RouteReplay<'a> {
    pub fn new(g: &'a TemporalGraph, schedule: &MultiAgentSchedule) -> Self {
        let routes = schedule
            .agents
            .iter()
            .map(|w| std::iter::once(w.start).chain(w.moves.iter().map(|m| m.to)).collect())
            .collect();
        Self { g, routes }
    }

    pub fn build(&self, start: usize, p: usize) -> Result<Phase> {
        let mut agents = Vec::with_capacity(self.routes.len());
        let mut end = p;
        for route in &self.routes {
            if route[0] != start {
                return Err(Error::InvalidParameter(format!(
                    "replayed route starts at {}, expected {start}",
                    route[0]
                )));
            }
            let mut w = TemporalWalk::new(start);
            let mut t = p;
            for pair in route.windows(2) {
                let e = self.g.edge_between(pair[0], pair[1]).ok_or_else(|| {
                    Error::InvalidParameter(format!("route uses missing edge {{{}, {}}}", pair[0], pair[1]))
                })?;
                let s = self
                    .g
                    .next_present(e, t)
                    .ok_or(Error::LifetimeExhausted { step: self.g.lifetime() + 1 })?;
                w.push(s, pair[1]);
                t = s + 1;
            }
            end = end.max(t);
            agents.push(w);
        }
        Ok(Phase {
            schedule: MultiAgentSchedule { agents },
            horizon: end - p,
        })
    }
}

/// Result of contracting a set of edges.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub instance: Instance,
    /// Image of every original vertex.
    pub mapping: Vec<usize>,
}

/// Contracts `edges`: their endpoints merge, self-loops vanish and
/// parallel edges merge into one present whenever any of them is. New
/// ids follow the smallest original id of each class.
pub fn contract_edges(inst: &Instance, edges: &[EdgeId]) -> Result<Contraction> {
    let g = &inst.graph;
    let mut dsu = Dsu::new(g.n());
    for &e in edges {
        if e >= g.m() {
            return Err(Error::EdgeOutOfRange { edge: e, m: g.m() });
        }
        let ed = g.edge(e);
        dsu.union(ed.u, ed.v);
    }
    let mut id_of_root = vec![usize::MAX; g.n()];
    let mut mapping = vec![0; g.n()];
    let mut next = 0;
    for v in 0..g.n() {
        let r = dsu.find(v);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = next;
            next += 1;
        }
        mapping[v] = id_of_root[r];
    }
    let mut merged: std::collections::BTreeMap<(usize, usize), PresencePattern> = Default::default();
    for (e, ed) in g.edges().iter().enumerate() {
        let (a, b) = (mapping[ed.u], mapping[ed.v]);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        let p = g.presence(e);
        merged
            .entry(key)
            .and_modify(|q| *q = q.union(p, g.lifetime()))
            .or_insert_with(|| p.clone());
    }
    let list = merged.into_iter().map(|((a, b), p)| (a, b, p)).collect();
    let graph = TemporalGraph::new(next, list, g.lifetime())?;
    Ok(Contraction {
        instance: Instance::new(graph, mapping[inst.start])?,
        mapping,
    })
}

/// Maps a schedule of the original graph onto the contracted one; moves
/// that stay inside a merged vertex are dropped.
pub fn transfer_schedule(sched: &MultiAgentSchedule, mapping: &[usize]) -> MultiAgentSchedule {
    MultiAgentSchedule {
        agents: sched
            .agents
            .iter()
            .map(|w| {
                let mut out = TemporalWalk::new(mapping[w.start]);
                let mut at = mapping[w.start];
                for m in &w.moves {
                    let to = mapping[m.to];
                    if to != at {
                        out.push(m.step, to);
                        at = to;
                    }
                }
                out
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explorers::explore_greedy;
    use crate::generators::{cycle_graph, grid_graph, random_realization};
    use crate::walk::{validate_schedule, validate_walk};

    #[test]
    fn return_trip_that_finishes_is_cut() {
        // 4-cycle whose edge {0, 1} is only there at step 0, so the way
        // back from 2 passes the last target 3.
        let g = TemporalGraph::new(
            4,
            vec![
                (0, 1, PresencePattern::steps([0])),
                (1, 2, PresencePattern::Always),
                (2, 3, PresencePattern::Always),
                (0, 3, PresencePattern::Always),
            ],
            16,
        )
        .unwrap();
        let mut builder = |_: usize, _: usize| {
            let mut long = TemporalWalk::new(0);
            long.push(0, 1);
            long.push(1, 2);
            let mut short = TemporalWalk::new(0);
            short.push(0, 3);
            Ok(Phase {
                schedule: MultiAgentSchedule {
                    agents: vec![short, long],
                },
                horizon: 2,
            })
        };
        let run = multi_to_single(&g, 0, 0, &[0, 1, 2, 3], &mut builder).unwrap();
        assert_eq!(run.walk.end_vertex(), 3);
        assert_eq!(run.walk.end_time(), Some(run.end_time));
    }

    #[test]
    fn contraction_merges_parallel_edges() {
        let g = TemporalGraph::new(
            3,
            vec![
                (0, 1, PresencePattern::Always),
                (1, 2, PresencePattern::steps([2])),
                (0, 2, PresencePattern::steps([5])),
            ],
            9,
        )
        .unwrap();
        let inst = Instance::new(g, 2).unwrap();
        let c = contract_edges(&inst, &[0]).unwrap();
        assert_eq!(c.mapping, vec![0, 0, 1]);
        assert_eq!(c.instance.n(), 2);
        assert_eq!(c.instance.start, 1);
        let gg = &c.instance.graph;
        assert_eq!(gg.m(), 1);
        assert!(gg.is_present(0, 2) && gg.is_present(0, 5) && !gg.is_present(0, 3));
    }

    #[test]
    fn transfer_keeps_validity() {
        for seed in 0..10 {
            let inst = random_realization(&cycle_graph(9), 81, 0.3, seed).unwrap();
            let w = explore_greedy(&inst).unwrap();
            let before = validate_walk(&inst, &w).unwrap().arrival;
            let c = contract_edges(&inst, &[(seed as usize) % 9, 4]).unwrap();
            let moved = transfer_schedule(&MultiAgentSchedule::single(w), &c.mapping);
            let rep = validate_schedule(&c.instance, &moved).unwrap();
            assert!(rep.covered && rep.arrival <= before);
        }
    }

    #[test]
    fn replay_compression() {
        let inst = random_realization(&grid_graph(6), 144, 0.4, 2).unwrap();
        let g = &inst.graph;
        // Two agents sweeping each row from the start corner.
        let mut top = TemporalWalk::new(0);
        let mut bottom = TemporalWalk::new(0);
        let mut t = 0;
        for c in 1..6 {
            t = g.next_present(g.edge_between(c - 1, c).unwrap(), t).unwrap() + 1;
            top.push(t - 1, c);
        }
        let r = g.next_present(g.edge_between(0, 6).unwrap(), 0).unwrap();
        bottom.push(r, 6);
        let mut t = r + 1;
        for c in 7..12 {
            t = g.next_present(g.edge_between(c - 1, c).unwrap(), t).unwrap() + 1;
            bottom.push(t - 1, c);
        }
        let sched = MultiAgentSchedule { agents: vec![top, bottom] };
        let replay = RouteReplay::new(g, &sched);
        let all: Vec<usize> = (0..12).collect();
        let run = multi_to_single(g, 0, 0, &all, &mut |s, p| replay.build(s, p)).unwrap();
        let rep = validate_walk(&inst, &run.walk).unwrap();
        assert!(rep.complete);
        assert_eq!(rep.arrival, run.end_time);
        assert!(rep.arrival <= run.bound(12));
        progress_per_phase_audit(&run).unwrap();
    }
}
