use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Instance, TemporalView};

/// One move: at `step`, traverse the edge to `to`. Completes at `step + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Move {
    pub step: usize,
    pub to: usize,
}

impl From<(usize, usize)> for Move {
    fn from((step, to): (usize, usize)) -> Self {
        Move { step, to }
    }
}

impl From<Move> for (usize, usize) {
    fn from(m: Move) -> Self {
        (m.step, m.to)
    }
}

/// A time-respecting walk: strictly increasing move steps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalWalk {
    pub start: usize,
    pub moves: Vec<Move>,
}

impl TemporalWalk {
    pub fn new(start: usize) -> Self {
        Self {
            start,
            moves: Vec::new(),
        }
    }

    pub fn push(&mut self, step: usize, to: usize) {
        debug_assert!(self.moves.last().is_none_or(|m| m.step < step));
        self.moves.push(Move { step, to });
    }

    pub fn end_vertex(&self) -> usize {
        self.moves.last().map_or(self.start, |m| m.to)
    }

    /// Time at which the last move completes, or `None` for an empty walk.
    pub fn end_time(&self) -> Option<usize> {
        self.moves.last().map(|m| m.step + 1)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `(time, vertex)` positions, starting with `(start_time, start)`.
    pub fn positions(&self, start_time: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        std::iter::once((start_time, self.start))
            .chain(self.moves.iter().map(|m| (m.step + 1, m.to)))
    }

    /// Appends a walk that starts where this one ends.
    pub fn append(&mut self, other: &TemporalWalk) {
        debug_assert_eq!(other.start, self.end_vertex());
        self.moves.extend_from_slice(&other.moves);
    }

    /// Re-expresses a walk over view steps in base steps.
    pub fn to_base<V: TemporalView + ?Sized>(&self, view: &V) -> TemporalWalk {
        TemporalWalk {
            start: self.start,
            moves: self
                .moves
                .iter()
                .map(|m| Move {
                    step: view.base_step(m.step),
                    to: m.to,
                })
                .collect(),
        }
    }

    /// Drops every move that completes after `time`.
    pub fn truncate_at(&mut self, time: usize) {
        let keep = self.moves.partition_point(|m| m.step < time);
        self.moves.truncate(keep);
    }
}

/// Several agents exploring together; all start at `s` at time 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiAgentSchedule {
    pub agents: Vec<TemporalWalk>,
}

impl MultiAgentSchedule {
    pub fn single(walk: TemporalWalk) -> Self {
        Self { agents: vec![walk] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    WrongStart { expected: usize, found: usize },
    StepOrder { previous: Option<usize>, step: usize },
    VertexOutOfRange { vertex: usize },
    NotAdjacent { from: usize, to: usize },
    AbsentEdge { from: usize, to: usize, step: usize },
}

/// First offending move of a walk (`index` counts moves from 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub agent: Option<usize>,
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.agent {
            write!(f, "agent {a}: ")?;
        }
        match self.kind {
            ViolationKind::WrongStart { expected, found } => {
                write!(f, "walk starts at {found}, expected {expected}")
            }
            ViolationKind::StepOrder { previous, step } => match previous {
                Some(p) => write!(f, "move {}: step {step} does not follow step {p}", self.index),
                None => write!(f, "move {}: step {step} precedes the walk start time", self.index),
            },
            ViolationKind::VertexOutOfRange { vertex } => {
                write!(f, "move {}: vertex {vertex} out of range", self.index)
            }
            ViolationKind::NotAdjacent { from, to } => {
                write!(f, "move {}: {from} and {to} are not adjacent", self.index)
            }
            ViolationKind::AbsentEdge { from, to, step } => {
                write!(f, "move {}: edge {{{from}, {to}}} absent at step {step}", self.index)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkReport {
    /// Time of the last first visit (0 when only the start is visited).
    pub arrival: usize,
    /// First-visit time per vertex.
    pub first_visit: Vec<Option<usize>>,
    pub visited: usize,
    pub complete: bool,
}

/// Checks a single walk of `inst` starting at time 0 from the start vertex.
pub fn validate_walk(inst: &Instance, walk: &TemporalWalk) -> Result<WalkReport, Violation> {
    if walk.start != inst.start {
        return Err(Violation {
            agent: None,
            index: 0,
            kind: ViolationKind::WrongStart {
                expected: inst.start,
                found: walk.start,
            },
        });
    }
    let first_visit = trace_walk(inst, walk, 0, None)?;
    Ok(report(first_visit))
}

/// Checks a walk starting at `start_time`, returning first-visit times.
pub(crate) fn trace_walk(
    inst: &Instance,
    walk: &TemporalWalk,
    start_time: usize,
    agent: Option<usize>,
) -> Result<Vec<Option<usize>>, Violation> {
    let g = &inst.graph;
    let n = g.n();
    let fail = |index, kind| Violation { agent, index, kind };
    if walk.start >= n {
        return Err(fail(0, ViolationKind::VertexOutOfRange { vertex: walk.start }));
    }
    let mut first = vec![None; n];
    first[walk.start] = Some(start_time);
    let mut pos = walk.start;
    let mut prev: Option<usize> = None;
    for (i, m) in walk.moves.iter().enumerate() {
        let ordered = match prev {
            Some(p) => m.step > p,
            None => m.step >= start_time,
        };
        if !ordered {
            return Err(fail(i, ViolationKind::StepOrder { previous: prev, step: m.step }));
        }
        if m.to >= n {
            return Err(fail(i, ViolationKind::VertexOutOfRange { vertex: m.to }));
        }
        let Some(e) = g.edge_between(pos, m.to) else {
            return Err(fail(i, ViolationKind::NotAdjacent { from: pos, to: m.to }));
        };
        if !g.is_present(e, m.step) {
            return Err(fail(
                i,
                ViolationKind::AbsentEdge {
                    from: pos,
                    to: m.to,
                    step: m.step,
                },
            ));
        }
        if first[m.to].is_none() {
            first[m.to] = Some(m.step + 1);
        }
        pos = m.to;
        prev = Some(m.step);
    }
    Ok(first)
}

fn report(first_visit: Vec<Option<usize>>) -> WalkReport {
    let visited = first_visit.iter().filter(|t| t.is_some()).count();
    let arrival = first_visit.iter().flatten().copied().max().unwrap_or(0);
    WalkReport {
        arrival,
        complete: visited == first_visit.len(),
        visited,
        first_visit,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleReport {
    pub arrival: usize,
    pub first_visit: Vec<Option<usize>>,
    pub covered: bool,
    pub per_agent: Vec<WalkReport>,
}

/// Checks every agent's walk and merges first visits across agents.
pub fn validate_schedule(
    inst: &Instance,
    sch: &MultiAgentSchedule,
) -> Result<ScheduleReport, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut per_agent = Vec::with_capacity(sch.agents.len());
    let mut merged: Vec<Option<usize>> = vec![None; inst.n()];
    for (a, walk) in sch.agents.iter().enumerate() {
        if walk.start != inst.start {
            violations.push(Violation {
                agent: Some(a),
                index: 0,
                kind: ViolationKind::WrongStart {
                    expected: inst.start,
                    found: walk.start,
                },
            });
            continue;
        }
        match trace_walk(inst, walk, 0, Some(a)) {
            Ok(first) => {
                for (m, f) in merged.iter_mut().zip(&first) {
                    *m = match (*m, *f) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                }
                per_agent.push(report(first));
            }
            Err(v) => violations.push(v),
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    if sch.agents.is_empty() {
        merged[inst.start] = Some(0);
    }
    let r = report(merged);
    Ok(ScheduleReport {
        arrival: r.arrival,
        covered: r.complete,
        first_visit: r.first_visit,
        per_agent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::TemporalGraph;
    use crate::presence::PresencePattern;

    fn static_graph(n: usize, edges: &[(usize, usize)], lifetime: usize) -> TemporalGraph {
        TemporalGraph::new(
            n,
            edges.iter().map(|&(a, b)| (a, b, PresencePattern::Always)).collect(),
            lifetime,
        )
        .unwrap()
    }

    fn cycle5() -> Instance {
        let g = static_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 25);
        Instance::new(g, 0).unwrap()
    }

    #[test]
    fn empty_walk_arrives_at_zero() {
        let inst = cycle5();
        let r = validate_walk(&inst, &TemporalWalk::new(0)).unwrap();
        assert_eq!(r.arrival, 0);
        assert_eq!(r.visited, 1);
        assert!(!r.complete);
    }

    #[test]
    fn static_cycle_walk() {
        let inst = cycle5();
        let mut w = TemporalWalk::new(0);
        for (i, v) in [1, 2, 3, 4].into_iter().enumerate() {
            w.push(i, v);
        }
        let r = validate_walk(&inst, &w).unwrap();
        assert_eq!(r.arrival, 4);
        assert!(r.complete);
    }

    #[test]
    fn absent_edge_is_reported() {
        let g = TemporalGraph::new(
            3,
            vec![
                (0, 1, PresencePattern::Always),
                (1, 2, PresencePattern::steps([5])),
            ],
            9,
        )
        .unwrap();
        let inst = Instance::new(g, 0).unwrap();
        let w = TemporalWalk {
            start: 0,
            moves: vec![Move { step: 0, to: 1 }, Move { step: 2, to: 2 }],
        };
        let v = validate_walk(&inst, &w).unwrap_err();
        assert_eq!(v.index, 1);
        assert!(matches!(v.kind, ViolationKind::AbsentEdge { step: 2, .. }));
    }

    #[test]
    fn order_and_adjacency_violations() {
        let inst = cycle5();
        let w = TemporalWalk {
            start: 0,
            moves: vec![Move { step: 3, to: 1 }, Move { step: 3, to: 2 }],
        };
        assert!(matches!(
            validate_walk(&inst, &w).unwrap_err().kind,
            ViolationKind::StepOrder { .. }
        ));
        let w = TemporalWalk {
            start: 0,
            moves: vec![Move { step: 0, to: 2 }],
        };
        assert!(matches!(
            validate_walk(&inst, &w).unwrap_err().kind,
            ViolationKind::NotAdjacent { .. }
        ));
    }

    #[test]
    fn schedule_coverage() {
        let g = static_graph(4, &[(0, 1), (1, 2), (2, 3)], 16);
        let inst = Instance::new(g, 1).unwrap();
        let a = TemporalWalk {
            start: 1,
            moves: vec![Move { step: 0, to: 0 }],
        };
        let b = TemporalWalk {
            start: 1,
            moves: vec![Move { step: 0, to: 2 }, Move { step: 1, to: 3 }],
        };
        let r = validate_schedule(&inst, &MultiAgentSchedule { agents: vec![a.clone(), b] }).unwrap();
        assert!(r.covered);
        assert_eq!(r.arrival, 2);

        let single = validate_schedule(&inst, &MultiAgentSchedule::single(a.clone())).unwrap();
        assert!(!single.covered);
        assert_eq!(single.arrival, validate_walk(&inst, &a).unwrap().arrival);
    }
}
