//! Earliest-arrival search and the bounded reachability planner.

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::TemporalView;
use crate::walk::TemporalWalk;

/// Earliest reach times from one source, in view time.
#[derive(Clone, Debug)]
pub struct Arrivals {
    pub from: usize,
    pub t0: usize,
    /// `times[v]` is the earliest time `v` can be occupied, `None` if
    /// unreachable within the searched steps.
    pub times: Vec<Option<usize>>,
    /// `(previous vertex, view step of the move)` for every reached vertex
    /// other than the source.
    pub pred: Vec<Option<(usize, usize)>>,
}

impl Arrivals {
    /// Walk (in view steps) realising `times[v]`.
    pub fn walk_to(&self, v: usize) -> Option<TemporalWalk> {
        self.times[v]?;
        let mut rev = Vec::new();
        let mut cur = v;
        while cur != self.from {
            let (p, step) = self.pred[cur]?;
            rev.push((step, cur));
            cur = p;
        }
        let mut w = TemporalWalk::new(self.from);
        for (step, to) in rev.into_iter().rev() {
            w.push(step, to);
        }
        Some(w)
    }
}

/// Time-layered frontier expansion from `(from, t0)`. At view step `i`,
/// every vertex occupied by time `i` may cross one edge present at `i`.
/// `allowed` restricts the vertices the search may enter; `stop` is asked
/// after every step and ends the search early when it returns true.
pub fn frontier_search<V: TemporalView + ?Sized>(
    view: &V,
    from: usize,
    t0: usize,
    allowed: Option<&[bool]>,
    mut stop: impl FnMut(&[Option<usize>], usize) -> bool,
) -> Arrivals {
    let g = view.graph();
    let n = g.n();
    let mut times = vec![None; n];
    let mut pred = vec![None; n];
    times[from] = Some(t0);
    let ok = |v: usize| view.includes(v) && allowed.is_none_or(|a| a[v]);
    let reachable_total = (0..n).filter(|&v| ok(v)).count().max(1);
    let mut reached = 1;
    let mut active = vec![from];
    let mut fresh: Vec<(usize, usize)> = Vec::new();
    if stop(&times, t0) {
        return Arrivals { from, t0, times, pred };
    }
    let mut i = t0;
    while i < view.len() && reached < reachable_total {
        fresh.clear();
        for &u in &active {
            for &(w, e) in g.neighbors(u) {
                if times[w].is_none() && ok(w) && view.present(e, i) {
                    times[w] = Some(i + 1);
                    pred[w] = Some((u, i));
                    fresh.push((w, u));
                }
            }
        }
        reached += fresh.len();
        active.extend(fresh.iter().map(|&(w, _)| w));
        active.retain(|&u| {
            g.neighbors(u)
                .iter()
                .any(|&(w, _)| times[w].is_none() && ok(w))
        });
        i += 1;
        if !fresh.is_empty() && stop(&times, i) {
            break;
        }
    }
    Arrivals { from, t0, times, pred }
}

/// Earliest time every vertex can be reached from `from` starting at view
/// time `t0`; unreachable vertices (within the view) are `None`.
pub fn earliest_arrival<V: TemporalView + ?Sized>(
    view: &V,
    from: usize,
    t0: usize,
) -> Result<Arrivals> {
    view.graph().check_vertex(from)?;
    if t0 >= view.len() {
        return Err(Error::StepOutOfRange {
            step: t0,
            lifetime: view.len().saturating_sub(1),
        });
    }
    Ok(frontier_search(view, from, t0, None, |_, _| false))
}

/// Walk from `from` to `to` starting at view time `t0` that stays inside
/// `h` and arrives by `t0 + |h| - 1`, provided that in each of the steps
/// `t0 ..= t0 + |h| - 2` the subgraph induced by `h` joins `from` and `to`.
/// The precondition is checked and its first failure reported.
pub fn plan_reach<V: TemporalView + ?Sized>(
    view: &V,
    from: usize,
    to: usize,
    t0: usize,
    h: &[usize],
) -> Result<TemporalWalk> {
    let g = view.graph();
    g.check_vertex(from)?;
    g.check_vertex(to)?;
    let mut mask = vec![false; g.n()];
    for &v in h {
        g.check_vertex(v)?;
        mask[v] = true;
    }
    if !mask[from] || !mask[to] {
        return Err(Error::InvalidParameter(
            "plan_reach endpoints must lie in the vertex set".into(),
        ));
    }
    if from == to {
        return Ok(TemporalWalk::new(from));
    }
    let k = mask.iter().filter(|&&b| b).count();
    let last = t0 + k - 2;
    if last >= view.len() {
        return Err(Error::LifetimeExhausted {
            step: if view.is_empty() { 0 } else { view.base_step(view.len() - 1) + 1 },
        });
    }
    let mut dsu = Dsu::new(g.n());
    let inside: Vec<usize> = (0..g.m())
        .filter(|&e| {
            let ed = g.edge(e);
            mask[ed.u] && mask[ed.v]
        })
        .collect();
    for i in t0..=last {
        dsu.reset();
        for &e in &inside {
            if view.present(e, i) {
                let ed = g.edge(e);
                dsu.union(ed.u, ed.v);
            }
        }
        if !dsu.same(from, to) {
            return Err(Error::ReachPrecondition {
                step: view.base_step(i),
                from,
                to,
            });
        }
    }
    let arr = frontier_search(view, from, t0, Some(&mask), |times, _| times[to].is_some());
    match arr.times[to] {
        Some(t) if t <= t0 + k - 1 => Ok(arr.walk_to(to).expect("reached vertex has a walk")),
        _ => Err(Error::Assertion(format!(
            "plan_reach from {from} to {to} exceeded {} steps",
            k - 1
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Instance, StepView, TemporalGraph};
    use crate::presence::PresencePattern;
    use crate::walk::validate_walk;

    fn path3() -> TemporalGraph {
        TemporalGraph::new(
            3,
            vec![(0, 1, PresencePattern::Always), (1, 2, PresencePattern::Always)],
            9,
        )
        .unwrap()
    }

    #[test]
    fn staying_put_and_single_edge() {
        let g = path3();
        let a = earliest_arrival(&g, 1, 4).unwrap();
        assert_eq!(a.times[1], Some(4));
        let a = earliest_arrival(&g, 0, 0).unwrap();
        assert_eq!(a.times[1], Some(1));
        assert_eq!(a.times[2], Some(2));
        let w = a.walk_to(2).unwrap();
        let inst = Instance::new(g.clone(), 0).unwrap();
        assert_eq!(validate_walk(&inst, &w).unwrap().arrival, 2);
    }

    #[test]
    fn unreachable_is_none() {
        let g = TemporalGraph::new(
            3,
            vec![(0, 1, PresencePattern::Always), (1, 2, PresencePattern::steps([0]))],
            5,
        )
        .unwrap();
        let a = earliest_arrival(&g, 0, 0).unwrap();
        assert_eq!(a.times[2], None);
    }

    #[test]
    fn plan_reach_examples() {
        let g = path3();
        assert!(plan_reach(&g, 1, 1, 3, &[1]).unwrap().is_empty());
        let w = plan_reach(&g, 0, 2, 0, &[0, 1, 2]).unwrap();
        assert_eq!(w.end_vertex(), 2);
        assert!(w.end_time().unwrap() <= 2);
    }

    #[test]
    fn plan_reach_reports_precondition_step() {
        let g = TemporalGraph::new(
            3,
            vec![
                (0, 1, PresencePattern::Always),
                (1, 2, PresencePattern::Intervals(vec![(0, 2), (4, 9)])),
            ],
            9,
        )
        .unwrap();
        let err = plan_reach(&g, 0, 2, 2, &[0, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::ReachPrecondition { step: 3, .. }));
    }

    #[test]
    fn views_map_steps() {
        let g = path3();
        let v = StepView::new(&g, vec![2, 5, 7]).unwrap();
        let a = earliest_arrival(&v, 0, 0).unwrap();
        assert_eq!(a.times[2], Some(2));
        let w = a.walk_to(2).unwrap().to_base(&v);
        assert_eq!(w.moves.iter().map(|m| m.step).collect::<Vec<_>>(), vec![2, 5]);
    }
}
