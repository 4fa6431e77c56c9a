use std::collections::BTreeSet;

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::generators::{grid_graph, grid_id};
use crate::graph::{Instance, StepView, TemporalGraph, TemporalView};
use crate::reach::plan_reach;
use crate::walk::{MultiAgentSchedule, TemporalWalk};

/// Column ranges are inclusive `(lo, hi)`.
type Cols = (usize, usize);

fn width((lo, hi): Cols) -> usize {
    hi + 1 - lo
}

fn halves((lo, hi): Cols) -> Vec<Cols> {
    if hi < lo {
        return Vec::new();
    }
    let w = hi + 1 - lo;
    if w == 1 {
        return vec![(lo, hi)];
    }
    let left = w.div_ceil(2);
    vec![(lo, lo + left - 1), (lo + left, hi)]
}

fn sweep_window(wh: usize) -> usize {
    if wh >= 3 {
        grid_budget(wh) + wh
    } else {
        0
    }
}

/// Steps the recursive procedure may use when `G'` has `w` columns.
pub fn grid_budget(w: usize) -> usize {
    halves((0, w.max(1) - 1))
        .into_iter()
        .map(|h| 2 * w + sweep_window(width(h)))
        .sum::<usize>()
        * usize::from(w > 0)
}

/// Agents used on a grid with `cols` columns.
pub fn grid_agents(cols: usize) -> usize {
    match cols {
        0 => 0,
        1 => 2,
        _ => recursive_agents(cols),
    }
}

fn recursive_agents(w: usize) -> usize {
    let h = w.div_ceil(2);
    if h <= 2 {
        4
    } else {
        4 + recursive_agents(h)
    }
}

struct Ctx<'a> {
    g: &'a TemporalGraph,
    cols: usize,
    walks: Vec<TemporalWalk>,
    depth: usize,
}

impl Ctx<'_> {
    fn id(&self, r: usize, c: usize) -> usize {
        grid_id(self.cols, r, c)
    }

    fn block(&self, (lo, hi): Cols) -> Vec<usize> {
        (lo..=hi).flat_map(|c| [self.id(0, c), self.id(1, c)]).collect()
    }

    fn horizontal(&self, r: usize, c: usize) -> usize {
        self.g
            .edge_between(self.id(r, c), self.id(r, c + 1))
            .expect("grid horizontal")
    }

    fn route(&mut self, view: &StepView, agent: usize, to: usize, t0: usize, h: &[usize]) -> Result<()> {
        let from = self.walks[agent].end_vertex();
        let w = plan_reach(view, from, to, t0, h).map_err(|e| match e {
            Error::ReachPrecondition { step, from, to } => Error::Assertion(format!(
                "grid premise failed: {from} and {to} not joined inside the block at step {step}"
            )),
            other => other,
        })?;
        self.walks[agent].append(&w.to_base(view));
        Ok(())
    }

    /// Checks that all of `inner` stays joined inside `outer` at view steps `0..len`.
    fn check_premise(&self, view: &StepView, outer: Cols, inner: Cols, len: usize) -> Result<()> {
        if inner.1 < inner.0 {
            return Ok(());
        }
        let verts = self.block(outer);
        let mut mask = vec![false; self.g.n()];
        for &v in &verts {
            mask[v] = true;
        }
        let inside: Vec<usize> = (0..self.g.m())
            .filter(|&e| {
                let ed = self.g.edge(e);
                mask[ed.u] && mask[ed.v]
            })
            .collect();
        let targets = self.block(inner);
        let mut dsu = Dsu::new(self.g.n());
        for i in 0..len.min(view.len()) {
            dsu.reset();
            for &e in &inside {
                if view.present(e, i) {
                    let ed = self.g.edge(e);
                    dsu.union(ed.u, ed.v);
                }
            }
            if let Some(&bad) = targets.iter().find(|&&v| !dsu.same(v, targets[0])) {
                return Err(Error::Assertion(format!(
                    "grid premise failed at step {}: {} and {bad} not joined inside columns {}..={}",
                    view.base_step(i),
                    targets[0],
                    outer.0,
                    outer.1
                )));
            }
        }
        Ok(())
    }

    /// Explores columns `inner` with `agents`, all inside `inner`, using
    /// steps of `view` from index 0. Returns the first unused view index.
    fn explore(&mut self, view: &StepView, outer: Cols, inner: Cols, agents: &[usize], depth: usize) -> Result<usize> {
        self.depth = self.depth.max(depth);
        let wo = width(outer);
        self.check_premise(view, outer, inner, grid_budget(wo))?;
        let block = self.block(outer);
        let mut t = 0;
        for half in halves(inner) {
            let (lo, hi) = half;
            let wh = width(half);
            let start_sweep = t + 2 * wo;
            let window = sweep_window(wh);
            if start_sweep + window > view.len() {
                return Err(Error::LifetimeExhausted {
                    step: view.steps().last().map_or(0, |s| s + 1),
                });
            }
            // Corner pairs sweep inward whenever both of their horizontals
            // are present; simulate first to locate the middle.
            let (mut x, mut y) = (lo, hi);
            let mut moves: Vec<(usize, bool, bool)> = Vec::new();
            let mut still = Vec::new();
            let mut last_move = start_sweep;
            for i in start_sweep..start_sweep + window {
                if y <= x + 1 {
                    break;
                }
                let left = view.present(self.horizontal(0, x), i) && view.present(self.horizontal(1, x), i);
                let right = view.present(self.horizontal(0, y - 1), i) && view.present(self.horizontal(1, y - 1), i);
                if left {
                    x += 1;
                }
                if right {
                    y -= 1;
                }
                if left || right {
                    moves.push((i, left, right));
                    last_move = i + 1;
                } else {
                    still.push(i);
                }
            }
            let swept = y <= x + 1;
            // Placement.
            let corners = [self.id(0, lo), self.id(1, lo), self.id(0, hi), self.id(1, hi)];
            let (corner_agents, middle_agents) = agents.split_at(agents.len().min(4));
            for (k, &a) in corner_agents.iter().enumerate() {
                self.route(view, a, corners[k], t, &block)?;
            }
            let mid_cols = (x + 1, y.saturating_sub(1));
            if !swept {
                let mid = self.id(0, (mid_cols.0 + mid_cols.1) / 2);
                for &a in middle_agents {
                    self.route(view, a, mid, t, &block)?;
                }
            }
            let (mut cx, mut cy) = (lo, hi);
            for &(i, left, right) in &moves {
                let step = view.base_step(i);
                if left {
                    cx += 1;
                    let to = self.id(0, cx);
                    self.walks[corner_agents[0]].push(step, to);
                    let to = self.id(1, cx);
                    self.walks[corner_agents[1]].push(step, to);
                }
                if right {
                    cy -= 1;
                    let to = self.id(0, cy);
                    self.walks[corner_agents[2]].push(step, to);
                    let to = self.id(1, cy);
                    self.walks[corner_agents[3]].push(step, to);
                }
            }
            t = if wh <= 2 {
                start_sweep
            } else if swept {
                last_move
            } else {
                let sub = view.subview(&still);
                let end = self.explore(&sub, half, mid_cols, middle_agents, depth + 1)?;
                let child_done = if end == 0 {
                    start_sweep
                } else {
                    view.index_at_or_after(sub.base_step(end - 1) + 1)
                };
                child_done.max(last_move)
            };
        }
        Ok(t)
    }
}

fn check_grid(inst: &Instance) -> Result<usize> {
    let n = inst.n();
    let cols = n / 2;
    let bad = || Error::ShapeMismatch("underlying graph is not a 2 x n grid in row-major layout".into());
    if n < 2 || n % 2 != 0 {
        return Err(bad());
    }
    let want: BTreeSet<(usize, usize)> = grid_graph(cols).edges.into_iter().collect();
    let have: BTreeSet<(usize, usize)> = inst.graph.edges().iter().map(|e| (e.u, e.v)).collect();
    if want != have {
        return Err(bad());
    }
    Ok(cols)
}

/// Multi-agent exploration of a 2 x n grid from `start` at base step
/// `start_step`. Returns the schedule (in base steps, every agent starting
/// at `start`) and the recursion depth reached.
pub fn explore_grid_from(inst: &Instance, start: usize, start_step: usize) -> Result<(MultiAgentSchedule, usize)> {
    let cols = check_grid(inst)?;
    let g = &inst.graph;
    let k = grid_agents(cols);
    let mut ctx = Ctx {
        g,
        cols,
        walks: vec![TemporalWalk::new(start); k],
        depth: 0,
    };
    let view = StepView::window(g, start_step, g.lifetime());
    let agents: Vec<usize> = (0..k).collect();
    ctx.explore(&view, (0, cols - 1), (0, cols - 1), &agents, 1)?;
    Ok((MultiAgentSchedule { agents: ctx.walks }, ctx.depth))
}

/// Explores a temporal 2 x n grid (vertex `(r, c)` has id `r n + c`) with
/// at most `4 ceil(log2 n)` agents.
pub fn explore_grid_multi(inst: &Instance) -> Result<MultiAgentSchedule> {
    explore_grid_from(inst, inst.start, 0).map(|(s, _)| s)
}
