use crate::error::{Error, Result};
use crate::graph::{EdgeId, Instance, StepView};
use crate::reach::plan_reach;
use crate::walk::TemporalWalk;

use super::cycle::{two_agent_walk, Ring};

struct ChordShape {
    chord: EdgeId,
    x: usize,
    /// Cycle edges on the two sides of the chord (each without the chord).
    sides: [Vec<EdgeId>; 2],
}

fn shape(inst: &Instance) -> Result<ChordShape> {
    let g = &inst.graph;
    let bad = || Error::ShapeMismatch("underlying graph is not a cycle plus one chord".into());
    let deg3: Vec<usize> = (0..g.n()).filter(|&v| g.neighbors(v).len() == 3).collect();
    if deg3.len() != 2 || (0..g.n()).any(|v| !matches!(g.neighbors(v).len(), 2 | 3)) {
        return Err(bad());
    }
    let (x, y) = (deg3[0], deg3[1]);
    let chord = g.edge_between(x, y).ok_or_else(bad)?;
    // Walk from x along each of its other two edges until y.
    let mut sides: [Vec<EdgeId>; 2] = [Vec::new(), Vec::new()];
    let starts: Vec<(usize, EdgeId)> = g.neighbors(x).iter().copied().filter(|&(_, e)| e != chord).collect();
    for (side, &(first, e0)) in sides.iter_mut().zip(&starts) {
        side.push(e0);
        let (mut cur, mut came) = (first, e0);
        while cur != y {
            let &(next, e) = g
                .neighbors(cur)
                .iter()
                .find(|&&(_, e)| e != came)
                .ok_or_else(bad)?;
            side.push(e);
            came = e;
            cur = next;
            if side.len() > g.m() {
                return Err(bad());
            }
        }
    }
    if sides[0].len() + sides[1].len() + 1 != g.m() {
        return Err(bad());
    }
    Ok(ChordShape { chord, x, sides })
}

/// Explores a temporal cycle with one chord within `10n` steps.
pub fn explore_chord(inst: &Instance) -> Result<TemporalWalk> {
    let sh = shape(inst)?;
    let g = &inst.graph;
    let n = g.n();
    let s = inst.start;
    let horizon = (10 * n).min(g.lifetime() + 1);
    let present = (0..horizon).filter(|&t| g.is_present(sh.chord, t)).count();
    if present > 7 * n {
        // Side of the start first (either side if s is a chord endpoint).
        let side_of = |k: usize| sh.sides[k].iter().any(|&e| g.edge(e).touches(s));
        let first = if side_of(0) { 0 } else { 1 };
        let mut ring_edges = sh.sides[first].clone();
        ring_edges.push(sh.chord);
        let ring = Ring::from_edges(g, &ring_edges, s)?;
        let on = StepView::filtered(g, 0, |t| g.is_present(sh.chord, t));
        let mut walk = two_agent_walk(&on, &ring, 0)?.to_base(&on);
        let mut time = walk.end_time().unwrap_or(0);
        let all: Vec<usize> = (0..n).collect();
        let cross = plan_reach(g, walk.end_vertex(), sh.x, time, &all)?;
        time = cross.end_time().unwrap_or(time);
        walk.append(&cross);
        let mut ring_edges = sh.sides[1 - first].clone();
        ring_edges.push(sh.chord);
        let ring = Ring::from_edges(g, &ring_edges, sh.x)?;
        let on = StepView::filtered(g, time, |t| g.is_present(sh.chord, t));
        walk.append(&two_agent_walk(&on, &ring, 0)?.to_base(&on));
        Ok(walk)
    } else {
        let mut outer = sh.sides[0].clone();
        outer.extend_from_slice(&sh.sides[1]);
        let ring = Ring::from_edges(g, &outer, s)?;
        let off = StepView::filtered(g, 0, |t| !g.is_present(sh.chord, t));
        Ok(two_agent_walk(&off, &ring, 0)?.to_base(&off))
    }
}
