use crate::error::{Error, Result};
use crate::graph::{Instance, TemporalGraph};
use crate::reach::frontier_search;
use crate::walk::TemporalWalk;

/// Extends `walk` (at time `time`) by repeated hops to the unvisited vertex
/// of minimum earliest arrival, smallest id first, until every vertex is
/// visited. Returns the final time.
pub fn greedy_extend(
    g: &TemporalGraph,
    walk: &mut TemporalWalk,
    mut time: usize,
    visited: &mut [bool],
) -> Result<usize> {
    let mut left = visited.iter().filter(|&&v| !v).count();
    while left > 0 {
        let from = walk.end_vertex();
        if time > g.lifetime() {
            return Err(Error::LifetimeExhausted { step: g.lifetime() + 1 });
        }
        let arr = frontier_search(g, from, time, None, |times, _| {
            times.iter().zip(visited.iter()).any(|(t, &seen)| t.is_some() && !seen)
        });
        let target = (0..g.n())
            .filter(|&v| !visited[v])
            .filter_map(|v| arr.times[v].map(|t| (t, v)))
            .min()
            .map(|(_, v)| v)
            .ok_or(Error::LifetimeExhausted { step: g.lifetime() + 1 })?;
        let hop = arr.walk_to(target).expect("reached vertex has a walk");
        for m in &hop.moves {
            if !visited[m.to] {
                visited[m.to] = true;
                left -= 1;
            }
        }
        time = arr.times[target].expect("target reached");
        walk.append(&hop);
    }
    Ok(time)
}

/// Nearest-unvisited baseline from the start vertex at time 0.
pub fn explore_greedy(inst: &Instance) -> Result<TemporalWalk> {
    let mut walk = TemporalWalk::new(inst.start);
    let mut visited = vec![false; inst.n()];
    visited[inst.start] = true;
    greedy_extend(&inst.graph, &mut walk, 0, &mut visited)?;
    Ok(walk)
}
