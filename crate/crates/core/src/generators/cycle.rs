use crate::error::{Error, Result};
use crate::graph::{Instance, TemporalGraph};
use crate::presence::PresencePattern;

use super::lifetime_for;

/// The `n`-cycle `x_0 .. x_{n-1}` started at `u = x_0` where `{u, v}` is
/// absent for the first `n - 2` steps and `{v, w}` disappears right after.
pub fn cycle_2n3(n: usize, lifetime: Option<usize>) -> Result<Instance> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("cycle_2n3 needs n >= 4, got {n}")));
    }
    let lifetime = lifetime_for(n, lifetime);
    let edges = (0..n)
        .map(|i| {
            let p = match i {
                0 => PresencePattern::Intervals(vec![(n - 2, lifetime)]),
                1 => PresencePattern::Intervals(vec![(0, n - 3)]),
                _ => PresencePattern::Always,
            };
            (i, (i + 1) % n, p)
        })
        .collect();
    Instance::new(TemporalGraph::new(n, edges, lifetime)?, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_two_of_five() {
        let inst = cycle_2n3(5, None).unwrap();
        let g = &inst.graph;
        let uv = g.edge_between(0, 1).unwrap();
        let vw = g.edge_between(1, 2).unwrap();
        assert!(!g.is_present(uv, 2));
        assert!(g.is_present(vw, 2));
        assert!(g.is_present(uv, 3));
        assert!(!g.is_present(vw, 3));
        assert!(g.is_always_connected().connected);
    }

    #[test]
    fn small_n_rejected() {
        assert!(cycle_2n3(3, None).is_err());
    }
}
