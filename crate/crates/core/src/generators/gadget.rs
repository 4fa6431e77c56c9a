use crate::error::{Error, Result};
use crate::explorers::greedy::greedy_extend;
use crate::graph::{EdgeId, Instance, StaticGraph, TemporalGraph};
use crate::presence::PresencePattern;
use crate::walk::{MultiAgentSchedule, TemporalWalk};

use super::stars::rotating_star_edges;
use super::lifetime_for;

/// Largest gadget (in vertices) the generator will build; the lifetime is
/// quadratic in it and centre pairs carry explicit step sets.
const MAX_GADGET_VERTICES: usize = 400;

/// Base graph `G'` with terminals `s`, `t` and the exponent `c`: the gadget
/// has `n = n'^c` centres and one copy of `G'` per centre.
#[derive(Clone, Debug)]
pub struct GadgetSpec {
    pub base: StaticGraph,
    pub s: usize,
    pub t: usize,
    pub c: u32,
}

impl GadgetSpec {
    pub fn copy_size(&self) -> usize {
        self.base.n
    }

    pub fn centres(&self) -> Option<usize> {
        self.base.n.checked_pow(self.c)
    }

    /// Total vertex count `n (1 + n')`.
    pub fn vertices(&self) -> Option<usize> {
        self.centres()?.checked_mul(1 + self.base.n)
    }
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub instance: Instance,
    pub centres: usize,
    pub copy_size: usize,
    /// Quick links as `(edge, the single step it is present)`.
    pub quick_links: Vec<(EdgeId, usize)>,
    pub witness: Option<MultiAgentSchedule>,
}

impl Gadget {
    /// Global id of vertex `x` of copy `i`.
    pub fn copy_vertex(&self, i: usize, x: usize) -> usize {
        self.centres + i * self.copy_size + x
    }
}

fn check_hamiltonian(spec: &GadgetSpec, path: &[usize]) -> Result<()> {
    let n = spec.base.n;
    let bad = |why: &str| Err(Error::InvalidParameter(format!("not a Hamiltonian s-t path: {why}")));
    if path.len() != n || path.first() != Some(&spec.s) || path.last() != Some(&spec.t) {
        return bad("wrong length or endpoints");
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return bad("repeated or unknown vertex");
        }
    }
    let adj = spec.base.adjacency();
    if path.windows(2).any(|w| !adj[w[0]].contains(&w[1])) {
        return bad("consecutive vertices not adjacent");
    }
    Ok(())
}

/// Rotating-star skeleton whose leaves are replaced by copies of `G'`:
/// centre `c_j` reaches copy `i` through its `s`, copy edges are always
/// present, and the quick link from `t` of copy `i` to `s` of copy `i + 1`
/// exists only at step `i n'` (for `1 <= i < n - 1`). Starts at `c_0`.
/// With a Hamiltonian `s`-`t` path of `G'`, also emits the witness walk:
/// enter copy 1 at step 0, trace each copy and ride every quick link, then
/// pick up what is left by earliest-arrival hops.
pub fn hardness_gadget(spec: &GadgetSpec, hamiltonian: Option<&[usize]>) -> Result<Gadget> {
    let np = spec.base.n;
    if np < 2 || spec.c < 1 {
        return Err(Error::InvalidParameter("gadget needs n' >= 2 and c >= 1".into()));
    }
    if spec.s >= np || spec.t >= np || spec.s == spec.t {
        return Err(Error::InvalidParameter("gadget terminals must be distinct vertices of G'".into()));
    }
    if !spec.base.is_connected() {
        return Err(Error::InvalidGraph("gadget base graph is not connected".into()));
    }
    let total = spec
        .vertices()
        .filter(|&v| v <= MAX_GADGET_VERTICES)
        .ok_or_else(|| Error::LimitExceeded(format!("gadget exceeds {MAX_GADGET_VERTICES} vertices")))?;
    if let Some(p) = hamiltonian {
        check_hamiltonian(spec, p)?;
    }
    let n = np.pow(spec.c);
    let lifetime = lifetime_for(total, None);
    let copy = |i: usize, x: usize| n + i * np + x;
    let mut edges = rotating_star_edges(n, |j| j, |i| copy(i, spec.s), lifetime);
    for i in 0..n {
        for &(a, b) in &spec.base.edges {
            edges.push((copy(i, a), copy(i, b), PresencePattern::Always));
        }
    }
    let links: Vec<(usize, usize, usize)> = (1..n.saturating_sub(1))
        .map(|i| (copy(i, spec.t), copy(i + 1, spec.s), i * np))
        .collect();
    for &(a, b, step) in &links {
        edges.push((a, b, PresencePattern::steps([step])));
    }
    let graph = TemporalGraph::new(total, edges, lifetime)?;
    let quick_links = links
        .iter()
        .map(|&(a, b, step)| (graph.edge_between(a, b).expect("link exists"), step))
        .collect();
    let instance = Instance::new(graph, 0)?;
    let witness = match hamiltonian {
        Some(path) => Some(witness(&instance, n, np, path)?),
        None => None,
    };
    Ok(Gadget {
        instance,
        centres: n,
        copy_size: np,
        quick_links,
        witness,
    })
}

fn witness(inst: &Instance, n: usize, np: usize, path: &[usize]) -> Result<MultiAgentSchedule> {
    let copy = |i: usize, x: usize| n + i * np + x;
    let mut walk = TemporalWalk::new(0);
    let mut step = 0;
    // c_0 -> s of copy 1 at step 0, then copies 1..n-1 back to back.
    walk.push(step, copy(1, path[0]));
    step += 1;
    for i in 1..n {
        for &x in &path[1..] {
            walk.push(step, copy(i, x));
            step += 1;
        }
        if i + 1 < n {
            debug_assert_eq!(step, i * np);
            walk.push(step, copy(i + 1, path[0]));
            step += 1;
        }
    }
    let mut visited = vec![false; inst.n()];
    visited[0] = true;
    for m in &walk.moves {
        visited[m.to] = true;
    }
    greedy_extend(&inst.graph, &mut walk, step, &mut visited)?;
    Ok(MultiAgentSchedule::single(walk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path_graph;
    use crate::walk::validate_schedule;

    fn path_spec(np: usize, c: u32) -> GadgetSpec {
        GadgetSpec {
            base: path_graph(np),
            s: 0,
            t: np - 1,
            c,
        }
    }

    #[test]
    fn counts() {
        let g = hardness_gadget(&path_spec(2, 1), None).unwrap();
        assert_eq!(g.instance.n(), 6);
        assert!(g.quick_links.is_empty());
        assert_eq!(path_spec(3, 2).vertices(), Some(36));
        let g = hardness_gadget(&path_spec(3, 2), None).unwrap();
        assert_eq!(g.instance.n(), 36);
        assert_eq!(g.quick_links.len(), 7);
        assert!(g.instance.graph.is_always_connected().connected);
    }

    #[test]
    fn quick_links_single_step() {
        let g = hardness_gadget(&path_spec(4, 1), None).unwrap();
        let gr = &g.instance.graph;
        for (i, &(e, step)) in g.quick_links.iter().enumerate() {
            assert_eq!(step, (i + 1) * 4);
            let on: Vec<usize> = (0..=gr.lifetime()).filter(|&t| gr.is_present(e, t)).collect();
            assert_eq!(on, vec![step]);
        }
    }

    #[test]
    fn witness_validates() {
        for (np, c) in [(2, 1), (4, 1), (3, 2), (4, 2)] {
            let path: Vec<usize> = (0..np).collect();
            let g = hardness_gadget(&path_spec(np, c), Some(&path)).unwrap();
            let rep = validate_schedule(&g.instance, g.witness.as_ref().unwrap()).unwrap();
            assert!(rep.covered);
            assert!(rep.arrival <= 5 * g.instance.n(), "np={np} c={c} arrival={}", rep.arrival);
        }
    }

    #[test]
    fn bad_hamiltonian_rejected() {
        let spec = path_spec(4, 1);
        assert!(hardness_gadget(&spec, Some(&[0, 2, 1, 3])).is_err());
        assert!(hardness_gadget(&spec, Some(&[0, 1, 2])).is_err());
        assert!(hardness_gadget(&spec, Some(&[3, 2, 1, 0])).is_err());
    }
}
