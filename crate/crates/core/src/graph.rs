use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::presence::PresencePattern;

pub type EdgeId = usize;

/// Undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// A static simple graph, used as the underlying graph handed to generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl StaticGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { n, edges }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let mut d = Dsu::new(self.n);
        for &(a, b) in &self.edges {
            d.union(a, b);
        }
        self.n <= 1 || d.components() == 1
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency().iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// A temporal graph `G_0..G_L` on a fixed vertex set, stored as an
/// underlying edge list with one presence pattern per edge.
#[derive(Clone, Debug)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<Edge>,
    presence: Vec<PresencePattern>,
    lifetime: usize,
    adjacency: Vec<Vec<(usize, EdgeId)>>,
    index: HashMap<(usize, usize), EdgeId>,
}

impl PartialEq for TemporalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.lifetime == other.lifetime
            && self.edges == other.edges
            && self.presence == other.presence
    }
}

impl TemporalGraph {
    /// Builds a temporal graph. Edge ids follow the order of `edges`.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize, PresencePattern)>,
        lifetime: usize,
    ) -> Result<Self> {
        let mut es = Vec::with_capacity(edges.len());
        let mut presence = Vec::with_capacity(edges.len());
        let mut index = HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (id, (a, b, p)) in edges.into_iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let e = Edge::new(a, b);
            if index.insert((e.u, e.v), id).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{}, {}}}", e.u, e.v)));
            }
            p.check(lifetime)
                .map_err(|reason| Error::InvalidPresence { edge: id, reason })?;
            adjacency[e.u].push((e.v, id));
            adjacency[e.v].push((e.u, id));
            es.push(e);
            presence.push(p);
        }
        for l in &mut adjacency {
            l.sort_unstable();
        }
        Ok(Self {
            n,
            edges: es,
            presence,
            lifetime,
            adjacency,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn lifetime(&self) -> usize {
        self.lifetime
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn presence(&self, e: EdgeId) -> &PresencePattern {
        &self.presence[e]
    }

    pub fn patterns(&self) -> &[PresencePattern] {
        &self.presence
    }

    /// Neighbours of `v` as `(neighbour, edge id)`, sorted by neighbour.
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<EdgeId> {
        let e = Edge::new(a, b);
        self.index.get(&(e.u, e.v)).copied()
    }

    pub fn underlying(&self) -> StaticGraph {
        StaticGraph::new(self.n, self.edges.iter().map(|e| (e.u, e.v)).collect())
    }

    /// Presence test without range checking; steps past the lifetime are absent.
    #[inline]
    pub fn is_present(&self, e: EdgeId, t: usize) -> bool {
        t <= self.lifetime && self.presence[e].contains(t)
    }

    pub fn edge_present(&self, e: EdgeId, t: usize) -> Result<bool> {
        if e >= self.edges.len() {
            return Err(Error::EdgeOutOfRange {
                edge: e,
                m: self.edges.len(),
            });
        }
        self.check_step(t)?;
        Ok(self.presence[e].contains(t))
    }

    /// First step `>= t` within the lifetime at which `e` is present.
    pub fn next_present(&self, e: EdgeId, t: usize) -> Option<usize> {
        self.presence[e].next_present(t, self.lifetime)
    }

    pub fn check_step(&self, t: usize) -> Result<()> {
        if t > self.lifetime {
            Err(Error::StepOutOfRange {
                step: t,
                lifetime: self.lifetime,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Edge ids present at step `t`.
    pub fn snapshot(&self, t: usize) -> Result<Vec<EdgeId>> {
        self.check_step(t)?;
        Ok((0..self.edges.len())
            .filter(|&e| self.presence[e].contains(t))
            .collect())
    }

    /// Steps in `[0, horizon]` at which some edge toggles, always including 0.
    pub fn change_points(&self, horizon: usize) -> Vec<usize> {
        let horizon = horizon.min(self.lifetime);
        let mut heap: BinaryHeap<Reverse<(usize, EdgeId)>> = self
            .presence
            .iter()
            .enumerate()
            .filter_map(|(e, p)| p.next_toggle(0).map(|t| Reverse((t, e))))
            .collect();
        let mut out = vec![0];
        while let Some(Reverse((t, e))) = heap.pop() {
            if t > horizon {
                break;
            }
            if *out.last().unwrap() != t {
                out.push(t);
            }
            if let Some(nt) = self.presence[e].next_toggle(t) {
                heap.push(Reverse((nt, e)));
            }
        }
        out
    }

    /// Last step that needs checking to know every snapshot: explicit
    /// patterns settle, periodic ones repeat, so after the latest settle
    /// point one full joint period covers everything.
    pub fn connectivity_horizon(&self) -> usize {
        let settle = self
            .presence
            .iter()
            .filter_map(PresencePattern::settle_point)
            .max()
            .unwrap_or(0);
        let mut period: usize = 1;
        for p in &self.presence {
            period = lcm(period, p.period());
            if period > self.lifetime {
                return self.lifetime;
            }
        }
        settle.saturating_add(period).min(self.lifetime)
    }

    /// Whether every snapshot is connected on all `n` vertices. Snapshots
    /// are recomputed only at change points.
    pub fn is_always_connected(&self) -> Connectivity {
        let mut d = Dsu::new(self.n);
        for t in self.change_points(self.connectivity_horizon()) {
            d.reset();
            for (e, edge) in self.edges.iter().enumerate() {
                if self.presence[e].contains(t) {
                    d.union(edge.u, edge.v);
                }
            }
            if self.n > 1 && d.components() != 1 {
                return Connectivity {
                    connected: false,
                    first_failure: Some(t),
                };
            }
        }
        Connectivity {
            connected: true,
            first_failure: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Connectivity {
    pub connected: bool,
    pub first_failure: Option<usize>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    (a / gcd(a, b)).saturating_mul(b)
}

/// A temporal graph together with its start vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: TemporalGraph,
    pub start: usize,
}

impl Instance {
    pub fn new(graph: TemporalGraph, start: usize) -> Result<Self> {
        graph.check_vertex(start)?;
        Ok(Self { graph, start })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }
}

/// Read access to a (possibly restricted) sequence of steps of a temporal
/// graph. View step `i` corresponds to base step `base_step(i)`.
pub trait TemporalView {
    fn graph(&self) -> &TemporalGraph;

    /// Number of steps in the view.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn base_step(&self, i: usize) -> usize;

    #[inline]
    fn present(&self, e: EdgeId, i: usize) -> bool {
        i < self.len() && self.graph().is_present(e, self.base_step(i))
    }

    /// Whether `v` is visible in this view.
    #[inline]
    fn includes(&self, _v: usize) -> bool {
        true
    }
}

impl TemporalView for TemporalGraph {
    fn graph(&self) -> &TemporalGraph {
        self
    }

    fn len(&self) -> usize {
        self.lifetime + 1
    }

    #[inline]
    fn base_step(&self, i: usize) -> usize {
        i
    }
}

/// A subsequence of a temporal graph's steps, optionally restricted to a
/// vertex subset. Edges with an endpoint outside the subset are invisible.
#[derive(Clone, Debug)]
pub struct StepView<'a> {
    base: &'a TemporalGraph,
    steps: Vec<usize>,
    vertices: Option<Vec<bool>>,
}

impl<'a> StepView<'a> {
    pub fn new(base: &'a TemporalGraph, steps: Vec<usize>) -> Result<Self> {
        for w in steps.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter(
                    "view steps must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&last) = steps.last() {
            base.check_step(last)?;
        }
        Ok(Self {
            base,
            steps,
            vertices: None,
        })
    }

    /// Base steps `from..=to` (clamped to the lifetime).
    pub fn window(base: &'a TemporalGraph, from: usize, to: usize) -> Self {
        let to = to.min(base.lifetime());
        Self {
            base,
            steps: (from..=to).collect(),
            vertices: None,
        }
    }

    /// Base steps in `from..` (up to the lifetime) at which `keep` holds.
    pub fn filtered(base: &'a TemporalGraph, from: usize, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            base,
            steps: (from..=base.lifetime()).filter(|&t| keep(t)).collect(),
            vertices: None,
        }
    }

    pub fn with_vertices(mut self, vertices: &[usize]) -> Self {
        let mut mask = vec![false; self.base.n()];
        for &v in vertices {
            mask[v] = true;
        }
        self.vertices = Some(mask);
        self
    }

    /// Sub-view made of the given view indices (strictly increasing).
    pub fn subview(&self, indices: &[usize]) -> Self {
        Self {
            base: self.base,
            steps: indices.iter().map(|&i| self.steps[i]).collect(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// First view index whose base step is `>= t`.
    pub fn index_at_or_after(&self, t: usize) -> usize {
        self.steps.partition_point(|&s| s < t)
    }
}

impl TemporalView for StepView<'_> {
    fn graph(&self) -> &TemporalGraph {
        self.base
    }

    fn len(&self) -> usize {
        self.steps.len()
    }

    #[inline]
    fn base_step(&self, i: usize) -> usize {
        self.steps[i]
    }

    #[inline]
    fn present(&self, e: EdgeId, i: usize) -> bool {
        if i >= self.steps.len() {
            return false;
        }
        if let Some(mask) = &self.vertices {
            let edge = self.base.edge(e);
            if !mask[edge.u] || !mask[edge.v] {
                return false;
            }
        }
        self.base.is_present(e, self.steps[i])
    }

    #[inline]
    fn includes(&self, v: usize) -> bool {
        self.vertices.as_ref().is_none_or(|m| m[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle_with_gap() -> TemporalGraph {
        TemporalGraph::new(
            4,
            vec![
                (0, 1, PresencePattern::Always),
                (1, 2, PresencePattern::Intervals(vec![(0, 4), (6, 20)])),
                (2, 3, PresencePattern::Always),
                (3, 0, PresencePattern::Intervals(vec![(0, 4), (6, 20)])),
            ],
            20,
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(TemporalGraph::new(3, vec![(0, 0, PresencePattern::Always)], 4).is_err());
        assert!(TemporalGraph::new(
            3,
            vec![(0, 1, PresencePattern::Always), (1, 0, PresencePattern::Always)],
            4
        )
        .is_err());
        assert!(TemporalGraph::new(3, vec![(0, 5, PresencePattern::Always)], 4).is_err());
        assert!(TemporalGraph::new(2, vec![(0, 1, PresencePattern::steps([7]))], 4).is_err());
    }

    #[test]
    fn edge_present_range_error() {
        let g = four_cycle_with_gap();
        assert!(g.edge_present(0, 17).unwrap());
        assert!(!g.edge_present(1, 5).unwrap());
        assert!(matches!(g.edge_present(0, 21), Err(Error::StepOutOfRange { .. })));
    }

    #[test]
    fn two_removals_disconnect_four_cycle() {
        let g = four_cycle_with_gap();
        let c = g.is_always_connected();
        assert!(!c.connected);
        assert_eq!(c.first_failure, Some(5));
    }

    #[test]
    fn empty_snapshot() {
        let g = TemporalGraph::new(2, vec![(0, 1, PresencePattern::never())], 3).unwrap();
        assert!(g.snapshot(2).unwrap().is_empty());
    }

    #[test]
    fn horizon_uses_joint_period() {
        let g = TemporalGraph::new(
            3,
            vec![
                (0, 1, PresencePattern::Periodic { offset: 0, present: 1, absent: 1 }),
                (1, 2, PresencePattern::Periodic { offset: 1, present: 1, absent: 2 }),
                (0, 2, PresencePattern::Intervals(vec![(0, 3)])),
            ],
            1000,
        )
        .unwrap();
        assert_eq!(g.connectivity_horizon(), 4 + 6);
    }

    #[test]
    fn view_hides_outside_vertices() {
        let g = four_cycle_with_gap();
        let v = StepView::new(&g, vec![0, 6, 7]).unwrap().with_vertices(&[0, 1, 2]);
        assert_eq!(v.len(), 3);
        assert_eq!(v.base_step(1), 6);
        assert!(v.present(0, 0));
        assert!(!v.present(2, 0));
        assert!(!v.includes(3));
        let sub = v.subview(&[1, 2]);
        assert_eq!(sub.steps(), &[6, 7]);
    }
}
