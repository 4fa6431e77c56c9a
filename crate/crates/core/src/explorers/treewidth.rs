use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dsu::Dsu;
use crate::error::{Error, Result};
use crate::graph::{Instance, StaticGraph, StepView, TemporalGraph};
use crate::reach::plan_reach;
use crate::reductions::{multi_to_single, Phase};
use crate::walk::{MultiAgentSchedule, TemporalWalk};

use super::greedy::greedy_extend;

/// Bags of vertices joined by tree edges over bag ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree: Vec<(usize, usize)>) -> Self {
        Self { bags, tree }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn validate(&self, g: &StaticGraph) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidDecomposition(why));
        let nb = self.bags.len();
        if nb == 0 {
            return bad("no bags".into());
        }
        if self.tree.len() + 1 != nb {
            return bad(format!("{} tree edges for {nb} bags", self.tree.len()));
        }
        let mut dsu = Dsu::new(nb);
        for &(a, b) in &self.tree {
            if a >= nb || b >= nb {
                return bad(format!("tree edge ({a}, {b}) names a missing bag"));
            }
            if !dsu.union(a, b) {
                return bad("tree edges contain a cycle".into());
            }
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n {
                    return bad(format!("bag {i} holds unknown vertex {v}"));
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return bad(format!("vertex {v} is in no bag"));
        }
        let sets: Vec<BTreeSet<usize>> = self.bags.iter().map(|b| b.iter().copied().collect()).collect();
        for &(a, b) in &g.edges {
            if !holders[a].iter().any(|&i| sets[i].contains(&b)) {
                return bad(format!("edge ({a}, {b}) is in no bag"));
            }
        }
        let adj = self.adjacency();
        for (v, hold) in holders.iter().enumerate() {
            let inside: BTreeSet<usize> = hold.iter().copied().collect();
            let mut seen = BTreeSet::from([hold[0]]);
            let mut stack = vec![hold[0]];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if inside.contains(&y) && seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if seen.len() != inside.len() {
                return bad(format!("bags holding vertex {v} are not connected"));
            }
        }
        Ok(())
    }

    /// Decomposition from a min-fill elimination order (ties: fewer
    /// neighbours, then smaller id). A heuristic; the width is not optimal
    /// in general.
    pub fn min_fill(g: &StaticGraph) -> TreeDecomposition {
        let n = g.n;
        let mut adj: Vec<BTreeSet<usize>> = g.adjacency().into_iter().map(|a| a.into_iter().collect()).collect();
        let mut gone = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut bags = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !gone[v])
                .min_by_key(|&v| {
                    let nb: Vec<usize> = adj[v].iter().copied().collect();
                    let mut fill = 0;
                    for i in 0..nb.len() {
                        for j in (i + 1)..nb.len() {
                            if !adj[nb[i]].contains(&nb[j]) {
                                fill += 1;
                            }
                        }
                    }
                    (fill, nb.len(), v)
                })
                .expect("vertex left");
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            for &a in &nb {
                adj[a].remove(&v);
                for &b in &nb {
                    if a != b {
                        adj[a].insert(b);
                    }
                }
            }
            let mut bag = nb.clone();
            bag.push(v);
            bag.sort_unstable();
            bags.push(bag);
            order.push(v);
            gone[v] = true;
        }
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        // Bag i links to the bag of its earliest-eliminated later neighbour;
        // bags without one are chained to the last bag.
        let mut tree = Vec::with_capacity(n.saturating_sub(1));
        for (i, bag) in bags.iter().enumerate().take(n.saturating_sub(1)) {
            let parent = bag
                .iter()
                .filter(|&&u| u != order[i])
                .map(|&u| pos[u])
                .min()
                .unwrap_or(n - 1);
            tree.push((i, parent));
        }
        TreeDecomposition { bags, tree }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted binary decomposition made of leaf, introduce, forget and join
/// nodes; `root` is the last node.
#[derive(Clone, Debug)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn from_decomposition(td: &TreeDecomposition) -> NiceDecomposition {
        let adj = td.adjacency();
        let nb = td.bags.len();
        // Root at bag 0; order bags so children precede parents.
        let mut parent = vec![usize::MAX; nb];
        let mut order = vec![0];
        let mut seen = vec![false; nb];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            for &c in &adj[b] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = b;
                    order.push(c);
                }
            }
            i += 1;
        }
        let sorted = |b: &Vec<usize>| {
            let mut s = b.clone();
            s.sort_unstable();
            s.dedup();
            s
        };
        let mut nodes: Vec<NiceNode> = Vec::new();
        let mut top = vec![usize::MAX; nb];
        let push = |nodes: &mut Vec<NiceNode>, kind, bag: Vec<usize>, children| {
            nodes.push(NiceNode { kind, bag, children });
            nodes.len() - 1
        };
        for &b in order.iter().rev() {
            let bag = sorted(&td.bags[b]);
            let kids: Vec<usize> = adj[b].iter().copied().filter(|&c| parent[c] == b).collect();
            let mut branches = Vec::new();
            if kids.is_empty() {
                let mut cur = push(&mut nodes, NiceKind::Leaf, Vec::new(), Vec::new());
                let mut have = Vec::new();
                for &v in &bag {
                    have.push(v);
                    have.sort_unstable();
                    cur = push(&mut nodes, NiceKind::Introduce(v), have.clone(), vec![cur]);
                }
                branches.push(cur);
            }
            for c in kids {
                let mut cur = top[c];
                let mut have = nodes[cur].bag.clone();
                for v in nodes[cur].bag.clone() {
                    if bag.binary_search(&v).is_err() {
                        have.retain(|&x| x != v);
                        cur = push(&mut nodes, NiceKind::Forget(v), have.clone(), vec![cur]);
                    }
                }
                for &v in &bag {
                    if have.binary_search(&v).is_err() {
                        have.push(v);
                        have.sort_unstable();
                        cur = push(&mut nodes, NiceKind::Introduce(v), have.clone(), vec![cur]);
                    }
                }
                branches.push(cur);
            }
            let mut cur = branches[0];
            for &other in &branches[1..] {
                cur = push(&mut nodes, NiceKind::Join, bag.clone(), vec![cur, other]);
            }
            top[b] = cur;
        }
        let root = top[0];
        NiceDecomposition { nodes, root }
    }

    /// Node ids with every child before its parent.
    fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                out.push(x);
            } else {
                stack.push((x, true));
                for &c in self.nodes[x].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    /// Separator vertices adjacent to the component.
    pub adjacent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorPlan {
    pub selected: Vec<Vec<usize>>,
    pub separators: Vec<usize>,
    pub components: Vec<Component>,
}

/// Selects separator bags bottom-up: a bag is selected once the unmarked
/// vertices in its subtree exceed `sqrt(n)` or once two selected bags lie
/// topmost below it (and the root always is). Selecting marks the
/// subtree's unmarked vertices; those outside the bag form components.
pub fn separator_plan(g: &StaticGraph, td: &TreeDecomposition) -> Result<SeparatorPlan> {
    td.validate(g)?;
    let nice = NiceDecomposition::from_decomposition(td);
    let threshold = (g.n as f64).sqrt();
    let mut marked = vec![false; g.n];
    let mut unmarked: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nice.nodes.len()];
    let mut topmost = vec![0usize; nice.nodes.len()];
    let mut selected = Vec::new();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for x in nice.post_order() {
        let node = &nice.nodes[x];
        let mut u: BTreeSet<usize> = BTreeSet::new();
        let mut below = 0;
        for &c in &node.children {
            u.append(&mut unmarked[c]);
            below += topmost[c];
        }
        u.extend(node.bag.iter().copied());
        u.retain(|&v| !marked[v]);
        let strictly_below = u.iter().filter(|v| node.bag.binary_search(v).is_err()).count();
        if strictly_below as f64 > threshold || below >= 2 || x == nice.root {
            for &v in &u {
                marked[v] = true;
            }
            for &v in &node.bag {
                marked[v] = true;
            }
            selected.push(node.bag.clone());
            pieces.push(u.into_iter().filter(|v| node.bag.binary_search(v).is_err()).collect());
            topmost[x] = 1;
        } else {
            unmarked[x] = u;
            topmost[x] = below;
        }
    }
    let mut is_sep = vec![false; g.n];
    for bag in &selected {
        for &v in bag {
            is_sep[v] = true;
        }
    }
    let separators: Vec<usize> = (0..g.n).filter(|&v| is_sep[v]).collect();
    let adj = g.adjacency();
    let mut components = Vec::new();
    let mut in_piece = vec![false; g.n];
    for piece in pieces {
        for &v in &piece {
            in_piece[v] = true;
        }
        let mut done = vec![false; 0];
        done.resize(g.n, false);
        for &v in &piece {
            if done[v] || is_sep[v] {
                continue;
            }
            let mut comp = vec![v];
            done[v] = true;
            let mut i = 0;
            while i < comp.len() {
                for &w in &adj[comp[i]] {
                    if in_piece[w] && !is_sep[w] && !done[w] {
                        done[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            let adjacent: BTreeSet<usize> = comp
                .iter()
                .flat_map(|&v| adj[v].iter().copied())
                .filter(|&w| is_sep[w])
                .collect();
            components.push(Component {
                vertices: comp,
                adjacent: adjacent.into_iter().collect(),
            });
        }
        for &v in &piece {
            in_piece[v] = false;
        }
    }
    Ok(SeparatorPlan {
        selected,
        separators,
        components,
    })
}

/// Visits every vertex of `comp` with one agent per adjacent separator,
/// each visit a go-and-return inside the component and that separator.
struct ComponentPhase<'a> {
    g: &'a TemporalGraph,
    comp: &'a Component,
    sqrt_n: usize,
    /// Windows that had to slide because no separator qualified.
    slides: usize,
}

impl ComponentPhase<'_> {
    fn build(&mut self, start: usize, p: usize) -> Result<Phase> {
        let g = self.g;
        let n = g.n();
        let all: Vec<usize> = (0..n).collect();
        let seps = &self.comp.adjacent;
        let a = seps.len();
        let mut walks = Vec::with_capacity(a);
        for &sigma in seps {
            walks.push(plan_reach(g, start, sigma, p, &all)?);
        }
        let mut covered = vec![false; n];
        for w in &walks {
            covered[w.start] = true;
            for m in &w.moves {
                covered[m.to] = true;
            }
        }
        let mut zone: Vec<usize> = self.comp.vertices.clone();
        zone.extend_from_slice(seps);
        zone.sort_unstable();
        let mut in_zone = vec![false; n];
        for &v in &zone {
            in_zone[v] = true;
        }
        let inside: Vec<usize> = (0..g.m())
            .filter(|&e| in_zone[g.edge(e).u] && in_zone[g.edge(e).v])
            .collect();
        let need = 2 * (zone.len() - 1);
        let window = (4 * a * self.sqrt_n).max(need);
        let mut tau = p + n - 1;
        let mut dsu = Dsu::new(n);
        for &v in &self.comp.vertices {
            if covered[v] {
                continue;
            }
            // usable[j] = steps in the window where v meets seps[j].
            let (j, steps) = loop {
                if tau > g.lifetime() {
                    return Err(Error::LifetimeExhausted { step: g.lifetime() + 1 });
                }
                let end = (tau + window - 1).min(g.lifetime());
                let mut usable: Vec<Vec<usize>> = vec![Vec::new(); a];
                for t in tau..=end {
                    dsu.reset();
                    for &e in &inside {
                        if g.is_present(e, t) {
                            dsu.union(g.edge(e).u, g.edge(e).v);
                        }
                    }
                    for (k, &sigma) in seps.iter().enumerate() {
                        if dsu.same(v, sigma) {
                            usable[k].push(t);
                        }
                    }
                }
                let (best, steps) = usable
                    .into_iter()
                    .enumerate()
                    .max_by_key(|(k, s)| (s.len(), std::cmp::Reverse(*k)))
                    .expect("component has a separator");
                if steps.len() >= need {
                    break (best, steps);
                }
                self.slides += 1;
                tau = end + 1;
            };
            let view = StepView::new(g, steps)?;
            let sigma = seps[j];
            let go = plan_reach(&view, sigma, v, 0, &zone)?;
            let back_from = go.end_time().unwrap_or(0);
            let back = plan_reach(&view, v, sigma, back_from, &zone)?;
            let (go, back) = (go.to_base(&view), back.to_base(&view));
            for m in go.moves.iter().chain(&back.moves) {
                covered[m.to] = true;
            }
            tau = back.end_time().or(go.end_time()).unwrap_or(tau).max(tau);
            walks[j].append(&go);
            walks[j].append(&back);
        }
        Ok(Phase {
            schedule: MultiAgentSchedule { agents: walks },
            horizon: tau - p,
        })
    }
}

/// Explores a graph of bounded treewidth given a decomposition of its
/// underlying graph.
pub fn explore_treewidth(inst: &Instance, td: &TreeDecomposition) -> Result<TemporalWalk> {
    explore_treewidth_traced(inst, td).map(|(w, _)| w)
}

/// Counters gathered while exploring by separators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreewidthTrace {
    pub selected_bags: usize,
    pub components: usize,
    pub largest_component: usize,
    pub max_adjacent: usize,
    pub window_slides: usize,
}

pub fn explore_treewidth_traced(inst: &Instance, td: &TreeDecomposition) -> Result<(TemporalWalk, TreewidthTrace)> {
    let g = &inst.graph;
    let plan = separator_plan(&g.underlying(), td)?;
    let mut trace = TreewidthTrace {
        selected_bags: plan.selected.len(),
        components: plan.components.len(),
        largest_component: plan.components.iter().map(|c| c.vertices.len()).max().unwrap_or(0),
        max_adjacent: plan.components.iter().map(|c| c.adjacent.len()).max().unwrap_or(0),
        window_slides: 0,
    };
    let sqrt_n = (g.n() as f64).sqrt().ceil() as usize;
    let mut walk = TemporalWalk::new(inst.start);
    let mut visited = vec![false; g.n()];
    visited[inst.start] = true;
    let mut time = 0;
    for comp in &plan.components {
        let targets: Vec<usize> = comp.vertices.iter().copied().filter(|&v| !visited[v]).collect();
        if targets.is_empty() {
            continue;
        }
        if comp.adjacent.is_empty() {
            return Err(Error::InvalidGraph("component without separator neighbours".into()));
        }
        let mut phase = ComponentPhase {
            g,
            comp,
            sqrt_n,
            slides: 0,
        };
        let run = multi_to_single(g, walk.end_vertex(), time, &targets, &mut |s, p| phase.build(s, p))?;
        trace.window_slides += phase.slides;
        for m in &run.walk.moves {
            visited[m.to] = true;
        }
        time = run.end_time.max(time);
        walk.append(&run.walk);
    }
    greedy_extend(g, &mut walk, time, &mut visited)?;
    Ok((walk, trace))
}
