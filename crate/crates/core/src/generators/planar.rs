use crate::error::{Error, Result};
use crate::graph::{Instance, TemporalGraph};
use crate::presence::PresencePattern;

use super::lifetime_for;

struct Layout {
    quarter: usize,
    half: usize,
}

impl Layout {
    fn new(n: usize) -> Self {
        Self { quarter: n / 4, half: n / 2 }
    }

    fn top(&self, i: usize) -> usize {
        i
    }

    fn bottom(&self, i: usize) -> usize {
        self.quarter + i
    }

    /// `j`-th vertex of the connecting path, `0 <= j < n/2`, counted from `t_0`.
    fn path(&self, j: usize) -> usize {
        self.half + j
    }
}

/// Round in which column `col` (1-based among the `n/4 - 1` columns) loses
/// its horizontal edges.
fn replacement_round(k: u32, col: usize) -> usize {
    k as usize - 2 - col.trailing_zeros() as usize
}

/// The planar max-degree-4 family on `n = 2^k` vertices, `k >= 3`. Top row
/// `t_i` (ids `0..n/4`), bottom row `b_i` (ids `n/4..n/2`) and a path of
/// `n/2` vertices (ids `n/2..n`) from `t_0` to `b_0`. Round `r` spans steps
/// `[r n/2, (r+1) n/2)`; in round `r >= 1` the middle column of every
/// remaining stretch of horizontal edges switches to its two cross edges.
/// Replacements accumulate and the final layout persists. Starts at `t_0`.
pub fn planar_rounds(n: usize, lifetime: Option<usize>) -> Result<Instance> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "planar_rounds needs n = 2^k with k >= 3, got {n}"
        )));
    }
    let k = n.trailing_zeros();
    let lay = Layout::new(n);
    let lifetime = lifetime_for(n, lifetime);
    let mut edges = Vec::new();
    edges.push((lay.top(0), lay.path(0), PresencePattern::Always));
    for j in 1..lay.half {
        edges.push((lay.path(j - 1), lay.path(j), PresencePattern::Always));
    }
    edges.push((lay.path(lay.half - 1), lay.bottom(0), PresencePattern::Always));
    for col in 1..lay.quarter {
        let switch = replacement_round(k, col) * lay.half;
        let horizontal = PresencePattern::Intervals(vec![(0, switch - 1)]);
        let cross = PresencePattern::Intervals(vec![(switch, lifetime)]);
        edges.push((lay.top(col - 1), lay.top(col), horizontal.clone()));
        edges.push((lay.bottom(col - 1), lay.bottom(col), horizontal));
        edges.push((lay.top(col - 1), lay.bottom(col), cross.clone()));
        edges.push((lay.bottom(col - 1), lay.top(col), cross));
    }
    Instance::new(TemporalGraph::new(n, edges, lifetime)?, lay.top(0))
}

/// Rotation system (neighbours in counterclockwise order) of a plane
/// drawing of the underlying graph of `planar_rounds(n)`. Rows sit at
/// heights 1 and 0, the path hangs on the left, the diagonals
/// `b_{c-1} t_c` run inside the strip and the edges `t_{c-1} b_c` leave
/// upward and loop around the right end into `b_c` from below.
pub fn planar_rounds_rotation(n: usize) -> Vec<Vec<usize>> {
    let lay = Layout::new(n);
    let mut pos = vec![(0.0f64, 0.0f64); n];
    for i in 0..lay.quarter {
        pos[lay.top(i)] = (i as f64, 1.0);
        pos[lay.bottom(i)] = (i as f64, 0.0);
    }
    for j in 0..lay.half {
        pos[lay.path(j)] = (-1.0, 1.0 - (j + 1) as f64 / (lay.half + 1) as f64);
    }
    let mut darts: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    let straight = |a: usize, b: usize, darts: &mut Vec<Vec<(f64, usize)>>| {
        let (ax, ay) = pos[a];
        let (bx, by) = pos[b];
        darts[a].push(((by - ay).atan2(bx - ax), b));
        darts[b].push(((ay - by).atan2(ax - bx), a));
    };
    straight(lay.top(0), lay.path(0), &mut darts);
    for j in 1..lay.half {
        straight(lay.path(j - 1), lay.path(j), &mut darts);
    }
    straight(lay.path(lay.half - 1), lay.bottom(0), &mut darts);
    let up = std::f64::consts::FRAC_PI_2;
    for col in 1..lay.quarter {
        straight(lay.top(col - 1), lay.top(col), &mut darts);
        straight(lay.bottom(col - 1), lay.bottom(col), &mut darts);
        straight(lay.bottom(col - 1), lay.top(col), &mut darts);
        darts[lay.top(col - 1)].push((up, lay.bottom(col)));
        darts[lay.bottom(col)].push((-up, lay.top(col - 1)));
    }
    darts
        .into_iter()
        .map(|mut d| {
            d.sort_by(|a, b| a.0.total_cmp(&b.0));
            d.into_iter().map(|(_, v)| v).collect()
        })
        .collect()
}

/// Genus of the orientable surface defined by a rotation system of a
/// connected graph (0 means the rotation is a plane embedding).
pub fn rotation_genus(rotation: &[Vec<usize>]) -> usize {
    let n = rotation.len();
    let darts: usize = rotation.iter().map(Vec::len).sum();
    let edges = darts / 2;
    // Dart (u, index in u's rotation); successor of u->v is v->w with w
    // following u in v's rotation.
    let mut index = std::collections::HashMap::with_capacity(darts);
    for (u, r) in rotation.iter().enumerate() {
        for (i, &v) in r.iter().enumerate() {
            index.insert((u, v), i);
        }
    }
    let mut seen: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
    let mut faces = 0;
    for u in 0..n {
        for i in 0..rotation[u].len() {
            if seen[u][i] {
                continue;
            }
            faces += 1;
            let (mut a, mut j) = (u, i);
            while !seen[a][j] {
                seen[a][j] = true;
                let b = rotation[a][j];
                let back = index[&(b, a)];
                let next = (back + 1) % rotation[b].len();
                a = b;
                j = next;
            }
        }
    }
    // V - E + F = 2 - 2g
    (2 + edges - n - faces) / 2
}

/// Whether the edge list forms a single simple path through all `n` vertices.
pub fn is_simple_path(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 || edges.len() != n - 1 {
        return false;
    }
    let mut deg = vec![0usize; n];
    for &(a, b) in edges {
        if a == b || a >= n || b >= n {
            return false;
        }
        deg[a] += 1;
        deg[b] += 1;
    }
    if deg.iter().any(|&d| d > 2) {
        return false;
    }
    super::spans(n, edges.iter().copied())
}
