use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rational_rank, IntegerBasis, ModPBasis};
use crate::graph::{component_labels, Graph, UNREACHABLE};

pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct CycleOptions {
    /// Enumeration stops with an error once this many cycles are found.
    pub cap: usize,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions {
            cap: DEFAULT_CYCLE_CAP,
        }
    }
}

/// Simple cycles of length at most `r`, each listed once.
///
/// A cycle is stored starting at its smallest vertex, in the direction whose
/// second vertex is smaller than its last.
#[derive(Clone, Debug, Serialize)]
pub struct ShortCycleSet {
    pub r: usize,
    pub cycles: Vec<Vec<usize>>,
    /// Rational dimension of the span, once computed.
    pub rank: Option<usize>,
}

/// `|E| - |V| + #components`.
pub fn cycle_space_dim(g: &Graph) -> usize {
    let components = component_labels(g).1;
    g.edge_count() + components - g.vertex_count()
}

/// Signed edge-indicator vector of a closed vertex sequence.
pub fn cycle_edge_vector(g: &Graph, cycle: &[usize]) -> Result<Vec<i64>> {
    let mut row = vec![0i64; g.edge_count()];
    for i in 0..cycle.len() {
        let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        let id = g.edge_id(x, y).ok_or(Error::MissingEdge { u: x, v: y })?;
        row[id] += if x < y { 1 } else { -1 };
    }
    Ok(row)
}

struct Search<'a> {
    g: &'a Graph,
    r: usize,
    start: usize,
    dist: Vec<usize>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
    cap: usize,
}

impl Search<'_> {
    fn extend(&mut self) -> Result<()> {
        let x = *self.path.last().expect("path starts at the root");
        let len = self.path.len();
        for &y in self.g.neighbors(x) {
            if y == self.start {
                if len >= 3 && self.path[1] < x {
                    if self.out.len() == self.cap {
                        return Err(Error::CycleBudgetExceeded { cap: self.cap });
                    }
                    self.out.push(self.path.clone());
                }
                continue;
            }
            // Vertices after position `len - 1` need a way back within budget.
            if y < self.start || self.on_path[y] || len >= self.r {
                continue;
            }
            if self.dist[y] == UNREACHABLE || self.dist[y] + len > self.r {
                continue;
            }
            self.on_path[y] = true;
            self.path.push(y);
            self.extend()?;
            self.path.pop();
            self.on_path[y] = false;
        }
        Ok(())
    }
}

/// Every simple cycle of length at most `r`.
pub fn short_cycles(g: &Graph, r: usize, opts: CycleOptions) -> Result<ShortCycleSet> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle length bound {r} < 3"
        )));
    }
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    for s in 0..n {
        // Distances back to s through vertices >= s, up to r / 2.
        let mut dist = vec![UNREACHABLE; n];
        let mut queue = VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            if dist[x] * 2 >= r {
                continue;
            }
            for &y in g.neighbors(x) {
                if y > s && dist[y] == UNREACHABLE {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        on_path[s] = true;
        let mut search = Search {
            g,
            r,
            start: s,
            dist,
            on_path: std::mem::take(&mut on_path),
            path: vec![s],
            out: &mut cycles,
            cap: opts.cap,
        };
        search.extend()?;
        on_path = search.on_path;
        on_path[s] = false;
    }
    Ok(ShortCycleSet {
        r,
        cycles,
        rank: None,
    })
}

/// Short cycles together with the rational rank of their span.
pub fn short_cycle_rank(g: &Graph, r: usize, opts: CycleOptions) -> Result<ShortCycleSet> {
    let mut set = short_cycles(g, r, opts)?;
    let rows = set.edge_rows(g)?;
    set.rank = Some(rational_rank(&rows, Some(cycle_space_dim(g))));
    Ok(set)
}

impl ShortCycleSet {
    pub fn edge_rows(&self, g: &Graph) -> Result<Vec<Vec<i64>>> {
        self.cycles
            .iter()
            .map(|c| cycle_edge_vector(g, c))
            .collect()
    }

    /// Indices of cycles forming a basis of the span, chosen greedily in order.
    pub fn basis_indices(&self, g: &Graph) -> Result<Vec<usize>> {
        let rows = self.edge_rows(g)?;
        let mut modp = ModPBasis::new();
        let mut chosen = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if modp.insert(row) {
                chosen.push(i);
            }
        }
        let rank = self
            .rank
            .unwrap_or_else(|| rational_rank(&rows, Some(cycle_space_dim(g))));
        if chosen.len() == rank {
            return Ok(chosen);
        }
        // The prime divides some minor; redo the selection over the integers.
        let mut basis = IntegerBasis::new();
        chosen.clear();
        for (i, row) in rows.iter().enumerate() {
            if basis.insert(row) {
                chosen.push(i);
            }
        }
        Ok(chosen)
    }
}

/// Fundamental cycles of a BFS spanning forest, one per non-tree edge.
///
/// Each cycle starts with the non-tree edge `(u, v)`, `u < v`, then follows
/// the tree path from `v` back to `u`.
pub fn fundamental_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent = vec![UNREACHABLE; n];
    let mut depth = vec![UNREACHABLE; n];
    let mut tree_edge = vec![false; g.edge_count()];
    for root in 0..n {
        if depth[root] != UNREACHABLE {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for (&y, &id) in g.neighbors(x).iter().zip(g.incident_edges(x)) {
                if depth[y] == UNREACHABLE {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    tree_edge[id] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if tree_edge[id] {
            continue;
        }
        let (mut a, mut b) = (u, v);
        let mut from_u = vec![a];
        let mut from_v = vec![b];
        while a != b {
            if depth[a] >= depth[b] {
                a = parent[a];
                from_u.push(a);
            } else {
                b = parent[b];
                from_v.push(b);
            }
        }
        // Both walks end at the common ancestor.
        from_u.pop();
        let mut cycle = vec![u];
        cycle.extend(from_v);
        cycle.extend(from_u.iter().rev().copied());
        cycle.pop();
        out.push(cycle);
    }
    out
}
