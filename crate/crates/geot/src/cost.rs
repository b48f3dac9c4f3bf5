//! Cycle-free subgraphs, coarse distortion and cost bounds.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::girth;
use crate::cycles::CycleOptions;
use crate::error::{Error, Result};
use crate::graph::{bfs_unchecked, component_labels, Graph, GraphFamily, UNREACHABLE};
use crate::witnesses::{cycle_density_check, DensityCheck};

/// Default vertex cap for all-pairs distances.
pub const DEFAULT_ALL_PAIRS_CAP: usize = 2000;
/// Graphs with more edges skip the swap improvement.
pub const SWAP_EDGE_CAP: usize = 5000;

// Mutable adjacency used while growing the subgraph.
struct Growing {
    adj: Vec<Vec<usize>>,
}

impl Growing {
    // Whether d(u, v) <= limit.
    fn within(&self, u: usize, v: usize, limit: usize) -> bool {
        if u == v {
            return true;
        }
        let mut dist = vec![UNREACHABLE; self.adj.len()];
        let mut queue = VecDeque::from([u]);
        dist[u] = 0;
        let mut found = false;
        'bfs: while let Some(x) = queue.pop_front() {
            if dist[x] == limit {
                continue;
            }
            for &y in &self.adj[x] {
                if dist[y] == UNREACHABLE {
                    if y == v {
                        found = true;
                        break 'bfs;
                    }
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        found
    }

    // Adding (u, v) keeps every cycle longer than r.
    fn can_add(&self, u: usize, v: usize, r: usize) -> bool {
        !self.within(u, v, r - 1)
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }
}

/// A maximal subgraph of `g` on the same vertices with no cycle of length
/// at most `r`.
///
/// Edges are inserted greedily in a seeded random order. A swap pass then
/// replaces one kept edge by two omitted ones where possible, and a final
/// pass restores maximality.
pub fn max_short_cycle_free_subgraph(g: &Graph, r: usize, order_seed: u64) -> Result<Graph> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle length bound {r} < 3"
        )));
    }
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(order_seed));
    let mut y = Growing {
        adj: vec![Vec::new(); g.vertex_count()],
    };
    let mut kept = vec![false; g.edge_count()];
    let fill = |y: &mut Growing, kept: &mut Vec<bool>| {
        for &id in &order {
            let (u, v) = g.edge(id);
            if !kept[id] && y.can_add(u, v, r) {
                y.add(u, v);
                kept[id] = true;
            }
        }
    };
    fill(&mut y, &mut kept);
    if g.edge_count() <= SWAP_EDGE_CAP {
        let mut improved = true;
        while improved {
            improved = false;
            for &e in &order {
                if !kept[e] {
                    continue;
                }
                let (a, b) = g.edge(e);
                y.remove(a, b);
                let freed: Vec<usize> = order
                    .iter()
                    .copied()
                    .filter(|&f| {
                        f != e && !kept[f] && {
                            let (u, v) = g.edge(f);
                            y.can_add(u, v, r)
                        }
                    })
                    .collect();
                let mut swapped = false;
                'pairs: for (i, &f1) in freed.iter().enumerate() {
                    let (u1, v1) = g.edge(f1);
                    y.add(u1, v1);
                    for &f2 in &freed[i + 1..] {
                        let (u2, v2) = g.edge(f2);
                        if y.can_add(u2, v2, r) {
                            y.add(u2, v2);
                            kept[e] = false;
                            kept[f1] = true;
                            kept[f2] = true;
                            swapped = true;
                            break 'pairs;
                        }
                    }
                    y.remove(u1, v1);
                }
                if swapped {
                    improved = true;
                    fill(&mut y, &mut kept);
                } else {
                    y.add(a, b);
                }
            }
        }
    }
    fill(&mut y, &mut kept);
    let edges: Vec<(usize, usize)> = (0..g.edge_count())
        .filter(|&id| kept[id])
        .map(|id| g.edge(id))
        .collect();
    let out = Graph::from_edges(g.vertex_count(), edges)?;
    check_cycle_free_maximal(g, &out, r)?;
    Ok(out)
}

/// Girth of `y` exceeds `r`, and each edge of `g` missing from `y` joins two
/// vertices at distance at most `r - 1` in `y`.
pub fn check_cycle_free_maximal(g: &Graph, y: &Graph, r: usize) -> Result<()> {
    if girth(y).is_some_and(|len| len <= r) {
        return Err(Error::Invariant(format!(
            "subgraph has a cycle of length <= {r}"
        )));
    }
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        if !y.has_edge(u, v) {
            by_source[u].push(v);
        }
    }
    for (u, targets) in by_source.iter().enumerate() {
        if targets.is_empty() {
            continue;
        }
        let dist = bfs_unchecked(y, u);
        if let Some(&v) = targets.iter().find(|&&v| dist[v] >= r) {
            return Err(Error::Invariant(format!(
                "omitted edge ({u}, {v}) could be added"
            )));
        }
    }
    Ok(())
}

/// Largest distortion between two metrics on one vertex set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoarseEquivalenceWitness {
    /// `max(x_over_y, y_over_x)`.
    pub l: f64,
    /// `max d_X(x, y) / d_Y(x, y)`.
    pub x_over_y: f64,
    /// `max d_Y(x, y) / d_X(x, y)`.
    pub y_over_x: f64,
    /// A pair achieving `l`.
    pub worst_pair: Option<(usize, usize)>,
}

/// Exact distortion over all pairs; both graphs must be connected.
pub fn coarse_distortion(gx: &Graph, gy: &Graph, cap: usize) -> Result<CoarseEquivalenceWitness> {
    let n = gx.vertex_count();
    if gy.vertex_count() != n {
        return Err(Error::InvalidParameter(format!(
            "vertex counts differ: {n} and {}",
            gy.vertex_count()
        )));
    }
    if n > cap {
        return Err(Error::TooLarge { vertices: n, cap });
    }
    for g in [gx, gy] {
        let components = component_labels(g).1;
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
    }
    // Per source: (dx/dy numerator, denominator, pair) maxima, compared exactly.
    type Frac = (usize, usize, (usize, usize));
    let better = |a: Frac, b: Frac| if b.0 * a.1 > a.0 * b.1 { b } else { a };
    let (xy, yx) = (0..n)
        .into_par_iter()
        .map(|s| {
            let dx = bfs_unchecked(gx, s);
            let dy = bfs_unchecked(gy, s);
            let mut xy: Frac = (1, 1, (s, s));
            let mut yx: Frac = (1, 1, (s, s));
            for w in s + 1..n {
                xy = better(xy, (dx[w], dy[w], (s, w)));
                yx = better(yx, (dy[w], dx[w], (s, w)));
            }
            (xy, yx)
        })
        .reduce(
            || ((1, 1, (0, 0)), (1, 1, (0, 0))),
            |a, b| (better(a.0, b.0), better(a.1, b.1)),
        );
    let x_over_y = xy.0 as f64 / xy.1 as f64;
    let y_over_x = yx.0 as f64 / yx.1 as f64;
    let (l, pair) = if y_over_x >= x_over_y {
        (y_over_x, yx.2)
    } else {
        (x_over_y, xy.2)
    };
    Ok(CoarseEquivalenceWitness {
        l,
        x_over_y,
        y_over_x,
        worst_pair: (pair.0 != pair.1).then_some(pair),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct CostOptions {
    pub order_seed: u64,
    pub cycles: CycleOptions,
    /// Fraction of the family, from the end, used for the liminf window.
    pub window_fraction: f64,
}

impl Default for CostOptions {
    fn default() -> Self {
        CostOptions {
            order_seed: 0,
            cycles: CycleOptions::default(),
            window_fraction: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostRow {
    pub index: usize,
    pub label: String,
    pub vertices: usize,
    pub edges_x: usize,
    pub edges_y: usize,
    /// `|E(Y)| / |V|`.
    pub ratio_y: f64,
    pub density: Option<DensityCheck>,
    /// `|E(X)| - (ε / d^{R-1}) |V|`, when the density condition holds.
    pub bound: Option<f64>,
    pub bound_holds: Option<bool>,
    /// `ok`, `not_applicable`, or an error message.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostReport {
    pub r: usize,
    pub epsilon: f64,
    pub d: usize,
    pub order_seed: u64,
    pub rows: Vec<CostRow>,
    /// Members used for the liminf estimates, counted from the end.
    pub window: usize,
    pub ratio_x: Option<f64>,
    pub ratio_y: Option<f64>,
    /// `ratio_x - ε / d^{R-1}`, when every windowed member satisfies the density condition.
    pub density_bound: Option<f64>,
}

/// Builds `Y_n` for each member and checks the per-graph edge bound.
pub fn cost_upper_bound(
    family: &GraphFamily,
    r: usize,
    epsilon: f64,
    d: usize,
    opts: &CostOptions,
) -> Result<CostReport> {
    if d == 0 || r < 3 {
        return Err(Error::InvalidParameter(format!(
            "need d >= 1 and R >= 3, got d = {d}, R = {r}"
        )));
    }
    let per_edge = epsilon / (d as f64).powi(r as i32 - 1);
    let rows: Vec<CostRow> = family
        .members
        .par_iter()
        .enumerate()
        .map(|(index, m)| {
            let g = &m.graph;
            let n = g.vertex_count();
            let mut row = CostRow {
                index,
                label: m.label.clone(),
                vertices: n,
                edges_x: g.edge_count(),
                edges_y: 0,
                ratio_y: 0.0,
                density: None,
                bound: None,
                bound_holds: None,
                status: "ok".into(),
            };
            let y = match max_short_cycle_free_subgraph(g, r, opts.order_seed) {
                Ok(y) => y,
                Err(e) => {
                    row.status = e.to_string();
                    return row;
                }
            };
            row.edges_y = y.edge_count();
            row.ratio_y = if n == 0 {
                0.0
            } else {
                y.edge_count() as f64 / n as f64
            };
            match cycle_density_check(g, r, epsilon, opts.cycles) {
                Ok(dc) => {
                    if dc.holds {
                        let bound = g.edge_count() as f64 - per_edge * n as f64;
                        row.bound = Some(bound);
                        row.bound_holds = Some(y.edge_count() as f64 <= bound);
                    } else {
                        row.status = "not_applicable".into();
                    }
                    row.density = Some(dc);
                }
                Err(e) => row.status = e.to_string(),
            }
            row
        })
        .collect();
    let k = rows.len();
    let window = ((k as f64 * opts.window_fraction).ceil() as usize).clamp(k.min(1), k);
    let tail = &rows[k - window..];
    let ratio_of = |e: usize, v: usize| if v == 0 { 0.0 } else { e as f64 / v as f64 };
    let min = |it: &mut dyn Iterator<Item = f64>| {
        it.fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))))
    };
    let ratio_x = min(&mut tail.iter().map(|r| ratio_of(r.edges_x, r.vertices)));
    let ratio_y = min(&mut tail.iter().map(|r| r.ratio_y));
    let applicable = !tail.is_empty() && tail.iter().all(|r| r.bound.is_some());
    Ok(CostReport {
        r,
        epsilon,
        d,
        order_seed: opts.order_seed,
        window,
        ratio_x,
        ratio_y,
        density_bound: if applicable {
            ratio_x.map(|x| x - per_edge)
        } else {
            None
        },
        rows,
    })
}

impl CostReport {
    /// One row per member: `n,label,vertices,edges_x,edges_y,ratio,bound,status`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invariant(format!("csv: {e}"));
        w.write_record([
            "n", "label", "vertices", "edges_x", "edges_y", "ratio", "bound", "status",
        ])
        .map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.index.to_string(),
                r.label.clone(),
                r.vertices.to_string(),
                r.edges_x.to_string(),
                r.edges_y.to_string(),
                r.ratio_y.to_string(),
                r.bound.map(|b| b.to_string()).unwrap_or_default(),
                r.status.clone(),
            ])
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Invariant(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxIsoReport {
    pub mapped_vertices: usize,
    pub mapped_edges: usize,
    pub vertex_ratio_x: f64,
    pub edge_ratio_x: f64,
    pub vertex_ratio_y: f64,
    pub edge_ratio_y: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        if a == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a as f64 / b as f64
    }
}

/// Checks that `map` (pairs `(x, y)`) is an isomorphism between the induced
/// subgraphs on its domain and image.
pub fn verify_approx_iso(
    gx: &Graph,
    gy: &Graph,
    map: &[(usize, usize)],
) -> Result<ApproxIsoReport> {
    let mut pairs = map.to_vec();
    pairs.sort_unstable();
    let mut seen_y = vec![false; gy.vertex_count()];
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::InvalidParameter(format!(
                "vertex {} is mapped twice",
                w[0].0
            )));
        }
    }
    for &(x, y) in &pairs {
        gx.check_vertex(x)?;
        gy.check_vertex(y)?;
        if seen_y[y] {
            return Err(Error::NotInjective(y));
        }
        seen_y[y] = true;
    }
    let mut edges = 0;
    for (i, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[i + 1..] {
            let (in_x, in_y) = (gx.has_edge(x1, x2), gy.has_edge(y1, y2));
            if in_x != in_y {
                return Err(Error::NotIsomorphic {
                    x1,
                    x2,
                    y1,
                    y2,
                    in_x,
                    in_y,
                });
            }
            edges += usize::from(in_x);
        }
    }
    let k = pairs.len();
    let (vx, vy) = (gx.vertex_count(), gy.vertex_count());
    let empty_ok = |e: usize, total: usize| if k == 0 { 0.0 } else { ratio(e, total) };
    Ok(ApproxIsoReport {
        mapped_vertices: k,
        mapped_edges: edges,
        vertex_ratio_x: if vx == 0 { 0.0 } else { k as f64 / vx as f64 },
        edge_ratio_x: empty_ok(edges, gx.edge_count()),
        vertex_ratio_y: if vy == 0 { 0.0 } else { k as f64 / vy as f64 },
        edge_ratio_y: empty_ok(edges, gy.edge_count()),
    })
}
