//! Generators and the tree graft.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{component_labels, Graph, UNREACHABLE};
use crate::spectral::{spectral_gap, SpectrumOptions};

/// Named deterministic families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardKind {
    Cycle,
    Path,
    Complete,
    Petersen,
}

impl FromStr for StandardKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(StandardKind::Cycle),
            "path" => Ok(StandardKind::Path),
            "complete" => Ok(StandardKind::Complete),
            "petersen" => Ok(StandardKind::Petersen),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph kind `{other}`"
            ))),
        }
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardKind::Cycle => "cycle",
            StandardKind::Path => "path",
            StandardKind::Complete => "complete",
            StandardKind::Petersen => "petersen",
        })
    }
}

/// Cycle `C_n` (n ≥ 3), path `P_n` (n ≥ 1), complete `K_n` (n ≥ 1), or the
/// Petersen graph (n = 10).
pub fn gen_standard(kind: StandardKind, n: usize) -> Result<Graph> {
    let bad = |need: &str| {
        Err(Error::InvalidParameter(format!(
            "{kind} needs {need}, got n = {n}"
        )))
    };
    match kind {
        StandardKind::Cycle if n < 3 => bad("n >= 3"),
        StandardKind::Cycle => Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))),
        StandardKind::Path if n == 0 => bad("n >= 1"),
        StandardKind::Path => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        StandardKind::Complete if n == 0 => bad("n >= 1"),
        StandardKind::Complete => {
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        StandardKind::Petersen if n != 10 => bad("n = 10"),
        StandardKind::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
    }
}

/// Restarts allowed before [`gen_random_regular`] gives up.
pub const REGULAR_ATTEMPTS: usize = 1000;

/// A uniformly-ish random simple `d`-regular graph.
///
/// Points of the pairing model are matched one pair at a time; a pair that
/// would form a loop or a repeated edge is rejected and redrawn, and a stuck
/// matching restarts from scratch.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n * d = {} is odd", n * d)));
    }
    if d >= n && n > 0 {
        return Err(Error::InvalidParameter(format!(
            "degree {d} must be below n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        let mut points: Vec<usize> = (0..n).flat_map(|x| std::iter::repeat_n(x, d)).collect();
        points.shuffle(&mut rng);
        let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while let Some(a) = points.pop() {
            let mut found = None;
            for _ in 0..64 {
                let i = rng.gen_range(0..points.len());
                let b = points[i];
                if b != a && !adj[a].contains(&b) {
                    found = Some(i);
                    break;
                }
            }
            let Some(i) = found else { continue 'attempt };
            let b = points.swap_remove(i);
            adj[a].push(b);
            adj[b].push(a);
            edges.push((a, b));
        }
        return Graph::from_edges(n, edges);
    }
    Err(Error::GenerationFailed {
        attempts: REGULAR_ATTEMPTS,
    })
}

/// Simple support of the 8-regular Margulis multigraph on `(Z/n)²`.
#[derive(Clone, Debug)]
pub struct MargulisGraph {
    pub graph: Graph,
    pub modulus: usize,
    /// Loops of the multigraph, dropped.
    pub dropped_loops: usize,
    /// Repeated edges of the multigraph, dropped.
    pub dropped_multi_edges: usize,
    /// Laplacian gap of the simple support.
    pub gap: Option<f64>,
}

/// Vertex `(x, y)` is `x * n + y`; the generators are `(x ± y, y)`,
/// `(x ± y + 1, y)`, `(x, y ± x)` and `(x, y ± x + 1)`.
pub fn gen_margulis(n: usize) -> Result<MargulisGraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("Margulis modulus {n} < 2")));
    }
    let id = |x: usize, y: usize| (x % n) * n + y % n;
    let mut multi = Vec::with_capacity(4 * n * n);
    for x in 0..n {
        for y in 0..n {
            let v = id(x, y);
            // The inverse maps contribute the same edges from the other end.
            multi.push((v, id(x + y, y)));
            multi.push((v, id(x + y + 1, y)));
            multi.push((v, id(x, y + x)));
            multi.push((v, id(x, y + x + 1)));
        }
    }
    let dropped_loops = multi.iter().filter(|&&(u, v)| u == v).count();
    let mut simple: Vec<(usize, usize)> = multi
        .iter()
        .filter(|&&(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    simple.sort_unstable();
    let before = simple.len();
    simple.dedup();
    let dropped_multi_edges = before - simple.len();
    let graph = Graph::from_edges(n * n, simple)?;
    let gap = spectral_gap(&graph, &SpectrumOptions::default())?.gap;
    Ok(MargulisGraph {
        graph,
        modulus: n,
        dropped_loops,
        dropped_multi_edges,
        gap,
    })
}

/// `X = Y ∪ T` with `T` a rooted tree glued to `Y` along its leaves.
#[derive(Clone, Debug, Serialize)]
pub struct GraftedGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// The root `p` of the tree.
    pub root: usize,
    pub depth: usize,
    /// Base vertices keep their ids `0..base_vertices`.
    pub base_vertices: usize,
    /// Tree vertices are `base_vertices..base_vertices + tree_vertices`.
    pub tree_vertices: usize,
    /// `(leaf, base vertex)` for every attachment edge.
    pub attachments: Vec<(usize, usize)>,
}

/// Number of leaves of the depth-`r` graft tree.
pub fn graft_leaf_count(r: usize) -> usize {
    3usize << (r - 1)
}

/// Grafts a depth-`r` tree (root of degree 3, other internal vertices with
/// two children) onto `y`, joining leaf `i` to base vertex `i`.
pub fn graft_tree(y: &Graph, r: usize) -> Result<GraftedGraph> {
    if r == 0 || r > 40 {
        return Err(Error::InvalidParameter(format!(
            "graft depth {r} outside 1..=40"
        )));
    }
    let leaves = graft_leaf_count(r);
    if leaves > y.vertex_count() {
        return Err(Error::GraftTooSmall {
            leaves,
            available: y.vertex_count(),
        });
    }
    let components = component_labels(y).1;
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let base = y.vertex_count();
    let tree_vertices = 3 * (1usize << r) - 2;
    let root = base;
    let mut edges: Vec<(usize, usize)> = y.edges().to_vec();
    let mut level = vec![root];
    let mut next_id = root + 1;
    for depth in 0..r {
        let children = if depth == 0 { 3 } else { 2 };
        let mut next_level = Vec::with_capacity(level.len() * children);
        for &p in &level {
            for _ in 0..children {
                edges.push((p, next_id));
                next_level.push(next_id);
                next_id += 1;
            }
        }
        level = next_level;
    }
    let attachments: Vec<(usize, usize)> = level.iter().copied().zip(0..).collect();
    edges.extend(attachments.iter().copied());
    let graph = Graph::from_edges(base + tree_vertices, edges)?;
    Ok(GraftedGraph {
        graph,
        root,
        depth: r,
        base_vertices: base,
        tree_vertices,
        attachments,
    })
}

/// Length of a shortest cycle, `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best = UNREACHABLE;
    let mut dist = vec![UNREACHABLE; n];
    let mut parent = vec![UNREACHABLE; n];
    for s in 0..n {
        dist.iter_mut().for_each(|d| *d = UNREACHABLE);
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for &y in g.neighbors(x) {
                if dist[y] == UNREACHABLE {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    (best != UNREACHABLE).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{short_cycles, CycleOptions};
    use crate::graph::{ball, is_connected, max_degree};

    #[test]
    fn standard_shapes() {
        let c4 = gen_standard(StandardKind::Cycle, 4).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!((0..4).all(|x| c4.degree(x) == 2));
        assert_eq!(
            gen_standard(StandardKind::Complete, 4)
                .unwrap()
                .edge_count(),
            6
        );
        let p = gen_standard(StandardKind::Petersen, 10).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert_eq!(girth(&p), Some(5));
        assert!(gen_standard(StandardKind::Petersen, 9).is_err());
        assert!(gen_standard(StandardKind::Cycle, 2).is_err());
        assert_eq!(
            "petersen".parse::<StandardKind>().unwrap(),
            StandardKind::Petersen
        );
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&gen_standard(StandardKind::Path, 6).unwrap()), None);
        assert_eq!(
            girth(&gen_standard(StandardKind::Complete, 4).unwrap()),
            Some(3)
        );
        let p = gen_standard(StandardKind::Petersen, 10).unwrap();
        let opts = CycleOptions::default();
        assert!(short_cycles(&p, 4, opts).unwrap().cycles.is_empty());
        assert!(!short_cycles(&p, 5, opts).unwrap().cycles.is_empty());
        for n in 3..9 {
            assert_eq!(
                girth(&gen_standard(StandardKind::Cycle, n).unwrap()),
                Some(n)
            );
        }
    }

    #[test]
    fn random_regular() {
        let g = gen_random_regular(10, 3, 1).unwrap();
        assert!((0..10).all(|x| g.degree(x) == 3));
        assert!(gen_random_regular(5, 3, 1).is_err());
        let a = gen_random_regular(100, 4, 42).unwrap();
        let b = gen_random_regular(100, 4, 42).unwrap();
        assert_eq!(a, b);
        assert!((0..100).all(|x| a.degree(x) == 4));
    }

    #[test]
    fn margulis() {
        let m2 = gen_margulis(2).unwrap();
        assert_eq!(m2.graph.vertex_count(), 4);
        // 16 multigraph edges, all accounted for.
        assert_eq!(
            m2.graph.edge_count() + m2.dropped_loops + m2.dropped_multi_edges,
            16
        );
        let m5 = gen_margulis(5).unwrap();
        assert!(is_connected(&m5.graph));
        assert!(m5.gap.unwrap() > 0.0);
        assert!(max_degree(&m5.graph) <= 8);
    }

    #[test]
    fn graft_examples() {
        let k10 = gen_standard(StandardKind::Complete, 10).unwrap();
        let x = graft_tree(&k10, 1).unwrap();
        assert_eq!(x.tree_vertices, 4);
        assert_eq!(x.attachments.len(), 3);

        let x = graft_tree(&k10, 2).unwrap();
        assert_eq!(x.attachments.len(), 6);
        let targets: Vec<usize> = x.attachments.iter().map(|a| a.1).collect();
        assert_eq!(targets, vec![0, 1, 2, 3, 4, 5]);
        let b = ball(&x.graph, x.root, 2).unwrap();
        assert_eq!(b.graph.edge_count() + 1, b.graph.vertex_count());
        assert!(is_connected(&b.graph));
        assert_eq!(b.vertices, (10..20).collect::<Vec<_>>());
        assert!(max_degree(&x.graph) <= max_degree(&k10) + 1);

        let small = gen_standard(StandardKind::Cycle, 5).unwrap();
        assert!(matches!(
            graft_tree(&small, 2),
            Err(Error::GraftTooSmall {
                leaves: 6,
                available: 5
            })
        ));
    }
}
