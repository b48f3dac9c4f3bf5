//! Graph samplers and independent oracles shared by the integration tests.
#![allow(dead_code)]

use geot::constructions::gen_random_regular;
use geot::graph::{is_connected, Graph};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random spanning tree plus `extra` random edges; always connected.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            edges.push((u, v));
        }
    }
    Graph::from_edges_simplified(n, edges)
}

/// Random graph with `m` edge draws; may be disconnected.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .collect();
    Graph::from_edges_simplified(n, edges)
}

/// Connected random `d`-regular graph, trying successive seeds.
pub fn connected_regular(n: usize, d: usize, seed: u64) -> Graph {
    (0..)
        .map(|i| gen_random_regular(n, d, seed * 1000 + i).unwrap())
        .find(is_connected)
        .unwrap()
}

/// Rank over the rationals by plain Gaussian elimination.
pub fn rational_rank_oracle(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

/// `(|δA|, |A|)` for a bitmask subset.
pub fn boundary_of_mask(g: &Graph, mask: u64) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
        .count()
}

/// Minimum of `|δA|/|A|` over `lo <= |A| <= hi`, by scanning every mask.
pub fn cheeger_oracle(g: &Graph, lo: usize, hi: usize) -> f64 {
    let n = g.vertex_count();
    let mut best = f64::INFINITY;
    for mask in 1u64..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < lo || size > hi {
            continue;
        }
        best = best.min(boundary_of_mask(g, mask) as f64 / size as f64);
    }
    best
}

/// Shortest cycle length by removing each edge and measuring the detour.
pub fn girth_oracle(g: &Graph) -> Option<usize> {
    (0..g.edge_count())
        .filter_map(|id| {
            let (u, v) = g.edge(id);
            let h = g.without_edges(&[id]);
            let d = geot::graph::bfs_distances(&h, u).unwrap()[v];
            (d != usize::MAX).then(|| d + 1)
        })
        .min()
}
