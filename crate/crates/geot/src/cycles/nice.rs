use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bridges, fundamental_cycles, CycleVector};
use crate::error::{Error, Result};
use crate::graph::{component_labels, Graph};

pub const DEFAULT_MAX_RETRIES: usize = 64;

/// `+1`/`-1` orientation of every edge following an Eulerian circuit of
/// each component.
pub fn eulerian_orientation(g: &Graph) -> Result<CycleVector> {
    if let Some(x) = (0..g.vertex_count()).find(|&x| g.degree(x) % 2 == 1) {
        return Err(Error::OddDegree {
            vertex: x,
            degree: g.degree(x),
        });
    }
    let mut values = vec![0i64; g.edge_count()];
    let mut used = vec![false; g.edge_count()];
    let mut next = vec![0usize; g.vertex_count()];
    let mut stack = Vec::new();
    for start in 0..g.vertex_count() {
        if next[start] == g.degree(start) {
            continue;
        }
        stack.push(start);
        // Hierholzer: each edge is oriented the way the walk first crosses it.
        while let Some(&x) = stack.last() {
            while next[x] < g.degree(x) && used[g.incident_edges(x)[next[x]]] {
                next[x] += 1;
            }
            if next[x] == g.degree(x) {
                stack.pop();
                continue;
            }
            let id = g.incident_edges(x)[next[x]];
            let y = g.neighbors(x)[next[x]];
            used[id] = true;
            values[id] = if x < y { 1 } else { -1 };
            stack.push(y);
        }
    }
    CycleVector::from_values(g, values)
}

/// A `{-1, 0, 1}`-valued cycle vector that is nonzero on at least half of
/// the non-bridge edges.
///
/// Random subsets of the fundamental cycles are summed mod 2 until the odd
/// edges cover half of the non-bridges; the odd edge set has even degree
/// everywhere, and its Eulerian orientation is the result.
pub fn nice_cycle_vector(g: &Graph, seed: u64, max_retries: usize) -> Result<CycleVector> {
    let components = component_labels(g).1;
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let non_bridges = bridges(g).non_bridge_count;
    if non_bridges == 0 {
        return Ok(CycleVector::zeros(g));
    }
    let cycle_edges: Vec<Vec<usize>> = fundamental_cycles(g)
        .iter()
        .map(|c| {
            (0..c.len())
                .map(|i| {
                    g.edge_id(c[i], c[(i + 1) % c.len()])
                        .expect("fundamental cycles follow edges")
                })
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..max_retries.max(1) {
        let mut odd = vec![false; g.edge_count()];
        for edges in &cycle_edges {
            if rng.gen::<bool>() {
                for &id in edges {
                    odd[id] = !odd[id];
                }
            }
        }
        let count = odd.iter().filter(|&&o| o).count();
        best = best.max(count);
        if 2 * count < non_bridges {
            continue;
        }
        let removed: Vec<usize> = (0..g.edge_count()).filter(|&id| !odd[id]).collect();
        let odd_graph = g.without_edges(&removed);
        let v = eulerian_orientation(&odd_graph)
            .map_err(|e| Error::Invariant(format!("odd edge set not Eulerian: {e}")))?;
        return v.lift_to(g);
    }
    Err(Error::RetriesExhausted {
        retries: max_retries,
        best_support: best,
        non_bridges,
    })
}
