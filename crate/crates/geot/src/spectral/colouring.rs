use serde::Serialize;

use super::laplacian;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A proper edge colouring, each colour class seen as an involution of the
/// vertex set swapping the endpoints of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingDecomposition {
    /// Edges of each colour, as canonical pairs.
    pub colour_classes: Vec<Vec<(usize, usize)>>,
    /// `involutions[i][x]` is the partner of `x` in class `i`, or `x` itself.
    pub involutions: Vec<Vec<usize>>,
}

impl MatchingDecomposition {
    pub fn len(&self) -> usize {
        self.colour_classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colour_classes.is_empty()
    }

    /// Entry `(x, y)` of `Σ_i (I - τ_i)`, in integers.
    pub fn sum_entry(&self, x: usize, y: usize) -> i64 {
        self.involutions
            .iter()
            .map(|tau| i64::from(x == y) - i64::from(tau[x] == y))
            .sum()
    }

    /// Checks `Σ_i (I - τ_i) = Δ` entry by entry, along with the involution
    /// and partition properties.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let n = g.vertex_count();
        for tau in &self.involutions {
            if tau.len() != n || (0..n).any(|x| tau[tau[x]] != x) {
                return Err(Error::Invariant("colour class is not an involution".into()));
            }
        }
        let total: usize = self.colour_classes.iter().map(Vec::len).sum();
        if total != g.edge_count() {
            return Err(Error::Invariant(
                "colour classes do not partition the edges".into(),
            ));
        }
        let lap = laplacian(g);
        for x in 0..n {
            // Only the Laplacian's nonzero pattern and the involution images can be nonzero.
            let mut cols: Vec<usize> = lap.row(x).iter().map(|&(y, _)| y).collect();
            cols.extend(self.involutions.iter().map(|tau| tau[x]));
            cols.sort_unstable();
            cols.dedup();
            for y in cols {
                if self.sum_entry(x, y) != lap.entry(x, y) {
                    return Err(Error::Invariant(format!(
                        "sum of (I - tau) differs from the Laplacian at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Greedy edge colouring: each edge, in id order, takes the smallest colour
/// free at both endpoints. Uses at most `2d - 1` colours.
pub fn edge_colouring_decomposition(g: &Graph) -> Result<MatchingDecomposition> {
    let n = g.vertex_count();
    let mut used: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut colour_classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut involutions: Vec<Vec<usize>> = Vec::new();
    for &(u, v) in g.edges() {
        let c = (0..)
            .find(|c| !used[u].contains(c) && !used[v].contains(c))
            .expect("colours are unbounded");
        if c == colour_classes.len() {
            colour_classes.push(Vec::new());
            involutions.push((0..n).collect());
        }
        used[u].push(c);
        used[v].push(c);
        colour_classes[c].push((u, v));
        involutions[c][u] = v;
        involutions[c][v] = u;
    }
    let out = MatchingDecomposition {
        colour_classes,
        involutions,
    };
    out.verify(g)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_standard, StandardKind};
    use crate::graph::max_degree;

    #[test]
    fn examples() {
        let e = gen_standard(StandardKind::Path, 2).unwrap();
        assert_eq!(edge_colouring_decomposition(&e).unwrap().len(), 1);

        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(edge_colouring_decomposition(&star).unwrap().len(), 4);

        let p = gen_standard(StandardKind::Petersen, 10).unwrap();
        let m = edge_colouring_decomposition(&p).unwrap();
        assert!(m.len() <= 5);
        assert!(m.len() < 2 * max_degree(&p));
        for class in &m.colour_classes {
            let mut ends: Vec<usize> = class.iter().flat_map(|&(u, v)| [u, v]).collect();
            ends.sort_unstable();
            ends.dedup();
            assert_eq!(ends.len(), 2 * class.len());
        }
    }

    #[test]
    fn broken_decomposition_fails_verification() {
        let c = gen_standard(StandardKind::Cycle, 4).unwrap();
        let mut m = edge_colouring_decomposition(&c).unwrap();
        m.involutions.pop();
        m.colour_classes.pop();
        assert!(m.verify(&c).is_err());
    }
}
