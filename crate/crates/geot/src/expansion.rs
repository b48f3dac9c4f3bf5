//! Boundaries, exhaustive Cheeger constants and expander certificates.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{component_labels, Graph, GraphFamily};
use crate::spectral::{spectral_gap, SpectrumOptions};

/// Default vertex cap for exhaustive subset enumeration.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;
/// Hard limit of the bitmask enumeration.
pub const MAX_BRUTE_FORCE: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport {
    /// Sorted, without repeats.
    pub subset: Vec<usize>,
    pub edge_boundary_size: usize,
    pub outer_vertex_boundary_size: usize,
    /// `|δA| / |A|`, absent for the empty set.
    pub ratio: Option<f64>,
}

/// `δA` and the outer vertex boundary of `A`.
pub fn edge_boundary(g: &Graph, subset: &[usize]) -> Result<BoundaryReport> {
    let mut inside = vec![false; g.vertex_count()];
    for &x in subset {
        g.check_vertex(x)?;
        inside[x] = true;
    }
    let subset: Vec<usize> = (0..g.vertex_count()).filter(|&x| inside[x]).collect();
    let edge_boundary_size = g
        .edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .count();
    let outer_vertex_boundary_size = (0..g.vertex_count())
        .filter(|&x| !inside[x] && g.neighbors(x).iter().any(|&y| inside[y]))
        .count();
    let ratio = (!subset.is_empty()).then(|| edge_boundary_size as f64 / subset.len() as f64);
    Ok(BoundaryReport {
        subset,
        edge_boundary_size,
        outer_vertex_boundary_size,
        ratio,
    })
}

/// Which subset sizes the minimum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheegerMode {
    /// `1 <= |A| <= floor(n/2)`.
    Half,
    /// `ceil(n/4) <= |A| <= floor(n/2)`.
    MidRange,
}

impl CheegerMode {
    /// Inclusive range of admissible `|A|` for `n` vertices.
    pub fn size_range(self, n: usize) -> (usize, usize) {
        match self {
            CheegerMode::Half => (1, n / 2),
            CheegerMode::MidRange => (n.div_ceil(4).max(1), n / 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheegerCertificate {
    pub mode: CheegerMode,
    pub minimum_ratio: f64,
    /// Minimizing subset, sorted; empty when not exact.
    pub witness_subset: Vec<usize>,
    /// `|δA|` of the witness.
    pub witness_boundary: usize,
    /// Exhaustive minimum rather than the spectral lower bound.
    pub exact: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Best {
    boundary: u64,
    size: u64,
    mask: u64,
}

impl Best {
    // Exact ratio comparison, ties broken by the smaller mask.
    fn better_than(&self, other: &Best) -> bool {
        let lhs = self.boundary * other.size;
        let rhs = other.boundary * self.size;
        lhs < rhs || (lhs == rhs && self.mask < other.mask)
    }
}

fn min_best(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Exhaustive minimum of `|δA| / |A|` over the mode's size range.
///
/// Subsets are walked in Gray-code order within blocks fixed by their high
/// bits; the blocks run in parallel and are combined by minimum.
pub fn cheeger_exact(g: &Graph, mode: CheegerMode, cap: usize) -> Result<CheegerCertificate> {
    let n = g.vertex_count();
    let cap = cap.min(MAX_BRUTE_FORCE);
    if n > cap {
        return Err(Error::TooLarge { vertices: n, cap });
    }
    let components = component_labels(g).1;
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let (lo, hi) = mode.size_range(n);
    if n == 0 || lo > hi {
        return Err(Error::EmptyRange { vertices: n });
    }
    let nbr: Vec<u64> = (0..n)
        .map(|x| g.neighbors(x).iter().fold(0u64, |m, &y| m | 1 << y))
        .collect();
    let deg: Vec<i64> = (0..n).map(|x| g.degree(x) as i64).collect();
    let boundary_of = |mask: u64| -> i64 {
        (0..n)
            .filter(|&x| mask >> x & 1 == 1)
            .map(|x| (nbr[x] & !mask).count_ones() as i64)
            .sum()
    };
    let high = n.min(8) / 2 * 2;
    let low = n - high;
    let best = (0u64..1 << high)
        .into_par_iter()
        .map(|prefix| {
            let base = prefix << low;
            let mut mask = base;
            let mut boundary = boundary_of(mask);
            let mut best: Option<Best> = None;
            for i in 0u64..1 << low {
                if i > 0 {
                    let v = i.trailing_zeros() as usize;
                    let bit = 1u64 << v;
                    let shared = (nbr[v] & mask & !bit).count_ones() as i64;
                    if mask & bit == 0 {
                        boundary += deg[v] - 2 * shared;
                    } else {
                        boundary -= deg[v] - 2 * shared;
                    }
                    mask ^= bit;
                }
                let size = mask.count_ones() as usize;
                if size < lo || size > hi {
                    continue;
                }
                let cand = Best {
                    boundary: boundary as u64,
                    size: size as u64,
                    mask,
                };
                best = min_best(best, Some(cand));
            }
            best
        })
        .reduce(|| None, min_best)
        .ok_or(Error::EmptyRange { vertices: n })?;
    Ok(CheegerCertificate {
        mode,
        minimum_ratio: best.boundary as f64 / best.size as f64,
        witness_subset: (0..n).filter(|&x| best.mask >> x & 1 == 1).collect(),
        witness_boundary: best.boundary as usize,
        exact: true,
    })
}

/// Exact certificate when `g` is within `cap`, otherwise the lower bound
/// `gap / 2` with `exact = false`.
pub fn cheeger_certificate(g: &Graph, mode: CheegerMode, cap: usize) -> Result<CheegerCertificate> {
    if g.vertex_count() <= cap.min(MAX_BRUTE_FORCE) {
        return cheeger_exact(g, mode, cap);
    }
    let components = component_labels(g).1;
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let gap = spectral_gap(g, &SpectrumOptions::default())?
        .gap
        .unwrap_or(0.0);
    Ok(CheegerCertificate {
        mode,
        minimum_ratio: gap / 2.0,
        witness_subset: Vec::new(),
        witness_boundary: 0,
        exact: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpanderCheck {
    pub label: String,
    pub vertices: usize,
    pub gap: f64,
    pub certified: bool,
}

/// Whether each member's Laplacian gap is at least `h`.
pub fn expander_certify(family: &GraphFamily, h: f64) -> Result<Vec<ExpanderCheck>> {
    family
        .members
        .par_iter()
        .map(|m| {
            let est = spectral_gap(&m.graph, &SpectrumOptions::default())?;
            if est.zero_multiplicity > 1 {
                return Err(Error::Disconnected {
                    components: est.zero_multiplicity,
                });
            }
            let gap = est.gap.unwrap_or(0.0);
            Ok(ExpanderCheck {
                label: m.label.clone(),
                vertices: m.graph.vertex_count(),
                gap,
                certified: gap >= h,
            })
        })
        .collect()
}

/// Expansion constant `h / (2h + 3)` of a tree graft onto an `h`-expander.
pub fn graft_expansion_bound(h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "expansion constant {h} must be positive"
        )));
    }
    Ok(h / (2.0 * h + 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_standard, StandardKind};

    fn std(kind: StandardKind, n: usize) -> Graph {
        gen_standard(kind, n).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let c4 = std(StandardKind::Cycle, 4);
        assert_eq!(edge_boundary(&c4, &[0, 1]).unwrap().edge_boundary_size, 2);
        let k4 = std(StandardKind::Complete, 4);
        let r = edge_boundary(&k4, &[0]).unwrap();
        assert_eq!(r.edge_boundary_size, 3);
        assert_eq!(r.outer_vertex_boundary_size, 3);
        assert_eq!(
            edge_boundary(&k4, &[0, 1, 2, 3])
                .unwrap()
                .edge_boundary_size,
            0
        );
        assert!(edge_boundary(&k4, &[4]).is_err());
    }

    #[test]
    fn cheeger_examples() {
        let cert = cheeger_exact(&std(StandardKind::Cycle, 8), CheegerMode::Half, 24).unwrap();
        assert_eq!(cert.minimum_ratio, 0.5);
        assert_eq!(cert.witness_subset.len(), 4);
        let arc = &cert.witness_subset;
        assert!(arc.windows(2).filter(|w| w[1] == w[0] + 1).count() >= 2);

        let cert = cheeger_exact(&std(StandardKind::Complete, 4), CheegerMode::Half, 24).unwrap();
        assert_eq!(cert.minimum_ratio, 2.0);
        assert_eq!(cert.witness_subset.len(), 2);

        let cert = cheeger_exact(&std(StandardKind::Path, 4), CheegerMode::Half, 24).unwrap();
        assert_eq!(cert.minimum_ratio, 0.5);
        assert!(cert.witness_subset == vec![0, 1] || cert.witness_subset == vec![2, 3]);
    }

    #[test]
    fn cheeger_errors() {
        let big = std(StandardKind::Cycle, 30);
        assert!(matches!(
            cheeger_exact(&big, CheegerMode::Half, 24),
            Err(Error::TooLarge {
                vertices: 30,
                cap: 24
            })
        ));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(cheeger_exact(&split, CheegerMode::Half, 24).is_err());
        let surrogate = cheeger_certificate(&big, CheegerMode::Half, 24).unwrap();
        assert!(!surrogate.exact);
    }

    #[test]
    fn mid_range_dominates_half() {
        let g = std(StandardKind::Petersen, 10);
        let half = cheeger_exact(&g, CheegerMode::Half, 24).unwrap();
        let mid = cheeger_exact(&g, CheegerMode::MidRange, 24).unwrap();
        assert!(mid.minimum_ratio >= half.minimum_ratio);
        assert_eq!(CheegerMode::MidRange.size_range(10), (3, 5));
    }

    #[test]
    fn certify_families() {
        let mut complete = GraphFamily::new();
        for n in 4..9 {
            complete.push(format!("K{n}"), std(StandardKind::Complete, n));
        }
        let checks = expander_certify(&complete, 4.0).unwrap();
        for (c, n) in checks.iter().zip(4..) {
            assert!((c.gap - n as f64).abs() < 1e-9);
            assert!(c.certified);
        }
        let mut cycles = GraphFamily::new();
        cycles.push("C100", std(StandardKind::Cycle, 100));
        assert!(!expander_certify(&cycles, 0.1).unwrap()[0].certified);
        let mut edge = GraphFamily::new();
        edge.push("P2", std(StandardKind::Path, 2));
        assert!((expander_certify(&edge, 1.0).unwrap()[0].gap - 2.0).abs() < 1e-12);
    }

    #[test]
    fn graft_bound_values() {
        assert_eq!(graft_expansion_bound(0.5).unwrap(), 0.125);
        assert!((graft_expansion_bound(3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(graft_expansion_bound(0.0).is_err());
        assert!(graft_expansion_bound(1e-3).unwrap() > graft_expansion_bound(1e-4).unwrap());
    }
}
