use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{
    cycle_edge_vector, cycle_space_dim, fundamental_cycles, short_cycle_rank, CycleOptions,
    CycleVector, EdgeRecord, PhaseFunction, ShortCycleSet,
};
use crate::error::{Error, Result};
use crate::exact::{eliminate, normalize, rational_rank, rational_to_f64, solve_rational};
use crate::graph::{component_labels, is_connected, Graph, UNREACHABLE};

/// Maximum tolerated `|<rho, z>|` over enumerated short cycles `z`.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// The edges `b_1, ..., b_m` whose removal kills the short-cycle space.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeSelection {
    pub r: usize,
    /// Selected edges in order of selection.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    pub edge_ids: Vec<usize>,
    /// For step `j`, the element of `Z_R ∩ Z(X \ {b_1..b_{j-1}})` whose
    /// smallest support edge was `b_j`.
    pub certificates: Vec<Vec<EdgeRecord<i64>>>,
    /// The enumerated short cycles and the rank of their span.
    #[serde(skip)]
    pub cycles: ShortCycleSet,
    /// Indices into `cycles.cycles` of an independent spanning subset.
    #[serde(skip)]
    pub basis: Vec<usize>,
}

impl EdgeSelection {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.edge_ids.contains(&id)
    }

    /// `g` with the selected edges removed.
    pub fn remainder(&self, g: &Graph) -> Graph {
        g.without_edges(&self.edge_ids)
    }

    /// Connectivity of the remainder and the rank additivity
    /// `rank(Z_R ∪ Z(X \ B)) = rank(Z_R) + dim Z(X \ B)`.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let rest = self.remainder(g);
        if !is_connected(&rest) {
            return Err(Error::Invariant("graph minus B is disconnected".into()));
        }
        let mut rows = Vec::new();
        for &i in &self.basis {
            rows.push(cycle_edge_vector(g, &self.cycles.cycles[i])?);
        }
        for c in fundamental_cycles(&rest) {
            rows.push(cycle_edge_vector(g, &c)?);
        }
        let expected = self.basis.len() + cycle_space_dim(&rest);
        let got = if rows.is_empty() {
            0
        } else {
            rational_rank(&rows, Some(cycle_space_dim(g)))
        };
        if got != expected {
            return Err(Error::Invariant(format!(
                "short cycles meet the cycle space of X \\ B: rank {got} != {expected}"
            )));
        }
        Ok(())
    }
}

fn to_records(g: &Graph, row: &[BigInt]) -> Result<Vec<EdgeRecord<i64>>> {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(id, x)| {
            let (u, v) = g.edge(id);
            let value = x
                .to_i64()
                .ok_or_else(|| Error::Invariant("certificate entry exceeds i64".into()))?;
            Ok(EdgeRecord { u, v, value })
        })
        .collect()
}

/// Chooses one edge per dimension of `Z_R`: repeatedly take the first basis
/// vector of `Z_R ∩ Z(X \ B)`, add its smallest support edge to `B`, and
/// eliminate that coordinate from the remaining basis vectors.
pub fn select_b(g: &Graph, r: usize, opts: CycleOptions) -> Result<EdgeSelection> {
    let components = component_labels(g).1;
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let cycles = short_cycle_rank(g, r, opts)?;
    let basis = cycles.basis_indices(g)?;
    let mut work: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|&i| {
            cycle_edge_vector(g, &cycles.cycles[i])
                .map(|row| row.into_iter().map(BigInt::from).collect())
        })
        .collect::<Result<_>>()?;
    for row in work.iter_mut() {
        normalize(row);
    }
    let mut edge_ids = Vec::new();
    let mut certificates = Vec::new();
    while !work.is_empty() {
        let head = work.remove(0);
        let col = head
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Invariant("zero vector in short-cycle basis".into()))?;
        for row in work.iter_mut() {
            eliminate(row, &head, col);
        }
        certificates.push(to_records(g, &head)?);
        edge_ids.push(col);
    }
    let selection = EdgeSelection {
        r,
        edges: edge_ids.iter().map(|&id| g.edge(id)).collect(),
        edge_ids,
        certificates,
        cycles,
        basis,
    };
    selection.verify(g)?;
    Ok(selection)
}

/// The unique `rho ⊥ Z_R` agreeing with `v` off the selected edges.
///
/// `v` may live on `g` or on `g \ B`; values of `v` on the selected edges are
/// ignored. The unknowns `rho(b_j)` solve an exact `m × m` system with one
/// row per basis cycle.
pub fn solve_rho(g: &Graph, r: usize, v: &CycleVector, b: &EdgeSelection) -> Result<PhaseFunction> {
    if b.r != r {
        return Err(Error::InvalidParameter(format!(
            "edge selection was made for R = {}, not {r}",
            b.r
        )));
    }
    let v = if v.0.is_on(g) {
        v.clone()
    } else {
        v.lift_to(g)?
    };
    let mut values: Vec<f64> = v.0.values().iter().map(|&x| x as f64).collect();
    let m = b.len();
    if m > 0 {
        let mut col_of = vec![usize::MAX; g.edge_count()];
        for (j, &id) in b.edge_ids.iter().enumerate() {
            col_of[id] = j;
        }
        let mut matrix = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for &i in &b.basis {
            let row = cycle_edge_vector(g, &b.cycles.cycles[i])?;
            let mut coeffs = vec![BigInt::zero(); m];
            let mut known = 0i64;
            for (id, &z) in row.iter().enumerate() {
                if z == 0 {
                    continue;
                }
                match col_of[id] {
                    usize::MAX => known += z * v.0.edge_value(id),
                    j => coeffs[j] = BigInt::from(z),
                }
            }
            matrix.push(coeffs);
            rhs.push(BigInt::from(-known));
        }
        let solution = solve_rational(&matrix, &rhs)
            .map_err(|_| Error::Invariant("edge selection leaves a singular system".into()))?;
        for (&id, x) in b.edge_ids.iter().zip(&solution) {
            values[id] = rational_to_f64(x);
        }
    }
    let rho = PhaseFunction::from_values(g, values)?;
    let mut worst: f64 = 0.0;
    for c in &b.cycles.cycles {
        worst = worst.max(rho.circulation(c)?.abs());
    }
    if worst > ORTHOGONALITY_TOLERANCE {
        return Err(Error::Residual {
            residual: worst,
            tolerance: ORTHOGONALITY_TOLERANCE,
        });
    }
    Ok(rho)
}

/// Phases `rho(x, y)` for every pair in one component, summed along a fixed
/// shortest path. The path for `(y, x)` is the reverse of the path for
/// `(x, y)`, so the table is antisymmetric.
#[derive(Clone, Debug)]
pub struct PairPhases {
    n: usize,
    dist: Vec<usize>,
    phase: Vec<f64>,
}

impl PairPhases {
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = x * self.n + y;
        (self.dist[i] != UNREACHABLE).then(|| self.phase[i])
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x * self.n + y]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
}

// Sums rho from `source` along BFS parents; the parent of w is its smallest
// neighbor one step closer to `source`.
fn phases_from(g: &Graph, rho: &[f64], source: usize) -> (Vec<usize>, Vec<f64>) {
    let n = g.vertex_count();
    let mut dist = vec![UNREACHABLE; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([source]);
    dist[source] = 0;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        for &y in g.neighbors(x) {
            if dist[y] == UNREACHABLE {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    let mut phase = vec![0.0; n];
    for &w in order.iter().skip(1) {
        let (&p, &id) = g
            .neighbors(w)
            .iter()
            .zip(g.incident_edges(w))
            .find(|(&p, _)| dist[p] + 1 == dist[w])
            .expect("BFS vertex has a parent");
        let step = if p < w { rho[id] } else { -rho[id] };
        phase[w] = phase[p] + step;
    }
    (dist, phase)
}

/// Extends `rho` to all pairs of vertices in a common component.
pub fn extend_rho_all(g: &Graph, rho: &PhaseFunction) -> Result<PairPhases> {
    let vals = rho.0.on_graph(g)?;
    let n = g.vertex_count();
    let mut dist = vec![UNREACHABLE; n * n];
    let mut phase = vec![0.0; n * n];
    for s in 0..n {
        let (d, p) = phases_from(g, &vals, s);
        for w in s..n {
            dist[s * n + w] = d[w];
            dist[w * n + s] = d[w];
            phase[s * n + w] = p[w];
            phase[w * n + s] = -p[w];
        }
    }
    Ok(PairPhases { n, dist, phase })
}

/// `rho(x, y)` for the requested pairs.
pub fn extend_rho(g: &Graph, rho: &PhaseFunction, pairs: &[(usize, usize)]) -> Result<Vec<f64>> {
    let vals = rho.0.on_graph(g)?;
    let mut cache: BTreeMap<usize, (Vec<usize>, Vec<f64>)> = BTreeMap::new();
    pairs
        .iter()
        .map(|&(x, y)| {
            g.check_vertex(x)?;
            g.check_vertex(y)?;
            let (s, w) = (x.min(y), x.max(y));
            let (d, p) = cache.entry(s).or_insert_with(|| phases_from(g, &vals, s));
            if d[w] == UNREACHABLE {
                return Err(Error::InvalidParameter(format!(
                    "vertices {x} and {y} lie in different components"
                )));
            }
            Ok(if x <= y { p[w] } else { -p[w] })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_standard, StandardKind};

    fn opts() -> CycleOptions {
        CycleOptions::default()
    }

    #[test]
    fn petersen_below_girth_selects_nothing() {
        let p = gen_standard(StandardKind::Petersen, 10).unwrap();
        let b = select_b(&p, 4, opts()).unwrap();
        assert!(b.is_empty());
        let v = CycleVector::zeros(&p);
        let rho = solve_rho(&p, 4, &v, &b).unwrap();
        assert!(rho.0.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn four_cycle_selection_and_closed_form_rho() {
        let c4 = gen_standard(StandardKind::Cycle, 4).unwrap();
        let b = select_b(&c4, 4, opts()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.edges, vec![(0, 1)]);
        let rest = b.remainder(&c4);
        assert!(is_connected(&rest));
        assert_eq!(rest.edge_count(), 3);
        // v = +1 along 0 -> 1 -> 2 -> 3 -> 0.
        let mut vals = vec![0; 4];
        for (x, y) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            let id = c4.edge_id(x, y).unwrap();
            vals[id] = if x < y { 1 } else { -1 };
        }
        let v = CycleVector::from_values(&c4, vals).unwrap();
        let rho = solve_rho(&c4, 4, &v, &b).unwrap();
        assert_eq!(rho.value(0, 1), Some(-3.0));
        assert_eq!(rho.value(1, 2), Some(1.0));
        assert_eq!(rho.value(2, 3), Some(1.0));
        assert_eq!(rho.value(3, 0), Some(1.0));
    }

    #[test]
    fn k4_selection_leaves_spanning_tree() {
        let k4 = gen_standard(StandardKind::Complete, 4).unwrap();
        let b = select_b(&k4, 3, opts()).unwrap();
        assert_eq!(b.len(), 3);
        let rest = b.remainder(&k4);
        assert_eq!(rest.edge_count(), 3);
        assert!(is_connected(&rest));
        let v = CycleVector::zeros(&rest);
        let rho = solve_rho(&k4, 3, &v, &b).unwrap();
        for c in &b.cycles.cycles {
            assert!(rho.circulation(c).unwrap().abs() <= 1e-9);
        }
    }

    #[test]
    fn k4_nonzero_v_gives_orthogonal_rho() {
        let k4 = gen_standard(StandardKind::Complete, 4).unwrap();
        let b = select_b(&k4, 3, opts()).unwrap();
        let vals: Vec<i64> = (0..6).map(|i| [1, -1, 1, 0, 1, -1][i]).collect();
        let v = CycleVector::from_values(&k4, vals.clone()).unwrap();
        let rho = solve_rho(&k4, 3, &v, &b).unwrap();
        for c in &b.cycles.cycles {
            assert!(rho.circulation(c).unwrap().abs() <= 1e-9);
        }
        for (id, &x) in vals.iter().enumerate() {
            if !b.contains(id) {
                assert_eq!(rho.0.edge_value(id), x as f64);
            }
        }
    }

    #[test]
    fn extension_basics() {
        let g = gen_standard(StandardKind::Cycle, 5).unwrap();
        let rho = PhaseFunction::from_values(&g, vec![0.5, -1.0, 2.0, 0.25, 3.0]).unwrap();
        let vals = extend_rho(&g, &rho, &[(0, 1), (1, 0), (2, 2), (0, 2), (2, 0)]).unwrap();
        assert_eq!(vals[0], 0.5);
        assert_eq!(vals[1], -0.5);
        assert_eq!(vals[2], 0.0);
        assert_eq!(vals[3], -vals[4]);
        let all = extend_rho_all(&g, &rho).unwrap();
        for x in 0..5 {
            for y in 0..5 {
                assert_eq!(all.get(x, y), Some(-all.get(y, x).unwrap()));
            }
        }
        assert_eq!(all.get(0, 2), Some(vals[3]));
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let z = PhaseFunction::zeros(&two);
        assert!(extend_rho(&two, &z, &[(0, 3)]).is_err());
    }
}
