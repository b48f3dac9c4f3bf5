//! Cycle spaces: bridges, short cycles and their exact rank, nice cycle
//! vectors, Eulerian orientations, and the edge selection / phase solver used
//! by the twisted-Laplacian witness.

mod bridges;
mod enumerate;
mod nice;
mod phase;

pub use bridges::{bridges, BridgeReport};
pub use enumerate::{
    cycle_edge_vector, cycle_space_dim, fundamental_cycles, short_cycle_rank, short_cycles,
    CycleOptions, ShortCycleSet, DEFAULT_CYCLE_CAP,
};
pub use nice::{eulerian_orientation, nice_cycle_vector, DEFAULT_MAX_RETRIES};
pub use phase::{
    extend_rho, extend_rho_all, select_b, solve_rho, EdgeSelection, PairPhases,
    ORTHOGONALITY_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One stored value of an antisymmetric edge function: `value(u -> v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord<T> {
    pub u: usize,
    pub v: usize,
    pub value: T,
}

/// An antisymmetric function on oriented edges, stored on canonical edges.
///
/// When built from a graph, `edges` is that graph's edge list, so edge ids
/// index `values` directly.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunction<T> {
    edges: Vec<(usize, usize)>,
    values: Vec<T>,
}

impl<T> EdgeFunction<T>
where
    T: Copy + Default + PartialEq + std::ops::Neg<Output = T>,
{
    pub fn zeros(g: &Graph) -> Self {
        EdgeFunction {
            edges: g.edges().to_vec(),
            values: vec![T::default(); g.edge_count()],
        }
    }

    /// `values[id]` is the value on edge `id` of `g`, oriented from the
    /// smaller endpoint.
    pub fn from_values(g: &Graph, values: Vec<T>) -> Result<Self> {
        if values.len() != g.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} edges",
                values.len(),
                g.edge_count()
            )));
        }
        Ok(EdgeFunction {
            edges: g.edges().to_vec(),
            values,
        })
    }

    pub fn from_records(records: Vec<EdgeRecord<T>>) -> Result<Self> {
        let mut pairs: Vec<((usize, usize), T)> = Vec::with_capacity(records.len());
        for r in records {
            if r.u == r.v {
                return Err(Error::InvalidParameter(format!("loop at {}", r.u)));
            }
            if r.u < r.v {
                pairs.push(((r.u, r.v), r.value));
            } else {
                pairs.push(((r.v, r.u), -r.value));
            }
        }
        pairs.sort_by_key(|a| a.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("repeated edge in records".into()));
        }
        Ok(EdgeFunction {
            edges: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn records(&self) -> Vec<EdgeRecord<T>> {
        self.edges
            .iter()
            .zip(&self.values)
            .map(|(&(u, v), &value)| EdgeRecord { u, v, value })
            .collect()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Values on canonical edges.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn edge_value(&self, id: usize) -> T {
        self.values[id]
    }

    /// `value(x -> y)`, or `None` if `{x, y}` is not an edge of the domain.
    pub fn value(&self, x: usize, y: usize) -> Option<T> {
        let key = (x.min(y), x.max(y));
        let i = self.edges.binary_search(&key).ok()?;
        let v = self.values[i];
        Some(if x < y { v } else { -v })
    }

    /// Whether the stored edges are exactly the edges of `g`.
    pub fn is_on(&self, g: &Graph) -> bool {
        self.edges == g.edges()
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != T::default()).count()
    }

    /// Re-expresses the function on the edges of `g`: edges of `g` outside
    /// the domain get zero; domain edges missing from `g` are an error.
    pub fn lift_to(&self, g: &Graph) -> Result<Self> {
        let mut values = vec![T::default(); g.edge_count()];
        for (&(u, v), &val) in self.edges.iter().zip(&self.values) {
            let id = g.edge_id(u, v).ok_or(Error::MissingEdge { u, v })?;
            values[id] = val;
        }
        Ok(EdgeFunction {
            edges: g.edges().to_vec(),
            values,
        })
    }

    /// Values re-indexed to `g`'s edge ids; every edge of `g` must be present.
    pub fn on_graph(&self, g: &Graph) -> Result<Vec<T>> {
        if self.is_on(g) {
            return Ok(self.values.clone());
        }
        g.edges()
            .iter()
            .map(|&(u, v)| self.value(u, v).ok_or(Error::MissingEdge { u, v }))
            .collect()
    }
}

impl<T> Serialize for EdgeFunction<T>
where
    T: Copy + Default + PartialEq + std::ops::Neg<Output = T> + Serialize,
{
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.records().serialize(s)
    }
}

impl<'de, T> Deserialize<'de> for EdgeFunction<T>
where
    T: Copy + Default + PartialEq + std::ops::Neg<Output = T> + Deserialize<'de>,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<EdgeRecord<T>>::deserialize(d)?;
        EdgeFunction::from_records(records).map_err(serde::de::Error::custom)
    }
}

/// Integer-valued antisymmetric edge function; a cycle vector when its
/// divergence vanishes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleVector(pub EdgeFunction<i64>);

impl CycleVector {
    pub fn zeros(g: &Graph) -> Self {
        CycleVector(EdgeFunction::zeros(g))
    }

    pub fn from_values(g: &Graph, values: Vec<i64>) -> Result<Self> {
        EdgeFunction::from_values(g, values).map(CycleVector)
    }

    pub fn value(&self, x: usize, y: usize) -> Option<i64> {
        self.0.value(x, y)
    }

    pub fn support_size(&self) -> usize {
        self.0.support_size()
    }

    /// `sum_{y ~ x} value(x, y)` for every vertex of `g`.
    pub fn divergence(&self, g: &Graph) -> Result<Vec<i64>> {
        let vals = self.0.on_graph(g)?;
        let mut div = vec![0i64; g.vertex_count()];
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            div[u] += vals[id];
            div[v] -= vals[id];
        }
        Ok(div)
    }

    pub fn is_divergence_free(&self, g: &Graph) -> bool {
        self.divergence(g)
            .map(|d| d.iter().all(|&x| x == 0))
            .unwrap_or(false)
    }

    /// Every value in `{-1, 0, 1}`.
    pub fn is_unit_valued(&self) -> bool {
        self.0.values().iter().all(|v| v.abs() <= 1)
    }

    pub fn lift_to(&self, g: &Graph) -> Result<Self> {
        self.0.lift_to(g).map(CycleVector)
    }
}

/// Real antisymmetric edge function used as a phase `exp(i t rho(x, y))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseFunction(pub EdgeFunction<f64>);

impl PhaseFunction {
    pub fn zeros(g: &Graph) -> Self {
        PhaseFunction(EdgeFunction::zeros(g))
    }

    pub fn from_values(g: &Graph, values: Vec<f64>) -> Result<Self> {
        EdgeFunction::from_values(g, values).map(PhaseFunction)
    }

    pub fn from_cycle_vector(v: &CycleVector) -> Self {
        PhaseFunction(EdgeFunction {
            edges: v.0.edges.clone(),
            values: v.0.values.iter().map(|&x| x as f64).collect(),
        })
    }

    pub fn value(&self, x: usize, y: usize) -> Option<f64> {
        self.0.value(x, y)
    }

    pub fn scaled(&self, t: f64) -> Self {
        PhaseFunction(EdgeFunction {
            edges: self.0.edges.clone(),
            values: self.0.values.iter().map(|&x| x * t).collect(),
        })
    }

    /// Sum of the function along a closed vertex sequence.
    pub fn circulation(&self, cycle: &[usize]) -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..cycle.len() {
            let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            acc += self.value(x, y).ok_or(Error::MissingEdge { u: x, v: y })?;
        }
        Ok(acc)
    }
}
