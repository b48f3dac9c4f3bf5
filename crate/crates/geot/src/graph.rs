//! Simple undirected graphs on dense vertex ids, the edge-list text format,
//! and the metric primitives everything else is built on.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sentinel distance for vertices in another component.
pub const UNREACHABLE: usize = usize::MAX;

/// A simple undirected graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted lexicographically.
/// The position of an edge in that list is its edge id, which edge functions
/// such as [`crate::cycles::CycleVector`] use for indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

/// An edge with a direction. `(x, y)` and `(y, x)` carry opposite signs in
/// every antisymmetric edge function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub tail: usize,
    pub head: usize,
}

impl OrientedEdge {
    pub fn new(tail: usize, head: usize) -> Self {
        debug_assert_ne!(tail, head);
        OrientedEdge { tail, head }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge {
            tail: self.head,
            head: self.tail,
        }
    }

    /// `+1` if the orientation agrees with the canonical `u < v` storage.
    pub fn sign(self) -> i64 {
        if self.tail < self.head {
            1
        } else {
            -1
        }
    }

    pub fn canonical(self) -> (usize, usize) {
        (self.tail.min(self.head), self.tail.max(self.head))
    }
}

impl Graph {
    /// The edgeless graph on `vertex_count` vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); vertex_count],
            incident: vec![Vec::new(); vertex_count],
        }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(vertex_count, list))
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated edges.
    pub fn from_edges_simplified<I>(vertex_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<_> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        list.sort_unstable();
        list.dedup();
        assert!(list.iter().all(|&(_, v)| v < vertex_count));
        Self::from_sorted_unique(vertex_count, list)
    }

    fn from_sorted_unique(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut incident = vec![Vec::new(); vertex_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push(v);
            incident[u].push(id);
            adjacency[v].push(u);
            incident[v].push(id);
        }
        // Incident lists follow the neighbor order.
        for x in 0..vertex_count {
            let mut pairs: Vec<_> = adjacency[x]
                .iter()
                .copied()
                .zip(incident[x].iter().copied())
                .collect();
            pairs.sort_unstable();
            adjacency[x] = pairs.iter().map(|p| p.0).collect();
            incident[x] = pairs.iter().map(|p| p.1).collect();
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
            incident,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges, `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    /// Edge ids incident to `x`, parallel to [`Graph::neighbors`].
    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.incident[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adjacency[x].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return None;
        }
        self.adjacency[u]
            .binary_search(&v)
            .ok()
            .map(|i| self.incident[u][i])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: x,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// The graph `(V, E \ removed)` on the same vertex set.
    pub fn without_edges(&self, removed: &[usize]) -> Graph {
        let mut keep = vec![true; self.edges.len()];
        for &id in removed {
            keep[id] = false;
        }
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&e, _)| e)
            .collect();
        Self::from_sorted_unique(self.vertex_count, edges)
    }

    /// Induced subgraph on `vertices` (in the given order). Returns the
    /// subgraph and, for each new vertex, its id in `self`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![UNREACHABLE; self.vertex_count];
        for (i, &x) in vertices.iter().enumerate() {
            index[x] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if index[u] != UNREACHABLE && index[v] != UNREACHABLE {
                let (a, b) = (index[u], index[v]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        (
            Self::from_sorted_unique(vertices.len(), edges),
            vertices.to_vec(),
        )
    }

    /// Canonical edge-list text: header line, then sorted `u v` lines.
    pub fn to_edge_list(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            for line in c.lines() {
                let _ = writeln!(out, "# {line}");
            }
        }
        let _ = writeln!(out, "n {}", self.vertex_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list format: `#` comments, a `n <count>` header, then one
/// `u v` pair per line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match vertex_count {
            None => {
                if tokens.len() != 2 || tokens[0] != "n" {
                    return Err(err(format!("expected header `n <count>`, found `{line}`")));
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .map_err(|e| err(format!("bad vertex count: {e}")))?;
                vertex_count = Some(n);
            }
            Some(n) => {
                if tokens.len() != 2 {
                    return Err(err(format!("expected `u v`, found `{line}`")));
                }
                let mut ends = [0usize; 2];
                for (slot, tok) in ends.iter_mut().zip(&tokens) {
                    *slot = tok
                        .parse::<usize>()
                        .map_err(|e| err(format!("bad vertex `{tok}`: {e}")))?;
                    if *slot >= n {
                        return Err(err(format!("vertex {} out of range for n = {n}", *slot)));
                    }
                }
                let [u, v] = ends;
                if u == v {
                    return Err(err(format!("loop at vertex {u}")));
                }
                edges.push((u.min(v), u.max(v)));
                lines.push(line_no);
            }
        }
    }
    let n = vertex_count.ok_or(Error::Parse {
        line: 0,
        message: "missing `n <count>` header".into(),
    })?;
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| (edges[i], lines[i]));
    for w in order.windows(2) {
        if edges[w[0]] == edges[w[1]] {
            let (u, v) = edges[w[1]];
            return Err(Error::Parse {
                line: lines[w[0]].max(lines[w[1]]),
                message: format!("duplicate edge ({u}, {v})"),
            });
        }
    }
    let mut sorted = edges;
    sorted.sort_unstable();
    Ok(Graph::from_sorted_unique(n, sorted))
}

pub(crate) fn bfs_unchecked(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if dist[y] == UNREACHABLE {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Shortest-path distances from `source`, [`UNREACHABLE`] outside its component.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<usize>> {
    g.check_vertex(source)?;
    Ok(bfs_unchecked(g, source))
}

/// Distance from `u` to `v` if it is at most `limit`.
pub fn distance_within(g: &Graph, u: usize, v: usize, limit: usize) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    let mut dist = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(u, 0usize);
    queue.push_back(u);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        if dx == limit {
            continue;
        }
        for &y in g.neighbors(x) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                if y == v {
                    return Some(dx + 1);
                }
                e.insert(dx + 1);
                queue.push_back(y);
            }
        }
    }
    None
}

/// Component label per vertex (labels ordered by smallest member) and the count.
pub fn component_labels(g: &Graph) -> (Vec<usize>, usize) {
    let mut label = vec![UNREACHABLE; g.vertex_count()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.vertex_count() {
        if label[s] != UNREACHABLE {
            continue;
        }
        label[s] = count;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if label[y] == UNREACHABLE {
                    label[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    (label, count)
}

/// Maximal connected vertex sets, each sorted, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let (label, count) = component_labels(g);
    let mut classes = vec![Vec::new(); count];
    for (x, &l) in label.iter().enumerate() {
        classes[l].push(x);
    }
    classes
}

pub fn is_connected(g: &Graph) -> bool {
    component_labels(g).1 <= 1
}

pub fn max_degree(g: &Graph) -> usize {
    (0..g.vertex_count())
        .map(|x| g.degree(x))
        .max()
        .unwrap_or(0)
}

/// Induced subgraph on a closed ball.
#[derive(Clone, Debug)]
pub struct Ball {
    pub graph: Graph,
    /// `vertices[i]` is the id in the ambient graph of ball vertex `i`.
    pub vertices: Vec<usize>,
}

/// The induced subgraph on `{x : d(center, x) <= radius}`.
pub fn ball(g: &Graph, center: usize, radius: usize) -> Result<Ball> {
    let dist = bfs_distances(g, center)?;
    let vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&x| dist[x] <= radius)
        .collect();
    let (graph, vertices) = g.induced_subgraph(&vertices);
    Ok(Ball { graph, vertices })
}

/// One graph of a family, with an optional designated root.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub label: String,
    pub graph: Graph,
    pub root: Option<usize>,
}

/// An ordered family of graphs modelling a sequence `(X_n)`.
#[derive(Clone, Debug, Default)]
pub struct GraphFamily {
    pub members: Vec<FamilyMember>,
}

impl GraphFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, graph: Graph) {
        self.members.push(FamilyMember {
            label: label.into(),
            graph,
            root: None,
        });
    }

    pub fn push_rooted(&mut self, label: impl Into<String>, graph: Graph, root: usize) {
        self.members.push(FamilyMember {
            label: label.into(),
            graph,
            root: Some(root),
        });
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether vertex counts never decrease along the family.
    pub fn is_nondecreasing(&self) -> bool {
        self.members
            .windows(2)
            .all(|w| w[0].graph.vertex_count() <= w[1].graph.vertex_count())
    }
}
