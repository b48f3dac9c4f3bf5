use serde::Serialize;

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    /// Bridge edges as canonical pairs, sorted.
    pub bridges: Vec<(usize, usize)>,
    /// Edge ids of the bridges, parallel to `bridges`.
    #[serde(skip)]
    pub bridge_ids: Vec<usize>,
    pub non_bridge_count: usize,
}

impl BridgeReport {
    pub fn is_bridge(&self, id: usize) -> bool {
        self.bridge_ids.binary_search(&id).is_ok()
    }
}

/// Bridges by one iterative low-link DFS per component.
pub fn bridges(g: &Graph) -> BridgeReport {
    let n = g.vertex_count();
    let mut order = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_bridge = vec![false; g.edge_count()];
    let mut counter = 0;
    // (vertex, edge id used to enter it, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        order[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(frame) = stack.last_mut() {
            let (x, via, next) = *frame;
            if next < g.degree(x) {
                frame.2 += 1;
                let y = g.neighbors(x)[next];
                let id = g.incident_edges(x)[next];
                if id == via {
                    continue;
                }
                if order[y] == usize::MAX {
                    order[y] = counter;
                    low[y] = counter;
                    counter += 1;
                    stack.push((y, id, 0));
                } else {
                    low[x] = low[x].min(order[y]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[x]);
                    if low[x] > order[parent] {
                        is_bridge[via] = true;
                    }
                }
            }
        }
    }
    let bridge_ids: Vec<usize> = (0..g.edge_count()).filter(|&i| is_bridge[i]).collect();
    BridgeReport {
        bridges: bridge_ids.iter().map(|&i| g.edge(i)).collect(),
        non_bridge_count: g.edge_count() - bridge_ids.len(),
        bridge_ids,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_standard, StandardKind};
    use crate::graph::component_labels;

    fn brute_force(g: &Graph) -> Vec<usize> {
        let base = component_labels(g).1;
        (0..g.edge_count())
            .filter(|&i| component_labels(&g.without_edges(&[i])).1 > base)
            .collect()
    }

    #[test]
    fn path_cycle_and_barbell() {
        let p = gen_standard(StandardKind::Path, 4).unwrap();
        assert_eq!(bridges(&p).bridges.len(), 3);
        let c = gen_standard(StandardKind::Cycle, 4).unwrap();
        let r = bridges(&c);
        assert!(r.bridges.is_empty());
        assert_eq!(r.non_bridge_count, 4);
        let barbell =
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        let r = bridges(&barbell);
        assert_eq!(r.bridges, vec![(2, 3)]);
        assert_eq!(r.bridge_ids, brute_force(&barbell));
    }

    #[test]
    fn matches_removal_test_on_forest_and_isolated() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (1, 3), (4, 5)]).unwrap();
        let r = bridges(&g);
        assert_eq!(r.bridge_ids, brute_force(&g));
        assert_eq!(r.non_bridge_count, 0);
    }
}
