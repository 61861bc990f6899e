//! Minimum spanning trees and optimal paths under the lexicographic path order.
//!
//! A path is compared through its edge weights sorted in decreasing order: the
//! first differing entry decides, and a proper prefix beats the longer vector.
//! The union of all optimal paths is the minimum spanning tree, so every optimal
//! path query is answered by the unique tree path.

mod oracle;
mod path;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

pub use oracle::{
    brute_force_optimal_path, brute_force_optimal_paths_from, cut_property_check,
    induced_subgraph_mst, restriction_property_check, BRUTE_FORCE_VERTEX_LIMIT,
};
pub use path::{
    compare_paths, compare_weight_vectors, connected, f_beta_order_check, f_beta_threshold,
    optimal_crossing_path, path_cost, tree_path, LatticePath, NegativeClusters,
};

use crate::disorder::WeightedEdgeGraph;
use crate::error::{Error, Result};
use crate::graph::DisjointSets;

const NO_PARENT: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct SpanningTree<'a> {
    graph: &'a WeightedEdgeGraph<'a>,
    edges: Vec<usize>,
    in_tree: Vec<bool>,
    root: usize,
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    depth: Vec<u32>,
    total_weight: f64,
    growth_order: Option<Vec<usize>>,
}

impl<'a> SpanningTree<'a> {
    fn from_edges(
        graph: &'a WeightedEdgeGraph<'a>,
        edges: Vec<usize>,
        root: usize,
        growth_order: Option<Vec<usize>>,
    ) -> Self {
        let n = graph.vertex_count();
        let mut in_tree = vec![false; graph.edge_count()];
        for &e in &edges {
            in_tree[e] = true;
        }
        let mut parent = vec![NO_PARENT; n];
        let mut parent_edge = vec![NO_PARENT; n];
        let mut depth = vec![0u32; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        let topo = graph.topology();
        while let Some(v) = queue.pop_front() {
            for &(w, e) in topo.neighbors(v) {
                if in_tree[e] && !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    parent_edge[w] = e;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let total_weight = edges.iter().map(|&e| graph.weight(e)).sum();
        SpanningTree {
            graph,
            edges,
            in_tree,
            root,
            parent,
            parent_edge,
            depth,
            total_weight,
            growth_order,
        }
    }

    pub fn graph(&self) -> &'a WeightedEdgeGraph<'a> {
        self.graph
    }

    /// Tree edges in the order the algorithm selected them.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// Tree edges sorted by index.
    pub fn edge_set(&self) -> Vec<usize> {
        let mut s = self.edges.clone();
        s.sort_unstable();
        s
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != NO_PARENT).then_some(self.parent[v])
    }

    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        (self.parent_edge[v] != NO_PARENT).then_some(self.parent_edge[v])
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    /// Sum of the tree edge weights, `H(T)`.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Prim addition order, when built by [`prim`].
    pub fn growth_order(&self) -> Option<&[usize]> {
        self.growth_order.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// Lowest common ancestor by depth equalization.
    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u];
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v];
        }
        while u != v {
            u = self.parent[u];
            v = self.parent[v];
        }
        u
    }
}

/// Kruskal's algorithm over the `(weight, index)` edge order.
pub fn kruskal<'a>(graph: &'a WeightedEdgeGraph<'a>) -> Result<SpanningTree<'a>> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::Disconnected {
            reached: 0,
            total: 0,
        });
    }
    let topo = graph.topology();
    let mut sets = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for e in graph.ascending() {
        if edges.len() + 1 == n {
            break;
        }
        let [u, v] = topo.edge(e);
        if sets.union(u, v).is_some() {
            edges.push(e);
        }
    }
    if edges.len() + 1 != n {
        return Err(Error::Disconnected {
            reached: sets.set_size(0),
            total: n,
        });
    }
    Ok(SpanningTree::from_edges(graph, edges, 0, None))
}

/// Prim's algorithm grown from `root`; records the addition order.
pub fn prim<'a>(graph: &'a WeightedEdgeGraph<'a>, root: usize) -> Result<SpanningTree<'a>> {
    let n = graph.vertex_count();
    if root >= n {
        return Err(Error::InvalidVertex {
            vertex: root,
            count: n,
        });
    }
    let topo = graph.topology();
    let mut reached = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut order = Vec::with_capacity(n.saturating_sub(1));
    let grow = |v: usize, reached: &mut Vec<bool>, heap: &mut BinaryHeap<_>| {
        reached[v] = true;
        for &(w, e) in topo.neighbors(v) {
            if !reached[w] {
                heap.push(Reverse((graph.rank(e), e, w)));
            }
        }
    };
    grow(root, &mut reached, &mut heap);
    while let Some(Reverse((_, e, w))) = heap.pop() {
        if reached[w] {
            continue;
        }
        order.push(e);
        grow(w, &mut reached, &mut heap);
    }
    if order.len() + 1 != n {
        return Err(Error::Disconnected {
            reached: order.len() + 1,
            total: n,
        });
    }
    Ok(SpanningTree::from_edges(
        graph,
        order.clone(),
        root,
        Some(order),
    ))
}
