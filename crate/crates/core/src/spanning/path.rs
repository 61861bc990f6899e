use std::cmp::Ordering;

use crate::disorder::{WeightKey, WeightedEdgeGraph};
use crate::error::{Error, Result};
use crate::graph::DisjointSets;

use super::SpanningTree;

/// A simple path with its edge weights sorted in decreasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePath {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub sorted_weights: Vec<WeightKey>,
}

impl LatticePath {
    /// The zero-length path sitting at `v`.
    pub fn trivial(v: usize) -> Self {
        LatticePath {
            vertices: vec![v],
            edges: Vec::new(),
            sorted_weights: Vec::new(),
        }
    }

    /// Builds a path from its vertex sequence and the edges joining them.
    pub fn new(graph: &WeightedEdgeGraph, vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        Self::with_weights(graph.weights(), vertices, edges)
    }

    /// Builds a path whose edge `e` weighs `weights[e]`.
    pub fn with_weights(weights: &[f64], vertices: Vec<usize>, edges: Vec<usize>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        let mut sorted_weights: Vec<WeightKey> = edges
            .iter()
            .map(|&edge| WeightKey {
                weight: weights[edge],
                edge,
            })
            .collect();
        sorted_weights.sort_unstable_by(|a, b| b.cmp(a));
        LatticePath {
            vertices,
            edges,
            sorted_weights,
        }
    }

    /// Number of edges `N(path)`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self
            .vertices
            .last()
            .expect("a path has at least one vertex")
    }

    /// Same path walked backwards.
    pub fn reversed(&self) -> Self {
        let mut p = self.clone();
        p.vertices.reverse();
        p.edges.reverse();
        p
    }

    /// Checks simplicity and that consecutive vertices are joined by the listed edges.
    pub fn is_valid(&self, graph: &WeightedEdgeGraph) -> bool {
        let topo = graph.topology();
        let mut seen = std::collections::HashSet::new();
        if !self.vertices.iter().all(|v| seen.insert(*v)) {
            return false;
        }
        self.vertices.len() == self.edges.len() + 1
            && self.edges.iter().enumerate().all(|(k, &e)| {
                let [p, q] = topo.edge(e);
                let (u, v) = (self.vertices[k], self.vertices[k + 1]);
                (p == u && q == v) || (p == v && q == u)
            })
    }
}

/// Lexicographic order on decreasing weight vectors; a proper prefix is smaller.
pub fn compare_weight_vectors(w1: &[WeightKey], w2: &[WeightKey]) -> Ordering {
    for (a, b) in w1.iter().zip(w2) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    w1.len().cmp(&w2.len())
}

pub fn compare_paths(g1: &LatticePath, g2: &LatticePath) -> Ordering {
    compare_weight_vectors(&g1.sorted_weights, &g2.sorted_weights)
}

/// The unique tree path from `i` to `j`.
pub fn tree_path(tree: &SpanningTree, i: usize, j: usize) -> LatticePath {
    let (mut u, mut v) = (i, j);
    let mut head = vec![u];
    let mut head_edges = Vec::new();
    let mut tail = vec![v];
    let mut tail_edges = Vec::new();
    while tree.depth(u) > tree.depth(v) {
        head_edges.push(tree.parent_edge[u]);
        u = tree.parent[u];
        head.push(u);
    }
    while tree.depth(v) > tree.depth(u) {
        tail_edges.push(tree.parent_edge[v]);
        v = tree.parent[v];
        tail.push(v);
    }
    while u != v {
        head_edges.push(tree.parent_edge[u]);
        u = tree.parent[u];
        head.push(u);
        tail_edges.push(tree.parent_edge[v]);
        v = tree.parent[v];
        tail.push(v);
    }
    // both walks end at the meeting vertex; keep it once
    tail.pop();
    head.extend(tail.into_iter().rev());
    head_edges.extend(tail_edges.into_iter().rev());
    LatticePath::new(tree.graph(), head, head_edges)
}

/// The largest edge weight on the path.
pub fn path_cost(path: &LatticePath) -> Result<f64> {
    path.sorted_weights
        .first()
        .map(|k| k.weight)
        .ok_or(Error::EmptyPath)
}

/// Two vertices are connected when their optimal path has negative cost.
/// The empty path at `i == j` counts as cost `-inf`.
pub fn connected(tree: &SpanningTree, i: usize, j: usize) -> bool {
    if i == j {
        return true;
    }
    path_cost(&tree_path(tree, i, j)).map_or(true, |c| c < 0.0)
}

/// Clusters of the subgraph of strictly negative edges.
#[derive(Debug, Clone)]
pub struct NegativeClusters {
    sets: DisjointSets,
}

impl NegativeClusters {
    pub fn new(graph: &WeightedEdgeGraph) -> Self {
        let topo = graph.topology();
        let mut sets = DisjointSets::new(graph.vertex_count());
        for e in 0..graph.edge_count() {
            if graph.weight(e) < 0.0 {
                let [u, v] = topo.edge(e);
                sets.union(u, v);
            }
        }
        NegativeClusters { sets }
    }

    pub fn connected(&mut self, i: usize, j: usize) -> bool {
        self.sets.same(i, j)
    }
}

/// Optimal path among all tree paths from `bottom` to `top`.
///
/// The winner's largest edge is the first tree edge, in increasing order, that
/// joins a component holding a `bottom` vertex to one holding a `top` vertex.
/// The two halves on either side of that edge are then chosen independently:
/// the order compares the largest element of the symmetric difference, so a
/// shared edge set never changes the comparison.
pub fn optimal_crossing_path(
    tree: &SpanningTree,
    bottom: &[usize],
    top: &[usize],
) -> Result<LatticePath> {
    if bottom.is_empty() || top.is_empty() {
        return Err(Error::EmptySet);
    }
    let graph = tree.graph();
    let topo = graph.topology();
    let n = tree.vertex_count();
    let mut in_bottom = vec![false; n];
    let mut in_top = vec![false; n];
    for &v in bottom {
        in_bottom[v] = true;
    }
    for &v in top {
        in_top[v] = true;
    }
    if let Some(&v) = bottom.iter().find(|&&v| in_top[v]) {
        return Ok(LatticePath::trivial(v));
    }

    let mut tree_edges = tree.edges().to_vec();
    tree_edges.sort_unstable_by_key(|&e| graph.rank(e));
    let mut sets = DisjointSets::new(n);
    let mut has_bottom = in_bottom.clone();
    let mut has_top = in_top.clone();
    let mut bridge = None;
    for e in tree_edges {
        let [u, v] = topo.edge(e);
        let (ru, rv) = (sets.find(u), sets.find(v));
        if (has_bottom[ru] && has_top[rv]) || (has_top[ru] && has_bottom[rv]) {
            bridge = Some((e, u, v, ru, rv));
            break;
        }
        let r = sets.union(ru, rv).expect("tree edges never close a cycle");
        has_bottom[r] = has_bottom[ru] || has_bottom[rv];
        has_top[r] = has_top[ru] || has_top[rv];
    }
    let (_, u, v, ru, rv) = bridge.expect("a spanning tree joins every pair of sets");
    // orient so that `u`'s side holds the bottom candidates
    let (u, v, ru, rv) = if has_bottom[ru] && has_top[rv] {
        (u, v, ru, rv)
    } else {
        (v, u, rv, ru)
    };
    let best_end = |targets: &[usize], anchor: usize, root: usize, sets: &mut DisjointSets| {
        let mut best: Option<LatticePath> = None;
        for &x in targets {
            if sets.find(x) != root {
                continue;
            }
            let p = tree_path(tree, x, anchor);
            if best
                .as_ref()
                .is_none_or(|b| compare_paths(&p, b) == Ordering::Less)
            {
                best = Some(p);
            }
        }
        best.expect("component holds a candidate").start()
    };
    let from = best_end(bottom, u, ru, &mut sets);
    let to = best_end(top, v, rv, &mut sets);
    Ok(tree_path(tree, from, to))
}

fn log_sum_exp(beta: f64, weights: &[f64]) -> f64 {
    let m = weights
        .iter()
        .map(|&w| beta * w)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + weights
        .iter()
        .map(|&w| (beta * w - m).exp())
        .sum::<f64>()
        .ln()
}

// Weights of each path with the edges common to both removed.
fn exclusive_weights(g1: &LatticePath, g2: &LatticePath) -> (Vec<f64>, Vec<f64>) {
    let (mut i, mut j) = (0, 0);
    let (a, b) = (&g1.sorted_weights, &g2.sorted_weights);
    let (mut only1, mut only2) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x > y => {
                only1.push(x.weight);
                i += 1;
            }
            (Some(_), Some(y)) => {
                only2.push(y.weight);
                j += 1;
            }
            (Some(x), None) => {
                only1.push(x.weight);
                i += 1;
            }
            (None, Some(y)) => {
                only2.push(y.weight);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (only1, only2)
}

/// `ln f_beta(g1) < ln f_beta(g2)` with `f_beta(g) = sum_e exp(beta W_e)`, shared
/// edges cancelled exactly before the sums are formed.
fn f_beta_less(beta: f64, only1: &[f64], only2: &[f64]) -> bool {
    log_sum_exp(beta, only1) < log_sum_exp(beta, only2)
}

const F_BETA_GRID: usize = 64;
const F_BETA_MIN: f64 = 1e-3;

/// Smallest `beta` on a geometric grid over `[1e-3, beta_max]` from which
/// `f_beta(g1) < f_beta(g2)` holds at every larger grid point; `None` when it
/// fails at `beta_max`.
pub fn f_beta_threshold(g1: &LatticePath, g2: &LatticePath, beta_max: f64) -> Option<f64> {
    let (only1, only2) = exclusive_weights(g1, g2);
    let lo = F_BETA_MIN.min(beta_max);
    let ratio = (beta_max / lo).powf(1.0 / (F_BETA_GRID - 1) as f64);
    let mut threshold = None;
    for k in (0..F_BETA_GRID).rev() {
        let beta = if k == F_BETA_GRID - 1 {
            beta_max
        } else {
            lo * ratio.powi(k as i32)
        };
        if f_beta_less(beta, &only1, &only2) {
            threshold = Some(beta);
        } else {
            break;
        }
    }
    threshold
}

/// Whether the additive cost `f_beta` reproduces `g1 < g2` for large enough
/// `beta <= beta_max`. `false` means `beta_max` was too small.
pub fn f_beta_order_check(g1: &LatticePath, g2: &LatticePath, beta_max: f64) -> bool {
    f_beta_threshold(g1, g2, beta_max).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::Provenance;
    use crate::graph::Topology;
    use crate::spanning::{brute_force_optimal_path, kruskal};

    fn keys(ws: &[(f64, usize)]) -> Vec<WeightKey> {
        ws.iter()
            .map(|&(weight, edge)| WeightKey { weight, edge })
            .collect()
    }

    #[test]
    fn first_differing_entry_decides() {
        let a = keys(&[(0.3, 0), (0.1, 1)]);
        let b = keys(&[(0.3, 0), (0.2, 2)]);
        assert_eq!(compare_weight_vectors(&a, &b), Ordering::Less);
        assert_eq!(compare_weight_vectors(&b, &a), Ordering::Greater);
    }

    #[test]
    fn proper_prefix_wins() {
        let a = keys(&[(0.3, 0)]);
        let b = keys(&[(0.3, 0), (-0.5, 1)]);
        assert_eq!(compare_weight_vectors(&a, &b), Ordering::Less);
    }

    #[test]
    fn identical_vectors_equal() {
        let a = keys(&[(0.3, 0), (0.1, 1)]);
        assert_eq!(compare_weight_vectors(&a, &a.clone()), Ordering::Equal);
    }

    fn square_with_diagonal() -> Topology {
        // 0-1-2 and 0-3-2 plus a long detour 0-4-5-2
        Topology::new(
            6,
            vec![[0, 1], [1, 2], [0, 3], [3, 2], [0, 4], [4, 5], [5, 2]],
        )
    }

    #[test]
    fn tree_path_basics() {
        let t = square_with_diagonal();
        let g = WeightedEdgeGraph::new(
            &t,
            vec![0.1, 0.9, 0.2, 0.3, -0.1, -0.2, 0.25],
            Provenance::Explicit,
        );
        let tree = kruskal(&g).unwrap();
        let p = tree_path(&tree, 2, 2);
        assert!(p.is_empty());
        assert_eq!(p.vertices, vec![2]);
        let q = tree_path(&tree, 0, 1);
        assert_eq!(q.edges, vec![0]);
        let r = tree_path(&tree, 1, 2);
        assert!(r.is_valid(&g));
        assert_eq!(r.start(), 1);
        assert_eq!(r.end(), 2);
        assert_eq!(
            compare_paths(&r, &brute_force_optimal_path(&g, 1, 2).unwrap()),
            Ordering::Equal
        );
    }

    #[test]
    fn route_avoiding_global_max_wins() {
        let t = square_with_diagonal();
        let g = WeightedEdgeGraph::new(
            &t,
            vec![0.1, 0.9, 0.2, 0.3, 0.5, 0.6, 0.7],
            Provenance::Explicit,
        );
        let best = brute_force_optimal_path(&g, 0, 2).unwrap();
        assert_eq!(best.vertices, vec![0, 3, 2]);
        let tree = kruskal(&g).unwrap();
        assert_eq!(tree_path(&tree, 0, 2).vertices, vec![0, 3, 2]);
    }

    #[test]
    fn path_cost_is_max_weight() {
        let t = Topology::new(3, vec![[0, 1], [1, 2]]);
        let g = WeightedEdgeGraph::new(&t, vec![0.1, 0.3], Provenance::Explicit);
        let p = LatticePath::new(&g, vec![0, 1, 2], vec![0, 1]);
        assert_eq!(path_cost(&p).unwrap(), 0.3);
        let single = LatticePath::new(&g, vec![0, 1], vec![0]);
        assert_eq!(path_cost(&single).unwrap(), 0.1);
        assert_eq!(path_cost(&LatticePath::trivial(0)), Err(Error::EmptyPath));
    }

    #[test]
    fn connectivity_conventions() {
        let t = Topology::new(3, vec![[0, 1], [1, 2]]);
        let g = WeightedEdgeGraph::new(&t, vec![-0.1, 0.3], Provenance::Explicit);
        let tree = kruskal(&g).unwrap();
        assert!(connected(&tree, 2, 2));
        assert!(connected(&tree, 0, 1));
        assert!(!connected(&tree, 0, 2));
        let mut clusters = NegativeClusters::new(&g);
        assert!(clusters.connected(0, 1));
        assert!(!clusters.connected(1, 2));
    }

    #[test]
    fn f_beta_examples() {
        let t = Topology::new(5, vec![[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]);
        let g = WeightedEdgeGraph::new(&t, vec![0.1, 0.9, 0.5, 0.5, 0.6], Provenance::Explicit);
        let low = LatticePath::new(&g, vec![0, 1], vec![0]);
        let high = LatticePath::new(&g, vec![1, 2], vec![1]);
        assert_eq!(compare_paths(&low, &high), Ordering::Less);
        assert_eq!(f_beta_threshold(&low, &high, 10.0), Some(F_BETA_MIN));

        // three edges of 0.5 against a single 0.6: only a large beta favors the triple
        let g2 = WeightedEdgeGraph::new(&t, vec![0.5, 0.5, 0.5, 0.1, 0.6], Provenance::Explicit);
        let triple = LatticePath::new(&g2, vec![0, 1, 2, 3], vec![0, 1, 2]);
        let single = LatticePath::new(&g2, vec![0, 4], vec![4]);
        assert_eq!(compare_paths(&triple, &single), Ordering::Less);
        assert!(f_beta_order_check(&triple, &single, 1e3));
        let threshold = f_beta_threshold(&triple, &single, 1e3).unwrap();
        // 3 exp(0.5 b) < exp(0.6 b) iff b > 10 ln 3
        assert!(threshold > 10.0 * 3f64.ln());
        assert!(!f_beta_order_check(&triple, &single, 5.0));
    }

    #[test]
    fn f_beta_cancels_shared_edges() {
        let t = Topology::new(4, vec![[0, 1], [1, 2], [1, 3]]);
        let g = WeightedEdgeGraph::new(&t, vec![0.9, 0.1, 0.100001], Provenance::Explicit);
        let a = LatticePath::new(&g, vec![0, 1, 2], vec![0, 1]);
        let b = LatticePath::new(&g, vec![0, 1, 3], vec![0, 2]);
        assert_eq!(compare_paths(&a, &b), Ordering::Less);
        // the shared 0.9 edge would swamp the 1e-6 gap without cancellation
        assert!(f_beta_order_check(&a, &b, 1e7));
    }

    #[test]
    fn crossing_with_singletons_is_tree_path() {
        let t = square_with_diagonal();
        let g = WeightedEdgeGraph::new(
            &t,
            vec![0.1, 0.9, 0.2, 0.3, -0.1, -0.2, 0.25],
            Provenance::Explicit,
        );
        let tree = kruskal(&g).unwrap();
        let p = optimal_crossing_path(&tree, &[1], &[5]).unwrap();
        assert_eq!(p, tree_path(&tree, 1, 5));
        assert_eq!(
            optimal_crossing_path(&tree, &[], &[5]),
            Err(Error::EmptySet)
        );
    }
}
