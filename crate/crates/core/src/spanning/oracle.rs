//! Exhaustive reference computations for small graphs.

use std::cmp::Ordering;

use crate::disorder::{Provenance, WeightedEdgeGraph};
use crate::error::{Error, Result};
use crate::graph::{DisjointSets, Topology};

use super::{compare_paths, kruskal, LatticePath, SpanningTree};

/// Largest vertex count the simple-path enumeration accepts.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 25;

fn guard(graph: &WeightedEdgeGraph, v: usize) -> Result<()> {
    let n = graph.vertex_count();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::InstanceTooLarge {
            vertices: n,
            limit: BRUTE_FORCE_VERTEX_LIMIT,
        });
    }
    if v >= n {
        return Err(Error::InvalidVertex {
            vertex: v,
            count: n,
        });
    }
    Ok(())
}

/// The best simple path from `source` to every vertex, found by enumerating
/// every simple path out of `source`. Entry `source` is the trivial path.
pub fn brute_force_optimal_paths_from(
    graph: &WeightedEdgeGraph,
    source: usize,
) -> Result<Vec<LatticePath>> {
    guard(graph, source)?;
    let n = graph.vertex_count();
    let mut best: Vec<Option<LatticePath>> = vec![None; n];
    best[source] = Some(LatticePath::trivial(source));
    let mut on_path = vec![false; n];
    on_path[source] = true;
    let mut vertices = vec![source];
    let mut edges = Vec::new();
    explore(graph, &mut on_path, &mut vertices, &mut edges, &mut best);
    best.into_iter()
        .enumerate()
        .map(|(v, p)| {
            p.ok_or(Error::Disconnected {
                reached: v,
                total: n,
            })
        })
        .collect()
}

fn explore(
    graph: &WeightedEdgeGraph,
    on_path: &mut Vec<bool>,
    vertices: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    best: &mut Vec<Option<LatticePath>>,
) {
    let v = *vertices.last().unwrap();
    for &(w, e) in graph.topology().neighbors(v) {
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        vertices.push(w);
        edges.push(e);
        let candidate = LatticePath::new(graph, vertices.clone(), edges.clone());
        let better = best[w]
            .as_ref()
            .is_none_or(|b| compare_paths(&candidate, b) == Ordering::Less);
        if better {
            best[w] = Some(candidate);
        }
        explore(graph, on_path, vertices, edges, best);
        edges.pop();
        vertices.pop();
        on_path[w] = false;
    }
}

/// Minimum over all simple `i`–`j` paths under the path order.
pub fn brute_force_optimal_path(
    graph: &WeightedEdgeGraph,
    i: usize,
    j: usize,
) -> Result<LatticePath> {
    guard(graph, j)?;
    let mut all = brute_force_optimal_paths_from(graph, i)?;
    Ok(all.swap_remove(j))
}

/// Whether the lightest edge leaving `subset` belongs to the tree.
/// An empty or full subset has no crossing edge and passes vacuously.
pub fn cut_property_check(
    graph: &WeightedEdgeGraph,
    tree: &SpanningTree,
    subset: &[usize],
) -> bool {
    let mut inside = vec![false; graph.vertex_count()];
    for &v in subset {
        inside[v] = true;
    }
    let lightest = graph
        .topology()
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, [u, v])| inside[*u] != inside[*v])
        .map(|(e, _)| e)
        .min_by_key(|&e| graph.rank(e));
    lightest.is_none_or(|e| tree.contains_edge(e))
}

/// Minimum spanning tree of the subgraph induced by `subset`, as original edge
/// indices sorted ascending; `None` when the induced subgraph is disconnected.
pub fn induced_subgraph_mst(graph: &WeightedEdgeGraph, subset: &[usize]) -> Option<Vec<usize>> {
    let mut local = vec![usize::MAX; graph.vertex_count()];
    for (k, &v) in subset.iter().enumerate() {
        local[v] = k;
    }
    let mut edges = Vec::new();
    let mut original = Vec::new();
    let mut weights = Vec::new();
    for (e, &[u, v]) in graph.topology().edges().iter().enumerate() {
        if local[u] != usize::MAX && local[v] != usize::MAX {
            edges.push([local[u], local[v]]);
            original.push(e);
            weights.push(graph.weight(e));
        }
    }
    let topo = Topology::new(subset.len(), edges);
    // keep the parent graph's tie-break by ordering the local edges by parent rank
    let sub = WeightedEdgeGraph::with_ranks(
        &topo,
        weights,
        original.iter().map(|&e| graph.rank(e)).collect(),
        Provenance::Explicit,
    );
    let tree = kruskal(&sub).ok()?;
    let mut set: Vec<usize> = tree.edges().iter().map(|&e| original[e]).collect();
    set.sort_unstable();
    Some(set)
}

/// If the tree edges inside `subset` span it, they must form the induced
/// subgraph's own minimum spanning tree. `None` when they do not span it.
pub fn restriction_property_check(
    graph: &WeightedEdgeGraph,
    tree: &SpanningTree,
    subset: &[usize],
) -> Option<bool> {
    if subset.is_empty() {
        return None;
    }
    let mut inside = vec![false; graph.vertex_count()];
    for &v in subset {
        inside[v] = true;
    }
    let restricted: Vec<usize> = tree
        .edge_set()
        .into_iter()
        .filter(|&e| {
            let [u, v] = graph.topology().edge(e);
            inside[u] && inside[v]
        })
        .collect();
    if restricted.len() + 1 != subset.len() {
        return None;
    }
    let mut sets = DisjointSets::new(graph.vertex_count());
    for &e in &restricted {
        let [u, v] = graph.topology().edge(e);
        sets.union(u, v);
    }
    if subset.iter().any(|&v| !sets.same(v, subset[0])) {
        return None;
    }
    Some(induced_subgraph_mst(graph, subset).as_deref() == Some(&restricted[..]))
}
