//! Plain undirected multigraph topology and a disjoint-set forest.

/// Vertex count, edge list and a compressed adjacency table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    offsets: Vec<usize>,
    // (neighbor, edge) pairs, grouped by vertex in edge order
    incidence: Vec<(usize, usize)>,
}

impl Topology {
    pub fn new(vertex_count: usize, edges: Vec<[usize; 2]>) -> Self {
        let mut degree = vec![0usize; vertex_count + 1];
        for &[u, v] in &edges {
            assert!(
                u < vertex_count && v < vertex_count,
                "edge endpoint out of range"
            );
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; vertex_count + 1];
        for v in 0..vertex_count {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![(0, 0); offsets[vertex_count]];
        for (e, &[u, v]) in edges.iter().enumerate() {
            incidence[fill[u]] = (v, e);
            fill[u] += 1;
            incidence[fill[v]] = (u, e);
            fill[v] += 1;
        }
        Topology {
            vertex_count,
            edges,
            offsets,
            incidence,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [p, q] = self.edges[e];
        if p == v {
            q
        } else {
            p
        }
    }
}

/// Union by size with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the new root, or `None` if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        Some(ra)
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}
