//! The tree vertex joining three corners, and a test of the 3-fold rotation
//! symmetry of its distribution after mapping the rectangle to the disk with
//! the corners sent to the cube roots of unity.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conformal::{rect_to_disk_equilateral, RectangleMap};
use crate::error::{Error, Result};
use crate::lattice::{PlanarLattice, Point};
use crate::spanning::SpanningTree;

/// The median of three tree vertices: the deepest of their pairwise lowest
/// common ancestors, whatever the root.
pub fn triple_point(tree: &SpanningTree, c1: usize, c2: usize, c3: usize) -> usize {
    [tree.lca(c1, c2), tree.lca(c1, c3), tree.lca(c2, c3)]
        .into_iter()
        .max_by_key(|&v| tree.depth(v))
        .expect("three candidates")
}

/// Vertices nearest the corners `(0,0)`, `(a,0)`, `(0,b)`, in the order of
/// their disk images `1`, `e^{2 pi i/3}`, `e^{4 pi i/3}`.
pub fn corner_vertices(lattice: &PlanarLattice) -> [usize; 3] {
    let (a, b) = (lattice.width(), lattice.height());
    [(0.0, 0.0), (a, 0.0), (0.0, b)].map(|(x, y)| lattice.nearest_vertex(Point::new(x, y)))
}

/// Disk image of the triple point of the corners.
pub fn triple_point_disk(
    tree: &SpanningTree,
    lattice: &PlanarLattice,
    map: &RectangleMap,
) -> Result<Complex64> {
    let [c1, c2, c3] = corner_vertices(lattice);
    let p = lattice.clamp(lattice.vertex(triple_point(tree, c1, c2, c3)));
    rect_to_disk_equilateral(Complex64::new(p.x, p.y), map)
}

/// Counts over equal-area cells of the unit disk: `rings` annuli of equal area,
/// each split into `sectors` equal angles. `sectors` is a multiple of 3 so a
/// rotation by `2 pi / 3` permutes cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriplePointHistogram {
    pub rings: usize,
    pub sectors: usize,
    pub counts: Vec<u64>,
}

impl Default for TriplePointHistogram {
    fn default() -> Self {
        TriplePointHistogram::new(4, 12).expect("valid shape")
    }
}

impl TriplePointHistogram {
    pub fn new(rings: usize, sectors: usize) -> Result<Self> {
        if rings == 0 || sectors == 0 || !sectors.is_multiple_of(3) {
            return Err(Error::Domain(format!(
                "need rings >= 1 and sectors a positive multiple of 3, got {rings} x {sectors}"
            )));
        }
        Ok(TriplePointHistogram {
            rings,
            sectors,
            counts: vec![0; rings * sectors],
        })
    }

    pub fn cell(&self, w: Complex64) -> usize {
        let r2 = w.norm_sqr().min(1.0);
        let ring = ((r2 * self.rings as f64) as usize).min(self.rings - 1);
        let arg = w.arg().rem_euclid(TAU);
        let sector = ((arg / TAU * self.sectors as f64) as usize).min(self.sectors - 1);
        ring * self.sectors + sector
    }

    pub fn add(&mut self, w: Complex64) {
        let c = self.cell(w);
        self.counts[c] += 1;
    }

    pub fn merge(&mut self, other: &TriplePointHistogram) {
        assert_eq!(
            (self.rings, self.sectors),
            (other.rings, other.sectors),
            "histograms of different shape"
        );
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
    }

    pub fn entries(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Cell reached from `cell` by `k` rotations of `2 pi / 3`.
    fn rotate(&self, cell: usize, k: usize) -> usize {
        let (ring, sector) = (cell / self.sectors, cell % self.sectors);
        ring * self.sectors + (sector + k * self.sectors / 3) % self.sectors
    }

    /// Cell probabilities averaged over the rotation group.
    pub fn symmetrized(&self) -> Vec<f64> {
        let n = self.entries() as f64;
        (0..self.counts.len())
            .map(|c| {
                (0..3)
                    .map(|k| self.counts[self.rotate(c, k)] as f64)
                    .sum::<f64>()
                    / (3.0 * n)
            })
            .collect()
    }

    fn tv_to_symmetrized(&self, counts: &[u64], n: f64) -> f64 {
        let mut tv = 0.0;
        for c in 0..counts.len() {
            let avg = (0..3)
                .map(|k| counts[self.rotate(c, k)] as f64)
                .sum::<f64>()
                / 3.0;
            tv += (counts[c] as f64 - avg).abs();
        }
        tv / (2.0 * n)
    }
}

pub const MIN_ENTRIES: u64 = 1000;

/// Total-variation distance between the histogram and its rotation average.
/// Zero for a symmetric histogram; at most `2/3`, reached when every entry
/// falls in a single cell.
pub fn rotation_symmetry_statistic(hist: &TriplePointHistogram) -> Result<f64> {
    let n = hist.entries();
    if n < MIN_ENTRIES {
        return Err(Error::InsufficientStatistics(format!(
            "{n} triple points, need {MIN_ENTRIES}"
        )));
    }
    Ok(hist.tv_to_symmetrized(&hist.counts, n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryTest {
    pub statistic: f64,
    /// Parametric bootstrap p-value under the symmetrized distribution.
    pub p_value: f64,
    pub entries: u64,
    pub resamples: usize,
}

/// The statistic and its p-value from `resamples` multinomial draws of the
/// same size from the symmetrized cell probabilities.
pub fn rotation_symmetry_test(
    hist: &TriplePointHistogram,
    resamples: usize,
    seed: u64,
) -> Result<SymmetryTest> {
    let statistic = rotation_symmetry_statistic(hist)?;
    let n = hist.entries();
    let null = WeightedIndex::new(hist.symmetrized()).expect("a non-empty histogram");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; hist.counts.len()];
    let mut exceed = 0usize;
    for _ in 0..resamples {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..n {
            counts[null.sample(&mut rng)] += 1;
        }
        if hist.tv_to_symmetrized(&counts, n as f64) >= statistic {
            exceed += 1;
        }
    }
    Ok(SymmetryTest {
        statistic,
        p_value: (exceed + 1) as f64 / (resamples + 1) as f64,
        entries: n,
        resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::MapKind;
    use crate::disorder::{
        induce_edge_weights, sample_instance, BoundaryCondition, Provenance, WeightedEdgeGraph,
    };
    use crate::graph::Topology;
    use crate::lattice::{build_lattice, LatticeKind};
    use crate::spanning::kruskal;
    use rand::Rng;

    fn tree_of(edges: Vec<[usize; 2]>, n: usize) -> (Topology, Vec<f64>) {
        let w = (0..edges.len()).map(|e| e as f64).collect();
        (Topology::new(n, edges), w)
    }

    #[test]
    fn star_center() {
        let (topo, w) = tree_of(vec![[0, 1], [0, 2], [0, 3], [0, 4]], 5);
        let g = WeightedEdgeGraph::new(&topo, w, Provenance::Explicit);
        let tree = kruskal(&g).unwrap();
        assert_eq!(triple_point(&tree, 1, 3, 4), 0);
    }

    #[test]
    fn middle_of_a_path() {
        let (topo, w) = tree_of(vec![[0, 1], [1, 2], [2, 3], [3, 4]], 5);
        let g = WeightedEdgeGraph::new(&topo, w, Provenance::Explicit);
        let tree = kruskal(&g).unwrap();
        assert_eq!(triple_point(&tree, 0, 2, 4), 2);
        assert_eq!(triple_point(&tree, 4, 0, 2), 2);
    }

    // vertices on the tree path between u and v by breadth-first search over tree edges
    fn bfs_path(tree: &SpanningTree, u: usize, v: usize) -> Vec<usize> {
        let topo = tree.graph().topology();
        let mut prev = vec![usize::MAX; topo.vertex_count()];
        prev[u] = u;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in topo.neighbors(x) {
                if tree.contains_edge(e) && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut out = vec![v];
        while *out.last().unwrap() != u {
            out.push(prev[*out.last().unwrap()]);
        }
        out
    }

    #[test]
    fn agrees_with_pairwise_path_intersection() {
        let l = build_lattice(LatticeKind::Square, 4, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..100 {
            let bc = BoundaryCondition::ALL[seed as usize % 4];
            let inst = sample_instance(&l, bc, 0.5927463, seed).unwrap();
            let g = induce_edge_weights(&l, &inst);
            let tree = kruskal(&g).unwrap();
            let n = l.vertex_count();
            let (c1, c2, c3) = loop {
                let c = [
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                ];
                if c[0] != c[1] && c[1] != c[2] && c[0] != c[2] {
                    break (c[0], c[1], c[2]);
                }
            };
            let (p12, p13, p23) = (
                bfs_path(&tree, c1, c2),
                bfs_path(&tree, c1, c3),
                bfs_path(&tree, c2, c3),
            );
            let common: Vec<usize> = p12
                .iter()
                .copied()
                .filter(|v| p13.contains(v) && p23.contains(v))
                .collect();
            assert_eq!(common.len(), 1, "seed {seed}");
            let m = triple_point(&tree, c1, c2, c3);
            assert_eq!(m, common[0]);
            // the three legs meet only at the median
            let legs = [
                bfs_path(&tree, m, c1),
                bfs_path(&tree, m, c2),
                bfs_path(&tree, m, c3),
            ];
            for i in 0..3 {
                for j in i + 1..3 {
                    let shared = legs[i].iter().filter(|v| legs[j].contains(v)).count();
                    assert_eq!(shared, 1);
                }
            }
            for perm in [(c2, c1, c3), (c3, c2, c1), (c2, c3, c1)] {
                assert_eq!(triple_point(&tree, perm.0, perm.1, perm.2), m);
            }
        }
    }

    #[test]
    fn cells_have_equal_area() {
        // a uniform grid over the square, restricted to the disk, fills cells evenly
        let h = TriplePointHistogram::default();
        let mut counts = vec![0u64; h.counts.len()];
        let m = 1500;
        for i in 0..m {
            for j in 0..m {
                let w = Complex64::new(
                    -1.0 + 2.0 * (i as f64 + 0.5) / m as f64,
                    -1.0 + 2.0 * (j as f64 + 0.5) / m as f64,
                );
                if w.norm_sqr() < 1.0 {
                    counts[h.cell(w)] += 1;
                }
            }
        }
        let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
        assert!(counts.iter().all(|&c| (c as f64 / mean - 1.0).abs() < 0.01));
    }

    #[test]
    fn symmetric_histogram_scores_zero() {
        let mut h = TriplePointHistogram::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let omega = Complex64::from_polar(1.0, TAU / 3.0);
        for _ in 0..1000 {
            let w = Complex64::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            h.add(w);
            h.add(w * omega);
            h.add(w * omega * omega);
        }
        assert!(rotation_symmetry_statistic(&h).unwrap() < 1e-12);
    }

    #[test]
    fn single_cell_scores_two_thirds() {
        let mut h = TriplePointHistogram::default();
        for _ in 0..2000 {
            h.add(Complex64::new(0.3, 0.1));
        }
        let s = rotation_symmetry_statistic(&h).unwrap();
        assert!((s - 2.0 / 3.0).abs() < 1e-15);
        let test = rotation_symmetry_test(&h, 200, 0).unwrap();
        assert!(test.p_value < 0.01);
    }

    #[test]
    fn too_few_entries() {
        let mut h = TriplePointHistogram::default();
        h.add(Complex64::new(0.1, 0.1));
        assert!(matches!(
            rotation_symmetry_statistic(&h),
            Err(Error::InsufficientStatistics(_))
        ));
        assert!(TriplePointHistogram::new(4, 10).is_err());
    }

    fn uniform_disk(rng: &mut ChaCha8Rng) -> Complex64 {
        loop {
            let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if w.norm_sqr() < 1.0 {
                return w;
            }
        }
    }

    #[test]
    fn p_values_are_uniform_under_the_null() {
        let reps = 100;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut ps: Vec<f64> = (0..reps)
            .map(|r| {
                let mut h = TriplePointHistogram::default();
                for _ in 0..10_000 {
                    h.add(uniform_disk(&mut rng));
                }
                rotation_symmetry_test(&h, 199, r).unwrap().p_value
            })
            .collect();
        ps.sort_by(f64::total_cmp);
        // Kolmogorov-Smirnov distance to U(0,1); 1.63/sqrt(n) is the 1% critical value
        let d = ps
            .iter()
            .enumerate()
            .map(|(i, &p)| (p - i as f64 / reps as f64).max((i + 1) as f64 / reps as f64 - p))
            .fold(0.0, f64::max);
        assert!(d < 1.63 / (reps as f64).sqrt(), "KS distance {d}");
    }

    #[test]
    fn corners_map_to_cube_roots() {
        let l = build_lattice(LatticeKind::Honeycomb, 16, 16).unwrap();
        let map = RectangleMap::new(MapKind::DiskEquilateral, l.width(), l.height()).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::Free, 0.5, 3).unwrap();
        let g = induce_edge_weights(&l, &inst);
        let tree = kruskal(&g).unwrap();
        let w = triple_point_disk(&tree, &l, &map).unwrap();
        assert!(w.norm() <= 1.0 + 1e-9);
        let corners = corner_vertices(&l);
        for (k, &c) in corners.iter().enumerate() {
            let p = l.clamp(l.vertex(c));
            let z = rect_to_disk_equilateral(Complex64::new(p.x, p.y), &map).unwrap();
            let target = Complex64::from_polar(1.0, TAU * k as f64 / 3.0);
            // corner vertices sit within a cell of the true corner
            assert!((z - target).norm() < 0.2, "corner {k}: {z}");
        }
    }
}
