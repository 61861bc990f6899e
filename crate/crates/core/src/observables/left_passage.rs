//! Left-passage tallies over the interior face centroids.
//!
//! A probe is on the left of an oriented bottom-to-top path when it lies in the
//! region bounded by the path and the part of the perimeter running
//! counterclockwise from the path's end back to its start (top, left side,
//! bottom). Probes are face centroids, so no probe ever lies on a path; the
//! classification is a flood fill over faces that may not cross path edges,
//! seeded by the faces immediately left and right of each path edge.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::{
    halfplane_angle, rect_to_halfannulus, rect_to_halfplane, MapKind, RectangleMap,
};
use crate::disorder::Ensemble;
use crate::error::Result;
use crate::lattice::{LatticeKind, PlanarLattice, Point};
use crate::spanning::LatticePath;

/// Which path a measurement follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathSelector {
    /// The tree path from `s` to `t`.
    #[serde(rename = "s_to_t")]
    StoT,
    /// The optimal path among those from the bottom side to the top side.
    OptimalCrossing,
}

impl PathSelector {
    pub fn name(self) -> &'static str {
        match self {
            PathSelector::StoT => "s_to_t",
            PathSelector::OptimalCrossing => "optimal_crossing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub face: usize,
    pub point: Point,
    /// Angle in the half-plane picture, from the vertical, positive to the right.
    pub angle: f64,
}

/// Angle of a rectangle point as seen by the measurement for `selector`.
///
/// `s -> t` paths use the half-plane map; crossing paths use the half-annulus,
/// whose argument reduces to the linear identification `t = pi (x/a - 1/2)`.
pub fn probe_angle(map: &RectangleMap, selector: PathSelector, p: Point) -> Result<f64> {
    let z = Complex64::new(p.x, p.y);
    match selector {
        PathSelector::StoT => halfplane_angle(rect_to_halfplane(z, map)?),
        PathSelector::OptimalCrossing => halfplane_angle(rect_to_halfannulus(z, map)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeftPassageField {
    pub kind: LatticeKind,
    pub a_cells: usize,
    pub b_cells: usize,
    pub ensemble: Ensemble,
    pub selector: PathSelector,
    pub probes: Vec<Probe>,
    pub counts_left: Vec<u64>,
    pub counts_total: Vec<u64>,
}

impl LeftPassageField {
    /// Empty tallies with one probe per interior face.
    pub fn new(
        lattice: &PlanarLattice,
        ensemble: Ensemble,
        selector: PathSelector,
    ) -> Result<Self> {
        let map = RectangleMap::new(MapKind::HalfPlane, lattice.width(), lattice.height())?;
        let probes = (0..lattice.interior_face_count())
            .map(|f| {
                let point = lattice.face(f).centroid;
                Ok(Probe {
                    face: f,
                    point,
                    angle: probe_angle(&map, selector, point)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = probes.len();
        Ok(LeftPassageField {
            kind: lattice.kind(),
            a_cells: lattice.a_cells(),
            b_cells: lattice.b_cells(),
            ensemble,
            selector,
            probes,
            counts_left: vec![0; n],
            counts_total: vec![0; n],
        })
    }

    /// Adds one path's classification of every probe.
    pub fn accumulate(&mut self, path: &LatticePath, lattice: &PlanarLattice) {
        let left = left_of_path(path, lattice);
        for (k, probe) in self.probes.iter().enumerate() {
            self.counts_total[k] += 1;
            if left[probe.face] {
                self.counts_left[k] += 1;
            }
        }
    }

    /// Adds another field's tallies; both must describe the same probes.
    pub fn merge(&mut self, other: &LeftPassageField) {
        assert_eq!(
            self.probes.len(),
            other.probes.len(),
            "fields over different probes"
        );
        for k in 0..self.probes.len() {
            self.counts_left[k] += other.counts_left[k];
            self.counts_total[k] += other.counts_total[k];
        }
    }

    pub fn samples(&self) -> u64 {
        self.counts_total.iter().copied().max().unwrap_or(0)
    }

    /// Empirical left frequency per probe.
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts_left
            .iter()
            .zip(&self.counts_total)
            .map(|(&l, &t)| {
                if t == 0 {
                    f64::NAN
                } else {
                    l as f64 / t as f64
                }
            })
            .collect()
    }
}

/// Free-function form of [`LeftPassageField::accumulate`].
pub fn accumulate_left_passage(
    path: &LatticePath,
    lattice: &PlanarLattice,
    field: &mut LeftPassageField,
) {
    field.accumulate(path, lattice);
}

/// For every interior face, whether it lies left of the oriented path.
pub fn left_of_path(path: &LatticePath, lattice: &PlanarLattice) -> Vec<bool> {
    const UNSET: u8 = 2;
    let interior = lattice.interior_face_count();
    let mut side = vec![UNSET; interior];
    let mut on_path = vec![false; lattice.edge_count()];
    let mut queue = VecDeque::new();
    for (k, &e) in path.edges.iter().enumerate() {
        on_path[e] = true;
        let [l, r] = lattice.oriented_faces(e, path.vertices[k]);
        for (f, s) in [(l, 1u8), (r, 0u8)] {
            if f < interior && side[f] == UNSET {
                side[f] = s;
                queue.push_back(f);
            }
        }
    }
    while let Some(f) = queue.pop_front() {
        let cycle = &lattice.face(f).vertices;
        for k in 0..cycle.len() {
            let (u, v) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let Some(&(_, e)) = lattice.neighbors(u).iter().find(|&&(w, _)| w == v) else {
                continue;
            };
            if on_path[e] {
                continue;
            }
            let [g, h] = lattice.edge_faces(e);
            let other = if g == f { h } else { g };
            if other < interior && side[other] == UNSET {
                side[other] = side[f];
                queue.push_back(other);
            }
        }
    }
    debug_assert!(
        path.edges.is_empty() || side.iter().all(|&s| s != UNSET),
        "every face borders a region touching the path"
    );
    side.into_iter().map(|s| s == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disorder::{induce_edge_weights, sample_instance, BoundaryCondition};
    use crate::lattice::{build_lattice, Side};
    use crate::spanning::{kruskal, optimal_crossing_path, tree_path};

    // Independent oracle: crossing-number parity of the polygon formed by the
    // path and a closing loop outside the rectangle through its top-left and
    // bottom-left corners.
    fn winding_left(path: &LatticePath, lattice: &PlanarLattice, p: Point) -> bool {
        let mut poly: Vec<Point> = path.vertices.iter().map(|&v| lattice.vertex(v)).collect();
        let (start, end) = (poly[0], *poly.last().unwrap());
        let (lo, hi) = (-1.0, lattice.height() + 1.0);
        poly.extend([
            Point::new(end.x, hi),
            Point::new(-1.0, hi),
            Point::new(-1.0, lo),
            Point::new(start.x, lo),
        ]);
        let mut inside = false;
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    #[test]
    fn flood_fill_agrees_with_winding_parity() {
        for kind in [LatticeKind::Square, LatticeKind::Honeycomb] {
            let l = build_lattice(kind, 12, 10).unwrap();
            let bottom = l.side_vertices(Side::Bottom);
            let top = l.side_vertices(Side::Top);
            for seed in 0..30 {
                let bc = BoundaryCondition::ALL[seed as usize % 4];
                let theta = crate::disorder::critical_threshold(kind);
                let inst = sample_instance(&l, bc, theta, seed).unwrap();
                let g = induce_edge_weights(&l, &inst);
                let tree = kruskal(&g).unwrap();
                for path in [
                    tree_path(&tree, l.s_vertex(), l.t_vertex()),
                    optimal_crossing_path(&tree, &bottom, &top).unwrap(),
                ] {
                    let left = left_of_path(&path, &l);
                    for f in 0..l.interior_face_count() {
                        let c = l.face(f).centroid;
                        assert_eq!(
                            left[f],
                            winding_left(&path, &l, c),
                            "{kind:?} seed {seed} face {f}"
                        );
                    }
                }
            }
        }
    }

    fn arc_path(l: &PlanarLattice, right: bool) -> LatticePath {
        // walk the perimeter from s to t along one arc
        let edges = l.boundary_edges();
        let t_pos = l.boundary_arcs().0.len();
        let (mut vertices, mut path_edges) = (vec![l.s_vertex()], Vec::new());
        if right {
            for &e in &edges[..t_pos] {
                path_edges.push(e);
                vertices.push(l.edge(e)[1]);
            }
        } else {
            for &e in edges[t_pos..].iter().rev() {
                path_edges.push(e);
                vertices.push(l.edge(e)[0]);
            }
        }
        let weights = vec![0.0; l.edge_count()];
        LatticePath::with_weights(&weights, vertices, path_edges)
    }

    #[test]
    fn right_hugging_path_leaves_everything_left() {
        let l = build_lattice(LatticeKind::Honeycomb, 8, 8).unwrap();
        let path = arc_path(&l, true);
        assert_eq!(path.end(), l.t_vertex());
        assert!(left_of_path(&path, &l).iter().all(|&x| x));
        let path = arc_path(&l, false);
        assert_eq!(path.end(), l.t_vertex());
        assert!(left_of_path(&path, &l).iter().all(|&x| !x));
    }

    #[test]
    fn reversed_path_gives_complementary_tallies() {
        let l = build_lattice(LatticeKind::Square, 10, 10).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::Free, 0.5927463, 5).unwrap();
        let g = induce_edge_weights(&l, &inst);
        let tree = kruskal(&g).unwrap();
        let path = tree_path(&tree, l.s_vertex(), l.t_vertex());
        let a = left_of_path(&path, &l);
        let b = left_of_path(&path.reversed(), &l);
        assert!(a.iter().zip(&b).all(|(x, y)| x != y));
    }

    #[test]
    fn tallies_are_consistent() {
        let l = build_lattice(LatticeKind::Honeycomb, 8, 8).unwrap();
        let mut field = LeftPassageField::new(&l, Ensemble::SleLike, PathSelector::StoT).unwrap();
        let mut other = field.clone();
        for seed in 0..20 {
            let inst = sample_instance(&l, BoundaryCondition::SleLike, 0.5, seed).unwrap();
            let g = induce_edge_weights(&l, &inst);
            let tree = kruskal(&g).unwrap();
            let path = tree_path(&tree, l.s_vertex(), l.t_vertex());
            if seed % 2 == 0 {
                field.accumulate(&path, &l);
            } else {
                accumulate_left_passage(&path, &l, &mut other);
            }
        }
        field.merge(&other);
        assert_eq!(field.samples(), 20);
        assert!(field.counts_total.iter().all(|&t| t == 20));
        assert!(field
            .counts_left
            .iter()
            .zip(&field.counts_total)
            .all(|(l, t)| l <= t));
    }

    #[test]
    fn sle_like_field_is_mirror_symmetric() {
        // reflecting x -> a - x and swapping colors preserves the ensemble,
        // so p(x, y) = 1 - p(a - x, y)
        let l = build_lattice(LatticeKind::Honeycomb, 32, 32).unwrap();
        let mut field = LeftPassageField::new(&l, Ensemble::SleLike, PathSelector::StoT).unwrap();
        for seed in 0..1000 {
            let inst = sample_instance(&l, BoundaryCondition::SleLike, 0.5, seed).unwrap();
            let g = induce_edge_weights(&l, &inst);
            let tree = kruskal(&g).unwrap();
            field.accumulate(&tree_path(&tree, l.s_vertex(), l.t_vertex()), &l);
        }
        let freq = field.frequencies();
        let n = field.samples() as f64;
        // alternate rows are offset by half a cell, so a mirror image falls
        // midway between two faces of its row; interpolate between them
        let find = |x: f64, y: f64| {
            field
                .probes
                .iter()
                .position(|q| (q.point.x - x).abs() < 1e-9 && (q.point.y - y).abs() < 1e-9)
        };
        let sd = |k: usize| (freq[k] * (1.0 - freq[k]) / n).sqrt();
        let (mut pairs, mut outside) = (0, 0);
        for (i, p) in field.probes.iter().enumerate() {
            let mx = l.width() - p.point.x;
            let (Some(j), Some(k)) = (find(mx - 0.5, p.point.y), find(mx + 0.5, p.point.y)) else {
                continue;
            };
            pairs += 1;
            let mirror = 0.5 * (freq[j] + freq[k]);
            // the tallies share paths; bound their correlations by one
            let sigma = sd(i) + 0.5 * (sd(j) + sd(k));
            if (freq[i] + mirror - 1.0).abs() > 3.0 * sigma.max(0.5 / n) {
                outside += 1;
            }
        }
        assert!(pairs > field.probes.len() / 2, "{pairs} mirror pairs");
        assert!(
            outside as f64 <= 0.01 * pairs as f64,
            "{outside} of {pairs} pairs beyond 3 sigma"
        );
    }

    #[test]
    fn crossing_angles_are_linear_in_x() {
        let l = build_lattice(LatticeKind::Square, 8, 4).unwrap();
        let field =
            LeftPassageField::new(&l, Ensemble::Free, PathSelector::OptimalCrossing).unwrap();
        for p in &field.probes {
            let expected = std::f64::consts::PI * (p.point.x / 8.0 - 0.5);
            assert!((p.angle - expected).abs() < 1e-12);
        }
    }
}
