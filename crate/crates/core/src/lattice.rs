//! Square and honeycomb tilings of an `a x b` rectangle.
//!
//! Every lattice carries full vertex/edge/face incidence. Each perimeter edge
//! gets its own ghost face on the outside, so that every edge separates exactly
//! two faces and plaquette-induced edge weights are defined everywhere.
//!
//! Coordinates: the rectangle is `[0, width] x [0, height]` with
//! `width = a_cells` and `height = b_cells * row_pitch`. The square lattice has
//! unit pitch. The honeycomb uses pointy-top hexagons of unit width stacked in
//! brick-wall rows (two vertical edges per hexagon), so its boundary vertices
//! zig-zag within a quarter cell of the rectangle sides.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Square,
    Honeycomb,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Square => "square",
            LatticeKind::Honeycomb => "honeycomb",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        dx * dx + dy * dy
    }
}

/// Side of the rectangle a ghost face is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

/// A face of the lattice. Interior faces list their vertices counterclockwise;
/// a ghost face is the degenerate two-gon `[v, u]` outside perimeter edge `u -> v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub centroid: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarLattice {
    kind: LatticeKind,
    a_cells: usize,
    b_cells: usize,
    width: f64,
    height: f64,
    vertices: Vec<Point>,
    topology: Topology,
    faces: Vec<Face>,
    interior_faces: usize,
    // [left, right] seen when walking edge(e)[0] -> edge(e)[1]
    edge_faces: Vec<[usize; 2]>,
    // perimeter edges in counterclockwise order, starting with s_marker
    boundary_edges: Vec<usize>,
    boundary_faces: Vec<usize>,
    ghost_sides: Vec<Side>,
    t_position: usize,
    s_vertex: usize,
    t_vertex: usize,
}

const HEX_SIDE: f64 = 0.577_350_269_189_625_8; // 1 / sqrt(3)

/// Vertical distance between consecutive plaquette rows.
pub fn row_pitch(kind: LatticeKind) -> f64 {
    match kind {
        LatticeKind::Square => 1.0,
        LatticeKind::Honeycomb => 1.5 * HEX_SIDE,
    }
}

pub fn build_lattice(kind: LatticeKind, a_cells: usize, b_cells: usize) -> Result<PlanarLattice> {
    if a_cells < 2 || b_cells < 2 {
        return Err(Error::SizeTooSmall { a_cells, b_cells });
    }
    if !a_cells.is_multiple_of(2) {
        return Err(Error::OddWidth(a_cells));
    }
    let (vertices, cycles) = match kind {
        LatticeKind::Square => square_cells(a_cells, b_cells),
        LatticeKind::Honeycomb => honeycomb_cells(a_cells, b_cells),
    };
    Ok(assemble(kind, a_cells, b_cells, vertices, cycles))
}

fn square_cells(a: usize, b: usize) -> (Vec<Point>, Vec<Vec<usize>>) {
    let idx = |i: usize, j: usize| j * (a + 1) + i;
    let mut vertices = Vec::with_capacity((a + 1) * (b + 1));
    for j in 0..=b {
        for i in 0..=a {
            vertices.push(Point::new(i as f64, j as f64));
        }
    }
    let mut cycles = Vec::with_capacity(a * b);
    for j in 0..b {
        for i in 0..a {
            cycles.push(vec![
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1),
            ]);
        }
    }
    (vertices, cycles)
}

fn honeycomb_cells(a: usize, b: usize) -> (Vec<Point>, Vec<Vec<usize>>) {
    // Integer keys: x in quarter cells, y in quarters of the hexagon side.
    const CORNERS: [(i64, i64); 6] = [(0, -4), (2, -2), (2, 2), (0, 4), (-2, 2), (-2, -2)];
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut cycles = Vec::with_capacity(a * b);
    for r in 0..b as i64 {
        for c in 0..a as i64 {
            let cx = 4 * c + 1 + 2 * (r % 2);
            let cy = 6 * r + 3;
            let cycle = CORNERS
                .iter()
                .map(|&(dx, dy)| {
                    let key = (cx + dx, cy + dy);
                    *index.entry(key).or_insert_with(|| {
                        vertices.push(Point::new(
                            key.0 as f64 / 4.0,
                            key.1 as f64 * HEX_SIDE / 4.0,
                        ));
                        vertices.len() - 1
                    })
                })
                .collect();
            cycles.push(cycle);
        }
    }
    (vertices, cycles)
}

fn assemble(
    kind: LatticeKind,
    a_cells: usize,
    b_cells: usize,
    vertices: Vec<Point>,
    cycles: Vec<Vec<usize>>,
) -> PlanarLattice {
    const NONE: usize = usize::MAX;
    let width = a_cells as f64;
    let height = b_cells as f64 * row_pitch(kind);

    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut edge_faces: Vec<[usize; 2]> = Vec::new();
    let mut faces = Vec::with_capacity(cycles.len());
    for (f, cycle) in cycles.into_iter().enumerate() {
        for k in 0..cycle.len() {
            let (u, v) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            let key = (u.min(v), u.max(v));
            match edge_index.get(&key) {
                // the face that creates the edge walks it u -> v, so it sits on the left
                None => {
                    edge_index.insert(key, edges.len());
                    edges.push([u, v]);
                    edge_faces.push([f, NONE]);
                }
                Some(&e) => {
                    debug_assert_eq!(edges[e], [v, u]);
                    edge_faces[e][1] = f;
                }
            }
        }
        let n = cycle.len() as f64;
        let (sx, sy) = cycle.iter().fold((0.0, 0.0), |(sx, sy), &v| {
            (sx + vertices[v].x, sy + vertices[v].y)
        });
        faces.push(Face {
            vertices: cycle,
            centroid: Point::new(sx / n, sy / n),
        });
    }
    let interior_faces = faces.len();

    // Perimeter edges are walked counterclockwise in their stored direction.
    let mut outgoing = vec![NONE; vertices.len()];
    for (e, pair) in edge_faces.iter().enumerate() {
        if pair[1] == NONE {
            let u = edges[e][0];
            assert_eq!(outgoing[u], NONE, "boundary pinches at vertex {u}");
            outgoing[u] = e;
        }
    }

    let pick = |want_top: bool| -> usize {
        let extreme = vertices.iter().map(|p| p.y).fold(
            if want_top { f64::MIN } else { f64::MAX },
            |m, y| {
                if want_top {
                    m.max(y)
                } else {
                    m.min(y)
                }
            },
        );
        let mut best = NONE;
        for (v, p) in vertices.iter().enumerate() {
            if (p.y - extreme).abs() > 1e-9 || outgoing[v] == NONE {
                continue;
            }
            let d = (p.x - width / 2.0).abs();
            if best == NONE {
                best = v;
                continue;
            }
            let db = (vertices[best].x - width / 2.0).abs();
            if d < db - 1e-9 || ((d - db).abs() <= 1e-9 && p.x < vertices[best].x) {
                best = v;
            }
        }
        best
    };
    let s_vertex = pick(false);
    let t_vertex = pick(true);

    let mut boundary_edges = Vec::new();
    let mut v = s_vertex;
    loop {
        let e = outgoing[v];
        boundary_edges.push(e);
        v = edges[e][1];
        if v == s_vertex {
            break;
        }
        assert!(
            boundary_edges.len() <= edges.len(),
            "perimeter is not a cycle"
        );
    }
    let t_position = boundary_edges
        .iter()
        .position(|&e| edges[e][0] == t_vertex)
        .expect("t lies on the perimeter");

    let mut boundary_faces = Vec::with_capacity(boundary_edges.len());
    let mut ghost_sides = Vec::with_capacity(boundary_edges.len());
    // Ghosts are numbered in ccw order starting at s_marker.
    for &e in &boundary_edges {
        let [u, v] = edges[e];
        let (pu, pv) = (vertices[u], vertices[v]);
        let mid = Point::new((pu.x + pv.x) / 2.0, (pu.y + pv.y) / 2.0);
        let inner = faces[edge_faces[e][0]].centroid;
        let normal = Point::new(mid.x - inner.x, mid.y - inner.y);
        let g = faces.len();
        faces.push(Face {
            vertices: vec![v, u],
            centroid: Point::new(2.0 * mid.x - inner.x, 2.0 * mid.y - inner.y),
        });
        edge_faces[e][1] = g;
        boundary_faces.push(g);
        ghost_sides.push(classify_side(mid, normal, width, height));
    }

    let topology = Topology::new(vertices.len(), edges);
    PlanarLattice {
        kind,
        a_cells,
        b_cells,
        width,
        height,
        vertices,
        topology,
        faces,
        interior_faces,
        edge_faces,
        boundary_edges,
        boundary_faces,
        ghost_sides,
        t_position,
        s_vertex,
        t_vertex,
    }
}

fn classify_side(mid: Point, normal: Point, width: f64, height: f64) -> Side {
    let candidates = [
        (Side::Bottom, mid.y.abs(), -normal.y),
        (Side::Right, (width - mid.x).abs(), normal.x),
        (Side::Top, (height - mid.y).abs(), normal.y),
        (Side::Left, mid.x.abs(), -normal.x),
    ];
    let mut best = candidates[0];
    for &cand in &candidates[1..] {
        let closer = cand.1 < best.1 - 1e-9;
        let tie = (cand.1 - best.1).abs() <= 1e-9;
        if closer || (tie && cand.2 > best.2) {
            best = cand;
        }
    }
    best.0
}

impl PlanarLattice {
    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn a_cells(&self) -> usize {
        self.a_cells
    }

    pub fn b_cells(&self) -> usize {
        self.b_cells
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Interior plus ghost faces.
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn interior_face_count(&self) -> usize {
        self.interior_faces
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.topology.edge(e)
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        self.topology.edges()
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_ghost(&self, f: usize) -> bool {
        f >= self.interior_faces
    }

    /// `[left, right]` faces of edge `e` walked from `edge(e)[0]` to `edge(e)[1]`.
    pub fn edge_faces(&self, e: usize) -> [usize; 2] {
        self.edge_faces[e]
    }

    /// `[left, right]` faces when walking `e` starting from vertex `from`.
    pub fn oriented_faces(&self, e: usize, from: usize) -> [usize; 2] {
        let [l, r] = self.edge_faces[e];
        if self.edge(e)[0] == from {
            [l, r]
        } else {
            debug_assert_eq!(self.edge(e)[1], from);
            [r, l]
        }
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        self.topology.neighbors(v)
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        self.topology.other_end(e, v)
    }

    pub fn is_perimeter_edge(&self, e: usize) -> bool {
        self.is_ghost(self.edge_faces[e][1])
    }

    /// Ghost faces in counterclockwise order, starting with the ghost of `s_marker`.
    pub fn boundary_faces(&self) -> &[usize] {
        &self.boundary_faces
    }

    /// Perimeter edges in the same order as [`boundary_faces`](Self::boundary_faces).
    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn ghost_side(&self, f: usize) -> Option<Side> {
        f.checked_sub(self.interior_faces)
            .map(|k| self.ghost_sides[k])
    }

    /// Perimeter edge leaving the start vertex counterclockwise.
    pub fn s_marker(&self) -> usize {
        self.boundary_edges[0]
    }

    /// Perimeter edge leaving the end vertex counterclockwise.
    pub fn t_marker(&self) -> usize {
        self.boundary_edges[self.t_position]
    }

    /// Start vertex near `(a/2, 0)`.
    pub fn s_vertex(&self) -> usize {
        self.s_vertex
    }

    /// End vertex near `(a/2, b)`.
    pub fn t_vertex(&self) -> usize {
        self.t_vertex
    }

    /// Ghost faces from `s` counterclockwise to `t` (the right arc) and the
    /// complementary arc from `t` back to `s` (the left arc).
    pub fn boundary_arcs(&self) -> (&[usize], &[usize]) {
        self.boundary_faces.split_at(self.t_position)
    }

    /// Perimeter vertices attached to a side of the rectangle, in ccw order.
    pub fn side_vertices(&self, side: Side) -> Vec<usize> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for (k, &e) in self.boundary_edges.iter().enumerate() {
            if self.ghost_sides[k] != side {
                continue;
            }
            for v in self.edge(e) {
                if !seen[v] {
                    seen[v] = true;
                    out.push(v);
                }
            }
        }
        out
    }

    /// Vertex closest to `p` (first index on ties).
    pub fn nearest_vertex(&self, p: Point) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (v, q) in self.vertices.iter().enumerate() {
            let d = q.dist2(p);
            if d < best_d {
                best_d = d;
                best = v;
            }
        }
        best
    }

    /// `V - E + F + 1`, the outer face absorbing all ghosts. Equals 2 for a planar lattice.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.interior_faces as i64 + 1
    }

    /// Point clamped into the closed rectangle.
    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(0.0, self.width), p.y.clamp(0.0, self.height))
    }
}

/// Free-function form of [`PlanarLattice::boundary_arcs`] returning owned lists.
pub fn boundary_arcs(lattice: &PlanarLattice) -> (Vec<usize>, Vec<usize>) {
    let (a, b) = lattice.boundary_arcs();
    (a.to_vec(), b.to_vec())
}
