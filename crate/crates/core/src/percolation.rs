//! Site percolation on the plaquettes and its exploration interface.
//!
//! On the honeycomb every vertex touches at most three faces, so an interface
//! between occupied and empty plaquettes never branches: from each vertex there
//! is exactly one way to continue with occupied faces kept on a fixed side.

use crate::disorder::{ArcOrientation, DisorderInstance};
use crate::error::{Error, Result};
use crate::lattice::{LatticeKind, PlanarLattice};
use crate::spanning::LatticePath;

/// Occupation of each face (`omega > theta`), ghosts included.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceColoring {
    pub occupied: Vec<bool>,
    /// Which side of the s -> t walk carries the occupied boundary arc.
    pub orientation: ArcOrientation,
    // omega - theta, kept so interface edges can carry their induced weights
    centered: Vec<f64>,
}

impl FaceColoring {
    pub fn is_occupied(&self, f: usize) -> bool {
        self.occupied[f]
    }

    /// Fraction of occupied faces among the first `count` (the interior ones).
    pub fn occupied_fraction(&self, count: usize) -> f64 {
        self.occupied[..count].iter().filter(|&&c| c).count() as f64 / count as f64
    }
}

pub fn color_faces(instance: &DisorderInstance) -> FaceColoring {
    FaceColoring {
        occupied: instance.omega.iter().map(|&w| w > instance.theta).collect(),
        orientation: instance.orientation,
        centered: instance.omega.iter().map(|&w| w - instance.theta).collect(),
    }
}

/// The interface walk from `s` to `t` with occupied faces on the left (or on
/// the right for [`ArcOrientation::RightHigh`]).
pub fn exploration_path(coloring: &FaceColoring, lattice: &PlanarLattice) -> Result<LatticePath> {
    if lattice.kind() != LatticeKind::Honeycomb {
        return Err(Error::NotHoneycomb);
    }
    if coloring.occupied.len() != lattice.face_count() {
        return Err(Error::IncompatibleColoring(format!(
            "{} face colors for a lattice with {} faces",
            coloring.occupied.len(),
            lattice.face_count()
        )));
    }
    let high_on_left = coloring.orientation == ArcOrientation::LeftHigh;
    let admissible = |e: usize, from: usize| {
        let [l, r] = lattice.oriented_faces(e, from);
        let (l, r) = (coloring.occupied[l], coloring.occupied[r]);
        if high_on_left {
            l && !r
        } else {
            !l && r
        }
    };

    let (s, t) = (lattice.s_vertex(), lattice.t_vertex());
    let mut vertices = vec![s];
    let mut edges = Vec::new();
    let mut visited = vec![false; lattice.vertex_count()];
    visited[s] = true;
    let mut current = s;
    let mut arrived_by = usize::MAX;
    while current != t {
        let mut next = lattice
            .neighbors(current)
            .iter()
            .filter(|&&(_, e)| e != arrived_by && admissible(e, current));
        let Some(&(w, e)) = next.next() else {
            return Err(Error::IncompatibleColoring(format!(
                "interface stops at vertex {current}"
            )));
        };
        if next.next().is_some() {
            return Err(Error::IncompatibleColoring(format!(
                "interface branches at vertex {current}"
            )));
        }
        if visited[w] {
            return Err(Error::IncompatibleColoring(format!(
                "interface closes a loop at vertex {w}"
            )));
        }
        visited[w] = true;
        vertices.push(w);
        edges.push(e);
        arrived_by = e;
        current = w;
    }

    let weights: Vec<f64> = (0..lattice.edge_count())
        .map(|e| {
            let [f1, f2] = lattice.edge_faces(e);
            coloring.centered[f1] * coloring.centered[f2]
        })
        .collect();
    Ok(LatticePath::with_weights(&weights, vertices, edges))
}
