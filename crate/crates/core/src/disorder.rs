//! Plaquette disorder and the induced edge weights.
//!
//! A disorder instance assigns a weight `omega(f)` to every face, ghosts
//! included. Edge weights follow `W_e = (omega(f1) - theta) * (omega(f2) - theta)`
//! for the two faces `f1, f2` of `e`, so `W_e < 0` exactly on the interfaces of
//! the face coloring `omega > theta`. The random MST model instead draws i.i.d.
//! edge weights directly.
//!
//! Edges are totally ordered by `(W_e, edge index)`, which makes the minimum
//! spanning tree unique even when two weights collide in floating point.

use std::cmp::Ordering;

use rand::distributions::{Distribution, Open01, Standard};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::lattice::{LatticeKind, PlanarLattice, Side};

/// Site-percolation threshold of the honeycomb plaquettes (triangular sites).
pub const THETA_HONEYCOMB: f64 = 0.5;
/// Site-percolation threshold of the square lattice.
pub const THETA_SQUARE: f64 = 0.592_746_3;

pub fn critical_threshold(kind: LatticeKind) -> f64 {
    match kind {
        LatticeKind::Square => THETA_SQUARE,
        LatticeKind::Honeycomb => THETA_HONEYCOMB,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Ghost faces drawn like bulk faces.
    Free,
    /// One s-t arc above the threshold, the other below.
    SleLike,
    /// Right side above, left side below, top and bottom free.
    SleFree,
    /// Every ghost face above the threshold.
    Repulsive,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 4] = [
        BoundaryCondition::Free,
        BoundaryCondition::SleLike,
        BoundaryCondition::SleFree,
        BoundaryCondition::Repulsive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Free => "free",
            BoundaryCondition::SleLike => "sle_like",
            BoundaryCondition::SleFree => "sle_free",
            BoundaryCondition::Repulsive => "repulsive",
        }
    }
}

/// A weight ensemble: one of the boundary conditions of the induced model, or
/// the random MST model with i.i.d. edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    Free,
    SleLike,
    SleFree,
    Repulsive,
    Random,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] = [
        Ensemble::Free,
        Ensemble::SleLike,
        Ensemble::SleFree,
        Ensemble::Repulsive,
        Ensemble::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Free => "free",
            Ensemble::SleLike => "sle_like",
            Ensemble::SleFree => "sle_free",
            Ensemble::Repulsive => "repulsive",
            Ensemble::Random => "random",
        }
    }

    /// The boundary condition of an induced ensemble; `None` for `Random`.
    pub fn boundary_condition(self) -> Option<BoundaryCondition> {
        match self {
            Ensemble::Free => Some(BoundaryCondition::Free),
            Ensemble::SleLike => Some(BoundaryCondition::SleLike),
            Ensemble::SleFree => Some(BoundaryCondition::SleFree),
            Ensemble::Repulsive => Some(BoundaryCondition::Repulsive),
            Ensemble::Random => None,
        }
    }
}

impl From<BoundaryCondition> for Ensemble {
    fn from(bc: BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::Free => Ensemble::Free,
            BoundaryCondition::SleLike => Ensemble::SleLike,
            BoundaryCondition::SleFree => Ensemble::SleFree,
            BoundaryCondition::Repulsive => Ensemble::Repulsive,
        }
    }
}

/// Which s-t arc is held above the threshold under `SleLike`.
///
/// `LeftHigh` puts the arc on the left of the s -> t direction above `theta`;
/// `RightHigh` is its mirror image. For `SleFree` the flag swaps the roles of
/// the left and right sides of the rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcOrientation {
    #[default]
    LeftHigh,
    RightHigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhostConstraint {
    Bulk,
    Above,
    Below,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisorderInstance {
    /// Per-face weight, interior faces first, then ghosts.
    pub omega: Vec<f64>,
    pub theta: f64,
    pub bc: BoundaryCondition,
    pub orientation: ArcOrientation,
    pub seed: u64,
}

/// Constraint placed on ghost face `g` by a boundary condition.
pub fn ghost_constraint(
    lattice: &PlanarLattice,
    bc: BoundaryCondition,
    orientation: ArcOrientation,
    g: usize,
) -> GhostConstraint {
    use GhostConstraint::*;
    let Some(side) = lattice.ghost_side(g) else {
        return Bulk;
    };
    let flip = |c: GhostConstraint| match (orientation, c) {
        (ArcOrientation::LeftHigh, c) => c,
        (ArcOrientation::RightHigh, Above) => Below,
        (ArcOrientation::RightHigh, Below) => Above,
        (ArcOrientation::RightHigh, Bulk) => Bulk,
    };
    match bc {
        BoundaryCondition::Free => Bulk,
        BoundaryCondition::Repulsive => Above,
        BoundaryCondition::SleLike => {
            let (right_arc, _) = lattice.boundary_arcs();
            // ghost faces are numbered ccw from s, so the right arc is a prefix
            let position = g - lattice.interior_face_count();
            flip(if position < right_arc.len() {
                Below
            } else {
                Above
            })
        }
        BoundaryCondition::SleFree => flip(match side {
            Side::Right => Above,
            Side::Left => Below,
            Side::Top | Side::Bottom => Bulk,
        }),
    }
}

pub fn sample_instance(
    lattice: &PlanarLattice,
    bc: BoundaryCondition,
    theta: f64,
    seed: u64,
) -> Result<DisorderInstance> {
    sample_instance_oriented(lattice, bc, theta, seed, ArcOrientation::default())
}

/// Interior weights are i.i.d. uniform on `[0, 1)`; constrained ghosts are
/// uniform on `(theta, 1)` or `[0, theta)`. Faces are drawn in index order
/// from a ChaCha stream keyed by `seed`.
pub fn sample_instance_oriented(
    lattice: &PlanarLattice,
    bc: BoundaryCondition,
    theta: f64,
    seed: u64,
    orientation: ArcOrientation,
) -> Result<DisorderInstance> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidThreshold(theta));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = Vec::with_capacity(lattice.face_count());
    for f in 0..lattice.face_count() {
        let w = match ghost_constraint(lattice, bc, orientation, f) {
            GhostConstraint::Bulk => Standard.sample(&mut rng),
            GhostConstraint::Above => loop {
                let u: f64 = Open01.sample(&mut rng);
                let w = theta + (1.0 - theta) * u;
                if w > theta && w < 1.0 {
                    break w;
                }
            },
            GhostConstraint::Below => loop {
                let u: f64 = Standard.sample(&mut rng);
                let w = theta * u;
                if w < theta {
                    break w;
                }
            },
        };
        omega.push(w);
    }
    Ok(DisorderInstance {
        omega,
        theta,
        bc,
        orientation,
        seed,
    })
}

impl DisorderInstance {
    /// Checks every face against its range and boundary constraint.
    pub fn satisfies_constraints(&self, lattice: &PlanarLattice) -> bool {
        self.omega.len() == lattice.face_count()
            && self.omega.iter().enumerate().all(|(f, &w)| {
                let in_unit = (0.0..1.0).contains(&w);
                in_unit
                    && match ghost_constraint(lattice, self.bc, self.orientation, f) {
                        GhostConstraint::Bulk => true,
                        GhostConstraint::Above => w > self.theta,
                        GhostConstraint::Below => w < self.theta,
                    }
            })
    }
}

/// An edge weight tagged with its edge index; ordered by `(weight, edge)`.
#[derive(Debug, Clone, Copy)]
pub struct WeightKey {
    pub weight: f64,
    pub edge: usize,
}

impl Ord for WeightKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.edge.cmp(&other.edge))
    }
}

impl PartialOrd for WeightKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for WeightKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for WeightKey {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Induced,
    RandomModel,
    Explicit,
}

/// A graph with real edge weights and their rank under the total edge order.
#[derive(Debug, Clone)]
pub struct WeightedEdgeGraph<'a> {
    topology: &'a Topology,
    weights: Vec<f64>,
    // edges sorted ascending by (weight, index)
    order: Vec<u32>,
    rank: Vec<u32>,
    provenance: Provenance,
}

// Monotone map from f64 (total order) to u64.
fn order_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

impl<'a> WeightedEdgeGraph<'a> {
    pub fn new(topology: &'a Topology, weights: Vec<f64>, provenance: Provenance) -> Self {
        assert_eq!(weights.len(), topology.edge_count());
        let mut keyed: Vec<(u64, u32)> = weights
            .iter()
            .enumerate()
            .map(|(e, &w)| (order_bits(w), e as u32))
            .collect();
        keyed.sort_unstable();
        let order: Vec<u32> = keyed.into_iter().map(|(_, e)| e).collect();
        let mut rank = vec![0u32; order.len()];
        for (r, &e) in order.iter().enumerate() {
            rank[e as usize] = r as u32;
        }
        WeightedEdgeGraph {
            topology,
            weights,
            order,
            rank,
            provenance,
        }
    }

    /// Like [`new`](Self::new), but edges are ordered by `sort_keys` instead of
    /// `(weight, index)`; used to carry a parent graph's order into a subgraph.
    pub fn with_ranks(
        topology: &'a Topology,
        weights: Vec<f64>,
        sort_keys: Vec<u32>,
        provenance: Provenance,
    ) -> Self {
        assert_eq!(weights.len(), topology.edge_count());
        assert_eq!(sort_keys.len(), weights.len());
        let mut order: Vec<u32> = (0..weights.len() as u32).collect();
        order.sort_unstable_by_key(|&e| (sort_keys[e as usize], e));
        let mut rank = vec![0u32; order.len()];
        for (r, &e) in order.iter().enumerate() {
            rank[e as usize] = r as u32;
        }
        WeightedEdgeGraph {
            topology,
            weights,
            order,
            rank,
            provenance,
        }
    }

    pub fn topology(&self) -> &'a Topology {
        self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Position of `e` in the ascending total order.
    pub fn rank(&self, e: usize) -> u32 {
        self.rank[e]
    }

    pub fn key(&self, e: usize) -> WeightKey {
        WeightKey {
            weight: self.weights[e],
            edge: e,
        }
    }

    /// Edge indices sorted ascending by `(weight, index)`.
    pub fn ascending(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.order.iter().map(|&e| e as usize)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// Edge weights induced by the plaquette weights of `instance`.
pub fn induce_edge_weights<'a>(
    lattice: &'a PlanarLattice,
    instance: &DisorderInstance,
) -> WeightedEdgeGraph<'a> {
    let theta = instance.theta;
    let weights = (0..lattice.edge_count())
        .map(|e| {
            let [f1, f2] = lattice.edge_faces(e);
            (instance.omega[f1] - theta) * (instance.omega[f2] - theta)
        })
        .collect();
    WeightedEdgeGraph::new(lattice.topology(), weights, Provenance::Induced)
}

/// The random MST model: i.i.d. uniform edge weights on `[0, 1)`.
pub fn sample_random_edge_weights(lattice: &PlanarLattice, seed: u64) -> WeightedEdgeGraph<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..lattice.edge_count())
        .map(|_| Standard.sample(&mut rng))
        .collect();
    WeightedEdgeGraph::new(lattice.topology(), weights, Provenance::RandomModel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, LatticeKind};

    #[test]
    fn eq1_arithmetic() {
        // faces straddling theta give a negative product
        let w: f64 = (0.8 - 0.5) * (0.3 - 0.5);
        assert!((w - -0.06).abs() < 1e-15);
        let l = build_lattice(LatticeKind::Square, 2, 2).unwrap();
        let mut inst = sample_instance(&l, BoundaryCondition::Free, 0.5, 1).unwrap();
        let [f1, f2] = l.edge_faces(0);
        inst.omega[f1] = 0.8;
        inst.omega[f2] = 0.3;
        let g = induce_edge_weights(&l, &inst);
        assert!((g.weight(0) + 0.06).abs() < 1e-15);
        inst.omega[f1] = 0.5;
        inst.omega[f2] = 0.5;
        assert_eq!(induce_edge_weights(&l, &inst).weight(0), 0.0);
    }

    #[test]
    fn sign_iff_straddling() {
        for kind in [LatticeKind::Square, LatticeKind::Honeycomb] {
            let l = build_lattice(kind, 4, 3).unwrap();
            for bc in BoundaryCondition::ALL {
                let inst = sample_instance(&l, bc, critical_threshold(kind), 11).unwrap();
                let g = induce_edge_weights(&l, &inst);
                for e in 0..l.edge_count() {
                    let [f1, f2] = l.edge_faces(e);
                    let straddle = (inst.omega[f1] > inst.theta) != (inst.omega[f2] > inst.theta);
                    assert_eq!(g.weight(e) < 0.0, straddle);
                    assert_eq!(g.weight(e) > 0.0, !straddle);
                }
            }
        }
    }

    #[test]
    fn constraints_hold_for_every_bc() {
        for kind in [LatticeKind::Square, LatticeKind::Honeycomb] {
            let l = build_lattice(kind, 8, 6).unwrap();
            for bc in BoundaryCondition::ALL {
                for orientation in [ArcOrientation::LeftHigh, ArcOrientation::RightHigh] {
                    for seed in 0..50 {
                        let inst =
                            sample_instance_oriented(&l, bc, 0.5, seed, orientation).unwrap();
                        assert!(inst.satisfies_constraints(&l));
                    }
                }
            }
        }
    }

    #[test]
    fn sle_like_arcs() {
        let l = build_lattice(LatticeKind::Honeycomb, 8, 8).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::SleLike, 0.5, 3).unwrap();
        let (right, left) = l.boundary_arcs();
        assert!(right.iter().all(|&g| inst.omega[g] < 0.5));
        assert!(left.iter().all(|&g| inst.omega[g] > 0.5));

        let swapped = sample_instance_oriented(
            &l,
            BoundaryCondition::SleLike,
            0.5,
            3,
            ArcOrientation::RightHigh,
        )
        .unwrap();
        assert!(right.iter().all(|&g| swapped.omega[g] > 0.5));
    }

    #[test]
    fn sle_free_sides() {
        let l = build_lattice(LatticeKind::Square, 6, 6).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::SleFree, 0.6, 9).unwrap();
        for &g in l.boundary_faces() {
            match l.ghost_side(g).unwrap() {
                Side::Right => assert!(inst.omega[g] > 0.6),
                Side::Left => assert!(inst.omega[g] < 0.6),
                _ => {}
            }
        }
    }

    #[test]
    fn repulsive_all_above() {
        let l = build_lattice(LatticeKind::Honeycomb, 6, 4).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::Repulsive, 0.5, 2).unwrap();
        assert!(l.boundary_faces().iter().all(|&g| inst.omega[g] > 0.5));
    }

    #[test]
    fn interior_mean_within_three_sigma() {
        let l = build_lattice(LatticeKind::Square, 100, 100).unwrap();
        let inst = sample_instance(&l, BoundaryCondition::Free, THETA_SQUARE, 42).unwrap();
        let n = l.interior_face_count() as f64;
        let mean = inst.omega[..l.interior_face_count()].iter().sum::<f64>() / n;
        // uniform variance is 1/12
        let sigma = (1.0 / 12.0 / n).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let l = build_lattice(LatticeKind::Honeycomb, 6, 6).unwrap();
        let a = sample_instance(&l, BoundaryCondition::SleLike, 0.5, 77).unwrap();
        let b = sample_instance(&l, BoundaryCondition::SleLike, 0.5, 77).unwrap();
        assert_eq!(a, b);
        let c = sample_instance(&l, BoundaryCondition::SleLike, 0.5, 78).unwrap();
        assert_ne!(a.omega, c.omega);
    }

    #[test]
    fn invalid_threshold() {
        let l = build_lattice(LatticeKind::Square, 2, 2).unwrap();
        for theta in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                sample_instance(&l, BoundaryCondition::Free, theta, 0),
                Err(Error::InvalidThreshold(_))
            ));
        }
    }

    #[test]
    fn random_model_weights() {
        let l = build_lattice(LatticeKind::Square, 72, 72).unwrap();
        let g1 = sample_random_edge_weights(&l, 5);
        let g2 = sample_random_edge_weights(&l, 5);
        assert_eq!(g1.weights(), g2.weights());
        assert_eq!(g1.provenance(), Provenance::RandomModel);
        let n = g1.edge_count() as f64;
        assert!(n >= 1e4);
        let mean = g1.weights().iter().sum::<f64>() / n;
        assert!((mean - 0.5).abs() < 3.0 * (1.0 / 12.0 / n).sqrt());
        let mut ranks: Vec<u32> = (0..g1.edge_count()).map(|e| g1.rank(e)).collect();
        ranks.sort_unstable();
        ranks.dedup();
        assert_eq!(ranks.len(), g1.edge_count());
    }

    #[test]
    fn ties_broken_by_index() {
        let t = Topology::new(3, vec![[0, 1], [1, 2], [0, 2]]);
        let g = WeightedEdgeGraph::new(&t, vec![0.5, 0.5, -1.0], Provenance::Explicit);
        assert_eq!(g.ascending().collect::<Vec<_>>(), vec![2, 0, 1]);
        assert!(g.key(0) < g.key(1));
    }

    #[test]
    fn order_bits_is_monotone() {
        let xs = [
            -f64::INFINITY,
            -2.0,
            -1e-300,
            -0.0,
            0.0,
            1e-300,
            0.3,
            7.0,
            f64::INFINITY,
        ];
        for w in xs.windows(2) {
            assert!(order_bits(w[0]) < order_bits(w[1]), "{} {}", w[0], w[1]);
        }
    }
}
