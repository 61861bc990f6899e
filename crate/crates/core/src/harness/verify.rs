//! Exact cross-checks between the fast algorithms and their oracles, shared by
//! the `verify` subcommand and the acceptance suite.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::seed::sample_seed;
use crate::disorder::{
    critical_threshold, induce_edge_weights, sample_instance, sample_random_edge_weights,
    BoundaryCondition, Ensemble, WeightedEdgeGraph,
};
use crate::lattice::{build_lattice, LatticeKind, PlanarLattice};
use crate::observables::{gauss_2f1_negz, schramm_lpp};
use crate::percolation::{color_faces, exploration_path};
use crate::spanning::{
    brute_force_optimal_paths_from, compare_paths, cut_property_check, kruskal, path_cost, prim,
    restriction_property_check, tree_path,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {}: {}", self.name, self.detail)
    }
}

fn weights_for<'a>(
    lattice: &'a PlanarLattice,
    ensemble: Ensemble,
    seed: u64,
) -> WeightedEdgeGraph<'a> {
    match ensemble.boundary_condition() {
        Some(bc) => {
            let theta = critical_threshold(lattice.kind());
            let inst = sample_instance(lattice, bc, theta, seed).expect("valid threshold");
            induce_edge_weights(lattice, &inst)
        }
        None => sample_random_edge_weights(lattice, seed),
    }
}

/// Lattices with at most 16 vertices.
pub fn small_lattices() -> Vec<PlanarLattice> {
    [
        (LatticeKind::Square, 2, 2),
        (LatticeKind::Square, 2, 3),
        (LatticeKind::Square, 4, 2),
        (LatticeKind::Honeycomb, 2, 2),
    ]
    .into_iter()
    .map(|(k, a, b)| build_lattice(k, a, b).expect("valid small lattice"))
    .collect()
}

/// Tree paths against exhaustive enumeration for every vertex pair.
pub fn optimality_equivalence(instances: u64, seed: u64) -> Check {
    let lattices = small_lattices();
    let mut pairs = 0usize;
    let mut mismatches = Vec::new();
    for i in 0..instances {
        let l = &lattices[i as usize % lattices.len()];
        let ensemble = Ensemble::ALL[(i / lattices.len() as u64) as usize % Ensemble::ALL.len()];
        let g = weights_for(l, ensemble, sample_seed(seed, 1, i));
        let tree = kruskal(&g).expect("lattices are connected");
        for u in 0..l.vertex_count() {
            let best = brute_force_optimal_paths_from(&g, u).expect("small instance");
            for v in 0..l.vertex_count() {
                pairs += 1;
                if compare_paths(&tree_path(&tree, u, v), &best[v]) != Ordering::Equal {
                    mismatches.push((i, u, v));
                }
            }
        }
    }
    Check {
        name: "optimality equivalence",
        passed: mismatches.is_empty() && instances > 0,
        detail: format!(
            "{instances} instances, {pairs} pairs, {} mismatches{}",
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first {m:?})"))
                .unwrap_or_default()
        ),
    }
}

pub fn kruskal_prim(instances: u64, size: usize, seed: u64) -> Check {
    let lattices: Vec<PlanarLattice> = [LatticeKind::Square, LatticeKind::Honeycomb]
        .into_iter()
        .map(|k| build_lattice(k, size, size).expect("valid size"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut differing = 0;
    for i in 0..instances {
        let l = &lattices[i as usize % 2];
        let ensemble = Ensemble::ALL[(i / 2) as usize % Ensemble::ALL.len()];
        let g = weights_for(l, ensemble, sample_seed(seed, 2, i));
        let root = rng.gen_range(0..l.vertex_count());
        let k = kruskal(&g).expect("connected");
        let p = prim(&g, root).expect("connected");
        if k.edge_set() != p.edge_set() {
            differing += 1;
        }
    }
    Check {
        name: "kruskal = prim",
        passed: differing == 0 && instances > 0,
        detail: format!("{instances} instances at size {size}, {differing} differing edge sets"),
    }
}

pub fn percolation_equivalence(instances: u64, size: usize, seed: u64) -> Check {
    let l = build_lattice(LatticeKind::Honeycomb, size, size).expect("valid size");
    let mut failures = Vec::new();
    for i in 0..instances {
        let inst = sample_instance(&l, BoundaryCondition::SleLike, 0.5, sample_seed(seed, 3, i))
            .expect("valid threshold");
        let g = induce_edge_weights(&l, &inst);
        let tree = kruskal(&g).expect("connected");
        let tp = tree_path(&tree, l.s_vertex(), l.t_vertex());
        let ok = match exploration_path(&color_faces(&inst), &l) {
            Ok(ep) => ep.edges == tp.edges && path_cost(&tp).is_ok_and(|c| c < 0.0),
            Err(_) => false,
        };
        if !ok {
            failures.push(i);
        }
    }
    Check {
        name: "percolation equivalence",
        passed: failures.is_empty() && instances > 0,
        detail: format!(
            "{instances} honeycomb sle_like instances at size {size}, {} failures",
            failures.len()
        ),
    }
}

pub fn cut_and_restriction(instances: u64, subsets: usize, size: usize, seed: u64) -> Check {
    let lattices: Vec<PlanarLattice> = [LatticeKind::Square, LatticeKind::Honeycomb]
        .into_iter()
        .map(|k| build_lattice(k, size, size).expect("valid size"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut cut_fail, mut restr_checked, mut restr_fail) = (0, 0, 0);
    for i in 0..instances {
        let l = &lattices[i as usize % 2];
        let ensemble = Ensemble::ALL[(i / 2) as usize % Ensemble::ALL.len()];
        let g = weights_for(l, ensemble, sample_seed(seed, 4, i));
        let tree = kruskal(&g).expect("connected");
        let n = l.vertex_count();
        let mut all: Vec<usize> = (0..n).collect();
        for k in 0..subsets {
            // alternate uniform random subsets with tree-grown ones, which are
            // the subsets whose restricted tree is connected
            let subset: Vec<usize> = if k % 2 == 0 {
                all.shuffle(&mut rng);
                all[..rng.gen_range(1..n)].to_vec()
            } else {
                grow_tree_subset(&tree, n, rng.gen_range(1..n), &mut rng)
            };
            if !cut_property_check(&g, &tree, &subset) {
                cut_fail += 1;
            }
            if let Some(ok) = restriction_property_check(&g, &tree, &subset) {
                restr_checked += 1;
                if !ok {
                    restr_fail += 1;
                }
            }
        }
    }
    Check {
        name: "cut and restriction properties",
        passed: cut_fail == 0 && restr_fail == 0 && restr_checked > 0,
        detail: format!(
            "{instances} instances x {subsets} subsets: {cut_fail} cut failures; \
             restriction decided {restr_checked} times, {restr_fail} failures"
        ),
    }
}

// a connected vertex set of the tree, grown from a random vertex
fn grow_tree_subset(
    tree: &crate::spanning::SpanningTree,
    n: usize,
    target: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let topo = tree.graph().topology();
    let mut inside = vec![false; n];
    let start = rng.gen_range(0..n);
    inside[start] = true;
    let mut set = vec![start];
    let mut frontier: Vec<usize> = Vec::new();
    let push = |v: usize, frontier: &mut Vec<usize>, inside: &[bool]| {
        for &(w, e) in topo.neighbors(v) {
            if tree.contains_edge(e) && !inside[w] {
                frontier.push(w);
            }
        }
    };
    push(start, &mut frontier, &inside);
    while set.len() < target && !frontier.is_empty() {
        let v = frontier.swap_remove(rng.gen_range(0..frontier.len()));
        if inside[v] {
            continue;
        }
        inside[v] = true;
        set.push(v);
        push(v, &mut frontier, &inside);
    }
    set
}

/// Closed-form and symmetry checks of the left-passage formula.
pub fn schramm_kernel() -> Check {
    let mut worst = [0.0f64; 5];
    let kappas = [0.5, 1.0, 2.0, 8.0 / 3.0, 4.0, 6.0, 7.5];
    for &kappa in &kappas {
        worst[0] = worst[0].max((schramm_lpp(0.0, kappa).unwrap() - 0.5).abs());
        for k in 0..100 {
            let t = -PI / 2.0 + PI * (k as f64 + 0.5) / 100.0;
            let s = schramm_lpp(t, kappa).unwrap() + schramm_lpp(-t, kappa).unwrap();
            worst[1] = worst[1].max((s - 1.0).abs());
        }
    }
    for k in 0..100 {
        let t = -PI / 2.0 + PI * (k as f64 + 0.5) / 100.0;
        worst[2] = worst[2].max((schramm_lpp(t, 4.0).unwrap() - (0.5 + t / PI)).abs());
    }
    for k in 1..=200 {
        let u = 0.05 * k as f64;
        worst[3] = worst[3].max((gauss_2f1_negz(1.0, u * u) - u.atan() / u).abs());
        worst[4] = worst[4].max((gauss_2f1_negz(0.5, u * u) - u.asinh() / u).abs());
    }
    let limits = [1e-12, 1e-12, 1e-10, 1e-12, 1e-12];
    Check {
        name: "schramm formula kernel",
        passed: worst.iter().zip(&limits).all(|(w, l)| w <= l),
        detail: format!(
            "max errors: center {:.1e}, symmetry {:.1e}, kappa=4 {:.1e}, arctan {:.1e}, asinh {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    }
}

/// The fast suite run by the `verify` subcommand.
pub fn quick_suite(seed: u64) -> Vec<Check> {
    vec![
        optimality_equivalence(40, seed),
        kruskal_prim(200, 8, seed),
        percolation_equivalence(20, 32, seed),
        cut_and_restriction(10, 200, 8, seed),
        schramm_kernel(),
    ]
}
