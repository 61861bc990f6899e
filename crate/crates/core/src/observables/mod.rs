//! Measurements on optimal paths and their comparison with SLE predictions.

pub mod displacement;
pub mod fit;
pub mod left_passage;
pub mod scaling;
pub mod schramm;
pub mod triple;

pub use displacement::{displacement_scaling, horizontal_displacement, DisplacementFit};
pub use fit::{fit_kappa, fit_kappa_counts, fit_kappa_with, FitOptions, KappaFit, Verdict};
pub use left_passage::{
    accumulate_left_passage, left_of_path, probe_angle, LeftPassageField, PathSelector, Probe,
};
pub use scaling::{fractal_dimension, kappa_from_dimension, log_log_fit, ScalingFit};
pub use schramm::{gauss_2f1_negz, schramm_lpp, schramm_prefactor};
pub use triple::{
    corner_vertices, rotation_symmetry_statistic, rotation_symmetry_test, triple_point,
    triple_point_disk, SymmetryTest, TriplePointHistogram,
};
