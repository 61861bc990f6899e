//! Horizontal displacement of bottom-to-top crossing paths.

use serde::{Deserialize, Serialize};

use super::scaling::{log_log_fit, ScalingFit};
use crate::error::{Error, Result};
use crate::lattice::{PlanarLattice, Side};
use crate::spanning::LatticePath;

/// `(x_end - x_start) / a` of a crossing path, clamped to `[-1, 1]`.
///
/// Honeycomb perimeter vertices can sit a quarter cell outside the nominal
/// rectangle, hence the clamp.
pub fn horizontal_displacement(path: &LatticePath, lattice: &PlanarLattice) -> Result<f64> {
    if path.is_empty()
        || !lattice.side_vertices(Side::Bottom).contains(&path.start())
        || !lattice.side_vertices(Side::Top).contains(&path.end())
    {
        return Err(Error::NotCrossing);
    }
    let a = lattice.width();
    let start = lattice.clamp(lattice.vertex(path.start()));
    let end = lattice.clamp(lattice.vertex(path.end()));
    Ok(((end.x - start.x) / a).clamp(-1.0, 1.0))
}

/// Ratios at or below this enter the exponent regression.
pub const SMALL_RATIO: f64 = 0.25;
/// Ratios at or above this enter the plateau average.
pub const LARGE_RATIO: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementFit {
    /// `log <dx^2>` against `log (b/a)` over the small ratios; `slope` is `l`.
    pub exponent: ScalingFit,
    /// Pooled `<dx^2>` over ratios `>= LARGE_RATIO` and its standard error.
    pub plateau: Option<(f64, f64)>,
}

/// Fits `<dx^2> ~ (b/a)^l` from `(b/a, dx^2)` samples.
pub fn displacement_scaling(records: &[(f64, f64)]) -> Result<DisplacementFit> {
    let mut ratios: Vec<f64> = records.iter().map(|r| r.0).collect();
    ratios.sort_by(f64::total_cmp);
    ratios.dedup();

    let mean_at = |ratio: f64| {
        let vals: Vec<f64> = records
            .iter()
            .filter(|r| r.0 == ratio)
            .map(|r| r.1)
            .collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let small: Vec<f64> = ratios
        .iter()
        .copied()
        .filter(|&r| r <= SMALL_RATIO)
        .collect();
    if small.len() < 2 || small[0] > 0.1 {
        return Err(Error::InsufficientStatistics(format!(
            "need two aspect ratios <= {SMALL_RATIO} reaching down to 0.1, got {small:?}"
        )));
    }
    let means: Vec<f64> = small.iter().map(|&r| mean_at(r)).collect();
    let exponent = log_log_fit(&small, &means)?;

    let tail: Vec<f64> = records
        .iter()
        .filter(|r| r.0 >= LARGE_RATIO)
        .map(|r| r.1)
        .collect();
    let plateau = (tail.len() >= 2).then(|| {
        let n = tail.len() as f64;
        let mean = tail.iter().sum::<f64>() / n;
        let var = tail.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    });
    Ok(DisplacementFit { exponent, plateau })
}
