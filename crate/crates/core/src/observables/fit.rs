//! Least-squares fit of Schramm's formula to a left-passage field.
//!
//! A probe counted "left" lies left of the path, i.e. the path passes to its
//! right, so the model for the left frequency at angle `t` is
//! `1 - P(t) = P(-t)` with `P` from [`schramm_lpp`].

use serde::{Deserialize, Serialize};

use super::left_passage::LeftPassageField;
use super::schramm::schramm_lpp;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fit,
    NoFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaFit {
    pub kappa_hat: f64,
    /// Gauss-Newton standard error, treating probes as independent.
    pub stderr: f64,
    /// Mean squared residual at the optimum.
    pub residual: f64,
    /// Mean binomial variance `p(1-p)/n` over the fitted probes.
    pub noise_floor: f64,
    pub verdict: Verdict,
    pub probes_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Only probes with `|t|` below this enter the fit.
    pub angle_window: f64,
    /// `NoFit` when the residual exceeds this multiple of the noise floor.
    pub nofit_factor: f64,
    pub min_counts: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            angle_window: 1.3,
            nofit_factor: 5.0,
            min_counts: 100,
        }
    }
}

const KAPPA_MIN: f64 = 0.05;
const KAPPA_MAX: f64 = 7.95;
const GRID_STEP: f64 = 0.05;

/// Left-frequency model at angle `t`.
pub fn left_model(t: f64, kappa: f64) -> f64 {
    schramm_lpp(-t, kappa).expect("angles and kappa are validated by the caller")
}

pub fn fit_kappa(field: &LeftPassageField) -> Result<KappaFit> {
    fit_kappa_with(field, &FitOptions::default())
}

pub fn fit_kappa_with(field: &LeftPassageField, options: &FitOptions) -> Result<KappaFit> {
    let angles: Vec<f64> = field.probes.iter().map(|p| p.angle).collect();
    fit_kappa_counts(&angles, &field.counts_left, &field.counts_total, options)
}

/// The fit on raw `(angle, left, total)` tallies.
pub fn fit_kappa_counts(
    angles: &[f64],
    left: &[u64],
    total: &[u64],
    options: &FitOptions,
) -> Result<KappaFit> {
    let mut ts = Vec::new();
    let mut ps = Vec::new();
    let mut floor = 0.0;
    for k in 0..angles.len() {
        if angles[k].abs() >= options.angle_window {
            continue;
        }
        if total[k] < options.min_counts {
            return Err(Error::InsufficientStatistics(format!(
                "probe {k} has {} samples, need {}",
                total[k], options.min_counts
            )));
        }
        let p = left[k] as f64 / total[k] as f64;
        ts.push(angles[k]);
        ps.push(p);
        floor += p * (1.0 - p) / total[k] as f64;
    }
    if ts.len() < 2 {
        return Err(Error::InsufficientStatistics(format!(
            "{} probes inside the angle window",
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let noise_floor = floor / n;
    let mse = |kappa: f64| {
        ts.iter()
            .zip(&ps)
            .map(|(&t, &p)| (p - left_model(t, kappa)).powi(2))
            .sum::<f64>()
            / n
    };

    let steps = ((KAPPA_MAX - KAPPA_MIN) / GRID_STEP).round() as usize;
    let (mut best_k, mut best_v) = (KAPPA_MIN, f64::INFINITY);
    for i in 0..=steps {
        let k = KAPPA_MIN + GRID_STEP * i as f64;
        let v = mse(k);
        if v < best_v {
            best_k = k;
            best_v = v;
        }
    }
    let kappa_hat = golden_section(
        &mse,
        (best_k - GRID_STEP).max(KAPPA_MIN / 2.0),
        (best_k + GRID_STEP).min((KAPPA_MAX + 8.0) / 2.0),
    );
    let residual = mse(kappa_hat);

    let h = 1e-4;
    let jac2: f64 = ts
        .iter()
        .map(|&t| {
            let d = (left_model(t, kappa_hat + h) - left_model(t, kappa_hat - h)) / (2.0 * h);
            d * d
        })
        .sum();
    let sigma2 = residual * n / (n - 1.0);
    let stderr = (sigma2 / jac2).sqrt();
    let verdict = if residual > options.nofit_factor * noise_floor {
        Verdict::NoFit
    } else {
        Verdict::Fit
    };
    Ok(KappaFit {
        kappa_hat,
        stderr,
        residual,
        noise_floor,
        verdict,
        probes_used: ts.len(),
    })
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-7 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}
