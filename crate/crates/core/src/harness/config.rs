//! Experiment configuration documents (TOML).
//!
//! ```toml
//! lattice = "honeycomb"          # square | honeycomb
//! bc = "sle_like"                # free | sle_like | sle_free | repulsive | random
//! sizes = [32, 64, 128]          # or `size = 32`; plaquettes across the width
//! samples = 5000
//! # optional
//! theta = "critical"             # or a number in (0, 1)
//! selector = "s_to_t"            # s_to_t | optimal_crossing
//! observables = ["length"]       # length | left_passage | displacement | triple_point
//! aspect_ratios = [1.0]          # height / width of each cell
//! seed = 0
//! output = "out"
//! workers = 0                    # 0: all available cores
//!
//! [fit]
//! angle_window = 1.3
//! nofit_factor = 5.0
//! min_counts = 100
//!
//! [triple]
//! rings = 4
//! sectors = 12
//! resamples = 1000
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::disorder::{critical_threshold, Ensemble};
use crate::lattice::LatticeKind;
use crate::observables::{FitOptions, PathSelector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Length,
    LeftPassage,
    Displacement,
    TriplePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Threshold {
    Preset(ThresholdPreset),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdPreset {
    /// The site-percolation threshold of the lattice's plaquettes.
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TripleOptions {
    pub rings: usize,
    pub sectors: usize,
    pub resamples: usize,
}

impl Default for TripleOptions {
    fn default() -> Self {
        TripleOptions {
            rings: 4,
            sectors: 12,
            resamples: 1000,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lattice: LatticeKind,
    bc: Ensemble,
    size: Option<usize>,
    sizes: Option<Vec<usize>>,
    samples: u64,
    theta: Option<Threshold>,
    #[serde(default = "default_selector")]
    selector: PathSelector,
    #[serde(default = "default_observables")]
    observables: Vec<Observable>,
    #[serde(default = "default_ratios")]
    aspect_ratios: Vec<f64>,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_output")]
    output: PathBuf,
    #[serde(default)]
    workers: usize,
    #[serde(default)]
    fit: RawFit,
    #[serde(default)]
    triple: TripleOptions,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFit {
    angle_window: Option<f64>,
    nofit_factor: Option<f64>,
    min_counts: Option<u64>,
}

fn default_selector() -> PathSelector {
    PathSelector::StoT
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::Length]
}

fn default_ratios() -> Vec<f64> {
    vec![1.0]
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub lattice: LatticeKind,
    pub bc: Ensemble,
    /// Ascending, distinct.
    pub sizes: Vec<usize>,
    pub aspect_ratios: Vec<f64>,
    pub theta: f64,
    pub selector: PathSelector,
    pub observables: Vec<Observable>,
    pub samples: u64,
    pub seed: u64,
    pub output: PathBuf,
    pub workers: usize,
    pub fit: FitOptions,
    pub triple: TripleOptions,
}

impl ExperimentConfig {
    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    /// Syntax, unknown keys and type errors, with the parser's position.
    #[error("{0}")]
    Parse(String),
    #[error("field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;

    let mut sizes = match (raw.size, raw.sizes) {
        (Some(_), Some(_)) => {
            return Err(invalid("size", "give either `size` or `sizes`, not both"))
        }
        (None, None) => return Err(invalid("sizes", "missing; give `size` or `sizes`")),
        (Some(s), None) => vec![s],
        (None, Some(s)) => s,
    };
    if sizes.is_empty() {
        return Err(invalid("sizes", "must not be empty"));
    }
    sizes.sort_unstable();
    sizes.dedup();
    for &s in &sizes {
        if s < 2 || s % 2 != 0 {
            return Err(invalid("sizes", format!("{s} is not an even size >= 2")));
        }
    }
    if raw.samples < 1 {
        return Err(invalid("samples", "must be at least 1"));
    }
    if raw.aspect_ratios.is_empty() {
        return Err(invalid("aspect_ratios", "must not be empty"));
    }
    if let Some(r) = raw
        .aspect_ratios
        .iter()
        .find(|r| !(**r > 0.0 && r.is_finite()))
    {
        return Err(invalid(
            "aspect_ratios",
            format!("{r} is not a positive ratio"),
        ));
    }
    let theta = match raw.theta {
        None | Some(Threshold::Preset(ThresholdPreset::Critical)) => {
            critical_threshold(raw.lattice)
        }
        Some(Threshold::Value(t)) if t > 0.0 && t < 1.0 => t,
        Some(Threshold::Value(t)) => {
            return Err(invalid("theta", format!("{t} is outside (0, 1)")));
        }
    };
    if raw.observables.is_empty() {
        return Err(invalid("observables", "must not be empty"));
    }
    let mut observables = raw.observables;
    observables.sort_by_key(|o| *o as u8);
    observables.dedup();

    let defaults = FitOptions::default();
    let fit = FitOptions {
        angle_window: raw.fit.angle_window.unwrap_or(defaults.angle_window),
        nofit_factor: raw.fit.nofit_factor.unwrap_or(defaults.nofit_factor),
        min_counts: raw.fit.min_counts.unwrap_or(defaults.min_counts),
    };
    if !(fit.angle_window > 0.0 && fit.angle_window <= std::f64::consts::FRAC_PI_2) {
        return Err(invalid("fit.angle_window", "must lie in (0, pi/2]"));
    }
    if !(fit.nofit_factor > 0.0) {
        return Err(invalid("fit.nofit_factor", "must be positive"));
    }
    let triple = raw.triple;
    if triple.rings == 0 || triple.sectors == 0 || !triple.sectors.is_multiple_of(3) {
        return Err(invalid(
            "triple",
            "rings must be positive and sectors a positive multiple of 3",
        ));
    }

    Ok(ExperimentConfig {
        lattice: raw.lattice,
        bc: raw.bc,
        sizes,
        aspect_ratios: raw.aspect_ratios,
        theta,
        selector: raw.selector,
        observables,
        samples: raw.samples,
        seed: raw.seed,
        output: raw.output,
        workers: raw.workers,
        fit,
        triple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c =
            parse_config("lattice = \"square\"\nbc = \"free\"\nsize = 4\nsamples = 1\n").unwrap();
        assert_eq!(c.sizes, vec![4]);
        assert_eq!(c.theta, 0.5927463);
        assert_eq!(c.selector, PathSelector::StoT);
        assert_eq!(c.observables, vec![Observable::Length]);
        assert_eq!(c.aspect_ratios, vec![1.0]);
        assert_eq!(c.fit, FitOptions::default());
        let c = parse_config("lattice = \"honeycomb\"\nbc = \"free\"\nsize = 4\nsamples = 1\n")
            .unwrap();
        assert_eq!(c.theta, 0.5);
    }

    #[test]
    fn explicit_values() {
        let c = parse_config(
            r#"
lattice = "honeycomb"
bc = "repulsive"
sizes = [64, 32]
samples = 10
theta = 0.4
selector = "optimal_crossing"
observables = ["triple_point", "length", "length"]
[fit]
nofit_factor = 3.0
"#,
        )
        .unwrap();
        assert_eq!(c.sizes, vec![32, 64]);
        assert_eq!(c.theta, 0.4);
        assert_eq!(
            c.observables,
            vec![Observable::Length, Observable::TriplePoint]
        );
        assert_eq!(c.fit.nofit_factor, 3.0);
        assert_eq!(c.fit.angle_window, 1.3);
        for selector in [PathSelector::StoT, PathSelector::OptimalCrossing] {
            let doc = format!(
                "lattice = \"square\"\nbc = \"free\"\nsize = 4\nsamples = 1\nselector = \"{}\"\n",
                selector.name()
            );
            assert_eq!(parse_config(&doc).unwrap().selector, selector);
        }
    }

    #[test]
    fn unknown_bc_names_the_valid_set() {
        let err = parse_config("lattice = \"square\"\nbc = \"periodic\"\nsize = 4\nsamples = 1\n")
            .unwrap_err()
            .to_string();
        for name in ["free", "sle_like", "sle_free", "repulsive", "random"] {
            assert!(err.contains(name), "{err}");
        }
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_position() {
        let err = parse_config(
            "lattice = \"square\"\nbc = \"free\"\nsize = 4\nsamples = 1\ncolour = 3\n",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("colour") && err.contains("line 5"), "{err}");
    }

    #[test]
    fn type_and_range_errors() {
        let base = "lattice = \"square\"\nbc = \"free\"\n";
        let e = parse_config(&format!("{base}size = \"big\"\nsamples = 1\n")).unwrap_err();
        assert!(matches!(e, ConfigError::Parse(_)));
        let e = parse_config(&format!("{base}size = 5\nsamples = 1\n")).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { field: "sizes", .. }));
        let e = parse_config(&format!("{base}size = 4\nsamples = 0\n")).unwrap_err();
        assert!(matches!(
            e,
            ConfigError::Invalid {
                field: "samples",
                ..
            }
        ));
        let e = parse_config(&format!("{base}size = 4\nsamples = 1\ntheta = 1.5\n")).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { field: "theta", .. }));
        let e = parse_config(&format!("{base}samples = 1\n")).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { field: "sizes", .. }));
        let e = parse_config(&format!(
            "{base}size = 4\nsamples = 1\n[triple]\nsectors = 8\n"
        ))
        .unwrap_err();
        assert!(matches!(
            e,
            ConfigError::Invalid {
                field: "triple",
                ..
            }
        ));
    }
}
