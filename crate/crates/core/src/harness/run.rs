//! Sample generation, aggregation and output files.
//!
//! Work is split into fixed chunks of consecutive samples. Every sample draws
//! its disorder from its own seed, chunk results are collected in index order,
//! and tallies are integers, so outputs do not depend on the worker count.

use std::fs;
use std::io;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Observable, TripleOptions};
use super::seed::sample_seed;
use crate::conformal::{MapKind, RectangleMap};
use crate::disorder::{induce_edge_weights, sample_instance, sample_random_edge_weights};
use crate::error::Error;
use crate::lattice::{build_lattice, row_pitch, PlanarLattice, Side};
use crate::observables::{
    displacement_scaling, fit_kappa_with, fractal_dimension, horizontal_displacement,
    kappa_from_dimension, left_of_path, rotation_symmetry_test, triple_point_disk, DisplacementFit,
    KappaFit, LeftPassageField, PathSelector, ScalingFit, SymmetryTest, TriplePointHistogram,
};
use crate::spanning::{kruskal, optimal_crossing_path, path_cost, tree_path, LatticePath};

pub const SCHEMA_VERSION: u32 = 1;
const CHUNK: u64 = 32;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(#[from] super::config::ConfigError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Run(#[from] Error),
}

impl HarnessError {
    /// Process exit code: 1 for configuration errors, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            _ => 2,
        }
    }
}

/// One lattice geometry of the experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub size: usize,
    /// Requested height / width.
    pub aspect_ratio: f64,
    pub a_cells: usize,
    pub b_cells: usize,
}

/// Sizes crossed with aspect ratios; `b_cells` is rounded so the geometric
/// aspect ratio is as close as the row pitch allows.
pub fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let pitch = row_pitch(config.lattice);
    let mut out = Vec::new();
    for &ratio in &config.aspect_ratios {
        for &size in &config.sizes {
            let b_cells = ((ratio * size as f64 / pitch).round() as usize).max(2);
            out.push(Cell {
                id: out.len(),
                size,
                aspect_ratio: ratio,
                a_cells: size,
                b_cells,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub cell: usize,
    pub sample: u64,
    pub seed: u64,
    pub path_length: usize,
    /// Largest edge weight on the path.
    pub path_cost: f64,
    pub start: usize,
    pub end: usize,
    pub dx: Option<f64>,
    pub triple_re: Option<f64>,
    pub triple_im: Option<f64>,
}

/// A fallible summary entry: a value, or why it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok(T),
    Error(String),
}

impl<T> From<crate::Result<T>> for Outcome<T> {
    fn from(r: crate::Result<T>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Error(e.to_string()),
        }
    }
}

impl<T> Outcome<T> {
    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok(v) => Some(v),
            Outcome::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSummary {
    pub histogram: TriplePointHistogram,
    pub test: Outcome<SymmetryTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: Cell,
    pub width: f64,
    pub height: f64,
    pub samples: u64,
    pub mean_length: f64,
    pub length_stderr: f64,
    pub mean_cost: f64,
    pub kappa_fit: Option<Outcome<KappaFit>>,
    pub mean_dx2: Option<f64>,
    pub dx2_stderr: Option<f64>,
    pub triple: Option<TripleSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSummary {
    pub aspect_ratio: f64,
    pub fit: Outcome<ScalingFit>,
    pub kappa: Option<Outcome<f64>>,
}

/// The configuration as echoed in summaries; worker count and output
/// location are left out so they cannot change the bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub lattice: crate::lattice::LatticeKind,
    pub bc: crate::disorder::Ensemble,
    pub sizes: Vec<usize>,
    pub aspect_ratios: Vec<f64>,
    pub theta: f64,
    pub selector: PathSelector,
    pub observables: Vec<Observable>,
    pub samples: u64,
    pub seed: u64,
    pub fit: crate::observables::FitOptions,
    pub triple: TripleOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub cells: Vec<CellSummary>,
    pub fractal_dimension: Vec<DimensionSummary>,
    pub displacement: Option<Outcome<DisplacementFit>>,
}

pub struct RunOutput {
    pub summary: Summary,
    pub records: Vec<SampleRecord>,
    pub fields: Vec<LeftPassageField>,
}

struct CellContext<'a> {
    config: &'a ExperimentConfig,
    cell: Cell,
    lattice: PlanarLattice,
    bottom: Vec<usize>,
    top: Vec<usize>,
    disk: Option<RectangleMap>,
}

#[derive(Default)]
struct Partial {
    records: Vec<SampleRecord>,
    left: Vec<u64>,
    paths: u64,
    triple: Option<TriplePointHistogram>,
}

fn crossing(ctx: &CellContext, tree: &crate::spanning::SpanningTree) -> crate::Result<LatticePath> {
    optimal_crossing_path(tree, &ctx.bottom, &ctx.top)
}

fn run_sample(ctx: &CellContext, sample: u64, part: &mut Partial) -> crate::Result<()> {
    let config = ctx.config;
    let lattice = &ctx.lattice;
    let seed = sample_seed(config.seed, ctx.cell.id as u64, sample);
    let graph = match config.bc.boundary_condition() {
        Some(bc) => {
            let instance = sample_instance(lattice, bc, config.theta, seed)?;
            induce_edge_weights(lattice, &instance)
        }
        None => sample_random_edge_weights(lattice, seed),
    };
    let tree = kruskal(&graph)?;
    let path = match config.selector {
        PathSelector::StoT => tree_path(&tree, lattice.s_vertex(), lattice.t_vertex()),
        PathSelector::OptimalCrossing => crossing(ctx, &tree)?,
    };

    if config.wants(Observable::LeftPassage) {
        let left = left_of_path(&path, lattice);
        if part.left.is_empty() {
            part.left = vec![0; left.len()];
        }
        for (count, is_left) in part.left.iter_mut().zip(left) {
            *count += is_left as u64;
        }
        part.paths += 1;
    }
    let dx = if config.wants(Observable::Displacement) {
        let crossing_path = match config.selector {
            PathSelector::OptimalCrossing => path.clone(),
            PathSelector::StoT => crossing(ctx, &tree)?,
        };
        Some(horizontal_displacement(&crossing_path, lattice)?)
    } else {
        None
    };
    let triple = match &ctx.disk {
        Some(map) => {
            let w = triple_point_disk(&tree, lattice, map)?;
            part.triple
                .get_or_insert_with(|| {
                    TriplePointHistogram::new(config.triple.rings, config.triple.sectors)
                        .expect("validated with the config")
                })
                .add(w);
            Some(w)
        }
        None => None,
    };

    part.records.push(SampleRecord {
        cell: ctx.cell.id,
        sample,
        seed,
        path_length: path.len(),
        path_cost: path_cost(&path)?,
        start: path.start(),
        end: path.end(),
        dx,
        triple_re: triple.map(|w: Complex64| w.re),
        triple_im: triple.map(|w| w.im),
    });
    Ok(())
}

fn mean_and_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn run_cell(
    config: &ExperimentConfig,
    cell: Cell,
) -> Result<(CellSummary, Vec<SampleRecord>, Option<LeftPassageField>), HarnessError> {
    let lattice = build_lattice(config.lattice, cell.a_cells, cell.b_cells)?;
    let disk = if config.wants(Observable::TriplePoint) {
        Some(RectangleMap::new(
            MapKind::DiskEquilateral,
            lattice.width(),
            lattice.height(),
        )?)
    } else {
        None
    };
    let ctx = CellContext {
        config,
        cell,
        bottom: lattice.side_vertices(Side::Bottom),
        top: lattice.side_vertices(Side::Top),
        lattice,
        disk,
    };

    let chunks = config.samples.div_ceil(CHUNK);
    let parts: Vec<crate::Result<Partial>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut part = Partial::default();
            for sample in c * CHUNK..((c + 1) * CHUNK).min(config.samples) {
                run_sample(&ctx, sample, &mut part)?;
            }
            Ok(part)
        })
        .collect();

    let mut records = Vec::with_capacity(config.samples as usize);
    let mut field = if config.wants(Observable::LeftPassage) {
        Some(LeftPassageField::new(
            &ctx.lattice,
            config.bc,
            config.selector,
        )?)
    } else {
        None
    };
    let mut hist = TriplePointHistogram::new(config.triple.rings, config.triple.sectors)
        .expect("validated with the config");
    for part in parts {
        let part = part?;
        records.extend(part.records);
        if let Some(field) = field.as_mut() {
            for (k, &l) in part.left.iter().enumerate() {
                field.counts_left[k] += l;
            }
            for t in field.counts_total.iter_mut() {
                *t += part.paths;
            }
        }
        if let Some(h) = &part.triple {
            hist.merge(h);
        }
    }

    let (mean_length, length_stderr) =
        mean_and_stderr(records.iter().map(|r| r.path_length as f64));
    let mean_cost = records.iter().map(|r| r.path_cost).sum::<f64>() / records.len() as f64;
    let kappa_fit = field
        .as_ref()
        .map(|f| fit_kappa_with(f, &config.fit).into());
    let (mean_dx2, dx2_stderr) = if config.wants(Observable::Displacement) {
        let (m, s) = mean_and_stderr(records.iter().map(|r| r.dx.unwrap_or(0.0).powi(2)));
        (Some(m), Some(s))
    } else {
        (None, None)
    };
    let triple = ctx.disk.as_ref().map(|_| TripleSummary {
        test: rotation_symmetry_test(
            &hist,
            config.triple.resamples,
            sample_seed(config.seed, cell.id as u64, u64::MAX),
        )
        .into(),
        histogram: hist,
    });
    let summary = CellSummary {
        cell,
        width: ctx.lattice.width(),
        height: ctx.lattice.height(),
        samples: config.samples,
        mean_length,
        length_stderr,
        mean_cost,
        kappa_fit,
        mean_dx2,
        dx2_stderr,
        triple,
    };
    Ok((summary, records, field))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| HarnessError::Io(io::Error::other(e)))?;
    pool.install(|| run_experiment_in_pool(config))
}

fn run_experiment_in_pool(config: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    let mut summaries = Vec::new();
    let mut records = Vec::new();
    let mut fields = Vec::new();
    for cell in cells(config) {
        let (s, r, f) = run_cell(config, cell)?;
        summaries.push(s);
        records.extend(r);
        fields.extend(f);
    }

    let mut dimensions = Vec::new();
    if config.sizes.len() >= 3 {
        for &ratio in &config.aspect_ratios {
            let group: Vec<&CellSummary> = summaries
                .iter()
                .filter(|s| s.cell.aspect_ratio == ratio)
                .collect();
            let sizes: Vec<f64> = group.iter().map(|s| s.cell.size as f64).collect();
            let lengths: Vec<f64> = group.iter().map(|s| s.mean_length).collect();
            let fit = fractal_dimension(&sizes, &lengths);
            let kappa = fit
                .as_ref()
                .ok()
                .map(|f| kappa_from_dimension(f.slope).into());
            dimensions.push(DimensionSummary {
                aspect_ratio: ratio,
                fit: fit.into(),
                kappa,
            });
        }
    }

    let displacement = (config.wants(Observable::Displacement) && config.aspect_ratios.len() >= 2)
        .then(|| {
            let samples: Vec<(f64, f64)> = summaries
                .iter()
                .flat_map(|s| {
                    let ratio = s.height / s.width;
                    records
                        .iter()
                        .filter(move |r| r.cell == s.cell.id)
                        .map(move |r| (ratio, r.dx.unwrap_or(0.0).powi(2)))
                })
                .collect();
            displacement_scaling(&samples).into()
        });

    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            lattice: config.lattice,
            bc: config.bc,
            sizes: config.sizes.clone(),
            aspect_ratios: config.aspect_ratios.clone(),
            theta: config.theta,
            selector: config.selector,
            observables: config.observables.clone(),
            samples: config.samples,
            seed: config.seed,
            fit: config.fit,
            triple: config.triple,
        },
        cells: summaries,
        fractal_dimension: dimensions,
        displacement,
    };
    Ok(RunOutput {
        summary,
        records,
        fields,
    })
}

/// Pretty-printed summary with a trailing newline; fields in declaration order.
pub fn summary_json(summary: &Summary) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summaries serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ProbeRow {
    schema_version: u32,
    cell: usize,
    face: usize,
    x: f64,
    y: f64,
    angle: f64,
    left: u64,
    total: u64,
}

/// Writes `summary.json`, `samples.csv` and one `left_passage_<cell>.csv` per
/// left-passage field into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.json"), summary_json(&output.summary))?;

    let mut w = csv::Writer::from_path(dir.join("samples.csv"))?;
    for r in &output.records {
        w.serialize(r)?;
    }
    w.flush()?;

    for (field, cell) in output
        .fields
        .iter()
        .zip(output.summary.cells.iter().map(|s| s.cell.id))
    {
        let mut w = csv::Writer::from_path(dir.join(format!("left_passage_{cell}.csv")))?;
        for (k, p) in field.probes.iter().enumerate() {
            w.serialize(ProbeRow {
                schema_version: SCHEMA_VERSION,
                cell,
                face: p.face,
                x: p.point.x,
                y: p.point.y,
                angle: p.angle,
                left: field.counts_left[k],
                total: field.counts_total[k],
            })?;
        }
        w.flush()?;
    }
    Ok(())
}
