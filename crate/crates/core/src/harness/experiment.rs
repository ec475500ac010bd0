//! Solver runs checked against rate predictions.
//!
//! Each run is measured against a high-precision reference run from the
//! same start. The reference fixed point is classified (interior or on a
//! face), the matching closed-form rate is predicted from the support of
//! the reference solution, and the fitted tail rate is compared with it.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_instance, random_start, Distribution};
use super::Grid;
use crate::error::{Error, Result};
use crate::linalg::io::{read_matrix, read_vector};
use crate::linalg::Vector;
use crate::operators::{soft_threshold, AffineConstraint, ProxParams};
use crate::problem::{ProblemInstance, SupportInfo};
use crate::rate_theory::{
    boundary_rate, predict_rate, FixedPointKind, RatePrediction, SubspaceGeometry, TAU_FACE,
};
use crate::solvers::{fit_tail, solve, IterateTrace, Reference, SolverConfig, Variant};

/// Error level used for the iteration count column.
pub const TARGET_ERROR: f64 = 1e-10;

fn default_max_iters() -> usize {
    20_000
}

fn default_tol() -> f64 {
    1e-13
}

fn default_rate_tolerance() -> f64 {
    1e-2
}

fn default_record_every() -> usize {
    1
}

fn default_scale() -> f64 {
    1.0
}

fn default_sweep_variants() -> Vec<Variant> {
    vec![Variant::DrReg]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    /// Matrix and right-hand side files; relative paths are resolved against
    /// the spec file's directory by [`ExperimentSpec::from_path`].
    Files {
        matrix: PathBuf,
        rhs: PathBuf,
        #[serde(default)]
        solution: Option<PathBuf>,
    },
    Generated {
        m: usize,
        n: usize,
        k: usize,
        seed: u64,
        #[serde(default)]
        distribution: Distribution,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartSpec {
    #[default]
    Zero,
    /// i.i.d. normal entries times `scale`.
    Random {
        seed: u64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
}

impl StartSpec {
    pub fn vector(&self, n: usize) -> Vector {
        match *self {
            StartSpec::Zero => Vector::zeros(n),
            StartSpec::Random { seed, scale } => random_start(n, seed, scale),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub variant: Variant,
    /// Step size; not needed when `c` and `alpha` are given.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// ℓ² weight; omitted means unregularized.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Target `c`, realized through `γ = α(1−c)/c`.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub start: StartSpec,
}

impl RunSpec {
    pub fn prox(&self) -> Result<ProxParams> {
        match (self.c, self.alpha, self.gamma) {
            (Some(c), Some(alpha), _) => ProxParams::from_alpha_c(alpha, c),
            (Some(_), None, _) => Err(Error::InvalidArgument("c needs alpha".into())),
            (None, alpha, Some(gamma)) => ProxParams::new(gamma, alpha.unwrap_or(f64::INFINITY)),
            (None, _, None) => Err(Error::InvalidArgument("run needs gamma or (alpha, c)".into())),
        }
    }
}

/// Regularized runs over a `c` grid at fixed `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub alpha: f64,
    pub c_grid: Grid,
    /// Used by the relaxed variants; `λ = 1` when omitted.
    #[serde(default)]
    pub lambda_grid: Option<Grid>,
    #[serde(default = "default_sweep_variants")]
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub start: StartSpec,
}

impl SweepSpec {
    pub fn expand(&self) -> Result<Vec<RunSpec>> {
        self.c_grid.check_within(0.0, 1.0, "c")?;
        if self.c_grid.end >= 1.0 {
            return Err(Error::InvalidArgument("sweep c must stay below 1 at finite alpha".into()));
        }
        let lambdas = match &self.lambda_grid {
            Some(g) => {
                g.check_within(0.0, 2.0, "lambda")?;
                g.values()
            }
            None => vec![1.0],
        };
        let mut runs = Vec::new();
        for c in self.c_grid.values() {
            for &variant in &self.variants {
                let ls: &[f64] = if variant.fixed_lambda().is_some() { &[1.0] } else { &lambdas };
                for &l in ls {
                    runs.push(RunSpec {
                        variant,
                        gamma: None,
                        alpha: Some(self.alpha),
                        c: Some(c),
                        lambda: Some(l),
                        start: self.start,
                    });
                }
            }
        }
        Ok(runs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instance: InstanceSource,
    #[serde(default)]
    pub runs: Vec<RunSpec>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Stopping tolerance on `‖y^{k+1} − y^k‖∞`.
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Iterations of the reference run; `max(10·max_iters, 5·10⁴)` by
    /// default.
    #[serde(default)]
    pub reference_iters: Option<usize>,
    /// Fit window in records; 0 uses a quarter of the usable tail.
    #[serde(default)]
    pub fit_window: usize,
    #[serde(default = "default_rate_tolerance")]
    pub rate_tolerance: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentSpec {
    /// Minimal spec for `runs` on `instance`, with default controls.
    pub fn new(instance: InstanceSource, runs: Vec<RunSpec>) -> Self {
        Self {
            instance,
            runs,
            sweep: None,
            max_iters: default_max_iters(),
            tol: default_tol(),
            reference_iters: None,
            fit_window: 0,
            rate_tolerance: default_rate_tolerance(),
            record_every: default_record_every(),
            output_dir: None,
        }
    }

    /// Reads a JSON spec, resolving relative paths against its directory.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut spec: Self = serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let InstanceSource::Files { matrix, rhs, solution } = &mut spec.instance {
            resolve(matrix);
            resolve(rhs);
            if let Some(s) = solution {
                resolve(s);
            }
        }
        if let Some(out) = &mut spec.output_dir {
            resolve(out);
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs.is_empty() && self.sweep.is_none() {
            return Err(Error::InvalidArgument("spec has no runs".into()));
        }
        if self.max_iters == 0 || self.record_every == 0 {
            return Err(Error::InvalidArgument("max_iters and record_every must be positive".into()));
        }
        if !(self.rate_tolerance > 0.0) {
            return Err(Error::InvalidArgument("rate_tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn all_runs(&self) -> Result<Vec<RunSpec>> {
        let mut runs = self.runs.clone();
        if let Some(sweep) = &self.sweep {
            runs.extend(sweep.expand()?);
        }
        Ok(runs)
    }

    pub fn load_instance(&self) -> Result<ProblemInstance> {
        match &self.instance {
            InstanceSource::Generated { m, n, k, seed, distribution } => {
                Ok(generate_instance(*m, *n, *k, *seed, distribution)?.problem)
            }
            InstanceSource::Files { matrix, rhs, solution } => {
                let p = ProblemInstance::new(read_matrix(matrix)?, read_vector(rhs)?)?;
                match solution {
                    Some(s) => p.with_solution(read_vector(s)?),
                    None => Ok(p),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Pass,
    Fail,
    /// No prediction or no fit was possible; see the note.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub index: usize,
    pub variant: Variant,
    pub gamma: f64,
    /// `None` when unregularized.
    pub alpha: Option<f64>,
    pub c: f64,
    pub lambda: f64,
    /// Angle the prediction is based on (`θ₁`, or `θ̄₁` on a face).
    pub theta: Option<f64>,
    pub predicted: Option<f64>,
    pub fitted: Option<f64>,
    pub gap: Option<f64>,
    pub kind: Option<FixedPointKind>,
    pub face_size: usize,
    /// First recorded iteration with `‖y^k − y*‖ ≤ 1e-10`.
    pub iters_to_target: Option<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// `‖x_ref − x*‖∞` when the instance carries a solution.
    pub solution_error: Option<f64>,
    pub status: RunStatus,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub m: usize,
    pub n: usize,
    pub tolerance: f64,
    pub rows: Vec<RateRow>,
}

impl RateReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == RunStatus::Pass)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "index", "variant", "gamma", "alpha", "c", "lambda", "theta", "predicted", "fitted",
            "gap", "kind", "face_size", "iters_to_target", "iterations", "converged", "status",
            "note",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.index.to_string(),
                r.variant.to_string(),
                format!("{:e}", r.gamma),
                opt(r.alpha),
                format!("{:e}", r.c),
                format!("{:e}", r.lambda),
                opt(r.theta),
                opt(r.predicted),
                opt(r.fitted),
                opt(r.gap),
                r.kind
                    .map(|k| format!("{k:?}").to_lowercase())
                    .unwrap_or_default(),
                r.face_size.to_string(),
                r.iters_to_target.map(|k| k.to_string()).unwrap_or_default(),
                r.iterations.to_string(),
                r.converged.to_string(),
                format!("{:?}", r.status).to_lowercase(),
                r.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Writes `k, err_y, err_x, log_err_y` for every record of `trace`.
pub fn write_error_curve(path: &Path, trace: &IterateTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "err_y", "err_x", "log_err_y"])?;
    for (i, k) in trace.ks.iter().enumerate() {
        let ey = trace.err_y.get(i).copied().unwrap_or(f64::NAN);
        let ex = trace.err_x.get(i).copied().unwrap_or(f64::NAN);
        w.write_record([
            k.to_string(),
            format!("{ey:e}"),
            format!("{ex:e}"),
            format!("{:e}", ey.ln()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Where the soft-thresholding argument sits relative to `±γ` at the
/// reference point: the solution support and the face coordinates.
fn classify(variant: Variant, gamma: f64, y: &Vector, x: &Vector) -> (SupportInfo, Vec<usize>) {
    let w = match variant {
        Variant::DrSwapped => y.clone(),
        _ => 2.0 * x - y,
    };
    let s = SupportInfo::from_vector(&soft_threshold(&w, gamma), 0.0);
    let face = s
        .zero_indices()
        .iter()
        .copied()
        .filter(|&j| w[j].abs() >= gamma * (1.0 - TAU_FACE))
        .collect();
    (s, face)
}

fn predict(
    variant: Variant,
    k: &AffineConstraint,
    s: &SupportInfo,
    prox: &ProxParams,
    lambda: f64,
    theta: f64,
) -> Result<f64> {
    match predict_rate(variant, theta, prox, lambda) {
        Ok(p) => Ok(p.rho),
        // outside the closed forms' range: fall back to the matrix
        Err(_) => Ok(RatePrediction::spectral(variant, s, k, prox, lambda)?.rho),
    }
}

struct Measured {
    row: RateRow,
    trace: Option<IterateTrace>,
}

fn run_one(spec: &ExperimentSpec, p: &ProblemInstance, index: usize, run: &RunSpec) -> Measured {
    let prox = run.prox();
    let lambda = run
        .lambda
        .map(|l| run.variant.fixed_lambda().unwrap_or(l))
        .unwrap_or_else(|| run.variant.fixed_lambda().unwrap_or(1.0));
    let mut row = RateRow {
        index,
        variant: run.variant,
        gamma: prox.as_ref().map(|q| q.gamma()).unwrap_or(f64::NAN),
        alpha: prox.as_ref().ok().filter(|q| q.is_regularized()).map(|q| q.alpha()),
        c: prox.as_ref().map(|q| q.c()).unwrap_or(f64::NAN),
        lambda,
        theta: None,
        predicted: None,
        fitted: None,
        gap: None,
        kind: None,
        face_size: 0,
        iters_to_target: None,
        iterations: 0,
        converged: false,
        solution_error: None,
        status: RunStatus::Error,
        note: String::new(),
    };
    let mut notes = Vec::new();
    let trace = (|| -> Result<IterateTrace> {
        let prox = prox?;
        let k = p.constraint();
        let cfg = SolverConfig::new(run.variant, prox)
            .with_lambda(lambda)
            .with_max_iters(spec.max_iters)
            .with_stop_tol(spec.tol)
            .with_record_every(spec.record_every);
        let y0 = run.start.vector(p.n());
        let mut ref_cfg = cfg.reference_config();
        if let Some(iters) = spec.reference_iters {
            ref_cfg.max_iters = iters;
        }
        let reference = Reference::from_result(&solve(k, &ref_cfg, &y0, None)?);
        let result = solve(k, &cfg, &y0, Some(&reference))?;
        row.iterations = result.iterations;
        row.converged = result.converged();
        if result.stalled() {
            notes.push("stalled".to_string());
        }
        row.iters_to_target = result
            .trace
            .ks
            .iter()
            .zip(&result.trace.err_y)
            .find(|(_, e)| **e <= TARGET_ERROR)
            .map(|(k, _)| *k);
        if let Some(x_star) = p.x_star() {
            row.solution_error = Some((&reference.x - x_star).amax());
        }
        match fit_tail(&result.trace, spec.fit_window) {
            Ok(f) => row.fitted = Some(f.rate),
            Err(e) => notes.push(format!("fit: {e}")),
        }
        let (s, face) = classify(run.variant, prox.gamma(), &reference.y, &reference.x);
        row.face_size = face.len();
        let prediction = if face.is_empty() {
            row.kind = Some(FixedPointKind::Interior);
            SubspaceGeometry::new(k.a(), &s).and_then(|g| {
                row.theta = Some(g.theta1());
                predict(run.variant, k, &s, &prox, lambda, g.theta1())
            })
        } else {
            row.kind = Some(FixedPointKind::Boundary);
            boundary_rate(&s, k, &face).and_then(|theta_bar| {
                row.theta = Some(theta_bar);
                let reduced = s.without_rows(&face)?;
                predict(run.variant, k, &reduced, &prox, lambda, theta_bar)
            })
        };
        match prediction {
            Ok(rho) => row.predicted = Some(rho),
            Err(e) => notes.push(format!("prediction: {e}")),
        }
        Ok(result.trace)
    })();
    let trace = match trace {
        Ok(t) => Some(t),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    if let (Some(f), Some(r)) = (row.fitted, row.predicted) {
        let gap = (f - r).abs();
        row.gap = Some(gap);
        row.status = if gap <= spec.rate_tolerance { RunStatus::Pass } else { RunStatus::Fail };
    }
    row.note = notes.join("; ");
    Measured { row, trace }
}

/// Runs every configuration of `spec` (in parallel) and assembles the
/// report in configuration order. Per-run failures are recorded in the
/// report; only an unusable spec or instance is an error.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RateReport> {
    spec.validate()?;
    let runs = spec.all_runs()?;
    let p = spec.load_instance()?;
    let measured: Vec<Measured> = runs
        .par_iter()
        .enumerate()
        .map(|(i, run)| run_one(spec, &p, i, run))
        .collect();
    if let Some(dir) = &spec.output_dir {
        fs::create_dir_all(dir)?;
        for m in &measured {
            if let Some(trace) = &m.trace {
                let name = format!("run_{:03}_{}.csv", m.row.index, m.row.variant);
                write_error_curve(&dir.join(name), trace)?;
            }
        }
    }
    let report = RateReport {
        m: p.m(),
        n: p.n(),
        tolerance: spec.rate_tolerance,
        rows: measured.into_iter().map(|m| m.row).collect(),
    };
    if let Some(dir) = &spec.output_dir {
        fs::write(dir.join("report.json"), report.to_json()?)?;
        report.write_csv(&dir.join("report.csv"))?;
    }
    Ok(report)
}
