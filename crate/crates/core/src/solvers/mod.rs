//! Splitting iterations for (regularized) basis pursuit with a shared
//! recording and stopping loop.
//!
//! Every variant is driven through the same loop. Variants whose natural
//! state is not a single vector (the split Bregman and primal-dual forms)
//! report the equivalent Douglas-Rachford variable `y^k`, so traces and
//! reference errors are comparable across variants.

pub(crate) mod fit;

pub use fit::{fit_asymptotic_slope, fit_tail, SlopeFit};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::operators::{
    prox_affine_l2, project_affine, project_box, shrink, soft_threshold, AffineConstraint,
    ProxParams,
};

/// Full iterate vectors are kept only up to this dimension.
pub const MAX_STORED_DIM: usize = 2000;

/// Iterations without a new minimum step norm before a run is declared
/// stalled (unregularized Peaceman-Rachford, and reference runs).
pub const STALL_WINDOW: usize = 100;

/// Relative step size below which a reference run starts looking for a
/// stall.
const ROUNDOFF_STEP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `y⁺ = S_γ(2x−y) + y − x`, `x = P(y)`.
    Dr,
    /// Roles swapped: `y⁺ = x + A⁺(b − A(2x−y))`, `x = S_γ(y)`.
    DrSwapped,
    /// `y⁺ = c·S_γ(2x−y) + y − x`, `x = P(y)`.
    DrReg,
    /// Relaxed: `y⁺ = y + λ[S_γ(2x−y) − x]`, `x = P(y)`.
    Gdr,
    /// `Gdr` with `λ = 2`.
    Pr,
    /// Relaxed with the ℓ² term on the constraint side:
    /// `y⁺ = y + λ[S_γ(2x−y) − x]`, `x = c·y + A⁺(b − cAy)`.
    GdrReg,
    /// `GdrReg` with `λ = 2`.
    PrReg,
    /// Split Bregman (ADMM on the dual of the regularized problem).
    Lbsb,
    /// Primal-dual form with the box-projected dual variable.
    ChambollePock,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::Dr,
        Variant::DrSwapped,
        Variant::DrReg,
        Variant::Gdr,
        Variant::Pr,
        Variant::GdrReg,
        Variant::PrReg,
        Variant::Lbsb,
        Variant::ChambollePock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Dr => "dr",
            Variant::DrSwapped => "dr-swapped",
            Variant::DrReg => "dr-reg",
            Variant::Gdr => "gdr",
            Variant::Pr => "pr",
            Variant::GdrReg => "gdr-reg",
            Variant::PrReg => "pr-reg",
            Variant::Lbsb => "lbsb",
            Variant::ChambollePock => "chambolle-pock",
        }
    }

    /// Relaxation forced by the variant, if any.
    pub fn fixed_lambda(self) -> Option<f64> {
        match self {
            Variant::Pr | Variant::PrReg => Some(2.0),
            Variant::Gdr | Variant::GdrReg => None,
            _ => Some(1.0),
        }
    }

    /// Whether the variant uses the ℓ² weight `α` (through `c`).
    pub fn uses_alpha(self) -> bool {
        matches!(
            self,
            Variant::DrReg | Variant::GdrReg | Variant::PrReg | Variant::Lbsb
        )
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == key)
            .or(match key.as_str() {
                "admm2-lbsb" | "lb-sb" => Some(Variant::Lbsb),
                "cp" => Some(Variant::ChambollePock),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variant {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub variant: Variant,
    pub prox: ProxParams,
    pub lambda: f64,
    pub max_iters: usize,
    /// Stop when `‖y^{k+1} − y^k‖∞ ≤ stop_tol`.
    pub stop_tol: f64,
    pub record_every: usize,
    /// Keep full `y^k`, `x^k` vectors in the trace (ignored above
    /// [`MAX_STORED_DIM`]).
    pub keep_iterates: bool,
    /// Stop once the step norm has not reached a new minimum for
    /// [`STALL_WINDOW`] iterations.
    pub stop_on_stall: bool,
}

impl SolverConfig {
    pub fn new(variant: Variant, prox: ProxParams) -> Self {
        Self {
            variant,
            prox,
            lambda: variant.fixed_lambda().unwrap_or(1.0),
            max_iters: 100_000,
            stop_tol: 1e-12,
            record_every: 1,
            keep_iterates: false,
            stop_on_stall: false,
        }
    }

    /// Sets `λ` for the relaxed variants; fixed-λ variants keep theirs.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = self.variant.fixed_lambda().unwrap_or(lambda);
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_stop_tol(mut self, stop_tol: f64) -> Self {
        self.stop_tol = stop_tol;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.variant.fixed_lambda() {
            if self.lambda != l {
                return Err(Error::InvalidArgument(format!(
                    "{} requires lambda = {l}",
                    self.variant
                )));
            }
        }
        if !(self.lambda > 0.0 && self.lambda <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "lambda must lie in (0, 2], got {}",
                self.lambda
            )));
        }
        if self.variant == Variant::Lbsb && !self.prox.is_regularized() {
            return Err(Error::InvalidArgument("lbsb needs a finite alpha".into()));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be positive".into()));
        }
        if !(self.stop_tol >= 0.0) {
            return Err(Error::InvalidArgument("stop_tol must be nonnegative".into()));
        }
        Ok(())
    }

    /// Settings for the high-precision reference run. It stops when the
    /// step norm bottoms out at round-off: past that point the iterates can
    /// drift along a non-unique fixed-point set.
    pub fn reference_config(&self) -> Self {
        Self {
            max_iters: (10 * self.max_iters).max(50_000),
            stop_tol: 1e-14,
            record_every: usize::MAX,
            keep_iterates: false,
            stop_on_stall: true,
            ..*self
        }
    }

    fn stall_detection(&self) -> bool {
        self.variant.fixed_lambda() == Some(2.0) && self.prox.c() == 1.0
    }
}

/// High-precision fixed point the errors of a run are measured against.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub y: Vector,
    pub x: Vector,
}

impl Reference {
    pub fn from_result(r: &SolveResult) -> Self {
        Self {
            y: r.y_final.clone(),
            x: r.x_final.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterateTrace {
    pub record_every: usize,
    /// Iteration index of each record.
    pub ks: Vec<usize>,
    pub iterates_y: Vec<Vector>,
    pub iterates_x: Vec<Vector>,
    /// `‖y^k − y_ref‖₂`, empty without a reference.
    pub err_y: Vec<f64>,
    /// `‖x^k − x_ref‖₂`, empty without a reference.
    pub err_x: Vec<f64>,
    /// `‖y^{k+1} − y^k‖₂` at each recorded `k` (last record has none).
    pub step_norms: Vec<f64>,
    /// `‖Ax^k − b‖₂`.
    pub feasibility: Vec<f64>,
    /// `‖At^k − b‖₂` for the split Bregman primal estimate `t^k`.
    pub aux_feasibility: Vec<f64>,
    /// `‖y^0‖₂`, used for the fit noise floor.
    pub y0_norm: f64,
    pub converged_at: Option<usize>,
    pub stalled: bool,
}

impl IterateTrace {
    /// Errors are only meaningful above this level.
    pub fn noise_floor(&self) -> f64 {
        10.0 * f64::EPSILON * self.y0_norm.max(1.0)
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x_final: Vector,
    pub y_final: Vector,
    pub trace: IterateTrace,
    /// Estimate of the dual certificate `η`.
    pub dual_estimate: Option<Vector>,
    /// Split Bregman primal estimate `t = α·S₁(Aᵀz)`.
    pub t_final: Option<Vector>,
    pub iterations: usize,
}

impl SolveResult {
    pub fn converged(&self) -> bool {
        self.trace.converged_at.is_some()
    }

    pub fn stalled(&self) -> bool {
        self.trace.stalled
    }
}

/// State of one run, always exposing the Douglas-Rachford pair `(y, x)`.
enum State {
    /// Every variant whose natural state is `y` alone.
    Plain { y: Vector, x: Vector },
    Lbsb {
        x: Vector,
        z: Vector,
        w: Vector,
        y: Vector,
    },
    ChambollePock {
        x: Vector,
        x_prev: Vector,
        w: Vector,
        y: Vector,
    },
}

struct Runner<'a> {
    k: &'a AffineConstraint,
    cfg: SolverConfig,
    state: State,
}

impl<'a> Runner<'a> {
    fn y(&self) -> &Vector {
        match &self.state {
            State::Plain { y, .. } | State::Lbsb { y, .. } | State::ChambollePock { y, .. } => y,
        }
    }

    fn x(&self) -> &Vector {
        match &self.state {
            State::Plain { x, .. } | State::Lbsb { x, .. } | State::ChambollePock { x, .. } => x,
        }
    }

    fn x_of(&self, y: &Vector) -> Vector {
        match self.cfg.variant {
            Variant::DrSwapped => soft_threshold(y, self.cfg.prox.gamma()),
            Variant::GdrReg | Variant::PrReg => prox_affine_l2(y, &self.cfg.prox, self.k),
            _ => project_affine(y, self.k),
        }
    }

    fn plain(k: &'a AffineConstraint, cfg: SolverConfig, y0: Vector) -> Self {
        let mut r = Self {
            k,
            cfg,
            state: State::Plain {
                x: Vector::zeros(0),
                y: Vector::zeros(0),
            },
        };
        let x = r.x_of(&y0);
        r.state = State::Plain { y: y0, x };
        r
    }

    fn t_estimate(&self) -> Option<Vector> {
        match &self.state {
            State::Lbsb { z, .. } => {
                let alpha = self.cfg.prox.alpha();
                Some((self.k.a().transpose() * z).map(|v| alpha * shrink(v, 1.0)))
            }
            _ => None,
        }
    }

    fn dual_estimate(&self) -> Vector {
        let gamma = self.cfg.prox.gamma();
        match &self.state {
            State::Plain { y, x } => match self.cfg.variant {
                Variant::DrSwapped => (y - x) / gamma,
                _ => (x - y) / gamma,
            },
            State::Lbsb { w, .. } | State::ChambollePock { w, .. } => w.clone(),
        }
    }

    fn advance(&mut self) {
        let gamma = self.cfg.prox.gamma();
        let c = self.cfg.prox.c();
        let lambda = self.cfg.lambda;
        let variant = self.cfg.variant;
        let k = self.k;
        match &mut self.state {
            State::Plain { y, x } => {
                let next = match variant {
                    Variant::DrSwapped => {
                        let r = 2.0 * &*x - &*y;
                        &*x + k.pinv() * (k.b() - k.a() * r)
                    }
                    _ => {
                        let s = soft_threshold(&(2.0 * &*x - &*y), gamma);
                        match variant {
                            Variant::Dr => s + &*y - &*x,
                            Variant::DrReg => c * s + &*y - &*x,
                            _ => &*y + lambda * (s - &*x),
                        }
                    }
                };
                *y = next;
                *x = match variant {
                    Variant::DrSwapped => soft_threshold(y, gamma),
                    Variant::GdrReg | Variant::PrReg => prox_affine_l2(y, &self.cfg.prox, k),
                    _ => project_affine(y, k),
                };
            }
            State::Lbsb { x, z, w, y } => {
                let at = k.a().transpose();
                let v = &*x / gamma + &at * &*z;
                // prox of (α/2)dist²(·, [−1,1]ⁿ) with weight γ
                let w_next = v.map(|t| t - c * shrink(t, 1.0));
                let rhs = (k.b() - k.a() * &*x) / gamma + k.a() * &w_next;
                let z_next = k.gram_inv() * rhs;
                let x_next = &*x + gamma * (&at * &z_next - &w_next);
                *y = &*x - gamma * &w_next;
                *x = x_next;
                *z = z_next;
                *w = w_next;
            }
            State::ChambollePock { x, x_prev, w, y } => {
                let w_next = project_box(&(&*w + (2.0 * &*x - &*x_prev) / gamma));
                let x_next = project_affine(&(&*x - gamma * &w_next), k);
                *y = &*x - gamma * &w_next;
                *x_prev = std::mem::replace(x, x_next);
                *w = w_next;
            }
        }
    }
}

fn check_dims(k: &AffineConstraint, v: &Vector, what: &str, len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::Dimension(format!(
            "{what} has length {} but expected {len} (A is {}x{})",
            v.len(),
            k.rows(),
            k.cols()
        )));
    }
    Ok(())
}

fn run(runner: &mut Runner<'_>, reference: Option<&Reference>) -> Result<SolveResult> {
    let cfg = runner.cfg;
    let n = runner.k.cols();
    if let Some(r) = reference {
        check_dims(runner.k, &r.y, "reference y", n)?;
        check_dims(runner.k, &r.x, "reference x", n)?;
    }
    let keep = cfg.keep_iterates && n <= MAX_STORED_DIM;
    let mut trace = IterateTrace {
        record_every: cfg.record_every,
        y0_norm: runner.y().norm(),
        ..Default::default()
    };
    let track_aux = cfg.variant == Variant::Lbsb;
    let record = |trace: &mut IterateTrace, runner: &Runner<'_>, kk: usize| {
        trace.ks.push(kk);
        if keep {
            trace.iterates_y.push(runner.y().clone());
            trace.iterates_x.push(runner.x().clone());
        }
        if let Some(r) = reference {
            trace.err_y.push((runner.y() - &r.y).norm());
            trace.err_x.push((runner.x() - &r.x).norm());
        }
        trace.feasibility.push(runner.k.residual(runner.x()));
        if track_aux {
            if let Some(t) = runner.t_estimate() {
                trace.aux_feasibility.push(runner.k.residual(&t));
            }
        }
    };

    let pr_stall = cfg.stall_detection();
    let mut best_step = f64::INFINITY;
    let mut best_at = 0usize;
    let mut iterations = 0usize;
    record(&mut trace, runner, 0);
    let mut last_recorded = 0usize;
    while iterations < cfg.max_iters {
        let y_prev = runner.y().clone();
        runner.advance();
        iterations += 1;
        let diff = runner.y() - &y_prev;
        if !diff.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "iterates became non-finite at k = {iterations}"
            )));
        }
        if (iterations - 1).is_multiple_of(cfg.record_every) {
            trace.step_norms.push(diff.norm());
        }
        let step_inf = diff.amax();
        let done = step_inf <= cfg.stop_tol;
        if iterations.is_multiple_of(cfg.record_every) || done || iterations == cfg.max_iters {
            record(&mut trace, runner, iterations);
            last_recorded = iterations;
        }
        if done {
            trace.converged_at = Some(iterations);
            break;
        }
        // early on a run can translate with a constant step, so reference
        // runs only look for a stall once the step is near round-off
        let stall_check = pr_stall
            || (cfg.stop_on_stall && step_inf <= ROUNDOFF_STEP * (1.0 + runner.y().amax()));
        if !stall_check {
            best_at = iterations;
        } else {
            let step = diff.norm();
            if step < best_step * (1.0 - 1e-9) {
                best_step = step;
                best_at = iterations;
            } else if iterations - best_at >= STALL_WINDOW {
                trace.stalled = true;
                break;
            }
        }
    }
    if last_recorded != iterations {
        record(&mut trace, runner, iterations);
    }
    Ok(SolveResult {
        x_final: runner.x().clone(),
        y_final: runner.y().clone(),
        dual_estimate: Some(runner.dual_estimate()),
        t_final: runner.t_estimate(),
        trace,
        iterations,
    })
}

/// Runs `cfg.variant` from `y0`. The split Bregman and primal-dual variants
/// start from the point matched to `y0` (see [`lbsb_start`] and
/// [`solve_chambolle_pock`]), so all variants share the same `y^0`.
pub fn solve(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    cfg.validate()?;
    check_dims(k, y0, "y0", k.cols())?;
    match cfg.variant {
        Variant::Lbsb => {
            let (z0, w0, x0) = lbsb_start(k, cfg.prox.gamma(), y0);
            solve_lbsb(k, cfg, &z0, &w0, &x0, reference)
        }
        Variant::ChambollePock => {
            let x0 = project_affine(y0, k);
            let w0 = (&x0 - y0) / cfg.prox.gamma();
            solve_chambolle_pock(k, cfg, &x0, &w0, reference)
        }
        _ => {
            let mut runner = Runner::plain(k, *cfg, y0.clone());
            run(&mut runner, reference)
        }
    }
}

/// Runs the solver, then measures a second run against a high-precision
/// continuation of itself as the reference fixed point.
pub fn solve_with_reference(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
) -> Result<(SolveResult, Reference)> {
    let reference = reference_fixed_point(k, cfg, y0)?;
    let result = solve(k, cfg, y0, Some(&reference))?;
    Ok((result, reference))
}

/// Same solver and start, `max(10·max_iters, 5·10⁴)` iterations at
/// `stop_tol = 1e-14`.
pub fn reference_fixed_point(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
) -> Result<Reference> {
    let r = solve(k, &cfg.reference_config(), y0, None)?;
    Ok(Reference::from_result(&r))
}

fn require(cfg: &SolverConfig, allowed: &[Variant], op: &str) -> Result<()> {
    if !allowed.contains(&cfg.variant) {
        return Err(Error::InvalidArgument(format!(
            "{op} cannot run variant {}",
            cfg.variant
        )));
    }
    Ok(())
}

pub fn solve_dr(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(cfg, &[Variant::Dr], "solve_dr")?;
    solve(k, cfg, y0, reference)
}

pub fn solve_dr_swapped(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(cfg, &[Variant::DrSwapped], "solve_dr_swapped")?;
    solve(k, cfg, y0, reference)
}

pub fn solve_dr_reg(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(cfg, &[Variant::DrReg], "solve_dr_reg")?;
    solve(k, cfg, y0, reference)
}

pub fn solve_gdr(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    y0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(
        cfg,
        &[Variant::Gdr, Variant::Pr, Variant::GdrReg, Variant::PrReg],
        "solve_gdr",
    )?;
    solve(k, cfg, y0, reference)
}

/// Split Bregman start matched to a Douglas-Rachford start `y0`:
/// `x0 = P(y0)`, `z0 = (AAᵀ)⁻¹(b − Ay0)/γ`; `w0` is not read by the
/// iteration and is returned as zero.
pub fn lbsb_start(k: &AffineConstraint, gamma: f64, y0: &Vector) -> (Vector, Vector, Vector) {
    let x0 = project_affine(y0, k);
    let z0 = k.gram_inv() * (k.b() - k.a() * y0) / gamma;
    (z0, Vector::zeros(y0.len()), x0)
}

/// Split Bregman iteration from `(z0, w0, x0)`; the trace reports
/// `y^k = x^{k−1} − γw^k` with `y^0 = x0 − γAᵀz0`.
pub fn solve_lbsb(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    z0: &Vector,
    w0: &Vector,
    x0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(cfg, &[Variant::Lbsb], "solve_lbsb")?;
    cfg.validate()?;
    check_dims(k, z0, "z0", k.rows())?;
    check_dims(k, w0, "w0", k.cols())?;
    check_dims(k, x0, "x0", k.cols())?;
    let y0 = x0 - cfg.prox.gamma() * (k.a().transpose() * z0);
    let mut runner = Runner {
        k,
        cfg: *cfg,
        state: State::Lbsb {
            x: x0.clone(),
            z: z0.clone(),
            w: w0.clone(),
            y: y0,
        },
    };
    run(&mut runner, reference)
}

/// Primal-dual iteration from `x0` (with `x^{−1} = x0`) and `w0`; the trace
/// reports `y^{k+1} = x^k − γw^{k+1}` with `y^0 = x0 − γw0`.
pub fn solve_chambolle_pock(
    k: &AffineConstraint,
    cfg: &SolverConfig,
    x0: &Vector,
    w0: &Vector,
    reference: Option<&Reference>,
) -> Result<SolveResult> {
    require(cfg, &[Variant::ChambollePock], "solve_chambolle_pock")?;
    cfg.validate()?;
    check_dims(k, x0, "x0", k.cols())?;
    check_dims(k, w0, "w0", k.cols())?;
    let y0 = x0 - cfg.prox.gamma() * w0;
    let mut runner = Runner {
        k,
        cfg: *cfg,
        state: State::ChambollePock {
            x: x0.clone(),
            x_prev: x0.clone(),
            w: w0.clone(),
            y: y0,
        },
    };
    run(&mut runner, reference)
}

/// One application of the variant's fixed-point map to `y`.
pub fn apply_operator(k: &AffineConstraint, cfg: &SolverConfig, y: &Vector) -> Result<Vector> {
    cfg.validate()?;
    check_dims(k, y, "y", k.cols())?;
    let mut plain_cfg = *cfg;
    // the split Bregman and primal-dual forms are the regularized and plain
    // Douglas-Rachford maps in the y variable
    plain_cfg.variant = match cfg.variant {
        Variant::Lbsb => Variant::DrReg,
        Variant::ChambollePock => Variant::Dr,
        v => v,
    };
    let mut runner = Runner::plain(k, plain_cfg, y.clone());
    runner.advance();
    Ok(runner.y().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn two_one() -> AffineConstraint {
        AffineConstraint::new(dmatrix![2.0, 1.0], dvector![2.0]).unwrap()
    }

    fn cfg(variant: Variant, gamma: f64, alpha: f64) -> SolverConfig {
        SolverConfig::new(variant, ProxParams::new(gamma, alpha).unwrap())
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{}\"", v.name()));
        }
        assert_eq!("DR_REG".parse::<Variant>().unwrap(), Variant::DrReg);
        assert_eq!("ADMM2_LBSB".parse::<Variant>().unwrap(), Variant::Lbsb);
        assert!("nope".parse::<Variant>().is_err());
    }

    #[test]
    fn lambda_is_forced_by_variant() {
        let p = ProxParams::unregularized(1.0).unwrap();
        assert_eq!(SolverConfig::new(Variant::Pr, p).with_lambda(0.5).lambda, 2.0);
        assert_eq!(SolverConfig::new(Variant::Dr, p).with_lambda(0.5).lambda, 1.0);
        assert_eq!(SolverConfig::new(Variant::Gdr, p).with_lambda(0.5).lambda, 0.5);
        assert!(SolverConfig::new(Variant::Gdr, p).with_lambda(2.5).validate().is_err());
        assert!(SolverConfig::new(Variant::Gdr, p).with_lambda(0.0).validate().is_err());
        assert!(SolverConfig::new(Variant::Lbsb, p).validate().is_err());
    }

    #[test]
    fn zero_rhs_stays_at_zero() {
        let k = AffineConstraint::new(dmatrix![2.0, 1.0, 0.5; 0.0, 1.0, -1.0], dvector![0.0, 0.0]).unwrap();
        let y0 = Vector::zeros(3);
        for v in Variant::ALL {
            let alpha = if v.uses_alpha() { 3.0 } else { f64::INFINITY };
            let c = cfg(v, 1.0, alpha);
            let r = solve(&k, &c, &y0, None).unwrap();
            assert_eq!(r.x_final, y0, "{v}");
            assert_eq!(r.trace.converged_at, Some(1), "{v}");
        }
    }

    #[test]
    fn dr_on_two_one_converges_to_sparse_solution() {
        let k = two_one();
        let c = cfg(Variant::Dr, 1.0, f64::INFINITY);
        let r = solve_dr(&k, &c, &Vector::zeros(2), None).unwrap();
        assert!(r.converged());
        assert!((&r.x_final - dvector![1.0, 0.0]).amax() < 1e-10);
        // y* = x* − γη with η = (1, 0.5)
        assert!((&r.y_final - dvector![0.0, -0.5]).amax() < 1e-10);
        let eta = r.dual_estimate.unwrap();
        assert!((eta - dvector![1.0, 0.5]).amax() < 1e-10);
        for f in &r.trace.feasibility {
            assert!(*f <= 1e-10 * 3.0);
        }
    }

    #[test]
    fn dr_rate_on_two_one_is_cosine_of_angle() {
        let k = two_one();
        let c = cfg(Variant::Dr, 1.0, f64::INFINITY);
        let (r, _) = solve_with_reference(&k, &c, &Vector::zeros(2)).unwrap();
        let rate = fit_asymptotic_slope(&r.trace, 20).unwrap();
        assert!((rate - 1.0 / 5f64.sqrt()).abs() < 1e-2, "rate {rate}");
    }

    #[test]
    fn swapped_dr_on_two_one() {
        let k = two_one();
        let c = cfg(Variant::DrSwapped, 1.0, f64::INFINITY);
        let (r, _) = solve_with_reference(&k, &c, &Vector::zeros(2)).unwrap();
        assert!((&r.x_final - dvector![1.0, 0.0]).amax() < 1e-10);
        let rate = fit_asymptotic_slope(&r.trace, 20).unwrap();
        assert!((rate - 1.0 / 5f64.sqrt()).abs() < 1e-2, "rate {rate}");
    }

    #[test]
    fn dr_reg_with_infinite_alpha_equals_dr() {
        let k = two_one();
        let y0 = dvector![0.3, -1.2];
        let a = solve(&k, &cfg(Variant::Dr, 0.7, f64::INFINITY).keeping_iterates().with_max_iters(50), &y0, None).unwrap();
        let b = solve(&k, &cfg(Variant::DrReg, 0.7, f64::INFINITY).keeping_iterates().with_max_iters(50), &y0, None).unwrap();
        assert_eq!(a.trace.iterates_y, b.trace.iterates_y);
    }

    #[test]
    fn gdr_with_unit_lambda_matches_dr() {
        let k = two_one();
        let y0 = dvector![0.3, -1.2];
        let a = solve(&k, &cfg(Variant::Dr, 0.7, f64::INFINITY).keeping_iterates().with_max_iters(60), &y0, None).unwrap();
        let b = solve(&k, &cfg(Variant::Gdr, 0.7, f64::INFINITY).keeping_iterates().with_max_iters(60), &y0, None).unwrap();
        assert_eq!(a.trace.len(), b.trace.len());
        for (u, v) in a.trace.iterates_y.iter().zip(&b.trace.iterates_y) {
            assert!((u - v).amax() < 1e-13);
        }
    }

    #[test]
    fn unregularized_pr_stalls_on_two_one() {
        let k = two_one();
        let r = solve_gdr(&k, &cfg(Variant::Pr, 1.0, f64::INFINITY), &Vector::zeros(2), None).unwrap();
        assert!(r.stalled());
        assert!(!r.converged());
        assert!(r.iterations < 100_000);
    }

    #[test]
    fn lbsb_keeps_x_feasible_but_not_t() {
        let k = two_one();
        let r = solve(&k, &cfg(Variant::Lbsb, 1.0, 10.0).with_max_iters(200), &Vector::zeros(2), None).unwrap();
        assert!(r.trace.feasibility.iter().all(|&f| f <= 1e-10));
        assert!(r.trace.aux_feasibility.iter().any(|&f| f > 1e-8));
        let t = r.t_final.unwrap();
        assert!((t - &r.x_final).amax() < 1e-6);
    }

    #[test]
    fn recording_respects_record_every() {
        let k = two_one();
        let c = cfg(Variant::Dr, 1.0, f64::INFINITY).with_record_every(5).with_max_iters(23).with_stop_tol(0.0);
        let r = solve(&k, &c, &Vector::zeros(2), None).unwrap();
        assert_eq!(r.trace.ks, vec![0, 5, 10, 15, 20, 23]);
        assert_eq!(r.iterations, 23);
        assert!(r.trace.iterates_y.is_empty());
    }

    #[test]
    fn dimension_errors() {
        let k = two_one();
        let c = cfg(Variant::Dr, 1.0, f64::INFINITY);
        assert!(solve(&k, &c, &Vector::zeros(3), None).is_err());
        assert!(solve_dr_reg(&k, &c, &Vector::zeros(2), None).is_err());
    }
}
