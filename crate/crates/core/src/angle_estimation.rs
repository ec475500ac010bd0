//! Matrix-free estimation of the leading angle `θ₁` between `N(A)` and
//! `N(B)` from the decay of alternating projections or of Douglas-Rachford
//! on the feasibility problem `find x ∈ N(A)∩N(B)`.
//!
//! Both iterations are linear, so they are run in renormalized form (the
//! log of each step's norm ratio is accumulated and the iterate rescaled to
//! unit length). This keeps the iterate far from underflow, so slow modes
//! from the next angles can be left to die out before the fit window.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};
use crate::operators::AffineConstraint;
use crate::problem::SupportInfo;
use crate::solvers::fit::line_fit;

/// Default iteration count.
pub const DEFAULT_ITERS: usize = 2000;

/// Fraction of the iterations used as the trailing fit window.
pub const WINDOW_FRACTION: f64 = 0.25;

/// A step that shrinks the iterate below this relative size is treated as
/// exact annihilation.
pub const ANNIHILATION: f64 = 1e2 * f64::EPSILON;

/// Log-amplification of stray fixed components tolerated between two
/// clean-up steps of the Douglas-Rachford form.
const CLEANUP_GROWTH: f64 = 13.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleMethod {
    /// `x^{k+1} = P_{N(A)} P_{N(B)} x^k`, decaying like `cos²θ₁`.
    AltProj,
    /// `y^{k+1} = ½[(2P_{N(A)} − I)(2P_{N(B)} − I) + I] y^k`, decaying like
    /// `cosθ₁`.
    DrFeas,
}

impl fmt::Display for AngleMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AngleMethod::AltProj => "altproj",
            AngleMethod::DrFeas => "dr",
        })
    }
}

impl FromStr for AngleMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "altproj" | "alt-proj" | "pocs" => Ok(AngleMethod::AltProj),
            "dr" | "dr-feas" => Ok(AngleMethod::DrFeas),
            _ => Err(Error::InvalidArgument(format!("unknown angle method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub cos_theta1: f64,
    pub method: AngleMethod,
    /// Number of steps in the fitted window.
    pub fit_window: usize,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    /// `log ‖x^k‖` of the unnormalized iteration, `k = 0..`. For the
    /// Douglas-Rachford form the tracked vector is `y^{k+1} − y^k` and the
    /// clean-up steps are not counted.
    pub log_norms: Vec<f64>,
}

impl AngleEstimate {
    pub fn theta1(&self) -> f64 {
        self.cos_theta1.clamp(0.0, 1.0).acos()
    }
}

/// Estimates `cos θ₁` from projector callables onto `N(A)` and `N(B)`.
///
/// Alternating projections start from `P_{N(A)} x0`, so that every iterate
/// lies in `N(A)` and `‖x^k‖ ≤ cos^{2k}θ₁ ‖x^0‖`. The Douglas-Rachford form
/// tracks the differences `y^{k+1} − y^k`, which removes the fixed component
/// in `R(Aᵀ)∩R(Bᵀ)` and decays at exactly `cosθ₁` per step.
pub fn estimate_angle(
    proj_na: &dyn Fn(&Vector) -> Vector,
    proj_nb: &dyn Fn(&Vector) -> Vector,
    x0: &Vector,
    iters: usize,
    method: AngleMethod,
) -> Result<AngleEstimate> {
    if iters < 4 {
        return Err(Error::InvalidArgument("need at least 4 iterations".into()));
    }
    let step = |v: &Vector| -> Vector {
        match method {
            AngleMethod::AltProj => proj_na(&proj_nb(v)),
            AngleMethod::DrFeas => {
                // ½[(2P_A − I)(2P_B − I) + I]v
                let rb = 2.0 * proj_nb(v) - v;
                let ra = 2.0 * proj_na(&rb) - &rb;
                0.5 * (ra + v)
            }
        }
    };
    let mut v = match method {
        AngleMethod::AltProj => proj_na(x0),
        AngleMethod::DrFeas => step(x0) - x0,
    };
    let mut norm = v.norm();
    if !norm.is_finite() {
        return Err(Error::InvalidArgument("non-finite starting point".into()));
    }
    let annihilated = |est: Vec<f64>| AngleEstimate {
        cos_theta1: 0.0,
        method,
        fit_window: 0,
        residual: 0.0,
        log_norms: est,
    };
    if norm <= ANNIHILATION * x0.norm() {
        return Ok(annihilated(vec![norm.ln()]));
    }
    let mut log_norms = Vec::with_capacity(iters + 1);
    log_norms.push(norm.ln());
    v /= norm;
    // Round-off keeps re-seeding the eigenvalue-1 space of the DR map, and
    // renormalization amplifies it by 1/ρ per step. Applying (T − I) from
    // time to time removes it again; that step is left out of the log.
    let mut growth = 0.0;
    for _ in 0..iters {
        if method == AngleMethod::DrFeas && growth > CLEANUP_GROWTH {
            let d = step(&v) - &v;
            let dn = d.norm();
            if dn > ANNIHILATION {
                v = d / dn;
            }
            growth = 0.0;
        }
        let next = step(&v);
        norm = next.norm();
        if norm <= ANNIHILATION {
            log_norms.push(f64::NEG_INFINITY);
            return Ok(annihilated(log_norms));
        }
        log_norms.push(log_norms.last().unwrap() + norm.ln());
        growth -= norm.ln();
        v = next / norm;
    }
    let window = ((iters as f64 * WINDOW_FRACTION) as usize).max(3);
    let start = log_norms.len() - window;
    let t: Vec<f64> = (start..log_norms.len()).map(|k| k as f64).collect();
    let (slope, residual) = line_fit(&t, &log_norms[start..]);
    if slope >= -1e-14 {
        return Err(Error::SubspacesIntersect);
    }
    let cos_theta1 = match method {
        AngleMethod::AltProj => (slope / 2.0).exp(),
        AngleMethod::DrFeas => slope.exp(),
    };
    Ok(AngleEstimate {
        cos_theta1,
        method,
        fit_window: window,
        residual,
        log_norms,
    })
}

/// Dense convenience wrapper: `P_{N(A)} = I − A⁺A`, `P_{N(B)}` zeroes the
/// coordinates outside the support.
pub fn estimate_angle_dense(
    a: &DenseMatrix,
    s: &SupportInfo,
    x0: &Vector,
    iters: usize,
    method: AngleMethod,
) -> Result<AngleEstimate> {
    if x0.len() != a.ncols() || s.n() != a.ncols() {
        return Err(Error::Dimension(format!(
            "A has {} columns, x0 has {}, support is for n = {}",
            a.ncols(),
            x0.len(),
            s.n()
        )));
    }
    let k = AffineConstraint::new(a.clone(), Vector::zeros(a.nrows()))?;
    let pinv = k.pinv().clone();
    let proj_na = move |v: &Vector| v - &pinv * (a * v);
    let keep: Vec<bool> = {
        let mut keep = vec![false; s.n()];
        for &i in s.support() {
            keep[i] = true;
        }
        keep
    };
    let proj_nb = move |v: &Vector| {
        Vector::from_iterator(v.len(), v.iter().zip(&keep).map(|(x, &k)| if k { *x } else { 0.0 }))
    };
    estimate_angle(&proj_na, &proj_nb, x0, iters, method)
}
