//! Closed-form asymptotic rates and optimal parameters as functions of the
//! leading principal angle `θ`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on `θ ≤ π/4` for angles coming out of an SVD.
const ANGLE_SLACK: f64 = 1e-12;

fn check_angle(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!(
            "angle must lie in (0, π/2), got {theta}"
        )));
    }
    Ok(())
}

fn check_regularized_angle(theta: f64) -> Result<()> {
    check_angle(theta)?;
    if theta > FRAC_PI_4 + ANGLE_SLACK {
        return Err(Error::InvalidArgument(format!(
            "regularized rates need θ ≤ π/4, got {theta}"
        )));
    }
    Ok(())
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidArgument(format!("c must lie in (0, 1], got {c}")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must lie in (0, 2], got {lambda}"
        )));
    }
    Ok(())
}

/// `c* = 1/(cosθ + sinθ)²`: the regularization level with the best rate.
pub fn c_star(theta: f64) -> f64 {
    1.0 / (theta.cos() + theta.sin()).powi(2)
}

/// `c♯ = 1/(1 + 2cosθ)`: below it regularization is slower than `c = 1`.
pub fn c_sharp(theta: f64) -> f64 {
    1.0 / (1.0 + 2.0 * theta.cos())
}

/// `c̄ = 1/(2 − cos2θ)`: up to it the best relaxation is `λ = 2`.
pub fn c_bar(theta: f64) -> f64 {
    1.0 / (2.0 - (2.0 * theta).cos())
}

/// `c̃ = 1/(2 − cos²θ)`: below it Peaceman-Rachford beats Douglas-Rachford.
pub fn c_tilde(theta: f64) -> f64 {
    1.0 / (2.0 - theta.cos().powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalParameters {
    pub c_star: f64,
    pub c_sharp: f64,
    pub c_bar: f64,
    pub c_tilde: f64,
}

pub fn optimal_parameters(theta: f64) -> Result<OptimalParameters> {
    check_regularized_angle(theta)?;
    Ok(OptimalParameters {
        c_star: c_star(theta),
        c_sharp: c_sharp(theta),
        c_bar: c_bar(theta),
        c_tilde: c_tilde(theta),
    })
}

/// Rate of regularized Douglas-Rachford at level `c` for a single angle.
///
/// This is the spectral radius of one `2×2` angle block and holds for any
/// `θ ∈ (0, π/2)`. Only for `θ ≤ π/4` is the block of the leading angle the
/// slowest one, which [`super::RatePrediction::closed_form`] enforces.
pub fn rho_closed_form(theta: f64, c: f64) -> Result<f64> {
    check_angle(theta)?;
    check_c(c)?;
    if c == 1.0 {
        return Ok(theta.cos());
    }
    if c >= c_star(theta) {
        Ok(c.sqrt() * theta.cos())
    } else {
        let cos2 = (2.0 * theta).cos();
        let disc = (cos2 * cos2 * c * c - 2.0 * c + 1.0).max(0.0);
        Ok(0.5 * (c * cos2 + 1.0 + disc.sqrt()))
    }
}

/// Rate of the relaxed regularized iteration at `(c, λ)`.
///
/// `c = 1` is the unregularized relaxed rate `√(λ(2−λ)cos²θ + (1−λ)²)`
/// and is accepted for any `θ ∈ (0, π/2)`.
pub fn rho_gdr_closed_form(theta: f64, c: f64, lambda: f64) -> Result<f64> {
    check_angle(theta)?;
    check_c(c)?;
    check_lambda(lambda)?;
    if c < 1.0 {
        check_regularized_angle(theta)?;
    }
    let cos2 = (2.0 * theta).cos();
    if c >= c_star(theta) || c == 1.0 {
        let kappa = c * theta.sin().powi(2) * lambda * lambda - (1.0 - c * cos2) * lambda + 1.0;
        Ok(kappa.max(0.0).sqrt())
    } else {
        let disc = (cos2 * cos2 * c * c - 2.0 * c + 1.0).max(0.0);
        Ok(0.5 * (lambda * c * cos2 - lambda + 2.0 + lambda * disc.sqrt()))
    }
}

/// Norm of the unregularized relaxed matrix, `√(λ(2−λ)cos²θ + (1−λ)²)`.
pub fn relaxed_norm(theta: f64, lambda: f64) -> f64 {
    (lambda * (2.0 - lambda) * theta.cos().powi(2) + (1.0 - lambda).powi(2)).sqrt()
}

/// Best relaxation `λ*(θ, c)`.
pub fn lambda_star(theta: f64, c: f64) -> Result<f64> {
    check_regularized_angle(theta)?;
    check_c(c)?;
    let cos2 = (2.0 * theta).cos();
    if c <= c_bar(theta) {
        Ok(2.0)
    } else {
        Ok((1.0 / c - cos2) / (1.0 - cos2))
    }
}

/// `ρ(θ, c, λ*(θ, c))` from its three-branch closed form.
pub fn rho_at_lambda_star(theta: f64, c: f64) -> Result<f64> {
    check_regularized_angle(theta)?;
    check_c(c)?;
    let cos2 = (2.0 * theta).cos();
    if c <= c_star(theta) {
        let disc = (cos2 * cos2 * c * c - 2.0 * c + 1.0).max(0.0);
        Ok(c * cos2 + disc.sqrt())
    } else if c <= c_bar(theta) {
        Ok((2.0 * c - 1.0).max(0.0).sqrt())
    } else {
        let num = (2.0 * c - 1.0 - c * c * cos2 * cos2).max(0.0);
        Ok(num.sqrt() / (2.0 * theta.sin() * c.sqrt()))
    }
}

/// `1/(1 + tanθ)`, the rate of regularized Douglas-Rachford at `c*`.
pub fn best_rate_dr(theta: f64) -> f64 {
    1.0 / (1.0 + theta.tan())
}

/// `(1 − tanθ)/(1 + tanθ)`, the rate of regularized Peaceman-Rachford at `c*`.
pub fn best_rate_pr(theta: f64) -> f64 {
    let t = theta.tan();
    (1.0 - t) / (1.0 + t)
}
