//! Fixed points of Douglas-Rachford: `y* = x* − γη` with
//! `η ∈ ∂‖x*‖₁ ∩ R(Aᵀ)`, and their interior/boundary classification.

use serde::{Deserialize, Serialize};

use super::SubspaceGeometry;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::operators::{project_affine, reflect_affine, AffineConstraint};
use crate::problem::{ProblemInstance, SupportInfo};

/// Relative tolerance (in units of `γ`) for `|R(y*)_j| = γ`.
pub const TAU_FACE: f64 = 1e-6;

/// Tolerance for the certificate checks on a converged fixed point.
const CERT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointKind {
    Interior,
    Boundary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointInfo {
    pub y_star: Vector,
    /// `η = (x* − y*)/γ`.
    pub eta: Vector,
    pub kind: FixedPointKind,
    /// Zero coordinates with `|R(y*)_j| ≥ γ(1 − τ_face)`.
    pub face_indices: Vec<usize>,
    /// Leading angle after removing the face rows from `B`, when defined.
    pub theta_bar1: Option<f64>,
}

/// Validates `y_star` as a fixed point for `x*` and classifies it.
pub fn compute_fixed_point_info(
    p: &ProblemInstance,
    s: &SupportInfo,
    gamma: f64,
    y_star: &Vector,
) -> Result<FixedPointInfo> {
    let x_star = p
        .x_star()
        .ok_or_else(|| Error::InvalidArgument("instance has no known solution".into()))?;
    let k = p.constraint();
    if y_star.len() != p.n() || s.n() != p.n() {
        return Err(Error::Dimension("fixed point and support must have length n".into()));
    }
    let scale = 1.0 + x_star.amax();
    let px = project_affine(y_star, k);
    let gap = (&px - x_star).amax();
    if gap > CERT_TOL * scale {
        return Err(Error::NotAFixedPoint(format!("‖P(y*) − x*‖∞ = {gap:.3e}")));
    }
    let eta = (x_star - y_star) / gamma;
    let off_range = (&eta - k.row_projector() * &eta).amax();
    if off_range > CERT_TOL * (1.0 + eta.amax()) / gamma.min(1.0) {
        return Err(Error::NotAFixedPoint(format!("η is {off_range:.3e} away from R(Aᵀ)")));
    }
    let signs = s.sign_pattern();
    for &i in s.support() {
        if (eta[i] - signs[i]).abs() > CERT_TOL * scale / gamma.min(1.0) {
            return Err(Error::NotAFixedPoint(format!(
                "η[{i}] = {} does not match the sign of x*",
                eta[i]
            )));
        }
    }
    for &j in s.zero_indices() {
        if eta[j].abs() > 1.0 + CERT_TOL * scale / gamma.min(1.0) {
            return Err(Error::NotAFixedPoint(format!("|η[{j}]| = {} > 1", eta[j].abs())));
        }
    }
    let r = reflect_affine(y_star, k);
    let face_indices: Vec<usize> = s
        .zero_indices()
        .iter()
        .copied()
        .filter(|&j| r[j].abs() >= gamma * (1.0 - TAU_FACE))
        .collect();
    let (kind, theta_bar1) = if face_indices.is_empty() {
        (FixedPointKind::Interior, None)
    } else {
        (FixedPointKind::Boundary, boundary_rate(s, k, &face_indices).ok())
    };
    Ok(FixedPointInfo {
        y_star: y_star.clone(),
        eta,
        kind,
        face_indices,
        theta_bar1,
    })
}

/// Leading angle `θ̄₁` between `N(A)` and `N(B̄)`, where `B̄` drops the face
/// rows from the zero-coordinate selector.
pub fn boundary_rate(s: &SupportInfo, k: &AffineConstraint, face_indices: &[usize]) -> Result<f64> {
    let theta1 = SubspaceGeometry::new(k.a(), s)?.theta1();
    let reduced = s.without_rows(face_indices)?;
    let g = match SubspaceGeometry::new(k.a(), &reduced) {
        Err(Error::SubspacesIntersect) => return Err(Error::NongenericFace),
        other => other?,
    };
    let theta_bar1 = g.theta1();
    // N(B̄) ⊇ N(B), so the leading angle can only shrink
    debug_assert!(theta_bar1 <= theta1 + 1e-12);
    Ok(theta_bar1)
}

/// Behaviour of the face coordinates along the tail of a run that converged
/// to a boundary fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCase {
    /// Every face coordinate stays inside `|R(y^k)_j| ≤ γ`: the interior
    /// linearization applies.
    Inside,
    /// The listed face coordinates stay strictly outside; the rate is
    /// governed by the selector with those rows removed.
    Outside(Vec<usize>),
    /// Some coordinate keeps crossing `|R(y^k)_j| = γ`; no prediction.
    Mixed,
}

/// Classifies a boundary run from the iterates of its tail.
pub fn classify_tail(
    k: &AffineConstraint,
    gamma: f64,
    face_indices: &[usize],
    tail: &[Vector],
) -> BoundaryCase {
    let mut outside = Vec::new();
    for &j in face_indices {
        let mut seen_in = false;
        let mut seen_out = false;
        for y in tail {
            let rj = reflect_affine(y, k)[j].abs();
            if rj > gamma {
                seen_out = true;
            } else {
                seen_in = true;
            }
        }
        match (seen_in, seen_out) {
            (true, true) => return BoundaryCase::Mixed,
            (false, true) => outside.push(j),
            _ => {}
        }
    }
    if outside.is_empty() {
        BoundaryCase::Inside
    } else {
        BoundaryCase::Outside(outside)
    }
}
