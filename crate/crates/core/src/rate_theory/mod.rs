//! Rate predictions from principal angles.
//!
//! Around an interior fixed point the splitting iterations are locally
//! linear, with iteration matrices assembled from `A⁺A` and the zero-set
//! selector `B⁺B`. Their spectra are determined by the principal angles
//! between `N(A)` and `N(B)`, which gives closed-form rates; the same
//! matrices are also available explicitly for a spectral cross-check.

pub mod closed_form;
pub mod fixed_point;
pub mod matrices;
pub mod rip;
pub mod synthetic;

pub use closed_form::{
    best_rate_dr, best_rate_pr, c_bar, c_sharp, c_star, c_tilde, lambda_star, optimal_parameters,
    relaxed_norm, rho_at_lambda_star, rho_closed_form, rho_gdr_closed_form, OptimalParameters,
};
pub use fixed_point::{
    boundary_rate, classify_tail, compute_fixed_point_info, BoundaryCase, FixedPointInfo,
    FixedPointKind, TAU_FACE,
};
pub use matrices::{
    build_t, build_t_c, build_t_c_lambda, build_t_relaxed, restricted_spectral_radius,
    selector_projector,
};
pub use rip::{rip_bound, RipBound};
pub use synthetic::{SyntheticGeometry, SyntheticSpec};

pub use crate::problem::{ProblemInstance, SupportInfo};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    default_rank_tol, nullspace_basis, principal_angles, range_basis, DenseMatrix, PrincipalAngles,
    SubspaceBasis,
};
use crate::operators::{AffineConstraint, ProxParams};
use crate::solvers::Variant;

/// Leading angles below this are treated as a nontrivial intersection.
pub const MIN_ANGLE: f64 = 1e-7;

/// Orthonormal bases of `N(A)`, `R(Aᵀ)`, `N(B)`, `R(Bᵀ)` and the principal
/// angles between `N(A)` and `N(B)`.
#[derive(Debug, Clone)]
pub struct SubspaceGeometry {
    pub a0: SubspaceBasis,
    pub a1: SubspaceBasis,
    pub b0: SubspaceBasis,
    pub b1: SubspaceBasis,
    pub theta: PrincipalAngles,
    /// `dim R(Aᵀ)∩R(Bᵀ) = m + r − n`.
    pub dim_intersection_ranges: usize,
}

impl SubspaceGeometry {
    /// Fails with [`Error::SubspacesIntersect`] when `N(A)∩N(B) ≠ {0}`.
    pub fn new(a: &DenseMatrix, s: &SupportInfo) -> Result<Self> {
        let (m, n) = a.shape();
        if s.n() != n {
            return Err(Error::Dimension(format!(
                "support is for n = {} but A has {n} columns",
                s.n()
            )));
        }
        let tol = default_rank_tol(a);
        let a0 = nullspace_basis(a, tol);
        let a1 = range_basis(a, tol);
        if a1.dim() < m {
            return Err(Error::RankDeficient { rank: a1.dim(), rows: m });
        }
        let b0 = SubspaceBasis::coordinate(n, s.support());
        let b1 = SubspaceBasis::coordinate(n, s.zero_indices());
        if a0.dim() + b0.dim() > n {
            return Err(Error::SubspacesIntersect);
        }
        let theta = principal_angles(&a0, &b0)?;
        if theta.first().is_some_and(|t| t < MIN_ANGLE) {
            return Err(Error::SubspacesIntersect);
        }
        Ok(Self {
            a0,
            a1,
            b0,
            b1,
            theta,
            dim_intersection_ranges: m + s.r() - n,
        })
    }

    /// Leading angle `θ₁`; `π/2` when `N(B) = {0}` or `N(A) = {0}`.
    pub fn theta1(&self) -> f64 {
        self.theta.first().unwrap_or(std::f64::consts::FRAC_PI_2)
    }

    pub fn cos_theta1(&self) -> f64 {
        self.theta.cosines.first().copied().unwrap_or(0.0)
    }

    /// `N(A) + N(B)`, the orthogonal complement of `R(Aᵀ)∩R(Bᵀ)`.
    pub fn moving_subspace(&self) -> SubspaceBasis {
        self.a0.sum(&self.b0)
    }

    /// Orthonormal basis of `R(Aᵀ)∩R(Bᵀ)`, the eigenvalue-1 space of `T`.
    pub fn fixed_subspace(&self) -> SubspaceBasis {
        self.moving_subspace().complement()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSource {
    ClosedForm,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub rho: f64,
    pub theta1: f64,
    pub c: f64,
    pub lambda: f64,
    /// `c*`, `c♯`, `c̄`, `c̃` (only for `θ₁ ≤ π/4`).
    pub params: Option<OptimalParameters>,
    pub lambda_star: Option<f64>,
    pub source: RateSource,
}

impl RatePrediction {
    fn with_rho(theta1: f64, c: f64, lambda: f64, rho: f64, source: RateSource) -> Self {
        let params = optimal_parameters(theta1).ok();
        let lambda_star = params.and_then(|_| lambda_star(theta1, c).ok());
        Self {
            rho,
            theta1,
            c,
            lambda,
            params,
            lambda_star,
            source,
        }
    }

    /// `ρ(θ₁, c, λ)`; covers `cosθ₁` (`c = λ = 1`), the regularized rate
    /// (`λ = 1`) and the relaxed rates.
    pub fn closed_form(theta1: f64, c: f64, lambda: f64) -> Result<Self> {
        if c < 1.0 && theta1 > std::f64::consts::FRAC_PI_4 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "regularized predictions need θ₁ ≤ π/4, got {theta1}"
            )));
        }
        let rho = rho_gdr_closed_form(theta1, c, lambda)?;
        Ok(Self::with_rho(theta1, c, lambda, rho, RateSource::ClosedForm))
    }

    /// Largest eigenvalue modulus of the variant's linearization on
    /// `N(A) + N(B)`.
    pub fn spectral(
        variant: Variant,
        s: &SupportInfo,
        k: &AffineConstraint,
        prox: &ProxParams,
        lambda: f64,
    ) -> Result<Self> {
        let geom = SubspaceGeometry::new(k.a(), s)?;
        let m = iteration_matrix(variant, s, k, prox, lambda);
        let rho = restricted_spectral_radius(&m, &geom.moving_subspace())?;
        let lambda = variant.fixed_lambda().unwrap_or(lambda);
        Ok(Self::with_rho(geom.theta1(), prox.c(), lambda, rho, RateSource::Spectral))
    }
}

/// The linearization governing `variant` near an interior fixed point.
///
/// The swapped and primal-dual forms share the Douglas-Rachford rate and
/// the split Bregman form shares the regularized one.
pub fn iteration_matrix(
    variant: Variant,
    s: &SupportInfo,
    k: &AffineConstraint,
    prox: &ProxParams,
    lambda: f64,
) -> DenseMatrix {
    let c = if variant.uses_alpha() { prox.c() } else { 1.0 };
    match variant {
        Variant::Dr | Variant::DrSwapped | Variant::ChambollePock => build_t(s, k),
        Variant::DrReg | Variant::Lbsb => build_t_c(s, k, c),
        Variant::Gdr => build_t_relaxed(s, k, lambda),
        Variant::Pr => build_t_relaxed(s, k, 2.0),
        Variant::GdrReg => build_t_c_lambda(s, k, c, lambda),
        Variant::PrReg => build_t_c_lambda(s, k, c, 2.0),
    }
}

/// Closed-form prediction for `variant` at leading angle `theta1`.
pub fn predict_rate(variant: Variant, theta1: f64, prox: &ProxParams, lambda: f64) -> Result<RatePrediction> {
    let c = if variant.uses_alpha() { prox.c() } else { 1.0 };
    let lambda = variant.fixed_lambda().unwrap_or(lambda);
    RatePrediction::closed_form(theta1, c, lambda)
}
