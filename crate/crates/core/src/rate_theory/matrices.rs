//! Local linearizations of the splitting iterations around an interior
//! fixed point, and their spectral rates.

use crate::error::Result;
use crate::linalg::{eigenvalues, DenseMatrix, SubspaceBasis};
use crate::operators::AffineConstraint;
use crate::problem::SupportInfo;

/// `B⁺B`: diagonal projector onto the zero coordinates.
pub fn selector_projector(s: &SupportInfo) -> DenseMatrix {
    let n = s.n();
    let mut p = DenseMatrix::zeros(n, n);
    for &j in s.zero_indices() {
        p[(j, j)] = 1.0;
    }
    p
}

/// `T = (I−B⁺B)(I−A⁺A) + B⁺BA⁺A`, the Douglas-Rachford linearization.
pub fn build_t(s: &SupportInfo, k: &AffineConstraint) -> DenseMatrix {
    let n = k.cols();
    let pa = k.row_projector();
    let pb = selector_projector(s);
    let id = DenseMatrix::identity(n, n);
    (&id - &pb) * (&id - &pa) + &pb * &pa
}

/// `T(c) = cT + (1−c)A⁺A`, the regularized Douglas-Rachford linearization.
pub fn build_t_c(s: &SupportInfo, k: &AffineConstraint, c: f64) -> DenseMatrix {
    let t = build_t(s, k);
    if c == 1.0 {
        return t;
    }
    c * t + (1.0 - c) * k.row_projector()
}

/// `T(c,λ) = (1−λ)I + λ[cT + (1−c)B⁺B]`, the linearization of the relaxed
/// iteration with the ℓ² term on the constraint side.
pub fn build_t_c_lambda(s: &SupportInfo, k: &AffineConstraint, c: f64, lambda: f64) -> DenseMatrix {
    let n = k.cols();
    let inner = c * build_t(s, k) + (1.0 - c) * selector_projector(s);
    (1.0 - lambda) * DenseMatrix::identity(n, n) + lambda * inner
}

/// `T_λ = (1−λ)I + λT`, the unregularized relaxed linearization.
pub fn build_t_relaxed(s: &SupportInfo, k: &AffineConstraint, lambda: f64) -> DenseMatrix {
    let n = k.cols();
    (1.0 - lambda) * DenseMatrix::identity(n, n) + lambda * build_t(s, k)
}

/// Largest eigenvalue modulus of `m` restricted to `span(q)`.
///
/// `span(q)` must be invariant under `m`; for every matrix built from `A⁺A`
/// and `B⁺B` the sum `N(A) + N(B)` qualifies, being the orthogonal
/// complement of the eigenvalue-1 space `R(Aᵀ)∩R(Bᵀ)`.
pub fn restricted_spectral_radius(m: &DenseMatrix, q: &SubspaceBasis) -> Result<f64> {
    if q.is_empty() {
        return Ok(0.0);
    }
    let v = q.vectors();
    let reduced = v.transpose() * m * v;
    Ok(eigenvalues(&reduced)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}
