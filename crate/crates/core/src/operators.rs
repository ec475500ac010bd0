//! Resolvents and reflections for `‖x‖₁`, `‖x‖₁ + ‖x‖²/(2α)` and the
//! indicator of `{x : Ax = b}` (optionally with the same ℓ² term).

use crate::error::{Error, Result};
use crate::linalg::{default_rank_tol, pseudoinverse, rank, DenseMatrix, Vector};

/// The affine set `{x : Ax = b}` with `A⁺` and `(AAᵀ)⁻¹` cached.
#[derive(Debug, Clone)]
pub struct AffineConstraint {
    a: DenseMatrix,
    b: Vector,
    pinv: DenseMatrix,
    gram_inv: DenseMatrix,
}

impl AffineConstraint {
    /// Requires `A` to have full row rank.
    pub fn new(a: DenseMatrix, b: Vector) -> Result<Self> {
        let (m, n) = a.shape();
        if b.len() != m {
            return Err(Error::Dimension(format!(
                "A is {m}x{n} but b has length {}",
                b.len()
            )));
        }
        if m > n {
            return Err(Error::Dimension(format!("A is {m}x{n}; need m <= n")));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite entries".into()));
        }
        let tol = default_rank_tol(&a);
        let r = rank(&a, tol);
        if r < m {
            return Err(Error::RankDeficient { rank: r, rows: m });
        }
        let pinv = pseudoinverse(&a, tol);
        let gram_inv = pinv.transpose() * &pinv;
        let residual = (&a * &pinv - DenseMatrix::identity(m, m)).amax();
        if residual > 1e-10 {
            return Err(Error::RankDeficient { rank: r, rows: m });
        }
        Ok(Self { a, b, pinv, gram_inv })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn pinv(&self) -> &DenseMatrix {
        &self.pinv
    }

    /// `(AAᵀ)⁻¹`.
    pub fn gram_inv(&self) -> &DenseMatrix {
        &self.gram_inv
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// Same matrix, different right-hand side.
    pub fn with_rhs(&self, b: Vector) -> Result<Self> {
        if b.len() != self.rows() {
            return Err(Error::Dimension(format!(
                "rhs length {} for {} rows",
                b.len(),
                self.rows()
            )));
        }
        Ok(Self {
            b,
            ..self.clone()
        })
    }

    /// `‖Ax − b‖₂`.
    pub fn residual(&self, x: &Vector) -> f64 {
        (&self.a * x - &self.b).norm()
    }

    /// `A⁺A`, the projector onto `R(Aᵀ)`.
    pub fn row_projector(&self) -> DenseMatrix {
        &self.pinv * &self.a
    }

    /// `I − A⁺A`, the projector onto `N(A)`.
    pub fn null_projector(&self) -> DenseMatrix {
        let n = self.cols();
        DenseMatrix::identity(n, n) - self.row_projector()
    }
}

/// Step size `γ`, regularization weight `α` (possibly `+∞`) and the derived
/// `c = α/(α+γ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxParams {
    gamma: f64,
    alpha: f64,
    c: f64,
}

impl ProxParams {
    pub fn new(gamma: f64, alpha: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
        }
        if !(alpha > 0.0) || alpha.is_nan() {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        let c = if alpha.is_infinite() {
            1.0
        } else {
            alpha / (alpha + gamma)
        };
        Ok(Self { gamma, alpha, c })
    }

    /// Unregularized problem (`α = +∞`, `c = 1`).
    pub fn unregularized(gamma: f64) -> Result<Self> {
        Self::new(gamma, f64::INFINITY)
    }

    /// Chooses `γ = α(1−c)/c` so that `α/(α+γ) = c`.
    pub fn from_alpha_c(alpha: f64, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need finite alpha and c in (0,1), got alpha={alpha}, c={c}"
            )));
        }
        let mut p = Self::new(alpha * (1.0 - c) / c, alpha)?;
        p.c = c;
        Ok(p)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn is_regularized(&self) -> bool {
        self.alpha.is_finite()
    }
}

/// Componentwise `sgn(xᵢ)·max{|xᵢ| − γ, 0}`.
pub fn soft_threshold(x: &Vector, gamma: f64) -> Vector {
    x.map(|v| shrink(v, gamma))
}

#[inline]
pub(crate) fn shrink(v: f64, gamma: f64) -> f64 {
    if v > gamma {
        v - gamma
    } else if v < -gamma {
        v + gamma
    } else {
        0.0
    }
}

/// `P(x) = x + A⁺(b − Ax)`.
pub fn project_affine(x: &Vector, k: &AffineConstraint) -> Vector {
    x + &k.pinv * (&k.b - &k.a * x)
}

/// `R(x) = 2P(x) − x = x + 2A⁺(b − Ax)`.
pub fn reflect_affine(x: &Vector, k: &AffineConstraint) -> Vector {
    x + 2.0 * (&k.pinv * (&k.b - &k.a * x))
}

/// Resolvent of `γ(‖·‖₁ + ‖·‖²/(2α))`: `c·S_γ(x)`.
pub fn prox_l1_l2(x: &Vector, p: &ProxParams) -> Vector {
    let c = p.c;
    x.map(|v| c * shrink(v, p.gamma))
}

/// Resolvent of `γ(ι_{Ax=b} + ‖·‖²/(2α))`: `c·x + A⁺(b − c·Ax)`.
pub fn prox_affine_l2(x: &Vector, p: &ProxParams, k: &AffineConstraint) -> Vector {
    if p.c == 1.0 {
        return project_affine(x, k);
    }
    let cx = p.c * x;
    let corr = &k.pinv * (&k.b - &k.a * &cx);
    cx + corr
}

/// Resolvent of `(1/γ)∂f*` for `f = ‖·‖₁`: projection onto `[−1,1]ⁿ`.
pub fn project_box(x: &Vector) -> Vector {
    x.map(|v| v.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use proptest::prelude::*;

    fn two_one() -> AffineConstraint {
        AffineConstraint::new(dmatrix![2.0, 1.0], dvector![2.0]).unwrap()
    }

    fn coord() -> AffineConstraint {
        AffineConstraint::new(dmatrix![1.0, 0.0], dvector![1.0]).unwrap()
    }

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&dvector![2.0, -0.5, 1.0], 1.0), dvector![1.0, 0.0, 0.0]);
        let x = dvector![0.3, -4.0, 0.0];
        assert_eq!(soft_threshold(&x, 0.0), x);
        assert_eq!(soft_threshold(&dvector![-3.0], 1.0), dvector![-2.0]);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_affine(&dvector![5.0, 7.0], &coord()), dvector![1.0, 7.0]);
        let feasible = dvector![0.5, 1.0];
        assert!((project_affine(&feasible, &two_one()) - &feasible).amax() < 1e-15);
        let p = project_affine(&dvector![0.0, 0.0], &two_one());
        assert!((p - dvector![0.8, 0.4]).amax() < 1e-15);
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflect_affine(&dvector![5.0, 7.0], &coord()), dvector![-3.0, 7.0]);
        let feasible = dvector![0.5, 1.0];
        assert!((reflect_affine(&feasible, &two_one()) - &feasible).amax() < 1e-15);
    }

    #[test]
    fn prox_l1_l2_examples() {
        let x = dvector![2.0, -0.3, -1.7];
        let inf = ProxParams::unregularized(1.0).unwrap();
        assert_eq!(prox_l1_l2(&x, &inf), soft_threshold(&x, 1.0));
        let half = ProxParams::new(1.0, 1.0).unwrap();
        assert_eq!(half.c(), 0.5);
        assert_eq!(prox_l1_l2(&dvector![2.0], &half), dvector![0.5]);
        assert_eq!(prox_l1_l2(&dvector![0.5], &half), dvector![0.0]);
    }

    #[test]
    fn prox_affine_l2_examples() {
        let x = dvector![3.0, -1.0];
        let inf = ProxParams::unregularized(0.7).unwrap();
        assert_eq!(prox_affine_l2(&x, &inf, &two_one()), project_affine(&x, &two_one()));
        let p = ProxParams::new(1.0, 1.0).unwrap();
        let z = prox_affine_l2(&dvector![0.0, 0.0], &p, &two_one());
        assert!((z - dvector![0.8, 0.4]).amax() < 1e-15);
        let out = prox_affine_l2(&dvector![4.0, 4.0], &p, &coord());
        assert_eq!(out, dvector![1.0, 2.0]);
    }

    #[test]
    fn prox_params_validation() {
        assert!(ProxParams::new(0.0, 1.0).is_err());
        assert!(ProxParams::new(1.0, 0.0).is_err());
        assert!(ProxParams::new(1.0, f64::NAN).is_err());
        assert_eq!(ProxParams::unregularized(5.0).unwrap().c(), 1.0);
        let p = ProxParams::from_alpha_c(20.0, 0.75).unwrap();
        assert!((p.gamma() - 20.0 / 3.0).abs() < 1e-14);
        assert_eq!(p.c(), 0.75);
    }

    #[test]
    fn constraint_rejects_rank_deficiency() {
        let a = dmatrix![1.0, 2.0; 2.0, 4.0];
        assert!(matches!(
            AffineConstraint::new(a, dvector![1.0, 2.0]),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        ));
        assert!(AffineConstraint::new(dmatrix![1.0, 2.0], dvector![1.0, 2.0]).is_err());
    }

    // scalar minimizer of γ|z| + (γ/2α)z² + ½(z−x)² by grid refinement
    fn scalar_prox_oracle(x: f64, gamma: f64, alpha: f64) -> f64 {
        let obj = |z: f64| gamma * z.abs() + gamma / (2.0 * alpha) * z * z + 0.5 * (z - x).powi(2);
        let (mut lo, mut hi) = (-x.abs() - 1.0, x.abs() + 1.0);
        for _ in 0..60 {
            let step = (hi - lo) / 200.0;
            let best = (0..=200)
                .map(|i| lo + step * i as f64)
                .min_by(|a, b| obj(*a).total_cmp(&obj(*b)))
                .unwrap();
            lo = best - step;
            hi = best + step;
        }
        0.5 * (lo + hi)
    }

    proptest! {
        #[test]
        fn soft_threshold_firmly_nonexpansive(
            u in prop::collection::vec(-5.0..5.0f64, 6),
            v in prop::collection::vec(-5.0..5.0f64, 6),
            gamma in 0.0..3.0f64,
        ) {
            let (u, v) = (Vector::from_vec(u), Vector::from_vec(v));
            let su = soft_threshold(&u, gamma);
            let sv = soft_threshold(&v, gamma);
            let d = &su - &sv;
            prop_assert!(d.norm_squared() <= (&u - &v).dot(&d) + 1e-12);
        }

        #[test]
        fn projection_idempotent_and_reflection_involutive(
            x in prop::collection::vec(-5.0..5.0f64, 2),
        ) {
            let k = two_one();
            let x = Vector::from_vec(x);
            let p = project_affine(&x, &k);
            prop_assert!((project_affine(&p, &k) - &p).amax() < 1e-12);
            prop_assert!(k.residual(&p) < 1e-12);
            let r = reflect_affine(&x, &k);
            prop_assert!((reflect_affine(&r, &k) - &x).amax() < 1e-10);
            prop_assert!((project_affine(&r, &k) - &p).amax() < 1e-12);
        }

        #[test]
        fn prox_l1_l2_matches_scalar_minimizer(
            x in -4.0..4.0f64, gamma in 0.05..2.0f64, alpha in 0.1..50.0f64,
        ) {
            let p = ProxParams::new(gamma, alpha).unwrap();
            let got = prox_l1_l2(&dvector![x], &p)[0];
            let want = scalar_prox_oracle(x, gamma, alpha);
            // objective comparisons resolve the minimizer to about √ε
            prop_assert!((got - want).abs() < 1e-6, "got {got}, oracle {want}");
        }

        #[test]
        fn moreau_identity_for_l1(
            x in prop::collection::vec(-5.0..5.0f64, 5), gamma in 0.01..4.0f64,
        ) {
            // x = J_{γ∂f}(x) + γ·J_{(1/γ)∂f*}(x/γ), J of f* is the box projection
            let x = Vector::from_vec(x);
            let rebuilt = soft_threshold(&x, gamma) + gamma * project_box(&(&x / gamma));
            prop_assert!((rebuilt - &x).amax() <= 1e-10 * (1.0 + x.amax()));
        }

        #[test]
        fn prox_affine_l2_is_feasible(
            x in prop::collection::vec(-5.0..5.0f64, 2), c in 0.05..1.0f64,
        ) {
            let k = two_one();
            let p = ProxParams::from_alpha_c(3.0, c.min(0.999)).unwrap();
            let out = prox_affine_l2(&Vector::from_vec(x), &p, &k);
            prop_assert!(k.residual(&out) < 1e-10);
        }
    }
}
