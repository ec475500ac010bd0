//! Matrices with prescribed principal angles between `N(A)` and `N(B)`.
//!
//! Each angle `θ_i` gets a coordinate pair `(e_i, e_{p+i})` with `e_i` in
//! the support and `a_i = cosθ_i e_i + sinθ_i e_{p+i}` in `N(A)`. Extra zero
//! coordinates either lie in `N(A)` or carry a row `e_jᵀ` of `A` (spanning
//! `R(Aᵀ)∩R(Bᵀ)`). The result is then disguised by orthogonal mixing inside
//! the support and inside the zero set, a random invertible left factor and
//! a column permutation; none of these change the angles.

use nalgebra::linalg::QR;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};
use crate::operators::AffineConstraint;
use crate::problem::SupportInfo;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Principal angles in radians, each in `(0, π/2)`.
    pub angles: Vec<f64>,
    /// Zero coordinates lying in `N(A)`.
    pub extra_null: usize,
    /// Dimension of `R(Aᵀ)∩R(Bᵀ)`.
    pub shared_rows: usize,
    /// Apply the orthogonal mixing, left factor and permutation.
    pub mix: bool,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticGeometry {
    pub a: DenseMatrix,
    pub support: SupportInfo,
    /// The prescribed angles, ascending.
    pub angles: Vec<f64>,
}

impl SyntheticGeometry {
    /// The constraint `Ax = 0`.
    pub fn constraint(&self) -> Result<AffineConstraint> {
        AffineConstraint::new(self.a.clone(), Vector::zeros(self.a.nrows()))
    }
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix).
pub(crate) fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    if n == 0 {
        return DenseMatrix::zeros(0, 0);
    }
    let qr = QR::new(gaussian(n, n, rng));
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

impl SyntheticSpec {
    pub fn build(&self) -> Result<SyntheticGeometry> {
        let p = self.angles.len();
        if p == 0 {
            return Err(Error::InvalidArgument("need at least one angle".into()));
        }
        if let Some(t) = self
            .angles
            .iter()
            .find(|t| !(**t > 0.0 && **t < std::f64::consts::FRAC_PI_2))
        {
            return Err(Error::InvalidArgument(format!("angle {t} outside (0, π/2)")));
        }
        let (q, s) = (self.extra_null, self.shared_rows);
        let n = 2 * p + q + s;
        let m = p + s;
        let mut a = DenseMatrix::zeros(m, n);
        for (i, t) in self.angles.iter().enumerate() {
            a[(i, i)] = -t.sin();
            a[(i, p + i)] = t.cos();
        }
        for j in 0..s {
            a[(p + j, 2 * p + q + j)] = 1.0;
        }
        let mut support: Vec<usize> = (0..p).collect();
        if self.mix {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let mut u = DenseMatrix::zeros(n, n);
            u.view_mut((0, 0), (p, p))
                .copy_from(&random_orthogonal(p, &mut rng));
            u.view_mut((p, p), (n - p, n - p))
                .copy_from(&random_orthogonal(n - p, &mut rng));
            // singular values of the left factor in [0.5, 2]
            let sv = Vector::from_fn(m, |_, _| rng.random_range(0.5..2.0));
            let left = random_orthogonal(m, &mut rng)
                * DenseMatrix::from_diagonal(&sv)
                * random_orthogonal(m, &mut rng);
            let mixed = left * a * u.transpose();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            a = DenseMatrix::zeros(m, n);
            for (j, &pj) in perm.iter().enumerate() {
                a.set_column(pj, &mixed.column(j));
            }
            support = (0..p).map(|i| perm[i]).collect();
        }
        let mut angles = self.angles.clone();
        angles.sort_by(f64::total_cmp);
        Ok(SyntheticGeometry {
            a,
            support: SupportInfo::from_indices(n, &support)?,
            angles,
        })
    }
}
