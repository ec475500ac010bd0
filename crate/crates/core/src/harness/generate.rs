//! Seeded random basis pursuit instances with certified unique solutions.

use std::f64::consts::PI;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use super::certificate::{verify_uniqueness, Certificate};
use crate::error::{Error, Result};
use crate::linalg::{default_rank_tol, pseudoinverse, DenseMatrix, Vector};
use crate::operators::{AffineConstraint, ProxParams};
use crate::problem::{ProblemInstance, SupportInfo};
use crate::solvers::{solve, SolverConfig, Variant};

/// Resampling budget for an instance whose solution is not certified.
pub const MAX_ATTEMPTS: usize = 20;

/// Iteration budget of the run locating the ℓ¹ minimizer.
const BP_ITERS: usize = 200_000;

/// Nonzero entries of `x*` are resampled until `|x_i| ≥ MIN_MAGNITUDE`.
pub const MIN_MAGNITUDE: f64 = 0.1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Distribution {
    /// i.i.d. standard normal entries.
    #[default]
    Gaussian,
    /// Rows of the orthonormal DCT-II matrix. Without explicit `rows`, `m`
    /// distinct rows are drawn with the instance seed.
    Fourier {
        #[serde(default)]
        rows: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub problem: ProblemInstance,
    pub support: SupportInfo,
    pub certificate: Certificate,
    /// 1-based attempt that was certified.
    pub attempts: usize,
    /// The drawn `x*` was not the certified minimizer of `‖x‖₁` on
    /// `Ax = b` and has been replaced by that minimizer.
    pub replaced: bool,
}

/// Rows `rows` of the orthonormal `n × n` DCT-II matrix.
pub fn dct_rows(n: usize, rows: &[usize]) -> Result<DenseMatrix> {
    if let Some(&r) = rows.iter().find(|&&r| r >= n) {
        return Err(Error::InvalidArgument(format!("DCT row {r} out of range for n = {n}")));
    }
    let nf = n as f64;
    Ok(DenseMatrix::from_fn(rows.len(), n, |i, j| {
        let r = rows[i] as f64;
        let scale = if rows[i] == 0 { (1.0 / nf).sqrt() } else { (2.0 / nf).sqrt() };
        scale * (PI * r * (2.0 * j as f64 + 1.0) / (2.0 * nf)).cos()
    }))
}

fn nonzero_value(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = StandardNormal.sample(rng);
        if v.abs() >= MIN_MAGNITUDE {
            return v;
        }
    }
}

/// Draws `A` (`m × n`) and a `k`-sparse `x*`, resampling until the solution
/// is certified unique. When the drawn `x*` is not the unique ℓ¹ minimizer
/// for `b = Ax*`, the actual minimizer is certified instead and becomes the
/// instance's solution (`replaced`). Identical arguments give identical
/// instances.
pub fn generate_instance(
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
    distribution: &Distribution,
) -> Result<GeneratedInstance> {
    if !(k <= m && m <= n) || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need k ≤ m ≤ n and m > 0, got k = {k}, m = {m}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fourier = match distribution {
        Distribution::Gaussian => None,
        Distribution::Fourier { rows: Some(rows) } => {
            if rows.len() != m {
                return Err(Error::InvalidArgument(format!(
                    "{} DCT rows given for m = {m}",
                    rows.len()
                )));
            }
            Some(dct_rows(n, rows)?)
        }
        Distribution::Fourier { rows: None } => {
            let mut rows = index::sample(&mut rng, n, m).into_vec();
            rows.sort_unstable();
            Some(dct_rows(n, &rows)?)
        }
    };
    for attempt in 1..=MAX_ATTEMPTS {
        let a = match &fourier {
            Some(a) => a.clone(),
            None => DenseMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng)),
        };
        let mut x = Vector::zeros(n);
        for i in index::sample(&mut rng, n, k) {
            x[i] = nonzero_value(&mut rng);
        }
        let problem = match ProblemInstance::from_solution(a, x) {
            Ok(p) => p,
            // a rank-deficient draw
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        };
        let x = problem.x_star().expect("built from a solution").clone();
        let support = SupportInfo::from_vector(&x, 0.0);
        let certificate = verify_uniqueness(problem.a(), &support)?;
        if certificate.unique {
            return Ok(GeneratedInstance {
                problem,
                support,
                certificate,
                attempts: attempt,
                replaced: false,
            });
        }
        // b = Ax* usually has a different ℓ¹ minimizer when k is close to m
        let Some(x_bp) = basis_pursuit_solution(problem.constraint()) else {
            continue;
        };
        let support = SupportInfo::from_vector(&x_bp, 0.0);
        let certificate = verify_uniqueness(problem.a(), &support)?;
        if certificate.unique {
            return Ok(GeneratedInstance {
                problem: problem.with_solution(x_bp)?,
                support,
                certificate,
                attempts: attempt,
                replaced: true,
            });
        }
    }
    Err(Error::UniquenessNotCertified(MAX_ATTEMPTS))
}

/// Minimizer of `‖x‖₁` on `Ax = b` from a long Douglas-Rachford run: the
/// support is read off the soft-thresholding argument and the values are
/// re-solved on it by least squares.
fn basis_pursuit_solution(k: &AffineConstraint) -> Option<Vector> {
    let cfg = SolverConfig::new(Variant::Dr, ProxParams::unregularized(1.0).ok()?)
        .with_max_iters(BP_ITERS)
        .with_stop_tol(1e-14)
        .with_record_every(usize::MAX);
    let r = solve(k, &cfg, &Vector::zeros(k.cols()), None).ok()?;
    let w = 2.0 * &r.x_final - &r.y_final;
    let support: Vec<usize> = (0..w.len()).filter(|&j| w[j].abs() > 1.0).collect();
    if support.is_empty() || support.len() > k.rows() {
        return None;
    }
    let a_s = k.a().select_columns(&support);
    let x_s = pseudoinverse(&a_s, default_rank_tol(&a_s)) * k.b();
    let mut x = Vector::zeros(k.cols());
    for (i, &j) in support.iter().enumerate() {
        // signs must agree with the thresholding side
        if x_s[i] * w[j] <= 0.0 {
            return None;
        }
        x[j] = x_s[i];
    }
    (k.residual(&x) <= 1e-10 * (1.0 + k.b().norm())).then_some(x)
}

/// Gaussian start vector of norm `scale·√n` on average.
pub fn random_start(n: usize, seed: u64, scale: f64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Vector::from_fn(n, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_instance_shape_and_certificate() {
        let g = generate_instance(3, 40, 3, 1, &Distribution::Gaussian).unwrap();
        assert_eq!(g.problem.a().shape(), (3, 40));
        assert!(g.support.support().len() <= 3);
        assert!(g.certificate.unique);
        let x = g.problem.x_star().unwrap();
        if !g.replaced {
            assert!(g.support.support().iter().all(|&i| x[i].abs() >= MIN_MAGNITUDE));
        }
        assert!(g.problem.constraint().residual(x) < 1e-10);
        assert!(verify_uniqueness(g.problem.a(), &g.support).unwrap().unique);
    }

    #[test]
    fn well_determined_draws_keep_x_star() {
        let g = generate_instance(40, 200, 2, 5, &Distribution::Gaussian).unwrap();
        assert!(!g.replaced);
        assert_eq!(g.support.support().len(), 2);
    }

    #[test]
    fn zero_sparsity_gives_zero_rhs() {
        let g = generate_instance(4, 10, 0, 3, &Distribution::Gaussian).unwrap();
        assert_eq!(g.problem.b().amax(), 0.0);
        assert!(g.support.support().is_empty());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = generate_instance(5, 40, 3, 11, &Distribution::Gaussian).unwrap();
        let b = generate_instance(5, 40, 3, 11, &Distribution::Gaussian).unwrap();
        assert_eq!(a.problem.a(), b.problem.a());
        assert_eq!(a.problem.x_star(), b.problem.x_star());
        let c = generate_instance(5, 40, 3, 12, &Distribution::Gaussian).unwrap();
        assert_ne!(a.problem.a(), c.problem.a());
    }

    #[test]
    fn dct_rows_are_orthonormal() {
        let a = dct_rows(16, &[0, 3, 7, 15]).unwrap();
        let g = &a * a.transpose();
        assert!((g - DenseMatrix::identity(4, 4)).amax() < 1e-13);
        assert!(dct_rows(4, &[4]).is_err());
    }

    #[test]
    fn fourier_instances() {
        let d = Distribution::Fourier { rows: Some(vec![1, 2, 5, 9, 12, 20]) };
        let g = generate_instance(6, 32, 1, 0, &d).unwrap();
        assert_eq!(g.problem.a(), &dct_rows(32, &[1, 2, 5, 9, 12, 20]).unwrap());
        let r = generate_instance(6, 32, 1, 0, &Distribution::Fourier { rows: None }).unwrap();
        assert_eq!(r.problem.a().nrows(), 6);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(generate_instance(5, 4, 1, 0, &Distribution::Gaussian).is_err());
        assert!(generate_instance(3, 10, 4, 0, &Distribution::Gaussian).is_err());
    }

    #[test]
    fn uncertifiable_instances_are_reported() {
        // a single constant row: every 1-sparse x* ties with the others
        let d = Distribution::Fourier { rows: Some(vec![0]) };
        assert!(matches!(
            generate_instance(1, 4, 1, 0, &d),
            Err(Error::UniquenessNotCertified(20))
        ));
    }
}
