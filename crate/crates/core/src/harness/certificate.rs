//! Uniqueness certificates for basis pursuit solutions.
//!
//! `x*` with support `S` is the unique minimizer when `A_S` has full column
//! rank and some `η = Aᵀz` matches `sgn(x*)` on `S` with `|η_j| < 1` off it.
//! Writing `z = z₀ + Nw` with `z₀` the minimum-norm solution of
//! `A_Sᵀz = sgn` and `N` a basis of `N(A_Sᵀ)`, the best certificate
//! minimizes `‖A_offᵀ(z₀ + Nw)‖∞` over `w`. That is done by Newton's method
//! on a log-sum-exp smoothing with increasing sharpness.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{default_rank_tol, nullspace_basis, pseudoinverse, rank, DenseMatrix, Vector};
use crate::problem::SupportInfo;

/// Off-support values within this distance of 1 are inconclusive.
pub const TAU_CERT: f64 = 1e-6;

const BETAS: [f64; 9] = [1.0, 4.0, 16.0, 64.0, 256.0, 1e3, 1e4, 1e5, 1e7];
const NEWTON_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub unique: bool,
    /// The optimum landed within `TAU_CERT` of 1, so no decision is made.
    pub marginal: bool,
    /// Best `η ∈ R(Aᵀ)` found; empty when `A_S` is rank deficient.
    pub eta: Vec<f64>,
    /// `max_{j∉S} |η_j|`.
    pub off_support_max: f64,
}

/// `(1/β) log Σ_i (e^{βu_i} + e^{−βu_i})` with its gradient weights
/// `s_i = ∂/∂u_i` and curvature weights `p_i + q_i`.
fn smoothed_max(u: &Vector, beta: f64) -> (f64, Vector, Vector) {
    let top = u.amax();
    let mut z = 0.0;
    let mut ep = Vector::zeros(u.len());
    let mut em = Vector::zeros(u.len());
    for i in 0..u.len() {
        ep[i] = (beta * (u[i] - top)).exp();
        em[i] = (beta * (-u[i] - top)).exp();
        z += ep[i] + em[i];
    }
    let value = top + z.ln() / beta;
    let s = (&ep - &em) / z;
    let w = (ep + em) / z;
    (value, s, w)
}

fn minimize_off_support(u0: &Vector, g: &DenseMatrix) -> Vector {
    let d = g.ncols();
    let mut w = Vector::zeros(d);
    if d == 0 || u0.is_empty() {
        return w;
    }
    for beta in BETAS {
        for _ in 0..NEWTON_STEPS {
            let u = u0 + g * &w;
            let (f, s, c) = smoothed_max(&u, beta);
            let grad = g.transpose() * &s;
            // β Gᵀ(diag(c) − s sᵀ)G, with a small shift for the flat
            // directions of the max
            let mut h = g.transpose() * DenseMatrix::from_diagonal(&c) * g - &grad * grad.transpose();
            h *= beta;
            let shift = 1e-12 * (1.0 + h.diagonal().amax());
            for i in 0..d {
                h[(i, i)] += shift;
            }
            let Some(step) = h.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                break;
            };
            let decrement = -grad.dot(&step);
            if !(decrement > 1e-15 * (1.0 + f.abs())) {
                break;
            }
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-12 {
                let trial = &w + t * &step;
                let (ft, _, _) = smoothed_max(&(u0 + g * &trial), beta);
                if ft <= f - 0.25 * t * decrement {
                    w = trial;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
    }
    w
}

/// Checks uniqueness of the basis pursuit solution with sign pattern and
/// support `s`, returning the best certificate found.
pub fn verify_uniqueness(a: &DenseMatrix, s: &SupportInfo) -> Result<Certificate> {
    let (m, n) = a.shape();
    if s.n() != n {
        return Err(crate::Error::Dimension(format!(
            "support is for n = {} but A has {n} columns",
            s.n()
        )));
    }
    let k = s.support().len();
    if k == 0 {
        return Ok(Certificate {
            unique: true,
            marginal: false,
            eta: vec![0.0; n],
            off_support_max: 0.0,
        });
    }
    let a_s = a.select_columns(s.support());
    let tol = default_rank_tol(a);
    if k > m || rank(&a_s, tol) < k {
        return Ok(Certificate {
            unique: false,
            marginal: false,
            eta: Vec::new(),
            off_support_max: f64::INFINITY,
        });
    }
    let signs = s.sign_pattern().select_rows(s.support());
    let a_s_t = a_s.transpose();
    let z0 = pseudoinverse(&a_s_t, tol) * &signs;
    let nb = nullspace_basis(&a_s_t, tol);
    let a_off_t = a.select_columns(s.zero_indices()).transpose();
    let u0 = &a_off_t * &z0;
    let g = &a_off_t * nb.vectors();
    let w = minimize_off_support(&u0, &g);
    let z = z0 + nb.vectors() * w;
    let eta = a.transpose() * z;
    let off = s.zero_indices().iter().map(|&j| eta[j].abs()).fold(0.0, f64::max);
    let marginal = (off - 1.0).abs() <= TAU_CERT;
    Ok(Certificate {
        unique: off < 1.0 - TAU_CERT,
        marginal,
        eta: eta.iter().copied().collect(),
        off_support_max: off,
    })
}
