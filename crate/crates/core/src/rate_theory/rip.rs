//! Brute-force restricted isometry constants and the resulting bound on
//! `cos θ₁`.

use nalgebra::linalg::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{smallest_eig_inverse_gram, DenseMatrix};

/// Largest number of supports [`rip_bound`] will enumerate.
pub const MAX_SUPPORTS: u128 = 1_000_000;

/// Column norms must be within this of 1.
const UNIT_COLUMN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RipBound {
    pub s: usize,
    pub delta_s: f64,
    /// `1/λ_max(AAᵀ)`.
    pub d: f64,
    /// `√(1 − d(1 − δ_s))` clamped to `[0, 1]`.
    pub bound: f64,
}

impl RipBound {
    /// Whether the bound carries information, i.e. `d(1 − δ_s) ≤ 1`.
    pub fn applicable(&self) -> bool {
        self.d * (1.0 - self.delta_s) <= 1.0
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `δ_s = max_S max(λ_max(A_SᵀA_S) − 1, 1 − λ_min(A_SᵀA_S))` over all
/// supports of size `s`, and the bound `cos θ₁ ≤ √(1 − d(1 − δ_s))`.
pub fn rip_bound(a: &DenseMatrix, s: usize) -> Result<RipBound> {
    let n = a.ncols();
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!(
            "sparsity must lie in 1..={n}, got {s}"
        )));
    }
    for (j, col) in a.column_iter().enumerate() {
        let norm = col.norm();
        if (norm - 1.0).abs() > UNIT_COLUMN_TOL {
            return Err(Error::InvalidArgument(format!(
                "column {j} has norm {norm}; columns must be normalized"
            )));
        }
    }
    let count = binomial(n, s);
    if count > MAX_SUPPORTS {
        return Err(Error::EnumerationTooLarge(count));
    }
    let gram = a.transpose() * a;
    let mut idx: Vec<usize> = (0..s).collect();
    let mut delta: f64 = 0.0;
    loop {
        let sub = DenseMatrix::from_fn(s, s, |i, j| gram[(idx[i], idx[j])]);
        let eig = SymmetricEigen::new(sub);
        let hi = eig.eigenvalues.max() - 1.0;
        let lo = 1.0 - eig.eigenvalues.min();
        delta = delta.max(hi).max(lo);
        if !next_combination(&mut idx, n) {
            break;
        }
    }
    let d = smallest_eig_inverse_gram(a)?;
    let bound = (1.0 - d * (1.0 - delta)).clamp(0.0, 1.0).sqrt();
    Ok(RipBound {
        s,
        delta_s: delta,
        d,
        bound,
    })
}
