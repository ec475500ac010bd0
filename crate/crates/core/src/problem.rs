//! Basis pursuit instances and support bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};
use crate::operators::AffineConstraint;

/// `min ‖x‖₁ s.t. Ax = b`, optionally with a known minimizer.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    constraint: AffineConstraint,
    x_star: Option<Vector>,
}

impl ProblemInstance {
    pub fn new(a: DenseMatrix, b: Vector) -> Result<Self> {
        Ok(Self {
            constraint: AffineConstraint::new(a, b)?,
            x_star: None,
        })
    }

    /// Builds `b = A x*` from a known solution.
    pub fn from_solution(a: DenseMatrix, x_star: Vector) -> Result<Self> {
        if x_star.len() != a.ncols() {
            return Err(Error::Dimension(format!(
                "x* has length {} for {} columns",
                x_star.len(),
                a.ncols()
            )));
        }
        let b = &a * &x_star;
        let mut p = Self::new(a, b)?;
        p.x_star = Some(x_star);
        Ok(p)
    }

    /// Attaches a known solution after checking `A x* = b` to `1e-10(1+‖b‖)`.
    pub fn with_solution(mut self, x_star: Vector) -> Result<Self> {
        if x_star.len() != self.n() {
            return Err(Error::Dimension(format!(
                "x* has length {} for {} columns",
                x_star.len(),
                self.n()
            )));
        }
        let res = self.constraint.residual(&x_star);
        if res > 1e-10 * (1.0 + self.constraint.b().norm()) {
            return Err(Error::InvalidArgument(format!(
                "x* is not feasible (residual {res:.3e})"
            )));
        }
        self.x_star = Some(x_star);
        Ok(self)
    }

    pub fn constraint(&self) -> &AffineConstraint {
        &self.constraint
    }

    pub fn a(&self) -> &DenseMatrix {
        self.constraint.a()
    }

    pub fn b(&self) -> &Vector {
        self.constraint.b()
    }

    pub fn x_star(&self) -> Option<&Vector> {
        self.x_star.as_ref()
    }

    pub fn m(&self) -> usize {
        self.constraint.rows()
    }

    pub fn n(&self) -> usize {
        self.constraint.cols()
    }
}

/// Support of a solution and the selector `B` of its zero coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportInfo {
    n: usize,
    support: Vec<usize>,
    zero_indices: Vec<usize>,
    sign_pattern: Vec<f64>,
}

impl SupportInfo {
    /// Support `{i : |xᵢ| > tol}` of `x`.
    pub fn from_vector(x: &Vector, tol: f64) -> Self {
        let n = x.len();
        let support: Vec<usize> = (0..n).filter(|&i| x[i].abs() > tol).collect();
        let sign_pattern = (0..n)
            .map(|i| if x[i].abs() > tol { x[i].signum() } else { 0.0 })
            .collect();
        let zero_indices = (0..n).filter(|&i| x[i].abs() <= tol).collect();
        Self {
            n,
            support,
            zero_indices,
            sign_pattern,
        }
    }

    /// Support given by index list; signs default to `+1` on the support.
    pub fn from_indices(n: usize, support: &[usize]) -> Result<Self> {
        let mut s = support.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != support.len() {
            return Err(Error::InvalidArgument("duplicate support index".into()));
        }
        if let Some(&bad) = s.iter().find(|&&i| i >= n) {
            return Err(Error::InvalidArgument(format!(
                "support index {bad} out of range for n = {n}"
            )));
        }
        let mut sign_pattern = vec![0.0; n];
        for &i in &s {
            sign_pattern[i] = 1.0;
        }
        let zero_indices = (0..n).filter(|i| s.binary_search(i).is_err()).collect();
        Ok(Self {
            n,
            support: s,
            zero_indices,
            sign_pattern,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn zero_indices(&self) -> &[usize] {
        &self.zero_indices
    }

    /// Number of zero coordinates (rows of `B`).
    pub fn r(&self) -> usize {
        self.zero_indices.len()
    }

    pub fn sign_pattern(&self) -> Vector {
        Vector::from_column_slice(&self.sign_pattern)
    }

    /// `r × n` selector with rows `e_{i_j}ᵀ`.
    pub fn selector(&self) -> DenseMatrix {
        let mut b = DenseMatrix::zeros(self.r(), self.n);
        for (row, &j) in self.zero_indices.iter().enumerate() {
            b[(row, j)] = 1.0;
        }
        b
    }

    /// Same solution support but with the listed zero coordinates removed
    /// from the selector (they become free, like support coordinates).
    pub fn without_rows(&self, drop: &[usize]) -> Result<Self> {
        for j in drop {
            if !self.zero_indices.contains(j) {
                return Err(Error::InvalidArgument(format!(
                    "index {j} is not a zero coordinate"
                )));
            }
        }
        let mut support: Vec<usize> = self.support.iter().chain(drop).copied().collect();
        support.sort_unstable();
        support.dedup();
        let zero_indices = self
            .zero_indices
            .iter()
            .copied()
            .filter(|j| !drop.contains(j))
            .collect();
        Ok(Self {
            n: self.n,
            support,
            zero_indices,
            sign_pattern: self.sign_pattern.clone(),
        })
    }
}
