//! Dense linear algebra kernel.
//!
//! Everything downstream (resolvents, iteration matrices, rate predictions)
//! consumes these routines. Matrices are `nalgebra` dense matrices; the
//! decompositions themselves come from `nalgebra` (SVD, symmetric eigen,
//! real Schur).

pub mod io;

use nalgebra::linalg::{Schur, SymmetricEigen};
use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Orthonormality tolerance for [`SubspaceBasis`] columns.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Default relative rank tolerance: `max(rows, cols) * eps`.
pub fn default_rank_tol(m: &DenseMatrix) -> f64 {
    m.nrows().max(m.ncols()).max(1) as f64 * f64::EPSILON
}

/// Orthonormal basis of a subspace of `R^ambient_dim`, stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: DenseMatrix,
}

impl SubspaceBasis {
    /// Wraps `vectors` after checking `‖VᵀV − I‖_max ≤ 1e-10`.
    pub fn new(vectors: DenseMatrix) -> Result<Self> {
        let gram = vectors.transpose() * &vectors;
        let k = vectors.ncols();
        let dev = (gram - DenseMatrix::identity(k, k)).amax();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::InvalidArgument(format!(
                "basis columns are not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: vectors.nrows(),
            vectors,
        })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: DenseMatrix::zeros(ambient_dim, 0),
        }
    }

    /// Span of the listed standard basis vectors `e_i`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let mut v = DenseMatrix::zeros(ambient_dim, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            v[(i, col)] = 1.0;
        }
        Self {
            ambient_dim,
            vectors: v,
        }
    }

    /// Orthonormal basis for the column span of `m`.
    pub fn span_of(m: &DenseMatrix, tol: f64) -> Self {
        let ambient_dim = m.nrows();
        if m.ncols() == 0 {
            return Self::empty(ambient_dim);
        }
        range_basis(&m.transpose(), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn vectors(&self) -> &DenseMatrix {
        &self.vectors
    }

    /// Orthogonal projector `V Vᵀ`.
    pub fn projector(&self) -> DenseMatrix {
        &self.vectors * self.vectors.transpose()
    }

    pub fn project(&self, x: &Vector) -> Vector {
        &self.vectors * (self.vectors.transpose() * x)
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Self {
                ambient_dim: self.ambient_dim,
                vectors: DenseMatrix::identity(self.ambient_dim, self.ambient_dim),
            };
        }
        nullspace_basis(&self.vectors.transpose(), default_rank_tol(&self.vectors))
    }

    /// Orthonormal basis of `span(self) + span(other)`.
    pub fn sum(&self, other: &Self) -> Self {
        let mut cols = DenseMatrix::zeros(self.ambient_dim, self.dim() + other.dim());
        cols.columns_mut(0, self.dim()).copy_from(&self.vectors);
        cols.columns_mut(self.dim(), other.dim())
            .copy_from(&other.vectors);
        Self::span_of(&cols, 1e-10)
    }

    /// Orthonormal basis of `span(self) ∩ span(other)`, computed as the
    /// complement of the sum of the two complements.
    pub fn intersection(&self, other: &Self) -> Self {
        self.complement().sum(&other.complement()).complement()
    }
}

/// Principal angles between two subspaces, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalAngles {
    pub angles: Vec<f64>,
    pub cosines: Vec<f64>,
}

impl PrincipalAngles {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Leading (smallest) angle, if any.
    pub fn first(&self) -> Option<f64> {
        self.angles.first().copied()
    }
}

/// Singular values (descending, length `cols`) and the full set of right
/// singular vectors as columns of a `cols × cols` orthogonal matrix.
///
/// Wide matrices are padded with zero rows so the SVD returns a complete
/// right basis.
fn full_right_svd(m: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return (Vec::new(), DenseMatrix::zeros(0, 0));
    }
    let padded = if rows < cols {
        let mut p = DenseMatrix::zeros(cols, cols);
        p.rows_mut(0, rows).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut sigma = Vec::with_capacity(cols);
    let mut v = DenseMatrix::zeros(cols, cols);
    for (k, &i) in order.iter().enumerate() {
        sigma.push(svd.singular_values[i]);
        v.set_column(k, &v_t.row(i).transpose());
    }
    (sigma, v)
}

fn numerical_rank(sigma: &[f64], tol: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax <= 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > tol * smax).count()
}

/// Numerical rank with relative tolerance `tol`.
pub fn rank(m: &DenseMatrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let mut sigma: Vec<f64> = sv.iter().copied().collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    numerical_rank(&sigma, tol)
}

/// Moore-Penrose pseudoinverse; singular values `≤ tol·σ_max` are dropped.
pub fn pseudoinverse(m: &DenseMatrix, tol: f64) -> DenseMatrix {
    let (rows, cols) = m.shape();
    if m.is_empty() {
        return DenseMatrix::zeros(cols, rows);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.max();
    let mut out = DenseMatrix::zeros(cols, rows);
    if smax <= 0.0 {
        return out;
    }
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > tol * smax {
            // out += v_i u_iᵀ / s
            out.ger(1.0 / s, &v_t.row(i).transpose(), &u.column(i), 1.0);
        }
    }
    out
}

/// Orthonormal basis of `N(M) = {x : Mx = 0}`.
pub fn nullspace_basis(m: &DenseMatrix, tol: f64) -> SubspaceBasis {
    let cols = m.ncols();
    let (sigma, v) = full_right_svd(m);
    let r = numerical_rank(&sigma, tol);
    SubspaceBasis {
        ambient_dim: cols,
        vectors: v.columns(r, cols - r).into_owned(),
    }
}

/// Orthonormal basis of the row space `R(Mᵀ)`.
pub fn range_basis(m: &DenseMatrix, tol: f64) -> SubspaceBasis {
    let cols = m.ncols();
    let (sigma, v) = full_right_svd(m);
    let r = numerical_rank(&sigma, tol);
    SubspaceBasis {
        ambient_dim: cols,
        vectors: v.columns(0, r).into_owned(),
    }
}

/// Principal angles between `span(u)` and `span(v)` from the SVD of `UᵀV`.
pub fn principal_angles(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<PrincipalAngles> {
    if u.ambient_dim != v.ambient_dim {
        return Err(Error::Dimension(format!(
            "subspaces live in R^{} and R^{}",
            u.ambient_dim, v.ambient_dim
        )));
    }
    if u.is_empty() || v.is_empty() {
        return Ok(PrincipalAngles {
            angles: Vec::new(),
            cosines: Vec::new(),
        });
    }
    let (small, large) = if u.dim() <= v.dim() { (u, v) } else { (v, u) };
    let cross = small.vectors.transpose() * &large.vectors;
    let mut cosines: Vec<f64> = cross
        .singular_values()
        .iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    cosines.sort_by(|a, b| b.total_cmp(a));
    let angles = cosines.iter().map(|c| c.acos()).collect();
    Ok(PrincipalAngles { angles, cosines })
}

/// `d = 1/λ_max(AAᵀ)`, the smallest eigenvalue of `(AAᵀ)⁻¹`.
pub fn smallest_eig_inverse_gram(a: &DenseMatrix) -> Result<f64> {
    if a.nrows() == 0 {
        return Err(Error::GramSingular);
    }
    let gram = a * a.transpose();
    let eig = SymmetricEigen::new(gram);
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    if lmax <= 0.0 || lmin <= default_rank_tol(a) * lmax {
        return Err(Error::GramSingular);
    }
    Ok(1.0 / lmax)
}

/// All eigenvalues of a square matrix (with multiplicity, unordered).
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex<f64>>> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Ok(Vec::new());
    }
    // QR sweeps can stall at a deflation threshold of exactly ε (seen near
    // defective eigenvalues); relax it before giving up.
    for scale in [1.0, 16.0, 256.0, 4096.0] {
        if let Some(schur) = Schur::try_new(m.clone(), scale * f64::EPSILON, 20_000) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::EigenNoConvergence)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DenseMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Largest singular value.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// `‖MMᵀ − MᵀM‖_max`.
pub fn normality_defect(m: &DenseMatrix) -> f64 {
    let mt = m.transpose();
    (m * &mt - &mt * m).amax()
}
