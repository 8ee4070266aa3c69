//! Validated matrix and vector types for the correlation-matrix geometry.
//!
//! Construction is strict: inputs are symmetrized, checked for finiteness
//! and, where required, for positive definiteness, unit diagonal or zero
//! diagonal. Values produced internally by operations that guarantee the
//! invariants bypass the checks.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::matfun;

/// Relative asymmetry accepted before symmetrization, in the max norm.
pub const ASYMMETRY_TOL: f64 = 1e-10;
/// Smallest eigenvalue must exceed this fraction of the largest.
pub const SPD_EIG_FLOOR: f64 = 1e-12;
/// Tolerance on diagonal entries that must equal 1 or 0 at construction.
pub const DIAG_TOL: f64 = 1e-10;
/// Correlation entries closer than this to +-1 are rejected as rank deficient.
pub const ELLIPTOPE_BAND: f64 = 1e-12;

fn check_square_finite(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(GeomError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    Ok(m.nrows())
}

/// Symmetrizes after checking the relative asymmetry in the max norm.
fn symmetrized(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let scale = m.amax();
    let asym = (&m - m.transpose()).amax();
    if scale > 0.0 && asym > ASYMMETRY_TOL * scale {
        return Err(GeomError::NonSymmetric { asymmetry: asym / scale });
    }
    Ok(matfun::sym_part(&m))
}

/// Dense real symmetric matrix. The ambient tangent model.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    m: DMatrix<f64>,
}

impl SymMatrix {
    /// Validates and symmetrizes.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&m)?;
        Ok(Self { m: symmetrized(m)? })
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub(crate) fn from_symmetric_unchecked(m: DMatrix<f64>) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }
}

/// Symmetric positive definite matrix.
///
/// Positivity is checked at construction: the smallest eigenvalue must
/// exceed `SPD_EIG_FLOOR` times the largest.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    m: DMatrix<f64>,
}

impl SpdMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&m)?;
        let m = symmetrized(m)?;
        let eigs = matfun::eigenvalues(&m)?;
        let min = eigs.min();
        let max = eigs.max();
        if !(min > SPD_EIG_FLOOR * max && max > 0.0) {
            return Err(GeomError::NonSpdInput { min_eig: min, max_eig: max });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    /// Wraps a matrix whose positivity is guaranteed by construction,
    /// e.g. `Q exp(L) Q^T` with finite entries.
    pub(crate) fn from_spd_unchecked(m: DMatrix<f64>) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn as_sym(&self) -> SymMatrix {
        SymMatrix::from_symmetric_unchecked(self.m.clone())
    }
}

/// Symmetric matrix with exactly zero diagonal: the tangent model of the
/// open elliptope.
#[derive(Debug, Clone, PartialEq)]
pub struct HollowSym {
    m: DMatrix<f64>,
}

impl HollowSym {
    /// Validates, symmetrizes and pins the diagonal to exactly zero.
    ///
    /// Diagonal entries must already vanish to `DIAG_TOL` relative to the
    /// largest entry.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        check_square_finite(&m)?;
        let mut m = symmetrized(m)?;
        let scale = m.amax().max(1.0);
        for i in 0..m.nrows() {
            if m[(i, i)].abs() > DIAG_TOL * scale {
                return Err(GeomError::NonHollowDiagonal { index: i, value: m[(i, i)] });
            }
            m[(i, i)] = 0.0;
        }
        Ok(Self { m })
    }

    pub fn zeros(n: usize) -> Self {
        Self { m: DMatrix::zeros(n, n) }
    }

    /// Pins the diagonal of a symmetric matrix to zero without tolerance
    /// checks. Used for results that are hollow by construction up to
    /// roundoff.
    pub(crate) fn from_symmetric_zeroing_diag(mut m: DMatrix<f64>) -> Self {
        for i in 0..m.nrows() {
            m[(i, i)] = 0.0;
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn as_sym(&self) -> SymMatrix {
        SymMatrix::from_symmetric_unchecked(self.m.clone())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m.norm()
    }
}

/// Full-rank correlation matrix: SPD with unit diagonal, off-diagonal
/// entries strictly inside (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    m: DMatrix<f64>,
}

impl CorrMatrix {
    /// Validates an SPD matrix with unit diagonal. Off-diagonal entries
    /// within `ELLIPTOPE_BAND` of +-1 are rejected as rank deficient.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = check_square_finite(&m)?;
        let mut m = symmetrized(m)?;
        for i in 0..n {
            if (m[(i, i)] - 1.0).abs() > DIAG_TOL {
                return Err(GeomError::NotUnitDiagonal { index: i, value: m[(i, i)] });
            }
            m[(i, i)] = 1.0;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m[(i, j)].abs() >= 1.0 - ELLIPTOPE_BAND {
                    return Err(GeomError::OutsideOpenElliptope {
                        row: i,
                        col: j,
                        value: m[(i, j)],
                    });
                }
            }
        }
        let eigs = matfun::eigenvalues(&m)?;
        let min = eigs.min();
        let max = eigs.max();
        if !(min > SPD_EIG_FLOOR * max && max > 0.0) {
            return Err(GeomError::NonSpdInput { min_eig: min, max_eig: max });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    /// 2x2 correlation matrix with the given coefficient.
    pub fn from_rho(rho: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]))
    }

    /// Wraps a normalized SPD matrix whose unit diagonal is guaranteed by
    /// construction. The diagonal is pinned exactly.
    pub(crate) fn from_normalized_unchecked(mut m: DMatrix<f64>) -> Self {
        for i in 0..m.nrows() {
            m[(i, i)] = 1.0;
        }
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn as_spd(&self) -> SpdMatrix {
        SpdMatrix::from_spd_unchecked(self.m.clone())
    }
}

/// Positive diagonal scaling, stored as the vector of diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagPos {
    d: DVector<f64>,
}

impl DiagPos {
    pub fn new(d: DVector<f64>) -> Result<Self> {
        for (i, &x) in d.iter().enumerate() {
            if !(x.is_finite() && x > 0.0) {
                return Err(GeomError::NonPositiveEntry { index: i, value: x });
            }
        }
        Ok(Self { d })
    }

    pub fn ones(n: usize) -> Self {
        Self { d: DVector::from_element(n, 1.0) }
    }

    pub(crate) fn from_positive_unchecked(d: DVector<f64>) -> Self {
        Self { d }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn entries(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.d)
    }
}
