//! Dense symmetric kernel: eigendecomposition-based matrix functions,
//! Hadamard algebra and the spectral Sylvester solver.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::types::{SpdMatrix, SymMatrix};

/// Iteration budget handed to the symmetric eigensolver.
const EIG_MAX_SWEEPS: usize = 10_000;

/// Scalar function applied to the spectrum of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarFn {
    Exp,
    Log,
    Sqrt,
    InvSqrt,
    Power(f64),
}

impl ScalarFn {
    fn requires_positive_spectrum(self) -> bool {
        match self {
            ScalarFn::Exp => false,
            ScalarFn::Log | ScalarFn::Sqrt | ScalarFn::InvSqrt => true,
            ScalarFn::Power(p) => p.fract() != 0.0 || p < 0.0,
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            ScalarFn::Exp => x.exp(),
            ScalarFn::Log => x.ln(),
            ScalarFn::Sqrt => x.sqrt(),
            ScalarFn::InvSqrt => 1.0 / x.sqrt(),
            ScalarFn::Power(p) => x.powf(p),
        }
    }
}

/// Symmetric part (M + M^T) / 2.
pub(crate) fn sym_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigendecomposition of a symmetric matrix, eigenvalues unordered.
pub(crate) fn eigh(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIG_MAX_SWEEPS)
        .ok_or(GeomError::EigFailure)?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

pub(crate) fn eigenvalues(m: &DMatrix<f64>) -> Result<DVector<f64>> {
    Ok(eigh(m)?.0)
}

/// Q f(L) Q^T for M = Q L Q^T, symmetrized against roundoff.
pub(crate) fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let (vals, q) = eigh(m)?;
    let fl = DMatrix::from_diagonal(&vals.map(f));
    Ok(sym_part(&(&q * fl * q.transpose())))
}

/// Diagonal of `m` as a vector.
pub(crate) fn diag_vec(m: &DMatrix<f64>) -> DVector<f64> {
    m.diagonal()
}

/// Diagonal part of `m` as a diagonal matrix.
pub(crate) fn diag_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_diagonal(&m.diagonal())
}

/// Entrywise product on raw matrices.
pub(crate) fn hadamard_raw(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.component_mul(b)
}

/// Inverse of an SPD matrix through its eigendecomposition.
pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    spectral_map(m, |x| 1.0 / x)
}

/// Applies a scalar function to the spectrum: `Q f(L) Q^T`.
///
/// Functions that need a positive spectrum (log, sqrt, inverse sqrt,
/// non-integer or negative powers) reject matrices with an eigenvalue
/// at or below zero.
pub fn sym_fun(m: &SymMatrix, f: ScalarFn) -> Result<SymMatrix> {
    let (vals, q) = eigh(m.matrix())?;
    if f.requires_positive_spectrum() {
        let min = vals.min();
        if min <= 0.0 {
            return Err(GeomError::NonSpdInput { min_eig: min, max_eig: vals.max() });
        }
    }
    let fl = DMatrix::from_diagonal(&vals.map(|x| f.apply(x)));
    let out = sym_part(&(&q * fl * q.transpose()));
    if out.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    Ok(SymMatrix::from_symmetric_unchecked(out))
}

/// Entrywise (Hadamard) product of two symmetric matrices.
pub fn hadamard(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    if a.dim() != b.dim() {
        return Err(GeomError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(SymMatrix::from_symmetric_unchecked(hadamard_raw(a.matrix(), b.matrix())))
}

/// Hadamard product of an SPD matrix with its inverse, `S . S^{-1}`.
///
/// SPD by the Schur product theorem and invariant under `S -> D S D`
/// for positive diagonal `D`.
pub fn a_map(s: &SpdMatrix) -> Result<SpdMatrix> {
    let inv = spd_inverse(s.matrix())?;
    Ok(SpdMatrix::from_spd_unchecked(hadamard_raw(s.matrix(), &inv)))
}

/// Symmetric rank-two lift of a vector: `psi(mu)[i][j] = mu[i] + mu[j]`.
pub fn psi(mu: &DVector<f64>) -> SymMatrix {
    let n = mu.len();
    let m = DMatrix::from_fn(n, n, |i, j| mu[i] + mu[j]);
    SymMatrix::from_symmetric_unchecked(m)
}

/// Unique solution of `S X + X S = V` for SPD `S`, solved spectrally:
/// with `S = Q L Q^T`, `X = Q [ (Q^T V Q)_ij / (l_i + l_j) ] Q^T`.
pub fn sylvester_spd(s: &SpdMatrix, v: &SymMatrix) -> Result<SymMatrix> {
    if s.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch { expected: s.dim(), found: v.dim() });
    }
    let (vals, q) = eigh(s.matrix())?;
    let mut w = q.transpose() * v.matrix() * &q;
    for i in 0..w.nrows() {
        for j in 0..w.ncols() {
            w[(i, j)] /= vals[i] + vals[j];
        }
    }
    Ok(SymMatrix::from_symmetric_unchecked(sym_part(&(&q * w * q.transpose()))))
}
