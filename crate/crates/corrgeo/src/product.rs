//! Product geometries on the SPD cone split as scale times correlation,
//! comparison geodesics and curve statistics for interpolation studies.
//!
//! The split writes a covariance as `Delta C Delta` with `Delta` the
//! diagonal of standard deviations and `C` the correlation matrix. The
//! scale factor carries a power-mean interpolation, the correlation
//! factor the quotient geodesic; the correlation component of the curve
//! does not depend on the chosen power.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::matfun;
use crate::quotient::{self, FiberReport, LogConfig};
use crate::spd;
use crate::types::{CorrMatrix, DiagPos, HollowSym, SpdMatrix};

/// Scale and correlation factors of a covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdDecomposition {
    pub scale: DiagPos,
    pub corr: CorrMatrix,
}

impl SpdDecomposition {
    /// `Delta C Delta`.
    pub fn recompose(&self) -> SpdMatrix {
        let d = self.scale.entries();
        let c = self.corr.matrix();
        let m = DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)] * d[i] * d[j]);
        SpdMatrix::from_spd_unchecked(m)
    }
}

/// Splits a covariance into standard deviations and correlation.
pub fn decompose(s: &SpdMatrix) -> Result<SpdDecomposition> {
    let scale = DiagPos::from_positive_unchecked(matfun::diag_vec(s.matrix()).map(f64::sqrt));
    let corr = quotient::submersion(s);
    Ok(SpdDecomposition { scale, corr })
}

/// Entrywise power-mean interpolation of positive scales.
///
/// For `p != 0`: `(d1^p + t (d2^p - d1^p))^{1/p}`; for `p = 0` the
/// geometric limit `exp((1-t) log d1 + t log d2)`. Extrapolation that
/// drives the power-mean base nonpositive is reported, not clamped.
pub fn power_euclidean_geodesic(d1: &DiagPos, d2: &DiagPos, p: f64, t: f64) -> Result<DiagPos> {
    if d1.dim() != d2.dim() {
        return Err(GeomError::DimensionMismatch { expected: d1.dim(), found: d2.dim() });
    }
    let n = d1.dim();
    let mut out = DVector::zeros(n);
    for k in 0..n {
        let a = d1.entries()[k];
        let b = d2.entries()[k];
        out[k] = if p == 0.0 {
            ((1.0 - t) * a.ln() + t * b.ln()).exp()
        } else {
            let base = a.powf(p) + t * (b.powf(p) - a.powf(p));
            if base <= 0.0 {
                return Err(GeomError::NonPositiveEntry { index: k, value: base });
            }
            base.powf(1.0 / p)
        };
    }
    Ok(DiagPos::from_positive_unchecked(out))
}

/// Interpolation data between two covariances under a product metric,
/// with the fiber search done once.
#[derive(Debug, Clone)]
pub struct ProductCurve {
    start: SpdDecomposition,
    end_scale: DiagPos,
    tangent: HollowSym,
    report: FiberReport,
}

impl ProductCurve {
    pub fn new(s1: &SpdMatrix, s2: &SpdMatrix, cfg: &LogConfig) -> Result<Self> {
        if s1.dim() != s2.dim() {
            return Err(GeomError::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
        }
        let start = decompose(s1)?;
        let end = decompose(s2)?;
        let (tangent, report) = quotient::qa_log_detailed(&start.corr, &end.corr, cfg)?;
        if !report.converged {
            return Err(GeomError::NoConvergence {
                iterations: report.iterations,
                residual: report.horizontality_residual,
            });
        }
        Ok(Self { start, end_scale: end.scale, tangent, report })
    }

    pub fn report(&self) -> &FiberReport {
        &self.report
    }

    /// Point of the curve for scale power `p` at parameter `t`. The
    /// correlation factor is the same for every `p`.
    pub fn sample(&self, p: f64, t: f64) -> Result<SpdMatrix> {
        let scale = power_euclidean_geodesic(&self.start.scale, &self.end_scale, p, t)?;
        let stretched = HollowSym::from_symmetric_zeroing_diag(self.tangent.matrix() * t);
        let corr = quotient::qa_exp(&self.start.corr, &stretched)?;
        Ok(SpdDecomposition { scale, corr }.recompose())
    }
}

/// One-shot variant of [`ProductCurve`]: power-mean scales, quotient
/// geodesic correlations, recomposed at `t`.
pub fn product_geodesic(
    s1: &SpdMatrix,
    s2: &SpdMatrix,
    p: f64,
    t: f64,
    cfg: &LogConfig,
) -> Result<SpdMatrix> {
    ProductCurve::new(s1, s2, cfg)?.sample(p, t)
}

/// Reference interpolations the product curves are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicKind {
    /// Straight line `(1-t) S1 + t S2`; trace is affine in `t`.
    Euclidean,
    /// `exp((1-t) log S1 + t log S2)`; log-determinant is affine in `t`.
    LogEuclidean,
    /// Base geodesic `ai_exp(S1, t ai_log(S1, S2))`; log-determinant is
    /// affine in `t`.
    AffineInvariant,
}

/// Point of a reference interpolation at parameter `t`.
pub fn comparison_geodesic(
    s1: &SpdMatrix,
    s2: &SpdMatrix,
    kind: GeodesicKind,
    t: f64,
) -> Result<SpdMatrix> {
    if s1.dim() != s2.dim() {
        return Err(GeomError::DimensionMismatch { expected: s1.dim(), found: s2.dim() });
    }
    match kind {
        GeodesicKind::Euclidean => {
            let m = s1.matrix() * (1.0 - t) + s2.matrix() * t;
            SpdMatrix::new(m).map_err(|_| GeomError::NonSpdResult)
        }
        GeodesicKind::LogEuclidean => {
            let l1 = matfun::spectral_map(s1.matrix(), f64::ln)?;
            let l2 = matfun::spectral_map(s2.matrix(), f64::ln)?;
            let mix = l1 * (1.0 - t) + l2 * t;
            Ok(SpdMatrix::from_spd_unchecked(matfun::spectral_map(&mix, f64::exp)?))
        }
        GeodesicKind::AffineInvariant => {
            let l = spd::ai_log(s1, s2)?;
            let scaled = crate::types::SymMatrix::new(l.matrix() * t)?;
            spd::ai_exp(s1, &scaled)
        }
    }
}

/// Major and minor half-axes of the covariance ellipse of a 2x2 SPD
/// matrix, with the major-axis angle in [-pi/2, pi/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseAxes {
    pub axis1_len: f64,
    pub axis2_len: f64,
    pub angle: f64,
}

/// Scalar summaries of one point of an interpolation curve. The
/// correlation coefficient and ellipse axes are only defined for n = 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub rho: Option<f64>,
    pub det: f64,
    pub trace: f64,
    pub ellipse: Option<EllipseAxes>,
}

fn ellipse_axes(m: &DMatrix<f64>) -> Result<EllipseAxes> {
    let (vals, vecs) = matfun::eigh(m)?;
    let (hi, lo) = if vals[0] >= vals[1] { (0, 1) } else { (1, 0) };
    let mut angle = vecs[(1, hi)].atan2(vecs[(0, hi)]);
    // major-axis direction modulo pi
    if angle >= std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    } else if angle < -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    }
    Ok(EllipseAxes {
        axis1_len: vals[hi].max(0.0).sqrt(),
        axis2_len: vals[lo].max(0.0).sqrt(),
        angle,
    })
}

/// Summaries of a sampled curve of covariance matrices.
pub fn curve_statistics(samples: &[(f64, SpdMatrix)]) -> Result<Vec<CurveSample>> {
    let mut out = Vec::with_capacity(samples.len());
    for (t, s) in samples {
        let m = s.matrix();
        let (rho, ellipse) = if s.dim() == 2 {
            let rho = m[(0, 1)] / (m[(0, 0)] * m[(1, 1)]).sqrt();
            (Some(rho), Some(ellipse_axes(m)?))
        } else {
            (None, None)
        };
        out.push(CurveSample {
            t: *t,
            rho,
            det: m.determinant(),
            trace: m.trace(),
            ellipse,
        });
    }
    Ok(out)
}
