//! Affine-invariant geometry on the SPD cone: the two-parameter metric
//! family, exponential map, logarithm, distance, Levi-Civita connection
//! and sectional curvature.

use crate::error::{GeomError, Result};
use crate::matfun::{self, ScalarFn};
use crate::types::{SpdMatrix, SymMatrix};

/// Relative Gram-determinant floor below which a 2-plane is degenerate.
const PLANE_TOL: f64 = 1e-12;

/// Parameters (alpha, beta) of the metric family
/// `alpha tr(S^{-1} V S^{-1} W) + beta tr(S^{-1} V) tr(S^{-1} W)`.
///
/// Positive definiteness requires `alpha > 0` and `beta > -alpha/n`;
/// the dimension-dependent part is checked where a matrix is supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    alpha: f64,
    beta: f64,
}

impl MetricParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0) {
            return Err(GeomError::InvalidMetricParams { alpha, beta, dim: 0 });
        }
        Ok(Self { alpha, beta })
    }

    /// The classical choice (alpha, beta) = (1, 0).
    pub fn standard() -> Self {
        Self { alpha: 1.0, beta: 0.0 }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    /// Checks `beta > -alpha/n` for matrices of dimension `n`.
    pub fn validate_for(self, n: usize) -> Result<()> {
        if self.beta <= -self.alpha / n as f64 {
            return Err(GeomError::InvalidMetricParams {
                alpha: self.alpha,
                beta: self.beta,
                dim: n,
            });
        }
        Ok(())
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        Self::standard()
    }
}

fn check_dims(base: usize, others: &[usize]) -> Result<()> {
    for &d in others {
        if d != base {
            return Err(GeomError::DimensionMismatch { expected: base, found: d });
        }
    }
    Ok(())
}

/// Metric value `alpha tr(S^{-1} V S^{-1} W) + beta tr(S^{-1} V) tr(S^{-1} W)`.
pub fn ai_metric(s: &SpdMatrix, v: &SymMatrix, w: &SymMatrix, params: MetricParams) -> Result<f64> {
    check_dims(s.dim(), &[v.dim(), w.dim()])?;
    params.validate_for(s.dim())?;
    let inv = matfun::spd_inverse(s.matrix())?;
    let sv = &inv * v.matrix();
    let sw = &inv * w.matrix();
    Ok(params.alpha * (&sv * &sw).trace() + params.beta * sv.trace() * sw.trace())
}

/// Exponential map `S^{1/2} exp(S^{-1/2} V S^{-1/2}) S^{1/2}`.
///
/// Defined for every tangent vector; `t -> ai_exp(S, tV)` is the geodesic
/// through `S` with velocity `V`.
pub fn ai_exp(s: &SpdMatrix, v: &SymMatrix) -> Result<SpdMatrix> {
    check_dims(s.dim(), &[v.dim()])?;
    let half = matfun::spectral_map(s.matrix(), f64::sqrt)?;
    let ihalf = matfun::spectral_map(s.matrix(), |x| 1.0 / x.sqrt())?;
    let mid = matfun::sym_part(&(&ihalf * v.matrix() * &ihalf));
    let emid = matfun::spectral_map(&mid, f64::exp)?;
    let out = matfun::sym_part(&(&half * emid * half.transpose()));
    if out.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::NonFinite);
    }
    Ok(SpdMatrix::from_spd_unchecked(out))
}

/// Logarithm `S1^{1/2} log(S1^{-1/2} S2 S1^{-1/2}) S1^{1/2}`, the inverse
/// of [`ai_exp`] at `S1`.
pub fn ai_log(s1: &SpdMatrix, s2: &SpdMatrix) -> Result<SymMatrix> {
    check_dims(s1.dim(), &[s2.dim()])?;
    let half = matfun::spectral_map(s1.matrix(), f64::sqrt)?;
    let ihalf = matfun::spectral_map(s1.matrix(), |x| 1.0 / x.sqrt())?;
    let mid = matfun::sym_part(&(&ihalf * s2.matrix() * &ihalf));
    let lmid = sym_fun_log(&mid)?;
    Ok(SymMatrix::from_symmetric_unchecked(matfun::sym_part(&(&half * lmid * half.transpose()))))
}

fn sym_fun_log(mid: &nalgebra::DMatrix<f64>) -> Result<nalgebra::DMatrix<f64>> {
    let wrapped = SymMatrix::from_symmetric_unchecked(mid.clone());
    Ok(matfun::sym_fun(&wrapped, ScalarFn::Log)?.into_matrix())
}

/// Geodesic distance: the metric norm of `ai_log(s1, s2)` at `s1`.
pub fn ai_dist(s1: &SpdMatrix, s2: &SpdMatrix, params: MetricParams) -> Result<f64> {
    let l = ai_log(s1, s2)?;
    Ok(ai_metric(s1, &l, &l, params)?.max(0.0).sqrt())
}

/// Levi-Civita connection value `dW - (V S^{-1} W + W S^{-1} V) / 2`.
///
/// `dw` is the Euclidean directional derivative of the field `W` along
/// `V`, supplied by the caller (zero for a constant field).
pub fn ai_connection(
    s: &SpdMatrix,
    v: &SymMatrix,
    w: &SymMatrix,
    dw: &SymMatrix,
) -> Result<SymMatrix> {
    check_dims(s.dim(), &[v.dim(), w.dim(), dw.dim()])?;
    let inv = matfun::spd_inverse(s.matrix())?;
    let cross = v.matrix() * &inv * w.matrix();
    let correction = matfun::sym_part(&cross);
    Ok(SymMatrix::from_symmetric_unchecked(dw.matrix() - correction))
}

/// Sectional curvature of the plane spanned by `V` and `W` for the
/// standard metric:
/// `tr(S^{-1}V S^{-1}W S^{-1}(V S^{-1}W - W S^{-1}V)) / (2 G(V,V) G(W,W))`.
///
/// Always nonpositive; zero when `S^{-1}V` and `S^{-1}W` commute.
pub fn ai_curvature(s: &SpdMatrix, v: &SymMatrix, w: &SymMatrix) -> Result<f64> {
    check_dims(s.dim(), &[v.dim(), w.dim()])?;
    let params = MetricParams::standard();
    let gvv = ai_metric(s, v, v, params)?;
    let gww = ai_metric(s, w, w, params)?;
    let gvw = ai_metric(s, v, w, params)?;
    let gram = gvv * gww - gvw * gvw;
    if gram <= PLANE_TOL * gvv * gww {
        return Err(GeomError::DegeneratePlane { gram });
    }
    let inv = matfun::spd_inverse(s.matrix())?;
    let sv = &inv * v.matrix();
    let sw = &inv * w.matrix();
    let num = (&sv * &sw * &inv * (v.matrix() * &sw - w.matrix() * &sv)).trace();
    Ok(num / (2.0 * gvv * gww))
}
