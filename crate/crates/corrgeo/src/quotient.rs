//! Quotient geometry of the open elliptope: the covariance-to-correlation
//! submersion, vertical and horizontal projections, horizontal lift, the
//! quotient metric, exponential map, fiber-optimization logarithm,
//! Levi-Civita connection and sectional curvature.
//!
//! The base geometry is the affine-invariant one on the SPD cone; positive
//! diagonal congruence acts by isometries and the quotient identifies with
//! full-rank correlation matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::matfun;
use crate::spd::{self, MetricParams};
use crate::types::{CorrMatrix, HollowSym, SpdMatrix, SymMatrix};

/// Normalized residual above which a vector fails the horizontality
/// certificate `Diag(S^{-1} W + W S^{-1}) = 0`.
pub const HORIZONTAL_TOL: f64 = 1e-10;

/// Tuning knobs for the fiber-optimization logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConfig {
    /// Iteration cap for the quasi-Newton search (per start).
    pub max_iters: usize,
    /// Convergence certificate: normalized horizontality residual of the
    /// base logarithm at the optimum.
    pub horizontality_tol: f64,
    /// Documented accuracy target for `exp(log)` round trips.
    pub roundtrip_tol: f64,
    /// Central-difference step for the objective gradient.
    pub fd_step: f64,
}

impl Default for LogConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            horizontality_tol: 1e-8,
            roundtrip_tol: 1e-7,
            fd_step: 1e-6,
        }
    }
}

/// Convergence report of the fiber search behind [`qa_log`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberReport {
    /// Quasi-Newton iterations spent (all starts combined).
    pub iterations: usize,
    /// Newton refinement steps on the horizontality system.
    pub polish_steps: usize,
    /// Number of restarts taken (0 or 1).
    pub restarts: usize,
    /// Final normalized horizontality residual.
    pub horizontality_residual: f64,
    /// Whether the residual reached the configured tolerance.
    pub converged: bool,
}

/// Fiber direction at a base point, stored through its coordinate vector:
/// the realization is `base . psi(mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerticalVector {
    base: SpdMatrix,
    mu: DVector<f64>,
}

impl VerticalVector {
    pub fn new(base: SpdMatrix, mu: DVector<f64>) -> Result<Self> {
        if base.dim() != mu.len() {
            return Err(GeomError::DimensionMismatch { expected: base.dim(), found: mu.len() });
        }
        Ok(Self { base, mu })
    }

    pub fn base(&self) -> &SpdMatrix {
        &self.base
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    /// The ambient tangent vector `base . psi(mu)`.
    pub fn realization(&self) -> SymMatrix {
        let p = matfun::psi(&self.mu);
        SymMatrix::from_symmetric_unchecked(matfun::hadamard_raw(self.base.matrix(), p.matrix()))
    }
}

/// Tangent vector lying in the horizontal space at its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizontalVector {
    base: SpdMatrix,
    value: SymMatrix,
}

impl HorizontalVector {
    /// Checks the horizontality certificate before wrapping.
    pub fn new(base: SpdMatrix, value: SymMatrix) -> Result<Self> {
        if base.dim() != value.dim() {
            return Err(GeomError::DimensionMismatch { expected: base.dim(), found: value.dim() });
        }
        let r = horizontality_residual(base.matrix(), value.matrix())?;
        if r > HORIZONTAL_TOL {
            return Err(GeomError::NotHorizontal { residual: r });
        }
        Ok(Self { base, value })
    }

    fn from_parts_unchecked(base: SpdMatrix, value: SymMatrix) -> Self {
        Self { base, value }
    }

    pub fn base(&self) -> &SpdMatrix {
        &self.base
    }

    pub fn value(&self) -> &SymMatrix {
        &self.value
    }

    pub fn into_value(self) -> SymMatrix {
        self.value
    }
}

/// Normalized size of `Diag(S^{-1} W + W S^{-1})`, the defect from the
/// horizontal space at `S`.
pub fn horizontality_residual(s: &DMatrix<f64>, w: &DMatrix<f64>) -> Result<f64> {
    let inv = matfun::spd_inverse(s)?;
    let m = &inv * w + w * &inv;
    let num = matfun::diag_vec(&m).amax();
    Ok(num / m.norm().max(1.0))
}

// ---------------------------------------------------------------------
// raw kernels shared by the public operations
// ---------------------------------------------------------------------

/// mu = (I + A(S))^{-1} Diag(S^{-1} V) 1, the fiber coordinate of the
/// vertical part of V at S.
fn mu_raw(s: &DMatrix<f64>, s_inv: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<DVector<f64>> {
    let n = s.nrows();
    let ia = DMatrix::identity(n, n) + matfun::hadamard_raw(s, s_inv);
    let rhs = matfun::diag_vec(&(s_inv * v));
    ia.lu().solve(&rhs).ok_or(GeomError::LinearSolveFailure)
}

fn psi_raw(mu: &DVector<f64>) -> DMatrix<f64> {
    let n = mu.len();
    DMatrix::from_fn(n, n, |i, j| mu[i] + mu[j])
}

fn ver_raw(s: &DMatrix<f64>, s_inv: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let mu = mu_raw(s, s_inv, v)?;
    let real = matfun::hadamard_raw(s, &psi_raw(&mu));
    Ok((mu, real))
}

fn hor_raw(s: &DMatrix<f64>, s_inv: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (_, vr) = ver_raw(s, s_inv, v)?;
    Ok(v - vr)
}

fn submersion_raw(s: &DMatrix<f64>) -> DMatrix<f64> {
    let d: Vec<f64> = matfun::diag_vec(s).iter().map(|x| 1.0 / x.sqrt()).collect();
    DMatrix::from_fn(s.nrows(), s.ncols(), |i, j| s[(i, j)] * d[i] * d[j])
}

/// Differential of the submersion at `s` applied to `v`.
fn dpi_raw(s: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let n = s.nrows();
    let dv = matfun::diag_part(v);
    let d2_inv: Vec<f64> = matfun::diag_vec(s).iter().map(|x| 1.0 / x).collect();
    let d2i = DMatrix::from_fn(n, n, |i, j| if i == j { d2_inv[i] } else { 0.0 });
    let inner = v - 0.5 * (&d2i * &dv * s + s * &dv * &d2i);
    let d_inv: Vec<f64> = d2_inv.iter().map(|x| x.sqrt()).collect();
    DMatrix::from_fn(n, n, |i, j| inner[(i, j)] * d_inv[i] * d_inv[j])
}

/// Horizontal lift at `s` of the hollow tangent `y`: `hor(Delta y Delta)`
/// with `Delta = Diag(s)^{1/2}`.
fn lift_raw(s: &DMatrix<f64>, s_inv: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = s.nrows();
    let d: Vec<f64> = matfun::diag_vec(s).iter().map(|x| x.sqrt()).collect();
    let scaled = DMatrix::from_fn(n, n, |i, j| y[(i, j)] * d[i] * d[j]);
    hor_raw(s, s_inv, &scaled)
}

// ---------------------------------------------------------------------
// projections, lift and metric
// ---------------------------------------------------------------------

/// Correlation matrix of a covariance: `Diag(S)^{-1/2} S Diag(S)^{-1/2}`.
///
/// Constant on fibers: `submersion(D S D) == submersion(S)` for positive
/// diagonal `D`, and fixes correlation matrices.
pub fn submersion(s: &SpdMatrix) -> CorrMatrix {
    CorrMatrix::from_normalized_unchecked(matfun::sym_part(&submersion_raw(s.matrix())))
}

/// Differential of [`submersion`] at `s`, landing in the hollow tangent
/// space of the correlation manifold. Its kernel is the vertical space.
pub fn d_submersion(s: &SpdMatrix, v: &SymMatrix) -> Result<HollowSym> {
    if s.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch { expected: s.dim(), found: v.dim() });
    }
    let out = matfun::sym_part(&dpi_raw(s.matrix(), v.matrix()));
    Ok(HollowSym::from_symmetric_zeroing_diag(out))
}

/// Component of `v` along the fiber through `s`.
pub fn vertical_proj(s: &SpdMatrix, v: &SymMatrix) -> Result<VerticalVector> {
    if s.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch { expected: s.dim(), found: v.dim() });
    }
    let inv = matfun::spd_inverse(s.matrix())?;
    let mu = mu_raw(s.matrix(), &inv, v.matrix())?;
    Ok(VerticalVector { base: s.clone(), mu })
}

/// Metric-orthogonal complement of the vertical part: `v - ver(v)`.
pub fn horizontal_proj(s: &SpdMatrix, v: &SymMatrix) -> Result<HorizontalVector> {
    if s.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch { expected: s.dim(), found: v.dim() });
    }
    let inv = matfun::spd_inverse(s.matrix())?;
    let h = hor_raw(s.matrix(), &inv, v.matrix())?;
    Ok(HorizontalVector::from_parts_unchecked(
        s.clone(),
        SymMatrix::from_symmetric_unchecked(h),
    ))
}

/// Unique horizontal vector at `s` mapped to `x` by the differential of
/// the submersion.
pub fn horizontal_lift(s: &SpdMatrix, x: &HollowSym) -> Result<HorizontalVector> {
    if s.dim() != x.dim() {
        return Err(GeomError::DimensionMismatch { expected: s.dim(), found: x.dim() });
    }
    let inv = matfun::spd_inverse(s.matrix())?;
    let h = lift_raw(s.matrix(), &inv, x.matrix())?;
    Ok(HorizontalVector::from_parts_unchecked(
        s.clone(),
        SymMatrix::from_symmetric_unchecked(h),
    ))
}

/// Quotient metric on hollow tangents at a correlation matrix.
///
/// Evaluates the closed form
/// `G(X, Y) - 2 mu_X^T [alpha (I + A(C)) + 2 beta 1 1^T] mu_Y`
/// with `mu_Z = (I + A(C))^{-1} Diag(C^{-1} Z) 1`, which agrees with the
/// base metric of the horizontal lifts at any point of the fiber.
pub fn qa_metric(
    c: &CorrMatrix,
    x: &HollowSym,
    y: &HollowSym,
    params: MetricParams,
) -> Result<f64> {
    let n = c.dim();
    if x.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, found: x.dim() });
    }
    if y.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, found: y.dim() });
    }
    params.validate_for(n)?;
    let inv = matfun::spd_inverse(c.matrix())?;
    let ia = DMatrix::identity(n, n) + matfun::hadamard_raw(c.matrix(), &inv);
    let lu = ia.clone().lu();
    let mu_x = lu
        .solve(&matfun::diag_vec(&(&inv * x.matrix())))
        .ok_or(GeomError::LinearSolveFailure)?;
    let mu_y = lu
        .solve(&matfun::diag_vec(&(&inv * y.matrix())))
        .ok_or(GeomError::LinearSolveFailure)?;

    let cx = &inv * x.matrix();
    let cy = &inv * y.matrix();
    let ambient = params.alpha() * (&cx * &cy).trace() + params.beta() * cx.trace() * cy.trace();
    let quad = params.alpha() * (mu_x.transpose() * &ia * &mu_y)[(0, 0)]
        + 2.0 * params.beta() * mu_x.sum() * mu_y.sum();
    Ok(ambient - 2.0 * quad)
}

// ---------------------------------------------------------------------
// geodesics
// ---------------------------------------------------------------------

/// Quotient exponential map: project the horizontal base geodesic,
/// `submersion(ai_exp(C, hor(X)))`. Defined for every hollow `X`.
pub fn qa_exp(c: &CorrMatrix, x: &HollowSym) -> Result<CorrMatrix> {
    if c.dim() != x.dim() {
        return Err(GeomError::DimensionMismatch { expected: c.dim(), found: x.dim() });
    }
    let base = c.as_spd();
    let h = horizontal_proj(&base, &x.as_sym())?;
    let end = spd::ai_exp(&base, h.value())?;
    Ok(submersion(&end))
}

/// Riemannian logarithm with its convergence report.
///
/// Searches the fiber above `c2` for the point nearest to `c1` in the
/// base geometry, parameterized as `exp(diag(d)) c2 exp(diag(d))` over
/// unconstrained `d`. The optimum is certified by horizontality of the
/// base logarithm; the report carries the final residual either way.
pub fn qa_log_detailed(
    c1: &CorrMatrix,
    c2: &CorrMatrix,
    cfg: &LogConfig,
) -> Result<(HollowSym, FiberReport)> {
    if c1.dim() != c2.dim() {
        return Err(GeomError::DimensionMismatch { expected: c1.dim(), found: c2.dim() });
    }
    let outcome = fiber::minimize(c1.matrix(), c2.matrix(), cfg)?;
    let sigma = fiber::scale_by(c2.matrix(), &outcome.d);
    let l = spd::ai_log(&c1.as_spd(), &SpdMatrix::from_spd_unchecked(sigma))?;
    let x = d_submersion(&c1.as_spd(), &l)?;
    let report = FiberReport {
        iterations: outcome.iterations,
        polish_steps: outcome.polish_steps,
        restarts: outcome.restarts,
        horizontality_residual: outcome.residual,
        converged: outcome.converged,
    };
    Ok((x, report))
}

/// Riemannian logarithm; errors with [`GeomError::NoConvergence`] when the
/// fiber search misses the horizontality tolerance.
pub fn qa_log(c1: &CorrMatrix, c2: &CorrMatrix, cfg: &LogConfig) -> Result<HollowSym> {
    let (x, report) = qa_log_detailed(c1, c2, cfg)?;
    if !report.converged {
        return Err(GeomError::NoConvergence {
            iterations: report.iterations,
            residual: report.horizontality_residual,
        });
    }
    Ok(x)
}

/// Geodesic distance: metric norm of the logarithm.
pub fn qa_dist(
    c1: &CorrMatrix,
    c2: &CorrMatrix,
    params: MetricParams,
    cfg: &LogConfig,
) -> Result<f64> {
    let x = qa_log(c1, c2, cfg)?;
    Ok(qa_metric(c1, &x, &x, params)?.max(0.0).sqrt())
}

// ---------------------------------------------------------------------
// connection and curvature
// ---------------------------------------------------------------------

/// Euclidean derivative at `c` of the horizontal-lift field of the
/// constant hollow field `y`, taken along the lift of `x`.
///
/// Obtained by differentiating `S -> hor_S(Diag(S)^{1/2} y Diag(S)^{1/2})`
/// through the product rule on the vertical projection; matches central
/// finite differences of the lift field to discretization accuracy.
pub fn lift_derivative(c: &CorrMatrix, x: &HollowSym, y: &HollowSym) -> Result<SymMatrix> {
    let n = c.dim();
    if x.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, found: x.dim() });
    }
    if y.dim() != n {
        return Err(GeomError::DimensionMismatch { expected: n, found: y.dim() });
    }
    let cm = c.matrix();
    let inv = matfun::spd_inverse(cm)?;
    Ok(SymMatrix::from_symmetric_unchecked(lift_derivative_raw(cm, &inv, x.matrix(), y.matrix())?))
}

fn lift_derivative_raw(
    cm: &DMatrix<f64>,
    inv: &DMatrix<f64>,
    x: &DMatrix<f64>,
    y: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let n = cm.nrows();
    let w = hor_raw(cm, inv, x)?;
    let ia = DMatrix::identity(n, n) + matfun::hadamard_raw(cm, inv);
    let lu = ia.lu();
    let mu_y = lu
        .solve(&matfun::diag_vec(&(inv * y)))
        .ok_or(GeomError::LinearSolveFailure)?;

    // derivative of Delta y Delta along w (Delta = I at a correlation matrix)
    let dw = matfun::diag_part(&w);
    let dv = 0.5 * (&dw * y + y * &dw);

    // derivative of A(S) = S . S^{-1} along w
    let da = matfun::hadamard_raw(&w, inv) - matfun::hadamard_raw(cm, &(inv * &w * inv));

    let vec = &da * &mu_y + matfun::diag_vec(&(inv * &w * inv * y))
        - matfun::diag_vec(&(inv * &dv));
    let correction = lu.solve(&vec).ok_or(GeomError::LinearSolveFailure)?;

    let out = &dv - matfun::hadamard_raw(&w, &psi_raw(&mu_y))
        + matfun::hadamard_raw(cm, &psi_raw(&correction));
    Ok(matfun::sym_part(&out))
}

/// Levi-Civita connection of the quotient metric in the hollow chart:
/// `dY + Gamma_C(X, Y)` with the Christoffel action
/// `Gamma_C(X, Y) = dpi_C( d(lift of Y)[X] - sym(X^# C^{-1} Y^#) )`.
///
/// `dy` is the Euclidean derivative of the field `Y` along `X` in the
/// chart (zero for a constant field). Along a geodesic the value vanishes
/// when `dy` is the curve acceleration and `x = y` its velocity.
pub fn qa_connection(
    c: &CorrMatrix,
    x: &HollowSym,
    y: &HollowSym,
    dy: &HollowSym,
) -> Result<HollowSym> {
    let n = c.dim();
    for d in [x.dim(), y.dim(), dy.dim()] {
        if d != n {
            return Err(GeomError::DimensionMismatch { expected: n, found: d });
        }
    }
    let cm = c.matrix();
    let inv = matfun::spd_inverse(cm)?;
    let wx = hor_raw(cm, &inv, x.matrix())?;
    let wy = hor_raw(cm, &inv, y.matrix())?;
    let dlift = lift_derivative_raw(cm, &inv, x.matrix(), y.matrix())?;
    let base_nabla = &dlift - matfun::sym_part(&(&wx * &inv * &wy));
    let gamma = matfun::sym_part(&dpi_raw(cm, &base_nabla));
    Ok(HollowSym::from_symmetric_zeroing_diag(dy.matrix() + gamma))
}

/// The two terms of the quotient sectional curvature: the base sectional
/// curvature of the lifted plane and the nonnegative fiber correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureParts {
    /// Sectional curvature of the lifted plane in the base geometry
    /// (nonpositive).
    pub base: f64,
    /// `(3/4) G(ver[X#, Y#], ver[X#, Y#]) / gram` (nonnegative).
    pub correction: f64,
}

impl CurvatureParts {
    pub fn total(self) -> f64 {
        self.base + self.correction
    }
}

/// Sectional curvature of the plane spanned by `x` and `y` at `c`,
/// split into base term and fiber correction. Requires `n >= 3`; the
/// elliptope is one-dimensional for `n = 2`.
pub fn qa_curvature_parts(c: &CorrMatrix, x: &HollowSym, y: &HollowSym) -> Result<CurvatureParts> {
    let n = c.dim();
    if n < 3 {
        return Err(GeomError::DimensionTooSmall { dim: n, required: 3 });
    }
    for d in [x.dim(), y.dim()] {
        if d != n {
            return Err(GeomError::DimensionMismatch { expected: n, found: d });
        }
    }
    let cm = c.matrix();
    let inv = matfun::spd_inverse(cm)?;
    let wx = hor_raw(cm, &inv, x.matrix())?;
    let wy = hor_raw(cm, &inv, y.matrix())?;

    let trace_pair = |a: &DMatrix<f64>, b: &DMatrix<f64>| ((&inv * a) * (&inv * b)).trace();
    let gxx = trace_pair(&wx, &wx);
    let gyy = trace_pair(&wy, &wy);
    let gxy = trace_pair(&wx, &wy);
    let gram = gxx * gyy - gxy * gxy;
    if gram <= 1e-12 * gxx * gyy {
        return Err(GeomError::DegeneratePlane { gram });
    }

    let sx = &inv * &wx;
    let sy = &inv * &wy;
    let base_num = (&sx * &sy * &inv * (&wx * &sy - &wy * &sx)).trace();
    let base = 0.5 * base_num / gram;

    let bracket = lift_derivative_raw(cm, &inv, x.matrix(), y.matrix())?
        - lift_derivative_raw(cm, &inv, y.matrix(), x.matrix())?;
    let (_, ver_bracket) = ver_raw(cm, &inv, &bracket)?;
    let correction = 0.75 * trace_pair(&ver_bracket, &ver_bracket) / gram;

    Ok(CurvatureParts { base, correction })
}

/// Sectional curvature of the quotient metric at `c`.
pub fn qa_curvature(c: &CorrMatrix, x: &HollowSym, y: &HollowSym) -> Result<f64> {
    Ok(qa_curvature_parts(c, x, y)?.total())
}

// ---------------------------------------------------------------------
// fiber search
// ---------------------------------------------------------------------

mod fiber {
    //! Quasi-Newton search over the fiber above the target correlation
    //! matrix, followed by a Newton refinement of the horizontality
    //! system. Gradients of the squared-distance objective use central
    //! finite differences.

    use super::*;

    pub(super) struct Outcome {
        pub d: DVector<f64>,
        pub iterations: usize,
        pub polish_steps: usize,
        pub restarts: usize,
        pub residual: f64,
        pub converged: bool,
    }

    /// `exp(diag(d)) m exp(diag(d))` without forming the diagonal factor.
    pub(super) fn scale_by(m: &DMatrix<f64>, d: &DVector<f64>) -> DMatrix<f64> {
        let e: Vec<f64> = d.iter().map(|x| x.exp()).collect();
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * e[i] * e[j])
    }

    struct Problem {
        c2: DMatrix<f64>,
        c1_half: DMatrix<f64>,
        c1_ihalf: DMatrix<f64>,
        c1_inv: DMatrix<f64>,
    }

    impl Problem {
        fn new(c1: &DMatrix<f64>, c2: &DMatrix<f64>) -> Result<Self> {
            Ok(Self {
                c2: c2.clone(),
                c1_half: matfun::spectral_map(c1, f64::sqrt)?,
                c1_ihalf: matfun::spectral_map(c1, |x| 1.0 / x.sqrt())?,
                c1_inv: matfun::spd_inverse(c1)?,
            })
        }

        /// Squared base distance from c1 to the fiber point at `d`.
        fn objective(&self, d: &DVector<f64>) -> Result<f64> {
            let sigma = scale_by(&self.c2, d);
            let mid = matfun::sym_part(&(&self.c1_ihalf * sigma * &self.c1_ihalf));
            let eigs = matfun::eigenvalues(&mid)?;
            Ok(eigs.iter().map(|x| x.ln().powi(2)).sum())
        }

        fn gradient(&self, d: &DVector<f64>, step: f64) -> Result<DVector<f64>> {
            let n = d.len();
            let mut g = DVector::zeros(n);
            let mut probe = d.clone();
            for k in 0..n {
                probe[k] = d[k] + step;
                let fp = self.objective(&probe)?;
                probe[k] = d[k] - step;
                let fm = self.objective(&probe)?;
                probe[k] = d[k];
                g[k] = (fp - fm) / (2.0 * step);
            }
            Ok(g)
        }

        /// Base logarithm from c1 to the fiber point at `d`.
        fn base_log(&self, d: &DVector<f64>) -> Result<DMatrix<f64>> {
            let sigma = scale_by(&self.c2, d);
            let mid = matfun::sym_part(&(&self.c1_ihalf * sigma * &self.c1_ihalf));
            let lmid = matfun::spectral_map(&mid, f64::ln)?;
            Ok(matfun::sym_part(&(&self.c1_half * lmid * &self.c1_half)))
        }

        /// Diagonal of `C1^{-1} L + L C1^{-1}`: the horizontality defect,
        /// which vanishes exactly at the optimum.
        fn certificate(&self, d: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
            let l = self.base_log(d)?;
            let m = &self.c1_inv * &l + &l * &self.c1_inv;
            let defect = matfun::diag_vec(&m);
            Ok((defect, m.norm()))
        }

        fn residual(&self, d: &DVector<f64>) -> Result<f64> {
            let (defect, scale) = self.certificate(d)?;
            Ok(defect.amax() / scale.max(1.0))
        }
    }

    pub(super) fn minimize(
        c1: &DMatrix<f64>,
        c2: &DMatrix<f64>,
        cfg: &LogConfig,
    ) -> Result<Outcome> {
        let problem = Problem::new(c1, c2)?;
        let n = c1.nrows();

        let first = run_single(&problem, DVector::zeros(n), cfg)?;
        if first.converged {
            return Ok(first);
        }

        // single restart from a diagonal scaling heuristic
        let ratio = matfun::diag_vec(&(&problem.c1_inv * c2));
        let d0 = ratio.map(|x| -0.5 * x.max(1e-8).ln());
        let mut second = run_single(&problem, d0, cfg)?;
        second.restarts = 1;
        second.iterations += first.iterations;
        second.polish_steps += first.polish_steps;
        if second.converged || second.residual <= first.residual {
            Ok(second)
        } else {
            Ok(Outcome { restarts: 1, iterations: second.iterations, ..first })
        }
    }

    fn run_single(problem: &Problem, start: DVector<f64>, cfg: &LogConfig) -> Result<Outcome> {
        let n = start.len();
        let mut d = start;
        let mut hess_inv = DMatrix::<f64>::identity(n, n);
        let mut grad = problem.gradient(&d, cfg.fd_step)?;
        let mut fval = problem.objective(&d)?;
        let mut iterations = 0;

        for _ in 0..cfg.max_iters {
            if problem.residual(&d)? <= cfg.horizontality_tol {
                break;
            }
            iterations += 1;

            let mut dir = -(&hess_inv * &grad);
            let mut slope = grad.dot(&dir);
            if slope >= 0.0 {
                hess_inv = DMatrix::identity(n, n);
                dir = -grad.clone();
                slope = grad.dot(&dir);
            }

            // Armijo backtracking
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..50 {
                let cand = &d + &dir * step;
                let fc = problem.objective(&cand)?;
                if fc <= fval + 1e-4 * step * slope {
                    accepted = Some((cand, fc));
                    break;
                }
                step *= 0.5;
            }
            let Some((d_next, f_next)) = accepted else {
                break; // stalled on function-value noise
            };

            let g_next = problem.gradient(&d_next, cfg.fd_step)?;
            let s = &d_next - &d;
            let y = &g_next - &grad;
            let sy = s.dot(&y);
            if sy > 1e-12 * s.norm() * y.norm() {
                let rho = 1.0 / sy;
                let eye = DMatrix::<f64>::identity(n, n);
                let left = &eye - &s * y.transpose() * rho;
                let right = &eye - &y * s.transpose() * rho;
                hess_inv = &left * hess_inv * &right + &s * s.transpose() * rho;
            }
            d = d_next;
            grad = g_next;
            fval = f_next;
        }

        // Newton refinement of the horizontality system; the defect is an
        // exact function of d, so its finite-difference Jacobian is clean.
        let mut polish_steps = 0;
        let jac_step = 1e-5;
        let mut residual = problem.residual(&d)?;
        while residual > 1e-14 && polish_steps < 8 {
            let (defect, _) = problem.certificate(&d)?;
            let mut jac = DMatrix::zeros(n, n);
            let mut probe = d.clone();
            for k in 0..n {
                probe[k] = d[k] + jac_step;
                let (cp, _) = problem.certificate(&probe)?;
                probe[k] = d[k] - jac_step;
                let (cm, _) = problem.certificate(&probe)?;
                probe[k] = d[k];
                jac.set_column(k, &((cp - cm) / (2.0 * jac_step)));
            }
            let Some(mut delta) = jac.lu().solve(&(-&defect)) else {
                break;
            };
            let norm = delta.norm();
            if norm > 1.0 {
                delta /= norm;
            }
            let cand = &d + &delta;
            let cand_res = problem.residual(&cand)?;
            if !cand_res.is_finite() || cand_res >= residual {
                break;
            }
            d = cand;
            residual = cand_res;
            polish_steps += 1;
        }

        Ok(Outcome {
            converged: residual <= cfg.horizontality_tol,
            d,
            iterations,
            polish_steps,
            restarts: 0,
            residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn corr(data: &[f64], n: usize) -> CorrMatrix {
        CorrMatrix::new(DMatrix::from_row_slice(n, n, data)).unwrap()
    }

    fn hollow(data: &[f64], n: usize) -> HollowSym {
        HollowSym::new(DMatrix::from_row_slice(n, n, data)).unwrap()
    }

    fn sym(data: &[f64], n: usize) -> SymMatrix {
        SymMatrix::new(DMatrix::from_row_slice(n, n, data)).unwrap()
    }

    fn spd(data: &[f64], n: usize) -> SpdMatrix {
        SpdMatrix::new(DMatrix::from_row_slice(n, n, data)).unwrap()
    }

    fn sample_spd3() -> SpdMatrix {
        spd(&[2.0, 0.5, 0.1, 0.5, 1.2, -0.3, 0.1, -0.3, 0.8], 3)
    }

    #[test]
    fn submersion_fixes_correlations() {
        let c = corr(&[1.0, 0.3, 0.3, 1.0], 2);
        let out = submersion(&c.as_spd());
        assert_relative_eq!(out.matrix(), c.matrix(), epsilon = 1e-15);
    }

    #[test]
    fn submersion_of_diagonal_is_identity() {
        let s = spd(&[4.0, 0.0, 0.0, 100.0], 2);
        let out = submersion(&s);
        assert_relative_eq!(out.matrix(), &DMatrix::identity(2, 2), epsilon = 1e-15);
    }

    #[test]
    fn submersion_normalizes_covariance() {
        let s = spd(&[4.0, 1.0, 1.0, 100.0], 2);
        let out = submersion(&s);
        assert_relative_eq!(out.matrix()[(0, 1)], 0.05, epsilon = 1e-15);
        assert_eq!(out.matrix()[(0, 0)], 1.0);
    }

    #[test]
    fn submersion_is_fiber_constant() {
        let s = sample_spd3();
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.2, 3.0, 1.4]));
        let scaled = SpdMatrix::new(&d * s.matrix() * &d).unwrap();
        let a = submersion(&s);
        let b = submersion(&scaled);
        assert!((a.matrix() - b.matrix()).amax() < 1e-12);
    }

    #[test]
    fn d_submersion_kills_vertical_vectors() {
        let s = sample_spd3();
        let mu = DVector::from_vec(vec![0.7, -0.2, 0.4]);
        let v = VerticalVector::new(s.clone(), mu).unwrap();
        let out = d_submersion(&s, &v.realization()).unwrap();
        assert!(out.matrix().amax() < 1e-10);
    }

    #[test]
    fn d_submersion_is_identity_on_hollow_at_correlation() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let out = d_submersion(&c.as_spd(), &x.as_sym()).unwrap();
        assert_relative_eq!(out.matrix(), x.matrix(), epsilon = 1e-14);
    }

    #[test]
    fn d_submersion_matches_finite_differences() {
        let s = sample_spd3();
        let v = sym(&[0.4, -0.2, 0.3, -0.2, 0.1, 0.5, 0.3, 0.5, -0.6], 3);
        let h = 1e-5;
        let plus = submersion(&SpdMatrix::new(s.matrix() + v.matrix() * h).unwrap());
        let minus = submersion(&SpdMatrix::new(s.matrix() - v.matrix() * h).unwrap());
        let fd = (plus.matrix() - minus.matrix()) / (2.0 * h);
        let out = d_submersion(&s, &v).unwrap();
        assert!((out.matrix() - fd).amax() < 1e-8);
    }

    #[test]
    fn vertical_projection_at_identity_is_diagonal_part() {
        let v = sym(&[0.4, -0.2, -0.2, 1.1], 2);
        let out = vertical_proj(&SpdMatrix::identity(2), &v).unwrap();
        let real = out.realization();
        assert_relative_eq!(real.matrix()[(0, 0)], 0.4, epsilon = 1e-14);
        assert_relative_eq!(real.matrix()[(1, 1)], 1.1, epsilon = 1e-14);
        assert_relative_eq!(real.matrix()[(0, 1)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn vertical_projection_two_by_two_solve() {
        // at C(0.5) with V = e11, the coordinate solves
        // (I + A) mu = Diag(C^{-1} V) 1 with A = [[4/3, -1/3], [-1/3, 4/3]],
        // giving mu = (7/12, 1/12)
        let c = corr(&[1.0, 0.5, 0.5, 1.0], 2);
        let v = sym(&[1.0, 0.0, 0.0, 0.0], 2);
        let out = vertical_proj(&c.as_spd(), &v).unwrap();
        assert_relative_eq!(out.mu()[0], 7.0 / 12.0, epsilon = 1e-13);
        assert_relative_eq!(out.mu()[1], 1.0 / 12.0, epsilon = 1e-13);
    }

    #[test]
    fn projections_decompose_and_annihilate() {
        let s = sample_spd3();
        let v = sym(&[0.4, -0.2, 0.3, -0.2, 0.1, 0.5, 0.3, 0.5, -0.6], 3);
        let ver = vertical_proj(&s, &v).unwrap();
        let hor = horizontal_proj(&s, &v).unwrap();
        let sum = ver.realization().matrix() + hor.value().matrix();
        assert_relative_eq!(&sum, v.matrix(), epsilon = 1e-13);

        // projecting each part again is stable
        let hor2 = horizontal_proj(&s, &ver.realization()).unwrap();
        assert!(hor2.value().matrix().amax() < 1e-12);
        let ver2 = vertical_proj(&s, hor.value()).unwrap();
        assert!(ver2.realization().matrix().amax() < 1e-12);
    }

    #[test]
    fn horizontal_part_passes_certificate() {
        let s = sample_spd3();
        let v = sym(&[0.4, -0.2, 0.3, -0.2, 0.1, 0.5, 0.3, 0.5, -0.6], 3);
        let hor = horizontal_proj(&s, &v).unwrap();
        let r = horizontality_residual(s.matrix(), hor.value().matrix()).unwrap();
        assert!(r < 1e-12, "residual {r}");
        // the checked constructor accepts it
        assert!(HorizontalVector::new(s.clone(), hor.value().clone()).is_ok());
        // and rejects a frankly non-horizontal vector
        assert!(matches!(
            HorizontalVector::new(s, SymMatrix::identity(3)),
            Err(GeomError::NotHorizontal { .. })
        ));
    }

    #[test]
    fn parts_are_metric_orthogonal() {
        let s = sample_spd3();
        let v = sym(&[0.4, -0.2, 0.3, -0.2, 0.1, 0.5, 0.3, 0.5, -0.6], 3);
        let ver = vertical_proj(&s, &v).unwrap().realization();
        let hor = horizontal_proj(&s, &v).unwrap();
        for (alpha, beta) in [(1.0, 0.0), (2.0, 0.5), (0.7, -0.2)] {
            let p = MetricParams::new(alpha, beta).unwrap();
            let g = spd::ai_metric(&s, hor.value(), &ver, p).unwrap();
            assert!(g.abs() < 1e-12, "alpha={alpha} beta={beta}: {g}");
        }
    }

    #[test]
    fn lift_at_correlation_is_horizontal_projection() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let lifted = horizontal_lift(&c.as_spd(), &x).unwrap();
        let hor = horizontal_proj(&c.as_spd(), &x.as_sym()).unwrap();
        assert_relative_eq!(lifted.value().matrix(), hor.value().matrix(), epsilon = 1e-14);
    }

    #[test]
    fn lift_at_identity_is_identity() {
        let x = hollow(&[0.0, 0.4, 0.4, 0.0], 2);
        let lifted = horizontal_lift(&SpdMatrix::identity(2), &x).unwrap();
        assert_relative_eq!(lifted.value().matrix(), x.matrix(), epsilon = 1e-15);
    }

    #[test]
    fn lift_inverts_the_differential() {
        let s = sample_spd3();
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let lifted = horizontal_lift(&s, &x).unwrap();
        let back = d_submersion(&s, lifted.value()).unwrap();
        assert_relative_eq!(back.matrix(), x.matrix(), epsilon = 1e-12);
    }

    #[test]
    fn quotient_metric_at_identity() {
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let c = CorrMatrix::identity(3);
        for (alpha, beta) in [(1.0, 0.0), (2.0, 1.0)] {
            let p = MetricParams::new(alpha, beta).unwrap();
            let g = qa_metric(&c, &x, &x, p).unwrap();
            let tr = (x.matrix() * x.matrix()).trace();
            assert_relative_eq!(g, alpha * tr, epsilon = 1e-13);
        }
    }

    #[test]
    fn quotient_metric_agrees_with_lifted_metric() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let p = MetricParams::new(1.4, 0.3).unwrap();
        let closed = qa_metric(&c, &x, &y, p).unwrap();

        // lift at a point of the fiber away from c
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 2.0, 1.3]));
        let sigma = SpdMatrix::new(&d * c.matrix() * &d).unwrap();
        let lx = horizontal_lift(&sigma, &x).unwrap();
        let ly = horizontal_lift(&sigma, &y).unwrap();
        let pulled = spd::ai_metric(&sigma, lx.value(), ly.value(), p).unwrap();
        assert_relative_eq!(closed, pulled, epsilon = 1e-11);
    }

    #[test]
    fn exp_of_zero_is_base() {
        let c = corr(&[1.0, 0.3, 0.3, 1.0], 2);
        let out = qa_exp(&c, &HollowSym::zeros(2)).unwrap();
        assert_relative_eq!(out.matrix(), c.matrix(), epsilon = 1e-13);
    }

    #[test]
    fn exp_at_identity_is_tanh() {
        let t: f64 = 0.8;
        let x = hollow(&[0.0, t, t, 0.0], 2);
        let out = qa_exp(&CorrMatrix::identity(2), &x).unwrap();
        assert_relative_eq!(out.matrix()[(0, 1)], t.tanh(), epsilon = 1e-13);
    }

    #[test]
    fn exp_has_the_right_initial_velocity() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let h = 1e-6;
        let scale = |t: f64| HollowSym::from_symmetric_zeroing_diag(x.matrix() * t);
        let plus = qa_exp(&c, &scale(h)).unwrap();
        let minus = qa_exp(&c, &scale(-h)).unwrap();
        let fd = (plus.matrix() - minus.matrix()) / (2.0 * h);
        assert!((fd - x.matrix()).amax() < 1e-8);
    }

    #[test]
    fn log_of_coincident_points_is_zero() {
        let c = corr(&[1.0, 0.3, 0.3, 1.0], 2);
        let (x, report) = qa_log_detailed(&c, &c, &LogConfig::default()).unwrap();
        assert!(report.converged);
        assert_eq!(report.iterations, 0);
        assert!(x.matrix().amax() < 1e-12);
    }

    #[test]
    fn log_matches_two_by_two_closed_form() {
        let rho1 = 0.05;
        let rho2 = 0.95;
        let c1 = CorrMatrix::from_rho(rho1).unwrap();
        let c2 = CorrMatrix::from_rho(rho2).unwrap();
        let x = qa_log(&c1, &c2, &LogConfig::default()).unwrap();
        let f = |r: f64| (1.0 + r) / (1.0 - r);
        let lambda = 0.5 * (f(rho2).ln() - f(rho1).ln());
        let expected = lambda * (1.0 - rho1 * rho1);
        assert_relative_eq!(x.matrix()[(0, 1)], expected, epsilon = 1e-9);
        assert_eq!(x.matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn exp_log_round_trip_three_by_three() {
        let c1 = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let c2 = corr(&[1.0, -0.4, 0.2, -0.4, 1.0, 0.1, 0.2, 0.1, 1.0], 3);
        let cfg = LogConfig::default();
        let x = qa_log(&c1, &c2, &cfg).unwrap();
        let back = qa_exp(&c1, &x).unwrap();
        assert!((back.matrix() - c2.matrix()).amax() < cfg.roundtrip_tol);
    }

    #[test]
    fn unreachable_tolerance_reports_no_convergence() {
        let c1 = CorrMatrix::from_rho(0.05).unwrap();
        let c2 = CorrMatrix::from_rho(0.95).unwrap();
        let cfg = LogConfig { horizontality_tol: 1e-30, ..LogConfig::default() };
        match qa_log(&c1, &c2, &cfg) {
            Err(GeomError::NoConvergence { residual, .. }) => {
                assert!(residual > 0.0 && residual < 1e-10);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
        // the detailed form still hands back the best iterate
        let (x, report) = qa_log_detailed(&c1, &c2, &cfg).unwrap();
        assert!(!report.converged);
        assert!(x.matrix().amax() > 1.0);
    }

    #[test]
    fn dist_basics() {
        let c1 = CorrMatrix::from_rho(0.05).unwrap();
        let c2 = CorrMatrix::from_rho(0.95).unwrap();
        let cfg = LogConfig::default();
        let p = MetricParams::standard();
        assert!(qa_dist(&c1, &c1, p, &cfg).unwrap() < 1e-12);
        let f = |r: f64| (1.0 + r) / (1.0 - r);
        let lambda = 0.5 * (f(0.95).ln() - f(0.05).ln());
        let d = qa_dist(&c1, &c2, p, &cfg).unwrap();
        assert_relative_eq!(d, 2.0f64.sqrt() * lambda, epsilon = 1e-8);
    }

    #[test]
    fn lift_derivative_matches_finite_differences() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let out = lift_derivative(&c, &x, &y).unwrap();

        let w = horizontal_proj(&c.as_spd(), &x.as_sym()).unwrap();
        let h = 1e-6;
        let lift_at = |m: DMatrix<f64>| {
            let s = SpdMatrix::new(m).unwrap();
            horizontal_lift(&s, &y).unwrap().into_value().into_matrix()
        };
        let plus = lift_at(c.matrix() + w.value().matrix() * h);
        let minus = lift_at(c.matrix() - w.value().matrix() * h);
        let fd = (plus - minus) / (2.0 * h);
        assert!((out.matrix() - fd).amax() < 1e-8);
    }

    #[test]
    fn lift_derivative_at_identity_is_diagonal_of_product() {
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let out = lift_derivative(&CorrMatrix::identity(3), &x, &y).unwrap();
        let expected = matfun::diag_part(&(x.matrix() * y.matrix()));
        assert_relative_eq!(out.matrix(), &expected, epsilon = 1e-13);
    }

    #[test]
    fn lift_derivative_is_linear_in_y() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y1 = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let y2 = hollow(&[0.0, 0.5, 0.0, 0.5, 0.0, -0.3, 0.0, -0.3, 0.0], 3);
        let comb = HollowSym::from_symmetric_zeroing_diag(y1.matrix() * 2.0 + y2.matrix() * -3.0);
        let a = lift_derivative(&c, &x, &comb).unwrap();
        let b1 = lift_derivative(&c, &x, &y1).unwrap();
        let b2 = lift_derivative(&c, &x, &y2).unwrap();
        let combo = b1.matrix() * 2.0 + b2.matrix() * -3.0;
        assert_relative_eq!(a.matrix(), &combo, epsilon = 1e-12);
    }

    #[test]
    fn connection_at_identity_closed_form() {
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let out = qa_connection(&CorrMatrix::identity(3), &x, &y, &HollowSym::zeros(3)).unwrap();
        let xy = x.matrix() * y.matrix();
        let expected = matfun::diag_part(&xy) - matfun::sym_part(&xy);
        assert_relative_eq!(out.matrix(), &expected, epsilon = 1e-13);
    }

    #[test]
    fn connection_is_tensorial_in_x() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let out = qa_connection(&c, &HollowSym::zeros(3), &y, &HollowSym::zeros(3)).unwrap();
        assert!(out.matrix().amax() < 1e-14);
    }

    #[test]
    fn geodesic_equation_in_the_chart() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let h = 1e-3;
        for &t in &[0.0, 0.5, 1.0] {
            let at = |tau: f64| {
                qa_exp(&c, &HollowSym::from_symmetric_zeroing_diag(x.matrix() * tau))
                    .unwrap()
                    .into_matrix()
            };
            let g0 = at(t);
            let gp = at(t + h);
            let gm = at(t - h);
            let vel = HollowSym::from_symmetric_zeroing_diag((&gp - &gm) / (2.0 * h));
            let acc = HollowSym::from_symmetric_zeroing_diag((&gp - 2.0 * &g0 + &gm) / (h * h));
            let base = CorrMatrix::from_normalized_unchecked(g0);
            let resid = qa_connection(&base, &vel, &vel, &acc).unwrap();
            assert!(resid.matrix().amax() < 1e-4, "t = {t}: {}", resid.matrix().amax());
        }
    }

    #[test]
    fn curvature_needs_three_dimensions() {
        let c = CorrMatrix::identity(2);
        let x = hollow(&[0.0, 1.0, 1.0, 0.0], 2);
        assert!(matches!(
            qa_curvature(&c, &x, &x),
            Err(GeomError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn curvature_term_signs_and_scale_invariance() {
        let c = corr(&[1.0, 0.3, -0.1, 0.3, 1.0, 0.5, -0.1, 0.5, 1.0], 3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let y = hollow(&[0.0, -0.1, 0.3, -0.1, 0.0, 0.2, 0.3, 0.2, 0.0], 3);
        let parts = qa_curvature_parts(&c, &x, &y).unwrap();
        assert!(parts.base <= 1e-12);
        assert!(parts.correction >= -1e-12);

        let x2 = HollowSym::from_symmetric_zeroing_diag(x.matrix() * 2.0);
        let y3 = HollowSym::from_symmetric_zeroing_diag(y.matrix() * 3.0);
        let scaled = qa_curvature(&c, &x2, &y3).unwrap();
        assert_relative_eq!(parts.total(), scaled, epsilon = 1e-9);
    }

    #[test]
    fn curvature_rejects_parallel_tangents() {
        let c = CorrMatrix::identity(3);
        let x = hollow(&[0.0, 0.4, -0.2, 0.4, 0.0, 0.1, -0.2, 0.1, 0.0], 3);
        let x2 = HollowSym::from_symmetric_zeroing_diag(x.matrix() * -1.5);
        assert!(matches!(
            qa_curvature(&c, &x, &x2),
            Err(GeomError::DegeneratePlane { .. })
        ));
    }
}
