//! Riemannian geometry of full-rank correlation matrices.
//!
//! The open elliptope of full-rank correlation matrices is the quotient of
//! the SPD cone by positive diagonal congruence, through the submersion
//! that normalizes a covariance matrix. Pushing the affine-invariant
//! metric family down this submersion gives a complete geometry on
//! correlation matrices, with projections, horizontal lifts, a closed-form
//! metric and exponential map, an optimization-based logarithm, the
//! Levi-Civita connection and sectional curvature.
//!
//! Modules:
//! - [`matfun`]: symmetric matrix functions, Hadamard algebra, spectral
//!   Sylvester solver;
//! - [`spd`]: the affine-invariant base geometry on the SPD cone;
//! - [`quotient`]: the quotient geometry on correlation matrices;
//! - [`dim2`]: exact scalar formulas for the 2x2 case, the test oracle;
//! - [`product`]: scale-times-correlation product metrics and comparison
//!   interpolations.

pub mod dim2;
pub mod error;
pub mod matfun;
pub mod product;
pub mod quotient;
pub mod spd;
pub mod types;

pub use error::{GeomError, Result};
pub use types::{CorrMatrix, DiagPos, HollowSym, SpdMatrix, SymMatrix};

pub use matfun::{a_map, hadamard, psi, sylvester_spd, sym_fun, ScalarFn};
pub use spd::{ai_connection, ai_curvature, ai_dist, ai_exp, ai_log, ai_metric, MetricParams};

pub use quotient::{
    d_submersion, horizontal_lift, horizontal_proj, lift_derivative, qa_connection, qa_curvature,
    qa_curvature_parts, qa_dist, qa_exp, qa_log, qa_log_detailed, qa_metric, submersion,
    vertical_proj, CurvatureParts, FiberReport, HorizontalVector, LogConfig, VerticalVector,
};

pub use dim2::{dist2d, f_map, geodesic2d, geodesic2d_accel, lambda_of, log2d, Rho};
pub use product::{
    comparison_geodesic, curve_statistics, decompose, power_euclidean_geodesic, product_geodesic,
    CurveSample, EllipseAxes, GeodesicKind, ProductCurve, SpdDecomposition,
};
