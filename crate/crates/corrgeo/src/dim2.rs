//! Closed-form geometry of 2x2 correlation matrices, used as an exact
//! oracle for the general quotient operations.
//!
//! A 2x2 correlation matrix is determined by its off-diagonal coefficient
//! `rho`, and the quotient geometry reduces to scalar formulas built on
//! `f(rho) = (1 + rho) / (1 - rho)` and
//! `lambda = (log f(rho2) - log f(rho1)) / 2`.

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::types::HollowSym;

/// Correlation coefficient strictly inside (-1, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho(f64);

impl Rho {
    pub fn new(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > -1.0 && value < 1.0) {
            return Err(GeomError::OutOfDomain { value });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `f(rho) = (1 + rho) / (1 - rho)`, a smooth increasing bijection of
/// (-1, 1) onto (0, inf) with `f(0) = 1` and `f(-rho) = 1 / f(rho)`.
pub fn f_map(rho: Rho) -> f64 {
    (1.0 + rho.0) / (1.0 - rho.0)
}

/// Signed geodesic parameter `(log f(rho2) - log f(rho1)) / 2`.
///
/// Computed as a log difference to limit cancellation for nearby inputs;
/// antisymmetric and of the sign of `rho2 - rho1`.
pub fn lambda_of(rho1: Rho, rho2: Rho) -> f64 {
    0.5 * (f_map(rho2).ln() - f_map(rho1).ln())
}

/// Quotient logarithm from `C(rho1)` to `C(rho2)`:
/// `lambda (1 - rho1^2)` on the off-diagonal.
pub fn log2d(rho1: Rho, rho2: Rho) -> HollowSym {
    let coeff = lambda_of(rho1, rho2) * (1.0 - rho1.0 * rho1.0);
    HollowSym::from_symmetric_zeroing_diag(DMatrix::from_row_slice(
        2,
        2,
        &[0.0, coeff, coeff, 0.0],
    ))
}

/// Quotient distance `sqrt(2) |lambda|`.
pub fn dist2d(rho1: Rho, rho2: Rho) -> f64 {
    2.0f64.sqrt() * lambda_of(rho1, rho2).abs()
}

/// Interpolating geodesic coefficient
/// `rho(t) = (rho1 cosh(lambda t) + sinh(lambda t)) / (rho1 sinh(lambda t) + cosh(lambda t))`,
/// evaluated through `tanh` so extrapolation cannot overflow.
///
/// `rho(0) = rho1`, `rho(1) = rho2`, and the curve is monotone in `t`
/// with the sign of `rho2 - rho1`. Errors with `OutOfDomain` when the
/// value saturates to +-1 past double resolution.
pub fn geodesic2d(rho1: Rho, rho2: Rho, t: f64) -> Result<Rho> {
    let th = (lambda_of(rho1, rho2) * t).tanh();
    Rho::new((rho1.0 + th) / (1.0 + rho1.0 * th))
}

/// Second derivative of the geodesic coefficient at a point where the
/// curve passes through `rho`: `-2 lambda^2 rho (1 - rho^2)`.
///
/// Vanishes exactly where the curve crosses zero, so the geodesic has one
/// inflection point when it changes sign and none otherwise.
pub fn geodesic2d_accel(rho: Rho, lambda: f64) -> f64 {
    -2.0 * lambda * lambda * rho.0 * (1.0 - rho.0 * rho.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rho(v: f64) -> Rho {
        Rho::new(v).unwrap()
    }

    #[test]
    fn rho_domain() {
        assert!(Rho::new(1.0).is_err());
        assert!(Rho::new(-1.0).is_err());
        assert!(Rho::new(f64::NAN).is_err());
        assert!(Rho::new(0.9999999).is_ok());
    }

    #[test]
    fn f_map_values() {
        assert_relative_eq!(f_map(rho(0.0)), 1.0, epsilon = 1e-15);
        assert_relative_eq!(f_map(rho(0.95)), 39.0, epsilon = 1e-12);
        assert_relative_eq!(f_map(rho(0.05)), 21.0 / 19.0, epsilon = 1e-15);
        // reciprocal symmetry
        assert_relative_eq!(f_map(rho(-0.3)), 1.0 / f_map(rho(0.3)), epsilon = 1e-15);
    }

    #[test]
    fn f_map_is_increasing() {
        let grid: Vec<f64> = (-9..=9).map(|k| k as f64 / 10.0).collect();
        for pair in grid.windows(2) {
            assert!(f_map(rho(pair[0])) < f_map(rho(pair[1])));
        }
    }

    #[test]
    fn lambda_antisymmetry_and_sign() {
        assert_eq!(lambda_of(rho(0.4), rho(0.4)), 0.0);
        let l = lambda_of(rho(0.05), rho(0.95));
        assert_relative_eq!(l, 0.5 * (39.0f64.ln() - (21.0 / 19.0f64).ln()), epsilon = 1e-15);
        assert_relative_eq!(l, 1.781_739_093_786_331_3, epsilon = 1e-13);
        assert_relative_eq!(lambda_of(rho(0.95), rho(0.05)), -l, epsilon = 1e-15);
        assert!(lambda_of(rho(-0.2), rho(0.7)) > 0.0);
        assert!(lambda_of(rho(0.7), rho(-0.2)) < 0.0);
    }

    #[test]
    fn log2d_values() {
        let zero = log2d(rho(0.3), rho(0.3));
        assert_eq!(zero.matrix().amax(), 0.0);

        let l = log2d(rho(0.05), rho(0.95));
        let lambda = lambda_of(rho(0.05), rho(0.95));
        assert_relative_eq!(l.matrix()[(0, 1)], lambda * 0.9975, epsilon = 1e-14);

        // from the center the coefficient is log f(rho2) / 2
        let l0 = log2d(rho(0.0), rho(0.6));
        assert_relative_eq!(l0.matrix()[(0, 1)], 0.5 * f_map(rho(0.6)).ln(), epsilon = 1e-15);
    }

    #[test]
    fn dist2d_symmetry_and_value() {
        assert_eq!(dist2d(rho(0.3), rho(0.3)), 0.0);
        let d = dist2d(rho(0.05), rho(0.95));
        assert_relative_eq!(d, 2.519_759_591_042_977_6, epsilon = 1e-12);
        assert_relative_eq!(d, dist2d(rho(0.95), rho(0.05)), epsilon = 1e-15);
    }

    #[test]
    fn geodesic_endpoints() {
        let a = rho(-0.4);
        let b = rho(0.85);
        assert_relative_eq!(geodesic2d(a, b, 0.0).unwrap().value(), a.value(), epsilon = 1e-15);
        assert_relative_eq!(geodesic2d(a, b, 1.0).unwrap().value(), b.value(), epsilon = 1e-13);
    }

    #[test]
    fn geodesic_from_center_is_tanh() {
        let b = rho(0.7);
        let lambda = lambda_of(rho(0.0), b);
        for &t in &[-1.5, -0.3, 0.4, 2.0] {
            let got = geodesic2d(rho(0.0), b, t).unwrap().value();
            assert_relative_eq!(got, (lambda * t).tanh(), epsilon = 1e-14);
        }
    }

    #[test]
    fn geodesic_monotone_and_bounded() {
        let a = rho(-0.6);
        let b = rho(0.8);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=200 {
            let t = -5.0 + 10.0 * k as f64 / 200.0;
            let v = geodesic2d(a, b, t).unwrap().value();
            assert!(v > -1.0 && v < 1.0, "t = {t}");
            assert!(v > prev, "monotonicity at t = {t}");
            prev = v;
        }
        // the steepest oracle-grid pair saturates past double resolution
        // around |t| ~ 5; it stays interior on a moderate range
        let a = rho(-0.95);
        let b = rho(0.95);
        for k in 0..=100 {
            let t = -2.0 + 4.0 * k as f64 / 100.0;
            let v = geodesic2d(a, b, t).unwrap().value();
            assert!(v > -1.0 && v < 1.0, "t = {t}");
        }
    }

    #[test]
    fn accel_identity_matches_finite_differences() {
        let a = rho(0.05);
        let b = rho(0.95);
        let lambda = lambda_of(a, b);
        let h = 1e-4;
        for &t in &[0.0, 0.3, 0.7, 1.0, 1.5] {
            let r = |tau: f64| geodesic2d(a, b, tau).unwrap().value();
            let fd = (r(t + h) - 2.0 * r(t) + r(t - h)) / (h * h);
            let exact = geodesic2d_accel(geodesic2d(a, b, t).unwrap(), lambda);
            assert!((fd - exact).abs() < 1e-6, "t = {t}: fd {fd} vs {exact}");
        }
    }

    #[test]
    fn one_inflection_point_when_crossing_zero() {
        // the analytic second derivative changes sign exactly where the
        // curve crosses zero
        let a = rho(-0.6);
        let b = rho(0.8);
        let lambda = lambda_of(a, b);
        let mut changes = 0;
        let mut prev_sign = 0.0f64;
        for k in 0..=2000 {
            let t = -2.0 + 4.0 * k as f64 / 2000.0;
            let acc = geodesic2d_accel(geodesic2d(a, b, t).unwrap(), lambda);
            let s = acc.signum();
            if prev_sign != 0.0 && s != 0.0 && s != prev_sign {
                changes += 1;
            }
            if s != 0.0 {
                prev_sign = s;
            }
        }
        assert_eq!(changes, 1);
    }
}
