//! Sweeps of the base geometry: distance axioms, exp/log inversion and
//! curvature sign.

mod common;

use common::*;
use corrgeo::{ai_curvature, ai_dist, ai_exp, ai_log, GeomError, MetricParams, SymMatrix};
use rand::Rng;

#[test]
fn distance_is_symmetric_and_triangular() {
    let mut rng = rng(71);
    let params = MetricParams::standard();
    for _ in 0..40 {
        let n = rng.random_range(2..=5);
        let a = rand_spd(&mut rng, n);
        let b = rand_spd(&mut rng, n);
        let c = rand_spd(&mut rng, n);
        let dab = ai_dist(&a, &b, params).unwrap();
        let dba = ai_dist(&b, &a, params).unwrap();
        assert!((dab - dba).abs() < 1e-9, "symmetry: {dab} vs {dba}");
        let dac = ai_dist(&a, &c, params).unwrap();
        let dcb = ai_dist(&c, &b, params).unwrap();
        assert!(dab <= dac + dcb + 1e-9, "triangle: {dab} > {dac} + {dcb}");
    }
}

#[test]
fn exp_and_log_are_mutually_inverse() {
    let mut rng = rng(72);
    for _ in 0..40 {
        let n = rng.random_range(2..=6);
        let s1 = rand_spd(&mut rng, n);
        let s2 = rand_spd(&mut rng, n);
        let l = ai_log(&s1, &s2).unwrap();
        let fwd = ai_exp(&s1, &l).unwrap();
        let rel = (fwd.matrix() - s2.matrix()).norm() / s2.matrix().norm();
        assert!(rel < 1e-9, "exp(log) error {rel}");

        let v = rand_sym(&mut rng, n);
        let target = ai_exp(&s1, &v).unwrap();
        let back = ai_log(&s1, &target).unwrap();
        let rel = (back.matrix() - v.matrix()).norm() / v.matrix().norm().max(1.0);
        assert!(rel < 1e-9, "log(exp) error {rel}");
    }
}

#[test]
fn sectional_curvature_is_nonpositive() {
    let mut rng = rng(73);
    let mut checked = 0usize;
    for k in 0..1000 {
        let n = [2usize, 3, 5][k % 3];
        let s = rand_spd(&mut rng, n);
        let v = rand_sym(&mut rng, n);
        let w = rand_sym(&mut rng, n);
        match ai_curvature(&s, &v, &w) {
            Ok(kappa) => {
                assert!(kappa <= 1e-12, "instance {k}: curvature {kappa:.3e}");
                checked += 1;
            }
            Err(GeomError::DegeneratePlane { .. }) => {}
            Err(e) => panic!("instance {k}: {e}"),
        }
    }
    assert!(checked > 900);
}

#[test]
fn curvature_vanishes_for_commuting_tangents() {
    let mut rng = rng(74);
    for _ in 0..20 {
        let n = 4;
        let s = corrgeo::SpdMatrix::identity(n);
        // diagonal tangents commute with each other
        let v = {
            let mut m = nalgebra::DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = rng.random_range(-1.0..1.0);
            }
            SymMatrix::new(m).unwrap()
        };
        let w = {
            let mut m = nalgebra::DMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = rng.random_range(-1.0..1.0);
            }
            SymMatrix::new(m).unwrap()
        };
        match ai_curvature(&s, &v, &w) {
            Ok(kappa) => assert!(kappa.abs() < 1e-12, "curvature {kappa:.3e}"),
            Err(GeomError::DegeneratePlane { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
