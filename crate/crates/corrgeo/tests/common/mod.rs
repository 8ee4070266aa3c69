//! Seeded random instance generators shared by the integration tests.
#![allow(dead_code)] // each test binary uses a different subset

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use corrgeo::{CorrMatrix, HollowSym, SpdMatrix, SymMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_sym(rng: &mut ChaCha8Rng, n: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    SymMatrix::new(m).unwrap()
}

pub fn rand_hollow(rng: &mut ChaCha8Rng, n: usize) -> HollowSym {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    HollowSym::new(m).unwrap()
}

/// Moderately conditioned SPD matrix: random orthogonal frame with
/// eigenvalues in [0.5, 2.5].
pub fn rand_spd(rng: &mut ChaCha8Rng, n: usize) -> SpdMatrix {
    let b = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let q = b.qr().q();
    let eigs = DVector::from_fn(n, |_, _| rng.random_range(0.5..2.5));
    let m = &q * DMatrix::from_diagonal(&eigs) * q.transpose();
    SpdMatrix::new(m).unwrap()
}

/// Random positive diagonal scaling with entries in [0.25, 4].
pub fn rand_scaling(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_fn(n, |_, _| rng.random_range(0.25..4.0)))
}

/// Random correlation matrix with off-diagonal entries at least `margin`
/// away from +-1.
pub fn rand_corr(rng: &mut ChaCha8Rng, n: usize, margin: f64) -> CorrMatrix {
    for _ in 0..200 {
        let c = corrgeo::submersion(&rand_spd(rng, n));
        let ok = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .all(|(i, j)| c.matrix()[(i, j)].abs() < 1.0 - margin);
        if ok {
            return c;
        }
    }
    panic!("could not draw a correlation matrix away from the boundary");
}

/// Hollow tangent scaled to unit Frobenius norm.
pub fn rand_unit_hollow(rng: &mut ChaCha8Rng, n: usize) -> HollowSym {
    let h = rand_hollow(rng, n);
    let norm = h.norm();
    HollowSym::new(h.matrix() / norm.max(1e-9)).unwrap()
}
