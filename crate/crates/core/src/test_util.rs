//! Shared helpers for the unit-test modules.

use crate::linalg::{vec_norm, ComplexMatrix};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nrm = vec_norm(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    v
}
