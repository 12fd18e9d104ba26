//! Seeded random draws.
//!
//! All randomness in the crate goes through [`seeded_rng`], a PCG-XSL-RR
//! 128/64 generator (`Pcg64`) seeded with `seed_from_u64`.

use rand::{RngExt, SeedableRng};
use rand_distr::StandardNormal;
use rand_pcg::Pcg64;

use crate::linops::{hermitian_eigendecomposition, norm2, Matrix, C64};

pub type LabRng = Pcg64;

pub fn seeded_rng(seed: u64) -> LabRng {
    Pcg64::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian(rng: &mut LabRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector(rng: &mut LabRng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_unit_vector(rng: &mut LabRng, n: usize) -> Vec<C64> {
    loop {
        let v = random_vector(rng, n);
        let len = norm2(&v);
        if len > 1e-8 {
            return v.into_iter().map(|z| z / len).collect();
        }
    }
}

pub fn random_gaussian_matrix(rng: &mut LabRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian(rng: &mut LabRng, n: usize) -> Matrix {
    random_gaussian_matrix(rng, n, n).hermitian_part()
}

/// Unitary matrix taken from the eigenbasis of a random Hermitian matrix.
pub fn random_unitary(rng: &mut LabRng, n: usize) -> Matrix {
    let h = random_hermitian(rng, n);
    hermitian_eigendecomposition(&h)
        .expect("Hermitian part is Hermitian")
        .vectors
}

/// Log-uniform spectrum in `[1, condition]`.
pub fn log_uniform_spectrum(rng: &mut LabRng, n: usize, condition: f64) -> Vec<f64> {
    let span = condition.max(1.0).ln();
    (0..n).map(|_| (span * rng.random::<f64>()).exp()).collect()
}

/// `V D V*` with `V` unitary and `D` log-uniform in `[1, condition]`.
pub fn random_spd(rng: &mut LabRng, n: usize, condition: f64) -> Matrix {
    let v = random_unitary(rng, n);
    let d = log_uniform_spectrum(rng, n, condition);
    conjugate_diagonal(&v, &d)
}

/// `V diag(d) V*`, Hermitized.
pub fn conjugate_diagonal(v: &Matrix, d: &[f64]) -> Matrix {
    let vd = Matrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)] * d[j]);
    (&vd * &v.adjoint()).hermitian_part()
}
