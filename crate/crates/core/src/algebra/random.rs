//! Seeded sampling: Gaussian elements, Haar unitaries, sphere points.
//!
//! Every sampler is driven by an explicit `ChaCha8Rng`, so identical seeds
//! produce identical output on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{AlgebraDescriptor, AlgebraElement};
use crate::scalar::{cabs, lit, real, vec_norm, CMatrix, CVector, Real};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn gaussian_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re * s), lit(im * s))
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-distributed `d × d` unitary: QR of a Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix<T> {
    let z = gaussian_matrix::<T, _>(rng, d, d);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = cabs(rjj);
        let ph = if m > T::zero() { rjj / real(m) } else { real(T::one()) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar unitary of the block structure: an independent Haar unitary on each
/// diagonal block.
pub fn random_unitary_with<T: Real, R: Rng + ?Sized>(descriptor: AlgebraDescriptor, rng: &mut R) -> AlgebraElement<T> {
    let d = descriptor.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for block in descriptor.blocks() {
        let u = haar_unitary_matrix::<T, _>(rng, block.len());
        m.view_mut((block.start, block.start), (block.len(), block.len())).copy_from(&u);
    }
    AlgebraElement::from_raw(descriptor, m)
}

/// Deterministic Haar-random unitary for a seed.
pub fn random_unitary<T: Real>(descriptor: AlgebraDescriptor, seed: u64) -> AlgebraElement<T> {
    random_unitary_with(descriptor, &mut seeded_rng(seed))
}

/// Gaussian element of the algebra.
pub fn random_element_with<T: Real, R: Rng + ?Sized>(descriptor: AlgebraDescriptor, rng: &mut R) -> AlgebraElement<T> {
    let d = descriptor.ambient_dim();
    let mut m = CMatrix::zeros(d, d);
    for block in descriptor.blocks() {
        let g = gaussian_matrix::<T, _>(rng, block.len(), block.len());
        m.view_mut((block.start, block.start), (block.len(), block.len())).copy_from(&g);
    }
    AlgebraElement::from_raw(descriptor, m)
}

pub fn random_element<T: Real>(descriptor: AlgebraDescriptor, seed: u64) -> AlgebraElement<T> {
    random_element_with(descriptor, &mut seeded_rng(seed))
}

/// Gaussian Hermitian element `(g + g*)/2`.
pub fn random_hermitian_with<T: Real, R: Rng + ?Sized>(descriptor: AlgebraDescriptor, rng: &mut R) -> AlgebraElement<T> {
    let g = random_element_with::<T, _>(descriptor, rng);
    let h = (g.matrix() + g.matrix().adjoint()).map(|z| z * real(lit::<T>(0.5)));
    AlgebraElement::from_raw(descriptor, h)
}

/// Uniform point on the unit sphere of `ℂ^d`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector<T> {
    loop {
        let v = CVector::from_fn(d, |_, _| gaussian_complex::<T, _>(rng));
        let n = vec_norm(&v);
        if n > lit(1e-6) {
            return v.map(|z| z / real(n));
        }
    }
}
