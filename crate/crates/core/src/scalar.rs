//! Scalar abstraction shared by every module.
//!
//! All numerical code is written against [`Real`], which is implemented for
//! `f32` and `f64`. Complex entries are `num_complex::Complex<T>` and dense
//! matrices are `nalgebra` dynamic matrices over them.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real field backing the complex matrices: `f32` or `f64`.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive {}

pub type Cplx<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(lit(re), lit(im))
}

#[inline]
pub fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

/// `e^{iθ}`.
#[inline]
pub fn phase<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Largest singular value.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    let zero = Complex::new(T::zero(), T::zero());
    if m.is_square() && m.iter().enumerate().all(|(k, z)| k % (m.nrows() + 1) == 0 || *z == zero) {
        return m.diagonal().iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)));
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| if s > acc { s } else { acc })
}

pub fn frobenius<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Frobenius inner product `tr(a* b)`.
pub fn frobenius_inner<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// `⟨v, w⟩`, antilinear in the first slot.
pub fn inner<T: Real>(v: &CVector<T>, w: &CVector<T>) -> Complex<T> {
    v.iter()
        .zip(w.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn vec_norm<T: Real>(v: &CVector<T>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Rank-one operator `v w*`.
pub fn outer<T: Real>(v: &CVector<T>, w: &CVector<T>) -> CMatrix<T> {
    v * w.adjoint()
}

pub fn identity<T: Real>(d: usize) -> CMatrix<T> {
    CMatrix::<T>::identity(d, d)
}

pub fn basis_vector<T: Real>(d: usize, i: usize) -> CVector<T> {
    let mut v = CVector::<T>::zeros(d);
    v[i] = real(T::one());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_diagonal_matches_svd() {
        let d = CMatrix::<f64>::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(0.0, -2.0), c(1.0, 1.0)]));
        let svd = d.clone().singular_values().max();
        assert!((spectral_norm(&d) - svd).abs() < 1e-15);
        assert_eq!(spectral_norm(&d), 2.0);
        let mut off = d.clone();
        off[(0, 2)] = c(3.0, 0.0);
        assert!((spectral_norm(&off) - off.clone().singular_values().max()).abs() < 1e-15);
        assert!(spectral_norm(&off) > 3.0);
        assert_eq!(spectral_norm(&CMatrix::<f64>::zeros(0, 0)), 0.0);
        assert_eq!(spectral_norm(&CMatrix::<f64>::from_element(1, 3, c(1.0, 0.0))), 3f64.sqrt());
    }
}
