//! Block-diagonal complex-matrix C*-algebras: elements, norms, unitaries and
//! the shared tolerance policy.

mod descriptor;
mod element;
pub mod group;
pub mod random;
mod tolerance;

pub use descriptor::{AlgebraDescriptor, AlgebraKind};
pub use element::{element_arithmetic, AlgebraElement, ElementOp};
pub use group::{phase_permutation_group, MonomialMatrix, PhasePermutationGroup, DEFAULT_GROUP_CAP};
pub use random::{random_element, random_unitary};
pub use tolerance::ToleranceConfig;

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{frobenius_inner, lit, phase, real, spectral_norm, vec_norm, CMatrix, Real};

/// Outcome of [`is_unitary`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryCheck<T> {
    pub is_unitary: bool,
    /// `max(||u*u − I||, ||uu* − I||)`.
    pub residual: T,
    /// `||λK* + λ̄K + K*K||` for truncated compacts, where `u = λI + K`.
    pub compact_residual: Option<T>,
}

pub fn is_unitary<T: Real>(u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> UnitaryCheck<T> {
    let m = u.matrix();
    let d = m.nrows();
    let id = CMatrix::<T>::identity(d, d);
    let left = spectral_norm(&(m.adjoint() * m - &id));
    let right = spectral_norm(&(m * m.adjoint() - &id));
    let residual = left.max(right);
    let compact_residual = match (u.scalar_part(), u.compact_part()) {
        (Some(lambda), Some(k)) => {
            let kd = k.adjoint();
            let q = kd.map(|z| z * lambda) + k.map(|z| z * lambda.conj()) + &kd * &k;
            Some(spectral_norm(&q))
        }
        _ => None,
    };
    UnitaryCheck { is_unitary: residual < tol.tau_eq, residual, compact_residual }
}

pub(crate) fn ensure_unitary<T: Real>(u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Result<()> {
    let check = is_unitary(u, tol);
    if check.is_unitary {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual: crate::scalar::to_f64(check.residual) })
    }
}

/// Frobenius-orthonormal basis of the center.
///
/// For the truncated compacts this is the scalar line `ℂ·1`: the truncation
/// also makes `block-diag(0, 1)` central, but `−I_N` has no compact limit, so
/// that projection is not carried along.
pub fn center_basis<T: Real>(descriptor: AlgebraDescriptor) -> Vec<AlgebraElement<T>> {
    let d = descriptor.ambient_dim();
    match descriptor.kind() {
        AlgebraKind::Commutative(k) => (0..k)
            .map(|i| AlgebraElement::matrix_unit(descriptor, i, i).expect("diagonal unit"))
            .collect(),
        AlgebraKind::Matrix(_) | AlgebraKind::TruncatedCompacts(_) => {
            let s = real(T::one() / lit::<T>(d as f64).sqrt());
            vec![AlgebraElement::identity(descriptor).scale(s)]
        }
    }
}

/// Frobenius-orthogonal projection onto the span of [`center_basis`].
pub fn project_to_center<T: Real>(a: &AlgebraElement<T>) -> AlgebraElement<T> {
    let basis = center_basis::<T>(a.descriptor());
    let mut out = CMatrix::zeros(a.matrix().nrows(), a.matrix().ncols());
    for z in &basis {
        let coeff = frobenius_inner(z.matrix(), a.matrix());
        out += z.matrix().map(|w| w * coeff);
    }
    AlgebraElement::from_raw(a.descriptor(), out)
}

/// `Σ_n 2^{-n} ||(u − v) e_n||` over the standard basis (`n` from 1).
pub fn sot_metric<T: Real>(u: &AlgebraElement<T>, v: &AlgebraElement<T>) -> Result<T> {
    sot_metric_weighted(u, v, |n| lit::<T>(0.5).powi(n as i32))
}

/// Weighted variant; `weight(n)` is called with `n = 1, 2, …`.
pub fn sot_metric_weighted<T: Real>(u: &AlgebraElement<T>, v: &AlgebraElement<T>, weight: impl Fn(usize) -> T) -> Result<T> {
    u.descriptor().ensure_same(&v.descriptor())?;
    let diff = u.matrix() - v.matrix();
    Ok((0..diff.ncols()).fold(T::zero(), |acc, j| {
        acc + weight(j + 1) * vec_norm(&diff.column(j).into_owned())
    }))
}

/// `exp(i t h)` for Hermitian `h`, via its spectral decomposition.
pub fn exp_i_hermitian<T: Real>(h: &AlgebraElement<T>, t: T, tol: &ToleranceConfig<T>) -> Result<AlgebraElement<T>> {
    let m = h.matrix();
    let skew = spectral_norm(&(m - m.adjoint()));
    if skew > tol.eq_at(h.operator_norm()) {
        return Err(Error::NotNormal { residual: crate::scalar::to_f64(skew) });
    }
    let herm = (m + m.adjoint()).map(|z| z * real(lit::<T>(0.5)));
    let eig = SymmetricEigen::new(herm);
    let d = m.nrows();
    let mut diag = CMatrix::<T>::zeros(d, d);
    for i in 0..d {
        diag[(i, i)] = phase(t * eig.eigenvalues[i]);
    }
    let v = &eig.eigenvectors;
    let out = v * diag * v.adjoint();
    // keep exact structural zeros
    AlgebraElement::new(h.descriptor(), out, tol)
}

/// Pauli matrices on `ℂ²`.
pub fn pauli<T: Real>(which: char) -> AlgebraElement<T> {
    let desc = AlgebraDescriptor::matrix(2).expect("n = 2");
    let (o, z) = (T::one(), T::zero());
    let m = match which {
        'x' => [Complex::new(z, z), Complex::new(o, z), Complex::new(o, z), Complex::new(z, z)],
        'y' => [Complex::new(z, z), Complex::new(z, -o), Complex::new(z, o), Complex::new(z, z)],
        'z' => [Complex::new(o, z), Complex::new(z, z), Complex::new(z, z), Complex::new(-o, z)],
        _ => panic!("unknown Pauli matrix {which}"),
    };
    AlgebraElement::from_raw(desc, CMatrix::from_row_slice(2, 2, &m))
}
