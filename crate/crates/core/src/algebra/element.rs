use std::fmt;

use num_complex::Complex;

use super::{AlgebraDescriptor, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{frobenius, real, spectral_norm, CMatrix, Real};

/// An element of the ambient algebra, stored as its faithful block-diagonal
/// matrix.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement<T: Real> {
    descriptor: AlgebraDescriptor,
    matrix: CMatrix<T>,
}

/// Binary and unary operations of the C*-algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementOp<T: Real> {
    Add,
    Mul,
    Adjoint,
    Scale(Complex<T>),
}

impl<T: Real> AlgebraElement<T> {
    /// Wraps `matrix`, checking shape and block structure. Entries outside the
    /// blocks that fall below `tau_struct` are set to exact zeros.
    pub fn new(descriptor: AlgebraDescriptor, mut matrix: CMatrix<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let d = descriptor.ambient_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::OutsideAlgebra {
                descriptor: descriptor.to_string(),
                reason: format!("shape {}x{} but ambient dimension is {d}", matrix.nrows(), matrix.ncols()),
            });
        }
        let scale = matrix.iter().fold(T::zero(), |m, z| m.max(z.norm_sqr().sqrt()));
        let cutoff = tol.struct_at(scale);
        for i in 0..d {
            for j in 0..d {
                if descriptor.in_block(i, j) {
                    continue;
                }
                let z = matrix[(i, j)];
                if z.norm_sqr().sqrt() > cutoff {
                    return Err(Error::OutsideAlgebra {
                        descriptor: descriptor.to_string(),
                        reason: format!("entry ({i},{j}) lies outside the block structure"),
                    });
                }
                matrix[(i, j)] = Complex::new(T::zero(), T::zero());
            }
        }
        Ok(Self { descriptor, matrix })
    }

    /// Trusted constructor for matrices built from in-algebra operations.
    pub(crate) fn from_raw(descriptor: AlgebraDescriptor, matrix: CMatrix<T>) -> Self {
        debug_assert_eq!(matrix.nrows(), descriptor.ambient_dim());
        Self { descriptor, matrix }
    }

    pub fn identity(descriptor: AlgebraDescriptor) -> Self {
        let d = descriptor.ambient_dim();
        Self::from_raw(descriptor, CMatrix::identity(d, d))
    }

    pub fn zero(descriptor: AlgebraDescriptor) -> Self {
        let d = descriptor.ambient_dim();
        Self::from_raw(descriptor, CMatrix::zeros(d, d))
    }

    /// `e_{jk}` (zero-based) when it belongs to the algebra.
    pub fn matrix_unit(descriptor: AlgebraDescriptor, j: usize, k: usize) -> Result<Self> {
        let d = descriptor.ambient_dim();
        if j >= d || k >= d || !descriptor.in_block(j, k) {
            return Err(Error::OutsideAlgebra {
                descriptor: descriptor.to_string(),
                reason: format!("matrix unit e_({j},{k}) is not in the algebra"),
            });
        }
        let mut m = CMatrix::zeros(d, d);
        m[(j, k)] = real(T::one());
        Ok(Self::from_raw(descriptor, m))
    }

    /// Diagonal element with the given entries along the ambient diagonal.
    pub fn diagonal(descriptor: AlgebraDescriptor, entries: &[Complex<T>]) -> Result<Self> {
        let d = descriptor.ambient_dim();
        if entries.len() != d {
            return Err(Error::OutsideAlgebra {
                descriptor: descriptor.to_string(),
                reason: format!("{} diagonal entries for dimension {d}", entries.len()),
            });
        }
        let mut m = CMatrix::zeros(d, d);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        Ok(Self::from_raw(descriptor, m))
    }

    /// `λ I + K` in the truncated compacts model: `block-diag(λ I_N + K, λ)`.
    pub fn compact_perturbation(descriptor: AlgebraDescriptor, lambda: Complex<T>, k: &CMatrix<T>) -> Result<Self> {
        let n = descriptor.scalar_index().ok_or_else(|| Error::OutsideAlgebra {
            descriptor: descriptor.to_string(),
            reason: "compact perturbations need a truncated_compacts descriptor".into(),
        })?;
        if k.nrows() != n || k.ncols() != n {
            return Err(Error::OutsideAlgebra {
                descriptor: descriptor.to_string(),
                reason: format!("compact part must be {n}x{n}"),
            });
        }
        let mut m = CMatrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(k);
        for i in 0..=n {
            m[(i, i)] += lambda;
        }
        Ok(Self::from_raw(descriptor, m))
    }

    /// The scalar part `λ` of a truncated-compacts element.
    pub fn scalar_part(&self) -> Option<Complex<T>> {
        self.descriptor.scalar_index().map(|n| self.matrix[(n, n)])
    }

    /// The compact part `K = (top block) − λ I_N` of a truncated-compacts element.
    pub fn compact_part(&self) -> Option<CMatrix<T>> {
        let n = self.descriptor.scalar_index()?;
        let lambda = self.matrix[(n, n)];
        let mut k = self.matrix.view((0, 0), (n, n)).into_owned();
        for i in 0..n {
            k[(i, i)] -= lambda;
        }
        Some(k)
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.descriptor
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor.ensure_same(&other.descriptor)?;
        Ok(Self::from_raw(self.descriptor, &self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.descriptor.ensure_same(&other.descriptor)?;
        Ok(Self::from_raw(self.descriptor, &self.matrix - &other.matrix))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.descriptor.ensure_same(&other.descriptor)?;
        Ok(Self::from_raw(self.descriptor, &self.matrix * &other.matrix))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_raw(self.descriptor, self.matrix.adjoint())
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::from_raw(self.descriptor, self.matrix.map(|z| z * c))
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.descriptor.ensure_same(&other.descriptor)?;
        Ok(Self::from_raw(self.descriptor, &self.matrix * &other.matrix - &other.matrix * &self.matrix))
    }

    pub fn apply(&self, other: &Self, op: ElementOp<T>) -> Result<Self> {
        match op {
            ElementOp::Add => self.add(other),
            ElementOp::Mul => self.mul(other),
            ElementOp::Adjoint => Ok(self.adjoint()),
            ElementOp::Scale(c) => Ok(self.scale(c)),
        }
    }

    /// C*-norm: the largest singular value of the faithful matrix.
    pub fn operator_norm(&self) -> T {
        spectral_norm(&self.matrix)
    }

    pub fn frobenius_norm(&self) -> T {
        frobenius(&self.matrix)
    }

    /// `||a a* − a* a||`.
    pub fn normality_residual(&self) -> T {
        let a = &self.matrix;
        let ad = a.adjoint();
        spectral_norm(&(a * &ad - &ad * a))
    }

    pub fn is_normal(&self, tol: &ToleranceConfig<T>) -> bool {
        let n = self.operator_norm();
        self.normality_residual() < tol.eq_at(n * n)
    }

    /// Relative Frobenius equality within `tau_eq`.
    pub fn approx_eq(&self, other: &Self, tol: &ToleranceConfig<T>) -> bool {
        if self.descriptor != other.descriptor {
            return false;
        }
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        frobenius(&(&self.matrix - &other.matrix)) <= tol.eq_at(scale)
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }
}

/// Applies `op` to `a` (and `b` for binary operations).
pub fn element_arithmetic<T: Real>(a: &AlgebraElement<T>, b: &AlgebraElement<T>, op: ElementOp<T>) -> Result<AlgebraElement<T>> {
    a.apply(b, op)
}

impl<T: Real> fmt::Debug for AlgebraElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({}, {})", self.descriptor, self.matrix)
    }
}
