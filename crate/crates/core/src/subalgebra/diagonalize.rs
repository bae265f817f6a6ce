use nalgebra::SymmetricEigen;
use num_complex::Complex;

use super::CommutativeSubalgebra;
use crate::algebra::{AlgebraDescriptor, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, CMatrix, Real};

/// Unital commutative subalgebra generated by commuting normal elements.
///
/// The ambient space is split into joint eigenspaces of the real and imaginary
/// parts of every generator; eigenvalues closer than `tau_cluster` (scaled by
/// the element's norm) share a block.
pub fn generated_commutative<T: Real>(
    descriptor: AlgebraDescriptor,
    elements: &[AlgebraElement<T>],
    tol: &ToleranceConfig<T>,
) -> Result<CommutativeSubalgebra<T>> {
    for a in elements {
        descriptor.ensure_same(&a.descriptor())?;
        let r = a.normality_residual();
        let scale = a.operator_norm();
        if r > tol.eq_at(scale * scale) {
            return Err(Error::NotNormal { residual: to_f64(r) });
        }
    }
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let c = elements[i].commutator(&elements[j])?.operator_norm();
            let scale = elements[i].operator_norm() * elements[j].operator_norm();
            if c > tol.eq_at(scale) {
                return Err(Error::NotCommuting { i, j, residual: to_f64(c) });
            }
        }
    }

    let d = descriptor.ambient_dim();
    let mut blocks: Vec<CMatrix<T>> = vec![CMatrix::identity(d, d)];
    let half = Complex::new(lit::<T>(0.5), T::zero());
    let minus_half_i = Complex::new(T::zero(), lit::<T>(-0.5));
    for a in elements {
        let m = a.matrix();
        let re = (m + m.adjoint()).map(|z| z * half);
        let im = (m - m.adjoint()).map(|z| z * minus_half_i);
        for h in [re, im] {
            let scale = crate::scalar::spectral_norm(&h);
            blocks = blocks.into_iter().flat_map(|q| split(&q, &h, tol.cluster_at(scale))).collect();
        }
    }
    let projections: Vec<CMatrix<T>> = blocks.iter().map(|q| q * q.adjoint()).collect();
    Ok(CommutativeSubalgebra::from_projections(descriptor, &projections, tol)?.0)
}

/// Splits the invariant subspace spanned by the orthonormal columns of `q`
/// into clustered eigenspaces of the Hermitian `h`.
fn split<T: Real>(q: &CMatrix<T>, h: &CMatrix<T>, eps: T) -> Vec<CMatrix<T>> {
    let r = q.ncols();
    if r == 1 {
        return vec![q.clone()];
    }
    let restricted = q.adjoint() * h * q;
    let restricted = (&restricted + restricted.adjoint()).map(|z| z * Complex::new(lit::<T>(0.5), T::zero()));
    let eig = SymmetricEigen::new(restricted);
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap_or(std::cmp::Ordering::Equal));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = None;
    for &i in &order {
        let lam = eig.eigenvalues[i];
        match last {
            Some(prev) if lam - prev <= eps => clusters.last_mut().expect("open cluster").push(i),
            _ => clusters.push(vec![i]),
        }
        last = Some(lam);
    }
    if clusters.len() == 1 {
        return vec![q.clone()];
    }
    clusters
        .into_iter()
        .map(|cluster| {
            let mut sub = CMatrix::<T>::zeros(r, cluster.len());
            for (c, &i) in cluster.iter().enumerate() {
                sub.set_column(c, &eig.eigenvectors.column(i));
            }
            q * sub
        })
        .collect()
}
