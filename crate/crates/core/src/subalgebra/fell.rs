use super::CommutativeSubalgebra;
use crate::error::Result;
use crate::scalar::{spectral_norm, CMatrix, Real};

/// Columns are the row-major flattenings of an orthonormal Frobenius basis.
fn flatten<T: Real>(b: &CommutativeSubalgebra<T>) -> CMatrix<T> {
    let basis = b.span_basis();
    let d = b.descriptor().ambient_dim();
    CMatrix::from_fn(d * d, basis.len(), |k, c| basis[c][(k / d, k % d)])
}

/// Sine of the largest principal angle between the linear spans, i.e.
/// `max(‖(1 − Π₂)Π₁‖, ‖(1 − Π₁)Π₂‖)` for the orthogonal projections `Πᵢ`.
/// Spans of different dimension are at gap 1.
pub fn fell_gap<T: Real>(b1: &CommutativeSubalgebra<T>, b2: &CommutativeSubalgebra<T>) -> Result<T> {
    b1.descriptor().ensure_same(&b2.descriptor())?;
    if b1.dimension() != b2.dimension() {
        return Ok(T::one());
    }
    let q1 = flatten(b1);
    let q2 = flatten(b2);
    let r12 = &q1 - &q2 * (q2.adjoint() * &q1);
    let r21 = &q2 - &q1 * (q1.adjoint() * &q2);
    Ok(spectral_norm(&r12).max(spectral_norm(&r21)).min(T::one()))
}

/// Report of [`fell_converges`].
#[derive(Debug, Clone)]
pub struct FellConvergence<T: Real> {
    pub gaps: Vec<T>,
    pub dimensions: Vec<usize>,
    /// First index from which every gap is below the threshold at the target's dimension.
    pub settled_from: Option<usize>,
    /// Gaps never increase.
    pub monotone: bool,
    pub converges: bool,
}

/// Gap convergence of `sequence` to `limit`: the tail eventually has the
/// limit's dimension and gap below `threshold`.
pub fn fell_converges<T: Real>(
    sequence: &[CommutativeSubalgebra<T>],
    limit: &CommutativeSubalgebra<T>,
    threshold: T,
) -> Result<FellConvergence<T>> {
    let mut gaps = Vec::with_capacity(sequence.len());
    let mut dimensions = Vec::with_capacity(sequence.len());
    for b in sequence {
        gaps.push(fell_gap(b, limit)?);
        dimensions.push(b.dimension());
    }
    let good = |i: usize| gaps[i] < threshold && dimensions[i] == limit.dimension();
    let mut settled_from = None;
    for i in (0..gaps.len()).rev() {
        if good(i) {
            settled_from = Some(i);
        } else {
            break;
        }
    }
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(FellConvergence { converges: settled_from.is_some(), gaps, dimensions, settled_from, monotone })
}
