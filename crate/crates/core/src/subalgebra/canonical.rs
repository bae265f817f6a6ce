//! Canonical form of a commutative subalgebra, computed from its minimal
//! projections alone.
//!
//! * Each block's orthonormal basis is Gram–Schmidt applied to the columns
//!   `P e_j` in index order, accepting a column once its residual exceeds
//!   `1/(2√d)`, then phase-fixed so the first entry above `tau_struct` is real
//!   positive.
//! * Blocks are visited in a fixed order (lexicographic on the projection's
//!   row-major entries, larger first) and each basis vector claims the
//!   smallest free coordinate where its magnitude is maximal. The claimed
//!   coordinates become the block's indices, so coordinate subalgebras get
//!   `U = I`.
//! * Blocks are listed by smallest index.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::algebra::ToleranceConfig;
use crate::scalar::{cabs, inner, lit, real, vec_norm, CMatrix, CVector, Real};

pub(crate) struct CanonicalForm<T: Real> {
    pub basis: CMatrix<T>,
    pub partition: Vec<Vec<usize>>,
    /// Canonical projections, listed in partition order.
    pub projections: Vec<CMatrix<T>>,
    /// `input_to_block[i]` is the canonical block of the `i`-th input projection.
    pub input_to_block: Vec<usize>,
}

fn hermitian_part<T: Real>(p: &CMatrix<T>) -> CMatrix<T> {
    (p + p.adjoint()).map(|z| z * real(lit::<T>(0.5)))
}

fn rank_of<T: Real>(p: &CMatrix<T>) -> usize {
    let t = p.trace().re;
    let r = t.to_f64().unwrap_or(0.0).round();
    if r < 1.0 {
        1
    } else {
        r as usize
    }
}

/// Orthonormal basis of `range(p)` from the columns of `p`.
pub(crate) fn block_vectors<T: Real>(p: &CMatrix<T>, rank: usize, tol: &ToleranceConfig<T>) -> Vec<CVector<T>> {
    let d = p.nrows();
    let threshold = T::one() / (lit::<T>(2.0) * lit::<T>(d as f64).sqrt());
    let mut out: Vec<CVector<T>> = Vec::with_capacity(rank);
    let mut residuals: Vec<(usize, CVector<T>, T)> = Vec::new();
    for j in 0..d {
        if out.len() == rank {
            break;
        }
        let mut w: CVector<T> = p.column(j).into_owned();
        for _ in 0..2 {
            for q in &out {
                let c = inner(q, &w);
                w -= q.map(|z| z * c);
            }
        }
        let n = vec_norm(&w);
        if n > threshold {
            out.push(w.map(|z| z / real(n)));
        } else {
            residuals.push((j, w, n));
        }
    }
    // Numerically degenerate input: fall back to the largest remaining residuals.
    while out.len() < rank {
        let mut best: Option<CVector<T>> = None;
        let mut best_norm = T::zero();
        for (j, _, _) in &residuals {
            let mut w: CVector<T> = p.column(*j).into_owned();
            for _ in 0..2 {
                for q in &out {
                    let c = inner(q, &w);
                    w -= q.map(|z| z * c);
                }
            }
            let n = vec_norm(&w);
            if n > best_norm {
                best_norm = n;
                best = Some(w);
            }
        }
        match best {
            Some(w) if best_norm > T::zero() => out.push(w.map(|z| z / real(best_norm))),
            _ => break,
        }
    }
    for v in &mut out {
        fix_phase(v, tol);
    }
    out
}

/// Rotates `v` so its first entry of magnitude above `tau_struct` is real positive.
pub(crate) fn fix_phase<T: Real>(v: &mut CVector<T>, tol: &ToleranceConfig<T>) {
    if let Some(i) = v.iter().position(|z| cabs(*z) > tol.tau_struct) {
        let r = cabs(v[i]);
        let ph = v[i].conj().unscale(r);
        v.apply(|x| *x *= ph);
        v[i] = real(r);
    }
}

/// Lexicographic order on entries, larger first, ties within `tau_cluster`.
fn projection_order<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Ordering {
    let eps = tol.tau_cluster;
    let d = a.nrows();
    for i in 0..d {
        for j in 0..d {
            let (x, y): (Complex<T>, Complex<T>) = (a[(i, j)], b[(i, j)]);
            for (p, q) in [(x.re, y.re), (x.im, y.im)] {
                if (p - q).abs() > eps {
                    return if p > q { Ordering::Less } else { Ordering::Greater };
                }
            }
        }
    }
    Ordering::Equal
}

pub(crate) fn canonicalize<T: Real>(projections: &[CMatrix<T>], tol: &ToleranceConfig<T>) -> CanonicalForm<T> {
    let d = projections.first().map(|p| p.nrows()).unwrap_or(0);
    let herm: Vec<CMatrix<T>> = projections.iter().map(hermitian_part).collect();
    let vectors: Vec<Vec<CVector<T>>> = herm.iter().map(|p| block_vectors(p, rank_of(p), tol)).collect();

    let mut visit: Vec<usize> = (0..herm.len()).collect();
    visit.sort_by(|&a, &b| projection_order(&herm[a], &herm[b], tol));

    let mut taken = vec![false; d];
    let mut anchors: Vec<Vec<usize>> = vec![Vec::new(); herm.len()];
    let mut basis = CMatrix::<T>::zeros(d, d);
    for &b in &visit {
        for v in &vectors[b] {
            let max = (0..d).filter(|&i| !taken[i]).map(|i| cabs(v[i])).fold(T::zero(), |m, x| m.max(x));
            let Some(slot) = (0..d).find(|&i| !taken[i] && cabs(v[i]) >= max - tol.tau_cluster) else {
                continue;
            };
            taken[slot] = true;
            anchors[b].push(slot);
            basis.set_column(slot, v);
        }
        anchors[b].sort_unstable();
    }

    let mut order: Vec<usize> = (0..herm.len()).collect();
    order.sort_by_key(|&b| anchors[b].first().copied().unwrap_or(usize::MAX));
    let mut input_to_block = vec![0; herm.len()];
    for (pos, &b) in order.iter().enumerate() {
        input_to_block[b] = pos;
    }
    let partition: Vec<Vec<usize>> = order.iter().map(|&b| anchors[b].clone()).collect();
    let projections = partition
        .iter()
        .map(|block| {
            let mut p = CMatrix::<T>::zeros(d, d);
            for &i in block {
                let col = basis.column(i).into_owned();
                p += &col * col.adjoint();
            }
            p
        })
        .collect();
    CanonicalForm { basis, partition, projections, input_to_block }
}
