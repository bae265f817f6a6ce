//! Unital commutative subalgebras: construction by simultaneous
//! diagonalization, conjugation, characters, the block-averaging conditional
//! expectation, and the subspace-gap surrogate for Fell convergence.

pub(crate) mod canonical;
mod diagonalize;
mod fell;

pub use diagonalize::generated_commutative;
pub use fell::{fell_converges, fell_gap, FellConvergence};

use std::fmt;

use num_complex::Complex;

use crate::algebra::{ensure_unitary, AlgebraDescriptor, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{cabs, frobenius, real, spectral_norm, to_f64, CMatrix, Real};

use canonical::canonicalize;

/// A character of a commutative subalgebra: one per partition block, with the
/// block holding the scalar coordinate of the truncated compacts written `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Character {
    /// Zero-based block index into the partition.
    Block(usize),
    /// Evaluation at the point at infinity.
    Infinity,
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Character::Block(i) => write!(f, "chi_{}", i + 1),
            Character::Infinity => write!(f, "chi_inf"),
        }
    }
}

/// `B = {U · diag(constant on each block) · U*}`.
#[derive(Clone)]
pub struct CommutativeSubalgebra<T: Real> {
    descriptor: AlgebraDescriptor,
    basis: CMatrix<T>,
    partition: Vec<Vec<usize>>,
    projections: Vec<CMatrix<T>>,
    infinity_block: Option<usize>,
    canonical: bool,
}

/// Result of [`membership_and_project`].
#[derive(Debug, Clone)]
pub struct Projection<T: Real> {
    pub projection: AlgebraElement<T>,
    pub frobenius_distance: T,
    /// Operator norm of `a − E(a)`; an upper bound for the operator-norm distance.
    pub operator_residual: T,
    pub is_member: bool,
}

impl<T: Real> CommutativeSubalgebra<T> {
    /// Builds the canonical subalgebra whose minimal projections are `projections`.
    /// Also returns where each input projection landed in the canonical order.
    pub fn from_projections(
        descriptor: AlgebraDescriptor,
        projections: &[CMatrix<T>],
        tol: &ToleranceConfig<T>,
    ) -> Result<(Self, Vec<usize>)> {
        let d = descriptor.ambient_dim();
        if projections.is_empty() {
            return Err(Error::NumericalInconsistency("a subalgebra needs at least one block".into()));
        }
        let mut sum = CMatrix::<T>::zeros(d, d);
        for p in projections {
            if p.nrows() != d || p.ncols() != d {
                return Err(Error::OutsideAlgebra { descriptor: descriptor.to_string(), reason: "projection shape".into() });
            }
            // in the algebra, and idempotent
            AlgebraElement::new(descriptor, p.clone(), tol)?;
            if frobenius(&(p * p - p)) > tol.cluster_at(frobenius(p)) {
                return Err(Error::NumericalInconsistency("block matrix is not a projection".into()));
            }
            sum += p;
        }
        if frobenius(&(sum - CMatrix::identity(d, d))) > tol.cluster_at(T::one()) {
            return Err(Error::NumericalInconsistency("block projections do not sum to the unit".into()));
        }
        Ok(Self::canonical_unchecked(descriptor, projections, tol))
    }

    fn canonical_unchecked(descriptor: AlgebraDescriptor, projections: &[CMatrix<T>], tol: &ToleranceConfig<T>) -> (Self, Vec<usize>) {
        let form = canonicalize(projections, tol);
        let infinity_block = descriptor
            .scalar_index()
            .and_then(|s| form.projections.iter().position(|p| p[(s, s)].re > crate::scalar::lit(0.5)));
        let alg = Self {
            descriptor,
            basis: form.basis,
            partition: form.partition,
            projections: form.projections,
            infinity_block,
            canonical: true,
        };
        (alg, form.input_to_block)
    }

    /// `U · D · U*` where `D` ranges over matrices constant on `partition`'s
    /// blocks. The result is canonicalized.
    pub fn from_basis(
        descriptor: AlgebraDescriptor,
        basis: &CMatrix<T>,
        partition: &[Vec<usize>],
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        let d = descriptor.ambient_dim();
        let mut seen = vec![false; d];
        for block in partition {
            if block.is_empty() {
                return Err(Error::NumericalInconsistency("empty partition block".into()));
            }
            for &i in block {
                if i >= d || seen[i] {
                    return Err(Error::NumericalInconsistency("partition blocks must be disjoint and in range".into()));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NumericalInconsistency("partition does not cover every index".into()));
        }
        let projections = block_projections(basis, partition);
        Ok(Self::from_projections(descriptor, &projections, tol)?.0)
    }

    /// Subalgebra of diagonal matrices constant on the blocks of `partition`.
    pub fn from_partition(descriptor: AlgebraDescriptor, partition: &[Vec<usize>], tol: &ToleranceConfig<T>) -> Result<Self> {
        let d = descriptor.ambient_dim();
        Self::from_basis(descriptor, &CMatrix::identity(d, d), partition, tol)
    }

    /// The diagonal MASA: `D_n`, `B_diag`, or all of `ℂ^k`.
    pub fn diagonal(descriptor: AlgebraDescriptor, tol: &ToleranceConfig<T>) -> Self {
        let d = descriptor.ambient_dim();
        let singletons: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
        Self::from_partition(descriptor, &singletons, tol).expect("singleton partition")
    }

    /// `ℂ · 1`.
    pub fn trivial(descriptor: AlgebraDescriptor, tol: &ToleranceConfig<T>) -> Self {
        let d = descriptor.ambient_dim();
        Self::from_partition(descriptor, &[(0..d).collect()], tol).expect("single block")
    }

    /// Recomputes the canonical form; a no-op on canonical input.
    pub fn canonicalize(&self, tol: &ToleranceConfig<T>) -> Self {
        if self.canonical {
            self.clone()
        } else {
            Self::canonical_unchecked(self.descriptor, &self.projections, tol).0
        }
    }

    /// Canonical form computed afresh from the projections, ignoring the flag.
    pub fn recanonicalize(&self, tol: &ToleranceConfig<T>) -> Self {
        Self::canonical_unchecked(self.descriptor, &self.projections, tol).0
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.descriptor
    }

    /// The diagonalizing unitary `U`.
    pub fn basis(&self) -> &CMatrix<T> {
        &self.basis
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    /// Minimal projections, one per block.
    pub fn projections(&self) -> &[CMatrix<T>] {
        &self.projections
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Linear dimension, i.e. the number of blocks.
    pub fn dimension(&self) -> usize {
        self.partition.len()
    }

    /// Every block is a singleton.
    pub fn is_maximal(&self) -> bool {
        self.partition.iter().all(|b| b.len() == 1)
    }

    pub fn infinity_block(&self) -> Option<usize> {
        self.infinity_block
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.partition.iter().map(Vec::len).collect()
    }

    /// The character attached to a block.
    pub fn character_of_block(&self, block: usize) -> Character {
        if Some(block) == self.infinity_block {
            Character::Infinity
        } else {
            Character::Block(block)
        }
    }

    /// Block supporting `chi`, validating it.
    pub fn block_of(&self, chi: Character) -> Result<usize> {
        match chi {
            Character::Block(b) if b < self.partition.len() && Some(b) != self.infinity_block => Ok(b),
            Character::Infinity => self.infinity_block.ok_or_else(|| Error::InvalidCharacter(chi.to_string())),
            _ => Err(Error::InvalidCharacter(chi.to_string())),
        }
    }

    pub fn character_projection(&self, chi: Character) -> Result<&CMatrix<T>> {
        Ok(&self.projections[self.block_of(chi)?])
    }

    /// Matches blocks of `self` with blocks of `other` (same projections within
    /// `tau_eq`); `Some(map)` with `map[i]` the partner of block `i`.
    pub fn match_blocks(&self, other: &Self, tol: &ToleranceConfig<T>) -> Option<Vec<usize>> {
        if self.descriptor != other.descriptor || self.dimension() != other.dimension() {
            return None;
        }
        let mut used = vec![false; other.dimension()];
        let mut map = Vec::with_capacity(self.dimension());
        for p in &self.projections {
            let hit = other
                .projections
                .iter()
                .enumerate()
                .find(|(j, q)| !used[*j] && frobenius(&(p - *q)) <= tol.eq_at(frobenius(p)))?;
            used[hit.0] = true;
            map.push(hit.0);
        }
        Some(map)
    }

    /// Equality as subalgebras.
    pub fn same_as(&self, other: &Self, tol: &ToleranceConfig<T>) -> bool {
        self.match_blocks(other, tol).is_some()
    }

    /// Largest Frobenius distance between matched projections, or `∞` when the
    /// block structures differ.
    pub fn projection_residual(&self, other: &Self) -> T {
        if self.descriptor != other.descriptor || self.dimension() != other.dimension() {
            return T::max_value().unwrap_or_else(T::one);
        }
        self.projections
            .iter()
            .map(|p| other.projections.iter().map(|q| frobenius(&(p - q))).fold(T::max_value().unwrap_or_else(T::one), |m, x| m.min(x)))
            .fold(T::zero(), |m, x| m.max(x))
    }

    /// `u B u*`; also returns the block map old → new.
    pub fn conjugate_with_map(&self, u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Result<(Self, Vec<usize>)> {
        self.descriptor.ensure_same(&u.descriptor())?;
        ensure_unitary(u, tol)?;
        let um = u.matrix();
        let d = self.descriptor.ambient_dim();
        // inner automorphisms of a commutative algebra are trivial
        if (*um == CMatrix::identity(d, d) || self.descriptor.is_commutative_algebra()) && self.canonical {
            return Ok((self.clone(), (0..self.dimension()).collect()));
        }
        let ud = um.adjoint();
        let projections: Vec<CMatrix<T>> = self.projections.iter().map(|p| um * p * &ud).collect();
        Ok(Self::canonical_unchecked(self.descriptor, &projections, tol))
    }

    /// One character per block; the ∞ block is flagged.
    pub fn characters(&self) -> Vec<Character> {
        (0..self.partition.len()).map(|b| self.character_of_block(b)).collect()
    }

    /// Pinching `E(a) = Σ_b tr(P_b a)/rank(P_b) · P_b`.
    pub fn expectation(&self, a: &AlgebraElement<T>) -> AlgebraElement<T> {
        let d = self.descriptor.ambient_dim();
        let mut out = CMatrix::<T>::zeros(d, d);
        for (p, block) in self.projections.iter().zip(&self.partition) {
            let coeff = (p * a.matrix()).trace() / real(crate::scalar::lit::<T>(block.len() as f64));
            out += p.map(|z| z * coeff);
        }
        AlgebraElement::from_raw(self.descriptor, out)
    }

    /// Frobenius distance from `a` to the span.
    pub fn distance_to(&self, a: &AlgebraElement<T>) -> T {
        frobenius(&(a.matrix() - self.expectation(a).matrix()))
    }

    /// `a ∈ B` within `tau_eq` relative to `‖a‖_F`.
    pub fn contains(&self, a: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> bool {
        self.distance_to(a) <= tol.eq_at(a.frobenius_norm())
    }

    /// Element `Σ_b values[b] P_b` of the subalgebra.
    pub fn element_from_values(&self, values: &[Complex<T>]) -> Result<AlgebraElement<T>> {
        if values.len() != self.dimension() {
            return Err(Error::NumericalInconsistency(format!(
                "{} values for {} blocks",
                values.len(),
                self.dimension()
            )));
        }
        let d = self.descriptor.ambient_dim();
        let mut out = CMatrix::<T>::zeros(d, d);
        for (p, &v) in self.projections.iter().zip(values) {
            out += p.map(|z| z * v);
        }
        Ok(AlgebraElement::from_raw(self.descriptor, out))
    }

    /// Orthonormal Frobenius basis `{P_b / √rank(P_b)}` of the linear span.
    pub fn span_basis(&self) -> Vec<CMatrix<T>> {
        self.projections
            .iter()
            .zip(&self.partition)
            .map(|(p, b)| p.map(|z| z / real(crate::scalar::lit::<T>(b.len() as f64).sqrt())))
            .collect()
    }
}

impl<T: Real> fmt::Debug for CommutativeSubalgebra<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CommutativeSubalgebra")
            .field("descriptor", &self.descriptor)
            .field("partition", &self.partition)
            .field("infinity_block", &self.infinity_block)
            .finish()
    }
}

pub(crate) fn block_projections<T: Real>(basis: &CMatrix<T>, partition: &[Vec<usize>]) -> Vec<CMatrix<T>> {
    let d = basis.nrows();
    partition
        .iter()
        .map(|block| {
            let mut p = CMatrix::<T>::zeros(d, d);
            for &i in block {
                let col = basis.column(i).into_owned();
                p += &col * col.adjoint();
            }
            p
        })
        .collect()
}

/// `U D_n U*` with singleton blocks.
pub fn masa_from_basis<T: Real>(u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Result<CommutativeSubalgebra<T>> {
    ensure_unitary(u, tol)?;
    let d = u.descriptor().ambient_dim();
    let singletons: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
    CommutativeSubalgebra::from_basis(u.descriptor(), u.matrix(), &singletons, tol)
}

/// `u B u*` in canonical form.
pub fn conjugate_subalgebra<T: Real>(
    u: &AlgebraElement<T>,
    b: &CommutativeSubalgebra<T>,
    tol: &ToleranceConfig<T>,
) -> Result<CommutativeSubalgebra<T>> {
    Ok(b.conjugate_with_map(u, tol)?.0)
}

pub fn characters<T: Real>(b: &CommutativeSubalgebra<T>) -> Vec<Character> {
    b.characters()
}

/// `χ(a)` for `a ∈ B`: the constant diagonal value of `U* a U` on χ's block.
pub fn evaluate_character<T: Real>(
    b: &CommutativeSubalgebra<T>,
    chi: Character,
    a: &AlgebraElement<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Complex<T>> {
    b.descriptor.ensure_same(&a.descriptor())?;
    let block = b.block_of(chi)?;
    let distance = b.distance_to(a);
    if distance > tol.eq_at(a.frobenius_norm()) {
        return Err(Error::NotMember { residual: to_f64(distance) });
    }
    let cols = &b.partition[block];
    let scale = a.operator_norm();
    let mut values = Vec::with_capacity(cols.len());
    for &i in cols {
        let u = b.basis.column(i).into_owned();
        values.push((u.adjoint() * a.matrix() * &u)[(0, 0)]);
    }
    let n = crate::scalar::lit::<T>(values.len() as f64);
    let mean = values.iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z) / real(n);
    if values.iter().any(|z| cabs(*z - mean) > tol.cluster_at(scale)) {
        return Err(Error::NumericalInconsistency(format!("{chi} is not constant on its block")));
    }
    Ok(mean)
}

/// Frobenius-orthogonal projection of `a` onto the span of `B`.
pub fn membership_and_project<T: Real>(
    a: &AlgebraElement<T>,
    b: &CommutativeSubalgebra<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Projection<T>> {
    b.descriptor.ensure_same(&a.descriptor())?;
    let projection = b.expectation(a);
    let resid = a.matrix() - projection.matrix();
    let frobenius_distance = frobenius(&resid);
    let operator_residual = spectral_norm(&resid);
    let is_member = frobenius_distance <= tol.eq_at(a.frobenius_norm());
    Ok(Projection { projection, frobenius_distance, operator_residual, is_member })
}

#[cfg(test)]
mod tests;
