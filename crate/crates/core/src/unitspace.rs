//! Unit points `(B, χ)`, partial evaluation into the extended plane, a metric
//! on the unit space, and the projective picture for maximal subalgebras.

use std::fmt;

use num_complex::Complex;

use crate::algebra::{AlgebraDescriptor, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{c, cabs, lit, outer, to_f64, vec_norm, CMatrix, CVector, Real};
use crate::subalgebra::canonical::block_vectors;
use crate::subalgebra::{evaluate_character, Character, CommutativeSubalgebra};

/// A point of `ℂ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex<T: Real> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtendedComplex<T> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match self {
            ExtendedComplex::Finite(z) => Some(*z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Bounded distance used by the metric: `0` for two infinities, `1/2`
    /// when exactly one side is infinite, `t/(1+t)` with `t = |z − w|`
    /// otherwise.
    pub fn distance(&self, other: &Self) -> T {
        match (self, other) {
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => T::zero(),
            (ExtendedComplex::Infinity, _) | (_, ExtendedComplex::Infinity) => lit(0.5),
            (ExtendedComplex::Finite(z), ExtendedComplex::Finite(w)) => {
                let t = cabs(*z - *w);
                t / (T::one() + t)
            }
        }
    }
}

impl<T: Real + fmt::Display> fmt::Display for ExtendedComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// A pair `(B, χ)` with `B` in canonical form.
#[derive(Debug, Clone)]
pub struct UnitPoint<T: Real> {
    subalgebra: CommutativeSubalgebra<T>,
    character: Character,
}

impl<T: Real> UnitPoint<T> {
    pub fn new(subalgebra: CommutativeSubalgebra<T>, character: Character, tol: &ToleranceConfig<T>) -> Result<Self> {
        subalgebra.block_of(character)?;
        let subalgebra = subalgebra.canonicalize(tol);
        Ok(Self { subalgebra, character })
    }

    /// The point `(B, χ)` sitting on block `block` of `B`.
    pub fn on_block(subalgebra: CommutativeSubalgebra<T>, block: usize, tol: &ToleranceConfig<T>) -> Result<Self> {
        if block >= subalgebra.dimension() {
            return Err(Error::InvalidCharacter(format!("block {block} of {}", subalgebra.dimension())));
        }
        let chi = subalgebra.character_of_block(block);
        Self::new(subalgebra, chi, tol)
    }

    pub fn subalgebra(&self) -> &CommutativeSubalgebra<T> {
        &self.subalgebra
    }

    pub fn character(&self) -> Character {
        self.character
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.subalgebra.descriptor()
    }

    pub fn block(&self) -> usize {
        self.subalgebra.block_of(self.character).expect("validated on construction")
    }

    /// Minimal projection supporting the character.
    pub fn support(&self) -> &CMatrix<T> {
        &self.subalgebra.projections()[self.block()]
    }

    /// Same subalgebra and the matched character.
    pub fn same_as(&self, other: &Self, tol: &ToleranceConfig<T>) -> bool {
        match self.subalgebra.match_blocks(&other.subalgebra, tol) {
            Some(map) => map[self.block()] == other.block(),
            None => false,
        }
    }
}

/// `χ(a)` when `a ∈ B`, otherwise `∞`.
pub fn partial_eval<T: Real>(a: &AlgebraElement<T>, x: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<ExtendedComplex<T>> {
    x.descriptor().ensure_same(&a.descriptor())?;
    if !x.subalgebra.contains(a, tol) {
        return Ok(ExtendedComplex::Infinity);
    }
    Ok(ExtendedComplex::Finite(evaluate_character(&x.subalgebra, x.character, a, tol)?))
}

fn matrix_unit_family<T: Real>(desc: AlgebraDescriptor) -> Vec<AlgebraElement<T>> {
    desc.matrix_units()
        .into_iter()
        .map(|(j, k)| AlgebraElement::matrix_unit(desc, j, k).expect("in-algebra unit"))
        .collect()
}

/// All projections of `B` other than `0` and `1`: sums over proper non-empty
/// subsets of the minimal projections.
fn subalgebra_projections<T: Real>(b: &CommutativeSubalgebra<T>) -> Vec<AlgebraElement<T>> {
    let k = b.dimension();
    let d = b.descriptor().ambient_dim();
    let mut out = Vec::new();
    if !(2..=16).contains(&k) {
        return out;
    }
    for mask in 1u32..(1u32 << k) - 1 {
        let mut p = CMatrix::<T>::zeros(d, d);
        for (i, q) in b.projections().iter().enumerate() {
            if mask & (1 << i) != 0 {
                p += q;
            }
        }
        out.push(AlgebraElement::from_raw(b.descriptor(), p));
    }
    out
}

fn is_matrix_unit<T: Real>(p: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> bool {
    let m = p.matrix();
    let mut hits = 0;
    for z in m.iter() {
        if cabs(*z - c(1.0, 0.0)) <= tol.tau_eq {
            hits += 1;
        } else if cabs(*z) > tol.tau_eq {
            return false;
        }
    }
    hits == 1
}

/// Metric on unit points of one algebra.
///
/// The first part is `Σ_n 2^{-n} ρ(ev_{a_n}(x), ev_{a_n}(y))` over the matrix
/// units `a_1, …, a_M` of the algebra in row-major order, with `ρ` the bounded
/// distance of [`ExtendedComplex::distance`]. Matrix units alone do not tell
/// apart points whose subalgebras contain none of them, so a tail
/// `2^{-M} sup_p ρ(ev_p(x), ev_p(y))` over all remaining non-trivial
/// projections `p` of the algebra is added. Only projections of `B_x` or
/// `B_y` contribute to the supremum.
pub fn unit_metric<T: Real>(x: &UnitPoint<T>, y: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<T> {
    let desc = x.descriptor();
    desc.ensure_same(&y.descriptor())?;
    let units = matrix_unit_family::<T>(desc);
    let mut total = T::zero();
    let mut weight = T::one();
    for a in &units {
        weight /= lit::<T>(2.0);
        total += weight * partial_eval(a, x, tol)?.distance(&partial_eval(a, y, tol)?);
    }
    let mut tail = T::zero();
    for p in subalgebra_projections(&x.subalgebra).iter().chain(subalgebra_projections(&y.subalgebra).iter()) {
        if is_matrix_unit(p, tol) {
            continue;
        }
        tail = tail.max(partial_eval(p, x, tol)?.distance(&partial_eval(p, y, tol)?));
    }
    Ok(total + weight * tail)
}

fn differs<T: Real>(a: &ExtendedComplex<T>, b: &ExtendedComplex<T>, tol: &ToleranceConfig<T>) -> bool {
    a.distance(b) > tol.cluster_at(T::one())
}

/// Some `a` whose partial evaluations at `x` and `y` differ.
///
/// Searched in order over matrix units, their Hermitian combinations
/// `e_jk + e_kj` and `i(e_jk − e_kj)`, then projections of `B_x` and `B_y`.
pub fn separating_witness<T: Real>(x: &UnitPoint<T>, y: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<AlgebraElement<T>> {
    let desc = x.descriptor();
    desc.ensure_same(&y.descriptor())?;
    if x.same_as(y, tol) {
        return Err(Error::NotDistinct);
    }
    let mut candidates = matrix_unit_family::<T>(desc);
    for (j, k) in desc.matrix_units() {
        if j < k {
            let ejk = AlgebraElement::<T>::matrix_unit(desc, j, k)?;
            let ekj = AlgebraElement::<T>::matrix_unit(desc, k, j)?;
            candidates.push(ejk.add(&ekj)?);
            candidates.push(ejk.sub(&ekj)?.scale(c(0.0, 1.0)));
        }
    }
    for b in [&x.subalgebra, &y.subalgebra] {
        for p in b.projections() {
            candidates.push(AlgebraElement::from_raw(desc, p.clone()));
        }
        candidates.extend(subalgebra_projections(b));
    }
    for a in candidates {
        if differs(&partial_eval(&a, x, tol)?, &partial_eval(&a, y, tol)?, tol) {
            return Ok(a);
        }
    }
    Err(Error::SeparationFailure)
}

/// The rank-one projection `p_χ` of a point over a maximal subalgebra.
pub fn psi_projective<T: Real>(x: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<AlgebraElement<T>> {
    if !x.subalgebra.is_maximal() {
        return Err(Error::NotMaximal);
    }
    if x.character == Character::Infinity {
        return Err(Error::NoProjection);
    }
    AlgebraElement::new(x.descriptor(), x.support().clone(), tol)
}

/// The point `(B_v, χ_v)` with `Ψ(B_v, χ_v) = vv*`.
///
/// `B_v` is the maximal subalgebra of an orthonormal basis containing `v`,
/// completed from the columns of `1 − vv*`, which makes the result depend on
/// the line of `v` only. In the compacts model `v` must lie in the compact
/// part.
pub fn point_from_vector<T: Real>(v: &CVector<T>, descriptor: AlgebraDescriptor, tol: &ToleranceConfig<T>) -> Result<UnitPoint<T>> {
    let d = descriptor.ambient_dim();
    if v.len() != d {
        return Err(Error::OutsideAlgebra { descriptor: descriptor.to_string(), reason: format!("vector of length {}", v.len()) });
    }
    let norm = vec_norm(v);
    if (norm - T::one()).abs() > tol.tau_eq {
        return Err(Error::NotUnitVector { norm: to_f64(norm) });
    }
    if let Some(s) = descriptor.scalar_index() {
        if cabs(v[s]) > tol.tau_struct {
            return Err(Error::OutsideAlgebra {
                descriptor: descriptor.to_string(),
                reason: "vector has a component along the scalar coordinate".into(),
            });
        }
    }
    if descriptor.is_commutative() && !descriptor.is_matrix() {
        // only coordinate lines are in the algebra
        if v.iter().filter(|z| cabs(**z) > tol.tau_struct).count() != 1 {
            return Err(Error::OutsideAlgebra { descriptor: descriptor.to_string(), reason: "not a coordinate line".into() });
        }
    }
    let v = v.unscale(norm);
    let line = outer(&v, &v);
    let rest = CMatrix::<T>::identity(d, d) - &line;
    let mut projections = vec![line];
    if d > 1 {
        for w in block_vectors(&rest, d - 1, tol) {
            projections.push(outer(&w, &w));
        }
    }
    let (b, map) = CommutativeSubalgebra::from_projections(descriptor, &projections, tol)?;
    UnitPoint::on_block(b, map[0], tol)
}

/// `π(B, χ) = B`.
pub fn project_to_subalgebra<T: Real>(x: &UnitPoint<T>) -> CommutativeSubalgebra<T> {
    x.subalgebra.clone()
}
