//! Arrows `(u, x)` of the conjugation action groupoid, its structure maps,
//! counting-measure Haar systems over finite unitary subgroups, and transport
//! along inner automorphisms.

use num_rational::Ratio;

use crate::algebra::{ensure_unitary, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{frobenius, lit, CMatrix, Real};
use crate::unitspace::UnitPoint;

/// `u · (B, χ) = (uBu*, χ ∘ Ad_{u*})`.
pub fn act<T: Real>(u: &AlgebraElement<T>, x: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<UnitPoint<T>> {
    let (moved, map) = x.subalgebra().conjugate_with_map(u, tol)?;
    UnitPoint::on_block(moved, map[x.block()], tol)
}

/// Size of the disagreement between two points: projection mismatch of the
/// subalgebras together with the supports of the characters. Zero up to
/// rounding exactly when the points agree.
pub fn point_residual<T: Real>(x: &UnitPoint<T>, y: &UnitPoint<T>) -> T {
    if x.descriptor() != y.descriptor() {
        return T::max_value().unwrap_or_else(T::one);
    }
    x.subalgebra()
        .projection_residual(y.subalgebra())
        .max(frobenius(&(x.support() - y.support())))
}

/// An arrow `(u, x)` from `x` to `u · x`. The range is recomputed on demand.
#[derive(Debug, Clone)]
pub struct Arrow<T: Real> {
    unitary: AlgebraElement<T>,
    source: UnitPoint<T>,
}

impl<T: Real> Arrow<T> {
    pub fn new(unitary: AlgebraElement<T>, source: UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        source.descriptor().ensure_same(&unitary.descriptor())?;
        ensure_unitary(&unitary, tol)?;
        Ok(Self { unitary, source })
    }

    /// The unit arrow `(1, x)`.
    pub fn unit(x: &UnitPoint<T>) -> Self {
        Self { unitary: AlgebraElement::identity(x.descriptor()), source: x.clone() }
    }

    pub fn unitary(&self) -> &AlgebraElement<T> {
        &self.unitary
    }

    pub fn source(&self) -> &UnitPoint<T> {
        &self.source
    }

    pub fn range(&self, tol: &ToleranceConfig<T>) -> UnitPoint<T> {
        act(&self.unitary, &self.source, tol).expect("unitary checked on construction")
    }

    /// Same unitary within `tau_eq` and the same source.
    pub fn same_as(&self, other: &Self, tol: &ToleranceConfig<T>) -> bool {
        let diff = frobenius(&(self.unitary.matrix() - other.unitary.matrix()));
        diff <= tol.eq_at(self.unitary.frobenius_norm()) && self.source.same_as(&other.source, tol)
    }

    pub fn is_unit(&self, tol: &ToleranceConfig<T>) -> bool {
        self.unitary.approx_eq(&AlgebraElement::identity(self.unitary.descriptor()), tol)
    }
}

/// `g2 ∘ g1 = (u₂u₁, s(g1))`, defined when `s(g2) = r(g1)`.
pub fn arrow_compose<T: Real>(g2: &Arrow<T>, g1: &Arrow<T>, tol: &ToleranceConfig<T>) -> Result<Arrow<T>> {
    let r1 = g1.range(tol);
    if !g2.source.same_as(&r1, tol) {
        return Err(Error::NotComposable { source_point: format!("{:?}", g2.source), range_point: format!("{r1:?}") });
    }
    Ok(Arrow { unitary: g2.unitary.mul(&g1.unitary)?, source: g1.source.clone() })
}

/// `(u, x)⁻¹ = (u*, u · x)`.
pub fn arrow_inverse<T: Real>(g: &Arrow<T>, tol: &ToleranceConfig<T>) -> Arrow<T> {
    Arrow { unitary: g.unitary.adjoint(), source: g.range(tol) }
}

/// Lookup of matrices in a finite list: entries are sorted along a fixed
/// linear functional and candidates in a window are compared exactly.
#[derive(Debug, Clone)]
pub(crate) struct ElementIndex<T: Real> {
    keys: Vec<(T, usize)>,
    matrices: Vec<CMatrix<T>>,
    window: T,
}

impl<T: Real> ElementIndex<T> {
    fn key(m: &CMatrix<T>) -> T {
        m.iter()
            .enumerate()
            .map(|(k, z)| {
                let a = lit::<T>(1.0 + (k as f64 * 0.7548776662466927).fract());
                let b = lit::<T>(1.0 + (k as f64 * 0.5698402909980532).fract());
                a * z.re + b * z.im
            })
            .fold(T::zero(), |s, x| s + x)
    }

    pub fn new(matrices: Vec<CMatrix<T>>, window: T) -> Self {
        let mut keys: Vec<(T, usize)> = matrices.iter().enumerate().map(|(i, m)| (Self::key(m), i)).collect();
        keys.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        Self { keys, matrices, window }
    }

    pub fn find(&self, m: &CMatrix<T>, eq: T) -> Option<usize> {
        let k = Self::key(m);
        let lo = self.keys.partition_point(|e| e.0 < k - self.window);
        self.keys[lo..]
            .iter()
            .take_while(|e| e.0 <= k + self.window)
            .map(|e| e.1)
            .filter(|&i| frobenius(&(&self.matrices[i] - m)) <= eq)
            .min()
    }
}

/// Which measure sits on each source fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarKind {
    /// `μ × δ_x` with `μ` the counting measure of the group.
    Counting,
    /// `δ_{(1, x)}` only; not invariant, kept as a counterexample.
    DiracAtUnit,
}

/// Haar system of a finite unitary subgroup `G`: on the fiber over `x` it
/// weighs the arrows `(g, x)`, `g ∈ G`.
#[derive(Debug, Clone)]
pub struct HaarSystem<T: Real> {
    elements: Vec<AlgebraElement<T>>,
    weights: Vec<Ratio<u64>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    identity: usize,
    index: ElementIndex<T>,
    kind: HaarKind,
}

impl<T: Real> HaarSystem<T> {
    /// Counting measure on `group`, which must contain `1` and be closed under
    /// products and adjoints within `tau_eq`.
    pub fn build(group: Vec<AlgebraElement<T>>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let first = group.first().ok_or_else(|| Error::NotAGroup("empty set".into()))?;
        let desc = first.descriptor();
        for g in &group {
            desc.ensure_same(&g.descriptor())?;
            ensure_unitary(g, tol)?;
        }
        let scale = lit::<T>(desc.ambient_dim() as f64).sqrt();
        let eq = tol.eq_at(scale);
        let index = ElementIndex::new(group.iter().map(|g| g.matrix().clone()).collect(), tol.cluster_at(scale) * lit(16.0));
        let identity = index
            .find(&CMatrix::identity(desc.ambient_dim(), desc.ambient_dim()), eq)
            .ok_or_else(|| Error::NotAGroup("identity missing".into()))?;
        let mut table = Vec::with_capacity(group.len());
        for (i, a) in group.iter().enumerate() {
            let mut row = Vec::with_capacity(group.len());
            for (j, b) in group.iter().enumerate() {
                let p = a.matrix() * b.matrix();
                row.push(index.find(&p, eq).ok_or_else(|| Error::NotAGroup(format!("product of elements {i} and {j} missing")))?);
            }
            table.push(row);
        }
        let mut inverses = Vec::with_capacity(group.len());
        for (i, a) in group.iter().enumerate() {
            inverses.push(index.find(&a.matrix().adjoint(), eq).ok_or_else(|| Error::NotAGroup(format!("adjoint of element {i} missing")))?);
        }
        let weights = vec![Ratio::from_integer(1); group.len()];
        Ok(Self { elements: group, weights, table, inverses, identity, index, kind: HaarKind::Counting })
    }

    /// The Dirac system `λ^x = δ_{(1, x)}` over the same group.
    pub fn dirac_at_unit(group: Vec<AlgebraElement<T>>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let mut h = Self::build(group, tol)?;
        h.kind = HaarKind::DiracAtUnit;
        let id = h.identity;
        h.weights = (0..h.elements.len()).map(|i| Ratio::from_integer(u64::from(i == id))).collect();
        Ok(h)
    }

    pub fn kind(&self) -> HaarKind {
        self.kind
    }

    pub fn elements(&self) -> &[AlgebraElement<T>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn weights(&self) -> &[Ratio<u64>] {
        &self.weights
    }

    pub fn weight(&self, g: usize) -> Ratio<u64> {
        self.weights[g]
    }

    /// Index of `g · h`.
    pub fn product(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiplication_table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Group index of `u`, if present.
    pub fn index_of(&self, u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Option<usize> {
        let scale = lit::<T>(u.descriptor().ambient_dim() as f64).sqrt();
        self.index.find(u.matrix(), tol.eq_at(scale))
    }

    /// The weighted arrows of the fiber over `x` with nonzero weight.
    pub fn fiber(&self, x: &UnitPoint<T>) -> Vec<(Arrow<T>, Ratio<u64>)> {
        self.elements
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w != Ratio::from_integer(0))
            .map(|(g, w)| (Arrow { unitary: g.clone(), source: x.clone() }, *w))
            .collect()
    }

    /// Total mass of each fiber.
    pub fn fiber_mass(&self) -> Ratio<u64> {
        self.weights.iter().copied().sum()
    }
}

pub fn haar_system_build<T: Real>(group: Vec<AlgebraElement<T>>, tol: &ToleranceConfig<T>) -> Result<HaarSystem<T>> {
    HaarSystem::build(group, tol)
}

/// Invariance of the system under translation by `γ = (u, x)`.
///
/// Fibers are source fibers, so `γ` moves the fiber over `x` to the fiber over
/// `u · x` through `η ↦ η γ⁻¹`, that is `(w, x) ↦ (w u*, u · x)`. The check
/// passes when this is a weight-preserving bijection onto the fiber over the
/// range.
pub fn verify_left_invariance<T: Real>(h: &HaarSystem<T>, gamma: &Arrow<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    let u = h.index_of(&gamma.unitary, tol).ok_or(Error::NotInGroup)?;
    let target = gamma.range(tol);
    let u_inv = h.inverse(u);
    let mut hit = vec![false; h.order()];
    for w in 0..h.order() {
        let moved = h.product(w, u_inv);
        // the translated arrow must start at the range point, and be distinct
        let translated = Arrow { unitary: h.elements[w].mul(&h.elements[u_inv])?, source: target.clone() };
        let expected = Arrow { unitary: h.elements[moved].clone(), source: target.clone() };
        if !translated.same_as(&expected, tol) || hit[moved] {
            return Ok(false);
        }
        hit[moved] = true;
        if h.weight(w) != h.weight(moved) {
            return Ok(false);
        }
    }
    Ok(hit.iter().all(|&b| b))
}

/// The point `(V*BV, χ ∘ Ad_V)` induced by the automorphism `Ad_V`.
pub fn transport_point<T: Real>(v: &AlgebraElement<T>, x: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Result<UnitPoint<T>> {
    act(&v.adjoint(), x, tol)
}

/// The arrow `(V*uV, V*·x)`.
pub fn transport_arrow<T: Real>(v: &AlgebraElement<T>, g: &Arrow<T>, tol: &ToleranceConfig<T>) -> Result<Arrow<T>> {
    let vs = v.adjoint();
    let unitary = vs.mul(&g.unitary)?.mul(v)?;
    Ok(Arrow { unitary, source: transport_point(v, &g.source, tol)? })
}

fn arrow_residual<T: Real>(a: &Arrow<T>, b: &Arrow<T>) -> T {
    frobenius(&(a.unitary.matrix() - b.unitary.matrix())).max(point_residual(&a.source, &b.source))
}

/// Outcome of [`functoriality_isomorphism_check`].
#[derive(Debug, Clone)]
pub struct FunctorialityReport<T: Real> {
    /// Worst mismatch of `F(u·x)` against `F(u)·F(x)`.
    pub action_residual: T,
    /// Worst mismatch of `F(g₂∘g₁)` against `F(g₂)∘F(g₁)`.
    pub composition_residual: T,
    /// Worst mismatch of `Ad_{V*}` undoing `Ad_V`, on points and arrows.
    pub inverse_residual: T,
    pub max_residual: T,
    pub passed: bool,
}

/// Checks on samples that transport along `Ad_V` is a groupoid isomorphism.
/// Consecutive sample arrows are made composable by restarting each at the
/// range of its predecessor.
pub fn functoriality_isomorphism_check<T: Real>(
    v: &AlgebraElement<T>,
    points: &[UnitPoint<T>],
    arrows: &[Arrow<T>],
    tol: &ToleranceConfig<T>,
) -> Result<FunctorialityReport<T>> {
    ensure_unitary(v, tol)?;
    let vs = v.adjoint();
    let mut action_residual = T::zero();
    let mut composition_residual = T::zero();
    let mut inverse_residual = T::zero();
    for x in points {
        let back = transport_point(&vs, &transport_point(v, x, tol)?, tol)?;
        inverse_residual = inverse_residual.max(point_residual(&back, x));
    }
    for g in arrows {
        let fg = transport_arrow(v, g, tol)?;
        let lhs = transport_point(v, &g.range(tol), tol)?;
        action_residual = action_residual.max(point_residual(&lhs, &fg.range(tol)));
        let back = transport_arrow(&vs, &fg, tol)?;
        inverse_residual = inverse_residual.max(arrow_residual(&back, g));
    }
    for pair in arrows.windows(2) {
        let g1 = &pair[0];
        let g2 = Arrow { unitary: pair[1].unitary.clone(), source: g1.range(tol) };
        let composed = transport_arrow(v, &arrow_compose(&g2, g1, tol)?, tol)?;
        let (f2, f1) = (transport_arrow(v, &g2, tol)?, transport_arrow(v, g1, tol)?);
        let direct = arrow_compose(&f2, &f1, tol)?;
        composition_residual = composition_residual.max(arrow_residual(&composed, &direct));
    }
    let max_residual = action_residual.max(composition_residual).max(inverse_residual);
    Ok(FunctorialityReport {
        action_residual,
        composition_residual,
        inverse_residual,
        max_residual,
        passed: max_residual < tol.eq_at(lit(points.first().map(|p| p.descriptor().ambient_dim()).unwrap_or(1) as f64)),
    })
}

/// Two different arrows with one source, showing the source map is not
/// injective near units.
pub fn non_etale_witness<T: Real>(x: &UnitPoint<T>, u: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Result<(Arrow<T>, Arrow<T>)> {
    let g = Arrow::new(u.clone(), x.clone(), tol)?;
    Ok((Arrow::unit(x), g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{random_unitary_with, seeded_rng};
    use crate::algebra::{exp_i_hermitian, pauli, phase_permutation_group, sot_metric, AlgebraDescriptor};
    use crate::scalar::c;
    use crate::subalgebra::{conjugate_subalgebra, CommutativeSubalgebra};
    use crate::unitspace::{unit_metric, UnitPoint};
    use rand::Rng;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn m(n: usize) -> AlgebraDescriptor {
        AlgebraDescriptor::matrix(n).unwrap()
    }

    fn swap() -> AlgebraElement<f64> {
        let s = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        AlgebraElement::new(m(2), s, &tol()).unwrap()
    }

    fn d2_point(block: usize) -> UnitPoint<f64> {
        UnitPoint::on_block(CommutativeSubalgebra::diagonal(m(2), &tol()), block, &tol()).unwrap()
    }

    fn random_point<R: Rng>(desc: AlgebraDescriptor, rng: &mut R) -> UnitPoint<f64> {
        let t = tol();
        let d = desc.ambient_dim();
        let base = if d > 1 && rng.random_bool(0.3) {
            CommutativeSubalgebra::from_partition(desc, &[(0..d - 1).collect(), vec![d - 1]], &t).unwrap()
        } else {
            CommutativeSubalgebra::diagonal(desc, &t)
        };
        let b = conjugate_subalgebra(&random_unitary_with(desc, rng), &base, &t).unwrap();
        let block = rng.random_range(0..b.dimension());
        UnitPoint::on_block(b, block, &t).unwrap()
    }

    #[test]
    fn act_examples() {
        let t = tol();
        assert!(act(&swap(), &d2_point(0), &t).unwrap().same_as(&d2_point(1), &t));
        let mut rng = seeded_rng(4);
        let x = random_point(m(3), &mut rng);
        assert!(act(&AlgebraElement::identity(m(3)), &x, &t).unwrap().same_as(&x, &t));
        let k3 = AlgebraDescriptor::commutative(3).unwrap();
        let u = AlgebraElement::diagonal(k3, &[crate::scalar::phase(0.3), c(-1.0, 0.0), c(0.0, 1.0)]).unwrap();
        for b in 0..3 {
            let x = UnitPoint::on_block(CommutativeSubalgebra::diagonal(k3, &t), b, &t).unwrap();
            assert!(act(&u, &x, &t).unwrap().same_as(&x, &t));
        }
        let bad = AlgebraElement::diagonal(m(2), &[c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(act(&bad, &d2_point(0), &t), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn action_axioms() {
        let t = tol();
        let mut rng = seeded_rng(500);
        for _ in 0..500 {
            let desc = m(rng.random_range(2..=4));
            let x = random_point(desc, &mut rng);
            let u = random_unitary_with::<f64, _>(desc, &mut rng);
            let v = random_unitary_with::<f64, _>(desc, &mut rng);
            let lhs = act(&u.mul(&v).unwrap(), &x, &t).unwrap();
            let rhs = act(&u, &act(&v, &x, &t).unwrap(), &t).unwrap();
            assert!(lhs.same_as(&rhs, &t));
            let same = act(&AlgebraElement::identity(desc), &x, &t).unwrap();
            assert_eq!(same.subalgebra().basis(), x.subalgebra().basis());
            assert_eq!(same.character(), x.character());
        }
    }

    #[test]
    fn commutative_action_is_trivial() {
        let t = tol();
        let mut rng = seeded_rng(201);
        for _ in 0..200 {
            let desc = AlgebraDescriptor::commutative(rng.random_range(1..=6)).unwrap();
            let b = CommutativeSubalgebra::diagonal(desc, &t);
            let x = UnitPoint::on_block(b.clone(), rng.random_range(0..b.dimension()), &t).unwrap();
            let u = random_unitary_with::<f64, _>(desc, &mut rng);
            let y = act(&u, &x, &t).unwrap();
            assert!(y.same_as(&x, &t));
        }
    }

    #[test]
    fn compose_and_inverse_examples() {
        let t = tol();
        let x = d2_point(0);
        let g = Arrow::new(swap(), x.clone(), &t).unwrap();
        let back = arrow_compose(&Arrow::unit(&g.range(&t)), &g, &t).unwrap();
        assert!(back.same_as(&g, &t));
        let g2 = Arrow::new(swap(), d2_point(1), &t).unwrap();
        let loop_ = arrow_compose(&g2, &g, &t).unwrap();
        assert!(loop_.same_as(&Arrow::unit(&x), &t));
        assert!(matches!(arrow_compose(&g, &g, &t), Err(Error::NotComposable { .. })));

        assert!(arrow_inverse(&Arrow::unit(&x), &t).same_as(&Arrow::unit(&x), &t));
        assert!(arrow_inverse(&g, &t).same_as(&g2, &t));
    }

    #[test]
    fn groupoid_axioms() {
        let t = tol();
        let mut rng = seeded_rng(300);
        for _ in 0..300 {
            let desc = m(rng.random_range(2..=4));
            let x = random_point(desc, &mut rng);
            let g1 = Arrow::new(random_unitary_with(desc, &mut rng), x, &t).unwrap();
            let g2 = Arrow::new(random_unitary_with(desc, &mut rng), g1.range(&t), &t).unwrap();
            let g3 = Arrow::new(random_unitary_with(desc, &mut rng), g2.range(&t), &t).unwrap();
            let left = arrow_compose(&arrow_compose(&g3, &g2, &t).unwrap(), &g1, &t).unwrap();
            let right = arrow_compose(&g3, &arrow_compose(&g2, &g1, &t).unwrap(), &t).unwrap();
            assert!(left.same_as(&right, &t));
            let g21 = arrow_compose(&g2, &g1, &t).unwrap();
            assert!(g21.source().same_as(g1.source(), &t));
            assert!(g21.range(&t).same_as(&g2.range(&t), &t));
            assert!(arrow_compose(&g1, &Arrow::unit(g1.source()), &t).unwrap().same_as(&g1, &t));
            assert!(arrow_compose(&Arrow::unit(&g1.range(&t)), &g1, &t).unwrap().same_as(&g1, &t));
            let inv = arrow_inverse(&g1, &t);
            assert!(arrow_compose(&g1, &inv, &t).unwrap().same_as(&Arrow::unit(&g1.range(&t)), &t));
            assert!(arrow_compose(&inv, &g1, &t).unwrap().same_as(&Arrow::unit(g1.source()), &t));
            assert!(arrow_inverse(&inv, &t).same_as(&g1, &t));
        }
    }

    #[test]
    fn haar_examples() {
        let t = tol();
        let g = phase_permutation_group::<f64>(2, 2, 100).unwrap();
        let h = haar_system_build(g, &t).unwrap();
        assert_eq!(h.order(), 8);
        assert!(h.weights().iter().all(|w| *w == Ratio::from_integer(1)));
        assert_eq!(h.fiber_mass(), Ratio::from_integer(8));
        let one = haar_system_build(vec![AlgebraElement::<f64>::identity(m(2))], &t).unwrap();
        assert_eq!(one.order(), 1);
        let s = 0.5f64.sqrt();
        let had = AlgebraElement::new(m(2), CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]), &t).unwrap();
        let sw = swap();
        assert!(matches!(haar_system_build(vec![AlgebraElement::identity(m(2)), had, sw], &t), Err(Error::NotAGroup(_))));
        assert!(matches!(haar_system_build(vec![swap()], &t), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn haar_table_matches_exact_group() {
        let t = tol();
        let exact = crate::algebra::PhasePermutationGroup::new(3, 3, 1000).unwrap();
        let h = haar_system_build(exact.to_elements::<f64>(), &t).unwrap();
        assert_eq!(h.multiplication_table(), exact.multiplication_table().as_slice());
        for g in 0..h.order() {
            assert_eq!(h.product(g, h.inverse(g)), h.identity());
        }
    }

    #[test]
    fn left_invariance() {
        let t = tol();
        for root in [2, 3] {
            let h = haar_system_build(phase_permutation_group::<f64>(2, root, 100).unwrap(), &t).unwrap();
            let naive = HaarSystem::dirac_at_unit(phase_permutation_group::<f64>(2, root, 100).unwrap(), &t).unwrap();
            for x in [d2_point(0), d2_point(1)] {
                assert!(verify_left_invariance(&h, &Arrow::unit(&x), &t).unwrap());
                for u in h.elements() {
                    let gamma = Arrow::new(u.clone(), x.clone(), &t).unwrap();
                    assert!(verify_left_invariance(&h, &gamma, &t).unwrap());
                    let expected = gamma.is_unit(&t);
                    assert_eq!(verify_left_invariance(&naive, &gamma, &t).unwrap(), expected);
                }
            }
        }
        let h = haar_system_build(phase_permutation_group::<f64>(2, 2, 100).unwrap(), &t).unwrap();
        let gamma = Arrow::new(swap(), d2_point(0), &t).unwrap();
        assert!(verify_left_invariance(&h, &gamma, &t).unwrap());
        let rot = exp_i_hermitian(&pauli('x'), 0.1, &t).unwrap();
        let outside = Arrow::new(rot, d2_point(0), &t).unwrap();
        assert!(matches!(verify_left_invariance(&h, &outside, &t), Err(Error::NotInGroup)));
    }

    #[test]
    fn functoriality() {
        let t = tol();
        let id = AlgebraElement::identity(m(2));
        let pts = [d2_point(0), d2_point(1)];
        let arrows = [Arrow::new(swap(), d2_point(0), &t).unwrap(), Arrow::new(swap(), d2_point(1), &t).unwrap()];
        let rep = functoriality_isomorphism_check(&id, &pts, &arrows, &t).unwrap();
        assert_eq!(rep.max_residual, 0.0);
        assert!(transport_point(&swap(), &d2_point(0), &t).unwrap().same_as(&d2_point(1), &t));

        let mut rng = seeded_rng(100);
        for _ in 0..100 {
            let desc = m(rng.random_range(2..=3));
            let v = random_unitary_with::<f64, _>(desc, &mut rng);
            let points: Vec<_> = (0..3).map(|_| random_point(desc, &mut rng)).collect();
            let arrows: Vec<_> = (0..3)
                .map(|_| Arrow::new(random_unitary_with(desc, &mut rng), random_point(desc, &mut rng), &t).unwrap())
                .collect();
            let rep = functoriality_isomorphism_check(&v, &points, &arrows, &t).unwrap();
            assert!(rep.passed, "{rep:?}");
            assert!(rep.max_residual < t.tau_eq);
        }
    }

    #[test]
    fn non_etale_demonstration() {
        let t = tol();
        let x = d2_point(0);
        let u = AlgebraElement::diagonal(m(2), &[c(1.0, 0.0), crate::scalar::phase(1e-3)]).unwrap();
        let (a, b) = non_etale_witness(&x, &u, &t).unwrap();
        assert!(a.source().same_as(b.source(), &t));
        assert!(!a.same_as(&b, &t));
    }

    /// Along `u_m → 1` outside the normalizer the transported subalgebras keep
    /// a fixed distance from the limit point: metric continuity of the action
    /// holds along the normalizer only.
    #[test]
    fn action_continuity_sampling() {
        let t = tol();
        let mut rng = seeded_rng(50);
        for _ in 0..50 {
            let desc = m(rng.random_range(2..=3));
            let x = random_point(desc, &mut rng);
            let u = random_unitary_with::<f64, _>(desc, &mut rng);
            let h = crate::algebra::random::random_hermitian_with::<f64, _>(desc, &mut rng);
            let limit = act(&u, &x, &t).unwrap();
            let mut previous = f64::INFINITY;
            for k in 1..=10 {
                let um = exp_i_hermitian(&h, 2f64.powi(-k), &t).unwrap().mul(&u).unwrap();
                let sot = sot_metric(&um, &u).unwrap();
                assert!(sot < previous);
                previous = sot;
                let d = unit_metric(&act(&um, &x, &t).unwrap(), &limit, &t).unwrap();
                assert!(d > 0.0);
            }
            // phases commuting with the subalgebra fix the point exactly
            let b = x.subalgebra();
            for k in 1..=10 {
                let vals: Vec<num_complex::Complex<f64>> = (0..b.dimension()).map(|i| crate::scalar::phase(2f64.powi(-k) * i as f64)).collect();
                let w = b.element_from_values(&vals).unwrap().mul(&u.adjoint()).unwrap().adjoint();
                let d = unit_metric(&act(&w, &act(&u.adjoint(), &limit, &t).unwrap(), &t).unwrap(), &limit, &t).unwrap();
                assert!(d < 1e-12, "{d}");
            }
        }
    }
}
