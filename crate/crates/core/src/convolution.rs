//! Convolution *-algebra of a finite piece of the conjugation groupoid: a
//! finite unitary group acting on an invariant finite set of unit points.

use std::sync::Arc;

use num_complex::Complex;
use num_rational::Ratio;
use rand::Rng;

use crate::algebra::{AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::groupoid::{act, Arrow, HaarSystem};
use crate::scalar::{cabs, lit, real, spectral_norm, to_f64, CMatrix, Real};
use crate::subalgebra::{evaluate_character, CommutativeSubalgebra};
use crate::unitspace::{partial_eval, ExtendedComplex, UnitPoint};

/// `G ⋉ X` for a finite group `G` and a `G`-invariant finite set `X`.
///
/// Arrow `(g, p)` has id `g · |X| + p`, source `X[p]` and range
/// `X[action[g][p]]`.
#[derive(Debug)]
pub struct FiniteGroupoid<T: Real> {
    group: HaarSystem<T>,
    points: Vec<UnitPoint<T>>,
    action: Vec<Vec<usize>>,
}

impl<T: Real> FiniteGroupoid<T> {
    /// Orbit closure of `seeds` under `group`, de-duplicated by canonical
    /// equality.
    pub fn build(group: HaarSystem<T>, seeds: &[UnitPoint<T>], tol: &ToleranceConfig<T>) -> Result<Arc<Self>> {
        let desc = group.elements()[0].descriptor();
        let mut points: Vec<UnitPoint<T>> = Vec::new();
        for s in seeds {
            desc.ensure_same(&s.descriptor())?;
            if !points.iter().any(|p| p.same_as(s, tol)) {
                points.push(s.clone());
            }
        }
        let mut action: Vec<Vec<usize>> = vec![Vec::new(); group.order()];
        let mut next = 0;
        while next < points.len() {
            let x = points[next].clone();
            for (g, u) in group.elements().iter().enumerate() {
                let y = act(u, &x, tol)?;
                let idx = match points.iter().position(|p| p.same_as(&y, tol)) {
                    Some(i) => i,
                    None => {
                        points.push(y);
                        points.len() - 1
                    }
                };
                action[g].push(idx);
            }
            next += 1;
        }
        Ok(Arc::new(Self { group, points, action }))
    }

    pub fn group(&self) -> &HaarSystem<T> {
        &self.group
    }

    pub fn points(&self) -> &[UnitPoint<T>] {
        &self.points
    }

    pub fn group_order(&self) -> usize {
        self.group.order()
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.group.order() * self.points.len()
    }

    pub fn arrow_id(&self, g: usize, p: usize) -> usize {
        g * self.points.len() + p
    }

    /// `(group index, point index)` of an arrow id.
    pub fn arrow_parts(&self, id: usize) -> (usize, usize) {
        (id / self.points.len(), id % self.points.len())
    }

    /// Index of `g · X[p]`.
    pub fn act_index(&self, g: usize, p: usize) -> usize {
        self.action[g][p]
    }

    /// Index of a point equal to `x`.
    pub fn point_index(&self, x: &UnitPoint<T>, tol: &ToleranceConfig<T>) -> Option<usize> {
        self.points.iter().position(|p| p.same_as(x, tol))
    }

    pub fn arrow(&self, id: usize) -> Arrow<T> {
        let (g, p) = self.arrow_parts(id);
        Arrow::new(self.group.elements()[g].clone(), self.points[p].clone(), &ToleranceConfig::default())
            .expect("group elements are unitary")
    }
}

pub fn build_orbit_groupoid<T: Real>(group: HaarSystem<T>, seeds: &[UnitPoint<T>], tol: &ToleranceConfig<T>) -> Result<Arc<FiniteGroupoid<T>>> {
    FiniteGroupoid::build(group, seeds, tol)
}

/// A complex function on the arrows of a [`FiniteGroupoid`].
#[derive(Debug, Clone)]
pub struct GroupoidFunction<T: Real> {
    groupoid: Arc<FiniteGroupoid<T>>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GroupoidFunction<T> {
    pub fn zeros(groupoid: &Arc<FiniteGroupoid<T>>) -> Self {
        Self { groupoid: groupoid.clone(), values: vec![Complex::new(T::zero(), T::zero()); groupoid.arrow_count()] }
    }

    pub fn from_values(groupoid: &Arc<FiniteGroupoid<T>>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != groupoid.arrow_count() {
            return Err(Error::GroupoidMismatch);
        }
        Ok(Self { groupoid: groupoid.clone(), values })
    }

    /// `f(g, p) = value(g, p)`.
    pub fn from_fn(groupoid: &Arc<FiniteGroupoid<T>>, mut value: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let values = (0..groupoid.arrow_count())
            .map(|id| {
                let (g, p) = groupoid.arrow_parts(id);
                value(g, p)
            })
            .collect();
        Self { groupoid: groupoid.clone(), values }
    }

    /// The convolution unit: `1` on unit arrows.
    pub fn unit(groupoid: &Arc<FiniteGroupoid<T>>) -> Self {
        let id = groupoid.group().identity();
        Self::from_fn(groupoid, |g, _| if g == id { real(T::one()) } else { real(T::zero()) })
    }

    /// Supported on unit arrows with the given value per point.
    pub fn on_units(groupoid: &Arc<FiniteGroupoid<T>>, mut value: impl FnMut(usize) -> Complex<T>) -> Self {
        let id = groupoid.group().identity();
        Self::from_fn(groupoid, |g, p| if g == id { value(p) } else { real(T::zero()) })
    }

    /// Independent entries with real and imaginary parts uniform in `[-1, 1)`.
    pub fn random<R: Rng + ?Sized>(groupoid: &Arc<FiniteGroupoid<T>>, rng: &mut R) -> Self {
        Self::from_fn(groupoid, |_, _| Complex::new(lit(rng.random_range(-1.0..1.0)), lit(rng.random_range(-1.0..1.0))))
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid<T>> {
        &self.groupoid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn value(&self, g: usize, p: usize) -> Complex<T> {
        self.values[self.groupoid.arrow_id(g, p)]
    }

    fn same_groupoid(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.groupoid, &other.groupoid) {
            Ok(())
        } else {
            Err(Error::GroupoidMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_groupoid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { groupoid: self.groupoid.clone(), values })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_groupoid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { groupoid: self.groupoid.clone(), values })
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { groupoid: self.groupoid.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `sup |f|`.
    pub fn sup_norm(&self) -> T {
        self.values.iter().map(|z| cabs(*z)).fold(T::zero(), |m, x| m.max(x))
    }

    /// `sup |f − g|`, or an error when the groupoids differ.
    pub fn distance(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.sup_norm())
    }
}

fn weight<T: Real>(w: Ratio<u64>) -> T {
    lit::<T>(*w.numer() as f64) / lit::<T>(*w.denom() as f64)
}

/// `(f * g)(u, x) = Σ_w f(u w⁻¹, w·x) g(w, x) λ(w)`.
pub fn convolve<T: Real>(f: &GroupoidFunction<T>, g: &GroupoidFunction<T>) -> Result<GroupoidFunction<T>> {
    f.same_groupoid(g)?;
    let gpd = &f.groupoid;
    let group = gpd.group();
    let mut out = GroupoidFunction::zeros(gpd);
    for p in 0..gpd.point_count() {
        for w in 0..group.order() {
            let gw = g.value(w, p);
            if gw == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            let gw = gw * real(weight::<T>(group.weight(w)));
            let wp = gpd.act_index(w, p);
            let w_inv = group.inverse(w);
            for u in 0..group.order() {
                let uw = group.product(u, w_inv);
                out.values[gpd.arrow_id(u, p)] += f.value(uw, wp) * gw;
            }
        }
    }
    Ok(out)
}

/// `f*(u, x) = conj f(u*, u·x)`.
pub fn involution<T: Real>(f: &GroupoidFunction<T>) -> GroupoidFunction<T> {
    let gpd = f.groupoid.clone();
    let group = gpd.group();
    GroupoidFunction::from_fn(&gpd, |u, p| f.value(group.inverse(u), gpd.act_index(u, p)).conj())
}

fn fiber_sup<T: Real>(f: &GroupoidFunction<T>) -> T {
    let gpd = &f.groupoid;
    let mut best = T::zero();
    for p in 0..gpd.point_count() {
        let mut total = T::zero();
        for w in 0..gpd.group_order() {
            total += cabs(f.value(w, p)) * weight::<T>(gpd.group().weight(w));
        }
        best = best.max(total);
    }
    best
}

/// `max(sup_x ∫|f| dλ_x, sup_x ∫|f*| dλ_x)`.
pub fn i_norm<T: Real>(f: &GroupoidFunction<T>) -> T {
    fiber_sup(f).max(fiber_sup(&involution(f)))
}

/// Left convolution by `f` on `ℓ²` of the fiber over point `p`, in the
/// basis of group indices.
pub fn regular_representation_block<T: Real>(f: &GroupoidFunction<T>, p: usize) -> CMatrix<T> {
    let gpd = &f.groupoid;
    let group = gpd.group();
    let n = group.order();
    CMatrix::from_fn(n, n, |u, w| {
        let s = weight::<T>(group.weight(w)).sqrt();
        f.value(group.product(u, group.inverse(w)), gpd.act_index(w, p)) * real(s)
    })
}

/// The operator `Λ(f)` on `ℓ²` of all arrows, indexed by arrow id. It is
/// block diagonal over sources.
pub fn regular_representation<T: Real>(f: &GroupoidFunction<T>) -> CMatrix<T> {
    let gpd = &f.groupoid;
    let n = gpd.arrow_count();
    let mut out = CMatrix::<T>::zeros(n, n);
    for p in 0..gpd.point_count() {
        let block = regular_representation_block(f, p);
        for u in 0..gpd.group_order() {
            for w in 0..gpd.group_order() {
                out[(gpd.arrow_id(u, p), gpd.arrow_id(w, p))] = block[(u, w)];
            }
        }
    }
    out
}

/// `‖Λ(f)‖`, the largest singular value over the source blocks.
pub fn regular_representation_norm<T: Real>(f: &GroupoidFunction<T>) -> T {
    (0..f.groupoid.point_count())
        .map(|p| spectral_norm(&regular_representation_block(f, p)))
        .fold(T::zero(), |m, x| m.max(x))
}

/// `ι_B(b)`: `χ(b)` on unit arrows over points `(B, χ)`, zero elsewhere.
pub fn iota_fixed_subalgebra<T: Real>(
    b: &AlgebraElement<T>,
    subalgebra: &CommutativeSubalgebra<T>,
    gpd: &Arc<FiniteGroupoid<T>>,
    tol: &ToleranceConfig<T>,
) -> Result<GroupoidFunction<T>> {
    subalgebra.descriptor().ensure_same(&b.descriptor())?;
    let distance = subalgebra.distance_to(b);
    if distance > tol.eq_at(b.frobenius_norm()) {
        return Err(Error::NotMember { residual: to_f64(distance) });
    }
    let mut values = vec![None; gpd.point_count()];
    let mut seen = vec![false; subalgebra.dimension()];
    for (i, x) in gpd.points().iter().enumerate() {
        if let Some(map) = subalgebra.match_blocks(x.subalgebra(), tol) {
            values[i] = Some(evaluate_character(x.subalgebra(), x.character(), b, tol)?);
            if let Some(block) = map.iter().position(|&m| m == x.block()) {
                seen[block] = true;
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::MissingCharacters);
    }
    Ok(GroupoidFunction::on_units(gpd, |p| values[p].unwrap_or_else(|| real(T::zero()))))
}

/// `π₀(a)`: `χ(a)` on the unit arrow over `(B, χ)` when `a ∈ B`, zero
/// otherwise.
pub fn naive_evaluation<T: Real>(a: &AlgebraElement<T>, gpd: &Arc<FiniteGroupoid<T>>, tol: &ToleranceConfig<T>) -> Result<GroupoidFunction<T>> {
    let mut values = Vec::with_capacity(gpd.point_count());
    for x in gpd.points() {
        values.push(match partial_eval(a, x, tol)? {
            ExtendedComplex::Finite(z) => z,
            ExtendedComplex::Infinity => real(T::zero()),
        });
    }
    Ok(GroupoidFunction::on_units(gpd, |p| values[p]))
}

/// `π₀(ab) − π₀(a) * π₀(b)` and its sup norm.
pub fn naive_multiplicativity_defect<T: Real>(
    a: &AlgebraElement<T>,
    b: &AlgebraElement<T>,
    gpd: &Arc<FiniteGroupoid<T>>,
    tol: &ToleranceConfig<T>,
) -> Result<(GroupoidFunction<T>, T)> {
    let lhs = naive_evaluation(&a.mul(b)?, gpd, tol)?;
    let rhs = convolve(&naive_evaluation(a, gpd, tol)?, &naive_evaluation(b, gpd, tol)?)?;
    let defect = lhs.sub(&rhs)?;
    let size = defect.sup_norm();
    Ok((defect, size))
}
