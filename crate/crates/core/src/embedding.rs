//! Fiberwise picture of the diagonal embedding over sampled projective
//! points: `Π(A) = ⊕ A`, the diagonal function `[v] ↦ ⟨v, Av⟩`, the center
//! test, and the index of square operators.

use num_complex::Complex;

use crate::algebra::random::{random_unit_vector, seeded_rng};
use crate::algebra::{AlgebraDescriptor, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::scalar::{basis_vector, cabs, inner, lit, real, to_f64, vec_norm, CMatrix, CVector, Real};

/// Unit vectors `v_1, …, v_m`, one per sampled fiber `[v_j]`.
#[derive(Debug, Clone)]
pub struct FiberSample<T: Real> {
    descriptor: AlgebraDescriptor,
    vectors: Vec<CVector<T>>,
    seed: u64,
}

impl<T: Real> FiberSample<T> {
    /// `m` Haar-uniform unit vectors of the ambient space of `descriptor`.
    pub fn for_descriptor(descriptor: AlgebraDescriptor, m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDescriptor("a fiber sample needs at least one vector".into()));
        }
        let mut rng = seeded_rng(seed);
        let d = descriptor.ambient_dim();
        let vectors = (0..m).map(|_| random_unit_vector(&mut rng, d)).collect();
        Ok(Self { descriptor, vectors, seed })
    }

    pub fn descriptor(&self) -> AlgebraDescriptor {
        self.descriptor
    }

    pub fn vectors(&self) -> &[CVector<T>] {
        &self.vectors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `m` points of `ℂP^{n-1}` for `M_n`.
pub fn sample_projective<T: Real>(n: usize, m: usize, seed: u64) -> Result<FiberSample<T>> {
    FiberSample::for_descriptor(AlgebraDescriptor::matrix(n)?, m, seed)
}

/// `Π(A)`: the same matrix on every fiber of a sample.
#[derive(Debug, Clone)]
pub struct FiberwiseOperator<T: Real> {
    sample: FiberSample<T>,
    block: AlgebraElement<T>,
}

impl<T: Real> FiberwiseOperator<T> {
    pub fn sample(&self) -> &FiberSample<T> {
        &self.sample
    }

    pub fn block(&self) -> &AlgebraElement<T> {
        &self.block
    }

    /// Operator on fiber `j`.
    pub fn fiber(&self, _j: usize) -> &AlgebraElement<T> {
        &self.block
    }

    /// Block-diagonal matrix on `⊕_j ℂ^n`.
    pub fn dense(&self) -> CMatrix<T> {
        let d = self.block.matrix().nrows();
        let m = self.sample.len();
        let mut out = CMatrix::<T>::zeros(d * m, d * m);
        for j in 0..m {
            out.view_mut((j * d, j * d), (d, d)).copy_from(self.block.matrix());
        }
        out
    }

    pub fn norm(&self) -> T {
        self.block.operator_norm()
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Ok(Self { sample: self.sample.clone(), block: self.block.mul(&other.block)? })
    }

    pub fn adjoint(&self) -> Self {
        Self { sample: self.sample.clone(), block: self.block.adjoint() }
    }

    pub fn is_zero(&self) -> bool {
        self.block.matrix().iter().all(|z| *z == Complex::new(T::zero(), T::zero()))
    }

    /// `Π(A) ξ` for `ξ ∈ ⊕_j ℂ^n`, one vector per fiber.
    pub fn apply(&self, xi: &[CVector<T>]) -> Vec<CVector<T>> {
        xi.iter().map(|v| self.block.matrix() * v).collect()
    }
}

pub fn pi_direct_sum<T: Real>(a: &AlgebraElement<T>, sample: &FiberSample<T>) -> Result<FiberwiseOperator<T>> {
    sample.descriptor.ensure_same(&a.descriptor())?;
    Ok(FiberwiseOperator { sample: sample.clone(), block: a.clone() })
}

fn ensure_unit<T: Real>(v: &CVector<T>, tol: &ToleranceConfig<T>) -> Result<()> {
    let n = vec_norm(v);
    if (n - T::one()).abs() > tol.tau_eq {
        return Err(Error::NotUnitVector { norm: to_f64(n) });
    }
    Ok(())
}

/// `⟨v, Av⟩`.
pub fn conditional_expectation_value<T: Real>(a: &AlgebraElement<T>, v: &CVector<T>, tol: &ToleranceConfig<T>) -> Result<Complex<T>> {
    if v.len() != a.descriptor().ambient_dim() {
        return Err(Error::OutsideAlgebra { descriptor: a.descriptor().to_string(), reason: format!("vector of length {}", v.len()) });
    }
    ensure_unit(v, tol)?;
    Ok(inner(v, &(a.matrix() * v)))
}

/// Block-scalar part `Σ_blocks (tr A_block / size) 1_block`, the projection
/// onto the center of the represented block algebra.
pub fn central_part<T: Real>(a: &AlgebraElement<T>) -> AlgebraElement<T> {
    let d = a.descriptor().ambient_dim();
    let mut out = CMatrix::<T>::zeros(d, d);
    for block in a.descriptor().blocks() {
        let size = lit::<T>(block.len() as f64);
        let mut tr = Complex::new(T::zero(), T::zero());
        for i in block.clone() {
            tr += a.matrix()[(i, i)];
        }
        for i in block {
            out[(i, i)] = tr / real(size);
        }
    }
    AlgebraElement::from_raw(a.descriptor(), out)
}

/// `‖Av − ⟨v, Av⟩ v‖`: how far the fiber operator is from scalar along `v`.
pub fn fiber_off_diagonal<T: Real>(a: &AlgebraElement<T>, v: &CVector<T>) -> T {
    let av = a.matrix() * v;
    let c = inner(v, &av);
    vec_norm(&(av - v.map(|z| z * c)))
}

/// Outcome of [`diagonal_membership_test`].
#[derive(Debug, Clone)]
pub struct DiagonalTest<T: Real> {
    pub is_diagonal: bool,
    /// Operator norm of `A` minus its central part.
    pub residual: T,
    /// A unit vector whose fiber operator is not scalar, when `!is_diagonal`.
    pub witness: Option<CVector<T>>,
    /// `‖Av − ⟨v, Av⟩ v‖` at the witness.
    pub witness_defect: T,
}

/// Whether `ι(A)` lies in the diagonal, i.e. `A` is central. For `M_n` the
/// criterion is `‖A − (tr A / n) 1‖ < tau_eq`. A non-central `A` comes with a
/// witness searched over the sample, then `e_j`, then `(e_j + e_k)/√2`.
pub fn diagonal_membership_test<T: Real>(a: &AlgebraElement<T>, sample: &FiberSample<T>, tol: &ToleranceConfig<T>) -> Result<DiagonalTest<T>> {
    sample.descriptor.ensure_same(&a.descriptor())?;
    let residual = a.sub(&central_part(a))?.operator_norm();
    if residual < tol.tau_eq {
        return Ok(DiagonalTest { is_diagonal: true, residual, witness: None, witness_defect: T::zero() });
    }
    let d = a.descriptor().ambient_dim();
    let mut candidates: Vec<CVector<T>> = sample.vectors.clone();
    candidates.extend((0..d).map(|j| basis_vector::<T>(d, j)));
    let s = lit::<T>(0.5).sqrt();
    for j in 0..d {
        for k in j + 1..d {
            candidates.push((basis_vector::<T>(d, j) + basis_vector::<T>(d, k)).map(|z| z * real(s)));
        }
    }
    for v in candidates {
        let defect = fiber_off_diagonal(a, &v);
        if defect > tol.tau_eq {
            return Ok(DiagonalTest { is_diagonal: false, residual, witness: Some(v), witness_defect: defect });
        }
    }
    Err(Error::NumericalInconsistency("non-central element with scalar fibers".into()))
}

/// Outcome of [`commutativity_report`].
#[derive(Debug, Clone)]
pub struct CommutativityReport<T: Real> {
    pub descriptor: AlgebraDescriptor,
    pub commutative: bool,
    /// Every matrix unit passes the diagonal test.
    pub basis_diagonal: bool,
    /// The conjugation action fixes every sampled point exactly.
    pub action_trivial: bool,
    /// A non-central element with its witness vector.
    pub diagonal_witness: Option<(AlgebraElement<T>, CVector<T>)>,
    /// Two unitaries with `‖UV − VU‖` nonzero, and that norm.
    pub noncommuting_unitaries: Option<(AlgebraElement<T>, AlgebraElement<T>, T)>,
    pub checked: Vec<&'static str>,
}

/// Clock `diag(ω^j)` and cyclic shift on the first block.
fn clock_and_shift<T: Real>(desc: AlgebraDescriptor) -> (AlgebraElement<T>, AlgebraElement<T>) {
    let d = desc.ambient_dim();
    let block = desc.blocks().into_iter().max_by_key(|b| b.len()).expect("non-empty");
    let n = block.len();
    let mut clock = CMatrix::<T>::identity(d, d);
    let mut shift = CMatrix::<T>::identity(d, d);
    for (j, i) in block.clone().enumerate() {
        clock[(i, i)] = crate::scalar::phase(lit::<T>(std::f64::consts::TAU * j as f64 / n as f64));
        shift[(i, i)] = Complex::new(T::zero(), T::zero());
    }
    for (j, i) in block.clone().enumerate() {
        shift[(block.start + (j + 1) % n, i)] = real(T::one());
    }
    (AlgebraElement::from_raw(desc, clock), AlgebraElement::from_raw(desc, shift))
}

/// The equivalent conditions for commutativity, read off on one algebra:
/// central matrix units, trivial conjugation action, commuting unitaries.
pub fn commutativity_report<T: Real>(descriptor: AlgebraDescriptor, sample: &FiberSample<T>, tol: &ToleranceConfig<T>) -> Result<CommutativityReport<T>> {
    use crate::groupoid::act;
    use crate::subalgebra::CommutativeSubalgebra;
    use crate::unitspace::UnitPoint;

    sample.descriptor.ensure_same(&descriptor)?;
    let mut checked = Vec::new();
    let mut basis_diagonal = true;
    let mut diagonal_witness = None;
    for (j, k) in descriptor.matrix_units() {
        let e = AlgebraElement::<T>::matrix_unit(descriptor, j, k)?;
        let test = diagonal_membership_test(&e, sample, tol)?;
        if !test.is_diagonal {
            basis_diagonal = false;
            if diagonal_witness.is_none() {
                diagonal_witness = test.witness.map(|w| (e, w));
            }
        }
    }
    checked.push("matrix units central");

    let mut rng = seeded_rng(sample.seed);
    let diag = CommutativeSubalgebra::diagonal(descriptor, tol);
    let mut action_trivial = true;
    for _ in 0..4 {
        let u = crate::algebra::random::random_unitary_with::<T, _>(descriptor, &mut rng);
        for b in 0..diag.dimension() {
            let x = UnitPoint::on_block(diag.clone(), b, tol)?;
            let y = act(&u, &x, tol)?;
            if y.subalgebra().basis() != x.subalgebra().basis() || y.character() != x.character() {
                action_trivial = false;
            }
        }
    }
    checked.push("conjugation action trivial");

    let (clock, shift) = clock_and_shift::<T>(descriptor);
    let gap = clock.commutator(&shift)?.operator_norm();
    let noncommuting_unitaries = if gap > tol.tau_eq { Some((clock, shift, gap)) } else { None };
    checked.push("clock and shift commute");

    Ok(CommutativityReport {
        descriptor,
        commutative: basis_diagonal && action_trivial && noncommuting_unitaries.is_none(),
        basis_diagonal,
        action_trivial,
        diagonal_witness,
        noncommuting_unitaries,
        checked,
    })
}

/// Outcome of [`fredholm_index`].
#[derive(Debug, Clone)]
pub struct FredholmReport<T: Real> {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub index: i64,
    pub rank: usize,
    /// A singular value within a factor 10 of the rank cut.
    pub near_threshold: bool,
    /// Orthonormal kernel basis, as columns.
    pub kernel: CMatrix<T>,
}

/// `dim ker T − dim coker T` on the space `T` acts on: the whole ambient
/// space for `M_n`, the compact part `H` for the truncated compacts.
/// Singular values at most `tau_rank · max(1, σ_max)` count as zero.
pub fn fredholm_index<T: Real>(t: &AlgebraElement<T>, tol: &ToleranceConfig<T>) -> Result<FredholmReport<T>> {
    let desc = t.descriptor();
    let m = match desc.scalar_index() {
        Some(n) => t.matrix().view((0, 0), (n, n)).into_owned(),
        None if desc.is_matrix() => t.matrix().clone(),
        None => return Err(Error::InvalidDescriptor(format!("index of {desc} not defined here"))),
    };
    index_of_matrix(&m, tol)
}

pub(crate) fn index_of_matrix<T: Real>(m: &CMatrix<T>, tol: &ToleranceConfig<T>) -> Result<FredholmReport<T>> {
    let (rows, cols) = m.shape();
    let svd = m.clone().svd(false, true);
    let sigma = &svd.singular_values;
    let top = sigma.iter().fold(T::zero(), |a, &s| a.max(s));
    let cut = tol.rank_at(top);
    let rank = sigma.iter().filter(|&&s| s > cut).count();
    let ten = lit::<T>(10.0);
    let near_threshold = sigma.iter().any(|&s| s > cut / ten && s <= cut * ten);
    let vt = svd.v_t.ok_or_else(|| Error::NumericalInconsistency("missing right singular vectors".into()))?;
    // right singular vectors of the vanishing singular values, plus the
    // directions beyond the computed ones when cols > rows
    let mut kernel_cols: Vec<CVector<T>> = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        if s <= cut {
            kernel_cols.push(vt.row(i).adjoint());
        }
    }
    let kernel = if kernel_cols.is_empty() { CMatrix::zeros(cols, 0) } else { CMatrix::from_columns(&kernel_cols) };
    let kernel_dim = cols - rank;
    let cokernel_dim = rows - rank;
    Ok(FredholmReport { kernel_dim, cokernel_dim, index: kernel_dim as i64 - cokernel_dim as i64, rank, near_threshold, kernel })
}

/// Kernel of `Π(T)` on every fiber, compared with fiber 0 by the distance of
/// the kernel projections. Returns the largest such distance.
pub fn kernel_bundle_defect<T: Real>(t: &AlgebraElement<T>, sample: &FiberSample<T>, tol: &ToleranceConfig<T>) -> Result<T> {
    let pi = pi_direct_sum(t, sample)?;
    let dense = pi.dense();
    let d = match t.descriptor().scalar_index() {
        Some(n) => n,
        None => t.descriptor().ambient_dim(),
    };
    let step = t.descriptor().ambient_dim();
    let mut first: Option<CMatrix<T>> = None;
    let mut worst = T::zero();
    for j in 0..sample.len() {
        let block = dense.view((j * step, j * step), (d, d)).into_owned();
        let k = index_of_matrix(&block, tol)?.kernel;
        let proj = &k * k.adjoint();
        match &first {
            None => first = Some(proj),
            Some(p0) => worst = worst.max(crate::scalar::frobenius(&(&proj - p0))),
        }
    }
    Ok(worst)
}

/// `|⟨v, Av⟩|` never exceeds `‖A‖`.
pub fn range_bound_holds<T: Real>(a: &AlgebraElement<T>, v: &CVector<T>, tol: &ToleranceConfig<T>) -> Result<bool> {
    Ok(cabs(conditional_expectation_value(a, v, tol)?) <= a.operator_norm() * (T::one() + tol.tau_eq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random::{random_element_with, random_unitary_with};
    use crate::algebra::{pauli, random_element};
    use crate::scalar::c;
    use crate::subalgebra::evaluate_character;
    use crate::unitspace::point_from_vector;
    use rand::Rng;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn m(n: usize) -> AlgebraDescriptor {
        AlgebraDescriptor::matrix(n).unwrap()
    }

    #[test]
    fn sample_examples() {
        let s = sample_projective::<f64>(2, 3, 1).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.vectors().iter().all(|v| v.len() == 2 && (vec_norm(v) - 1.0).abs() < 1e-12));
        let again = sample_projective::<f64>(2, 3, 1).unwrap();
        assert_eq!(s.vectors(), again.vectors());
        assert!(sample_projective::<f64>(2, 0, 1).is_err());
    }

    #[test]
    fn pi_is_faithful_homomorphism() {
        let t = tol();
        let s = sample_projective::<f64>(3, 4, 2).unwrap();
        let one = pi_direct_sum(&AlgebraElement::identity(m(3)), &s).unwrap();
        assert_eq!(one.dense(), CMatrix::identity(12, 12));
        let mut rng = seeded_rng(3);
        for _ in 0..20 {
            let a = random_element_with::<f64, _>(m(3), &mut rng);
            let b = random_element_with::<f64, _>(m(3), &mut rng);
            let (pa, pb) = (pi_direct_sum(&a, &s).unwrap(), pi_direct_sum(&b, &s).unwrap());
            let pab = pi_direct_sum(&a.mul(&b).unwrap(), &s).unwrap();
            assert!((pa.dense() * pb.dense() - pab.dense()).norm() < 1e-12);
            assert!((pa.adjoint().dense() - pa.dense().adjoint()).norm() == 0.0);
            assert!((crate::scalar::spectral_norm(&pa.dense()) - a.operator_norm()).abs() < 1e-12);
            assert!(!pa.is_zero());
            let xi: Vec<_> = s.vectors().to_vec();
            let applied = pa.apply(&xi);
            for (v, w) in xi.iter().zip(&applied) {
                assert!((a.matrix() * v - w).norm() < 1e-15);
            }
        }
        assert!(pi_direct_sum(&AlgebraElement::zero(m(3)), &s).unwrap().is_zero());
        assert!(matches!(pi_direct_sum(&AlgebraElement::identity(m(2)), &s), Err(Error::DescriptorMismatch { .. })));
        let _ = t;
    }

    #[test]
    fn expectation_examples() {
        let t = tol();
        let z = pauli::<f64>('z');
        let e0 = basis_vector::<f64>(2, 0);
        assert_eq!(conditional_expectation_value(&z, &e0, &t).unwrap(), c(1.0, 0.0));
        let s = 0.5f64.sqrt();
        let h = CVector::from_vec(vec![c(s, 0.0), c(s, 0.0)]);
        assert!(conditional_expectation_value(&z, &h, &t).unwrap().norm() < 1e-15);
        let e11 = AlgebraElement::matrix_unit(m(2), 0, 0).unwrap();
        let v = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert!((conditional_expectation_value(&e11, &v, &t).unwrap() - c(0.36, 0.0)).norm() < 1e-15);
        let long = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(conditional_expectation_value(&z, &long, &t), Err(Error::NotUnitVector { .. })));
    }

    #[test]
    fn expectation_matches_character() {
        let t = tol();
        let mut rng = seeded_rng(200);
        for _ in 0..200 {
            let n = rng.random_range(2..=4);
            let v = random_unit_vector::<f64, _>(&mut rng, n);
            let x = point_from_vector(&v, m(n), &t).unwrap();
            let vals: Vec<_> = (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let a = x.subalgebra().element_from_values(&vals).unwrap();
            let lhs = conditional_expectation_value(&a, &v, &t).unwrap();
            let rhs = evaluate_character(x.subalgebra(), x.character(), &a, &t).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
            // conjugate symmetry and linearity
            let b = random_element_with::<f64, _>(m(n), &mut rng);
            let sb = conditional_expectation_value(&b.adjoint(), &v, &t).unwrap();
            assert!((sb - conditional_expectation_value(&b, &v, &t).unwrap().conj()).norm() < 1e-12);
            let sum = conditional_expectation_value(&a.add(&b).unwrap(), &v, &t).unwrap();
            assert!((sum - lhs - conditional_expectation_value(&b, &v, &t).unwrap()).norm() < 1e-12);
            assert!(range_bound_holds(&b, &v, &t).unwrap());
        }
    }

    #[test]
    fn diagonal_test_examples() {
        let t = tol();
        let s4 = sample_projective::<f64>(4, 3, 1).unwrap();
        let three = AlgebraElement::identity(m(4)).scale(c(3.0, 0.0));
        assert!(diagonal_membership_test(&three, &s4, &t).unwrap().is_diagonal);
        let s2 = sample_projective::<f64>(2, 3, 1).unwrap();
        let z = diagonal_membership_test(&pauli::<f64>('z'), &s2, &t).unwrap();
        assert!(!z.is_diagonal);
        let w = z.witness.unwrap();
        assert!(fiber_off_diagonal(&pauli('z'), &w) > t.tau_eq);
        let e12 = AlgebraElement::matrix_unit(m(2), 0, 1).unwrap();
        assert!(!diagonal_membership_test(&e12, &s2, &t).unwrap().is_diagonal);
        // without a sample the standard basis cannot see σz; the Hadamard pair does
        let bare = FiberSample { descriptor: m(2), vectors: vec![], seed: 0 };
        let w = diagonal_membership_test(&pauli::<f64>('z'), &bare, &t).unwrap().witness.unwrap();
        assert!((w[0].re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn center_equivalence() {
        let t = tol();
        let mut rng = seeded_rng(30);
        for i in 0..100 {
            let n = rng.random_range(2..=4);
            let s = sample_projective::<f64>(n, 2, i).unwrap();
            let a = if i % 2 == 0 {
                random_element::<f64>(m(n), i)
            } else {
                AlgebraElement::identity(m(n)).scale(c(rng.random_range(-1.0..1.0), 1.0))
            };
            let test = diagonal_membership_test(&a, &s, &t).unwrap();
            let commutes = (0..5).all(|_| {
                let u = random_unitary_with::<f64, _>(m(n), &mut rng);
                a.commutator(&u).unwrap().operator_norm() < t.tau_eq
            });
            assert_eq!(test.is_diagonal, commutes);
        }
    }

    #[test]
    fn commutativity_reports() {
        let t = tol();
        let k3 = AlgebraDescriptor::commutative(3).unwrap();
        let r = commutativity_report(k3, &FiberSample::for_descriptor(k3, 2, 1).unwrap(), &t).unwrap();
        assert!(r.commutative && r.basis_diagonal && r.action_trivial && r.noncommuting_unitaries.is_none());
        let r = commutativity_report(m(2), &sample_projective(2, 2, 1).unwrap(), &t).unwrap();
        assert!(!r.commutative && !r.basis_diagonal);
        let (e, w) = r.diagonal_witness.unwrap();
        assert!(fiber_off_diagonal(&e, &w) > t.tau_eq);
        assert!((r.noncommuting_unitaries.unwrap().2 - 2.0).abs() < 1e-12);
        let r = commutativity_report(m(1), &sample_projective(1, 2, 1).unwrap(), &t).unwrap();
        assert!(r.commutative);
        let k1 = AlgebraDescriptor::truncated_compacts(1).unwrap();
        let r = commutativity_report(k1, &FiberSample::for_descriptor(k1, 2, 1).unwrap(), &t).unwrap();
        assert!(r.commutative);
        let k2 = AlgebraDescriptor::truncated_compacts(2).unwrap();
        let r = commutativity_report(k2, &FiberSample::for_descriptor(k2, 2, 1).unwrap(), &t).unwrap();
        assert!(!r.commutative);
    }

    #[test]
    fn index_examples() {
        let t = tol();
        let r = fredholm_index(&random_element::<f64>(m(3), 5), &t).unwrap();
        assert_eq!((r.index, r.kernel_dim), (0, 0));
        let k4 = AlgebraDescriptor::truncated_compacts(4).unwrap();
        let mut k = CMatrix::zeros(4, 4);
        k[(0, 0)] = c(1.0, 0.0);
        let op = AlgebraElement::compact_perturbation(k4, c(1.0, 0.0), &k).unwrap();
        assert_eq!(fredholm_index(&op, &t).unwrap().index, 0);
        let r = fredholm_index(&AlgebraElement::<f64>::zero(m(2)), &t).unwrap();
        assert_eq!((r.kernel_dim, r.cokernel_dim, r.index), (2, 2, 0));
        // I − e11 on the compact part has a one-dimensional kernel
        let op = AlgebraElement::compact_perturbation(k4, c(1.0, 0.0), &k.scale(-1.0)).unwrap();
        let r = fredholm_index(&op, &t).unwrap();
        assert_eq!((r.kernel_dim, r.index), (1, 0));
        assert!(!r.near_threshold);
        let s = FiberSample::for_descriptor(k4, 5, 3).unwrap();
        assert!(kernel_bundle_defect(&op, &s, &t).unwrap() < 1e-12);
        // the rank cut is flagged when a singular value sits near it
        let tiny = AlgebraElement::diagonal(m(2), &[c(1.0, 0.0), c(5e-9, 0.0)]).unwrap();
        assert!(fredholm_index(&tiny, &t).unwrap().near_threshold);
        let rect = CMatrix::<f64>::from_element(2, 3, c(1.0, 0.0));
        let r = index_of_matrix(&rect, &t).unwrap();
        assert_eq!((r.kernel_dim, r.cokernel_dim, r.index), (2, 1, 1));
        assert!(fredholm_index(&AlgebraElement::<f64>::identity(AlgebraDescriptor::commutative(2).unwrap()), &t).is_err());
    }

    #[test]
    fn index_of_singular_matrices() {
        let t = tol();
        let mut rng = seeded_rng(9);
        for _ in 0..50 {
            let n = rng.random_range(2..=6);
            let r = rng.random_range(0..n);
            // rank r product of random n×r and r×n factors
            let a = crate::algebra::random::gaussian_matrix::<f64, _>(&mut rng, n, r);
            let b = crate::algebra::random::gaussian_matrix::<f64, _>(&mut rng, r, n);
            let op = AlgebraElement::new(m(n), a * b, &t).unwrap();
            let rep = fredholm_index(&op, &t).unwrap();
            assert_eq!((rep.rank, rep.kernel_dim, rep.index), (r, n - r, 0));
            let s = sample_projective::<f64>(n, 3, 1).unwrap();
            assert!(kernel_bundle_defect(&op, &s, &t).unwrap() < 1e-10);
        }
    }
}
