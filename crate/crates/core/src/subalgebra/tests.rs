use super::*;
use crate::algebra::random::{random_element_with, random_unitary_with, seeded_rng};
use crate::algebra::{exp_i_hermitian, pauli, random_unitary};
use crate::scalar::{c, CMatrix};
use proptest::prelude::*;
use rand::Rng;

fn tol() -> ToleranceConfig<f64> {
    ToleranceConfig::default()
}

fn m(n: usize) -> AlgebraDescriptor {
    AlgebraDescriptor::matrix(n).unwrap()
}

fn hadamard() -> AlgebraElement<f64> {
    let s = 0.5f64.sqrt();
    let h = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
    AlgebraElement::new(m(2), h, &tol()).unwrap()
}

fn swap() -> AlgebraElement<f64> {
    let s = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    AlgebraElement::new(m(2), s, &tol()).unwrap()
}

/// Random element of `B`'s span.
fn sample_in<R: Rng>(b: &CommutativeSubalgebra<f64>, rng: &mut R) -> AlgebraElement<f64> {
    let values: Vec<Complex<f64>> = (0..b.dimension()).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
    b.element_from_values(&values).unwrap()
}

/// A random subalgebra: a random coarsening of singletons, conjugated by a
/// random unitary.
fn random_subalgebra<R: Rng>(desc: AlgebraDescriptor, rng: &mut R) -> CommutativeSubalgebra<f64> {
    let d = desc.ambient_dim();
    let blocks = rng.random_range(1..=d);
    let mut partition: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for i in 0..d {
        let slot = if i < blocks { i } else { rng.random_range(0..blocks) };
        partition[slot].push(i);
    }
    let base = CommutativeSubalgebra::from_partition(desc, &partition, &tol()).unwrap();
    let u = random_unitary_with(desc, rng);
    conjugate_subalgebra(&u, &base, &tol()).unwrap()
}

#[test]
fn generated_examples() {
    let t = tol();
    let e11 = AlgebraElement::matrix_unit(m(2), 0, 0).unwrap();
    let b = generated_commutative(m(2), &[e11], &t).unwrap();
    assert_eq!(b.partition(), &[vec![0], vec![1]]);
    assert!(b.same_as(&CommutativeSubalgebra::diagonal(m(2), &t), &t));

    let b = generated_commutative(m(3), &[AlgebraElement::identity(m(3))], &t).unwrap();
    assert_eq!(b.partition(), &[vec![0, 1, 2]]);

    let b = generated_commutative(m(2), &[pauli('x')], &t).unwrap();
    assert_eq!(b.dimension(), 2);
    let s = 0.5f64.sqrt();
    // columns (1, ±1)/√2
    assert!((b.basis() - hadamard().matrix()).norm() < 1e-12, "{}", b.basis());
    assert!((b.basis()[(0, 0)].re - s).abs() < 1e-12);
}

#[test]
fn generated_rejects_bad_input() {
    let t = tol();
    let e12 = AlgebraElement::matrix_unit(m(2), 0, 1).unwrap();
    assert!(matches!(generated_commutative(m(2), &[e12], &t), Err(Error::NotNormal { .. })));
    let err = generated_commutative(m(2), &[pauli('x'), pauli('z')], &t).unwrap_err();
    match err {
        // ‖[σx, σz]‖ = ‖−2iσy‖ = 2
        Error::NotCommuting { residual, .. } => assert!((residual - 2.0).abs() < 1e-12),
        other => panic!("{other}"),
    }
}

#[test]
fn generated_refines_jointly() {
    let t = tol();
    let d = m(4);
    let a = AlgebraElement::diagonal(d, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let b = AlgebraElement::diagonal(d, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
    let s = generated_commutative(d, std::slice::from_ref(&a), &t).unwrap();
    assert_eq!(s.partition(), &[vec![0, 1], vec![2, 3]]);
    let s = generated_commutative(d, &[a, b], &t).unwrap();
    assert!(s.is_maximal());
    let u = random_unitary::<f64>(d, 3);
    let conj = |x: &AlgebraElement<f64>| u.mul(x).unwrap().mul(&u.adjoint()).unwrap();
    let e = AlgebraElement::diagonal(d, &[c(2.0, 0.0), c(2.0, 0.0), c(-1.0, 0.5), c(3.0, 0.0)]).unwrap();
    let s = generated_commutative(d, &[conj(&e)], &t).unwrap();
    let mut sizes = s.block_sizes();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 1, 2]);
}

#[test]
fn masa_from_basis_examples() {
    let t = tol();
    let d3 = masa_from_basis(&AlgebraElement::identity(m(3)), &t).unwrap();
    assert_eq!(d3.basis(), &CMatrix::identity(3, 3));
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    let swapped = masa_from_basis(&swap(), &t).unwrap();
    assert_eq!(swapped.basis(), d2.basis());
    assert_eq!(swapped.partition(), d2.partition());
    let h = masa_from_basis(&hadamard(), &t).unwrap();
    assert!(h.same_as(&generated_commutative(m(2), &[pauli('x')], &t).unwrap(), &t));
    let bad = AlgebraElement::diagonal(m(2), &[c(2.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!(matches!(masa_from_basis(&bad, &t), Err(Error::NotUnitary { .. })));
}

#[test]
fn conjugation_examples() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    let same = conjugate_subalgebra(&AlgebraElement::identity(m(2)), &d2, &t).unwrap();
    assert_eq!(same.basis(), d2.basis());
    let (same, map) = d2.conjugate_with_map(&swap(), &t).unwrap();
    assert_eq!(same.basis(), d2.basis());
    assert_eq!(map, vec![1, 0]);
    let h = conjugate_subalgebra(&hadamard(), &d2, &t).unwrap();
    assert!(h.same_as(&masa_from_basis(&hadamard(), &t).unwrap(), &t));
    let m3 = AlgebraElement::<f64>::identity(m(3));
    assert!(matches!(conjugate_subalgebra(&m3, &d2, &t), Err(Error::DescriptorMismatch { .. })));
}

#[test]
fn character_examples() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    assert_eq!(characters(&d2).len(), 2);
    assert_eq!(characters(&CommutativeSubalgebra::<f64>::trivial(m(3), &t)).len(), 1);
    let e11 = AlgebraElement::matrix_unit(m(2), 0, 0).unwrap();
    assert_eq!(evaluate_character(&d2, Character::Block(0), &e11, &t).unwrap(), c(1.0, 0.0));
    assert_eq!(evaluate_character(&d2, Character::Block(1), &e11, &t).unwrap(), c(0.0, 0.0));

    let k3 = AlgebraDescriptor::truncated_compacts(3).unwrap();
    let bdiag = CommutativeSubalgebra::diagonal(k3, &t);
    let chars = characters(&bdiag);
    assert_eq!(chars.len(), 4);
    assert_eq!(chars.iter().filter(|c| **c == Character::Infinity).count(), 1);
    let mut k = CMatrix::zeros(3, 3);
    k[(0, 0)] = c(3.0, 0.0);
    let a = AlgebraElement::compact_perturbation(k3, c(2.0, 0.0), &k).unwrap();
    assert_eq!(evaluate_character(&bdiag, Character::Block(0), &a, &t).unwrap(), c(5.0, 0.0));
    assert_eq!(evaluate_character(&bdiag, Character::Infinity, &a, &t).unwrap(), c(2.0, 0.0));
    assert_eq!(evaluate_character(&bdiag, Character::Block(1), &a, &t).unwrap(), c(2.0, 0.0));
}

#[test]
fn character_errors() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    let e12 = AlgebraElement::matrix_unit(m(2), 0, 1).unwrap();
    assert!(matches!(evaluate_character(&d2, Character::Block(0), &e12, &t), Err(Error::NotMember { .. })));
    let e11 = AlgebraElement::matrix_unit(m(2), 0, 0).unwrap();
    assert!(matches!(evaluate_character(&d2, Character::Block(2), &e11, &t), Err(Error::InvalidCharacter(_))));
    assert!(matches!(evaluate_character(&d2, Character::Infinity, &e11, &t), Err(Error::InvalidCharacter(_))));
}

#[test]
fn membership_examples() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    let e11 = AlgebraElement::matrix_unit(m(2), 0, 0).unwrap();
    let p = membership_and_project(&e11, &d2, &t).unwrap();
    assert!(p.is_member && p.frobenius_distance == 0.0 && p.projection.approx_eq(&e11, &t));
    let e12 = AlgebraElement::matrix_unit(m(2), 0, 1).unwrap();
    let p = membership_and_project(&e12, &d2, &t).unwrap();
    assert!(!p.is_member);
    assert!((p.frobenius_distance - 1.0).abs() < 1e-15);
    assert!(p.projection.frobenius_norm() < 1e-15);
    let mut rng = seeded_rng(9);
    for _ in 0..5 {
        let b = random_subalgebra(m(4), &mut rng);
        let one = AlgebraElement::identity(m(4));
        let p = membership_and_project(&one, &b, &t).unwrap();
        assert!(p.is_member && p.projection.approx_eq(&one, &t));
    }
}

#[test]
fn expectation_is_conditional() {
    let t = tol();
    let mut rng = seeded_rng(21);
    for _ in 0..50 {
        let d = m(rng.random_range(2..=5));
        let b = random_subalgebra(d, &mut rng);
        let a = random_element_with::<f64, _>(d, &mut rng);
        let e = b.expectation(&a);
        // idempotent
        assert!(b.expectation(&e).approx_eq(&e, &t));
        // positive: E(a*a) has nonnegative spectrum
        let pos = b.expectation(&a.adjoint().mul(&a).unwrap());
        let eig = nalgebra::SymmetricEigen::new(pos.matrix().clone());
        assert!(eig.eigenvalues.iter().all(|&x| x > -1e-10));
        // Frobenius-orthogonal residual
        let r = a.sub(&e).unwrap();
        for q in b.span_basis() {
            assert!(crate::scalar::frobenius_inner(&q, r.matrix()).norm() < 1e-10);
        }
    }
}

#[test]
fn bimodularity() {
    let t = tol();
    let mut rng = seeded_rng(5);
    for _ in 0..100 {
        let d = m(rng.random_range(2..=4));
        let b = random_subalgebra(d, &mut rng);
        let (b1, b2) = (sample_in(&b, &mut rng), sample_in(&b, &mut rng));
        let a = random_element_with::<f64, _>(d, &mut rng);
        let lhs = b.expectation(&b1.mul(&a).unwrap().mul(&b2).unwrap());
        let rhs = b1.mul(&b.expectation(&a)).unwrap().mul(&b2).unwrap();
        assert!(lhs.sub(&rhs).unwrap().operator_norm() < t.eq_at(lhs.operator_norm()));
    }
}

#[test]
fn characters_are_multiplicative() {
    let t = tol();
    let mut rng = seeded_rng(77);
    for _ in 0..100 {
        let d = if rng.random_bool(0.5) { m(rng.random_range(2..=4)) } else { AlgebraDescriptor::truncated_compacts(rng.random_range(1..=4)).unwrap() };
        let b = if d.is_truncated_compacts() && rng.random_bool(0.5) { CommutativeSubalgebra::diagonal(d, &t) } else { random_subalgebra(d, &mut rng) };
        let (x, y) = (sample_in(&b, &mut rng), sample_in(&b, &mut rng));
        let xy = x.mul(&y).unwrap();
        for chi in characters(&b) {
            let ex = evaluate_character(&b, chi, &x, &t).unwrap();
            let ey = evaluate_character(&b, chi, &y, &t).unwrap();
            let exy = evaluate_character(&b, chi, &xy, &t).unwrap();
            assert!((exy - ex * ey).norm() < 10.0 * t.tau_eq);
            let es = evaluate_character(&b, chi, &x.adjoint(), &t).unwrap();
            assert!((es - ex.conj()).norm() < t.eq_at(x.operator_norm()));
        }
    }
}

#[test]
fn canonical_form_is_idempotent() {
    let t = tol();
    let mut rng = seeded_rng(1);
    for _ in 0..100 {
        let d = m(rng.random_range(1..=5));
        let b = random_subalgebra(d, &mut rng);
        let once = b.canonicalize(&t);
        let twice = once.canonicalize(&t);
        assert_eq!(once.basis(), b.basis());
        assert_eq!(twice.basis(), once.basis());
        assert_eq!(twice.partition(), once.partition());
        // recomputing from the projections lands on the same form up to rounding
        let fresh = b.recanonicalize(&t);
        assert_eq!(fresh.partition(), b.partition());
        assert!((fresh.basis() - b.basis()).norm() < 1e-12);
    }
}

#[test]
fn canonical_form_invariants() {
    let t = tol();
    let mut rng = seeded_rng(2);
    for _ in 0..100 {
        let d = AlgebraDescriptor::truncated_compacts(rng.random_range(1..=4)).unwrap();
        let b = random_subalgebra(d, &mut rng);
        let u = b.basis();
        let n = u.nrows();
        assert!((u.adjoint() * u - CMatrix::<f64>::identity(n, n)).norm() < 1e-12);
        let firsts: Vec<usize> = b.partition().iter().map(|blk| blk[0]).collect();
        assert!(firsts.windows(2).all(|w| w[0] < w[1]));
        for j in 0..n {
            let first = u.column(j).iter().copied().find(|z| z.norm() > t.tau_struct).unwrap();
            assert!(first.im == 0.0 && first.re > 0.0);
        }
        // a generic subalgebra of the compacts model still isolates the scalar
        // coordinate in exactly one block
        assert!(b.infinity_block().is_some());
    }
}

#[test]
fn conjugation_round_trip() {
    let t = tol();
    let mut rng = seeded_rng(200);
    for _ in 0..200 {
        let d = m(rng.random_range(2..=5));
        let b = random_subalgebra(d, &mut rng);
        let u = random_unitary_with::<f64, _>(d, &mut rng);
        let there = conjugate_subalgebra(&u.adjoint(), &b, &t).unwrap();
        let back = conjugate_subalgebra(&u, &there, &t).unwrap();
        assert_eq!(back.partition(), b.partition());
        assert!(back.same_as(&b, &t));
        assert!((back.basis() - b.basis()).norm() < 1e-9);
    }
}

#[test]
fn normalizer_fixes_canonical_form() {
    let t = tol();
    let d3 = CommutativeSubalgebra::diagonal(m(3), &t);
    for g in crate::algebra::phase_permutation_group::<f64>(3, 4, 1000).unwrap() {
        let image = conjugate_subalgebra(&g, &d3, &t).unwrap();
        assert_eq!(image.basis(), d3.basis());
    }
}

#[test]
fn fell_gap_examples() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    assert_eq!(fell_gap(&d2, &d2).unwrap(), 0.0);
    // span{I, σz} against span{I, σx}: principal angles 0 and π/2
    let hx = masa_from_basis(&hadamard(), &t).unwrap();
    assert!((fell_gap(&d2, &hx).unwrap() - 1.0).abs() < 1e-12);
    let triv = CommutativeSubalgebra::trivial(m(2), &t);
    assert_eq!(fell_gap(&d2, &triv).unwrap(), 1.0);
    let d3 = CommutativeSubalgebra::diagonal(m(3), &t);
    assert!(matches!(fell_gap(&d2, &d3), Err(Error::DescriptorMismatch { .. })));
}

#[test]
fn fell_gap_along_rotation() {
    let t = tol();
    let d2 = CommutativeSubalgebra::diagonal(m(2), &t);
    let sx = pauli::<f64>('x');
    let seq: Vec<_> = (1..=20)
        .map(|k| {
            let eps = 2f64.powi(-k);
            let u = exp_i_hermitian(&sx, eps, &t).unwrap();
            let b = conjugate_subalgebra(&u, &d2, &t).unwrap();
            // conjugation rotates σz by 2ε about the x axis
            assert!((fell_gap(&b, &d2).unwrap() - (2.0 * eps).sin()).abs() < 1e-12);
            b
        })
        .collect();
    let report = fell_converges(&seq, &d2, 1e-5).unwrap();
    assert!(report.monotone && report.converges);
    assert_eq!(report.dimensions, vec![2; 20]);
}

#[test]
fn single_precision_subalgebra() {
    let t = ToleranceConfig::<f32>::single_precision();
    let x = pauli::<f32>('x');
    let b = generated_commutative(m(2), std::slice::from_ref(&x), &t).unwrap();
    assert_eq!(b.dimension(), 2);
    for chi in characters(&b) {
        let v = evaluate_character(&b, chi, &x, &t).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fell_gap_is_pseudometric(seed in any::<u64>(), n in 2usize..=4, blocks in 1usize..=2) {
        let t = tol();
        let d = m(n);
        let mut rng = seeded_rng(seed);
        let singles: Vec<Vec<usize>> = if blocks == 1 { (0..n).map(|i| vec![i]).collect() } else { vec![(0..n - 1).collect(), vec![n - 1]] };
        let base = CommutativeSubalgebra::from_partition(d, &singles, &t).unwrap();
        let mut draw = || conjugate_subalgebra(&random_unitary_with::<f64, _>(d, &mut rng), &base, &t).unwrap();
        let (a, b, cc) = (draw(), draw(), draw());
        let ab = fell_gap(&a, &b).unwrap();
        prop_assert!((ab - fell_gap(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(fell_gap(&a, &a).unwrap() < 1e-7);
        prop_assert!(ab <= fell_gap(&a, &cc).unwrap() + fell_gap(&cc, &b).unwrap() + 1e-12);
    }
}
