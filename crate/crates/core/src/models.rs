//! Worked models: the lattice of subalgebras of `ℂ^k` with the embedding that
//! extends a function by zero, primitive ideal spaces as finite posets, and
//! conjugates of the diagonal MASA in the truncated compacts.

use num_complex::Complex;

use crate::algebra::random::{random_hermitian_with, random_unitary_with, seeded_rng};
use crate::algebra::{exp_i_hermitian, AlgebraDescriptor, AlgebraElement, ToleranceConfig};
use crate::error::{Error, Result};
use crate::groupoid::act;
use crate::scalar::{cabs, lit, real, Real};
use crate::subalgebra::{conjugate_subalgebra, evaluate_character, CommutativeSubalgebra};
use crate::unitspace::UnitPoint;

/// Largest `k` handled by the partition lattice.
pub const MAX_POINTS: usize = 8;
/// Largest primitive ideal space handled by the bitmask closure.
pub const MAX_IDEALS: usize = 16;

/// A set partition of `{0, …, k−1}`, blocks sorted by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl FinitePartition {
    pub fn new(size: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidDescriptor("empty partition block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= size || seen[i] {
                    return Err(Error::InvalidDescriptor(format!("index {i} repeated or out of range")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidDescriptor("partition does not cover every index".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { size, blocks })
    }

    /// All singletons.
    pub fn finest(size: usize) -> Self {
        Self { size, blocks: (0..size).map(|i| vec![i]).collect() }
    }

    /// One block.
    pub fn coarsest(size: usize) -> Self {
        Self { size, blocks: vec![(0..size).collect()] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_finest(&self) -> bool {
        self.blocks.len() == self.size
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&i))
    }

    /// Functions on `{0, …, k−1}` constant on each block.
    pub fn subalgebra<T: Real>(&self, tol: &ToleranceConfig<T>) -> Result<CommutativeSubalgebra<T>> {
        CommutativeSubalgebra::from_partition(AlgebraDescriptor::commutative(self.size)?, &self.blocks, tol)
    }
}

fn ensure_size(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidDescriptor("k must be positive".into()));
    }
    if k > MAX_POINTS {
        return Err(Error::TooLarge { size: k, max: MAX_POINTS });
    }
    Ok(())
}

/// All `Bell(k)` partitions, via restricted growth strings in lexicographic
/// order.
pub fn enumerate_partitions(k: usize) -> Result<Vec<FinitePartition>> {
    ensure_size(k)?;
    let mut out = Vec::new();
    let mut label = vec![0usize; k];
    loop {
        let count = label.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in label.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(FinitePartition { size: k, blocks });
        // next restricted growth string: bump the last position that may grow
        let mut i = k;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let prefix_max = label[..i].iter().copied().max().unwrap_or(0);
            if label[i] <= prefix_max {
                label[i] += 1;
                label[i + 1..].iter_mut().for_each(|l| *l = 0);
                break;
            }
        }
    }
}

/// A unit point of `ℂ^k` together with the partition it lives over and the
/// block of that partition its character evaluates.
#[derive(Debug, Clone)]
pub struct LatticePoint<T: Real> {
    pub partition: FinitePartition,
    /// Block index in the partition's own order.
    pub block: usize,
    pub point: UnitPoint<T>,
}

/// Every unit point `(B, χ)` of `ℂ^k`: one per block of every partition.
pub fn lattice_points<T: Real>(k: usize, tol: &ToleranceConfig<T>) -> Result<Vec<LatticePoint<T>>> {
    let mut out = Vec::new();
    for partition in enumerate_partitions(k)? {
        let sub = partition.subalgebra(tol)?;
        for (block, members) in partition.blocks().iter().enumerate() {
            let i = members[0];
            let on = (0..sub.dimension())
                .find(|&b| sub.projections()[b][(i, i)].re > lit(0.5))
                .ok_or_else(|| Error::NumericalInconsistency("coordinate outside every block".into()))?;
            let point = UnitPoint::on_block(sub.clone(), on, tol)?;
            out.push(LatticePoint { partition: partition.clone(), block, point });
        }
    }
    Ok(out)
}

/// `ι(f)` on the lattice: `f(i)` at the evaluation `ev_i` of the full algebra,
/// zero at every point of a coarser subalgebra. Values align with `points`.
pub fn extend_by_zero_embedding<T: Real>(
    f: &AlgebraElement<T>,
    points: &[LatticePoint<T>],
    tol: &ToleranceConfig<T>,
) -> Result<Vec<Complex<T>>> {
    let desc = f.descriptor();
    if !desc.is_commutative() {
        return Err(Error::InvalidDescriptor(format!("{desc} is not commutative")));
    }
    points
        .iter()
        .map(|p| {
            p.point.descriptor().ensure_same(&desc)?;
            if p.partition.is_finest() {
                evaluate_character(p.point.subalgebra(), p.point.character(), f, tol)
            } else {
                Ok(Complex::new(T::zero(), T::zero()))
            }
        })
        .collect()
}

/// Reads `f` back from the finest-partition component of `ι(f)`.
pub fn gelfand_readback<T: Real>(f: &AlgebraElement<T>, points: &[LatticePoint<T>], tol: &ToleranceConfig<T>) -> Result<Vec<Complex<T>>> {
    let k = f.descriptor().ambient_dim();
    let values = extend_by_zero_embedding(f, points, tol)?;
    let mut out = vec![Complex::new(T::zero(), T::zero()); k];
    for (p, v) in points.iter().zip(values) {
        if p.partition.is_finest() {
            out[p.partition.blocks()[p.block][0]] = v;
        }
    }
    Ok(out)
}

/// Largest `|f(i) − readback(i)|` over the coordinate basis of `ℂ^k` and the
/// unit.
pub fn gelfand_recovery_check<T: Real>(k: usize, tol: &ToleranceConfig<T>) -> Result<T> {
    let desc = AlgebraDescriptor::commutative(k)?;
    ensure_size(k)?;
    let points = lattice_points(k, tol)?;
    let mut worst = T::zero();
    let mut inputs: Vec<AlgebraElement<T>> = (0..k).map(|i| AlgebraElement::matrix_unit(desc, i, i)).collect::<Result<_>>()?;
    inputs.push(AlgebraElement::identity(desc));
    for f in inputs {
        let back = gelfand_readback(&f, &points, tol)?;
        for (i, v) in back.iter().enumerate() {
            worst = worst.max(cabs(*v - f.matrix()[(i, i)]));
        }
    }
    Ok(worst)
}

/// A function that no character of a coarse subalgebra can extend
/// consistently, with the multiplicativity defect of averaging over a block.
#[derive(Debug, Clone)]
pub struct ExtensionFailure<T: Real> {
    pub function: Vec<Complex<T>>,
    pub block: Vec<usize>,
    pub first: usize,
    pub second: usize,
    pub first_value: Complex<T>,
    pub second_value: Complex<T>,
    /// Block average of `g²`.
    pub average_of_square: Complex<T>,
    /// Square of the block average of `g`.
    pub square_of_average: Complex<T>,
    pub defect: T,
}

/// `g = 1_{x₂}` for the first two points `x₁ < x₂` of the first block with two
/// or more members.
pub fn character_extension_failure<T: Real>(k: usize, coarse: &FinitePartition) -> Result<ExtensionFailure<T>> {
    ensure_size(k)?;
    if coarse.size() != k {
        return Err(Error::InvalidDescriptor(format!("partition of {} points, expected {k}", coarse.size())));
    }
    let block = coarse.blocks().iter().find(|b| b.len() >= 2).ok_or(Error::NoCoarseBlock)?.clone();
    let (first, second) = (block[0], block[1]);
    let zero = Complex::new(T::zero(), T::zero());
    let mut g = vec![zero; k];
    g[second] = real(T::one());
    let size = real(lit::<T>(block.len() as f64));
    let avg = block.iter().fold(zero, |acc, &i| acc + g[i]) / size;
    let avg_sq = block.iter().fold(zero, |acc, &i| acc + g[i] * g[i]) / size;
    let square_of_average = avg * avg;
    Ok(ExtensionFailure {
        first_value: g[first],
        second_value: g[second],
        function: g,
        block,
        first,
        second,
        average_of_square: avg_sq,
        square_of_average,
        defect: cabs(avg_sq - square_of_average),
    })
}

/// Whether `act(u, x)` fixes every lattice point for seeded diagonal
/// unitaries, checked both through [`act`] and by conjugating the block
/// projections directly. Returns the largest direct residual.
pub fn commutative_action_residual<T: Real>(k: usize, trials: usize, seed: u64, tol: &ToleranceConfig<T>) -> Result<(bool, T)> {
    let desc = AlgebraDescriptor::commutative(k)?;
    let points = lattice_points(k, tol)?;
    let mut rng = seeded_rng(seed);
    let mut fixed = true;
    let mut worst = T::zero();
    for _ in 0..trials {
        let u = random_unitary_with::<T, _>(desc, &mut rng);
        for p in &points {
            let y = act(&u, &p.point, tol)?;
            fixed &= y.same_as(&p.point, tol);
            for proj in p.point.subalgebra().projections() {
                let moved = u.matrix() * proj * u.matrix().adjoint();
                worst = worst.max(crate::scalar::frobenius(&(moved - proj)));
            }
        }
    }
    Ok((fixed && worst <= tol.tau_eq, worst))
}

/// Summary of conjugating `B_diag` in the truncated compacts.
#[derive(Debug, Clone)]
pub struct MasaConjugacy {
    pub trials: usize,
    pub all_maximal: bool,
    pub sizes_preserved: bool,
    pub infinity_preserved: bool,
}

impl MasaConjugacy {
    pub fn passed(&self) -> bool {
        self.all_maximal && self.sizes_preserved && self.infinity_preserved
    }
}

/// Conjugates `B_diag` of the truncated compacts on `ℂ^n ⊕ ℂ` by seeded
/// `exp(iH)` with `H` Hermitian and supported on the compact part.
pub fn compacts_masa_conjugacy<T: Real>(n: usize, trials: usize, seed: u64, tol: &ToleranceConfig<T>) -> Result<MasaConjugacy> {
    let desc = AlgebraDescriptor::truncated_compacts(n)?;
    let diag = CommutativeSubalgebra::diagonal(desc, tol);
    let mut sizes = diag.block_sizes();
    sizes.sort_unstable();
    let mut rng = seeded_rng(seed);
    let mut out = MasaConjugacy { trials, all_maximal: true, sizes_preserved: true, infinity_preserved: true };
    for _ in 0..trials {
        let mut h = random_hermitian_with::<T, _>(desc, &mut rng).into_matrix();
        h[(n, n)] = Complex::new(T::zero(), T::zero());
        let h = AlgebraElement::new(desc, h, tol)?;
        let u = exp_i_hermitian(&h, T::one(), tol)?;
        let moved = conjugate_subalgebra(&u, &diag, tol)?;
        let mut got = moved.block_sizes();
        got.sort_unstable();
        out.all_maximal &= moved.is_maximal();
        out.sizes_preserved &= got == sizes;
        out.infinity_preserved &= moved
            .infinity_block()
            .is_some_and(|b| cabs(moved.projections()[b][(n, n)] - real(T::one())) <= tol.tau_eq);
    }
    Ok(out)
}

/// A finite primitive ideal space: labels with containment `i ⊆ j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveIdealSpace {
    labels: Vec<String>,
    // above[i] has bit j set when ideal i ⊆ ideal j
    above: Vec<u32>,
}

impl PrimitiveIdealSpace {
    /// Takes the reflexive transitive closure of `containments` and rejects
    /// cycles.
    pub fn new(labels: Vec<String>, containments: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_IDEALS {
            return Err(Error::TooLarge { size: n, max: MAX_IDEALS });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidOrder(format!("duplicate label {l:?}")));
            }
        }
        let mut above: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for &(i, j) in containments {
            if i >= n || j >= n {
                return Err(Error::InvalidOrder(format!("pair ({i}, {j}) out of range")));
            }
            above[i] |= 1 << j;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                let mut reach = above[i];
                for j in 0..n {
                    if above[i] & (1 << j) != 0 {
                        reach |= above[j];
                    }
                }
                if reach != above[i] {
                    above[i] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && above[i] & (1 << j) != 0 && above[j] & (1 << i) != 0 {
                    return Err(Error::InvalidOrder(format!("{} and {} contain each other", labels[i], labels[j])));
                }
            }
        }
        Ok(Self { labels, above })
    }

    /// `{0} ⊆ K` for the truncated compacts.
    pub fn compacts_model() -> Self {
        Self::new(vec!["0".into(), "K".into()], &[(0, 1)]).expect("two-point chain")
    }

    /// `k` incomparable maximal ideals, as for `ℂ^k`.
    pub fn discrete(k: usize) -> Result<Self> {
        Self::new((1..=k).map(|i| format!("ker ev_{i}")).collect(), &[])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.above[i] & (1 << j) != 0
    }

    pub fn mask_of(&self, subset: &[&str]) -> Result<u32> {
        subset.iter().try_fold(0u32, |mask, l| {
            let i = self.labels.iter().position(|x| x == l).ok_or_else(|| Error::UnknownIdeal(l.to_string()))?;
            Ok(mask | 1 << i)
        })
    }

    pub fn labels_of(&self, mask: u32) -> Vec<String> {
        (0..self.len()).filter(|i| mask & (1 << i) != 0).map(|i| self.labels[i].clone()).collect()
    }

    /// Ideals containing an ideal of the set. Primitive ideals are prime, so
    /// containing the intersection of finitely many means containing one.
    pub fn closure_mask(&self, mask: u32) -> u32 {
        (0..self.len()).filter(|i| mask & (1 << i) != 0).fold(0, |acc, i| acc | self.above[i])
    }

    pub fn is_closed(&self, mask: u32) -> bool {
        self.closure_mask(mask) == mask
    }
}

pub fn jacobson_closure(space: &PrimitiveIdealSpace, subset: &[&str]) -> Result<Vec<String>> {
    Ok(space.labels_of(space.closure_mask(space.mask_of(subset)?)))
}

/// Which Kuratowski axioms hold over every subset of the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuratowskiReport {
    pub empty_fixed: bool,
    pub extensive: bool,
    pub idempotent: bool,
    pub monotone: bool,
    pub unions: bool,
}

impl KuratowskiReport {
    pub fn passed(&self) -> bool {
        self.empty_fixed && self.extensive && self.idempotent && self.monotone && self.unions
    }
}

/// Exhaustive over all subsets and pairs of subsets.
pub fn kuratowski_check(space: &PrimitiveIdealSpace) -> Result<KuratowskiReport> {
    if space.len() > 8 {
        return Err(Error::TooLarge { size: space.len(), max: 8 });
    }
    let full = 1u32 << space.len();
    let cl = |m| space.closure_mask(m);
    let mut r = KuratowskiReport { empty_fixed: cl(0) == 0, extensive: true, idempotent: true, monotone: true, unions: true };
    for a in 0..full {
        r.extensive &= cl(a) & a == a;
        r.idempotent &= cl(cl(a)) == cl(a);
        for b in 0..full {
            if a & b == a {
                r.monotone &= cl(a) & cl(b) == cl(a);
            }
            r.unions &= cl(a | b) == cl(a) | cl(b);
        }
    }
    Ok(r)
}
