//! The phase-permutation group: monomial unitaries whose non-zero entries are
//! `r`-th roots of unity. It is the finite discretization of the normalizer
//! `U(1)^n ⋊ S_n` of the diagonal algebra.

use std::collections::HashMap;

use super::{AlgebraDescriptor, AlgebraElement};
use crate::error::{Error, Result};
use crate::scalar::{lit, phase, CMatrix, Real};

pub const DEFAULT_GROUP_CAP: u128 = 100_000;

/// A monomial matrix `M e_j = ζ^{phases[j]} e_{perm[j]}` with `ζ = e^{2πi/r}`.
///
/// Products and inverses are computed exactly on the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialMatrix {
    perm: Vec<usize>,
    phases: Vec<u32>,
    root: u32,
}

impl MonomialMatrix {
    pub fn identity(n: usize, root: u32) -> Self {
        Self { perm: (0..n).collect(), phases: vec![0; n], root }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn phases(&self) -> &[u32] {
        &self.phases
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        let perm = rhs.perm.iter().map(|&j| self.perm[j]).collect();
        let phases = rhs
            .perm
            .iter()
            .zip(&rhs.phases)
            .map(|(&j, &p)| (p + self.phases[j]) % self.root)
            .collect();
        Self { perm, phases, root: self.root }
    }

    pub fn inverse(&self) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut phases = vec![0; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = (self.root - self.phases[j]) % self.root;
        }
        Self { perm, phases, root: self.root }
    }

    pub fn to_matrix<T: Real>(&self) -> CMatrix<T> {
        let n = self.perm.len();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            let theta = T::two_pi() * lit::<T>(self.phases[j] as f64) / lit::<T>(self.root as f64);
            m[(self.perm[j], j)] = root_of_unity(self.phases[j], self.root, theta);
        }
        m
    }
}

/// `ζ^k`, exact at the quarter turns.
fn root_of_unity<T: Real>(k: u32, r: u32, theta: T) -> num_complex::Complex<T> {
    let (one, zero) = (T::one(), T::zero());
    match (4 * k) % (4 * r) {
        0 => num_complex::Complex::new(one, zero),
        x if x == r => num_complex::Complex::new(zero, one),
        x if x == 2 * r => num_complex::Complex::new(-one, zero),
        x if x == 3 * r => num_complex::Complex::new(zero, -one),
        _ => phase(theta),
    }
}

/// All monomial matrices of size `n` with `r`-th root entries.
#[derive(Debug, Clone)]
pub struct PhasePermutationGroup {
    n: usize,
    root: u32,
    elements: Vec<MonomialMatrix>,
    index: HashMap<MonomialMatrix, usize>,
}

impl PhasePermutationGroup {
    pub fn new(n: usize, root: u32, cap: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDescriptor("phase-permutation group needs n >= 1".into()));
        }
        if root < 2 {
            return Err(Error::InvalidDescriptor("root order must be at least 2".into()));
        }
        let order = group_order(n, root);
        if order > cap {
            return Err(Error::GroupTooLarge { order, cap });
        }
        let mut elements = Vec::with_capacity(order as usize);
        for perm in permutations(n) {
            let mut phases = vec![0u32; n];
            loop {
                elements.push(MonomialMatrix { perm: perm.clone(), phases: phases.clone(), root });
                // odometer over Z_r^n
                let mut i = n;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    phases[i] += 1;
                    if phases[i] < root {
                        break;
                    }
                    phases[i] = 0;
                }
                if phases.iter().all(|&p| p == 0) {
                    break;
                }
            }
        }
        let index = elements.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Self { n, root, elements, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn monomials(&self) -> &[MonomialMatrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &MonomialMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Exact multiplication table `table[i][j] = index(g_i g_j)`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| self.elements.iter().map(|b| self.index[&a.compose(b)]).collect())
            .collect()
    }

    pub fn to_elements<T: Real>(&self) -> Vec<AlgebraElement<T>> {
        let desc = AlgebraDescriptor::matrix(self.n).expect("n >= 1");
        self.elements.iter().map(|m| AlgebraElement::from_raw(desc, m.to_matrix())).collect()
    }
}

pub fn group_order(n: usize, root: u32) -> u128 {
    let mut order: u128 = 1;
    for i in 1..=n as u128 {
        order = order.saturating_mul(i);
    }
    for _ in 0..n {
        order = order.saturating_mul(root as u128);
    }
    order
}

/// Permutations of `0..n` in lexicographic order, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).expect("successor exists");
        current.swap(i, j);
        current[i + 1..].reverse();
        out.push(current.clone());
    }
}

/// The group generated by permutation matrices and diagonal `r`-th roots of
/// unity, as algebra elements of `matrix(n)`. The identity comes first.
pub fn phase_permutation_group<T: Real>(n: usize, root: u32, cap: u128) -> Result<Vec<AlgebraElement<T>>> {
    Ok(PhasePermutationGroup::new(n, root, cap)?.to_elements())
}
