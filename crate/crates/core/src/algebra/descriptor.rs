use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// The three families of algebras the laboratory knows how to represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// `M_n(ℂ)`.
    Matrix(usize),
    /// `ℂ^k = C(X)` for a `k`-point space.
    Commutative(usize),
    /// Unitization of the compacts truncated to an `N`-dimensional Hilbert
    /// space, represented faithfully as `block-diag(λI_N + K, λ)`.
    TruncatedCompacts(usize),
}

/// Shape of the ambient algebra: which matrix entries may be non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    kind: AlgebraKind,
}

impl AlgebraDescriptor {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        let size = match kind {
            AlgebraKind::Matrix(n) | AlgebraKind::Commutative(n) | AlgebraKind::TruncatedCompacts(n) => n,
        };
        if size == 0 {
            return Err(Error::InvalidDescriptor(format!("{kind:?} has zero size")));
        }
        Ok(Self { kind })
    }

    pub fn matrix(n: usize) -> Result<Self> {
        Self::new(AlgebraKind::Matrix(n))
    }

    pub fn commutative(k: usize) -> Result<Self> {
        Self::new(AlgebraKind::Commutative(k))
    }

    pub fn truncated_compacts(n: usize) -> Result<Self> {
        Self::new(AlgebraKind::TruncatedCompacts(n))
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self.kind, AlgebraKind::Matrix(_))
    }

    pub fn is_commutative(&self) -> bool {
        matches!(self.kind, AlgebraKind::Commutative(_)) || self.kind == AlgebraKind::Matrix(1)
    }

    /// All blocks have size one, so the algebra itself is commutative.
    pub fn is_commutative_algebra(&self) -> bool {
        self.blocks().iter().all(|b| b.len() == 1)
    }

    pub fn is_truncated_compacts(&self) -> bool {
        matches!(self.kind, AlgebraKind::TruncatedCompacts(_))
    }

    /// Dimension of the Hilbert space the algebra acts on: `n`, `k` or `N + 1`.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            AlgebraKind::Matrix(n) | AlgebraKind::Commutative(n) => n,
            AlgebraKind::TruncatedCompacts(n) => n + 1,
        }
    }

    /// Index of the coordinate carrying the scalar at infinity.
    pub fn scalar_index(&self) -> Option<usize> {
        match self.kind {
            AlgebraKind::TruncatedCompacts(n) => Some(n),
            _ => None,
        }
    }

    /// Diagonal blocks of the representation, as index ranges.
    pub fn blocks(&self) -> Vec<Range<usize>> {
        match self.kind {
            AlgebraKind::Matrix(n) => std::iter::once(0..n).collect(),
            AlgebraKind::Commutative(k) => (0..k).map(|i| i..i + 1).collect(),
            AlgebraKind::TruncatedCompacts(n) => vec![0..n, n..n + 1],
        }
    }

    /// Whether entry `(i, j)` lies inside a diagonal block.
    pub fn in_block(&self, i: usize, j: usize) -> bool {
        match self.kind {
            AlgebraKind::Matrix(_) => true,
            AlgebraKind::Commutative(_) => i == j,
            AlgebraKind::TruncatedCompacts(n) => (i < n) == (j < n),
        }
    }

    /// Matrix units `e_{jk}` that belong to the algebra, row-major.
    pub fn matrix_units(&self) -> Vec<(usize, usize)> {
        let d = self.ambient_dim();
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| self.in_block(i, j))
            .collect()
    }

    /// Real dimension count of the algebra as a complex vector space.
    pub fn algebra_dim(&self) -> usize {
        self.blocks().iter().map(|b| b.len() * b.len()).sum()
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlgebraKind::Matrix(n) => write!(f, "matrix({n})"),
            AlgebraKind::Commutative(k) => write!(f, "commutative({k})"),
            AlgebraKind::TruncatedCompacts(n) => write!(f, "truncated_compacts({n})"),
        }
    }
}
