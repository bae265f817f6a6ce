//! Unitary conjugation groupoids of finite-dimensional and truncated Type I
//! C*-algebras.
//!
//! The crate builds the action groupoid of the unitary group acting by
//! conjugation on pairs `(B, χ)` of a unital commutative subalgebra and a
//! character, and checks its structure maps, Haar system, convolution algebra
//! and diagonal embedding numerically.
//!
//! Everything is generic over the real scalar ([`Real`], `f32` or `f64`); the
//! aliases at the crate root fix `f64`.

pub mod algebra;
pub mod convolution;
pub mod embedding;
pub mod error;
pub mod groupoid;
pub mod models;
pub mod scalar;
pub mod subalgebra;
pub mod unitspace;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Element = algebra::AlgebraElement<f64>;
pub type Tolerances = algebra::ToleranceConfig<f64>;
pub type Subalgebra = subalgebra::CommutativeSubalgebra<f64>;
pub type Point = unitspace::UnitPoint<f64>;
pub type Extended = unitspace::ExtendedComplex<f64>;
pub type GroupoidArrow = groupoid::Arrow<f64>;
pub type Haar = groupoid::HaarSystem<f64>;
pub type Groupoid = convolution::FiniteGroupoid<f64>;
pub type Function = convolution::GroupoidFunction<f64>;
pub type Fibers = embedding::FiberSample<f64>;

pub type Element32 = algebra::AlgebraElement<f32>;
pub type Subalgebra32 = subalgebra::CommutativeSubalgebra<f32>;
