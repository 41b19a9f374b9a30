//! Exact-arithmetic constructions of Kummer quartic surfaces, EPW quartic
//! sections inside the cone over ℙ²×ℙ², and the conic pipelines on Verra
//! varieties that map onto them, over ℚ and finite fields.
//!
//! Everything is computed with exact field arithmetic; there is no floating
//! point anywhere.  The crate is organized around a small set of generic
//! kernels (dense linear algebra and exterior algebra over any [`Field`])
//! and the geometric modules built on them.

pub mod conics;
pub mod epw;
pub mod exterior;
pub mod field;
pub mod kummer;
pub mod lagrangian;
pub mod lattices;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod reports;
pub mod rng;
pub mod schubert;
pub mod textio;

pub use field::{Field, FiniteField, Fp, Fp2, Rational};
pub use linalg::{LinalgError, Matrix, Subspace};

/// Matrix over ℚ.
pub type QMatrix = Matrix<Rational>;
/// Matrix over a prime field.
pub type FpMatrix = Matrix<Fp>;
/// Matrix over a quadratic extension field.
pub type Fp2Matrix = Matrix<Fp2>;
/// Subspace over ℚ.
pub type QSubspace = Subspace<Rational>;
/// Subspace over a prime field.
pub type FpSubspace = Subspace<Fp>;
