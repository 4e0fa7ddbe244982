//! Exact verification toolkit for order-symmetric polynomials in
//! noncommutative variables, the nil and algebraicity criteria they give for
//! subspaces of an algebra, and filtered / associated graded / Rees algebra
//! constructions over finite-dimensional associative algebras.
//!
//! Everything is exact: scalars are arbitrary-precision rationals or residues
//! modulo a prime.

pub mod algebra;
pub mod builtins;
pub mod criteria;
pub mod description;
pub mod filtration;
pub mod free;
pub mod nil_bound;
pub mod rees;
pub mod scalar;
pub mod subspace;
pub mod vandermonde;

pub use algebra::{AlgElement, AlgebraError, StructureAlgebra};
pub use criteria::{Convention, CriteriaError};
pub use filtration::{AdaptedBasis, FilteredAlgebra, GradedAlgebra, GradedError};
pub use free::{FreePoly, MultiDegree, Word};
pub use nil_bound::{my1_bound, verify_my1, Status};
pub use rees::ReesElement;
pub use scalar::{Field, FieldDescriptor, FieldError, Scalar};
pub use subspace::{SpaceError, Subspace};
