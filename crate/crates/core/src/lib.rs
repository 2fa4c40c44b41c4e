//! Exact computations for real hyperplane arrangements: intersection posets,
//! characteristic polynomials, chambers and faces, generic flags, Orlik–Solomon
//! algebras, Salvetti and Delucchi–Falk posets, fundamental-group presentations,
//! gallery categories and rank-one local-system cohomology.

pub mod arrangement;
pub mod cells;
pub mod cw_posets;
pub mod error;
pub mod field;
pub mod flag;
pub mod gallery;
pub mod linalg;
pub mod local_system;
pub mod os_algebra;
pub mod pi1;
pub mod polynomial;
pub mod poset;

pub use arrangement::{Arrangement, Hyperplane, Restriction, SimpleGraph};
pub use cells::{Cell, Sign, SignVector};
pub use error::{Error, Result};
pub use field::{CoefficientField, FieldElement};
pub use flag::Flag;
pub use local_system::LocalSystem;
pub use pi1::GroupPresentation;
pub use polynomial::IntegerPolynomial;
