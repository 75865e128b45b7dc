//! Exact computation of categorical traces, 2-characters and induced
//! 2-representations of finite groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclotomic`]: exact arithmetic in Q(ζ_N);
//! - [`group`] and [`groupoid`]: finite groups given by multiplication tables,
//!   finite groupoids and inertia groupoids Λ(G);
//! - [`grpd_rep`]: representations of groupoids, characters, induction;
//! - [`cohomology`]: 2-cocycles with values in μ_M and H²(G, Z/M);
//! - [`two_rep`]: 2-representations on 2-vector spaces, traces, 2-characters,
//!   induction and decomposition;
//! - [`files`]: the text formats used by the command-line tool;
//! - [`suite`]: the built-in verification matrix.
//!
//! All arithmetic is exact; there is no floating-point path.

pub mod cohomology;
pub mod cyclotomic;
pub mod error;
pub mod files;
pub mod group;
pub mod groupoid;
pub mod grpd_rep;
pub mod matrix;
pub mod scalar;
mod smith;
pub mod suite;
pub mod two_rep;

pub use cohomology::{CohomologyGroup, Cocycle};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, matrix_trace, CycNumber};
pub use error::{Error, Result, TwoRepViolation};
pub use group::{FiniteGroup, Subgroup};
pub use groupoid::{FiniteGroupoid, GroupoidMap, GroupoidSkeleton};
pub use grpd_rep::{ClassFunction, GroupoidRep, TwoClassFunction};
pub use matrix::Matrix;
pub use scalar::Field;
pub use two_rep::{DimMatrix, TraceSpace, TwoRep};

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type CycMatrix = Matrix<CycNumber>;
pub type RationalMatrix = Matrix<Rational>;
pub type CycGroupoidRep = GroupoidRep<CycNumber>;
pub type CycClassFunction = ClassFunction<CycNumber>;
pub type CycTwoClassFunction = TwoClassFunction<CycNumber>;
