//! Exact-arithmetic engine for finitely presented modules over the category
//! of m-tuples of finite sets with injections, truncated to a finite box.
//!
//! The crate is organized bottom-up:
//!
//! - [`combinat`]: shapes, injections, multi-permutations, partitions.
//! - [`linalg`]: exact dense and sparse linear algebra over Q and prime fields.
//! - [`module`]: truncated modules, free modules, presentations, submodule spans.
//! - [`functors`]: shift, derivative, kernel, truncation, image filtrations.
//! - [`homology`]: graded homology, relative projectivity, torsion, the
//!   shift-resolution complex, projective-dimension classification.
//! - [`stability`]: symmetric-group characters, irreducible decompositions,
//!   stability verdicts, product-polynomial dimension fits.
//! - [`format`]: presentation files and structured reports.

pub mod combinat;
pub mod error;
pub mod format;
pub mod functors;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod stability;

pub use error::FimError;
