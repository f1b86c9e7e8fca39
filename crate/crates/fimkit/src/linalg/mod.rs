//! Exact linear algebra over the rationals and prime fields.
//!
//! Dense matrices carry the elimination-based contract operations (rank,
//! kernel, solve, quotient structure); the sparse column matrix and the
//! pivot-indexed reducer support module actions and iterated span closures,
//! where most columns are permutation-like.

mod dense;
mod reducer;
mod scalar;
mod sparse;

pub use dense::{Matrix, QuotientStructure};
pub use reducer::{sparse_kernel_basis, SparseReducer, TrackedInsert, TrackedReducer};
pub use scalar::{FieldSpec, Scalar};
pub use sparse::{SpMat, SparseVec};
