//! Shapes, injections between them, multi-permutations, and partitions.
//!
//! Conventions used throughout the crate:
//! - A shape is an m-tuple of non-negative integers, printed `(n_1,...,n_m)`.
//! - An injection between shapes is an m-tuple of injective maps on
//!   1-based intervals, printed as a list of image lists `[[..],[..]]`.
//! - Enumeration of hom-sets is lexicographic on the concatenated image
//!   lists, which fixes basis orders everywhere else in the crate.

mod injection;
mod partition;
mod perm;
mod shape;

pub use injection::{
    enumerate_injections, enumerate_monotone_injections, hom_size, monotone_factorization,
    parse_image_lists, Injection,
};
pub use partition::{class_size, hook_dimension, partitions_of, MultiPartition, Partition};
pub use perm::{enumerate_permutations, MultiPermutation};
pub use shape::Shape;
