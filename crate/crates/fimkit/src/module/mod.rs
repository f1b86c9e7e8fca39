//! Truncated modules over the product-injection category: per-object vector
//! spaces with transposition and one-step inclusion actions, stored on a
//! finite box lattice.
//!
//! Everything downstream (functors, homology, stability) consumes the
//! [`TruncatedModule`] tables built here. Bases are deterministic: free
//! modules enumerate injections in lexicographic order, quotients keep the
//! non-pivot coordinates in enumeration order.

mod build;
mod lattice;
mod span;
mod truncated;

pub use build::{
    basic_relative_projective, direct_sum, free_module, from_presentation, presented_quotient,
    quotient_by_span, realize_span, submodule_generated, Generator, GroupRep, Presentation,
    QuotientModule, Relation, RelationTerm, SubmoduleResult,
};
pub use lattice::{BoxLattice, GradedDims, LatticeMap};
pub use span::{ideal_span, no_seeds, span_from_closed, submodule_span, SpanTable};
pub use truncated::{AxiomReport, TruncatedModule};

pub(crate) use build::build_free;
