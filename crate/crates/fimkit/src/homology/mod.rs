//! Homological invariants of truncated modules: degreewise-minimal free
//! resolutions, generation and relation degrees, torsion degrees, relative
//! projectivity with located witnesses, resolutions by induced modules, and
//! the projective-dimension dichotomy.
//!
//! Every routine works on the box it is given and reports when an answer is
//! only a lower bound because the box ran out; nothing extrapolates.

mod nagpal;
mod oracle;
mod projdim;
mod relproj;
mod resolve;
mod torsion;

pub use nagpal::{
    shift_resolution, shifted_relative_projectivity, ShiftResolution, ShiftedVerdict,
};
pub use oracle::bar_homology;
pub use projdim::{group_algebra_projective, projective_dim_classifier, PdReport, PdVerdict};
pub use relproj::{relative_projective_test, RelProjReport, Verdict};
pub use resolve::{
    cover_kernel, h_zero, homology, minimal_cover, CoverKernel, FreeCover, Homology, HZero,
};
pub use torsion::{torsion_analysis, TorsionReport};
