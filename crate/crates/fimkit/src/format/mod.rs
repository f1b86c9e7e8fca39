//! On-disk formats: the presentation file that describes a module by
//! generators and relations, and the line-based structured report that
//! analyses emit. Both parse back exactly what they print.

mod presentation;
mod report;

pub use presentation::{emit_presentation, parse_presentation, PresentationFile};
pub use report::{Report, Section};
