//! Asymptotic structure of a module across its box: irreducible
//! decompositions of the symmetric-group values, stability of those
//! decompositions as the box coordinates grow, and polynomial shape of
//! the dimension table. Everything here is exact; the multiplicity
//! computations need the rational field, the dimension fit does not.

mod characters;
mod decompose;
mod hilbert;
mod report;

pub use characters::{character_table, irreducible_character, CharacterTable};
pub use decompose::{decompose, MultiplicityTable};
pub use hilbert::{hilbert_fit, HilbertFit, Mismatch, Poly};
pub use report::{stability_report, StabilityReport, StabilityVerdict};
