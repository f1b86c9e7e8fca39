use super::resolve::homology;
use crate::combinat::Shape;
use crate::error::Result;
use crate::module::{GradedDims, TruncatedModule};

/// Outcome of a boxed projectivity-style test. `False` is always certain
/// and carries a witness; `True` is certified on the box under the stated
/// precondition; boundary effects yield `Inconclusive`, never a guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False { witness: Shape },
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False { .. })
    }
}

pub struct RelProjReport {
    pub verdict: Verdict,
    pub h0: GradedDims,
    pub h1: GradedDims,
    /// Computed only on the success path, as a consistency check: first
    /// homology vanishing forces the second to vanish as well.
    pub h2: Option<GradedDims>,
}

/// Smallest-total-degree support object, ties broken by lattice order.
fn minimal_witness(dims: &GradedDims) -> Option<Shape> {
    dims.support().into_iter().min_by_key(|n| n.total())
}

/// Tests whether every relation of `v` is already forced by the symmetric
/// group actions on its generators, i.e. whether the first homology
/// vanishes. Requires the generator support to sit strictly inside the box;
/// support touching the boundary downgrades a vanishing answer to
/// inconclusive because unseen generators could exist outside.
pub fn relative_projective_test(v: &TruncatedModule) -> Result<RelProjReport> {
    let hom = homology(v, 1)?;
    let h0 = hom.h[0].clone();
    let h1 = hom.h[1].clone();
    if let Some(witness) = minimal_witness(&h1) {
        return Ok(RelProjReport {
            verdict: Verdict::False { witness },
            h0,
            h1,
            h2: None,
        });
    }
    if !h0.support_interior() {
        return Ok(RelProjReport {
            verdict: Verdict::Inconclusive {
                reason: "generator support touches the box boundary".into(),
            },
            h0,
            h1,
            h2: None,
        });
    }
    let h2 = homology(v, 2)?.h[2].clone();
    let verdict = if h2.is_zero() {
        Verdict::True
    } else {
        Verdict::Inconclusive {
            reason: "first homology vanishes but second does not; box too tight to certify"
                .into(),
        }
    };
    Ok(RelProjReport {
        verdict,
        h0,
        h1,
        h2: Some(h2),
    })
}
