use std::collections::BTreeMap;

use super::decompose::decompose;
use crate::combinat::{Injection, MultiPartition, Partition, Shape};
use crate::error::{FimError, Result};
use crate::homology::{homology, shift_resolution};
use crate::linalg::{sparse_kernel_basis, FieldSpec, SparseVec};
use crate::module::{submodule_span, LatticeMap, TruncatedModule};

/// Outcome of the three-part stability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// All three conditions hold everywhere at or beyond the guaranteed
    /// threshold, up to the box edge.
    Stable,
    /// The box ends before the guaranteed threshold, so the guarantee
    /// cannot be checked inside it.
    Inconclusive { reason: String },
    /// A condition failed inside the guaranteed region.
    Unstable { witness: Shape, reason: String },
}

/// Stability report: the guarantee thresholds, the verdict against them,
/// the stabilized multiplicities keyed by dropped-first-row partition
/// tails, and the empirically smallest region corner where all checks
/// start to pass.
pub struct StabilityReport {
    pub gd: i64,
    /// Per-direction shift thresholds taken from the unit-shift resolution.
    pub thresholds: Vec<i64>,
    /// Componentwise guarantee: max { 2 gd, threshold_i + 1 }, clamped at zero.
    pub required: Shape,
    pub verdict: StabilityVerdict,
    /// Multiplicities at the box corner, keyed by the partition tails that
    /// persist when the first row grows. Empty for the zero module.
    pub stable_multiplicities: BTreeMap<MultiPartition, usize>,
    /// Smallest corner (in lattice order) from which every boxed object
    /// passes all three checks; None when no corner works. A tail key is
    /// only compared at objects large enough to carry it, so a family is
    /// not penalized before its first row can exist.
    pub onset: Option<Shape>,
}

fn tail_key(table: &BTreeMap<MultiPartition, usize>) -> BTreeMap<MultiPartition, usize> {
    table
        .iter()
        .map(|(lambda, &c)| {
            let tails: Vec<Partition> = lambda.factors().iter().map(|p| p.tail()).collect();
            (MultiPartition::new(tails), c)
        })
        .collect()
}

/// Whether an object is big enough for a tail to be the below-first-row
/// part of a partition of its entries: each factor needs room for the
/// tail's boxes plus a first row at least as long as the tail's first row.
fn tail_fits(tail: &MultiPartition, n: &Shape) -> bool {
    tail.factors()
        .iter()
        .zip(0..n.arity())
        .all(|(t, i)| n.entry(i) >= t.weight() + t.first_part())
}

struct ObjectChecks {
    /// every one-step structure map out of the object is injective
    injective: bool,
    /// per direction: does the one-step predecessor generate this value
    /// (None when the object sits on the boundary in that direction)
    generated_from: Vec<Option<bool>>,
    /// tail-keyed multiplicities
    mults: BTreeMap<MultiPartition, usize>,
}

fn check_object(v: &TruncatedModule, n: &Shape) -> Result<ObjectChecks> {
    let m = v.arity();
    let bound = v.bound().clone();
    let mut injective = true;
    for i in 0..m {
        if !n.plus_unit(i).leq(&bound) {
            continue;
        }
        let one_step = Shape::zero(m).plus_unit(i);
        let step = v.evaluate(&Injection::staircase(n, &one_step))?;
        if !sparse_kernel_basis(&step).is_empty() {
            injective = false;
        }
    }
    let generated_from = (0..m)
        .map(|i| {
            n.minus_unit(i).map(|down| {
                let mut seeds: LatticeMap<Vec<SparseVec>> =
                    LatticeMap::filled(v.lattice(), Vec::new());
                let field = v.field();
                seeds.set(
                    &down,
                    (0..v.dim(&down))
                        .map(|k| SparseVec::unit(k, &field))
                        .collect(),
                );
                let (span, _) = submodule_span(v, &seeds);
                span.rank(n) == v.dim(n)
            })
        })
        .collect();
    let mults = tail_key(&decompose(v, n)?.mults);
    Ok(ObjectChecks {
        injective,
        generated_from,
        mults,
    })
}

/// Why a region corner fails, if it does.
fn region_failure(
    v: &TruncatedModule,
    checks: &LatticeMap<ObjectChecks>,
    corner_mults: &BTreeMap<MultiPartition, usize>,
    corner: &Shape,
) -> Option<(Shape, String)> {
    let lattice = v.lattice();
    for n in lattice.iter().filter(|n| corner.leq(n)) {
        let c = checks.get(&n);
        if !c.injective {
            return Some((n, "a structure map out of it is not injective".into()));
        }
        for i in 0..v.arity() {
            let Some(down) = n.minus_unit(i) else { continue };
            if corner.leq(&down) && c.generated_from[i] != Some(true) {
                return Some((n, "it is not generated by a predecessor value".into()));
            }
        }
        // every corner family that fits here must appear with the corner
        // multiplicity, and nothing outside the corner families may appear
        for (tail, &mult) in corner_mults {
            if tail_fits(tail, &n) && c.mults.get(tail) != Some(&mult) {
                return Some((n, "an irreducible multiplicity drifts".into()));
            }
        }
        if c.mults.keys().any(|t| !corner_mults.contains_key(t)) {
            return Some((n, "an extra irreducible family appears".into()));
        }
    }
    None
}

/// Representation-stability check over the whole box: injectivity of the
/// structure maps, generation of each value from its predecessors, and
/// constancy of the irreducible multiplicities along grow-the-first-row
/// families, all measured against the guaranteed thresholds.
/// Characteristic zero only.
pub fn stability_report(v: &TruncatedModule) -> Result<StabilityReport> {
    if v.field() != FieldSpec::Rational {
        return Err(FimError::NeedsCharZero(format!(
            "stability multiplicities need the rational field, not {}",
            v.field()
        )));
    }
    let m = v.arity();
    let gd = homology(v, 0)?.gd;
    let thresholds = if v.is_zero() {
        vec![-1; m]
    } else {
        shift_resolution(v, &Shape::new(vec![1; m]))?.thresholds
    };
    let required = Shape::new(
        (0..m)
            .map(|i| (2 * gd).max(thresholds[i] + 1).max(0) as usize)
            .collect(),
    );
    let lattice = v.lattice().clone();
    let bound = v.bound().clone();
    let checks = LatticeMap::from_vec(
        &lattice,
        lattice
            .iter()
            .map(|n| check_object(v, &n))
            .collect::<Result<Vec<_>>>()?,
    );
    let corner_mults = checks.get(&bound).mults.clone();

    let onset = lattice
        .iter()
        .find(|o| region_failure(v, &checks, &corner_mults, o).is_none());

    let verdict = if required.leq(&bound) {
        match region_failure(v, &checks, &corner_mults, &required) {
            None => StabilityVerdict::Stable,
            Some((witness, reason)) => StabilityVerdict::Unstable { witness, reason },
        }
    } else {
        StabilityVerdict::Inconclusive {
            reason: format!(
                "guaranteed region starts at {required}, beyond the box {bound}"
            ),
        }
    };
    Ok(StabilityReport {
        gd,
        thresholds,
        required,
        verdict,
        stable_multiplicities: corner_mults,
        onset,
    })
}
