use super::relproj::{relative_projective_test, RelProjReport, Verdict};
use super::resolve::h_zero;
use crate::combinat::enumerate_permutations;
use crate::error::Result;
use crate::linalg::{FieldSpec, Matrix};
use crate::module::TruncatedModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdVerdict {
    /// Projective, hence projective dimension zero — the only finite value
    /// a field-coefficient module can have.
    FinitePd,
    InfinitePd { reason: String },
    Inconclusive { reason: String },
}

pub struct PdReport {
    pub verdict: PdVerdict,
    pub relproj: RelProjReport,
}

/// Whether the representation given by the action matrices of all group
/// elements is projective over the group algebra. Solves the splitting
/// equation for the counit of the induction adjunction in its averaged
/// form: a linear `φ` with `Σ_g ρ(g) φ ρ(g)⁻¹ = id` yields the section
/// `w ↦ Σ_g g ⊗ φ(g⁻¹ w)`, and conversely.
pub fn group_algebra_projective(field: FieldSpec, actions: &[(Matrix, Matrix)]) -> bool {
    let d = match actions.first() {
        Some((g, _)) => g.rows(),
        None => return true,
    };
    if d == 0 {
        return true;
    }
    let dd = d * d;
    let mut sys = Matrix::zeros(field, dd, dd);
    for (g, ginv) in actions {
        for a in 0..d {
            for b in 0..d {
                for r in 0..d {
                    let gra = g.get(r, a).clone();
                    if field.is_zero(&gra) {
                        continue;
                    }
                    for c in 0..d {
                        let term = field.mul(&gra, ginv.get(b, c));
                        let cur = sys.get(r * d + c, a * d + b).clone();
                        sys.set(r * d + c, a * d + b, field.add(&cur, &term));
                    }
                }
            }
        }
    }
    let mut rhs = Matrix::zeros(field, dd, 1);
    for r in 0..d {
        rhs.set(r * d + r, 0, field.one());
    }
    sys.solve(&rhs).is_some()
}

/// Field-case classification of projective dimension: finite exactly when
/// the module is projective. Over the rationals that is relative
/// projectivity; over a prime field each multiplicity space on the
/// generator support must additionally be projective over its symmetric
/// group algebra.
pub fn projective_dim_classifier(v: &TruncatedModule) -> Result<PdReport> {
    let relproj = relative_projective_test(v)?;
    let verdict = match &relproj.verdict {
        Verdict::False { witness } => PdVerdict::InfinitePd {
            reason: format!("relation not induced from the generators, at {witness}"),
        },
        Verdict::Inconclusive { reason } => PdVerdict::Inconclusive {
            reason: reason.clone(),
        },
        Verdict::True => match v.field() {
            FieldSpec::Rational => PdVerdict::FinitePd,
            FieldSpec::Prime(_) => classify_multiplicities(v),
        },
    };
    Ok(PdReport { verdict, relproj })
}

fn classify_multiplicities(v: &TruncatedModule) -> PdVerdict {
    let h0 = h_zero(v);
    for n in h0.dims.support() {
        let actions: Vec<(Matrix, Matrix)> = enumerate_permutations(&n)
            .iter()
            .map(|p| {
                (
                    h0.induced_action(v, p),
                    h0.induced_action(v, &p.invert()),
                )
            })
            .collect();
        if !group_algebra_projective(v.field(), &actions) {
            return PdVerdict::InfinitePd {
                reason: format!(
                    "multiplicity space at {n} is not projective over its group algebra"
                ),
            };
        }
    }
    PdVerdict::FinitePd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{Injection, Shape};
    use crate::module::{
        basic_relative_projective, free_module, from_presentation, Generator, GroupRep,
        Presentation, Relation, RelationTerm,
    };

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    #[test]
    fn free_modules_are_projective_over_any_field() {
        for field in [FieldSpec::Rational, FieldSpec::Prime(2)] {
            let v = free_module(field, sh(&[2]), sh(&[4])).unwrap();
            let report = projective_dim_classifier(&v).unwrap();
            assert_eq!(report.verdict, PdVerdict::FinitePd, "field {field}");
        }
    }

    #[test]
    fn the_torsion_axis_module_has_infinite_dimension() {
        let field = FieldSpec::Rational;
        let origin = Shape::zero(2);
        let target = sh(&[0, 1]);
        let p = Presentation {
            field,
            arity: 2,
            generators: vec![Generator {
                shape: origin.clone(),
                label: "g".into(),
            }],
            relations: vec![Relation {
                shape: target.clone(),
                terms: vec![RelationTerm {
                    gen: 0,
                    injection: Injection::staircase(&origin, &target),
                    coeff: field.one(),
                }],
            }],
        };
        let v = from_presentation(&p, &sh(&[3, 3])).unwrap();
        let report = projective_dim_classifier(&v).unwrap();
        assert!(matches!(report.verdict, PdVerdict::InfinitePd { .. }));
    }

    #[test]
    fn the_trivial_mod_two_multiplicity_space_blocks_projectivity() {
        // over F_2 the trivial representation of the two-element symmetric
        // group is not a summand of the free one, so the induced module has
        // infinite projective dimension despite passing the relative test
        let field = FieldSpec::Prime(2);
        let v = basic_relative_projective(field, &GroupRep::trivial(field, sh(&[2])), &sh(&[4]))
            .unwrap();
        let report = projective_dim_classifier(&v).unwrap();
        assert!(report.relproj.verdict.is_true());
        assert!(matches!(report.verdict, PdVerdict::InfinitePd { .. }));
    }

    #[test]
    fn regular_multiplicity_spaces_stay_projective_mod_two() {
        let field = FieldSpec::Prime(2);
        let v = basic_relative_projective(field, &GroupRep::regular(field, sh(&[2])), &sh(&[4]))
            .unwrap();
        let report = projective_dim_classifier(&v).unwrap();
        assert_eq!(report.verdict, PdVerdict::FinitePd);
    }

    #[test]
    fn a_trivial_group_makes_every_multiplicity_space_projective() {
        // one-point shapes have trivial symmetric groups, so char-2 trivial
        // multiplicities are fine there
        let field = FieldSpec::Prime(2);
        let v = basic_relative_projective(field, &GroupRep::trivial(field, sh(&[1])), &sh(&[3]))
            .unwrap();
        assert_eq!(
            projective_dim_classifier(&v).unwrap().verdict,
            PdVerdict::FinitePd
        );
    }

    #[test]
    fn trivial_mod_three_is_projective_for_the_two_point_group() {
        // |S_2| = 2 is invertible mod 3, so averaging solves the splitting
        let field = FieldSpec::Prime(3);
        let v = basic_relative_projective(field, &GroupRep::trivial(field, sh(&[2])), &sh(&[4]))
            .unwrap();
        assert_eq!(
            projective_dim_classifier(&v).unwrap().verdict,
            PdVerdict::FinitePd
        );
    }
}
