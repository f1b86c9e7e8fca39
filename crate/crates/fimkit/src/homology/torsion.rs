use crate::combinat::{Injection, Shape};
use crate::error::{FimError, Result};
use crate::functors::{derivative_and_kernel, shift};
use crate::linalg::{sparse_kernel_basis, SpMat};
use crate::module::{
    quotient_by_span, realize_span, span_from_closed, GradedDims, LatticeMap, TruncatedModule,
};

/// Torsion data of a module: per-direction kernels of the one-step maps,
/// the torsion degrees read off them, and the certified torsion submodule
/// with its complementary quotient.
pub struct TorsionReport {
    /// Dimensions of the kernel of the natural map into the shift along
    /// each direction; `None` when the box is already exhausted there.
    pub kernel_dims: Vec<Option<GradedDims>>,
    /// Largest i-th coordinate carrying kernel in direction i; -1 when the
    /// one-step maps are all injective.
    pub td: Vec<i64>,
    pub td_total: i64,
    /// Everything killed by the walk to the box corner. An
    /// under-approximation of the full torsion near the boundary; exact
    /// within the margin.
    pub torsion: TruncatedModule,
    pub torsion_embedding: LatticeMap<SpMat>,
    pub free_part: TruncatedModule,
    pub free_projection: LatticeMap<SpMat>,
    /// Box minus the deepest object involved in a kernel: coordinates up to
    /// which the torsion claims are certified.
    pub margin: Shape,
    /// For each direction with torsion: whether shifting once dropped the
    /// torsion degree, as it must; `None` when untestable in the box.
    pub shift_drop: Vec<Option<bool>>,
}

fn corner_kernel_gens(v: &TruncatedModule) -> LatticeMap<Vec<crate::linalg::SparseVec>> {
    let bound = v.bound().clone();
    LatticeMap::build(v.lattice(), |n| {
        let steps = bound.minus(n).expect("boxed object");
        let walk = v
            .evaluate(&Injection::staircase(n, &steps))
            .expect("walk stays in the box");
        sparse_kernel_basis(&walk)
    })
}

pub fn torsion_analysis(v: &TruncatedModule) -> Result<TorsionReport> {
    let m = v.arity();
    let mut kernel_dims: Vec<Option<GradedDims>> = Vec::with_capacity(m);
    for i in 0..m {
        kernel_dims.push(match derivative_and_kernel(v, i) {
            Ok(dk) => Some(dk.kernel.dims_table()),
            Err(FimError::BoxTooSmall(_)) => None,
            Err(e) => return Err(e),
        });
    }
    let td: Vec<i64> = kernel_dims
        .iter()
        .enumerate()
        .map(|(i, k)| k.as_ref().map(|k| k.max_coord(i)).unwrap_or(-1))
        .collect();
    let td_total = td.iter().copied().max().unwrap_or(-1);

    let gens = corner_kernel_gens(v);
    let span = span_from_closed(v, &gens);
    let (torsion, torsion_embedding) = realize_span(v, &span);
    let quotient = quotient_by_span(v, &span);
    let free_projection = LatticeMap::build(v.lattice(), |n| {
        SpMat::from_dense(&quotient.charts.get(n).projection_matrix())
    });

    let bound = v.bound().clone();
    let mut deepest = Shape::zero(m);
    let mut mark = |n: &Shape| {
        let merged: Vec<usize> = (0..m).map(|j| deepest.entry(j).max(n.entry(j))).collect();
        deepest = Shape::new(merged);
    };
    for n in torsion.dims_table().support() {
        mark(&n);
    }
    for k in kernel_dims.iter().flatten() {
        for n in k.support() {
            mark(&n);
        }
    }
    let margin = bound.minus(&deepest).expect("support is boxed");

    let shift_drop: Vec<Option<bool>> = (0..m)
        .map(|i| {
            if td[i] < 0 {
                return None;
            }
            let shifted = shift(v, i).ok()?;
            let dk = derivative_and_kernel(&shifted.output, i).ok()?;
            Some(dk.kernel.dims_table().max_coord(i) <= td[i] - 1)
        })
        .collect();

    Ok(TorsionReport {
        kernel_dims,
        td,
        td_total,
        torsion,
        torsion_embedding,
        free_part: quotient.module,
        free_projection,
        margin,
        shift_drop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::enumerate_injections;
    use crate::functors::shift_many;
    use crate::functors::total_shift;
    use crate::linalg::FieldSpec;
    use crate::module::{
        free_module, from_presentation, Generator, Presentation, Relation, RelationTerm,
    };

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    fn axis_module(bound: &Shape) -> TruncatedModule {
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
        from_presentation(&p, bound).unwrap()
    }

    /// One 36-dimensional value at (3,3) and nothing anywhere else: both
    /// one-step translates of the generator are killed.
    fn lone_object_module() -> TruncatedModule {
        let field = FieldSpec::Rational;
        let shape = sh(&[3, 3]);
        let mut relations = Vec::new();
        for i in 0..2 {
            let up = shape.plus_unit(i);
            for f in enumerate_injections(&shape, &up) {
                relations.push(Relation {
                    shape: up.clone(),
                    terms: vec![RelationTerm {
                        gen: 0,
                        injection: f,
                        coeff: field.one(),
                    }],
                });
            }
        }
        let p = Presentation {
            field,
            arity: 2,
            generators: vec![Generator {
                shape,
                label: "w".into(),
            }],
            relations,
        };
        from_presentation(&p, &sh(&[5, 5])).unwrap()
    }

    #[test]
    fn free_modules_are_torsion_free() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let report = torsion_analysis(&v).unwrap();
        assert_eq!(report.td, vec![-1, -1]);
        assert_eq!(report.td_total, -1);
        assert!(report.torsion.is_zero());
        assert_eq!(&report.margin, v.bound());
        assert_eq!(report.shift_drop, vec![None, None]);
        assert_eq!(report.free_part.dims_table(), v.dims_table());
    }

    #[test]
    fn the_axis_module_is_pure_torsion_off_nothing() {
        let v = axis_module(&sh(&[3, 3]));
        let report = torsion_analysis(&v).unwrap();
        assert_eq!(report.td, vec![-1, 0]);
        assert_eq!(report.td_total, 0);
        // the whole module dies on the walk to the corner
        assert_eq!(report.torsion.dims_table(), v.dims_table());
        assert!(report.free_part.is_zero());
        // the support is the first axis: dimension one exactly when the
        // second coordinate vanishes
        for (n, d) in v.dims_table().entries() {
            assert_eq!(d, usize::from(n.entry(1) == 0));
        }
        assert_eq!(report.shift_drop, vec![None, Some(true)]);
        assert_eq!(report.margin, sh(&[0, 3]));
        // the kernel needs generators at least as deep as the torsion degree
        let k2 = derivative_and_kernel(&v, 1).unwrap().kernel;
        let kernel_gd = crate::homology::homology(&k2, 0).unwrap().gd;
        assert!(kernel_gd >= report.td[1]);
    }

    #[test]
    fn double_shift_of_the_axis_module_vanishes() {
        let v = axis_module(&sh(&[3, 3]));
        assert!(shift_many(&v, &sh(&[1, 1])).unwrap().output.is_zero());
        // one shift along the supported axis keeps it alive
        assert!(!shift_many(&v, &sh(&[1, 0])).unwrap().output.is_zero());
    }

    #[test]
    fn a_lone_object_keeps_its_torsion_degree_under_total_shift() {
        let v = lone_object_module();
        assert_eq!(v.dim(&sh(&[3, 3])), 36);
        assert_eq!(v.total_dim(), 36);
        let report = torsion_analysis(&v).unwrap();
        assert_eq!(report.td, vec![3, 3]);

        let sv = total_shift(&v).unwrap();
        let shifted_report = torsion_analysis(&sv).unwrap();
        assert_eq!(shifted_report.td_total, report.td_total);
        assert_eq!(shifted_report.td_total, 3);
    }

    #[test]
    fn torsion_and_quotient_split_the_dimensions() {
        let v = axis_module(&sh(&[2, 2]));
        let report = torsion_analysis(&v).unwrap();
        for n in v.lattice().clone().iter() {
            assert_eq!(
                report.torsion.dim(&n) + report.free_part.dim(&n),
                v.dim(&n)
            );
            // the projection kills exactly the embedded torsion
            let composite = report
                .free_projection
                .get(&n)
                .mul(report.torsion_embedding.get(&n));
            assert!(composite.is_zero());
        }
        report.torsion.check_axioms().unwrap();
    }
}
