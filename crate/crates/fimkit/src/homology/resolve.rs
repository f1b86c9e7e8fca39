use crate::combinat::{enumerate_injections, MultiPermutation, Shape};
use crate::error::Result;
use crate::linalg::{sparse_kernel_basis, Matrix, QuotientStructure, SparseVec, SpMat};
use crate::module::{
    build_free, ideal_span, realize_span, span_from_closed, GradedDims, LatticeMap,
    TruncatedModule,
};

/// Degree-zero homology: the objectwise quotient of a module by everything
/// reachable from strictly below, with the quotient charts kept so that the
/// residual permutation actions and generator lifts stay available.
pub struct HZero {
    pub dims: GradedDims,
    pub charts: LatticeMap<QuotientStructure>,
}

pub fn h_zero(v: &TruncatedModule) -> HZero {
    let span = ideal_span(v);
    let charts = LatticeMap::build(v.lattice(), |n| span.quotient_at(n));
    let dims = GradedDims::new(LatticeMap::build(v.lattice(), |n| charts.get(n).dim()));
    HZero { dims, charts }
}

impl HZero {
    /// Matrix of the permutation action induced on the quotient at the
    /// shape of `p`.
    pub fn induced_action(&self, v: &TruncatedModule, p: &MultiPermutation) -> Matrix {
        let chart = self.charts.get(p.shape());
        let act = v.perm_action(p);
        let mut out = Matrix::zeros(v.field(), chart.dim(), chart.dim());
        for (k, &c) in chart.section_cols().iter().enumerate() {
            let col = chart.project_vec(act.column(c));
            for (r, val) in col.entries() {
                out.set(*r, k, val.clone());
            }
        }
        out
    }
}

/// A free module surjecting onto `v`, with one generator per degree-zero
/// homology basis vector; the map is recorded objectwise.
pub struct FreeCover {
    pub free: TruncatedModule,
    pub map: LatticeMap<SpMat>,
}

pub fn minimal_cover(v: &TruncatedModule) -> Result<FreeCover> {
    let h0 = h_zero(v);
    minimal_cover_from(v, &h0)
}

fn minimal_cover_from(v: &TruncatedModule, h0: &HZero) -> Result<FreeCover> {
    let lattice = v.lattice().clone();
    // one generator per section column of each chart, grouped by shape so
    // the translate matrices are evaluated once per injection
    let mut gens: Vec<(Shape, usize)> = Vec::new();
    for n in lattice.iter() {
        for &c in h0.charts.get(&n).section_cols() {
            gens.push((n.clone(), c));
        }
    }
    let shapes: Vec<Shape> = gens.iter().map(|(s, _)| s.clone()).collect();
    let ambient = build_free(v.field(), &shapes, v.bound())?;
    let map = LatticeMap::build(&lattice, |t| {
        let mut cols: Vec<SparseVec> =
            vec![SparseVec::empty(); ambient.module.dim(t)];
        for s in lattice.iter() {
            if !s.leq(t) {
                continue;
            }
            let carriers: Vec<usize> = gens
                .iter()
                .enumerate()
                .filter(|(_, (gs, _))| gs == &s)
                .map(|(g, _)| g)
                .collect();
            if carriers.is_empty() {
                continue;
            }
            for f in enumerate_injections(&s, t) {
                let ev = v.evaluate(&f).expect("both objects are boxed");
                for &g in &carriers {
                    let pos = ambient
                        .basis_index(t, g, &f)
                        .expect("basis injection is indexed");
                    cols[pos] = ev.column(gens[g].1).clone();
                }
            }
        }
        SpMat::from_columns(v.field(), v.dim(t), cols)
    });
    Ok(FreeCover {
        free: ambient.module,
        map,
    })
}

/// The kernel of a cover, realized as a module on the same box, with its
/// objectwise embedding back into the covering free module.
pub struct CoverKernel {
    pub kernel: TruncatedModule,
    pub embedding: LatticeMap<SpMat>,
    pub cover: FreeCover,
}

pub fn cover_kernel(v: &TruncatedModule) -> Result<CoverKernel> {
    let h0 = h_zero(v);
    cover_kernel_from(v, &h0)
}

fn cover_kernel_from(v: &TruncatedModule, h0: &HZero) -> Result<CoverKernel> {
    let cover = minimal_cover_from(v, h0)?;
    let gens = LatticeMap::build(cover.free.lattice(), |n| {
        sparse_kernel_basis(cover.map.get(n))
    });
    let span = span_from_closed(&cover.free, &gens);
    let (kernel, embedding) = realize_span(&cover.free, &span);
    Ok(CoverKernel {
        kernel,
        embedding,
        cover,
    })
}

/// Homology dimension tables for `s = 0 ..= s_max`, with the generation
/// degree `gd` (top total degree of the degree-zero table, `-1` when zero)
/// and the per-level degrees `hd`.
pub struct Homology {
    pub h: Vec<GradedDims>,
    pub gd: i64,
    pub hd: Vec<i64>,
}

fn top(dims: &GradedDims) -> i64 {
    dims.top_degree().map(|d| d as i64).unwrap_or(-1)
}

/// H_{s+1} of the module covered by `ck.cover`: the part of the syzygy's
/// degree-zero homology that dies in the cover's. The free cover has one
/// generator per homology basis vector, but that is not minimal when a
/// multiplicity space carries its symmetry group nontrivially, so classes
/// of the kernel that stay visible in the cover must be discarded — the
/// long exact sequence identifies the next homology with exactly the part
/// that vanishes.
fn connecting_kernel_dims(ck: &CoverKernel) -> GradedDims {
    let kernel_h0 = h_zero(&ck.kernel);
    let cover_h0 = h_zero(&ck.cover.free);
    let field = ck.kernel.field();
    let table = LatticeMap::build(ck.kernel.lattice(), |n| {
        let src = kernel_h0.charts.get(n);
        if src.dim() == 0 {
            return 0;
        }
        let tgt = cover_h0.charts.get(n);
        let embed = ck.embedding.get(n);
        let mut image = Matrix::zeros(field, tgt.dim(), src.dim());
        for (k, &c) in src.section_cols().iter().enumerate() {
            let col = tgt.project_vec(embed.column(c));
            for (r, val) in col.entries() {
                image.set(*r, k, val.clone());
            }
        }
        src.dim() - image.rank()
    });
    GradedDims::new(table)
}

/// Computes H_s by peeling free covers: H_0 is the objectwise quotient by
/// the image of everything below, and each following level is the part of
/// the syzygy's generator space that maps to zero in the cover. Exact at
/// every boxed object because each value only depends on objects below it.
pub fn homology(v: &TruncatedModule, s_max: usize) -> Result<Homology> {
    let mut h = Vec::with_capacity(s_max + 1);
    let h0 = h_zero(v);
    h.push(h0.dims.clone());
    if s_max > 0 {
        let mut ck = cover_kernel_from(v, &h0)?;
        for s in 1..=s_max {
            h.push(connecting_kernel_dims(&ck));
            if s < s_max {
                ck = cover_kernel(&ck.kernel)?;
            }
        }
    }
    let hd: Vec<i64> = h.iter().map(top).collect();
    Ok(Homology { gd: hd[0], h, hd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Injection;
    use crate::linalg::FieldSpec;
    use crate::module::{
        basic_relative_projective, direct_sum, free_module, from_presentation, Generator,
        GroupRep, Presentation, Relation, RelationTerm,
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

    #[test]
    fn degree_zero_homology_of_free_sits_at_the_generator() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let h0 = h_zero(&v);
        for (n, d) in h0.dims.entries() {
            assert_eq!(d, usize::from(n == sh(&[1, 1])));
        }
    }

    #[test]
    fn induced_generator_homology_recovers_the_multiplicity_space() {
        let field = FieldSpec::Rational;
        let rep = GroupRep::sign(field, sh(&[2]));
        let v = basic_relative_projective(field, &rep, &sh(&[4])).unwrap();
        let h0 = h_zero(&v);
        assert_eq!(h0.dims.dim(&sh(&[2])), 1);
        assert_eq!(h0.dims.total(), 1);
        // the residual swap action is the sign
        let swap = MultiPermutation::transposition(&sh(&[2]), 0, 1);
        let act = h0.induced_action(&v, &swap);
        assert_eq!(act, Matrix::from_i64_rows(field, &[&[-1]]));
    }

    #[test]
    fn covers_surject_and_split_off_the_homology_basis() {
        let v = axis_module(&sh(&[2, 2]));
        let cover = minimal_cover(&v).unwrap();
        for n in v.lattice().clone().iter() {
            let mat = cover.map.get(&n).to_dense();
            assert_eq!(mat.rank(), v.dim(&n), "cover misses {n}");
        }
        // one generator at the origin only
        assert_eq!(cover.free.dim(&sh(&[0, 0])), 1);
    }

    #[test]
    fn free_modules_have_no_higher_homology() {
        let v = free_module(FieldSpec::Rational, sh(&[1]), sh(&[4])).unwrap();
        let hom = homology(&v, 2).unwrap();
        assert_eq!(hom.gd, 1);
        assert!(hom.h[1].is_zero());
        assert!(hom.h[2].is_zero());
        assert_eq!(hom.hd[1], -1);
    }

    #[test]
    fn the_axis_supported_module_walks_one_step_out_per_level() {
        // killing the lone translate in the second direction forces exactly
        // one relation at (0,1); each further syzygy moves one more step out
        // along that direction, one dimension at a time
        let v = axis_module(&sh(&[3, 3]));
        let hom = homology(&v, 2).unwrap();
        assert_eq!(hom.h[0].dim(&Shape::zero(2)), 1);
        assert_eq!(hom.h[0].total(), 1);
        assert_eq!(hom.h[1].dim(&sh(&[0, 1])), 1);
        assert_eq!(hom.h[1].total(), 1);
        assert_eq!(hom.h[2].dim(&sh(&[0, 2])), 1);
        assert_eq!(hom.h[2].total(), 1);
        assert_eq!(hom.gd, 0);
        assert_eq!(hom.hd[1], 1);
        assert_eq!(hom.hd[2], 2);
    }

    #[test]
    fn homology_adds_over_direct_sums() {
        let a = axis_module(&sh(&[2, 2]));
        let b = free_module(FieldSpec::Rational, sh(&[1, 0]), sh(&[2, 2])).unwrap();
        let both = direct_sum(&a, &b).unwrap();
        let ha = homology(&a, 1).unwrap();
        let hb = homology(&b, 1).unwrap();
        let hboth = homology(&both, 1).unwrap();
        for s in 0..=1 {
            for (n, d) in hboth.h[s].entries() {
                assert_eq!(d, ha.h[s].dim(&n) + hb.h[s].dim(&n));
            }
        }
        assert_eq!(hboth.hd[1], ha.hd[1].max(hb.hd[1]));
    }

    #[test]
    fn generation_degree_of_free_modules_is_the_shape_size() {
        for (shape, bound) in [(sh(&[2]), sh(&[4])), (sh(&[1, 1]), sh(&[2, 2]))] {
            let v = free_module(FieldSpec::Rational, shape.clone(), bound).unwrap();
            assert_eq!(homology(&v, 0).unwrap().gd, shape.total() as i64);
        }
    }
}
