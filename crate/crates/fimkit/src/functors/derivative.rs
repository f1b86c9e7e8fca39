use super::shift::{shift, FunctorResult};
use crate::combinat::Shape;
use crate::error::Result;
use crate::linalg::{sparse_kernel_basis, SpMat};
use crate::module::{
    direct_sum, quotient_by_span, realize_span, span_from_closed, LatticeMap, TruncatedModule,
};

/// Objectwise dimension bookkeeping for an exact sequence
/// `0 -> kernel -> source -> shifted -> derivative -> 0`.
#[derive(Clone, Debug)]
pub struct FourTermRow {
    pub shape: Shape,
    pub kernel: usize,
    pub source: usize,
    pub shifted: usize,
    pub derivative: usize,
}

impl FourTermRow {
    pub fn holds(&self) -> bool {
        self.kernel + self.shifted == self.source + self.derivative
    }
}

#[derive(Clone, Debug, Default)]
pub struct FourTermTable {
    pub rows: Vec<FourTermRow>,
}

impl FourTermTable {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(FourTermRow::holds)
    }

    pub fn first_violation(&self) -> Option<&FourTermRow> {
        self.rows.iter().find(|r| !r.holds())
    }
}

/// Kernel and cokernel of the natural map into the shift along `i`,
/// realized as modules on the shrunk box, with the exactness certificate.
pub struct DerivativeKernel {
    /// Vectors killed by the one-step inclusion, as a module.
    pub kernel: TruncatedModule,
    /// Columns of the kernel basis in the coordinates of the input.
    pub kernel_embedding: LatticeMap<SpMat>,
    /// The shift modulo the image of the natural map.
    pub derivative: TruncatedModule,
    /// The shift itself, kept for downstream reuse.
    pub shifted: FunctorResult,
    pub certificate: FourTermTable,
}

pub fn derivative_and_kernel(v: &TruncatedModule, i: usize) -> Result<DerivativeKernel> {
    let shifted = shift(v, i)?;
    let restricted = v.restrict_to_box(shifted.output.bound())?;
    let lattice = restricted.lattice().clone();

    let kernel_gens = LatticeMap::build(&lattice, |n| {
        sparse_kernel_basis(shifted.connecting.get(n))
    });
    let kernel_span = span_from_closed(&restricted, &kernel_gens);
    let (kernel, kernel_embedding) = realize_span(&restricted, &kernel_span);

    let image_gens = LatticeMap::build(&lattice, |n| {
        let x = shifted.connecting.get(n);
        (0..x.cols).map(|c| x.column(c).clone()).collect()
    });
    let image_span = span_from_closed(&shifted.output, &image_gens);
    let derivative = quotient_by_span(&shifted.output, &image_span).module;

    let certificate = FourTermTable {
        rows: lattice
            .iter()
            .map(|n| FourTermRow {
                kernel: kernel.dim(&n),
                source: v.dim(&n),
                shifted: shifted.output.dim(&n),
                derivative: derivative.dim(&n),
                shape: n,
            })
            .collect(),
    };
    Ok(DerivativeKernel {
        kernel,
        kernel_embedding,
        derivative,
        shifted,
        certificate,
    })
}

pub fn kernel_functor(v: &TruncatedModule, i: usize) -> Result<TruncatedModule> {
    Ok(derivative_and_kernel(v, i)?.kernel)
}

pub fn derivative_functor(v: &TruncatedModule, i: usize) -> Result<TruncatedModule> {
    Ok(derivative_and_kernel(v, i)?.derivative)
}

/// Direct sum of the kernels along every direction, on the box shrunk by one
/// everywhere.
pub fn total_kernel(v: &TruncatedModule) -> Result<TruncatedModule> {
    let mut acc = TruncatedModule::zero(v.field(), v.bound().clone());
    for i in 0..v.arity() {
        acc = direct_sum(&acc, &derivative_and_kernel(v, i)?.kernel)?;
    }
    Ok(acc)
}

/// Direct sum of the derivatives along every direction, on the box shrunk by
/// one everywhere.
pub fn total_derivative(v: &TruncatedModule) -> Result<TruncatedModule> {
    let mut acc = TruncatedModule::zero(v.field(), v.bound().clone());
    for i in 0..v.arity() {
        acc = direct_sum(&acc, &derivative_and_kernel(v, i)?.derivative)?;
    }
    Ok(acc)
}

/// The combined exactness certificate for
/// `0 -> KV -> V^{⊕m} -> sV -> DV -> 0` over the box shrunk by one in every
/// direction: the source column counts one copy of `v` per direction.
pub fn four_term_table(v: &TruncatedModule) -> Result<FourTermTable> {
    let m = v.arity();
    let kernel = total_kernel(v)?;
    let shifted = super::shift::total_shift(v)?;
    let derivative = total_derivative(v)?;
    Ok(FourTermTable {
        rows: kernel
            .lattice()
            .clone()
            .iter()
            .map(|n| FourTermRow {
                kernel: kernel.dim(&n),
                source: m * v.dim(&n),
                shifted: shifted.dim(&n),
                derivative: derivative.dim(&n),
                shape: n,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Injection;
    use crate::linalg::{FieldSpec, QuotientStructure, SparseReducer};
    use crate::module::{
        free_module, from_presentation, Generator, Presentation, Relation, RelationTerm,
    };

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    /// One generator in degree 0 with its unique translate at `cut` killed:
    /// the value is k strictly below `cut` and 0 from `cut` upward.
    fn cutoff_module(cut: usize, bound: usize) -> TruncatedModule {
        let field = FieldSpec::Rational;
        let p = Presentation {
            field,
            arity: 1,
            generators: vec![Generator {
                shape: sh(&[0]),
                label: "g".into(),
            }],
            relations: vec![Relation {
                shape: sh(&[cut]),
                terms: vec![RelationTerm {
                    gen: 0,
                    injection: Injection::staircase(&sh(&[0]), &sh(&[cut])),
                    coeff: field.one(),
                }],
            }],
        };
        from_presentation(&p, &sh(&[bound])).unwrap()
    }

    #[test]
    fn derivative_of_free_drops_the_shape() {
        let field = FieldSpec::Rational;
        let v = free_module(field, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let dk = derivative_and_kernel(&v, 0).unwrap();
        assert!(dk.kernel.is_zero());
        assert!(dk.certificate.holds());
        dk.derivative.check_axioms().unwrap();
        let lower = free_module(field, sh(&[0, 1]), sh(&[2, 3])).unwrap();
        assert_eq!(dk.derivative.dims_table(), lower.dims_table());
    }

    #[test]
    fn kernels_of_free_modules_vanish() {
        let field = FieldSpec::Rational;
        for (shape, bound) in [(sh(&[0]), sh(&[4])), (sh(&[2]), sh(&[4])), (sh(&[1, 0]), sh(&[2, 2]))] {
            let v = free_module(field, shape, bound).unwrap();
            for i in 0..v.arity() {
                assert!(kernel_functor(&v, i).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kernel_detects_a_killed_generator() {
        // value is k at 0 only; the inclusion into degree 1 kills everything
        let v = cutoff_module(1, 3);
        let dk = derivative_and_kernel(&v, 0).unwrap();
        assert_eq!(dk.kernel.dim(&sh(&[0])), 1);
        assert!(dk.derivative.is_zero());
        assert!(dk.certificate.holds());
        dk.kernel.check_axioms().unwrap();
    }

    #[test]
    fn four_term_identity_on_presented_modules() {
        let table = four_term_table(&cutoff_module(2, 4)).unwrap();
        assert!(table.holds());
        assert!(table.first_violation().is_none());

        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[2, 2])).unwrap();
        assert!(four_term_table(&v).unwrap().holds());
    }

    #[test]
    fn certificate_reports_a_broken_row() {
        let row = FourTermRow {
            shape: sh(&[1]),
            kernel: 1,
            source: 2,
            shifted: 2,
            derivative: 0,
        };
        assert!(!row.holds());
        let table = FourTermTable { rows: vec![row] };
        assert_eq!(table.first_violation().unwrap().shape, sh(&[1]));
    }

    #[test]
    fn cross_direction_derivative_commutes_with_shift() {
        // identical tables: both sides quotient the double shift by the same
        // image span, in the same canonical bases
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let d_then_s = shift(&derivative_and_kernel(&v, 1).unwrap().derivative, 0)
            .unwrap()
            .output;
        let s_then_d = derivative_and_kernel(&shift(&v, 0).unwrap().output, 1)
            .unwrap()
            .derivative;
        assert_eq!(d_then_s, s_then_d);
    }

    #[test]
    fn same_direction_swap_gives_the_isomorphism() {
        // shifting the derivative vs deriving the shift along the same
        // direction: the quotients of V(n+2) differ by the swap of the two
        // added points, which induces an isomorphism objectwise
        let v = free_module(FieldSpec::Rational, sh(&[2]), sh(&[5])).unwrap();
        let sd = shift(&derivative_and_kernel(&v, 0).unwrap().derivative, 0)
            .unwrap()
            .output;
        let ds = derivative_and_kernel(&shift(&v, 0).unwrap().output, 0)
            .unwrap()
            .derivative;
        assert_eq!(sd.dims_table(), ds.dims_table());
        for n in 0..=3usize {
            let mid = sh(&[n + 1]);
            let x = v.incl_mat(&mid, 0).unwrap();
            let t = v.trans_mat(&sh(&[n + 2]), 0, 1);
            let quotient_of = |mat: &SpMat| {
                let mut red = SparseReducer::new(v.field(), mat.rows);
                for c in 0..mat.cols {
                    red.insert(mat.column(c));
                }
                red.quotient()
            };
            let q1: QuotientStructure = quotient_of(x);
            let q2: QuotientStructure = quotient_of(&t.mul(x));
            assert_eq!(q1.dim(), sd.dim(&sh(&[n])));
            assert_eq!(q2.dim(), ds.dim(&sh(&[n])));
            // the swap descends to an invertible map between the quotients
            let mut image_rank = SparseReducer::new(v.field(), q2.dim());
            for &c in q1.section_cols() {
                image_rank.insert(&q2.project_vec(t.column(c)));
            }
            assert_eq!(image_rank.rank(), q1.dim(), "iso fails at degree {n}");
        }
    }

    #[test]
    fn totals_match_per_direction_sums() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[2, 2])).unwrap();
        let tk = total_kernel(&v).unwrap();
        let td = total_derivative(&v).unwrap();
        for n in tk.lattice().clone().iter() {
            let mut k = 0;
            let mut d = 0;
            for i in 0..2 {
                let dk = derivative_and_kernel(&v, i).unwrap();
                k += dk.kernel.dim(&n);
                d += dk.derivative.dim(&n);
            }
            assert_eq!(tk.dim(&n), k);
            assert_eq!(td.dim(&n), d);
        }
    }
}
