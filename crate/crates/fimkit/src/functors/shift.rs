use crate::combinat::{Injection, Shape};
use crate::error::{FimError, Result};
use crate::module::{direct_sum, BoxLattice, LatticeMap, TruncatedModule};
use crate::linalg::SpMat;

/// A functor application together with its bookkeeping: how much of the box
/// was consumed, and the natural map from the input into the output at every
/// object of the shrunk box.
pub struct FunctorResult {
    pub output: TruncatedModule,
    /// Componentwise shrinkage: `output` box = input box − `box_loss`.
    pub box_loss: Shape,
    /// Objectwise matrices of the natural map `V -> output`, indexed over
    /// the output box.
    pub connecting: LatticeMap<SpMat>,
}

/// The shift along direction `i`: the output takes at `n` the value of `v`
/// at `n + o_i`, with actions pulled back along the embedding that adds a
/// new least element in factor `i`. Swaps in factor `i` shift their index by
/// one; the inclusion in factor `i` becomes the old inclusion followed by
/// the swap of the two added points. The natural map at `n` is the inclusion
/// action of `v` there.
pub fn shift(v: &TruncatedModule, i: usize) -> Result<FunctorResult> {
    assert!(i < v.arity(), "shift direction out of range");
    let Some(new_bound) = v.bound().minus_unit(i) else {
        return Err(FimError::BoxTooSmall(format!(
            "box {} is exhausted in direction {}",
            v.bound(),
            i + 1
        )));
    };
    let m = v.arity();
    let lattice = BoxLattice::new(new_bound);
    let dims = LatticeMap::build(&lattice, |n| v.dim(&n.plus_unit(i)));
    let trans = LatticeMap::build(&lattice, |n| {
        let up = n.plus_unit(i);
        (0..m)
            .map(|i2| {
                (1..n.entry(i2))
                    .map(|j| {
                        let jj = if i2 == i { j + 1 } else { j };
                        v.trans_mat(&up, i2, jj).clone()
                    })
                    .collect()
            })
            .collect()
    });
    let incl = LatticeMap::build(&lattice, |n| {
        let up = n.plus_unit(i);
        (0..m)
            .map(|i2| {
                if !lattice.contains(&n.plus_unit(i2)) {
                    return None;
                }
                let x = v.incl_mat(&up, i2).expect("inside the original box");
                Some(if i2 == i {
                    v.trans_mat(&up.plus_unit(i), i, 1).mul(x)
                } else {
                    x.clone()
                })
            })
            .collect()
    });
    let connecting = LatticeMap::build(&lattice, |n| {
        v.incl_mat(n, i).expect("inside the original box").clone()
    });
    let output = TruncatedModule::from_parts(v.field(), dims, trans, incl)
        .expect("pulled-back tables stay consistent");
    Ok(FunctorResult {
        output,
        box_loss: Shape::zero(m).plus_unit(i),
        connecting,
    })
}

/// Iterated shift by a whole shape of steps. The natural map at `n` is the
/// evaluation of the staircase `n -> n + steps`, which the axioms make equal
/// to any composition of single-step natural maps.
pub fn shift_many(v: &TruncatedModule, steps: &Shape) -> Result<FunctorResult> {
    steps.check_arity(v.arity())?;
    let mut out = v.clone();
    for i in 0..steps.arity() {
        for _ in 0..steps.entry(i) {
            out = shift(&out, i)?.output;
        }
    }
    let lattice = out.lattice().clone();
    let connecting = LatticeMap::build(&lattice, |n| {
        v.evaluate(&Injection::staircase(n, steps))
            .expect("staircase stays inside the original box")
    });
    Ok(FunctorResult {
        output: out,
        box_loss: steps.clone(),
        connecting,
    })
}

/// The direct sum of all one-direction shifts, on the box shrunk by one in
/// every direction. The target of the assembled map from one copy of `v` per
/// direction.
pub fn total_shift(v: &TruncatedModule) -> Result<TruncatedModule> {
    let mut acc = TruncatedModule::zero(v.field(), v.bound().clone());
    for i in 0..v.arity() {
        acc = direct_sum(&acc, &shift(v, i)?.output)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;
    use crate::module::{free_module, from_presentation, Generator, Presentation, Relation,
        RelationTerm};

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    /// The rank-one module supported on the hyperplane `t_2 = 0`: one
    /// generator in degree (0,0) whose translate into (0,1) is killed.
    fn axis_module(bound: &Shape) -> TruncatedModule {
        let field = FieldSpec::Rational;
        let p = Presentation {
            field,
            arity: 2,
            generators: vec![Generator {
                shape: sh(&[0, 0]),
                label: "g".into(),
            }],
            relations: vec![Relation {
                shape: sh(&[0, 1]),
                terms: vec![RelationTerm {
                    gen: 0,
                    injection: Injection::staircase(&sh(&[0, 0]), &sh(&[0, 1])),
                    coeff: field.one(),
                }],
            }],
        };
        from_presentation(&p, bound).unwrap()
    }

    #[test]
    fn shift_of_free_splits_as_free_plus_lower() {
        let field = FieldSpec::Rational;
        let v = free_module(field, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let shifted = shift(&v, 0).unwrap();
        assert_eq!(shifted.box_loss, sh(&[1, 0]));
        assert_eq!(shifted.output.bound(), &sh(&[2, 3]));
        shifted.output.check_axioms().unwrap();
        let a = free_module(field, sh(&[1, 1]), sh(&[2, 3])).unwrap();
        let b = free_module(field, sh(&[0, 1]), sh(&[2, 3])).unwrap();
        for (n, d) in shifted.output.dims_table().entries() {
            assert_eq!(d, a.dim(&n) + b.dim(&n), "at {n}");
        }
    }

    #[test]
    fn shift_of_zero_is_zero() {
        let z = TruncatedModule::zero(FieldSpec::Rational, sh(&[2, 2]));
        assert!(shift(&z, 1).unwrap().output.is_zero());
    }

    #[test]
    fn shifts_commute_with_identical_tables() {
        let v = axis_module(&sh(&[3, 3]));
        let a = shift(&shift(&v, 0).unwrap().output, 1).unwrap().output;
        let b = shift(&shift(&v, 1).unwrap().output, 0).unwrap().output;
        assert_eq!(a, b);

        let f = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let fa = shift(&shift(&f, 0).unwrap().output, 1).unwrap().output;
        let fb = shift(&shift(&f, 1).unwrap().output, 0).unwrap().output;
        assert_eq!(fa, fb);
    }

    #[test]
    fn connecting_map_is_natural() {
        // the connecting matrices intertwine every structure map of the
        // input with the pulled-back maps of the output
        let v = free_module(FieldSpec::Rational, sh(&[2]), sh(&[4])).unwrap();
        let shifted = shift(&v, 0).unwrap();
        let out = &shifted.output;
        for (n, c) in shifted.connecting.iter() {
            for j in 1..n.entry(0) {
                let lhs = c.mul(v.trans_mat(&n, 0, j));
                let rhs = out.trans_mat(&n, 0, j).mul(c);
                assert_eq!(lhs, rhs, "swap {j} at {n}");
            }
            if let Some(x_out) = out.incl_mat(&n, 0) {
                let up = n.plus_unit(0);
                let lhs = x_out.mul(c);
                let rhs = shifted.connecting.get(&up).mul(v.incl_mat(&n, 0).unwrap());
                assert_eq!(lhs, rhs, "inclusion at {n}");
            }
        }
    }

    #[test]
    fn shift_errors_when_box_exhausted() {
        let v = free_module(FieldSpec::Rational, sh(&[0, 1]), sh(&[0, 2])).unwrap();
        assert!(matches!(shift(&v, 0), Err(FimError::BoxTooSmall(_))));
        assert!(shift(&v, 1).is_ok());
    }

    #[test]
    fn shift_many_agrees_with_iterated_single_shifts() {
        let v = axis_module(&sh(&[3, 3]));
        let many = shift_many(&v, &sh(&[1, 1])).unwrap();
        let single = shift(&shift(&v, 0).unwrap().output, 1).unwrap().output;
        assert_eq!(many.output, single);
        assert_eq!(many.box_loss, sh(&[1, 1]));
        // axis module: shifting along direction 2 empties it
        assert!(many.output.is_zero());
        // shifting along direction 1 reproduces it
        let along1 = shift_many(&v, &sh(&[1, 0])).unwrap().output;
        assert_eq!(along1, v.restrict_to_box(&sh(&[2, 3])).unwrap());
    }

    #[test]
    fn total_shift_adds_one_direction_per_summand() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let s = total_shift(&v).unwrap();
        assert_eq!(s.bound(), &sh(&[2, 2]));
        for (n, d) in s.dims_table().entries() {
            assert_eq!(
                d,
                v.dim(&n.plus_unit(0)) + v.dim(&n.plus_unit(1)),
                "at {n}"
            );
        }
    }
}
