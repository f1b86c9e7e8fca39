use std::collections::BTreeMap;
use std::sync::Arc;

use super::characters::{character_table, CharacterTable};
use crate::combinat::{partitions_of, MultiPartition, MultiPermutation, Shape};
use crate::error::{FimError, Result};
use crate::linalg::{FieldSpec, Scalar};
use crate::module::TruncatedModule;

/// Multiplicities of the simple modules of the endomorphism group of one
/// object, keyed by tuples of partitions. Zero multiplicities are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub shape: Shape,
    pub mults: BTreeMap<MultiPartition, usize>,
}

impl MultiplicityTable {
    /// Completeness witness: multiplicities weighted by irreducible
    /// dimensions, which must add up to the value's dimension.
    pub fn weighted_total(&self, tables: &[Arc<CharacterTable>]) -> u128 {
        self.mults
            .iter()
            .map(|(lambda, &c)| {
                let dim: u128 = lambda
                    .factors()
                    .iter()
                    .zip(tables)
                    .map(|(l, t)| {
                        let idx = t.index_of(l).expect("partition of the right weight");
                        t.dimension(idx) as u128
                    })
                    .product();
                c as u128 * dim
            })
            .sum()
    }
}

/// All tuples of partitions of the coordinates of `n`, in lexicographic
/// order of the per-factor enumeration.
fn multipartitions_of(n: &Shape) -> Vec<MultiPartition> {
    let mut out: Vec<Vec<crate::combinat::Partition>> = vec![Vec::new()];
    for i in 0..n.arity() {
        let choices = partitions_of(n.entry(i));
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |p| {
                    let mut next = prefix.clone();
                    next.push(p.clone());
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(MultiPartition::new).collect()
}

fn trace(v: &TruncatedModule, p: &MultiPermutation) -> Scalar {
    let field = v.field();
    let act = v.perm_action(p);
    let mut t = field.zero();
    for j in 0..act.cols {
        if let Some(val) = act.column(j).get(j) {
            t = field.add(&t, val);
        }
    }
    t
}

/// Decomposes the value of `v` at `n` into irreducibles of the product
/// symmetric group, by pairing the value's trace function against product
/// characters class by class. Characteristic zero only; the group algebra
/// must be semisimple for multiplicities to mean anything.
pub fn decompose(v: &TruncatedModule, n: &Shape) -> Result<MultiplicityTable> {
    let field = v.field();
    if field != FieldSpec::Rational {
        return Err(FimError::NeedsCharZero(field.to_string()));
    }
    v.lattice().check_contains(n)?;
    let tables: Vec<Arc<CharacterTable>> =
        (0..n.arity()).map(|i| character_table(n.entry(i))).collect();
    let classes = multipartitions_of(n);
    // one trace and one combined class size per conjugacy class
    let class_data: Vec<(u128, Scalar)> = classes
        .iter()
        .map(|mu| {
            let size: u128 = mu
                .factors()
                .iter()
                .zip(&tables)
                .map(|(p, t)| t.class_sizes[t.index_of(p).expect("partition of the weight")])
                .product();
            let rep = MultiPermutation::class_representative(n, mu)
                .expect("class representative of a boxed shape");
            (size, trace(v, &rep))
        })
        .collect();
    let order: u128 = (0..n.arity())
        .map(|i| (1..=n.entry(i) as u128).product::<u128>())
        .product();
    let mut mults = BTreeMap::new();
    for lambda in multipartitions_of(n) {
        let mut acc = field.zero();
        for (mu, (size, tr)) in classes.iter().zip(&class_data) {
            let chi: i64 = lambda
                .factors()
                .iter()
                .zip(mu.factors())
                .zip(&tables)
                .map(|((l, m), t)| {
                    t.value(
                        t.index_of(l).expect("indexed partition"),
                        t.index_of(m).expect("indexed partition"),
                    )
                })
                .product();
            let weight = field.mul(&field.from_i64(*size as i64), &field.from_i64(chi));
            acc = field.add(&acc, &field.mul(&weight, tr));
        }
        let scaled = field
            .div(&acc, &field.from_i64(order as i64))
            .expect("group order is nonzero in characteristic zero");
        let c = field.as_usize(&scaled).ok_or_else(|| {
            FimError::Internal(format!(
                "multiplicity of {lambda} at {n} is {}, not a natural number",
                field.format(&scaled)
            ))
        })?;
        if c > 0 {
            mults.insert(lambda, c);
        }
    }
    let table = MultiplicityTable {
        shape: n.clone(),
        mults,
    };
    if table.weighted_total(&tables) != v.dim(n) as u128 {
        return Err(FimError::Internal(format!(
            "decomposition at {n} does not add up to dimension {}",
            v.dim(n)
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Partition;
    use crate::module::{basic_relative_projective, free_module, GroupRep};

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn mp(factors: &[&[usize]]) -> MultiPartition {
        MultiPartition::new(factors.iter().map(|f| pt(f)).collect())
    }

    #[test]
    fn the_point_permutation_module_splits_in_two() {
        let v = free_module(FieldSpec::Rational, sh(&[1]), sh(&[4])).unwrap();
        for n in 2..=4usize {
            let table = decompose(&v, &sh(&[n])).unwrap();
            let mut expect = BTreeMap::new();
            expect.insert(mp(&[&[n]]), 1);
            expect.insert(mp(&[&[n - 1, 1]]), 1);
            assert_eq!(table.mults, expect, "n = {n}");
        }
    }

    #[test]
    fn the_full_point_module_is_trivial_everywhere() {
        let v = free_module(FieldSpec::Rational, sh(&[0, 0]), sh(&[3, 3])).unwrap();
        for (n, _) in v.dims_table().entries() {
            let table = decompose(&v, &n).unwrap();
            let mut expect = BTreeMap::new();
            let triv = MultiPartition::new(vec![
                if n.entry(0) > 0 { pt(&[n.entry(0)]) } else { Partition::empty() },
                if n.entry(1) > 0 { pt(&[n.entry(1)]) } else { Partition::empty() },
            ]);
            expect.insert(triv, 1);
            assert_eq!(table.mults, expect, "at {n}");
        }
    }

    #[test]
    fn a_sign_seeded_induced_module_lands_in_hooked_components() {
        // inducing the alternating line from two points: the value at n
        // splits into the two-column irreducibles
        let field = FieldSpec::Rational;
        let v = basic_relative_projective(field, &GroupRep::sign(field, sh(&[2])), &sh(&[4]))
            .unwrap();
        let table = decompose(&v, &sh(&[3])).unwrap();
        let mut expect = BTreeMap::new();
        expect.insert(mp(&[&[2, 1]]), 1);
        expect.insert(mp(&[&[1, 1, 1]]), 1);
        assert_eq!(table.mults, expect);
    }

    #[test]
    fn multiplicities_add_over_factors_of_a_product_shape() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[2, 2])).unwrap();
        let table = decompose(&v, &sh(&[2, 2])).unwrap();
        // each factor contributes trivial + standard, multiplied out
        let mut expect = BTreeMap::new();
        expect.insert(mp(&[&[2], &[2]]), 1);
        expect.insert(mp(&[&[2], &[1, 1]]), 1);
        expect.insert(mp(&[&[1, 1], &[2]]), 1);
        expect.insert(mp(&[&[1, 1], &[1, 1]]), 1);
        assert_eq!(table.mults, expect);
    }

    #[test]
    fn prime_fields_are_refused() {
        let v = free_module(FieldSpec::Prime(5), sh(&[1]), sh(&[3])).unwrap();
        assert!(matches!(
            decompose(&v, &sh(&[2])),
            Err(FimError::NeedsCharZero(_))
        ));
    }
}
