use std::collections::{BTreeMap, HashMap};

use crate::combinat::{enumerate_monotone_injections, Injection, Shape};
use crate::error::{FimError, Result};
use crate::linalg::{FieldSpec, Scalar, SparseReducer, SparseVec, SpMat};
use crate::module::{GradedDims, LatticeMap, TruncatedModule};

/// Brute-force homology over the boxed category algebra, independent of the
/// resolution machinery: the relative bar complex over the vertexwise group
/// algebras, with one-sided strict chains. Each module of the complex is
/// spanned by towers of monotone strict injections (the free right basis of
/// the strict-morphism bimodule) with a module vector at the bottom; the
/// grade of a tower is its top object, so the complex splits objectwise.
///
/// Valid whenever the vertex group algebras are semisimple, i.e. over the
/// rationals, or mod p with p beyond every box edge.
pub fn bar_homology(v: &TruncatedModule, s_max: usize) -> Result<Vec<GradedDims>> {
    let field = v.field();
    if let FieldSpec::Prime(p) = field {
        let edge = (0..v.arity())
            .map(|i| v.bound().entry(i))
            .max()
            .unwrap_or(0);
        if (p as usize) <= edge {
            return Err(FimError::NeedsCharZero(format!(
                "{field}; a prime beyond the box edge {edge} would also do"
            )));
        }
    }
    let lattice = v.lattice().clone();
    let mut tables: Vec<LatticeMap<usize>> = (0..=s_max)
        .map(|_| LatticeMap::filled(&lattice, 0))
        .collect();
    for n in lattice.iter() {
        let dims = homology_at(v, &n, s_max);
        for (s, d) in dims.into_iter().enumerate() {
            tables[s].set(&n, d);
        }
    }
    Ok(tables.into_iter().map(GradedDims::new).collect())
}

/// Towers of `s` composable monotone strict injections ending at `top`,
/// listed bottom-up.
fn towers(v: &TruncatedModule, s: usize, top: &Shape) -> Vec<Vec<Injection>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in v.lattice().clone().iter() {
        if !a.leq(top) || &a == top {
            continue;
        }
        for g in enumerate_monotone_injections(&a, top) {
            for mut lower in towers(v, s - 1, &a) {
                lower.push(g.clone());
                out.push(lower);
            }
        }
    }
    out
}

fn bottom<'a>(tower: &'a [Injection], top: &'a Shape) -> &'a Shape {
    tower.first().map(|g| g.domain()).unwrap_or(top)
}

struct Level {
    tower_list: Vec<Vec<Injection>>,
    offsets: Vec<usize>,
    ids: HashMap<Vec<Injection>, usize>,
    dim: usize,
}

fn level(v: &TruncatedModule, s: usize, top: &Shape) -> Level {
    let tower_list = towers(v, s, top);
    let mut offsets = Vec::with_capacity(tower_list.len());
    let mut ids = HashMap::with_capacity(tower_list.len());
    let mut dim = 0;
    for (i, t) in tower_list.iter().enumerate() {
        offsets.push(dim);
        dim += v.dim(bottom(t, top));
        ids.insert(t.clone(), i);
    }
    Level {
        tower_list,
        offsets,
        ids,
        dim,
    }
}

fn sign(field: FieldSpec, i: usize) -> Scalar {
    if i % 2 == 0 {
        field.one()
    } else {
        field.neg(&field.one())
    }
}

fn add_term(field: FieldSpec, acc: &mut BTreeMap<usize, Scalar>, pos: usize, val: Scalar) {
    let entry = acc.entry(pos).or_insert_with(|| field.zero());
    *entry = field.add(entry, &val);
}

/// The bar differential from the `s`-tower level to the one below: the
/// first face (absorption into the algebra slot) dies against the strict
/// ideal, the middle faces compose adjacent towers, and the last face acts
/// on the carried vector.
fn differential(v: &TruncatedModule, lower: &Level, upper: &Level, top: &Shape) -> SpMat {
    let field = v.field();
    let mut eval_cache: HashMap<Injection, SpMat> = HashMap::new();
    let mut cols = Vec::with_capacity(upper.dim);
    for tower in &upper.tower_list {
        let s = tower.len();
        let b = bottom(tower, top).clone();
        for k in 0..v.dim(&b) {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for i in 1..s {
                let p = s - i - 1;
                let composed = tower[p + 1]
                    .compose(&tower[p])
                    .expect("adjacent towers are composable");
                let mut shorter = Vec::with_capacity(s - 1);
                shorter.extend_from_slice(&tower[..p]);
                shorter.push(composed);
                shorter.extend_from_slice(&tower[p + 2..]);
                let id = lower.ids[&shorter];
                add_term(field, &mut acc, lower.offsets[id] + k, sign(field, i));
            }
            let ev = eval_cache
                .entry(tower[0].clone())
                .or_insert_with(|| v.evaluate(&tower[0]).expect("tower stays in the box"));
            let shorter = tower[1..].to_vec();
            let id = lower.ids[&shorter];
            let off = lower.offsets[id];
            let sgn = sign(field, s);
            for (r, c) in ev.column(k).entries() {
                add_term(field, &mut acc, off + r, field.mul(&sgn, c));
            }
            let entries: Vec<(usize, Scalar)> = acc
                .into_iter()
                .filter(|(_, c)| !field.is_zero(c))
                .collect();
            cols.push(SparseVec::from_entries(&field, entries));
        }
    }
    SpMat::from_columns(field, lower.dim, cols)
}

fn rank(m: &SpMat) -> usize {
    let mut red = SparseReducer::new(m.field(), m.rows);
    for c in 0..m.cols {
        red.insert(m.column(c));
    }
    red.rank()
}

fn homology_at(v: &TruncatedModule, n: &Shape, s_max: usize) -> Vec<usize> {
    let levels: Vec<Level> = (0..=s_max + 1).map(|s| level(v, s, n)).collect();
    let ranks: Vec<usize> = (1..=s_max + 1)
        .map(|s| rank(&differential(v, &levels[s - 1], &levels[s], n)))
        .collect();
    (0..=s_max)
        .map(|s| {
            let incoming = ranks[s];
            let outgoing = if s == 0 { 0 } else { ranks[s - 1] };
            levels[s].dim - incoming - outgoing
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology;
    use crate::module::{free_module, from_presentation, Generator, Presentation, Relation, RelationTerm};

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    fn cutoff_module(field: FieldSpec, cut: usize, bound: usize) -> TruncatedModule {
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

    fn agree(v: &TruncatedModule, s_max: usize) {
        let bar = bar_homology(v, s_max).unwrap();
        let res = homology(v, s_max).unwrap();
        for s in 0..=s_max {
            assert_eq!(bar[s], res.h[s], "level {s} disagrees");
        }
    }

    #[test]
    fn bar_and_resolution_agree_on_free_modules() {
        let v = free_module(FieldSpec::Rational, sh(&[1]), sh(&[3])).unwrap();
        agree(&v, 3);
    }

    #[test]
    fn bar_and_resolution_agree_on_a_cut_off_point_module() {
        let v = cutoff_module(FieldSpec::Rational, 1, 4);
        agree(&v, 3);
        let v = cutoff_module(FieldSpec::Rational, 2, 4);
        agree(&v, 3);
    }

    #[test]
    fn bar_and_resolution_agree_in_two_directions() {
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
        let v = from_presentation(&p, &sh(&[2, 2])).unwrap();
        agree(&v, 2);
    }

    #[test]
    fn small_primes_are_rejected_large_ones_accepted() {
        let v = cutoff_module(FieldSpec::Prime(2), 1, 3);
        assert!(matches!(
            bar_homology(&v, 1),
            Err(FimError::NeedsCharZero(_))
        ));
        let v = cutoff_module(FieldSpec::Prime(5), 1, 3);
        agree(&v, 2);
    }
}
