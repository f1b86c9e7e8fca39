use super::lattice::{BoxLattice, GradedDims, LatticeMap};
use super::span::{submodule_span, SpanTable};
use super::truncated::TruncatedModule;
use crate::combinat::{
    enumerate_injections, enumerate_permutations, Injection, MultiPermutation, Shape,
};
use crate::error::{FimError, Result};
use crate::linalg::{FieldSpec, Matrix, QuotientStructure, Scalar, SpMat, SparseVec};
use std::collections::{BTreeMap, HashMap};

/// A free module on an ordered list of generator shapes, with basis lookup.
/// The basis at each object is the concatenation, generator by generator,
/// of the injection enumeration order — the convention every deterministic
/// basis downstream is anchored to.
pub(crate) struct FreeAmbient {
    pub(crate) module: TruncatedModule,
    /// Per lattice index, per generator: column offset and position of each
    /// basis injection.
    index: Vec<Vec<(usize, HashMap<Injection, usize>)>>,
}

impl FreeAmbient {
    /// Ambient column of the basis element `(gen, f)` at `f.codomain() = n`.
    pub(crate) fn basis_index(&self, n: &Shape, gen: usize, f: &Injection) -> Option<usize> {
        let lattice = self.module.lattice();
        if !lattice.contains(n) {
            return None;
        }
        let (offset, lookup) = &self.index[lattice.index(n)][gen];
        lookup.get(f).map(|&pos| offset + pos)
    }
}

pub(crate) fn build_free(
    field: FieldSpec,
    gens: &[Shape],
    bound: &Shape,
) -> Result<FreeAmbient> {
    for g in gens {
        g.check_arity(bound.arity())?;
        if !g.leq(bound) {
            return Err(FimError::BoxTooSmall(format!(
                "generator shape {g} does not fit in the box {bound}"
            )));
        }
    }
    let lattice = BoxLattice::new(bound.clone());
    let m = lattice.arity();

    let mut bases: Vec<Vec<Vec<Injection>>> = Vec::with_capacity(lattice.len());
    let mut index = Vec::with_capacity(lattice.len());
    let mut dim_at = Vec::with_capacity(lattice.len());
    for n in lattice.iter() {
        let mut per_gen = Vec::with_capacity(gens.len());
        let mut maps = Vec::with_capacity(gens.len());
        let mut offset = 0;
        for g in gens {
            let basis = enumerate_injections(g, &n);
            let lookup: HashMap<Injection, usize> =
                basis.iter().cloned().zip(0..).collect();
            maps.push((offset, lookup));
            offset += basis.len();
            per_gen.push(basis);
        }
        bases.push(per_gen);
        index.push(maps);
        dim_at.push(offset);
    }

    // post-composition by `act` maps the basis at `src` into the basis at
    // `dst`, generator block by generator block
    let post = |src: usize, dst: usize, act: &Injection| -> SpMat {
        let mut map = Vec::with_capacity(dim_at[src]);
        for (g, basis) in bases[src].iter().enumerate() {
            let (offset, lookup) = &index[dst][g];
            for h in basis {
                let composed = act.compose(h).expect("shapes match by construction");
                map.push(offset + lookup[&composed]);
            }
        }
        SpMat::from_select(field, dim_at[dst], &map)
    };

    let mut trans_vec = Vec::with_capacity(lattice.len());
    let mut incl_vec = Vec::with_capacity(lattice.len());
    for (src, n) in lattice.iter().enumerate() {
        let trans_n: Vec<Vec<SpMat>> = (0..m)
            .map(|i| {
                (1..n.entry(i))
                    .map(|j| {
                        let act = MultiPermutation::transposition(&n, i, j).as_injection();
                        post(src, src, &act)
                    })
                    .collect()
            })
            .collect();
        let incl_n: Vec<Option<SpMat>> = (0..m)
            .map(|i| {
                let up = n.plus_unit(i);
                lattice
                    .contains(&up)
                    .then(|| post(src, lattice.index(&up), &Injection::step(&n, i)))
            })
            .collect();
        trans_vec.push(trans_n);
        incl_vec.push(incl_n);
    }

    let module = TruncatedModule::from_parts(
        field,
        LatticeMap::from_vec(&lattice, dim_at),
        LatticeMap::from_vec(&lattice, trans_vec),
        LatticeMap::from_vec(&lattice, incl_vec),
    )?;
    Ok(FreeAmbient { module, index })
}

/// The free module on one generator of the given shape: dimension at `t` is
/// the number of injections `shape -> t`, actions by post-composition.
pub fn free_module(field: FieldSpec, shape: Shape, bound: Shape) -> Result<TruncatedModule> {
    Ok(build_free(field, &[shape], &bound)?.module)
}

/// Direct sum on the componentwise-minimum box: dimensions add, actions are
/// block-diagonal.
pub fn direct_sum(v: &TruncatedModule, w: &TruncatedModule) -> Result<TruncatedModule> {
    if v.field() != w.field() {
        return Err(FimError::FieldMismatch(format!(
            "{} vs {}",
            v.field(),
            w.field()
        )));
    }
    if v.arity() != w.arity() {
        return Err(FimError::ArityMismatch {
            expected: v.arity(),
            got: w.arity(),
        });
    }
    let bound = Shape::new(
        v.bound()
            .0
            .iter()
            .zip(&w.bound().0)
            .map(|(&a, &b)| a.min(b))
            .collect(),
    );
    let v = v.restrict_to_box(&bound)?;
    let w = w.restrict_to_box(&bound)?;
    let lattice = BoxLattice::new(bound);
    let m = lattice.arity();
    let dims = LatticeMap::build(&lattice, |n| v.dim(n) + w.dim(n));
    let trans = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| {
                (1..n.entry(i))
                    .map(|j| v.trans_mat(n, i, j).block_diag(w.trans_mat(n, i, j)))
                    .collect()
            })
            .collect()
    });
    let incl = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| match (v.incl_mat(n, i), w.incl_mat(n, i)) {
                (Some(a), Some(b)) => Some(a.block_diag(b)),
                _ => None,
            })
            .collect()
    });
    TruncatedModule::from_parts(v.field(), dims, trans, incl)
}

/// A representation of the product of symmetric groups of a shape, given by
/// matrices for the adjacent-transposition generators. Validated against
/// the defining relations on construction.
#[derive(Clone, Debug)]
pub struct GroupRep {
    field: FieldSpec,
    shape: Shape,
    dim: usize,
    /// `gens[i][j-1]` acts as the swap of `j, j+1` in factor `i`.
    gens: Vec<Vec<Matrix>>,
}

impl GroupRep {
    pub fn new(field: FieldSpec, shape: Shape, dim: usize, gens: Vec<Vec<Matrix>>) -> Result<Self> {
        let rep = GroupRep {
            field,
            shape,
            dim,
            gens,
        };
        rep.check()?;
        Ok(rep)
    }

    fn check(&self) -> Result<()> {
        let m = self.shape.arity();
        if self.gens.len() != m {
            return Err(FimError::BadGroupAction(format!(
                "{} generator families for {} factors",
                self.gens.len(),
                m
            )));
        }
        for (i, mats) in self.gens.iter().enumerate() {
            let expect = self.shape.entry(i).saturating_sub(1);
            if mats.len() != expect {
                return Err(FimError::BadGroupAction(format!(
                    "factor {} has {} generators, expected {expect}",
                    i + 1,
                    mats.len()
                )));
            }
            for (j, t) in mats.iter().enumerate() {
                if t.rows() != self.dim || t.cols() != self.dim || t.field() != self.field {
                    return Err(FimError::BadGroupAction(format!(
                        "generator {} of factor {} is not a {}x{} matrix over the \
                         representation field",
                        j + 1,
                        i + 1,
                        self.dim,
                        self.dim
                    )));
                }
                if t.mul(t) != Matrix::identity(self.field, self.dim) {
                    return Err(FimError::BadGroupAction(format!(
                        "generator {} of factor {} is not an involution",
                        j + 1,
                        i + 1
                    )));
                }
            }
            for j in 0..mats.len() {
                for k in j + 1..mats.len() {
                    let (a, b) = (&mats[j], &mats[k]);
                    let ok = if k == j + 1 {
                        a.mul(&b.mul(a)) == b.mul(&a.mul(b))
                    } else {
                        a.mul(b) == b.mul(a)
                    };
                    if !ok {
                        return Err(FimError::BadGroupAction(format!(
                            "generators {},{} of factor {} violate their braid/commutation \
                             relation",
                            j + 1,
                            k + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        for i1 in 0..m {
            for i2 in i1 + 1..m {
                for a in &self.gens[i1] {
                    for b in &self.gens[i2] {
                        if a.mul(b) != b.mul(a) {
                            return Err(FimError::BadGroupAction(format!(
                                "generators of factors {},{} do not commute",
                                i1 + 1,
                                i2 + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The one-dimensional representation where every swap acts by +1.
    pub fn trivial(field: FieldSpec, shape: Shape) -> Self {
        let gens = shape
            .0
            .iter()
            .map(|&n| vec![Matrix::identity(field, 1); n.saturating_sub(1)])
            .collect();
        GroupRep {
            field,
            shape,
            dim: 1,
            gens,
        }
    }

    /// The one-dimensional representation where every swap acts by -1
    /// (the product of the factor sign characters).
    pub fn sign(field: FieldSpec, shape: Shape) -> Self {
        let minus = Matrix::from_i64_rows(field, &[&[-1]]);
        let gens = shape
            .0
            .iter()
            .map(|&n| vec![minus.clone(); n.saturating_sub(1)])
            .collect();
        GroupRep {
            field,
            shape,
            dim: 1,
            gens,
        }
    }

    /// The regular representation: basis the group elements in enumeration
    /// order, swaps acting by left multiplication.
    pub fn regular(field: FieldSpec, shape: Shape) -> Self {
        let elements = enumerate_permutations(&shape);
        let lookup: HashMap<Vec<Vec<usize>>, usize> = elements
            .iter()
            .map(|p| {
                (0..shape.arity())
                    .map(|i| p.factor_images(i).to_vec())
                    .collect::<Vec<_>>()
            })
            .zip(0..)
            .collect();
        let dim = elements.len();
        let gens = (0..shape.arity())
            .map(|i| {
                (1..shape.entry(i))
                    .map(|j| {
                        let s = MultiPermutation::transposition(&shape, i, j);
                        let mut mat = Matrix::zeros(field, dim, dim);
                        for (col, p) in elements.iter().enumerate() {
                            let image = s.compose(p);
                            let key: Vec<Vec<usize>> = (0..shape.arity())
                                .map(|f| image.factor_images(f).to_vec())
                                .collect();
                            mat.set(lookup[&key], col, field.one());
                        }
                        mat
                    })
                    .collect()
            })
            .collect();
        GroupRep {
            field,
            shape,
            dim,
            gens,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The matrix of the swap of `j, j+1` (1-based, `j < shape_i`) in factor `i`.
    pub fn generator(&self, i: usize, j: usize) -> &Matrix {
        &self.gens[i][j - 1]
    }

    /// The matrix of an arbitrary group element, assembled from factor words.
    pub fn action(&self, p: &MultiPermutation) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.dim);
        for i in 0..self.shape.arity() {
            for j in p.factor_word(i) {
                acc = self.generator(i, j).mul(&acc);
            }
        }
        acc
    }
}

/// A labeled free generator of a presentation.
#[derive(Clone, Debug)]
pub struct Generator {
    pub shape: Shape,
    pub label: String,
}

/// One summand of a relation vector: `coeff` times the image of generator
/// `gen` under `injection`.
#[derive(Clone, Debug)]
pub struct RelationTerm {
    pub gen: usize,
    pub injection: Injection,
    pub coeff: Scalar,
}

/// A relation: a formal sum of generator translates at one shape.
#[derive(Clone, Debug)]
pub struct Relation {
    pub shape: Shape,
    pub terms: Vec<RelationTerm>,
}

/// A finite presentation: free generators and the relations to quotient by.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub field: FieldSpec,
    pub arity: usize,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn validate(&self) -> Result<()> {
        for (g, gen) in self.generators.iter().enumerate() {
            if gen.shape.arity() != self.arity {
                return Err(FimError::BadPresentation(format!(
                    "generator {} ({}): shape {} has {} factors, presentation declares {}",
                    g,
                    gen.label,
                    gen.shape,
                    gen.shape.arity(),
                    self.arity
                )));
            }
        }
        for (r, rel) in self.relations.iter().enumerate() {
            if rel.shape.arity() != self.arity {
                return Err(FimError::BadPresentation(format!(
                    "relation {r}: shape {} has {} factors, presentation declares {}",
                    rel.shape,
                    rel.shape.arity(),
                    self.arity
                )));
            }
            for (t, term) in rel.terms.iter().enumerate() {
                let Some(gen) = self.generators.get(term.gen) else {
                    return Err(FimError::BadPresentation(format!(
                        "relation {r}, term {t}: unknown generator index {}",
                        term.gen
                    )));
                };
                if term.injection.domain() != &gen.shape {
                    return Err(FimError::BadPresentation(format!(
                        "relation {r}, term {t}: injection domain {} does not match \
                         generator shape {}",
                        term.injection.domain(),
                        gen.shape
                    )));
                }
                if term.injection.codomain() != &rel.shape {
                    return Err(FimError::BadPresentation(format!(
                        "relation {r}, term {t}: injection codomain {} does not match \
                         relation shape {}",
                        term.injection.codomain(),
                        rel.shape
                    )));
                }
                if !self.field.compatible(&term.coeff) {
                    return Err(FimError::BadPresentation(format!(
                        "relation {r}, term {t}: coefficient kind does not match the \
                         field {}",
                        self.field
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A quotient module together with its per-object charts mapping ambient
/// coordinates onto the quotient basis.
pub struct QuotientModule {
    pub module: TruncatedModule,
    pub charts: LatticeMap<QuotientStructure>,
}

/// Quotient of `v` by a span table that is closed under the structure maps.
/// Basis at each object: the ambient coordinates away from the span's
/// pivots, in enumeration order.
pub fn quotient_by_span(v: &TruncatedModule, span: &SpanTable) -> QuotientModule {
    debug_assert!(span.is_submodule_of(v), "span must be a submodule");
    let lattice = v.lattice().clone();
    let m = lattice.arity();
    let field = v.field();
    let charts = LatticeMap::build(&lattice, |n| span.quotient_at(n));
    let induced = |src: &QuotientStructure, dst: &QuotientStructure, map: &SpMat| -> SpMat {
        SpMat::from_columns(
            field,
            dst.dim(),
            src.section_cols()
                .iter()
                .map(|&c| dst.project_vec(map.column(c)))
                .collect(),
        )
    };
    let dims = LatticeMap::build(&lattice, |n| charts.get(n).dim());
    let trans = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| {
                (1..n.entry(i))
                    .map(|j| induced(charts.get(n), charts.get(n), v.trans_mat(n, i, j)))
                    .collect()
            })
            .collect()
    });
    let incl = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| {
                v.incl_mat(n, i)
                    .map(|x| induced(charts.get(n), charts.get(&n.plus_unit(i)), x))
            })
            .collect()
    });
    let module = TruncatedModule::from_parts(field, dims, trans, incl)
        .expect("projected tables stay consistent");
    QuotientModule { module, charts }
}

/// Builds the presented module and keeps the quotient charts.
pub fn presented_quotient(p: &Presentation, bound: &Shape) -> Result<QuotientModule> {
    p.validate()?;
    if bound.arity() != p.arity {
        return Err(FimError::ArityMismatch {
            expected: p.arity,
            got: bound.arity(),
        });
    }
    let shapes: Vec<Shape> = p.generators.iter().map(|g| g.shape.clone()).collect();
    let ambient = build_free(p.field, &shapes, bound)?;
    let mut seeds = LatticeMap::filled(ambient.module.lattice(), Vec::new());
    for rel in &p.relations {
        if !ambient.module.lattice().contains(&rel.shape) {
            // a relation above the box cannot constrain any boxed object
            continue;
        }
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for term in &rel.terms {
            let idx = ambient
                .basis_index(&rel.shape, term.gen, &term.injection)
                .expect("validated term");
            match acc.entry(idx) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(term.coeff.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = p.field.add(e.get(), &term.coeff);
                    e.insert(sum);
                }
            }
        }
        let vec = SparseVec::from_entries(
            &p.field,
            acc.into_iter()
                .filter(|(_, c)| !p.field.is_zero(c))
                .collect(),
        );
        if !vec.is_empty() {
            seeds.get_mut(&rel.shape).push(vec);
        }
    }
    let (span, _) = submodule_span(&ambient.module, &seeds);
    Ok(quotient_by_span(&ambient.module, &span))
}

/// The cokernel of the relation map: free module on the generators modulo
/// the submodule generated by the relation vectors.
pub fn from_presentation(p: &Presentation, bound: &Shape) -> Result<TruncatedModule> {
    Ok(presented_quotient(p, bound)?.module)
}

/// Realizes the induced module of a group representation along the orbit
/// embedding: the free module on `dim W` generators at the representation's
/// shape, modulo identifying each swap translate of a generator with the
/// swap's action on it. Dimension at `n` is `dim W · ∏ C(n_i, shape_i)`.
pub fn basic_relative_projective(
    field: FieldSpec,
    rep: &GroupRep,
    bound: &Shape,
) -> Result<TruncatedModule> {
    if rep.field() != field {
        return Err(FimError::FieldMismatch(format!(
            "representation over {}, module over {}",
            rep.field(),
            field
        )));
    }
    let shape = rep.shape().clone();
    let generators = (0..rep.dim())
        .map(|w| Generator {
            shape: shape.clone(),
            label: format!("w{w}"),
        })
        .collect();
    let mut relations = Vec::new();
    for i in 0..shape.arity() {
        for j in 1..shape.entry(i) {
            let swap = MultiPermutation::transposition(&shape, i, j).as_injection();
            let mat = rep.generator(i, j);
            for w in 0..rep.dim() {
                let mut terms = vec![RelationTerm {
                    gen: w,
                    injection: swap.clone(),
                    coeff: field.one(),
                }];
                for k in 0..rep.dim() {
                    let c = mat.get(k, w);
                    if !field.is_zero(c) {
                        terms.push(RelationTerm {
                            gen: k,
                            injection: Injection::identity(&shape),
                            coeff: field.neg(c),
                        });
                    }
                }
                relations.push(Relation {
                    shape: shape.clone(),
                    terms,
                });
            }
        }
    }
    let p = Presentation {
        field,
        arity: shape.arity(),
        generators,
        relations,
    };
    from_presentation(&p, bound)
}

/// A generated submodule with its embedding back into the ambient module
/// and the generation profile (where the seeds genuinely add rank).
pub struct SubmoduleResult {
    pub module: TruncatedModule,
    /// Per object, the matrix whose columns are the submodule basis vectors
    /// in ambient coordinates.
    pub embedding: LatticeMap<SpMat>,
    pub generation: GradedDims,
}

/// Realizes a span table closed under the structure maps as a module in its
/// own right, on the canonical reduced basis of each span, together with the
/// embedding back into `v` (columns = basis vectors in ambient coordinates).
pub fn realize_span(
    v: &TruncatedModule,
    span: &SpanTable,
) -> (TruncatedModule, LatticeMap<SpMat>) {
    let field = v.field();
    let lattice = v.lattice().clone();
    let m = lattice.arity();
    let basis = LatticeMap::build(&lattice, |n| span.basis_rows(n));
    let dims = LatticeMap::build(&lattice, |n| basis.get(n).len());
    let embedding = LatticeMap::build(&lattice, |n| {
        SpMat::from_columns(field, v.dim(n), basis.get(n).clone())
    });
    let coords = LatticeMap::build(&lattice, |n| span.coordinates_at(n));
    let restrict = |n: &Shape, target: &Shape, map: &SpMat| -> SpMat {
        let tracked = coords.get(target);
        SpMat::from_columns(
            field,
            *dims.get(target),
            basis
                .get(n)
                .iter()
                .map(|row| {
                    tracked
                        .express(&map.apply(row))
                        .expect("span is closed under the structure maps")
                })
                .collect(),
        )
    };
    let trans = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| {
                (1..n.entry(i))
                    .map(|j| restrict(n, n, v.trans_mat(n, i, j)))
                    .collect()
            })
            .collect()
    });
    let incl = LatticeMap::build(&lattice, |n| {
        (0..m)
            .map(|i| {
                v.incl_mat(n, i)
                    .map(|x| restrict(n, &n.plus_unit(i), x))
            })
            .collect()
    });
    let module = TruncatedModule::from_parts(field, dims, trans, incl)
        .expect("restricted tables stay consistent");
    (module, embedding)
}

/// The smallest boxed subfunctor of `v` containing the seed vectors,
/// realized on the canonical reduced basis of its objectwise spans.
pub fn submodule_generated(
    v: &TruncatedModule,
    seed_list: &[(Shape, SparseVec)],
) -> Result<SubmoduleResult> {
    let mut seeds = LatticeMap::filled(v.lattice(), Vec::new());
    for (n, vec) in seed_list {
        v.lattice().check_contains(n)?;
        if let Some(&(high, _)) = vec.entries().last() {
            if high >= v.dim(n) {
                return Err(FimError::DimMismatch(format!(
                    "seed at {n} uses coordinate {high}, space has dimension {}",
                    v.dim(n)
                )));
            }
        }
        seeds.get_mut(n).push(vec.clone());
    }
    let (span, generation) = submodule_span(v, &seeds);
    let (module, embedding) = realize_span(v, &span);
    Ok(SubmoduleResult {
        module,
        embedding,
        generation,
    })
}
