use super::lattice::{GradedDims, LatticeMap};
use super::truncated::TruncatedModule;
use crate::combinat::Shape;
use crate::linalg::{QuotientStructure, SparseReducer, SparseVec, TrackedReducer};

/// Per-object row spans inside an ambient truncated module. Produced by the
/// closure engines below, whose outputs are always invariant under the
/// module structure maps (a submodule, objectwise).
#[derive(Clone, Debug)]
pub struct SpanTable {
    spans: LatticeMap<SparseReducer>,
}

impl SpanTable {
    pub fn rank(&self, n: &Shape) -> usize {
        if self.spans.lattice().contains(n) {
            self.spans.get(n).rank()
        } else {
            0
        }
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::new(LatticeMap::build(self.spans.lattice(), |n| {
            self.spans.get(n).rank()
        }))
    }

    pub fn reducer(&self, n: &Shape) -> &SparseReducer {
        self.spans.get(n)
    }

    pub fn contains(&self, n: &Shape, v: &SparseVec) -> bool {
        self.spans.get(n).contains(v)
    }

    /// Canonical reduced basis rows of the span at an object.
    pub fn basis_rows(&self, n: &Shape) -> Vec<SparseVec> {
        self.spans
            .get(n)
            .rref_rows()
            .into_iter()
            .map(|(_, row)| row)
            .collect()
    }

    /// Quotient of the ambient space at `n` by the span there.
    pub fn quotient_at(&self, n: &Shape) -> QuotientStructure {
        self.spans.get(n).quotient()
    }

    /// A tracked reducer loaded with the canonical basis rows in order, for
    /// expressing ambient vectors in span coordinates (tag = basis index).
    pub fn coordinates_at(&self, n: &Shape) -> TrackedReducer {
        let red = self.spans.get(n);
        let mut tracked = TrackedReducer::new(red.field(), red.dim());
        for row in self.basis_rows(n) {
            tracked.insert(&row);
        }
        tracked
    }

    /// Whether every structure map of `v` carries the span into the span:
    /// the defining property of a submodule, checked row by row.
    pub fn is_submodule_of(&self, v: &TruncatedModule) -> bool {
        let m = v.arity();
        for (n, red) in self.spans.iter() {
            for (_, row) in red.rows() {
                for i in 0..m {
                    for j in 1..n.entry(i) {
                        if !red.contains(&v.trans_mat(&n, i, j).apply(row)) {
                            return false;
                        }
                    }
                    if let Some(x) = v.incl_mat(&n, i) {
                        if !self.spans.get(&n.plus_unit(i)).contains(&x.apply(row)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Inserts each pending row's orbit under the object's group action until
/// the span stops growing.
fn close_under_group(
    v: &TruncatedModule,
    n: &Shape,
    red: &mut SparseReducer,
    mut pending: Vec<SparseVec>,
) {
    let m = v.arity();
    while let Some(row) = pending.pop() {
        for i in 0..m {
            for j in 1..n.entry(i) {
                let image = v.trans_mat(n, i, j).apply(&row);
                if red.insert(&image) {
                    pending.push(image);
                }
            }
        }
    }
}

fn insert_queueing(red: &mut SparseReducer, pending: &mut Vec<SparseVec>, row: SparseVec) {
    if red.insert(&row) {
        pending.push(row);
    }
}

/// The span of everything reachable from strictly below: at each object,
/// the group closure of the images of the full spaces one step down. The
/// quotient by this table is the degree-zero homology of `v`.
pub fn ideal_span(v: &TruncatedModule) -> SpanTable {
    let spans = LatticeMap::build(v.lattice(), |n| {
        let mut red = SparseReducer::new(v.field(), v.dim(n));
        let mut pending = Vec::new();
        for i in 0..v.arity() {
            if let Some(low) = n.minus_unit(i) {
                let x = v.incl_mat(&low, i).expect("step stays in the box");
                for j in 0..x.cols {
                    insert_queueing(&mut red, &mut pending, x.column(j).clone());
                }
            }
        }
        close_under_group(v, n, &mut red, pending);
        red
    });
    SpanTable { spans }
}

/// The smallest submodule span containing the seed vectors, together with
/// its generation profile: at each object, how much rank the seeds there
/// add beyond what arrives from below (the degree-zero homology of the
/// generated submodule).
pub fn submodule_span(
    v: &TruncatedModule,
    seeds: &LatticeMap<Vec<SparseVec>>,
) -> (SpanTable, GradedDims) {
    let lattice = v.lattice().clone();
    let mut done: Vec<SparseReducer> = Vec::with_capacity(lattice.len());
    let mut profile: Vec<usize> = Vec::with_capacity(lattice.len());
    for n in lattice.iter() {
        let mut red = SparseReducer::new(v.field(), v.dim(&n));
        let mut pending = Vec::new();
        for i in 0..v.arity() {
            if let Some(low) = n.minus_unit(i) {
                let x = v.incl_mat(&low, i).expect("step stays in the box");
                for (_, row) in done[lattice.index(&low)].rows() {
                    insert_queueing(&mut red, &mut pending, x.apply(row));
                }
            }
        }
        close_under_group(v, &n, &mut red, pending);
        let arriving = red.rank();
        let mut fresh = Vec::new();
        for seed in seeds.get(&n) {
            insert_queueing(&mut red, &mut fresh, seed.clone());
        }
        close_under_group(v, &n, &mut red, fresh);
        profile.push(red.rank() - arriving);
        done.push(red);
    }
    (
        SpanTable {
            spans: LatticeMap::from_vec(&lattice, done),
        },
        GradedDims::new(LatticeMap::from_vec(&lattice, profile)),
    )
}

/// An empty seed table over the box of `v`.
pub fn no_seeds(v: &TruncatedModule) -> LatticeMap<Vec<SparseVec>> {
    LatticeMap::filled(v.lattice(), Vec::new())
}

/// Span table from per-object spanning sets that are already carried into
/// each other by the structure maps — images of natural transformations,
/// kernels of intertwiners. No closure is run; the submodule property is
/// asserted in debug builds.
pub fn span_from_closed(
    v: &TruncatedModule,
    gens: &LatticeMap<Vec<SparseVec>>,
) -> SpanTable {
    let spans = LatticeMap::build(v.lattice(), |n| {
        let mut red = SparseReducer::new(v.field(), v.dim(n));
        for g in gens.get(n) {
            red.insert(g);
        }
        red
    });
    let table = SpanTable { spans };
    debug_assert!(
        table.is_submodule_of(v),
        "generators must already span a submodule"
    );
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Shape;
    use crate::linalg::{FieldSpec, SparseVec};
    use crate::module::build::free_module;

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    #[test]
    fn ideal_span_of_free_module_misses_generator_degree() {
        // in a rank-one free module everything above the generator degree
        // is reachable from below, and nothing at the generator degree is
        let v = free_module(FieldSpec::Rational, sh(&[1, 1]), sh(&[3, 3])).unwrap();
        let table = ideal_span(&v);
        assert!(table.is_submodule_of(&v));
        for (n, d) in v.dims_table().entries() {
            let expect = if n == sh(&[1, 1]) { d - 1 } else { d };
            assert_eq!(table.rank(&n), expect, "at {n}");
            // at the generator degree the quotient is one-dimensional
        }
        assert_eq!(table.quotient_at(&sh(&[1, 1])).dim(), 1);
    }

    #[test]
    fn submodule_span_of_generator_is_everything() {
        let v = free_module(FieldSpec::Rational, sh(&[1]), sh(&[4])).unwrap();
        let mut seeds = no_seeds(&v);
        seeds.set(&sh(&[1]), vec![SparseVec::unit(0, &FieldSpec::Rational)]);
        let (table, profile) = submodule_span(&v, &seeds);
        assert_eq!(table.dims(), v.dims_table());
        // generated in degree 1 only
        for (n, d) in profile.entries() {
            assert_eq!(d, usize::from(n == sh(&[1])), "profile at {n}");
        }
    }

    #[test]
    fn symmetric_seed_floods_higher_degrees_over_q() {
        // seed = sum of the two basis injections of the rank-one free
        // module on a degree-1 generator, placed at degree 2. Its orbit is
        // one line at degree 2, but the degree-3 translates e_a + e_b over
        // all pairs already span everything (their pairwise combinations
        // recover 2e_a), so the submodule is full from degree 3 on.
        let f = FieldSpec::Rational;
        let v = free_module(f, sh(&[1]), sh(&[5])).unwrap();
        let seed = SparseVec::from_entries(&f, vec![(0, f.one()), (1, f.one())]);
        let mut seeds = no_seeds(&v);
        seeds.set(&sh(&[2]), vec![seed]);
        let (table, profile) = submodule_span(&v, &seeds);
        for n in 0..=5usize {
            let expect = match n {
                0 | 1 => 0,
                2 => 1,
                _ => n,
            };
            assert_eq!(table.rank(&sh(&[n])), expect, "rank at ({n})");
        }
        assert!(table.is_submodule_of(&v));
        assert_eq!(profile.support(), vec![sh(&[2])]);
    }

    #[test]
    fn symmetric_seed_stays_a_line_over_f2() {
        // over F_2 the pairwise sums e_a + e_b only ever span the
        // even-coordinate-sum subspace, and the symmetric line is genuinely
        // invariant: dims stay n - 1 from degree 3 on
        let f = FieldSpec::prime(2).unwrap();
        let v = free_module(f, sh(&[1]), sh(&[5])).unwrap();
        let seed = SparseVec::from_entries(&f, vec![(0, f.one()), (1, f.one())]);
        let mut seeds = no_seeds(&v);
        seeds.set(&sh(&[2]), vec![seed]);
        let (table, _) = submodule_span(&v, &seeds);
        for n in 2..=5usize {
            assert_eq!(table.rank(&sh(&[n])), n - 1, "rank at ({n})");
        }
        assert!(table.is_submodule_of(&v));
    }

    #[test]
    fn empty_seeds_span_nothing() {
        let v = free_module(FieldSpec::Rational, sh(&[1, 0]), sh(&[2, 2])).unwrap();
        let (table, profile) = submodule_span(&v, &no_seeds(&v));
        assert!(table.dims().is_zero());
        assert!(profile.is_zero());
    }

    #[test]
    fn coordinates_express_span_members() {
        let f = FieldSpec::Rational;
        let v = free_module(f, sh(&[1]), sh(&[3])).unwrap();
        let table = ideal_span(&v);
        let n = sh(&[2]);
        let tracked = table.coordinates_at(&n);
        let rows = table.basis_rows(&n);
        // any combination of basis rows is expressed exactly
        let probe = rows[0].add_scaled(&f, &f.from_i64(3), &rows[1]);
        let combo = tracked.express(&probe).expect("in span");
        let mut rebuilt = SparseVec::empty();
        for (t, c) in combo.entries() {
            rebuilt = rebuilt.add_scaled(&f, c, &rows[*t]);
        }
        assert_eq!(rebuilt, probe);
    }
}
