use super::dense::QuotientStructure;
use super::scalar::FieldSpec;
use super::sparse::{SpMat, SparseVec};
use std::collections::BTreeMap;

/// An incremental row-space builder over sparse vectors. Rows are kept
/// monic and keyed by leading index, so membership tests and insertions
/// cost one elimination sweep instead of a full re-elimination.
///
/// The pivot index set depends only on the span of everything inserted,
/// not on insertion order, which keeps every quotient basis built on top
/// of this deterministic.
#[derive(Clone, Debug)]
pub struct SparseReducer {
    field: FieldSpec,
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseReducer {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        SparseReducer {
            field,
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Eliminates `v` against the stored rows; the remainder is zero
    /// exactly when `v` lies in the current span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        while let Some((lead, coeff)) = cur.leading() {
            let Some(row) = self.rows.get(&lead) else {
                break;
            };
            let minus = self.field.neg(coeff);
            cur = cur.add_scaled(&self.field, &minus, row);
        }
        cur
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let rem = self.reduce(v);
        match rem.leading() {
            None => false,
            Some((lead, _)) => {
                debug_assert!(lead < self.dim, "vector exceeds reducer dimension");
                self.rows.insert(lead, rem.monic(&self.field));
                true
            }
        }
    }

    pub fn insert_all<'a>(&mut self, vs: impl IntoIterator<Item = &'a SparseVec>) -> bool {
        let mut grew = false;
        for v in vs {
            grew |= self.insert(v);
        }
        grew
    }

    /// The stored monic rows keyed by pivot. Each is reduced against the
    /// rows already present at its insertion only; use
    /// [`rref_rows`](Self::rref_rows) for the canonical fully reduced basis.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> + '_ {
        self.rows.iter().map(|(&p, r)| (p, r))
    }

    /// The canonical reduced row basis of the span: monic rows sorted by
    /// pivot, each with zeros at every other pivot position.
    pub fn rref_rows(&self) -> Vec<(usize, SparseVec)> {
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, stored) in self.rows.iter().rev() {
            let mut row = stored.clone();
            // Later-pivot rows are already fully reduced, so one sweep over
            // the offending positions clears them for good.
            let targets: Vec<(usize, _)> = row
                .entries()
                .iter()
                .filter(|(q, _)| *q > p && reduced.contains_key(q))
                .map(|(q, c)| (*q, c.clone()))
                .collect();
            for (q, c) in targets {
                let minus = self.field.neg(&c);
                row = row.add_scaled(&self.field, &minus, &reduced[&q]);
            }
            reduced.insert(p, row);
        }
        reduced.into_iter().collect()
    }

    /// The quotient of the ambient space by the accumulated span.
    pub fn quotient(&self) -> QuotientStructure {
        QuotientStructure::from_sparse_rref(self.field, self.dim, &self.rref_rows())
    }
}

/// Outcome of a tracked insertion: either the vector grew the span, or it
/// was dependent and the combination over previously inserted tags is
/// returned (`v = Σ combo_t · input_t`).
pub enum TrackedInsert {
    Added,
    Dependent(SparseVec),
}

/// A reducer that remembers how each stored row was built from the inserted
/// vectors, so dependencies and span coordinates come out as explicit
/// combinations. This is the sparse workhorse for kernels of sparse maps
/// and for expressing vectors in a submodule basis.
#[derive(Clone, Debug)]
pub struct TrackedReducer {
    field: FieldSpec,
    dim: usize,
    /// pivot -> (monic row, combination over input tags with
    /// row = Σ combo_t · input_t).
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    next_tag: usize,
}

impl TrackedReducer {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        TrackedReducer {
            field,
            dim,
            rows: BTreeMap::new(),
            next_tag: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`, returning the remainder and `h` with
    /// `remainder = v - Σ h_t · input_t`.
    fn reduce_tracked(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut h = SparseVec::empty();
        while let Some((lead, coeff)) = cur.leading() {
            let Some((row, combo)) = self.rows.get(&lead) else {
                break;
            };
            let c = coeff.clone();
            let minus = self.field.neg(&c);
            cur = cur.add_scaled(&self.field, &minus, row);
            h = h.add_scaled(&self.field, &c, combo);
        }
        (cur, h)
    }

    /// Inserts `v` under the next tag (tags count every insertion, in
    /// order). Dependent vectors are not stored.
    pub fn insert(&mut self, v: &SparseVec) -> TrackedInsert {
        let tag = self.next_tag;
        self.next_tag += 1;
        let (rem, h) = self.reduce_tracked(v);
        match rem.leading() {
            None => TrackedInsert::Dependent(h),
            Some((lead, coeff)) => {
                debug_assert!(lead < self.dim, "vector exceeds reducer dimension");
                let inv = self.field.inv(coeff).expect("leading entry nonzero");
                let m_one = self.field.neg(&self.field.one());
                // row = v - Σ h·input  =>  row = Σ (unit(tag) - h)·input
                let combo = SparseVec::unit(tag, &self.field)
                    .add_scaled(&self.field, &m_one, &h)
                    .scale(&self.field, &inv);
                self.rows.insert(lead, (rem.monic(&self.field), combo));
                TrackedInsert::Added
            }
        }
    }

    /// If `v` lies in the span of the stored rows, the combination over
    /// input tags with `v = Σ c_t · input_t`.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, h) = self.reduce_tracked(v);
        rem.is_empty().then_some(h)
    }
}

/// A basis of the null space of a sparse matrix, found by feeding columns
/// through a tracked reducer: each dependent column yields one kernel
/// vector with a 1 at its own index. Cost scales with fill-in, not with
/// the dense shape, which keeps block-structured module maps cheap.
pub fn sparse_kernel_basis(mat: &SpMat) -> Vec<SparseVec> {
    let field = mat.field();
    let mut red = TrackedReducer::new(field, mat.rows);
    let mut kernel = Vec::new();
    let m_one = field.neg(&field.one());
    for j in 0..mat.cols {
        match red.insert(mat.column(j)) {
            TrackedInsert::Added => {}
            TrackedInsert::Dependent(h) => {
                // col_j - Σ h_t · col_t = 0
                kernel.push(
                    SparseVec::unit(j, &field).add_scaled(&field, &m_one, &h),
                );
            }
        }
    }
    kernel
}
