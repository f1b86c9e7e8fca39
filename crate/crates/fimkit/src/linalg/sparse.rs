use super::dense::Matrix;
use super::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

/// A sparse vector: entries sorted by index, no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn empty() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize, field: &FieldSpec) -> Self {
        SparseVec {
            entries: vec![(index, field.one())],
        }
    }

    pub fn from_entries(field: &FieldSpec, mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.retain(|(_, c)| !field.is_zero(c));
        entries.sort_by_key(|(i, _)| *i);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0), "duplicate index");
        SparseVec { entries }
    }

    pub fn from_dense(field: &FieldSpec, dense: &[Scalar]) -> Self {
        SparseVec {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, c)| !field.is_zero(c))
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, field: &FieldSpec, len: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, field: &FieldSpec, c: &Scalar) -> SparseVec {
        if field.is_zero(c) {
            return SparseVec::empty();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, x)| (*i, field.mul(x, c)))
                .collect(),
        }
    }

    /// `self + c * other`, merged in index order.
    pub fn add_scaled(&self, field: &FieldSpec, c: &Scalar, other: &SparseVec) -> SparseVec {
        if field.is_zero(c) {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.entries.len() || b < other.entries.len() {
            let pick_a = match (self.entries.get(a), other.entries.get(b)) {
                (Some((ia, _)), Some((ib, _))) => {
                    if ia == ib {
                        let v = field.add(&self.entries[a].1, &field.mul(c, &other.entries[b].1));
                        if !field.is_zero(&v) {
                            out.push((*ia, v));
                        }
                        a += 1;
                        b += 1;
                        continue;
                    }
                    ia < ib
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_a {
                out.push(self.entries[a].clone());
                a += 1;
            } else {
                let (ib, xb) = &other.entries[b];
                out.push((*ib, field.mul(c, xb)));
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    /// Divides through so the leading coefficient becomes 1.
    pub fn monic(&self, field: &FieldSpec) -> SparseVec {
        match self.leading() {
            None => SparseVec::empty(),
            Some((_, lead)) => {
                let inv = field.inv(lead).expect("leading entry is nonzero");
                self.scale(field, &inv)
            }
        }
    }
}

/// A column-major sparse matrix. Module actions are stored in this form:
/// permutation blocks and inclusion maps have one or few entries per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpMat {
    pub rows: usize,
    pub cols: usize,
    field: FieldSpec,
    columns: Vec<SparseVec>,
}

impl SpMat {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SpMat {
            rows,
            cols,
            field,
            columns: vec![SparseVec::empty(); cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        SpMat {
            rows: n,
            cols: n,
            field,
            columns: (0..n).map(|i| SparseVec::unit(i, &field)).collect(),
        }
    }

    /// The matrix sending basis column `c` to basis row `map[c]` with
    /// coefficient 1; the shape of free-module generator actions.
    pub fn from_select(field: FieldSpec, rows: usize, map: &[usize]) -> Self {
        SpMat {
            rows,
            cols: map.len(),
            field,
            columns: map.iter().map(|&r| SparseVec::unit(r, &field)).collect(),
        }
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: Vec<SparseVec>) -> Self {
        SpMat {
            rows,
            cols: columns.len(),
            field,
            columns,
        }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let field = m.field();
        SpMat {
            rows: m.rows(),
            cols: m.cols(),
            field,
            columns: (0..m.cols())
                .map(|j| {
                    SparseVec::from_entries(
                        &field,
                        (0..m.rows())
                            .filter(|&i| !field.is_zero(m.get(i, j)))
                            .map(|i| (i, m.get(i, j).clone()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.entries() {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.columns.iter().enumerate().all(|(j, col)| {
                col.entries().len() == 1
                    && col.entries()[0].0 == j
                    && col.entries()[0].1 == self.field.one()
            })
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.entries().len()).sum()
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SpMat) -> SpMat {
        assert_eq!(self.cols, rhs.rows, "sparse product shapes");
        let columns = rhs
            .columns
            .iter()
            .map(|col| self.apply(col))
            .collect();
        SpMat {
            rows: self.rows,
            cols: rhs.cols,
            field: self.field,
            columns,
        }
    }

    /// Block-diagonal sum: `self` in the top-left, `other` in the
    /// bottom-right.
    pub fn block_diag(&self, other: &SpMat) -> SpMat {
        assert_eq!(self.field, other.field, "block sum fields");
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().map(|col| {
            SparseVec::from_entries(
                &self.field,
                col.entries()
                    .iter()
                    .map(|(i, c)| (i + self.rows, c.clone()))
                    .collect(),
            )
        }));
        SpMat {
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            field: self.field,
            columns,
        }
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, c) in v.entries() {
            for (i, a) in self.columns[*j].entries() {
                let term = self.field.mul(a, c);
                match acc.entry(*i) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(term);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = self.field.add(e.get(), &term);
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        SparseVec::from_entries(&self.field, acc.into_iter().collect())
    }

    pub fn add(&self, rhs: &SpMat) -> SpMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let one = self.field.one();
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| a.add_scaled(&self.field, &one, b))
            .collect();
        SpMat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            columns,
        }
    }

    pub fn neg(&self) -> SpMat {
        let columns = self
            .columns
            .iter()
            .map(|c| {
                SparseVec::from_entries(
                    &self.field,
                    c.entries()
                        .iter()
                        .map(|(i, x)| (*i, self.field.neg(x)))
                        .collect(),
                )
            })
            .collect();
        SpMat {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            columns,
        }
    }
}
