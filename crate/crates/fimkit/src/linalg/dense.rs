use super::scalar::{FieldSpec, Scalar};
use super::sparse::SparseVec;
use std::fmt;

/// A dense, exactly represented matrix. Zero-dimensional shapes are
/// first-class: a map to or from the zero space is a matrix with zero rows
/// or columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon {
    pub mat: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        Self::from_rows(
            field,
            rows.iter()
                .map(|row| row.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn column_sparse(&self, j: usize) -> SparseVec {
        SparseVec::from_entries(
            &self.field,
            (0..self.rows)
                .filter(|&i| !self.field.is_zero(self.get(i, j)))
                .map(|i| (i, self.get(i, j).clone()))
                .collect(),
        )
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "product shapes");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if self.field.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if self.field.is_zero(b) {
                        continue;
                    }
                    let v = self.field.add(out.get(i, j), &self.field.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack row counts");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form by exact Gauss-Jordan elimination with
    /// leading-entry pivoting; entries stay reduced at every step, so the
    /// result is canonical for the row space.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let f = m.field;
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let a = m.get(row, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(row, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = f.inv(m.get(row, col)).expect("pivot entry nonzero");
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || f.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = f.sub(m.get(r, j), &f.mul(&factor, m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { mat: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns spanning the null space, one per free column, derived from
    /// the reduced echelon form; canonical for the input matrix.
    pub fn kernel_basis(&self) -> Matrix {
        let ech = self.rref();
        let pivots = &ech.pivots;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (r, &pc) in pivots.iter().enumerate() {
                let v = ech.mat.get(r, fc);
                if !self.field.is_zero(v) {
                    out.set(pc, k, self.field.neg(v));
                }
            }
        }
        out
    }

    /// Solves `self * X = rhs` for all columns simultaneously; `None` when
    /// any column is inconsistent. Free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shapes");
        let aug = self.hstack(rhs);
        let ech = aug.rref();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, ech.mat.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Pivot columns of the elimination, in enumeration order: a canonical
    /// basis of the column space.
    pub fn image_pivot_columns(&self) -> Vec<usize> {
        self.rref().pivots
    }

    /// Submatrix keeping the given columns, in order.
    pub fn select_columns(&self, keep: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, keep.len());
        for (k, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.field.format(self.get(i, j)))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The structure of a quotient `k^d / span(generators)`: a surjection with
/// the span as kernel. The quotient basis is the set of non-pivot ambient
/// coordinates, in enumeration order, which makes all downstream bases
/// deterministic.
#[derive(Clone, Debug)]
pub struct QuotientStructure {
    field: FieldSpec,
    ambient: usize,
    free_cols: Vec<usize>,
    pivot_cols: Vec<usize>,
    /// Per pivot row: the negated free-column part, in quotient coordinates.
    pivot_images: Vec<SparseVec>,
    /// Per ambient coordinate: Some(free position) if a quotient basis
    /// coordinate, None if a pivot coordinate.
    kind: Vec<Option<usize>>,
}

impl QuotientStructure {
    /// Builds the quotient of `k^d` by the span of the columns of `gens`.
    pub fn from_generators(gens: &Matrix) -> QuotientStructure {
        let d = gens.rows();
        let field = gens.field();
        let ech = gens.transpose().rref();
        let rows = ech
            .pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| {
                (
                    p,
                    SparseVec::from_entries(
                        &field,
                        (0..d)
                            .filter(|&j| !field.is_zero(ech.mat.get(r, j)))
                            .map(|j| (j, ech.mat.get(r, j).clone()))
                            .collect(),
                    ),
                )
            })
            .collect::<Vec<_>>();
        Self::from_sparse_rref(field, d, &rows)
    }

    /// Core constructor from a fully reduced sparse row basis of the killed
    /// span: `rows` pairs each pivot index with its monic row, sorted by
    /// pivot, with zeros at all other pivot positions.
    pub fn from_sparse_rref(
        field: FieldSpec,
        ambient: usize,
        rows: &[(usize, SparseVec)],
    ) -> QuotientStructure {
        let pivot_cols: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();
        debug_assert!(pivot_cols.windows(2).all(|w| w[0] < w[1]), "pivots sorted");
        let mut kind = vec![None; ambient];
        let free_cols: Vec<usize> = (0..ambient).filter(|c| !pivot_cols.contains(c)).collect();
        for (pos, &c) in free_cols.iter().enumerate() {
            kind[c] = Some(pos);
        }
        let pivot_images = rows
            .iter()
            .map(|(_, row)| {
                SparseVec::from_entries(
                    &field,
                    row.entries()
                        .iter()
                        .filter_map(|(j, c)| kind[*j].map(|pos| (pos, field.neg(c))))
                        .collect(),
                )
            })
            .collect();
        QuotientStructure {
            field,
            ambient,
            free_cols,
            pivot_cols,
            pivot_images,
            kind,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn rank_killed(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Ambient coordinates whose unit vectors form the chosen section of
    /// the projection.
    pub fn section_cols(&self) -> &[usize] {
        &self.free_cols
    }

    /// Image of an ambient sparse vector in quotient coordinates.
    pub fn project_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::empty();
        for (i, c) in v.entries() {
            match self.kind[*i] {
                Some(pos) => {
                    acc = acc.add_scaled(
                        &self.field,
                        c,
                        &SparseVec::unit(pos, &self.field),
                    );
                }
                None => {
                    let row = self
                        .pivot_cols
                        .iter()
                        .position(|&p| p == *i)
                        .expect("pivot coordinate");
                    acc = acc.add_scaled(&self.field, c, &self.pivot_images[row]);
                }
            }
        }
        acc
    }

    /// The projection as a dense matrix of size `dim x ambient`.
    pub fn projection_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.dim(), self.ambient);
        for i in 0..self.ambient {
            let col = self.project_vec(&SparseVec::unit(i, &self.field));
            for (r, c) in col.entries() {
                out.set(*r, i, c.clone());
            }
        }
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}
