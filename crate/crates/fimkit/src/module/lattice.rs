use crate::combinat::Shape;
use crate::error::{FimError, Result};

/// The finite down-set of objects `n <= bound`, indexed contiguously.
/// Iteration order is lexicographic with the first coordinate most
/// significant, which refines the componentwise order: every strictly
/// smaller shape comes earlier. All per-object module data lives in
/// `LatticeMap`s over this index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxLattice {
    bound: Shape,
    strides: Vec<usize>,
    len: usize,
}

impl BoxLattice {
    pub fn new(bound: Shape) -> Self {
        let m = bound.arity();
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (bound.entry(i + 1) + 1);
        }
        let len = if m == 0 {
            1
        } else {
            strides[0] * (bound.entry(0) + 1)
        };
        BoxLattice {
            bound,
            strides,
            len,
        }
    }

    pub fn bound(&self) -> &Shape {
        &self.bound
    }

    pub fn arity(&self) -> usize {
        self.bound.arity()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: &Shape) -> bool {
        n.arity() == self.bound.arity() && n.leq(&self.bound)
    }

    pub fn check_contains(&self, n: &Shape) -> Result<()> {
        if self.contains(n) {
            Ok(())
        } else {
            Err(FimError::OutsideBox {
                shape: n.to_string(),
                bound: self.bound.to_string(),
            })
        }
    }

    pub fn index(&self, n: &Shape) -> usize {
        debug_assert!(self.contains(n), "shape {n} outside box {}", self.bound);
        n.0.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c * s)
            .sum()
    }

    pub fn shape_at(&self, mut idx: usize) -> Shape {
        let parts = self
            .strides
            .iter()
            .map(|&s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect();
        Shape::new(parts)
    }

    /// All shapes of the box in index order (smaller shapes first).
    pub fn iter(&self) -> impl Iterator<Item = Shape> + '_ {
        (0..self.len).map(|i| self.shape_at(i))
    }
}

/// Per-object storage over a box lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap<T> {
    lattice: BoxLattice,
    data: Vec<T>,
}

impl<T> LatticeMap<T> {
    pub fn build(lattice: &BoxLattice, mut init: impl FnMut(&Shape) -> T) -> Self {
        let data = lattice.iter().map(|n| init(&n)).collect();
        LatticeMap {
            lattice: lattice.clone(),
            data,
        }
    }

    /// Wraps data already laid out in lattice index order. Useful when an
    /// entry's construction needs read access to earlier entries.
    pub fn from_vec(lattice: &BoxLattice, data: Vec<T>) -> Self {
        assert_eq!(data.len(), lattice.len(), "lattice data length");
        LatticeMap {
            lattice: lattice.clone(),
            data,
        }
    }

    pub fn lattice(&self) -> &BoxLattice {
        &self.lattice
    }

    pub fn get(&self, n: &Shape) -> &T {
        &self.data[self.lattice.index(n)]
    }

    pub fn get_mut(&mut self, n: &Shape) -> &mut T {
        let idx = self.lattice.index(n);
        &mut self.data[idx]
    }

    pub fn set(&mut self, n: &Shape, value: T) {
        let idx = self.lattice.index(n);
        self.data[idx] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Shape, &T)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(|(i, t)| (self.lattice.shape_at(i), t))
    }
}

impl<T: Clone> LatticeMap<T> {
    pub fn filled(lattice: &BoxLattice, value: T) -> Self {
        LatticeMap {
            lattice: lattice.clone(),
            data: vec![value; lattice.len()],
        }
    }
}

/// A shape-indexed dimension table with the box on which it is exact.
/// The result type of homology, torsion, and support computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims {
    dims: LatticeMap<usize>,
}

impl GradedDims {
    pub fn new(dims: LatticeMap<usize>) -> Self {
        GradedDims { dims }
    }

    pub fn zero(lattice: &BoxLattice) -> Self {
        GradedDims {
            dims: LatticeMap::filled(lattice, 0),
        }
    }

    pub fn bound(&self) -> &Shape {
        self.dims.lattice().bound()
    }

    pub fn dim(&self, n: &Shape) -> usize {
        if self.dims.lattice().contains(n) {
            *self.dims.get(n)
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|(_, &d)| d == 0)
    }

    pub fn support(&self) -> Vec<Shape> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().map(|(_, &d)| d).sum()
    }

    /// Top total degree of the support; `None` for the zero table.
    pub fn top_degree(&self) -> Option<usize> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(n, _)| n.total())
            .max()
    }

    /// Largest i-th coordinate over the support; `-1` when empty.
    pub fn max_coord(&self, i: usize) -> i64 {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(n, _)| n.entry(i) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Whether the support stays strictly away from the box boundary in
    /// every direction (boundary support makes module-level claims
    /// inconclusive outside the box).
    pub fn support_interior(&self) -> bool {
        let bound = self.bound().clone();
        self.dims.iter().all(|(n, &d)| {
            d == 0 || (0..bound.arity()).all(|i| n.entry(i) < bound.entry(i))
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = (Shape, usize)> + '_ {
        self.dims.iter().map(|(n, &d)| (n, d))
    }
}
