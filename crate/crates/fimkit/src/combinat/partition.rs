use super::shape::Shape;
use crate::error::{FimError, Result};
use std::fmt;

/// A partition: weakly decreasing positive parts. The empty partition is
/// the unique partition of 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(FimError::Parse("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(FimError::Parse("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn first_part(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    /// Padded partition `(t - |lambda|, lambda_1, lambda_2, ...)`; defined
    /// exactly when `t >= |lambda| + lambda_1`.
    pub fn padded(&self, t: usize) -> Result<Partition> {
        let needed = self.weight() + self.first_part();
        if t < needed {
            return Err(FimError::PaddingRange {
                weight: self.weight(),
                first: self.first_part(),
                needed,
                got: t,
            });
        }
        let head = t - self.weight();
        if head == 0 {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.push(head);
        parts.extend_from_slice(&self.0);
        Partition::new(parts)
    }

    /// Drops the first row; the tail indexes a padded family.
    pub fn tail(&self) -> Partition {
        Partition(self.0.iter().skip(1).copied().collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One partition per factor; indexes irreducibles of a product of
/// symmetric groups and conjugacy classes alike.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPartition(Vec<Partition>);

impl MultiPartition {
    pub fn new(factors: Vec<Partition>) -> Self {
        MultiPartition(factors)
    }

    pub fn factors(&self) -> &[Partition] {
        &self.0
    }

    pub fn check_weights(&self, shape: &Shape) -> Result<()> {
        if self.0.len() != shape.arity() {
            return Err(FimError::ArityMismatch {
                expected: shape.arity(),
                got: self.0.len(),
            });
        }
        for (lambda, &n) in self.0.iter().zip(&shape.0) {
            if lambda.weight() != n {
                return Err(FimError::Parse(format!(
                    "partition {lambda} does not have weight {n}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All partitions of `k`, first part descending, then recursively; so the
/// list starts `(k)` and ends `(1^k)`.
pub fn partitions_of(k: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        let top = remaining.min(max_part);
        for part in (1..=top).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k.max(1), &mut Vec::new(), &mut out);
    out
}

/// Size of the conjugacy class with cycle type `lambda` in the symmetric
/// group on `|lambda|` points: `k! / prod_j (j^{m_j} m_j!)`.
pub fn class_size(lambda: &Partition) -> u128 {
    let k = lambda.weight();
    let mut size: u128 = (1..=k as u128).product();
    let mut mult = std::collections::BTreeMap::new();
    for &p in lambda.parts() {
        *mult.entry(p).or_insert(0u32) += 1;
    }
    for (&j, &m) in &mult {
        for _ in 0..m {
            size /= j as u128;
        }
        for f in 1..=m as u128 {
            size /= f;
        }
    }
    size
}

/// Irreducible dimension by the hook length formula.
pub fn hook_dimension(lambda: &Partition) -> u128 {
    let k = lambda.weight();
    if k == 0 {
        return 1;
    }
    let rows = lambda.parts();
    let mut col_heights = vec![0usize; lambda.first_part()];
    for &r in rows {
        for c in col_heights.iter_mut().take(r) {
            *c += 1;
        }
    }
    let mut numer: u128 = (1..=k as u128).product();
    for (r, &len) in rows.iter().enumerate() {
        for c in 0..len {
            let hook = (len - c) + (col_heights[c] - r) - 1;
            numer /= hook as u128;
        }
    }
    numer
}
