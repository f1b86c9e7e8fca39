use crate::error::{FimError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// An m-tuple of non-negative integers, the objects of the index category.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Shape(pub Vec<usize>);

impl Shape {
    pub fn new(parts: Vec<usize>) -> Self {
        Shape(parts)
    }

    pub fn zero(m: usize) -> Self {
        Shape(vec![0; m])
    }

    /// Number of factors m.
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn entry(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Componentwise comparison; the partial order on objects.
    pub fn leq(&self, other: &Shape) -> bool {
        self.arity() == other.arity() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lt(&self, other: &Shape) -> bool {
        self.leq(other) && self != other
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &Shape) -> Shape {
        Shape(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Adds 1 in factor `i`.
    pub fn plus_unit(&self, i: usize) -> Shape {
        let mut v = self.0.clone();
        v[i] += 1;
        Shape(v)
    }

    /// Subtracts 1 in factor `i`, if possible.
    pub fn minus_unit(&self, i: usize) -> Option<Shape> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Shape(v))
    }

    /// Componentwise difference, requiring `other.leq(self)`.
    pub fn minus(&self, other: &Shape) -> Option<Shape> {
        if !other.leq(self) {
            return None;
        }
        Some(Shape(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn check_arity(&self, m: usize) -> Result<()> {
        if self.arity() != m {
            return Err(FimError::ArityMismatch {
                expected: m,
                got: self.arity(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Shape {
    type Err = FimError;

    /// Parses `(n_1,...,n_m)`. A one-factor shape may omit the trailing comma.
    fn from_str(s: &str) -> Result<Shape> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| FimError::Parse(format!("shape must look like (a,b,...): {s:?}")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Err(FimError::Parse("shape needs at least one factor".into()));
        }
        let mut parts = Vec::new();
        for piece in inner.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            parts.push(
                piece
                    .parse::<usize>()
                    .map_err(|e| FimError::Parse(format!("bad shape entry {piece:?}: {e}")))?,
            );
        }
        if parts.is_empty() {
            return Err(FimError::Parse("shape needs at least one factor".into()));
        }
        Ok(Shape(parts))
    }
}
