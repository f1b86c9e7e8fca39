use super::injection::Injection;
use super::partition::{MultiPartition, Partition};
use super::shape::Shape;
use crate::error::Result;
use std::fmt;

/// A tuple of permutations, one of `[n_i]` per factor: the automorphisms of
/// a shape. Stored as 1-based image lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPermutation {
    shape: Shape,
    images: Vec<Vec<usize>>,
}

impl MultiPermutation {
    pub fn from_images(shape: Shape, images: Vec<Vec<usize>>) -> Result<Self> {
        let inj = Injection::new(shape.clone(), shape.clone(), images)?;
        Ok(MultiPermutation {
            shape,
            images: (0..inj.arity()).map(|i| inj.factor_images(i).to_vec()).collect(),
        })
    }

    pub fn identity(shape: &Shape) -> Self {
        MultiPermutation {
            shape: shape.clone(),
            images: shape.0.iter().map(|&n| (1..=n).collect()).collect(),
        }
    }

    /// The adjacent transposition `(j, j+1)` in factor `i` (1-based `j`).
    pub fn transposition(shape: &Shape, i: usize, j: usize) -> Self {
        assert!(j >= 1 && j + 1 <= shape.entry(i), "transposition index in range");
        let mut p = Self::identity(shape);
        p.images[i].swap(j - 1, j);
        p
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn factor_images(&self, i: usize) -> &[usize] {
        &self.images[i]
    }

    pub fn apply(&self, i: usize, x: usize) -> usize {
        self.images[i][x - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .all(|imgs| imgs.iter().enumerate().all(|(k, &x)| x == k + 1))
    }

    pub fn as_injection(&self) -> Injection {
        Injection::new(self.shape.clone(), self.shape.clone(), self.images.clone())
            .expect("a permutation is a valid injection")
    }

    /// Composition `self . inner` (apply `inner` first).
    pub fn compose(&self, inner: &MultiPermutation) -> MultiPermutation {
        assert_eq!(self.shape, inner.shape, "composable permutations");
        let images = self
            .images
            .iter()
            .zip(&inner.images)
            .map(|(outer, inner)| inner.iter().map(|&x| outer[x - 1]).collect())
            .collect();
        MultiPermutation {
            shape: self.shape.clone(),
            images,
        }
    }

    pub fn invert(&self) -> MultiPermutation {
        let images = self
            .images
            .iter()
            .map(|imgs| {
                let mut inv = vec![0; imgs.len()];
                for (k, &x) in imgs.iter().enumerate() {
                    inv[x - 1] = k + 1;
                }
                inv
            })
            .collect();
        MultiPermutation {
            shape: self.shape.clone(),
            images,
        }
    }

    /// Adjacent-transposition word for the factor-`i` permutation: indices
    /// `j` such that applying `(j, j+1)` left to right reproduces the
    /// permutation. Length is at most `n_i (n_i - 1) / 2`.
    pub fn factor_word(&self, i: usize) -> Vec<usize> {
        let mut a = self.images[i].clone();
        let n = a.len();
        let mut word = Vec::new();
        // Each list swap right-composes with an adjacent transposition, so
        // sorting transforms the permutation into the identity and the
        // recorded swaps, applied first to last, rebuild it.
        loop {
            let mut swapped = false;
            for j in 0..n.saturating_sub(1) {
                if a[j] > a[j + 1] {
                    a.swap(j, j + 1);
                    word.push(j + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word
    }

    /// Cycle type of each factor permutation, parts sorted descending.
    pub fn cycle_type(&self) -> MultiPartition {
        let parts = self
            .images
            .iter()
            .map(|imgs| {
                let n = imgs.len();
                let mut seen = vec![false; n];
                let mut lens = Vec::new();
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    let mut len = 0;
                    let mut x = start;
                    while !seen[x] {
                        seen[x] = true;
                        len += 1;
                        x = imgs[x] - 1;
                    }
                    lens.push(len);
                }
                lens.sort_unstable_by(|a, b| b.cmp(a));
                Partition::new(lens).expect("cycle lengths are positive and sorted")
            })
            .collect();
        MultiPartition::new(parts)
    }

    /// Canonical representative of the conjugacy class with the given cycle
    /// types: in each factor, cycles on consecutive integers, longest first.
    pub fn class_representative(shape: &Shape, class: &MultiPartition) -> Result<Self> {
        class.check_weights(shape)?;
        let images = shape
            .0
            .iter()
            .zip(class.factors())
            .map(|(&_n, lambda)| {
                let mut imgs = Vec::new();
                let mut base = 1usize;
                for &len in lambda.parts() {
                    for k in 0..len {
                        let next = if k + 1 == len { base } else { base + k + 1 };
                        imgs.push(next);
                    }
                    base += len;
                }
                imgs
            })
            .collect();
        Ok(MultiPermutation {
            shape: shape.clone(),
            images,
        })
    }
}

impl fmt::Debug for MultiPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// All permutations of a shape (product of symmetric groups), in
/// lexicographic order on concatenated image lists.
pub fn enumerate_permutations(shape: &Shape) -> Vec<MultiPermutation> {
    super::injection::enumerate_injections(shape, shape)
        .into_iter()
        .map(|f| {
            MultiPermutation::from_images(
                shape.clone(),
                (0..f.arity()).map(|i| f.factor_images(i).to_vec()).collect(),
            )
            .expect("endomorphism of a shape is a permutation")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(v: &[usize]) -> Shape {
        Shape::new(v.to_vec())
    }

    fn rebuild_from_word(shape: &Shape, i: usize, word: &[usize]) -> MultiPermutation {
        let mut p = MultiPermutation::identity(shape);
        for &j in word {
            p = MultiPermutation::transposition(shape, i, j).compose(&p);
        }
        p
    }

    #[test]
    fn word_round_trip_exhaustive_s4() {
        let shape = sh(&[4]);
        for p in enumerate_permutations(&shape) {
            let word = p.factor_word(0);
            assert!(word.len() <= 6);
            assert_eq!(rebuild_from_word(&shape, 0, &word), p);
        }
    }

    #[test]
    fn word_of_identity_is_empty() {
        let p = MultiPermutation::identity(&sh(&[3, 2]));
        assert!(p.factor_word(0).is_empty());
        assert!(p.factor_word(1).is_empty());
    }

    #[test]
    fn word_of_simple_swap() {
        let p = MultiPermutation::transposition(&sh(&[2]), 0, 1);
        assert_eq!(p.factor_word(0), vec![1]);
    }

    #[test]
    fn inverse_and_compose() {
        let shape = sh(&[3, 2]);
        for p in enumerate_permutations(&shape) {
            let q = p.invert();
            assert!(p.compose(&q).is_identity());
            assert!(q.compose(&p).is_identity());
        }
    }

    #[test]
    fn cycle_type_and_representative() {
        let shape = sh(&[5]);
        let class = MultiPartition::new(vec![Partition::new(vec![3, 2]).unwrap()]);
        let rep = MultiPermutation::class_representative(&shape, &class).unwrap();
        assert_eq!(rep.factor_images(0), &[2, 3, 1, 5, 4]);
        assert_eq!(rep.cycle_type(), class);
    }

    #[test]
    fn every_permutation_matches_its_class_representative_type() {
        let shape = sh(&[4]);
        for p in enumerate_permutations(&shape) {
            let class = p.cycle_type();
            let rep = MultiPermutation::class_representative(&shape, &class).unwrap();
            assert_eq!(rep.cycle_type(), class);
        }
    }
}
