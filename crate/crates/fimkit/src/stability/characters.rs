use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::combinat::{class_size, partitions_of, Partition};
use crate::error::{FimError, Result};

/// Ordinary character table of the symmetric group on `k` points. Rows and
/// columns are both indexed by `partitions_of(k)` order: rows by the
/// irreducible's partition, columns by the class's cycle type.
pub struct CharacterTable {
    pub k: usize,
    pub partitions: Vec<Partition>,
    pub class_sizes: Vec<u128>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn value(&self, lambda: usize, mu: usize) -> i64 {
        self.values[lambda][mu]
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.partitions.iter().position(|p| p == lambda)
    }

    /// Dimension of the irreducible, read off the identity column.
    pub fn dimension(&self, lambda: usize) -> i64 {
        let one = self.partitions.len() - 1; // (1^k) is enumerated last
        self.values[lambda][one]
    }
}

/// Character value by border-strip recursion on bead positions: the parts
/// of `lambda` plus a staircase become bead positions; removing a strip of
/// length `r` moves one bead down by `r`, with sign given by the number of
/// beads jumped over.
fn mn_value(
    lambda: &Partition,
    mu_parts: &[usize],
    memo: &mut HashMap<(Partition, Vec<usize>), i64>,
) -> i64 {
    if mu_parts.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), mu_parts.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = mu_parts[0];
    let rest = &mu_parts[1..];
    let rows = lambda.parts().len().max(1);
    let beads: Vec<usize> = (0..rows)
        .map(|i| lambda.parts().get(i).copied().unwrap_or(0) + (rows - 1 - i))
        .collect();
    let mut total = 0i64;
    for (i, &b) in beads.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if beads.contains(&target) {
            continue;
        }
        let jumped = beads
            .iter()
            .filter(|&&other| other < b && other > target)
            .count();
        let mut moved = beads.clone();
        moved[i] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let stripped_parts: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(j, &bead)| bead - (rows - 1 - j))
            .filter(|&p| p > 0)
            .collect();
        let stripped = Partition::new(stripped_parts).expect("bead positions stay decreasing");
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * mn_value(&stripped, rest, memo);
    }
    memo.insert(key, total);
    total
}

pub fn irreducible_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return Err(FimError::Parse(format!(
            "character argument sizes differ: |{lambda}| = {}, |{mu}| = {}",
            lambda.weight(),
            mu.weight()
        )));
    }
    Ok(mn_value(lambda, mu.parts(), &mut HashMap::new()))
}

fn build_table(k: usize) -> CharacterTable {
    let partitions = partitions_of(k);
    let class_sizes: Vec<u128> = partitions.iter().map(class_size).collect();
    let mut memo = HashMap::new();
    let values = partitions
        .iter()
        .map(|lambda| {
            partitions
                .iter()
                .map(|mu| mn_value(lambda, mu.parts(), &mut memo))
                .collect()
        })
        .collect();
    CharacterTable {
        k,
        partitions,
        class_sizes,
        values,
    }
}

/// Shared, memoized table per group size; tables are immutable once built.
pub fn character_table(k: usize) -> Arc<CharacterTable> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("character cache lock");
    guard
        .entry(k)
        .or_insert_with(|| Arc::new(build_table(k)))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::hook_dimension;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn the_one_row_character_is_constant_one() {
        for k in 0..=6 {
            let top = pt(&(k > 0).then_some(vec![k]).unwrap_or_default());
            for mu in partitions_of(k) {
                assert_eq!(irreducible_character(&top, &mu).unwrap(), 1);
            }
        }
    }

    #[test]
    fn the_one_column_character_is_the_sign() {
        for k in 1..=6 {
            let col = pt(&vec![1; k]);
            for mu in partitions_of(k) {
                let expect = if (k - mu.parts().len()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(irreducible_character(&col, &mu).unwrap(), expect, "{mu}");
            }
        }
    }

    #[test]
    fn standard_character_of_three_points() {
        // the two-dimensional irreducible of the three-point group
        assert_eq!(
            irreducible_character(&pt(&[2, 1]), &pt(&[1, 1, 1])).unwrap(),
            2
        );
        assert_eq!(irreducible_character(&pt(&[2, 1]), &pt(&[2, 1])).unwrap(), 0);
        assert_eq!(irreducible_character(&pt(&[2, 1]), &pt(&[3])).unwrap(), -1);
    }

    #[test]
    fn rows_are_orthonormal_under_the_class_pairing() {
        for k in 0..=6usize {
            let table = character_table(k);
            let order: i128 = (1..=k as i128).product();
            let count = table.partitions.len();
            for a in 0..count {
                for b in 0..count {
                    let pairing: i128 = (0..count)
                        .map(|c| {
                            table.class_sizes[c] as i128
                                * table.value(a, c) as i128
                                * table.value(b, c) as i128
                        })
                        .sum();
                    let expect = if a == b { order } else { 0 };
                    assert_eq!(pairing, expect, "k={k} rows {a},{b}");
                }
            }
        }
    }

    #[test]
    fn identity_column_matches_the_hook_count() {
        for k in 0..=6usize {
            let table = character_table(k);
            for (i, lambda) in table.partitions.iter().enumerate() {
                assert_eq!(table.dimension(i) as u128, hook_dimension(lambda), "{lambda}");
            }
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        assert!(irreducible_character(&pt(&[2]), &pt(&[3])).is_err());
    }
}
