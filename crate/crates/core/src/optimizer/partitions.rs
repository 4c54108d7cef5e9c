use crate::ensembles::Partition;
use crate::error::{invalid, Result};

/// Largest set size accepted for exhaustive enumeration (B₁₃ ≈ 2.8·10⁷).
pub const MAX_ENUMERATION_N: usize = 13;

/// Iterator over restricted growth strings `a` of length `n`:
/// `a[0] = 0` and `a[i] ≤ 1 + max(a[..i])`. Each string labels one set
/// partition.
#[derive(Debug, Clone)]
pub struct RgsIter {
    labels: Vec<usize>,
    // prefix maxima: maxes[i] = max(labels[..=i])
    maxes: Vec<usize>,
    done: bool,
    fresh: bool,
}

impl RgsIter {
    pub fn new(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            maxes: vec![0; n],
            done: n == 0,
            fresh: true,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            if self.labels[i] <= self.maxes[i - 1] {
                self.labels[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return true;
            }
        }
        false
    }

    /// Advances and returns the next string without allocating.
    pub fn next_labels(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(&self.labels)
    }
}

impl Iterator for RgsIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_labels().map(<[usize]>::to_vec)
    }
}

/// Stream of every set partition of `{1, …, n}`, each exactly once.
pub struct PartitionIter {
    rgs: RgsIter,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.rgs
            .next_labels()
            .map(|labels| Partition::from_labels(labels).expect("restricted growth strings are valid"))
    }
}

pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    if n == 0 {
        return invalid("cannot enumerate partitions of an empty set");
    }
    if n > MAX_ENUMERATION_N {
        return invalid(format!(
            "exhaustive enumeration limited to n <= {MAX_ENUMERATION_N}, got {n}"
        ));
    }
    Ok(PartitionIter { rgs: RgsIter::new(n) })
}

/// Bell number `B_n` by the Bell triangle.
pub fn bell_number(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_partitions(1).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(3).unwrap().count(), 5);
        assert_eq!(enumerate_partitions(4).unwrap().count(), 15);
    }

    #[test]
    fn counts_match_bell_numbers_and_are_unique() {
        for n in 1..=8 {
            let all: HashSet<Partition> = enumerate_partitions(n).unwrap().collect();
            assert_eq!(all.len() as u64, bell_number(n), "n = {n}");
        }
    }

    #[test]
    fn bell_sequence() {
        let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, &b) in expected.iter().enumerate() {
            assert_eq!(bell_number(n), b);
        }
        assert_eq!(bell_number(13), 27_644_437);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(14).is_err());
    }
}
