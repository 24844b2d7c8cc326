//! Set partitions of `{0, …, n-1}` via restricted growth strings.
//!
//! A restricted growth string `a` has `a[0] = 0` and
//! `a[i] ≤ 1 + max(a[..i])`; these are in bijection with set partitions,
//! block `b` holding every `i` with `a[i] = b`.

use alloc::vec;
use alloc::vec::Vec;

use crate::types::TypeSet;

/// Iterator over all set partitions of `n` elements in lexicographic order
/// of their restricted growth strings. `n = 0` yields one empty partition.
pub struct Partitions {
    rgs: Vec<usize>,
    done: bool,
}

impl Partitions {
    pub fn new(n: usize) -> Self {
        Partitions {
            rgs: vec![0; n],
            done: false,
        }
    }

    fn blocks(&self) -> Vec<TypeSet> {
        let count = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![TypeSet::EMPTY; count];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b].insert(i);
        }
        blocks
    }

    fn advance(&mut self) {
        let n = self.rgs.len();
        // rightmost position that can still grow
        for i in (1..n).rev() {
            let prefix_max = self.rgs[..i].iter().copied().max().unwrap_or(0);
            if self.rgs[i] <= prefix_max {
                self.rgs[i] += 1;
                for r in &mut self.rgs[i + 1..] {
                    *r = 0;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Vec<TypeSet>;

    fn next(&mut self) -> Option<Vec<TypeSet>> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        self.advance();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(Partitions::new(n).count(), b, "n = {n}");
        }
    }

    #[test]
    fn three_elements_in_order() {
        let all: Vec<Vec<u32>> = Partitions::new(3)
            .map(|p| p.iter().map(|s| s.bits()).collect())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![0b111],
                vec![0b011, 0b100],
                vec![0b101, 0b010],
                vec![0b001, 0b110],
                vec![0b001, 0b010, 0b100],
            ]
        );
    }

    #[test]
    fn blocks_cover_and_are_disjoint() {
        for p in Partitions::new(5) {
            let mut seen = TypeSet::EMPTY;
            for b in &p {
                assert!(!b.is_empty());
                assert!(seen.intersection(*b).is_empty());
                seen = seen.union(*b);
            }
            assert_eq!(seen, TypeSet::full(5));
        }
    }
}
