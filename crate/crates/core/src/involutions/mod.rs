//! Signed tableaux on staircase-extended diagrams and the sign-reversing
//! involutions that cancel them.
//!
//! A [`SignedTableau`] is a pair `(T, τ)`: a row-weakly-increasing filling of
//! `λ̂` (the set `T_{λ,n,N}`) or of some `λ̂_i` (the set `S_{λ,n,k,N}`),
//! together with a row labelling `τ ∈ S_N`. It contributes `sgn(τ)·x^T`.
//!
//! Row `r` of every such diagram starts in column `r − N`, i.e. on the
//! content `−N` diagonal, so the content of a cell only depends on its
//! position inside its row. All maps here move rows without changing that
//! position-to-content correspondence except where stated.

mod domain;
mod maps;
mod master;

pub use domain::{Domain, DomainIter, Sampler, DEFAULT_CAP};
pub use maps::{
    decompose_i2_fixed, i1, i2, i3, i4, recompose_i2_fixed, slide_to_border_strip,
    unslide_from_border_strip, BorderStripFixed, I2Fixed, Instance,
};
pub use master::{master_gf, signed_sum, MasterGF};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, Variable};
use crate::shapes::Cell;
use crate::tableaux::ShiftParams;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedTableau {
    bound: usize,
    rows: Vec<Vec<u32>>,
    tau: Vec<u32>,
    marked: Option<usize>,
}

impl SignedTableau {
    /// `marked` is the 0-based row carrying the `kn` extra cells (`None` for
    /// elements of `T`). Membership is checked by [`Domain::check`].
    pub fn new(bound: usize, rows: Vec<Vec<u32>>, tau: Vec<u32>, marked: Option<usize>) -> Self {
        SignedTableau {
            bound,
            rows,
            tau,
            marked,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn tau(&self) -> &[u32] {
        &self.tau
    }

    pub fn marked(&self) -> Option<usize> {
        self.marked
    }

    pub fn row_lengths(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// `sgn(τ)` as ±1.
    pub fn sign(&self) -> i32 {
        permutation_sign(&self.tau)
    }

    pub fn cells(&self) -> impl Iterator<Item = (Cell, u32)> + '_ {
        let bound = self.bound as i64;
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            let row_no = r as i64 + 1;
            row.iter()
                .enumerate()
                .map(move |(t, &e)| (Cell::new(row_no, row_no - bound + t as i64), e))
        })
    }

    /// `x^T` (for `l = 0`) or the shifted `x^{T,l}`.
    pub fn weight(&self, p: ShiftParams) -> Monomial {
        Monomial::from_factors(
            self.cells()
                .map(|(cell, e)| (p.variable(cell, e), 1))
                .collect::<Vec<(Variable, u32)>>(),
        )
    }

    /// No vertically adjacent pair with the upper entry ≥ the lower one.
    pub fn is_column_strict(&self) -> bool {
        self.rows.windows(2).all(|w| {
            let (upper, lower) = (&w[0], &w[1]);
            // lower position t sits under upper position t + 1
            lower
                .iter()
                .enumerate()
                .all(|(t, &e)| upper.get(t + 1).is_none_or(|&u| u < e))
        })
    }

    pub fn to_doc(&self) -> SignedTableauDoc {
        SignedTableauDoc {
            bound: self.bound,
            rows: self.rows.clone(),
            tau: self.tau.clone(),
            marked_row: self.marked.map(|m| m + 1),
        }
    }
}

impl fmt::Display for SignedTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let mark = if self.marked == Some(r) { "*" } else { " " };
            writeln!(
                f,
                "{}{}{} | τ{} = {}",
                "  ".repeat(r),
                cells.join(" "),
                mark,
                r + 1,
                self.tau[r]
            )?;
        }
        Ok(())
    }
}

/// Serializable form used in verification reports. `marked_row` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTableauDoc {
    pub bound: usize,
    pub rows: Vec<Vec<u32>>,
    pub tau: Vec<u32>,
    pub marked_row: Option<usize>,
}

pub(crate) fn permutation_sign(perm: &[u32]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur] as usize - 1;
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Lexicographic successor; false after the last permutation.
pub(crate) fn next_permutation(perm: &mut [u32]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let Some(i) = (0..perm.len() - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..perm.len())
        .rev()
        .find(|&j| perm[j] > perm[i])
        .unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&[1, 2, 3]), 1);
        assert_eq!(permutation_sign(&[2, 1, 3]), -1);
        assert_eq!(permutation_sign(&[2, 3, 1]), 1);
        assert_eq!(permutation_sign(&[2, 5, 4, 1, 3]), 1);
        assert_eq!(permutation_sign(&[2, 1, 4, 3, 5]), 1);
        assert_eq!(permutation_sign(&[1, 3, 2, 4, 5]), -1);
        assert_eq!(permutation_sign(&[]), 1);
    }

    #[test]
    fn permutations_in_order() {
        let mut p = vec![1, 2, 3];
        let mut all = vec![p.clone()];
        while next_permutation(&mut p) {
            all.push(p.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![1, 3, 2]);
        assert_eq!(all[5], vec![3, 2, 1]);
        // sign sums to zero over S_3
        assert_eq!(all.iter().map(|p| permutation_sign(p)).sum::<i32>(), 0);
    }

    #[test]
    fn cells_follow_the_staircase() {
        let x = SignedTableau::new(2, vec![vec![1, 1, 2], vec![2]], vec![1, 2], None);
        let cells: Vec<Cell> = x.cells().map(|(c, _)| c).collect();
        assert_eq!(
            cells,
            vec![
                Cell::new(1, -1),
                Cell::new(1, 0),
                Cell::new(1, 1),
                Cell::new(2, 0)
            ]
        );
        assert!(x.is_column_strict());
        let y = SignedTableau::new(2, vec![vec![1, 2, 2], vec![2]], vec![1, 2], None);
        assert!(!y.is_column_strict());
    }
}
