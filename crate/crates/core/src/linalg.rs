//! Exact linear algebra: sparse row echelon forms over ℚ(ζ) and ranks over ℚ.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactfield::{CycloNumber, Rational};

pub type SparseRow = BTreeMap<usize, CycloNumber>;

/// Row echelon basis of a subspace, one normalized row per pivot column.
///
/// Every stored row has a leading 1 at its pivot column and zeros at all
/// pivot columns that existed when it was inserted.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Clears every pivot column of `row` by subtracting stored rows.
    /// The result is the unique representative of `row` modulo the row space
    /// supported on non-pivot columns.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0;
        loop {
            let hit = row
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((col, factor)) = hit else {
                return row;
            };
            for (c, v) in &self.pivots[&col] {
                let delta = &factor * v;
                let entry = row.entry(*c).or_insert_with(CycloNumber::zero);
                *entry = &*entry - &delta;
                if entry.is_zero() {
                    row.remove(c);
                }
            }
            cursor = col + 1;
        }
    }

    /// Adds a row to the span; returns whether the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some((&lead, lead_val)) = row.iter().next() else {
            return false;
        };
        let inv = lead_val.inverse().expect("nonzero leading entry");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        row.insert(lead, CycloNumber::one());
        self.pivots.insert(lead, row);
        true
    }
}

/// Rank over ℚ of a list of rational vectors of equal length.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, CycloNumber::from_int(v))).collect()
    }

    #[test]
    fn echelon_rank_and_reduction() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(row(&[(0, 2), (2, 4)])));
        assert!(e.insert(row(&[(0, 1), (1, 1)])));
        assert!(!e.insert(row(&[(0, 3), (1, 1), (2, 4)])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_columns().collect::<Vec<_>>(), vec![0, 1]);
        // (1,1,1) = (1,0,2) + (0,1,-2) + (0,0,1)
        let r = e.reduce(row(&[(0, 1), (1, 1), (2, 1)]));
        assert_eq!(r, row(&[(2, 1)]));
    }

    #[test]
    fn rational_rank_counts_independent_rows() {
        let q = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
        assert_eq!(rational_rank(&[q(&[1, 2]), q(&[2, 4])]), 1);
        assert_eq!(rational_rank(&[q(&[1, 2, 0]), q(&[0, 1, 1]), q(&[1, 3, 1])]), 2);
        assert_eq!(rational_rank(&[]), 0);
    }
}
