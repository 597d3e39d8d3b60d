//! Sparse exact linear algebra over the rationals.
//!
//! Systems arising from the localized calculus are large but very sparse, so
//! rows are kept as sorted sparse vectors and reduced incrementally.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ring::Scalar;

/// A sparse row: column index to nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental row-echelon form of a set of sparse rows.
///
/// Each stored row has leading column equal to its key and leading coefficient 1.
/// Column `n_cols` (one past the last unknown) holds the right-hand side.
#[derive(Clone, Debug)]
pub struct Echelon {
    n_cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
    inconsistent: bool,
}

impl Echelon {
    /// An empty system in `n_cols` unknowns.
    pub fn new(n_cols: usize) -> Self {
        Echelon { n_cols, pivots: BTreeMap::new(), inconsistent: false }
    }

    /// Number of unknowns.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Rank of the coefficient part.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether an equation `0 = c` with `c ≠ 0` was produced.
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Reduces a row against the stored pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0usize;
        loop {
            let next = row.range(cursor..self.n_cols).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, v)| (*c, v.clone()));
            let Some((c, v)) = next else { break };
            let piv = &self.pivots[&c];
            for (pc, pv) in piv {
                let e = row.entry(*pc).or_insert_with(Scalar::zero);
                *e -= &v * pv;
                if e.is_zero() {
                    row.remove(pc);
                }
            }
            cursor = c + 1;
        }
        row
    }

    /// Adds the equation `Σ row[c]·x_c = row[n_cols]`; returns whether the rank grew.
    pub fn push(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((&lead, lv)) = row.iter().next() else { return false };
        if lead >= self.n_cols {
            self.inconsistent = true;
            return false;
        }
        let inv = Scalar::one() / lv;
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    /// Pivot columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Non-pivot columns.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n_cols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Back-substitutes with the given values of the free columns.
    fn back_substitute(&self, free: &BTreeMap<usize, Scalar>, with_rhs: bool) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); self.n_cols];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for (&lead, row) in self.pivots.iter().rev() {
            let mut val = if with_rhs { row.get(&self.n_cols).cloned().unwrap_or_else(Scalar::zero) } else { Scalar::zero() };
            for (c, v) in row.range(lead + 1..self.n_cols) {
                if !x[*c].is_zero() {
                    val -= v * &x[*c];
                }
            }
            x[lead] = val;
        }
        x
    }

    /// A particular solution (free columns set to zero), or `None` if inconsistent.
    pub fn particular(&self) -> Option<Vec<Scalar>> {
        if self.inconsistent {
            return None;
        }
        Some(self.back_substitute(&BTreeMap::new(), true))
    }

    /// A basis of the homogeneous solution space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut free = BTreeMap::new();
                free.insert(f, Scalar::one());
                self.back_substitute(&free, false)
            })
            .collect()
    }
}

/// The affine solution set `particular + span(directions)` of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    /// One solution.
    pub particular: Vec<Scalar>,
    /// Basis of the homogeneous solutions.
    pub directions: Vec<Vec<Scalar>>,
}

/// Solves a sparse system given as rows with the right-hand side in column `n_cols`.
pub fn solve(n_cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> Option<AffineSolution> {
    let mut ech = Echelon::new(n_cols);
    for r in rows {
        ech.push(r);
        if ech.is_inconsistent() {
            return None;
        }
    }
    Some(AffineSolution { particular: ech.particular()?, directions: ech.nullspace() })
}

/// Rank of a set of sparse vectors of width `n_cols`.
pub fn rank(n_cols: usize, rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut ech = Echelon::new(n_cols + 1);
    for r in rows {
        ech.push(r);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|(c, v)| (*c, int(*v))).collect()
    }

    #[test]
    fn solves_small_system() {
        // x + y = 3, x - y = 1
        let sol = solve(2, vec![row(&[(0, 1), (1, 1), (2, 3)]), row(&[(0, 1), (1, -1), (2, 1)])]).unwrap();
        assert_eq!(sol.particular, vec![int(2), int(1)]);
        assert!(sol.directions.is_empty());
    }

    #[test]
    fn detects_inconsistency_and_nullspace() {
        assert!(solve(1, vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 3)])]).is_none());
        let sol = solve(3, vec![row(&[(0, 1), (2, -1)])]).unwrap();
        assert_eq!(sol.directions.len(), 2);
        assert_eq!(rank(3, vec![row(&[(0, 1)]), row(&[(0, 2)]), row(&[(1, 1)])]), 2);
    }
}
