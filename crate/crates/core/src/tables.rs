//! Square operation tables over `0..n` with exhaustive law checks.
//!
//! Rings, modules and monoids in this crate are all given by explicit finite
//! tables, so every algebraic law is decidable by enumeration. The checks
//! here return the first offending witness instead of a bare boolean.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("operation table must be {n}x{n}, row {row} has length {len}")]
    BadShape { n: usize, row: usize, len: usize },
    #[error("table entry [{i}][{j}] = {value} is out of range for {n} elements")]
    OutOfRange {
        i: usize,
        j: usize,
        value: usize,
        n: usize,
    },
    #[error("designated element index {index} is out of range for {n} elements")]
    BadDesignated { index: usize, n: usize },
}

/// A binary operation on `0..n` as a full `n`-square lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTable {
    table: Vec<Vec<usize>>,
}

impl OpTable {
    /// Checks the shape and range of `table` (must be `n`-square with entries
    /// below `n`).
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, TableError> {
        let n = table.len();
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(TableError::BadShape {
                    n,
                    row,
                    len: r.len(),
                });
            }
            for (j, &v) in r.iter().enumerate() {
                if v >= n {
                    return Err(TableError::OutOfRange {
                        i: row,
                        j,
                        value: v,
                        n,
                    });
                }
            }
        }
        Ok(OpTable { table })
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// First triple with `(i op j) op k != i op (j op k)`, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let ij = self.op(i, j);
                for k in 0..n {
                    if self.op(ij, k) != self.op(i, self.op(j, k)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First pair with `i op j != j op i`, if any.
    pub fn commutativity_witness(&self) -> Option<(usize, usize)> {
        let n = self.size();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.op(i, j) != self.op(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First element not fixed by `e` on either side, if any.
    pub fn unit_witness(&self, e: usize) -> Option<usize> {
        (0..self.size()).find(|&i| self.op(e, i) != i || self.op(i, e) != i)
    }

    /// First element without a two-sided inverse against unit `e`, if any.
    pub fn inverse_witness(&self, e: usize) -> Option<usize> {
        let n = self.size();
        (0..n).find(|&i| !(0..n).any(|j| self.op(i, j) == e && self.op(j, i) == e))
    }
}
