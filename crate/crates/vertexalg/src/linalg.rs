//! Exact rational linear algebra: reduced row echelon form, rank, and null
//! space bases. Inputs are dense row-major matrices over `Q`; the sizes here
//! come from graded slices, which stay small.

use crate::rational::{is_zero, Q};
use num::traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for c in 0..self.cols {
                    if !is_zero(self.at(r, c)) && !is_zero(&v[c]) {
                        acc += self.at(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !is_zero(self.at(r, col))) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, p * self.cols + c);
                }
            }
            let inv = self.at(row, col).clone().recip();
            for c in col..self.cols {
                let v = self.at(row, c).clone() * inv.clone();
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !is_zero(self.at(r, col)) {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).clone() - f.clone() * self.at(row, c).clone();
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

/// Exact basis of the null space, one vector per free column in ascending
/// column order, each scaled so its leading coefficient is 1.
pub fn kernel_basis(matrix: &QMatrix) -> Vec<Vec<Q>> {
    let mut m = matrix.clone();
    let pivots = m.rref();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Q::zero(); m.cols];
        v[free] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m.at(r, free).clone();
        }
        // leading coefficient 1
        if let Some(lead) = v.iter().find(|x| !is_zero(x)).cloned() {
            let inv = lead.recip();
            for x in v.iter_mut() {
                *x *= inv.clone();
            }
        }
        basis.push(v);
    }
    basis
}
