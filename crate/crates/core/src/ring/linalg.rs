//! Gaussian elimination over a residue field F_q.
//!
//! The lifting engine solves `J v = b` for one Jacobian `J` and many
//! right-hand sides, so the elimination is done once and the row operations
//! are kept as a transform applied to each `b`.

use alloc::vec::Vec;

use super::LocalArith;

/// Reduced row echelon data for a fixed `rows x cols` matrix over a field.
#[derive(Debug, Clone)]
pub struct Echelon<F: LocalArith> {
    field: F,
    rows: usize,
    cols: usize,
    /// Pivot column of each of the first `rank` rows.
    pivots: Vec<usize>,
    /// `T * J` in reduced row echelon form.
    reduced: Vec<Vec<F::Elem>>,
    /// Invertible `rows x rows` transform `T`.
    transform: Vec<Vec<F::Elem>>,
}

impl<F: LocalArith> Echelon<F> {
    /// Row-reduce `matrix` (row-major, every row of length `cols`).
    pub fn new(field: &F, matrix: &[Vec<F::Elem>], cols: usize) -> Self {
        debug_assert_eq!(field.level(), 1, "elimination needs a field");
        let rows = matrix.len();
        let mut a: Vec<Vec<F::Elem>> = matrix.to_vec();
        let mut t: Vec<Vec<F::Elem>> = (0..rows)
            .map(|i| (0..rows).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(pr) = (row..rows).find(|&i| !field.is_zero(&a[i][col])) else {
                continue;
            };
            a.swap(row, pr);
            t.swap(row, pr);
            let inv = field.inverse(&a[row][col]).expect("nonzero element of a field");
            for x in a[row].iter_mut() {
                *x = field.mul(x, &inv);
            }
            for x in t[row].iter_mut() {
                *x = field.mul(x, &inv);
            }
            for i in 0..rows {
                if i == row || field.is_zero(&a[i][col]) {
                    continue;
                }
                let factor = a[i][col].clone();
                for j in 0..cols {
                    let s = field.mul(&factor, &a[row][j]);
                    a[i][j] = field.sub(&a[i][j], &s);
                }
                for j in 0..rows {
                    let s = field.mul(&factor, &t[row][j]);
                    t[i][j] = field.sub(&t[i][j], &s);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { field: field.clone(), rows, cols, pivots, reduced: a, transform: t }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A particular solution of `J v = b`, or `None` when inconsistent.
    pub fn particular(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let tb: Vec<F::Elem> = (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (tij, bj) in self.transform[i].iter().zip(b) {
                    if !f.is_zero(bj) {
                        acc = f.add(&acc, &f.mul(tij, bj));
                    }
                }
                acc
            })
            .collect();
        if tb[self.rank()..].iter().any(|x| !f.is_zero(x)) {
            return None;
        }
        let mut v = alloc::vec![f.zero(); self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            v[pc] = tb[i].clone();
        }
        Some(v)
    }

    /// A basis of the kernel of `J`.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !self.pivots.contains(c)) {
            let mut v = alloc::vec![f.zero(); self.cols];
            v[free] = f.one();
            for (i, &pc) in self.pivots.iter().enumerate() {
                v[pc] = f.neg(&self.reduced[i][free]);
            }
            basis.push(v);
        }
        basis
    }
}
