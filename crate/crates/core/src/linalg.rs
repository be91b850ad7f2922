//! Dense matrices over GF(2^q): product, inverse, rank, submatrices.
//!
//! Everything is cubic Gaussian elimination. Pivoting takes the first
//! nonzero entry; field arithmetic is exact so there is nothing to gain
//! from choosing larger pivots.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldConfig, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left_rows}x{left_cols} against {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrices are over different fields")]
    FieldMismatch,
}

/// Row-major dense matrix over one field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    field: FieldConfig,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FieldMatrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(16)])?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(field: FieldConfig, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
            field,
        }
    }

    pub fn identity(field: FieldConfig, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.data[i * size + i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_fn(
        field: FieldConfig,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        FieldMatrix {
            rows,
            cols,
            data,
            field,
        }
    }

    /// Every entry uniform and independent.
    pub fn random<R: Rng + ?Sized>(
        field: FieldConfig,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random_element(rng))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> FieldMatrix {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Entrywise sum; in characteristic two this is also the difference.
    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix, LinalgError> {
        self.check_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(self.mismatch(other));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
            field: self.field,
        })
    }

    /// `I - self`, which equals `I + self` over GF(2^q).
    pub fn identity_minus(&self) -> Result<FieldMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i] += FieldElement::ONE;
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &FieldMatrix) -> Result<FieldMatrix, LinalgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let f = self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                axpy(f, out_row, a, other.row(k));
            }
        }
        Ok(out)
    }

    /// Copies `self[rows, cols]` in the given index order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<FieldMatrix, LinalgError> {
        for &r in rows {
            if r >= self.rows {
                return Err(LinalgError::IndexOutOfRange {
                    index: r,
                    bound: self.rows,
                });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(LinalgError::IndexOutOfRange {
                    index: c,
                    bound: self.cols,
                });
            }
        }
        Ok(Self::from_fn(self.field, rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c])
        }))
    }

    /// Gauss-Jordan inversion. `Err(Singular)` when no inverse exists.
    pub fn invert(&self) -> Result<FieldMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = FieldMatrix::identity(f, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(LinalgError::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = f.inv(a.get(col, col)).expect("pivot is nonzero");
            a.scale_row(col, scale);
            inv.scale_row(col, scale);

            let pivot_a = a.row(col).to_vec();
            let pivot_inv = inv.row(col).to_vec();
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                // only columns >= col of `a` can still be nonzero in the pivot row
                axpy(
                    f,
                    &mut a.data[r * n + col..(r + 1) * n],
                    factor,
                    &pivot_a[col..],
                );
                axpy(f, &mut inv.data[r * n..(r + 1) * n], factor, &pivot_inv);
            }
        }
        Ok(inv)
    }

    /// Rank by row reduction on a copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            let scale = f.inv(a.get(rank, col)).expect("pivot is nonzero");
            a.scale_row(rank, scale);
            let pivot_row = a.row(rank)[col..].to_vec();
            for r in rank + 1..rows {
                let factor = a.get(r, col);
                if !factor.is_zero() {
                    axpy(
                        f,
                        &mut a.data[r * cols + col..(r + 1) * cols],
                        factor,
                        &pivot_row,
                    );
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (first, second) = self.data.split_at_mut(hi * c);
        first[lo * c..(lo + 1) * c].swap_with_slice(&mut second[..c]);
    }

    fn scale_row(&mut self, r: usize, s: FieldElement) {
        let f = self.field;
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = f.mul(*x, s);
        }
    }

    fn check_field(&self, other: &FieldMatrix) -> Result<(), LinalgError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(LinalgError::FieldMismatch)
        }
    }

    fn mismatch(&self, other: &FieldMatrix) -> LinalgError {
        LinalgError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

/// `dst += a * src`
#[inline]
fn axpy(f: FieldConfig, dst: &mut [FieldElement], a: FieldElement, src: &[FieldElement]) {
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += f.mul(a, s);
        }
    }
}
