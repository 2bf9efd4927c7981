//! Dense Gaussian elimination over a [`FieldSpec`].

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix with an explicit column count, so empty row lists
    /// still know their width.
    pub fn from_rows_with_cols(rows: &[Vec<Elem>], cols: usize) -> Result<Self> {
        let mut m = Matrix::zeros(0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn push_row(&mut self, row: &[Elem]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul_vec(&self, f: &FieldSpec, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(f, self.row(r), v)).collect())
    }

    /// In-place reduction to reduced row-echelon form. Returns pivot columns.
    pub fn rref(&mut self, f: &FieldSpec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for k in 0..self.cols {
                    self.data.swap(pr * self.cols + k, r * self.cols + k);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is non-zero");
            for k in c..self.cols {
                let v = f.mul(self.get(r, k), inv);
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let v = f.sub(self.get(i, k), f.mul(factor, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldSpec) -> usize {
        self.clone().rref(f).len()
    }

    /// Canonical basis of the right kernel: one vector per free column, with
    /// a 1 in that column and zeros in the other free columns.
    pub fn kernel_basis(&self, f: &FieldSpec) -> Vec<Vec<Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Elem::ZERO; self.cols];
                v[free] = Elem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(row, free));
                }
                v
            })
            .collect()
    }

    /// Some x with M x = rhs, or `None` when the system is inconsistent.
    pub fn solve(&self, f: &FieldSpec, rhs: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.len(),
            });
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs[r]);
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Determinant of a square matrix.
    pub fn det(&self, f: &FieldSpec) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Elem::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Elem::ZERO);
            };
            if pr != c {
                for k in 0..n {
                    m.data.swap(pr * n + k, c * n + k);
                }
                det = f.neg(det);
            }
            let pivot = m.get(c, c);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot)?;
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = f.sub(m.get(i, k), f.mul(factor, m.get(c, k)));
                    m.set(i, k, v);
                }
            }
        }
        Ok(det)
    }
}

#[inline]
pub fn dot(f: &FieldSpec, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// a + t·b, coordinatewise.
pub fn axpy(f: &FieldSpec, a: &[Elem], t: Elem, b: &[Elem]) -> Vec<Elem> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| f.add(x, f.mul(t, y)))
        .collect()
}
