//! Dense column-major matrices over a [`Field`].

use std::fmt;

use crate::field::{Coeff, Field};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Coeff>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> &Coeff {
        debug_assert!(row < self.rows && col < self.cols);
        &self.data[col * self.rows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Coeff) {
        debug_assert_eq!(value.field(), self.field);
        self.data[col * self.rows + row] = value;
    }

    pub fn column(&self, col: usize) -> &[Coeff] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    /// Row indices of nonzero entries in a column, ascending.
    pub fn column_support(&self, col: usize) -> impl Iterator<Item = usize> + '_ {
        self.column(col).iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(r, _)| r)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_zero)
    }

    /// Count of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.data.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        assert_eq!(self.field, rhs.field, "field mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let b = rhs.get(k, j);
                if b.is_zero() {
                    continue;
                }
                for i in 0..self.rows {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        let idx = j * out.rows + i;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let scale = a.get(col, col).inv()?;
            a.scale_row(col, &scale);
            inv.scale_row(col, &scale);
            for r in 0..n {
                if r != col && !a.get(r, col).is_zero() {
                    let factor = a.get(r, col).clone();
                    a.add_row_multiple(r, col, &(-&factor));
                    inv.add_row_multiple(r, col, &(-&factor));
                }
            }
        }
        Some(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(c * self.rows + a, c * self.rows + b);
        }
    }

    pub fn scale_row(&mut self, row: usize, by: &Coeff) {
        for c in 0..self.cols {
            let idx = c * self.rows + row;
            if !self.data[idx].is_zero() {
                self.data[idx] = &self.data[idx] * by;
            }
        }
    }

    pub fn scale_col(&mut self, col: usize, by: &Coeff) {
        for r in 0..self.rows {
            let idx = col * self.rows + r;
            if !self.data[idx].is_zero() {
                self.data[idx] = &self.data[idx] * by;
            }
        }
    }

    /// `row[target] += factor * row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Coeff) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.data[c * self.rows + source];
            if !s.is_zero() {
                let delta = s * factor;
                self.data[c * self.rows + target] += &delta;
            }
        }
    }

    /// `col[target] += factor * col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Coeff) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let s = &self.data[source * self.rows + r];
            if !s.is_zero() {
                let delta = s * factor;
                self.data[target * self.rows + r] += &delta;
            }
        }
    }

    /// Submatrix keeping the listed rows and columns in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (cj, &c) in cols.iter().enumerate() {
            for (ri, &r) in rows.iter().enumerate() {
                let v = self.get(r, c);
                if !v.is_zero() {
                    out.set(ri, cj, v.clone());
                }
            }
        }
        out
    }

    /// Nonzero-pattern equality.
    pub fn same_pattern(&self, other: &Matrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.is_zero() == b.is_zero())
    }

    /// Row-major nested vectors of printed entries.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}> {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}
