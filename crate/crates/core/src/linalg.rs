//! Dense matrices over `F_q`: products, powers, inverses, rank and row spaces.

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Elem::ONE;
        }
        m
    }

    pub fn scalar(n: usize, c: Elem) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols: c, data })
    }

    /// An empty matrix with `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Matrix { rows: 0, cols, data: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[Elem]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: row.len() });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Keeps only the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, f: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &FieldCtx, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: v.len() });
        }
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self[(i, j)]));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, f: &FieldCtx, mut k: u64) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(f, &base)?;
            }
            base = base.mul(f, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        RowSpace::new(f, self).rank()
    }

    pub fn inverse(&self, f: &FieldCtx) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let s = f.inv(a[(col, col)]).unwrap();
            a.scale_row(f, col, s);
            inv.scale_row(f, col, s);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let c = a[(r, col)];
                    a.axpy_row(f, r, col, c);
                    inv.axpy_row(f, r, col, c);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, f: &FieldCtx, i: usize, s: Elem) {
        for c in 0..self.cols {
            self[(i, c)] = f.mul(self[(i, c)], s);
        }
    }

    /// `row[dst] -= c · row[src]`.
    fn axpy_row(&mut self, f: &FieldCtx, dst: usize, src: usize, c: Elem) {
        for k in 0..self.cols {
            let v = f.mul(c, self[(src, k)]);
            self[(dst, k)] = f.sub(self[(dst, k)], v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form of a matrix, kept for repeated membership tests.
#[derive(Clone, Debug)]
pub struct RowSpace<'f> {
    field: &'f FieldCtx,
    echelon: Matrix,
    pivots: Vec<usize>,
}

impl<'f> RowSpace<'f> {
    pub fn new(field: &'f FieldCtx, m: &Matrix) -> Self {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let s = field.inv(a[(row, col)]).unwrap();
            a.scale_row(field, row, s);
            for r in 0..a.rows {
                if r != row && !a[(r, col)].is_zero() {
                    let c = a[(r, col)];
                    a.axpy_row(field, r, row, c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        a.data.truncate(row * a.cols);
        a.rows = row;
        RowSpace { field, echelon: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn echelon(&self) -> &Matrix {
        &self.echelon
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Elem]) -> Result<bool> {
        if v.len() != self.echelon.cols {
            return Err(Error::DimensionMismatch { expected: self.echelon.cols, got: v.len() });
        }
        let f = self.field;
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c.is_zero() {
                continue;
            }
            for (k, wk) in w.iter_mut().enumerate() {
                *wk = f.sub(*wk, f.mul(c, self.echelon[(i, k)]));
            }
        }
        Ok(w.iter().all(|x| x.is_zero()))
    }
}
