use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::rat::{normalize_ray, Rat};
use crate::{Error, Result};

/// Dense row-major matrix over `Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// `(rank, normalized nullspace basis)`, see [`QMatrix::nullspace`].
pub fn qmat_rank_nullspace(m: &QMatrix) -> (usize, Vec<Vec<Rat>>) {
    let e = m.echelon();
    let ns = e.nullspace();
    (e.pivots.len(), ns)
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(QMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds the matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<Rat>]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Normalized basis of `{v : Mv = 0}`: one vector per non-pivot column
    /// in increasing column order, each scaled to a primitive integer vector
    /// with positive first nonzero entry.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        self.echelon().nullspace()
    }

    /// Reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        let mut rows: Vec<Vec<Rat>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut().skip(c) {
                *x *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(pivots.len());
        Echelon {
            cols: self.cols,
            rows,
            pivots,
        }
    }

    /// A solution of `Mx = b`, if one exists.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let e = aug.echelon();
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= &a[c][c];
            let inv = a[c][c].recip();
            let pivot_row = a[c].clone();
            for row in a.iter_mut().skip(c + 1) {
                if row[c].is_zero() {
                    continue;
                }
                let f = &row[c] * &inv;
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        Ok(det)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rat::one());
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, e.rows[i][n + j].clone());
            }
        }
        Ok(inv)
    }
}

/// Reduced row echelon form: the nonzero rows and their pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[f];
                }
                normalize_ray(&v)
            })
            .collect()
    }
}

/// Coordinates with respect to a fixed list of linearly independent vectors.
///
/// Picks rows on which the basis is invertible, so each query costs one
/// small matrix-vector product plus an exact membership check.
#[derive(Debug, Clone)]
pub struct SpanCoords {
    basis: Vec<Vec<Rat>>,
    rows: Vec<usize>,
    inv: QMatrix,
}

impl SpanCoords {
    pub fn new(dim: usize, basis: Vec<Vec<Rat>>) -> Result<Self> {
        let k = basis.len();
        let b = QMatrix::from_cols(dim, &basis)?;
        // Pivot columns of Bᵀ are rows of B where B is invertible.
        let e = b.transpose().echelon();
        if e.rank() != k {
            return Err(Error::Inconsistent("basis vectors are dependent".into()));
        }
        let rows = e.pivots.clone();
        let mut sub = QMatrix::zeros(k, k);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..k {
                sub.set(i, j, b.get(r, j).clone());
            }
        }
        Ok(SpanCoords {
            inv: sub.inverse()?,
            basis,
            rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let picked: Vec<Rat> = self.rows.iter().map(|&r| v[r].clone()).collect();
        let c = self.inv.mul_vec(&picked);
        let mut check: Vec<Rat> = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in check.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= ci * y;
                }
            }
        }
        check.iter().all(|x| x.is_zero()).then_some(c)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for x in self.row(i) {
                write!(f, "{x} ")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
