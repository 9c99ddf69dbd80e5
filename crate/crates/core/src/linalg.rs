//! Dense matrices over a [`Field`] and exact Gaussian elimination.

use crate::field::{Elem, Field, LogArith, LOG_ZERO};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, field: &Field, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = field.mul(a, rhs[(l, j)]);
                    out[(i, j)] = field.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, field: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![field.zero(); self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = field.add(*o, field.mul(a, g));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn to_logs(&self, field: &Field) -> Vec<u32> {
        let la = field.log_arith();
        self.data.iter().map(|&e| la.to_log(e)).collect()
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

/// Forward elimination on a row-major matrix of discrete logs. Destroys the
/// input and returns the rank.
pub(crate) fn rank_logs(la: &LogArith<'_>, m: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| m[i * cols + c] != LOG_ZERO) else {
            continue;
        };
        if pivot != r {
            for j in c..cols {
                m.swap(pivot * cols + j, r * cols + j);
            }
        }
        let (head, tail) = m.split_at_mut((r + 1) * cols);
        let prow = &head[r * cols..];
        let lp = prow[c];
        for row in tail.chunks_exact_mut(cols) {
            let x = row[c];
            if x == LOG_ZERO {
                continue;
            }
            // row -= (x / pivot) * prow
            let f = la.mul(la.div(x, lp), la.half);
            row[c] = LOG_ZERO;
            for (dst, &src) in row[c + 1..].iter_mut().zip(&prow[c + 1..]) {
                if src != LOG_ZERO {
                    *dst = la.add(*dst, la.mul(f, src));
                }
            }
        }
        r += 1;
    }
    r
}

pub fn rank(field: &Field, m: &Matrix) -> usize {
    let mut logs = m.to_logs(field);
    rank_logs(&field.log_arith(), &mut logs, m.rows, m.cols)
}

/// Rank of the submatrix formed by `cols`.
pub fn rank_of_columns(field: &Field, m: &Matrix, cols: &[usize]) -> usize {
    let la = field.log_arith();
    let mut logs = Vec::with_capacity(m.rows * cols.len());
    for i in 0..m.rows {
        let row = m.row(i);
        logs.extend(cols.iter().map(|&j| la.to_log(row[j])));
    }
    rank_logs(&la, &mut logs, m.rows, cols.len())
}

/// Reduced row echelon form and its pivot columns.
pub fn rref(field: &Field, m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..a.cols {
            a.data.swap(p * a.cols + j, r * a.cols + j);
        }
        let inv = field.inv(a[(r, c)]).expect("pivot is nonzero");
        for j in 0..a.cols {
            a[(r, j)] = field.mul(a[(r, j)], inv);
        }
        for i in 0..a.rows {
            let f = a[(i, c)];
            if i == r || f.is_zero() {
                continue;
            }
            for j in 0..a.cols {
                let t = field.mul(f, a[(r, j)]);
                a[(i, j)] = field.sub(a[(i, j)], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Answers "are these `rows` columns independent?" for a fixed matrix of
/// full row rank. With `R = [I | P]` up to column order, a column set `S`
/// is independent iff the block of `P` on the pivot rows missing from `S`
/// and the non-pivot columns in `S` is nonsingular, which is about half
/// the size of the direct minor.
pub struct MinorOracle<'f> {
    field: &'f Field,
    logs: Vec<u32>,
    rows: usize,
    cols: usize,
    pivot_row: Vec<Option<usize>>,
    full_rank: bool,
}

impl<'f> MinorOracle<'f> {
    pub fn new(field: &'f Field, m: &Matrix) -> Self {
        let (r, pivots) = rref(field, m);
        let mut pivot_row = vec![None; m.cols];
        for (i, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(i);
        }
        MinorOracle {
            field,
            logs: r.to_logs(field),
            rows: m.rows,
            cols: m.cols,
            pivot_row,
            full_rank: pivots.len() == m.rows,
        }
    }

    /// Whether the square submatrix on `cols` (of length `rows`) is
    /// nonsingular.
    pub fn is_nonsingular(&self, cols: &[usize]) -> bool {
        assert_eq!(cols.len(), self.rows);
        if !self.full_rank {
            return false;
        }
        let mut missing = vec![true; self.rows];
        let mut free = Vec::new();
        for &c in cols {
            match self.pivot_row[c] {
                Some(i) => missing[i] = false,
                None => free.push(c),
            }
        }
        let s = free.len();
        if s == 0 {
            return true;
        }
        let mut sub = Vec::with_capacity(s * s);
        for i in (0..self.rows).filter(|&i| missing[i]) {
            let row = &self.logs[i * self.cols..(i + 1) * self.cols];
            sub.extend(free.iter().map(|&c| row[c]));
        }
        rank_logs(&self.field.log_arith(), &mut sub, s, s) == s
    }
}

/// Solves `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(field: &Field, a: &Matrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(b.len(), n);
    let mut aug: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i]);
            row
        })
        .collect();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(pivot, c);
        let inv = field.inv(aug[c][c]).ok()?;
        for x in aug[c].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let prow = aug[c].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&prow) {
                *x = field.sub(*x, field.mul(f, p));
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n]).collect())
}
