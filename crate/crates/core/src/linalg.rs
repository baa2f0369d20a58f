//! Dense matrices over the finite-precision fields.
//!
//! Elimination always pivots on an entry of minimal valuation, which is the
//! numerically stable choice for p-adic inputs. Entries that are zero at
//! precision are treated as zero, so rank decisions are made at precision.

use crate::error::{Error, Result};
use crate::padic::{FieldElement, Rat};

#[derive(Clone, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

fn better_pivot(a: &Option<Rat>, b: &Option<Rat>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        _ => false,
    }
}

impl<F: FieldElement> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let c = cols.len();
        let mut data = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Matrix { rows, cols: c, data }
    }

    pub fn zeros(rows: usize, cols: usize, like: &F) -> Self {
        Matrix { rows, cols, data: vec![like.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, like: &F) -> Self {
        let mut m = Self::zeros(n, n, like);
        for i in 0..n {
            m.data[i * n + i] = like.one_like();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Some entry, used to build zeros and ones of the right field.
    pub fn sample(&self) -> &F {
        self.data.first().expect("empty matrix has no sample entry")
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let like = self.data.first().or(other.data.first()).expect("nonempty");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = like.zero_like();
                for k in 0..self.cols {
                    acc = acc.plus(&self.get(i, k).times(other.get(k, j)));
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).zero_like();
                for (k, x) in v.iter().enumerate() {
                    acc = acc.plus(&self.get(i, k).times(x));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.minus(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_cols(&cols, self.rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<F>> = idx.iter().map(|&j| self.col(j)).collect();
        Self::from_cols(&cols, self.rows)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i1 in 0..self.rows {
            for i2 in 0..other.rows {
                for j1 in 0..self.cols {
                    for j2 in 0..other.cols {
                        data.push(self.get(i1, j1).times(other.get(i2, j2)));
                    }
                }
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::identity(self.rows, self.sample());
        for _ in 0..e {
            result = result.mul(self);
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Entrywise equality at precision.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.sub(other).is_zero()
    }

    /// Minimal valuation among the entries.
    pub fn min_valuation(&self) -> Option<Rat> {
        self.data.iter().filter_map(|a| a.valuation()).min()
    }

    /// Determinant by elimination. A singular matrix yields an element that is
    /// zero at precision.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            panic!("determinant of an empty matrix");
        }
        let mut a = self.clone();
        let mut det = a.sample().one_like();
        for k in 0..n {
            let mut best = k;
            let mut best_v = a.get(k, k).valuation();
            for i in k + 1..n {
                let v = a.get(i, k).valuation();
                if better_pivot(&v, &best_v) {
                    best = i;
                    best_v = v;
                }
            }
            if best_v.is_none() {
                // zero pivot column at precision: return a zero carrying the column's precision
                return det.times(a.get(best, k));
            }
            if best != k {
                a.swap_rows(best, k);
                det = det.negated();
            }
            let piv = a.get(k, k).clone();
            det = det.times(&piv);
            let inv = piv.inverse().expect("pivot is nonzero");
            for i in k + 1..n {
                let f = a.get(i, k).times(&inv);
                if f.is_zero() && a.get(i, k).is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a.get(i, j).minus(&f.times(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Reduced row echelon form with minimal-valuation pivots.
    /// Returns the reduced matrix and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let mut best = None;
            let mut best_v = None;
            for i in r..a.rows {
                let v = a.get(i, c).valuation();
                if better_pivot(&v, &best_v) {
                    best = Some(i);
                    best_v = v;
                }
            }
            let Some(b) = best else { continue };
            a.swap_rows(b, r);
            let inv = a.get(r, c).inverse().expect("pivot is nonzero");
            for j in 0..a.cols {
                let v = a.get(r, j).times(&inv);
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..a.cols {
                    let v = a.get(i, j).minus(&f.times(a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Rank at precision, with full pivoting.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a = self.clone();
        let mut rank = 0;
        let mut col_perm: Vec<usize> = (0..a.cols).collect();
        for k in 0..a.rows.min(a.cols) {
            let mut best = None;
            let mut best_v = None;
            for i in k..a.rows {
                for &j in &col_perm[k..] {
                    let v = a.get(i, j).valuation();
                    if better_pivot(&v, &best_v) {
                        best = Some((i, j));
                        best_v = v;
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap_rows(bi, k);
            let pos = col_perm.iter().position(|&c| c == bj).unwrap();
            col_perm.swap(k, pos);
            let pc = col_perm[k];
            let inv = a.get(k, pc).inverse().expect("pivot is nonzero");
            for i in k + 1..a.rows {
                if a.get(i, pc).is_zero() {
                    continue;
                }
                let f = a.get(i, pc).times(&inv);
                for &j in &col_perm[k..] {
                    let v = a.get(i, j).minus(&f.times(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the kernel, as the columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Option<Self> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return None;
        }
        let like = self.sample();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![like.zero_like(); self.cols];
            v[f] = like.one_like();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, f).negated();
            }
            basis.push(v);
        }
        Some(Self::from_cols(&basis, self.cols))
    }

    /// A maximal independent subset of the columns, chosen greedily left to right.
    pub fn column_basis(&self) -> Self {
        let idx = self.independent_columns();
        self.select_cols(&idx)
    }

    pub fn independent_columns(&self) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        for j in 0..self.cols {
            let mut trial = chosen.clone();
            trial.push(j);
            if self.select_cols(&trial).rank() == trial.len() {
                chosen = trial;
            }
        }
        chosen
    }

    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n, self.sample()));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Precision("matrix is singular at precision".into()));
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_cols(&idx))
    }

    /// Solves `self · X = b` for square invertible `self`.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        Ok(self.inverse()?.mul(b))
    }

    /// Coefficients of det(T·I − A), lowest degree first, by Berkowitz's
    /// division-free algorithm.
    pub fn charpoly(&self) -> Vec<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let like = self.sample();
        // highest degree first during the iteration
        let mut c = vec![like.one_like(), self.get(0, 0).negated()];
        for r in 1..n {
            let a = self.get(r, r);
            let row: Vec<F> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<F> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut q = vec![like.one_like(), a.negated()];
            for _ in 0..r {
                let mut dot = like.zero_like();
                for (x, y) in row.iter().zip(&col) {
                    dot = dot.plus(&x.times(y));
                }
                q.push(dot.negated());
                // col ← M col with M the leading r×r block
                col = (0..r)
                    .map(|i| {
                        let mut acc = like.zero_like();
                        for (k, x) in col.iter().enumerate() {
                            acc = acc.plus(&self.get(i, k).times(x));
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = like.zero_like();
                for j in 0..=i.min(c.len() - 1) {
                    acc = acc.plus(&q[i - j].times(&c[j]));
                }
                next.push(acc);
            }
            c = next;
        }
        c.reverse();
        c
    }
}
