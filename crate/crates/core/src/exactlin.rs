//! Dense linear algebra over a prime field GF(p).
//!
//! Everything in the crate bottoms out here: Hom spaces are kernels of
//! commuting-square systems, (co)kernels of module maps are computed vertex by
//! vertex, and Ext dimensions come from ranks of induced Hom maps. Arithmetic
//! is exact, so there are no tolerances anywhere above this layer.

use std::fmt;

use crate::error::{Error, Result};

/// The prime field GF(p). `p` is small (it has to fit comfortably in `u32`
/// products computed in `u64`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p > 65_521 || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in GF({})", self.p);
        // Fermat: a^(p-2)
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over GF(p), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Output of Gauss-Jordan elimination on `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub rank: usize,
    /// Column vectors spanning `{x : A x = 0}`.
    pub kernel_basis: Vec<Mat>,
    /// A solution of `A x = b` when `b` was given and the system is consistent.
    pub particular: Option<Mat>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major residues; entries are reduced mod p.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let p = field.p();
        Ok(Self {
            field,
            rows,
            cols,
            data: data.into_iter().map(|x| x % p).collect(),
        })
    }

    /// Convenience constructor for literals in tests and fixtures.
    pub fn from_rows(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix literal");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    /// A single column vector.
    pub fn column(field: Field, entries: &[u32]) -> Self {
        Self::from_vec(field, entries.len(), 1, entries.to_vec()).expect("column length")
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, 1);
        for r in 0..self.rows {
            out.data[r] = self.get(r, c);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        let p = f.p() as u64;
        let mut out = Mat::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o = ((*o as u64 + a * b as u64) % p) as u32;
                }
            }
        }
        Ok(out)
    }

    /// Product for operands whose shapes are known to agree.
    pub fn dot(&self, rhs: &Mat) -> Mat {
        self.mul(rhs).expect("matrix shapes agree")
    }

    pub fn add(&self, rhs: &Mat) -> Result<Mat> {
        self.zip_with(rhs, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Mat) -> Result<Mat> {
        self.zip_with(rhs, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, rhs: &Mat, op: impl Fn(Field, u32, u32) -> u32) -> Result<Mat> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        Ok(Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| op(f, a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: u32) -> Mat {
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// `self += s * rhs`, shapes must match.
    pub fn add_scaled(&mut self, rhs: &Mat, s: u32) {
        assert_eq!(self.shape(), rhs.shape());
        if s == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = f.add(*a, f.mul(b, s));
        }
    }

    pub fn hstack(blocks: &[&Mat], field: Field, rows: usize) -> Mat {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            out.set_block(0, off, b);
            off += b.cols;
        }
        out
    }

    pub fn vstack(blocks: &[&Mat], field: Field, cols: usize) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.set_block(off, 0, b);
            off += b.rows;
        }
        out
    }

    pub fn block_diag(blocks: &[&Mat], field: Field) -> Mat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for r in 0..b.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Mat::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    /// Selects the given columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..self.cols {
                    self.data.swap(pr * self.cols + k, r * self.cols + k);
                }
            }
            let inv = f.inv(self.get(r, c));
            for k in 0..self.cols {
                let v = self.data[r * self.cols + k];
                self.data[r * self.cols + k] = f.mul(v, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for k in c..self.cols {
                    let sub = f.mul(factor, self.data[r * self.cols + k]);
                    let v = self.data[i * self.cols + k];
                    self.data[i * self.cols + k] = f.sub(v, sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `A x = b` (if `b` is given) and returns the rank and a kernel basis.
    pub fn rref_solve(&self, b: Option<&Mat>) -> Result<Solution> {
        if let Some(b) = b {
            if b.rows != self.rows || b.cols != 1 {
                return Err(Error::DimensionMismatch(format!(
                    "right-hand side {}x{} for a system with {} equations",
                    b.rows, b.cols, self.rows
                )));
            }
        }
        let f = self.field;
        let n = self.cols;
        let aug = match b {
            Some(b) => Mat::hstack(&[self, b], f, self.rows),
            None => self.clone(),
        };
        let (red, piv_all) = aug.rref();
        let piv: Vec<usize> = piv_all.iter().copied().filter(|&c| c < n).collect();
        let rank = piv.len();
        let consistent = piv_all.len() == rank;

        let mut is_pivot = vec![false; n];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let mut kernel_basis = Vec::with_capacity(n - rank);
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = Mat::zeros(f, n, 1);
            v.data[free] = 1;
            for (row, &pc) in piv.iter().enumerate() {
                v.data[pc] = f.neg(red.get(row, free));
            }
            kernel_basis.push(v);
        }

        let particular = match b {
            Some(_) if consistent => {
                let mut x = Mat::zeros(f, n, 1);
                for (row, &pc) in piv.iter().enumerate() {
                    x.data[pc] = red.get(row, n);
                }
                Some(x)
            }
            _ => None,
        };
        Ok(Solution {
            rank,
            kernel_basis,
            particular,
        })
    }

    /// Column vectors spanning the null space.
    pub fn kernel(&self) -> Vec<Mat> {
        self.rref_solve(None).expect("no rhs").kernel_basis
    }

    /// Kernel as the columns of one matrix (`cols x k`).
    pub fn kernel_matrix(&self) -> Mat {
        let ker = self.kernel();
        let refs: Vec<&Mat> = ker.iter().collect();
        Mat::hstack(&refs, self.field, self.cols)
    }

    /// Solves `self * X = rhs` for a matrix `X`, if a solution exists.
    pub fn solve_matrix(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let f = self.field;
        let mut out = Mat::zeros(f, self.cols, rhs.cols);
        if self.cols == 0 {
            return rhs.is_zero().then_some(out);
        }
        let aug = Mat::hstack(&[self, rhs], f, self.rows);
        let (red, piv) = aug.rref();
        if piv.iter().any(|&c| c >= self.cols) {
            return None;
        }
        for (row, &pc) in piv.iter().enumerate() {
            for j in 0..rhs.cols {
                out.data[pc * rhs.cols + j] = red.get(row, self.cols + j);
            }
        }
        Some(out)
    }

    pub fn invert(&self) -> Result<Option<Mat>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let f = self.field;
        if n == 0 {
            return Ok(Some(Mat::zeros(f, 0, 0)));
        }
        let aug = Mat::hstack(&[self, &Mat::identity(f, n)], f, n);
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Ok(None);
        }
        Ok(Some(red.block(0, n, n, n)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// `self^k` for a square matrix.
    pub fn pow(&self, k: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.dot(&base);
            }
            base = base.dot(&base);
            e >>= 1;
        }
        acc
    }

    /// Column space basis (as columns of a matrix with full column rank).
    pub fn column_space(&self) -> Mat {
        let (_, piv) = self.rref();
        self.select_cols(&piv)
    }
}

/// A subspace complement helper: a projection `k^n -> k^n / U` together with
/// a linear section. `U` is spanned by the columns of `span`.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    /// `(n - dim U) x n`, surjective, kernel exactly `U`.
    pub projection: Mat,
    /// `n x (n - dim U)`, `projection * section = I`.
    pub section: Mat,
}

impl QuotientSpace {
    pub fn new(field: Field, n: usize, span: &Mat) -> Self {
        assert_eq!(span.rows(), n);
        // Row-reduce U^T so that pivot coordinates can be eliminated.
        let (red, piv) = span.transpose().rref();
        let mut is_pivot = vec![false; n];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let q = free.len();
        let mut projection = Mat::zeros(field, q, n);
        let mut section = Mat::zeros(field, n, q);
        for (j, &c) in free.iter().enumerate() {
            projection.set(j, c, 1);
            section.set(c, j, 1);
        }
        // A pivot coordinate e_pc equals -(rest of its rref row) modulo U.
        for (row, &pc) in piv.iter().enumerate() {
            for (j, &c) in free.iter().enumerate() {
                let v = red.get(row, c);
                if v != 0 {
                    projection.set(j, pc, field.neg(v));
                }
            }
        }
        Self {
            projection,
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}
