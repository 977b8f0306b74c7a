//! Dense exact linear algebra over a finite field.
//!
//! Row-major matrices with Gaussian elimination. Sizes here are desk scale
//! (hundreds of rows/columns), so there is no pivoting strategy beyond
//! "first nonzero entry".

use crate::galois::{FieldCtx, Fq};

#[derive(Debug, Clone)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Fq>,
    ctx: FieldCtx,
}

impl Matrix {
    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Fq::ZERO; rows * cols],
            ctx: ctx.clone(),
        }
    }

    pub fn from_rows(ctx: &FieldCtx, rows: &[Vec<Fq>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
            ctx: ctx.clone(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fq {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fq) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fq] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form. Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let ctx = self.ctx.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut pivot = None;
            for i in r..self.rows {
                if !self.get(i, c).is_zero() {
                    pivot = Some(i);
                    break;
                }
            }
            let Some(pi) = pivot else { continue };
            self.swap_rows(r, pi);
            let inv = ctx.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = ctx.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = ctx.sub(self.get(i, j), ctx.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }

    /// Basis of the right kernel {v : Mv = 0}, one vector per free column,
    /// in increasing order of the free column index.
    pub fn kernel_basis(mut self) -> Vec<Vec<Fq>> {
        let ctx = self.ctx.clone();
        let pivots = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut m = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                m[c] = Some(r);
            }
            m
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Fq::ZERO; self.cols];
            v[free] = ctx.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(self.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Rank of the row span of a set of vectors.
    pub fn row_span_rank(ctx: &FieldCtx, rows: &[Vec<Fq>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        Matrix::from_rows(ctx, rows).rank()
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Matrix::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let ctx = &self.ctx;
        let mut out = Matrix::zero(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.add(out.get(i, j), ctx.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product Mv.
    pub fn apply(&self, v: &[Fq]) -> Vec<Fq> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for (j, &vj) in v.iter().enumerate() {
                    acc = ctx.add(acc, ctx.mul(self.get(i, j), vj));
                }
                acc
            })
            .collect()
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let ctx = self.ctx.clone();
        let mut aug = Matrix::zero(&ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, ctx.one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Matrix::zero(&ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }
}

/// Incremental row space: feed vectors one at a time, learn which ones grow
/// the span. Used for greedy basis extraction.
pub struct SpanTracker {
    ctx: FieldCtx,
    /// Reduced rows with their leading column.
    rows: Vec<(usize, Vec<Fq>)>,
}

impl SpanTracker {
    pub fn new(ctx: &FieldCtx) -> Self {
        SpanTracker {
            ctx: ctx.clone(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current span; if a nonzero remainder survives,
    /// absorb it and return true.
    pub fn insert(&mut self, v: &[Fq]) -> bool {
        let ctx = &self.ctx;
        let mut w = v.to_vec();
        for (lead, row) in &self.rows {
            if !w[*lead].is_zero() {
                let f = w[*lead];
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    *wi = ctx.sub(*wi, ctx.mul(f, *ri));
                }
            }
        }
        let Some(lead) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(w[lead]).unwrap();
        for wi in w.iter_mut() {
            *wi = ctx.mul(*wi, inv);
        }
        self.rows.push((lead, w));
        self.rows.sort_by_key(|(l, _)| *l);
        true
    }

    /// Would `v` grow the span? (No mutation.)
    pub fn contains(&self, v: &[Fq]) -> bool {
        let ctx = &self.ctx;
        let mut w = v.to_vec();
        for (lead, row) in &self.rows {
            if !w[*lead].is_zero() {
                let f = w[*lead];
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    *wi = ctx.sub(*wi, ctx.mul(f, *ri));
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }
}
