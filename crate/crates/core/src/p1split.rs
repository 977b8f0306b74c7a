//! Splitting types of kernels of maps between twisted sums on the
//! projective line.
//!
//! A map ⊕O(a_i) → ⊕O(b_j) is a matrix of binary forms. When the map is
//! surjective as a sheaf map its kernel is a direct sum of line bundles
//! ⊕O(e_i); the twists (e_1 ≤ … ≤ e_k) are recovered from first differences
//! of the graded kernel dimensions m ↦ h⁰(K(m)).

use crate::error::Error;
use crate::galois::{Embedding, FieldCtx, Fq};
use crate::linalg::Matrix;
use crate::polyalg::BinaryForm;
use crate::Result;
use std::fmt;

#[derive(Debug, Clone)]
pub struct TwistedMap {
    source: Vec<i32>,
    target: Vec<i32>,
    /// entries[j][i]: component O(a_i) → O(b_j), a form of degree b_j − a_i.
    entries: Vec<Vec<BinaryForm>>,
    ctx: FieldCtx,
}

impl TwistedMap {
    pub fn new(
        ctx: &FieldCtx,
        source: Vec<i32>,
        target: Vec<i32>,
        entries: Vec<Vec<BinaryForm>>,
    ) -> Result<Self> {
        if source.is_empty() || target.is_empty() {
            return Err(Error::DegenerateInput(
                "need at least one source and target twist".into(),
            ));
        }
        if source.len() < target.len() {
            return Err(Error::DegenerateInput(
                "kernel computations need at least as many sources as targets".into(),
            ));
        }
        if entries.len() != target.len()
            || entries.iter().any(|row| row.len() != source.len())
        {
            return Err(Error::DegenerateInput(format!(
                "entry matrix must be {} x {}",
                target.len(),
                source.len()
            )));
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, g) in row.iter().enumerate() {
                if *g.ctx() != *ctx {
                    return Err(Error::ContextMismatch);
                }
                if g.is_zero() {
                    continue;
                }
                let need = target[j] - source[i];
                if need < 0 || g.degree() as i32 != need {
                    return Err(Error::DegreeMismatch(format!(
                        "entry ({j},{i}) must have degree {need}, got {}",
                        g.degree()
                    )));
                }
            }
        }
        Ok(TwistedMap {
            source,
            target,
            entries,
            ctx: ctx.clone(),
        })
    }

    /// One-row map ⊕O(a_i) → O(b).
    pub fn single_row(
        ctx: &FieldCtx,
        source: Vec<i32>,
        target: i32,
        row: Vec<BinaryForm>,
    ) -> Result<Self> {
        TwistedMap::new(ctx, source, vec![target], vec![row])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn source_twists(&self) -> &[i32] {
        &self.source
    }
    pub fn target_twists(&self) -> &[i32] {
        &self.target
    }
    pub fn entry(&self, j: usize, i: usize) -> &BinaryForm {
        &self.entries[j][i]
    }
    pub fn rows(&self) -> usize {
        self.target.len()
    }
    pub fn cols(&self) -> usize {
        self.source.len()
    }

    /// Expected rank of the kernel bundle.
    pub fn kernel_rank(&self) -> usize {
        self.source.len() - self.target.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|g| g.is_zero())
    }

    /// Substitute an invertible change of the line coordinates into every
    /// entry.
    pub fn reparametrize(&self, m: &[[Fq; 2]; 2]) -> Result<Self> {
        let det = self.ctx.sub(
            self.ctx.mul(m[0][0], m[1][1]),
            self.ctx.mul(m[0][1], m[1][0]),
        );
        if det.is_zero() {
            return Err(Error::DegenerateInput(
                "reparametrization matrix is singular".into(),
            ));
        }
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|g| g.compose(m)).collect())
            .collect();
        TwistedMap::new(&self.ctx, self.source.clone(), self.target.clone(), entries)
    }

    pub fn lift(&self, emb: &Embedding) -> Self {
        TwistedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|g| g.lift(emb)).collect())
            .collect(),
            ctx: emb.to_ctx().clone(),
        }
    }
}

/// Sorted twists of a split bundle ⊕O(e_i) on the line.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SplittingType(Vec<i32>);

impl SplittingType {
    pub fn new(mut parts: Vec<i32>) -> Self {
        parts.sort_unstable();
        SplittingType(parts)
    }

    pub fn parts(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_part(&self) -> Option<i32> {
        self.0.first().copied()
    }

    pub fn max_part(&self) -> Option<i32> {
        self.0.last().copied()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// All parts ≥ 0: the bundle is globally generated.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// h⁰ of the bundle twisted by m.
    pub fn h0(&self, m: i32) -> usize {
        self.0
            .iter()
            .map(|&e| 0.max(e + m + 1) as usize)
            .sum()
    }

    /// h¹ of the bundle twisted by m.
    pub fn h1(&self, m: i32) -> usize {
        self.0
            .iter()
            .map(|&e| 0.max(-e - m - 1) as usize)
            .sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn pos(v: i32) -> usize {
    v.max(0) as usize
}

/// The multiplication matrix ⊕H⁰(O(a_i+m)) → ⊕H⁰(O(b_j+m)) in the dense
/// coefficient bases; empty blocks for negative twists.
fn graded_matrix(map: &TwistedMap, m: i32) -> Matrix {
    let ctx = &map.ctx;
    let col_sizes: Vec<usize> = map.source.iter().map(|&a| pos(a + m + 1)).collect();
    let row_sizes: Vec<usize> = map.target.iter().map(|&b| pos(b + m + 1)).collect();
    let cols: usize = col_sizes.iter().sum();
    let rows: usize = row_sizes.iter().sum();
    let mut mat = Matrix::zero(ctx, rows, cols);
    let mut col_off = 0;
    for (i, &csize) in col_sizes.iter().enumerate() {
        let mut row_off = 0;
        for (j, &rsize) in row_sizes.iter().enumerate() {
            let g = &map.entries[j][i];
            if !g.is_zero() {
                for alpha in 0..csize {
                    for l in 0..=g.degree() as usize {
                        let c = g.coeff(l as u32);
                        if c.is_zero() {
                            continue;
                        }
                        let r = row_off + alpha + l;
                        mat.set(r, col_off + alpha, ctx.add(mat.get(r, col_off + alpha), c));
                    }
                }
            }
            row_off += rsize;
        }
        col_off += csize;
    }
    mat
}

/// Dimension of the degree-m graded piece of the kernel:
/// the nullity of the multiplication matrix.
pub fn graded_kernel_dim(map: &TwistedMap, m: i32) -> usize {
    let mat = graded_matrix(map, m);
    let cols = mat.cols;
    cols - mat.rank()
}

/// Dimension of the cokernel of the degree-m multiplication matrix. For a
/// sheaf-surjective map and m ≥ −min(a_i)−1 this equals h¹ of the twisted
/// kernel, Σ max(0, −e_i − m − 1).
pub fn h1_via_cokernel(map: &TwistedMap, m: i32) -> Result<usize> {
    let min_a = *map.source.iter().min().unwrap();
    if m < -min_a - 1 {
        return Err(Error::TwistTooNegative(format!(
            "twist {m} below the exactness threshold {}",
            -min_a - 1
        )));
    }
    let mat = graded_matrix(map, m);
    let rows = mat.rows;
    Ok(rows - mat.rank())
}

/// r×r minor of the entry matrix for the given column subset, by Laplace
/// expansion; fine at desk scale.
fn minor(map: &TwistedMap, cols: &[usize]) -> BinaryForm {
    fn expand(
        map: &TwistedMap,
        rows: &[usize],
        cols: &[usize],
    ) -> Option<BinaryForm> {
        // Returns None for "zero form" to dodge degree bookkeeping.
        if rows.len() == 1 {
            let g = map.entry(rows[0], cols[0]);
            return if g.is_zero() { None } else { Some(g.clone()) };
        }
        let mut acc: Option<BinaryForm> = None;
        for (t, &c) in cols.iter().enumerate() {
            let g = map.entry(rows[0], c);
            if g.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols
                .iter()
                .copied()
                .filter(|&x| x != c)
                .collect();
            let Some(sub) = expand(map, &rows[1..], &rest) else {
                continue;
            };
            let mut term = g.mul(&sub).unwrap();
            if t % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term).unwrap(),
            });
        }
        acc.filter(|a| !a.is_zero())
    }
    let rows: Vec<usize> = (0..map.rows()).collect();
    expand(map, &rows, cols).unwrap_or_else(|| BinaryForm::zero(&map.ctx, 0))
}

fn column_subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    rec(0, m, r, &mut cur, &mut out);
    out
}

/// Surjectivity of the sheaf map at every point of the line over the
/// algebraic closure: the maximal minors have no common zero, i.e. their
/// gcd is a nonzero constant. For a single target row the minors are just
/// the entries.
pub fn is_sheaf_surjective(map: &TwistedMap) -> Result<bool> {
    if map.is_zero() {
        return Err(Error::ZeroMap);
    }
    let r = map.rows();
    let forms: Vec<BinaryForm> = if r == 1 {
        map.entries[0].clone()
    } else {
        column_subsets(map.cols(), r)
            .into_iter()
            .map(|cols| minor(map, &cols))
            .collect()
    };
    let mut gcd: Option<BinaryForm> = None;
    for f in forms.into_iter().filter(|f| !f.is_zero()) {
        gcd = Some(match gcd {
            None => f,
            Some(g) => g.gcd(&f)?,
        });
        if let Some(g) = &gcd {
            if g.degree() == 0 {
                return Ok(true);
            }
        }
    }
    Ok(match gcd {
        None => false, // nonzero entries but all minors vanish
        Some(g) => g.degree() == 0,
    })
}

/// Splitting type (e_1 ≤ … ≤ e_k) of the kernel bundle of a sheaf-surjective
/// map, k = (number of sources) − (number of targets). The count of parts
/// with e_i ≥ −m is the first difference of m ↦ graded_kernel_dim, so the
/// multiplicities fall out of a scan from m = −max(a_i)−1 upward.
pub fn splitting_type(map: &TwistedMap) -> Result<SplittingType> {
    if !is_sheaf_surjective(map)? {
        return Err(Error::NotSurjective);
    }
    let k = map.kernel_rank();
    let want_sum: i64 = map.source.iter().map(|&a| a as i64).sum::<i64>()
        - map.target.iter().map(|&b| b as i64).sum::<i64>();
    if k == 0 {
        if want_sum != 0 {
            return Err(Error::InternalInconsistency(
                "square surjective map with nonzero degree defect".into(),
            ));
        }
        return Ok(SplittingType(Vec::new()));
    }
    let a_max = *map.source.iter().max().unwrap();
    let cap: i64 = map.source.iter().map(|&a| a.unsigned_abs() as i64).sum::<i64>()
        + map.target.iter().map(|&b| b.unsigned_abs() as i64).sum::<i64>()
        + k as i64
        + 2;

    let m_start = -a_max - 1;
    let mut prev_dim = graded_kernel_dim(map, m_start - 1) as i64;
    let mut prev_count = {
        let dim = graded_kernel_dim(map, m_start) as i64;
        let c = dim - prev_dim;
        prev_dim = dim;
        c
    };
    if prev_count != 0 {
        return Err(Error::InternalInconsistency(
            "kernel part above the largest source twist".into(),
        ));
    }
    let mut parts = Vec::with_capacity(k);
    let mut m = m_start;
    loop {
        m += 1;
        if m as i64 > cap {
            return Err(Error::InternalInconsistency(
                "splitting scan exceeded its degree window".into(),
            ));
        }
        let dim = graded_kernel_dim(map, m) as i64;
        let count = dim - prev_dim;
        if count < prev_count || count > k as i64 {
            return Err(Error::InternalInconsistency(
                "graded kernel jumps are not a valid multiplicity profile".into(),
            ));
        }
        for _ in 0..count - prev_count {
            parts.push(-m);
        }
        if count == k as i64 {
            break;
        }
        prev_dim = dim;
        prev_count = count;
    }
    parts.sort_unstable();
    let got_sum: i64 = parts.iter().map(|&e| e as i64).sum();
    if got_sum != want_sum {
        return Err(Error::InternalInconsistency(format!(
            "splitting degree {got_sum} disagrees with twist defect {want_sum}"
        )));
    }
    Ok(SplittingType(parts))
}
