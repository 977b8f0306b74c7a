//! Slow reference implementations used to cross-check fast paths in tests.
//!
//! Everything here favors the most direct possible computation over speed:
//! restriction is monomial-by-monomial with repeated multiplication, and
//! splitting types come from minimal syzygy generators degree by degree.
//! Keep these paths free of the optimizations they are meant to audit.

use crate::error::Error;
use crate::galois::Fq;
use crate::linalg::Matrix;
use crate::polyalg::{BinaryForm, LinearSubspace, MultiPoly};
use crate::Result;

/// Line restriction computed term by term with repeated binary-form
/// multiplication; no precomputed powers, no substitution machinery.
pub fn restrict_line_naive(f: &MultiPoly, line: &LinearSubspace) -> Result<BinaryForm> {
    if f.ctx() != line.ctx() {
        return Err(Error::ContextMismatch);
    }
    if line.dim() != 1 || line.ambient_dim() + 1 != f.nvars() {
        return Err(Error::DegenerateInput(
            "naive line restriction needs a line in the ambient of f".into(),
        ));
    }
    let ctx = f.ctx();
    let rows = line.basis_rows();
    let mut acc = BinaryForm::zero(ctx, f.degree());
    for (exps, c) in f.terms() {
        let mut term = BinaryForm::from_coeffs(ctx, vec![c]).unwrap();
        for (j, &e) in exps.iter().enumerate() {
            let lin = BinaryForm::linear(ctx, rows[0][j], rows[1][j]);
            term = term.mul(&lin.pow(e)).unwrap();
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Subspace restriction computed term by term; the parametrizing variables
/// are u_0..u_k.
pub fn restrict_naive(f: &MultiPoly, sub: &LinearSubspace) -> Result<MultiPoly> {
    if f.ctx() != sub.ctx() {
        return Err(Error::ContextMismatch);
    }
    if sub.ambient_dim() + 1 != f.nvars() {
        return Err(Error::DegenerateInput(
            "naive restriction needs a subspace in the ambient of f".into(),
        ));
    }
    let ctx = f.ctx();
    let rows = sub.basis_rows();
    let m = rows.len();
    let mut acc = MultiPoly::zero(ctx, m, f.degree());
    for (exps, c) in f.terms() {
        let mut term = MultiPoly::from_terms(ctx, m, 0, [(vec![0; m], c)])?;
        for (j, &e) in exps.iter().enumerate() {
            let lin = MultiPoly::from_terms(
                ctx,
                m,
                1,
                (0..m).map(|i| {
                    let mut ex = vec![0u32; m];
                    ex[i] = 1;
                    (ex, rows[i][j])
                }),
            )?;
            for _ in 0..e {
                term = term.mul(&lin)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Splitting type of the kernel of a one-row map ⊕O(a_i) → O(b) on the
/// projective line, computed from scratch: find minimal generators of the
/// syzygy module degree by degree. Returns the kernel twists sorted
/// ascending; their count is always (number of entries − 1).
pub fn syzygy_splitting(
    sources: &[i32],
    target: i32,
    entries: &[BinaryForm],
) -> Result<Vec<i32>> {
    if entries.is_empty() || entries.len() != sources.len() {
        return Err(Error::DegenerateInput(
            "need one entry per source twist".into(),
        ));
    }
    let ctx = entries[0].ctx().clone();
    for (g, &a) in entries.iter().zip(sources) {
        if target - a < 0 && !g.is_zero() {
            return Err(Error::DegenerateInput(
                "entry in a negative-degree slot must be zero".into(),
            ));
        }
        if !g.is_zero() && g.degree() as i32 != target - a {
            return Err(Error::DegreeMismatch(format!(
                "entry degree {} does not match twist difference {}",
                g.degree(),
                target - a
            )));
        }
    }
    if entries.iter().all(|g| g.is_zero()) {
        return Err(Error::ZeroMap);
    }

    let m = entries.len();
    let rank = m - 1;
    let a_max = *sources.iter().max().unwrap();
    let cap = sources.iter().map(|a| a.unsigned_abs() as i64).sum::<i64>()
        + target.unsigned_abs() as i64
        + m as i64
        + 2;
    let mut twists = Vec::new();
    let mut prev_basis: Vec<Vec<Fq>> = Vec::new();
    let mut t = -a_max;
    loop {
        if t as i64 > cap {
            return Err(Error::InternalInconsistency(
                "syzygy generator search exceeded its degree cap".into(),
            ));
        }
        let basis = syzygy_space(&ctx, sources, target, entries, t);
        let shifted = shift_up(sources, t - 1, &prev_basis);
        let old_rank = Matrix::row_span_rank(&ctx, &shifted);
        for _ in 0..basis.len() - old_rank {
            twists.push(-t);
        }
        if twists.len() > rank {
            return Err(Error::InternalInconsistency(
                "more syzygy generators than the kernel rank".into(),
            ));
        }
        if twists.len() == rank {
            twists.sort_unstable();
            return Ok(twists);
        }
        prev_basis = basis;
        t += 1;
    }
}

/// Coefficient layout for a degree-t syzygy candidate: the coefficients of
/// v_i (degree t + a_i, skipped when negative) concatenated in order.
fn slot_sizes(sources: &[i32], t: i32) -> Vec<usize> {
    sources
        .iter()
        .map(|&a| if t + a < 0 { 0 } else { (t + a + 1) as usize })
        .collect()
}

/// Basis of {(v_1..v_m) : Σ v_i g_i = 0} in degree t.
fn syzygy_space(
    ctx: &crate::galois::FieldCtx,
    sources: &[i32],
    target: i32,
    entries: &[BinaryForm],
    t: i32,
) -> Vec<Vec<Fq>> {
    let sizes = slot_sizes(sources, t);
    let cols: usize = sizes.iter().sum();
    if cols == 0 {
        return Vec::new();
    }
    let out_dim = (t + target + 1).max(0) as usize;
    let mut m = Matrix::zero(ctx, out_dim, cols);
    let mut col = 0;
    for (i, g) in entries.iter().enumerate() {
        for j in 0..sizes[i] {
            if !g.is_zero() {
                for l in 0..=g.degree() as usize {
                    let v = g.coeff(l as u32);
                    if !v.is_zero() {
                        m.set(j + l, col, ctx.add(m.get(j + l, col), v));
                    }
                }
            }
            col += 1;
        }
    }
    m.kernel_basis()
}

/// Images of s*v and t*v for each v in a degree-(t) basis, written in the
/// degree-(t+1) coefficient layout.
fn shift_up(
    sources: &[i32],
    t: i32,
    basis: &[Vec<Fq>],
) -> Vec<Vec<Fq>> {
    let old_sizes = slot_sizes(sources, t);
    let new_sizes = slot_sizes(sources, t + 1);
    let new_cols: usize = new_sizes.iter().sum();
    let mut out = Vec::with_capacity(2 * basis.len());
    for v in basis {
        // multiplication by s keeps the t-exponent, by t shifts it up one
        let mut by_s = vec![Fq::ZERO; new_cols];
        let mut by_t = vec![Fq::ZERO; new_cols];
        let mut old_off = 0;
        let mut new_off = 0;
        for i in 0..sources.len() {
            for j in 0..old_sizes[i] {
                let c = v[old_off + j];
                by_s[new_off + j] = c;
                by_t[new_off + j + 1] = c;
            }
            old_off += old_sizes[i];
            new_off += new_sizes[i];
        }
        out.push(by_s);
        out.push(by_t);
    }
    out
}
