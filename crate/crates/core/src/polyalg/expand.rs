//! Expansions of a form around a point or a coordinate flag, with the
//! coordinate changes needed to transport data back.

use crate::error::Error;
use crate::galois::{FieldCtx, Fq};
use crate::linalg::Matrix;
use crate::polyalg::multipoly::MultiPoly;
use crate::polyalg::subspace::LinearSubspace;
use crate::Result;
use std::collections::BTreeMap;

/// Invertible change of projective coordinates. Row i of the matrix is the
/// i-th new basis vector written in the old coordinates, so old = new * B.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    b: Matrix,
    b_inv: Matrix,
}

impl CoordinateChange {
    pub fn from_rows(ctx: &FieldCtx, rows: &[Vec<Fq>]) -> Result<Self> {
        let b = Matrix::from_rows(ctx, rows);
        if b.rows != b.cols {
            return Err(Error::DegenerateInput(
                "coordinate change must be square".into(),
            ));
        }
        let Some(b_inv) = b.inverse() else {
            return Err(Error::DegenerateInput(
                "coordinate change is singular".into(),
            ));
        };
        Ok(CoordinateChange { b, b_inv })
    }

    pub fn identity(ctx: &FieldCtx, size: usize) -> Self {
        let id = Matrix::identity(ctx, size);
        CoordinateChange {
            b: id.clone(),
            b_inv: id,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.b
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.b_inv
    }

    fn rows_of(m: &Matrix) -> Vec<Vec<Fq>> {
        (0..m.rows).map(|i| m.row(i).to_vec()).collect()
    }

    /// Rewrite `f` in the new coordinates: (transport f)(y) = f(y * B).
    pub fn transport(&self, f: &MultiPoly) -> Result<MultiPoly> {
        f.substitute(&Self::rows_of(&self.b))
    }

    /// Undo `transport`.
    pub fn restore(&self, g: &MultiPoly) -> Result<MultiPoly> {
        g.substitute(&Self::rows_of(&self.b_inv))
    }

    pub fn point_to_new(&self, x: &[Fq]) -> Vec<Fq> {
        row_times(self.b.ctx(), x, &self.b_inv)
    }

    pub fn point_to_old(&self, y: &[Fq]) -> Vec<Fq> {
        row_times(self.b.ctx(), y, &self.b)
    }
}

fn row_times(ctx: &FieldCtx, v: &[Fq], m: &Matrix) -> Vec<Fq> {
    assert_eq!(v.len(), m.rows, "shape mismatch");
    (0..m.cols)
        .map(|j| {
            let mut acc = ctx.zero();
            for (i, &vi) in v.iter().enumerate() {
                acc = ctx.add(acc, ctx.mul(vi, m.get(i, j)));
            }
            acc
        })
        .collect()
}

/// Expansion of a degree-d form around a point q of its zero locus, relative
/// to a line through q. After the coordinate change (q at (1:0:...:0), the
/// line at V(x_2..x_n)) the form reads
///     x_0^(d-1) f_1 + x_0^(d-2) f_2 + ... + f_d
/// with f_i homogeneous of degree i in x_1..x_n; `pieces[i-1]` is f_i in
/// those n variables. `linear_parts[i-1]` is the linear part of f_i at the
/// second frame point (1, 0, ..., 0) of the shifted variables.
#[derive(Debug, Clone)]
pub struct PointExpansion {
    pub pieces: Vec<MultiPoly>,
    pub linear_parts: Vec<Vec<Fq>>,
    pub change: CoordinateChange,
}

impl PointExpansion {
    /// Rebuild x_0^(d-1) f_1 + ... + f_d in the full variable set (still in
    /// the expansion coordinates; apply `change.restore` to get the original
    /// form back).
    pub fn reassemble(&self) -> MultiPoly {
        let d = self.pieces.len() as u32;
        let ctx = self.pieces[0].ctx().clone();
        let n = self.pieces[0].nvars();
        let mut terms: Vec<(Vec<u32>, Fq)> = Vec::new();
        for (idx, piece) in self.pieces.iter().enumerate() {
            let i = idx as u32 + 1;
            for (exps, c) in piece.terms() {
                let mut full = Vec::with_capacity(n + 1);
                full.push(d - i);
                full.extend_from_slice(exps);
                terms.push((full, c));
            }
        }
        MultiPoly::from_terms(&ctx, n + 1, d, terms).unwrap()
    }
}

pub fn expand_around_point(
    f: &MultiPoly,
    q: &[Fq],
    line: &LinearSubspace,
) -> Result<PointExpansion> {
    let ctx = f.ctx();
    if ctx != line.ctx() {
        return Err(Error::ContextMismatch);
    }
    if f.degree() == 0 {
        return Err(Error::DegenerateInput("cannot expand a constant".into()));
    }
    let n = f.nvars() - 1;
    if line.ambient_dim() != n || q.len() != n + 1 {
        return Err(Error::DegenerateInput(
            "point, line and form must share an ambient space".into(),
        ));
    }
    if line.dim() != 1 {
        return Err(Error::DegenerateInput("expansion frame needs a line".into()));
    }
    let q = LinearSubspace::normalize_point(ctx, q)?;
    if !f.eval(&q)?.is_zero() {
        return Err(Error::PointNotOnHypersurface);
    }
    if !line.contains_point(&q) {
        return Err(Error::PointNotOnLine);
    }

    // Frame: q, a spanning partner on the line, then standard basis vectors
    // at the line's non-pivot columns.
    let pivots = line.pivots();
    let partner = if q[pivots[0]].is_zero() {
        line.basis_rows()[0].clone()
    } else {
        line.basis_rows()[1].clone()
    };
    let mut rows = vec![q.clone(), partner];
    for j in 0..=n {
        if !pivots.contains(&j) {
            let mut e = vec![Fq::ZERO; n + 1];
            e[j] = ctx.one();
            rows.push(e);
        }
    }
    let change = CoordinateChange::from_rows(ctx, &rows)?;
    let g = change.transport(f)?;

    let d = f.degree();
    let mut buckets: Vec<Vec<(Vec<u32>, Fq)>> = vec![Vec::new(); d as usize];
    for (exps, c) in g.terms() {
        let i = d - exps[0];
        debug_assert!(i >= 1, "constant-in-x_0 term survived a vanishing point");
        buckets[i as usize - 1].push((exps[1..].to_vec(), c));
    }
    let mut pieces = Vec::with_capacity(d as usize);
    for (idx, bucket) in buckets.into_iter().enumerate() {
        pieces.push(MultiPoly::from_terms(ctx, n, idx as u32 + 1, bucket)?);
    }
    let mut anchor = vec![Fq::ZERO; n];
    anchor[0] = ctx.one();
    let linear_parts = pieces
        .iter()
        .map(|p| p.linear_part_at(&anchor))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointExpansion {
        pieces,
        linear_parts,
        change,
    })
}

/// Sorted multiset of variable indices; the exponent pattern x^I.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultisetIndex(Vec<u32>);

impl MultisetIndex {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        MultisetIndex(indices)
    }

    pub fn empty() -> Self {
        MultisetIndex(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exponent vector of x^I in an ambient with `nvars` variables.
    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        let mut e = vec![0u32; nvars];
        for &i in &self.0 {
            e[i as usize] += 1;
        }
        e
    }
}

/// Expansion of a form around the coordinate flag
/// V(x_k..x_n) ⊂ V(x_{k+1}..x_n): f = Σ_I c_I x^I over multisets I of size
/// ≤ d−1 from {0..k−1}, with c_I homogeneous of degree d−|I| in x_k..x_n.
/// Carriers keep the full variable set (exponents of x_0..x_{k-1} are zero).
/// `linear_part` of a carrier is taken at the flag point e_k.
#[derive(Debug, Clone)]
pub struct SubspaceExpansion {
    k: usize,
    degree: u32,
    terms: BTreeMap<MultisetIndex, (MultiPoly, Vec<Fq>)>,
    phi_on_hypersurface: bool,
}

impl SubspaceExpansion {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the bigger flag plane V(x_{k+1}..x_n) also lies on the
    /// hypersurface. The linear parts are the expansion data of the flag
    /// only when this holds; the decomposition itself is valid regardless.
    pub fn phi_on_hypersurface(&self) -> bool {
        self.phi_on_hypersurface
    }

    pub fn carrier(&self, i: &MultisetIndex) -> Option<&MultiPoly> {
        self.terms.get(i).map(|(c, _)| c)
    }

    pub fn linear_part(&self, i: &MultisetIndex) -> Option<&[Fq]> {
        self.terms.get(i).map(|(_, l)| l.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultisetIndex, &MultiPoly, &[Fq])> {
        self.terms.iter().map(|(i, (c, l))| (i, c, l.as_slice()))
    }

    /// Σ c_I x^I.
    pub fn reassemble(&self) -> MultiPoly {
        let (_, (sample, _)) = self.terms.iter().next().expect("nonempty index set");
        let ctx = sample.ctx().clone();
        let nvars = sample.nvars();
        let mut acc = MultiPoly::zero(&ctx, nvars, self.degree);
        for (i, (c, _)) in &self.terms {
            let shifted = c.mul_monomial(&i.exponents(nvars), ctx.one());
            acc = acc.add(&shifted).unwrap();
        }
        acc
    }
}

/// All multisets from {0..k-1} of size 0..=max, in lexicographic order.
fn multisets_up_to(k: usize, max: u32) -> Vec<MultisetIndex> {
    let mut out = vec![MultisetIndex::empty()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for base in &frontier {
            let lo = base.last().copied().unwrap_or(0);
            for i in lo..k as u32 {
                let mut m = base.clone();
                m.push(i);
                next.push(m);
            }
        }
        out.extend(next.iter().cloned().map(MultisetIndex));
        frontier = next;
    }
    out.sort();
    out
}

pub fn expand_around_subspace(
    f: &MultiPoly,
    lambda: &LinearSubspace,
    phi: &LinearSubspace,
) -> Result<SubspaceExpansion> {
    let ctx = f.ctx();
    if ctx != lambda.ctx() || ctx != phi.ctx() {
        return Err(Error::ContextMismatch);
    }
    if f.degree() == 0 {
        return Err(Error::DegenerateInput("cannot expand a constant".into()));
    }
    let n = f.nvars() - 1;
    if lambda.ambient_dim() != n || phi.ambient_dim() != n {
        return Err(Error::DegenerateInput(
            "flag and form must share an ambient space".into(),
        ));
    }
    if phi.dim() != lambda.dim() + 1 {
        return Err(Error::DegenerateInput(
            "flag planes must have consecutive dimensions".into(),
        ));
    }
    let k = phi.dim();
    if *lambda != LinearSubspace::coordinate_plane(ctx, k - 1, n)
        || *phi != LinearSubspace::coordinate_plane(ctx, k, n)
    {
        return Err(Error::DegenerateInput(
            "expansion expects the coordinate flag V(x_k..x_n) ⊂ V(x_{k+1}..x_n); \
             normalize with normalizing_change first"
                .into(),
        ));
    }
    let d = f.degree();

    let mut buckets: BTreeMap<MultisetIndex, Vec<(Vec<u32>, Fq)>> = BTreeMap::new();
    let mut phi_on = true;
    for (exps, c) in f.terms() {
        let small: u32 = exps[..k].iter().sum();
        if small == d {
            return Err(Error::InclusionViolated(
                "the smaller flag plane is not on the hypersurface".into(),
            ));
        }
        if exps[k + 1..].iter().all(|&e| e == 0) {
            phi_on = false;
        }
        let mut index = Vec::with_capacity(small as usize);
        for (i, &e) in exps[..k].iter().enumerate() {
            index.extend(std::iter::repeat_n(i as u32, e as usize));
        }
        let mut carrier_exps = exps.clone();
        carrier_exps[..k].fill(0);
        buckets
            .entry(MultisetIndex(index))
            .or_default()
            .push((carrier_exps, c));
    }

    let mut anchor = vec![Fq::ZERO; n + 1];
    anchor[k] = ctx.one();
    let mut terms = BTreeMap::new();
    for i in multisets_up_to(k, d - 1) {
        let bucket = buckets.remove(&i).unwrap_or_default();
        let carrier = MultiPoly::from_terms(ctx, n + 1, d - i.len() as u32, bucket)?;
        let lp = carrier.linear_part_at(&anchor)?;
        terms.insert(i, (carrier, lp));
    }
    debug_assert!(buckets.is_empty(), "index outside the multiset range");
    Ok(SubspaceExpansion {
        k,
        degree: d,
        terms,
        phi_on_hypersurface: phi_on,
    })
}

/// Coordinate change taking a nested pair inner ⊂ outer (dims k-1 and k) to
/// the coordinate flag V(x_k..x_n) ⊂ V(x_{k+1}..x_n): rows are the inner
/// basis, one outer row off the inner plane, then standard basis vectors at
/// the outer non-pivot columns.
pub fn normalizing_change(
    inner: &LinearSubspace,
    outer: &LinearSubspace,
) -> Result<CoordinateChange> {
    let ctx = inner.ctx();
    if ctx != outer.ctx() {
        return Err(Error::ContextMismatch);
    }
    if outer.dim() != inner.dim() + 1 || outer.ambient_dim() != inner.ambient_dim() {
        return Err(Error::DegenerateInput(
            "flag planes must be nested with consecutive dimensions".into(),
        ));
    }
    if !outer.contains_subspace(inner) {
        return Err(Error::InclusionViolated(
            "smaller flag plane not inside the bigger one".into(),
        ));
    }
    let n = inner.ambient_dim();
    let mut rows = inner.basis_rows().to_vec();
    let extra = outer
        .basis_rows()
        .iter()
        .find(|r| !inner.contains_point(r))
        .expect("outer strictly contains inner");
    rows.push(extra.clone());
    for j in 0..=n {
        if !outer.pivots().contains(&j) {
            let mut e = vec![Fq::ZERO; n + 1];
            e[j] = ctx.one();
            rows.push(e);
        }
    }
    CoordinateChange::from_rows(ctx, &rows)
}

/// Coordinate change whose first dim+1 rows are the canonical basis of the
/// subspace, so that transporting a form moves the subspace to the
/// coordinate plane of the same dimension.
pub fn straightening_change(sub: &LinearSubspace) -> Result<CoordinateChange> {
    let ctx = sub.ctx();
    let n = sub.ambient_dim();
    let mut rows = sub.basis_rows().to_vec();
    for j in 0..=n {
        if !sub.pivots().contains(&j) {
            let mut e = vec![Fq::ZERO; n + 1];
            e[j] = ctx.one();
            rows.push(e);
        }
    }
    CoordinateChange::from_rows(ctx, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use crate::rng::Rng;

    fn mono(ctx: &FieldCtx, exps: &[u32], c: i64) -> MultiPoly {
        MultiPoly::monomial(ctx, exps.to_vec(), ctx.from_int(c)).unwrap()
    }

    #[test]
    fn point_expansion_of_prepared_form() {
        // f = x_0^2 x_1 around (1:0:0:0) along V(x_2,x_3).
        let f5 = make_field(5, 1).unwrap();
        let f = mono(&f5, &[2, 1, 0, 0], 1);
        let line = LinearSubspace::coordinate_plane(&f5, 1, 3);
        let q = vec![f5.one(), f5.zero(), f5.zero(), f5.zero()];
        let ex = expand_around_point(&f, &q, &line).unwrap();
        assert_eq!(ex.pieces.len(), 3);
        assert_eq!(ex.pieces[0], mono(&f5, &[1, 0, 0], 1));
        assert!(ex.pieces[1].is_zero());
        assert!(ex.pieces[2].is_zero());
        assert_eq!(ex.linear_parts[0], vec![f5.one(), f5.zero(), f5.zero()]);
        assert!(ex.linear_parts[1].iter().all(|c| c.is_zero()));
        assert!(ex.linear_parts[2].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn hyperplane_has_a_single_piece() {
        let f7 = make_field(7, 1).unwrap();
        // f = x_0 - x_1, q = (1:1:0) on the line V(x_2).
        let f = mono(&f7, &[1, 0, 0], 1)
            .add(&mono(&f7, &[0, 1, 0], -1))
            .unwrap();
        let line = LinearSubspace::coordinate_plane(&f7, 1, 2);
        let q = vec![f7.one(), f7.one(), f7.zero()];
        let ex = expand_around_point(&f, &q, &line).unwrap();
        assert_eq!(ex.pieces.len(), 1);
        assert_eq!(ex.pieces[0].degree(), 1);
        let back = ex.change.restore(&ex.reassemble()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn point_expansion_round_trip_and_frame() {
        let f9 = make_field(3, 2).unwrap();
        let rng = Rng::new(41);
        let n = 3;
        for trial in 0..10u64 {
            let mut rng = rng.split(trial);
            // Build f vanishing on V(x_2,x_3): every monomial divisible by
            // x_2 or x_3.
            let mut f = MultiPoly::zero(&f9, n + 1, 3);
            for exps in crate::polyalg::monomials_of_degree(n + 1, 3) {
                if exps[2] == 0 && exps[3] == 0 {
                    continue;
                }
                let c = f9.rand(&mut rng);
                if c.is_zero() {
                    continue;
                }
                f = f
                    .add(&MultiPoly::monomial(&f9, exps, c).unwrap())
                    .unwrap();
            }
            if f.is_zero() {
                continue;
            }
            // Move everything by a random invertible change so the line is
            // in general position.
            let m = loop {
                let rows: Vec<Vec<Fq>> = (0..=n)
                    .map(|_| (0..=n).map(|_| f9.rand(&mut rng)).collect())
                    .collect();
                if let Ok(ch) = CoordinateChange::from_rows(&f9, &rows) {
                    break ch;
                }
            };
            let g = m.transport(&f).unwrap();
            let line0 = LinearSubspace::coordinate_plane(&f9, 1, n);
            let line = line0.transform(m.inverse_matrix()).unwrap();
            let q = line.random_point(&mut rng);
            assert!(g.eval(&q).unwrap().is_zero());

            let ex = expand_around_point(&g, &q, &line).unwrap();
            // The frame sends q to the first coordinate point.
            let q_new = ex.change.point_to_new(&q);
            let q_new = LinearSubspace::normalize_point(&f9, &q_new).unwrap();
            assert_eq!(q_new[0], f9.one());
            assert!(q_new[1..].iter().all(|c| c.is_zero()));
            // Reassembling and undoing the frame recovers g exactly.
            let back = ex.change.restore(&ex.reassemble()).unwrap();
            assert_eq!(back, g);
        }
    }

    #[test]
    fn linear_parts_vanish_for_frobenius_power_forms() {
        // Every exponent divisible by p = 3 kills all first derivatives.
        let f9 = make_field(3, 2).unwrap();
        let mut rng = Rng::new(5);
        let f = mono(&f9, &[3, 0, 0], 1)
            .add(&mono(&f9, &[0, 3, 0], 2))
            .unwrap()
            .add(&mono(&f9, &[0, 0, 3], 1))
            .unwrap();
        for _ in 0..10 {
            let a: Vec<Fq> = (0..3).map(|_| f9.rand(&mut rng)).collect();
            if a.iter().all(|c| c.is_zero()) {
                continue;
            }
            let lp = f.linear_part_at(&a).unwrap();
            assert!(lp.iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn point_expansion_rejects_bad_anchors() {
        let f5 = make_field(5, 1).unwrap();
        let f = mono(&f5, &[2, 1, 0], 1); // x_0^2 x_1
        let line = LinearSubspace::coordinate_plane(&f5, 1, 2);
        // (1:1:0) is on the line but not on V(f).
        let off_surface = vec![f5.one(), f5.one(), f5.zero()];
        assert_eq!(
            expand_around_point(&f, &off_surface, &line).unwrap_err(),
            Error::PointNotOnHypersurface
        );
        // (0:0:1) is on V(f) but off the line.
        let off_line = vec![f5.zero(), f5.zero(), f5.one()];
        assert_eq!(
            expand_around_point(&f, &off_line, &line).unwrap_err(),
            Error::PointNotOnLine
        );
    }

    #[test]
    fn subspace_expansion_of_triple_product() {
        // f = x_0 x_1 x_2 in P^3, flag V(x_2,x_3) ⊂ V(x_3).
        let f5 = make_field(5, 1).unwrap();
        let f = mono(&f5, &[1, 1, 1, 0], 1);
        let lambda = LinearSubspace::coordinate_plane(&f5, 1, 3);
        let phi = LinearSubspace::coordinate_plane(&f5, 2, 3);
        let ex = expand_around_subspace(&f, &lambda, &phi).unwrap();
        // Independent check first: the reported carriers must reassemble to
        // f monomial by monomial.
        let mut rebuilt = MultiPoly::zero(&f5, 4, 3);
        for (i, c, _) in ex.iter() {
            rebuilt = rebuilt.add(&c.mul_monomial(&i.exponents(4), f5.one())).unwrap();
        }
        assert_eq!(rebuilt, f);
        assert_eq!(ex.reassemble(), f);

        // Frozen shape: T = multisets of size ≤ 2 from {0,1}, six of them.
        assert_eq!(ex.len(), 6);
        let key = MultisetIndex::new(vec![0, 1]);
        assert_eq!(ex.carrier(&key).unwrap(), &mono(&f5, &[0, 0, 1, 0], 1));
        assert_eq!(
            ex.linear_part(&key).unwrap(),
            &[f5.zero(), f5.zero(), f5.one(), f5.zero()][..]
        );
        for (i, c, _) in ex.iter() {
            if *i != key {
                assert!(c.is_zero(), "only c_{{0,1}} survives for x_0x_1x_2");
            }
        }
        // The bigger plane V(x_3) is not on V(f): x_0x_1x_2 survives there.
        assert!(!ex.phi_on_hypersurface());
    }

    #[test]
    fn subspace_expansion_size_matches_multiset_count() {
        // Number of multisets of size ≤ d−1 from k symbols.
        let f3 = make_field(3, 1).unwrap();
        // k = 2, d = 3 in P^3: 1 + 2 + 3 = 6.
        let f = mono(&f3, &[2, 0, 1, 0], 1)
            .add(&mono(&f3, &[0, 0, 3, 0], 1))
            .unwrap()
            .add(&mono(&f3, &[1, 1, 0, 1], 1))
            .unwrap();
        let lambda = LinearSubspace::coordinate_plane(&f3, 1, 3);
        let phi = LinearSubspace::coordinate_plane(&f3, 2, 3);
        let ex = expand_around_subspace(&f, &lambda, &phi).unwrap();
        assert_eq!(ex.len(), 6);
        // k = 3, d = 3 in P^4: 1 + 3 + 6 = 10.
        let g = mono(&f3, &[2, 0, 0, 1, 0], 1)
            .add(&mono(&f3, &[0, 1, 1, 0, 1], 1))
            .unwrap();
        let lambda = LinearSubspace::coordinate_plane(&f3, 2, 4);
        let phi = LinearSubspace::coordinate_plane(&f3, 3, 4);
        let ex = expand_around_subspace(&g, &lambda, &phi).unwrap();
        assert_eq!(ex.len(), 10);
    }

    #[test]
    fn subspace_expansion_agrees_with_point_expansion_for_lines() {
        // k = 1: the multiset {0}^j carrier is the piece f_{d-j}.
        let f7 = make_field(7, 1).unwrap();
        let mut rng = Rng::new(17);
        let n = 3;
        let mut f = MultiPoly::zero(&f7, n + 1, 3);
        for exps in crate::polyalg::monomials_of_degree(n + 1, 3) {
            if exps[1] == 0 && exps[2] == 0 && exps[3] == 0 {
                continue; // keep the point e_0 on V(f)
            }
            f = f
                .add(&MultiPoly::monomial(&f7, exps, f7.rand(&mut rng)).unwrap())
                .unwrap();
        }
        let lambda = LinearSubspace::coordinate_plane(&f7, 0, n);
        let phi = LinearSubspace::coordinate_plane(&f7, 1, n);
        let sub = expand_around_subspace(&f, &lambda, &phi).unwrap();

        let q = vec![f7.one(), f7.zero(), f7.zero(), f7.zero()];
        let pt = expand_around_point(&f, &q, &phi).unwrap();

        for j in 0..3u32 {
            let i = MultisetIndex::new(vec![0; j as usize]);
            let carrier = sub.carrier(&i).unwrap();
            let piece = &pt.pieces[(3 - j) as usize - 1]; // f_{d-j}, shifted vars
            assert_eq!(carrier.num_terms(), piece.num_terms());
            for (exps, c) in piece.terms() {
                let mut full = vec![0u32];
                full.extend_from_slice(exps);
                assert_eq!(carrier.coefficient(&full), c);
            }
            // Linear parts agree up to the variable shift.
            let lp_sub = sub.linear_part(&i).unwrap();
            assert!(lp_sub[0].is_zero());
            assert_eq!(&lp_sub[1..], &pt.linear_parts[(3 - j) as usize - 1][..]);
        }
    }

    #[test]
    fn subspace_expansion_flags_and_rejections() {
        let f5 = make_field(5, 1).unwrap();
        let lambda = LinearSubspace::coordinate_plane(&f5, 1, 3);
        let phi = LinearSubspace::coordinate_plane(&f5, 2, 3);
        // Λ not inside V(f): f has the pure small monomial x_0^2 x_1.
        let bad = mono(&f5, &[2, 1, 0, 0], 1);
        assert!(matches!(
            expand_around_subspace(&bad, &lambda, &phi).unwrap_err(),
            Error::InclusionViolated(_)
        ));
        // Every monomial divisible by x_3 puts the whole flag on V(f), and
        // then the linear parts match the explicit coefficient rule.
        let good = mono(&f5, &[2, 0, 0, 1], 1)
            .add(&mono(&f5, &[0, 1, 1, 1], 3))
            .unwrap()
            .add(&mono(&f5, &[0, 0, 0, 3], 1))
            .unwrap();
        let ex = expand_around_subspace(&good, &lambda, &phi).unwrap();
        assert!(ex.phi_on_hypersurface());
        for (i, _, lp) in ex.iter() {
            assert!(lp[2].is_zero(), "no x_k component when the k-plane is on V(f)");
            let d1 = 3 - i.len() as u32 - 1; // d - |I| - 1 copies of x_k
            for j in 3..4usize {
                let mut exps = i.exponents(4);
                exps[2] += d1;
                exps[j] += 1;
                assert_eq!(lp[j], good.coefficient(&exps));
            }
        }
        // Non-normalized flag input is refused.
        let skew = LinearSubspace::from_spanning_rows(
            &f5,
            &[
                vec![f5.one(), f5.one(), f5.zero(), f5.zero()],
                vec![f5.zero(), f5.zero(), f5.one(), f5.one()],
            ],
        )
        .unwrap();
        assert!(matches!(
            expand_around_subspace(&good, &skew, &phi).unwrap_err(),
            Error::DegenerateInput(_)
        ));
    }

    #[test]
    fn normalizing_change_straightens_a_random_flag() {
        let f4 = make_field(2, 2).unwrap();
        let rng = Rng::new(23);
        for trial in 0..5u64 {
            let mut rng = rng.split(trial);
            let outer = LinearSubspace::random(&f4, 2, 4, &mut rng);
            let inner = LinearSubspace::from_spanning_rows(
                &f4,
                &outer.basis_rows()[..2],
            )
            .unwrap();
            let ch = normalizing_change(&inner, &outer).unwrap();
            let inner_new = inner.transform(ch.inverse_matrix()).unwrap();
            let outer_new = outer.transform(ch.inverse_matrix()).unwrap();
            assert_eq!(inner_new, LinearSubspace::coordinate_plane(&f4, 1, 4));
            assert_eq!(outer_new, LinearSubspace::coordinate_plane(&f4, 2, 4));
        }
        // Non-nested pair is refused.
        let a = LinearSubspace::coordinate_plane(&f4, 0, 4);
        let rows = vec![
            vec![f4.zero(), f4.one(), f4.zero(), f4.zero(), f4.zero()],
            vec![f4.zero(), f4.zero(), f4.one(), f4.zero(), f4.zero()],
        ];
        let b = LinearSubspace::from_spanning_rows(&f4, &rows).unwrap();
        assert!(matches!(
            normalizing_change(&a, &b).unwrap_err(),
            Error::InclusionViolated(_)
        ));
    }
}
