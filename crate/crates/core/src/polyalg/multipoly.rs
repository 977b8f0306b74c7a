//! Sparse homogeneous multivariate polynomials.
//!
//! A [`MultiPoly`] is a map from exponent vectors to nonzero coefficients.
//! Homogeneity is part of the contract: every term's exponents sum to the
//! declared degree, and the zero polynomial keeps an explicit degree so
//! arithmetic stays well typed. Iteration order over terms is the BTreeMap
//! order on exponent vectors, which keeps every downstream report
//! deterministic.

use crate::error::Error;
use crate::galois::{Embedding, FieldCtx, Fq};
use crate::Result;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, Fq>,
    ctx: FieldCtx,
}

impl MultiPoly {
    pub fn zero(ctx: &FieldCtx, nvars: usize, degree: u32) -> Self {
        MultiPoly {
            nvars,
            degree,
            terms: BTreeMap::new(),
            ctx: ctx.clone(),
        }
    }

    /// Build from (exponent vector, coefficient) pairs; duplicates accumulate.
    pub fn from_terms<I>(ctx: &FieldCtx, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Fq)>,
    {
        let mut out = MultiPoly::zero(ctx, nvars, degree);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ValidationError(format!(
                    "exponent vector of length {} in {} variables",
                    exps.len(),
                    nvars
                )));
            }
            let total: u32 = exps.iter().sum();
            if total != degree {
                return Err(Error::ValidationError(format!(
                    "term of degree {total} in a form of degree {degree}"
                )));
            }
            out.accumulate(exps, c);
        }
        Ok(out)
    }

    pub fn monomial(ctx: &FieldCtx, exps: Vec<u32>, c: Fq) -> Result<Self> {
        let degree = exps.iter().sum();
        MultiPoly::from_terms(ctx, exps.len(), degree, [(exps, c)])
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: Fq) {
        if c.is_zero() {
            return;
        }
        let ctx = self.ctx.clone();
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ctx.add(*e.get(), c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, Fq)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> Fq {
        self.terms.get(exps).copied().unwrap_or(Fq::ZERO)
    }

    fn compat(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DegreeMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "degree {} + degree {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.accumulate(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ctx.neg(*c);
        }
        out
    }

    pub fn scale(&self, c: Fq) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx, self.nvars, self.degree);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ctx.mul(*v, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = MultiPoly::zero(&self.ctx, self.nvars, self.degree + other.degree);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.accumulate(exps, self.ctx.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Multiply by the monomial c * x^exps.
    pub fn mul_monomial(&self, exps: &[u32], c: Fq) -> Self {
        let extra: u32 = exps.iter().sum();
        let mut out = MultiPoly::zero(&self.ctx, self.nvars, self.degree + extra);
        for (e, v) in self.terms() {
            let ne: Vec<u32> = e.iter().zip(exps).map(|(x, y)| x + y).collect();
            out.accumulate(ne, self.ctx.mul(v, c));
        }
        out
    }

    pub fn eval(&self, point: &[Fq]) -> Result<Fq> {
        if point.len() != self.nvars {
            return Err(Error::ValidationError(format!(
                "point of length {} in {} variables",
                point.len(),
                self.nvars
            )));
        }
        let ctx = &self.ctx;
        let mut acc = ctx.zero();
        for (exps, c) in self.terms() {
            let mut term = c;
            for (j, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = ctx.mul(term, ctx.pow(point[j], e as u64));
                }
            }
            acc = ctx.add(acc, term);
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> Self {
        let ctx = &self.ctx;
        let deg = self.degree.saturating_sub(1);
        let mut out = MultiPoly::zero(ctx, self.nvars, deg);
        for (exps, c) in self.terms() {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let factor = ctx.from_int(e as i64);
            let nc = ctx.mul(c, factor);
            if nc.is_zero() {
                continue;
            }
            let mut ne = exps.clone();
            ne[var] -= 1;
            out.accumulate(ne, nc);
        }
        out
    }

    /// The linear form sum_j (df/dx_j)(a) x_j, as a dense coefficient vector.
    pub fn linear_part_at(&self, point: &[Fq]) -> Result<Vec<Fq>> {
        (0..self.nvars)
            .map(|j| self.partial(j).eval(point))
            .collect()
    }

    /// Substitute x_j = sum_i rows[i][j] u_i, producing a form in
    /// `rows.len()` variables. Rows are indexed by the new variables.
    pub fn substitute(&self, rows: &[Vec<Fq>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::DegenerateInput("substitution with no rows".into()));
        }
        for r in rows {
            if r.len() != self.nvars {
                return Err(Error::ValidationError(format!(
                    "substitution row of length {} in {} variables",
                    r.len(),
                    self.nvars
                )));
            }
        }
        let ctx = &self.ctx;
        // Linear form for each original variable, with lazily grown powers.
        let lf: Vec<MultiPoly> = (0..self.nvars)
            .map(|j| {
                let mut p = MultiPoly::zero(ctx, m, 1);
                for (i, row) in rows.iter().enumerate() {
                    let mut e = vec![0u32; m];
                    e[i] = 1;
                    p.accumulate(e, row[j]);
                }
                p
            })
            .collect();
        let unit = MultiPoly::from_terms(ctx, m, 0, [(vec![0u32; m], ctx.one())])?;
        let mut powers: Vec<Vec<MultiPoly>> = (0..self.nvars).map(|_| vec![unit.clone()]).collect();
        let mut acc = MultiPoly::zero(ctx, m, self.degree);
        for (exps, c) in self.terms() {
            let mut term = unit.scale(c);
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul(&lf[j])?;
                    powers[j].push(next);
                }
                term = term.mul(&powers[j][e as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Restriction to the coordinate subspace spanned by the first `m`
    /// variables: drops every term involving a later variable.
    pub fn truncate_to_first_vars(&self, m: usize) -> Self {
        let mut out = MultiPoly::zero(&self.ctx, m, self.degree);
        for (exps, c) in self.terms() {
            if exps[m..].iter().all(|&e| e == 0) {
                out.accumulate(exps[..m].to_vec(), c);
            }
        }
        out
    }

    /// Reinterpret in a larger variable set (new trailing variables unused).
    pub fn pad_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut out = MultiPoly::zero(&self.ctx, nvars, self.degree);
        for (exps, c) in self.terms() {
            let mut ne = exps.clone();
            ne.resize(nvars, 0);
            out.accumulate(ne, c);
        }
        out
    }

    /// Apply a field embedding to every coefficient.
    pub fn lift(&self, emb: &Embedding) -> Self {
        let mut out = MultiPoly::zero(emb.to_ctx(), self.nvars, self.degree);
        for (exps, c) in self.terms() {
            out.accumulate(exps.clone(), emb.map(c));
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(exps, c)| {
                let mut s = self.ctx.format(c);
                for (j, &e) in exps.iter().enumerate() {
                    if e == 1 {
                        s.push_str(&format!("*x{j}"));
                    } else if e > 1 {
                        s.push_str(&format!("*x{j}^{e}"));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All exponent vectors of the given total degree, in increasing
/// lexicographic order (matching term iteration order).
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut out, &mut cur, 0, degree);
    fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, left: u32) {
        if pos == cur.len() - 1 {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            fill(out, cur, pos + 1, left - e);
        }
        cur[pos] = 0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use crate::polyalg::choose;

    fn f5() -> FieldCtx {
        make_field(5, 1).unwrap()
    }

    #[test]
    fn construction_validates() {
        let ctx = f5();
        let one = ctx.one();
        assert!(MultiPoly::from_terms(&ctx, 3, 2, [(vec![1, 1, 0], one)]).is_ok());
        assert!(MultiPoly::from_terms(&ctx, 3, 2, [(vec![1, 1, 1], one)]).is_err());
        assert!(MultiPoly::from_terms(&ctx, 3, 2, [(vec![1, 1], one)]).is_err());
    }

    #[test]
    fn duplicate_terms_accumulate_and_cancel() {
        let ctx = f5();
        let p = MultiPoly::from_terms(
            &ctx,
            2,
            1,
            [
                (vec![1, 0], ctx.from_int(2)),
                (vec![1, 0], ctx.from_int(3)),
                (vec![0, 1], ctx.one()),
            ],
        )
        .unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&[0, 1]), ctx.one());
    }

    #[test]
    fn partial_derivative_examples() {
        let ctx = f5();
        // d/dx0 (x0^2 x1) = 2 x0 x1
        let p = MultiPoly::monomial(&ctx, vec![2, 1], ctx.one()).unwrap();
        let d = p.partial(0);
        assert_eq!(d.coefficient(&[1, 1]), ctx.from_int(2));
        // In characteristic 5, d/dx0 (x0^5) = 0.
        let q = MultiPoly::monomial(&ctx, vec![5, 0], ctx.one()).unwrap();
        assert!(q.partial(0).is_zero());
    }

    #[test]
    fn euler_relation() {
        // sum_j x_j df/dx_j = d * f for homogeneous f.
        let ctx = make_field(7, 1).unwrap();
        let mut rng = crate::rng::Rng::new(11);
        let monos = monomials_of_degree(3, 4);
        let f = MultiPoly::from_terms(
            &ctx,
            3,
            4,
            monos.into_iter().map(|e| (e, ctx.rand(&mut rng))),
        )
        .unwrap();
        let mut acc = MultiPoly::zero(&ctx, 3, 4);
        for j in 0..3 {
            let mut e = vec![0u32; 3];
            e[j] = 1;
            acc = acc.add(&f.partial(j).mul_monomial(&e, ctx.one())).unwrap();
        }
        assert_eq!(acc, f.scale(ctx.from_int(4)));
    }

    #[test]
    fn substitution_agrees_with_evaluation() {
        // f(uM) evaluated at a point equals f evaluated at the image point.
        let ctx = make_field(3, 2).unwrap();
        let mut rng = crate::rng::Rng::new(23);
        let monos = monomials_of_degree(4, 3);
        let f = MultiPoly::from_terms(
            &ctx,
            4,
            3,
            monos.into_iter().map(|e| (e, ctx.rand(&mut rng))),
        )
        .unwrap();
        for _ in 0..20 {
            let rows: Vec<Vec<Fq>> = (0..2)
                .map(|_| (0..4).map(|_| ctx.rand(&mut rng)).collect())
                .collect();
            let g = f.substitute(&rows).unwrap();
            let u: Vec<Fq> = (0..2).map(|_| ctx.rand(&mut rng)).collect();
            let image: Vec<Fq> = (0..4)
                .map(|j| {
                    let mut acc = ctx.zero();
                    for (i, r) in rows.iter().enumerate() {
                        acc = ctx.add(acc, ctx.mul(u[i], r[j]));
                    }
                    acc
                })
                .collect();
            assert_eq!(g.eval(&u).unwrap(), f.eval(&image).unwrap());
        }
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(
            monomials_of_degree(4, 3).len() as u128,
            choose(3 + 3, 3)
        );
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        // Lex order: first variable least significant digit last.
        assert_eq!(ms[0], vec![0, 0, 2]);
        assert_eq!(ms[5], vec![2, 0, 0]);
        for m in &ms {
            assert_eq!(m.iter().sum::<u32>(), 2);
        }
    }

    #[test]
    fn lift_preserves_structure() {
        let f3 = make_field(3, 1).unwrap();
        let (f9, emb) = crate::galois::extend_field(&f3, 2).unwrap();
        let p = MultiPoly::from_terms(
            &f3,
            2,
            2,
            [(vec![2, 0], f3.from_int(2)), (vec![0, 2], f3.one())],
        )
        .unwrap();
        let q = p.lift(&emb);
        assert_eq!(q.ctx(), &f9);
        assert_eq!(q.coefficient(&[2, 0]), f9.from_int(2));
    }
}
