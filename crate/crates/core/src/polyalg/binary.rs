//! Dense binary forms on P^1.
//!
//! A form of degree d in (s, t) is stored as d+1 coefficients with
//! `coeffs[i]` the coefficient of s^(d-i) t^i. The zero form keeps an
//! explicit degree.

use crate::error::Error;
use crate::galois::{Embedding, FieldCtx, Fq};
use crate::polyalg::multipoly::MultiPoly;
use crate::Result;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<Fq>,
    ctx: FieldCtx,
}

impl BinaryForm {
    pub fn zero(ctx: &FieldCtx, degree: u32) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![Fq::ZERO; degree as usize + 1],
            ctx: ctx.clone(),
        }
    }

    pub fn from_coeffs(ctx: &FieldCtx, coeffs: Vec<Fq>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ValidationError("empty coefficient vector".into()));
        }
        Ok(BinaryForm {
            degree: (coeffs.len() - 1) as u32,
            coeffs,
            ctx: ctx.clone(),
        })
    }

    /// c * s^(d-i) t^i.
    pub fn monomial(ctx: &FieldCtx, degree: u32, i: u32, c: Fq) -> Self {
        let mut f = BinaryForm::zero(ctx, degree);
        f.coeffs[i as usize] = c;
        f
    }

    /// a*s + b*t.
    pub fn linear(ctx: &FieldCtx, a: Fq, b: Fq) -> Self {
        BinaryForm {
            degree: 1,
            coeffs: vec![a, b],
            ctx: ctx.clone(),
        }
    }

    /// (a*s + b*t)^k via the binomial theorem.
    pub fn linear_power(ctx: &FieldCtx, a: Fq, b: Fq, k: u32) -> Self {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut apow = vec![ctx.one()];
        let mut bpow = vec![ctx.one()];
        for _ in 0..k {
            apow.push(ctx.mul(*apow.last().unwrap(), a));
            bpow.push(ctx.mul(*bpow.last().unwrap(), b));
        }
        for i in 0..=k {
            let bin = crate::polyalg::choose(k as u64, i as u64);
            let c = ctx.from_int((bin % ctx.p() as u128) as i64);
            coeffs.push(ctx.mul(c, ctx.mul(apow[(k - i) as usize], bpow[i as usize])));
        }
        BinaryForm {
            degree: k,
            coeffs,
            ctx: ctx.clone(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }
    pub fn coeff(&self, i: u32) -> Fq {
        self.coeffs[i as usize]
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn compat(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "binary forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| self.ctx.add(a, b))
            .collect();
        Ok(BinaryForm {
            degree: self.degree,
            coeffs,
            ctx: self.ctx.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let ctx = &self.ctx;
        let mut coeffs = vec![Fq::ZERO; (self.degree + other.degree) as usize + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(a, b));
            }
        }
        Ok(BinaryForm {
            degree: self.degree + other.degree,
            coeffs,
            ctx: ctx.clone(),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = BinaryForm::from_coeffs(&self.ctx, vec![self.ctx.one()]).unwrap();
        for _ in 0..k {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    pub fn eval(&self, s: Fq, t: Fq) -> Fq {
        let ctx = &self.ctx;
        // Horner in t of the coefficients against powers of s.
        let mut acc = ctx.zero();
        let mut spow = ctx.one();
        let mut terms = vec![Fq::ZERO; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            terms[i] = ctx.mul(c, spow);
            spow = ctx.mul(spow, s);
        }
        for &v in terms.iter().rev() {
            acc = ctx.add(ctx.mul(acc, t), v);
        }
        acc
    }

    /// Number of t factors: the least i with coeffs[i] nonzero.
    fn ord_t(&self) -> u32 {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap() as u32
    }

    /// Number of s factors.
    fn ord_s(&self) -> u32 {
        self.degree - self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap() as u32
    }

    /// Greatest common divisor, normalized so the lowest-index nonzero
    /// coefficient is 1. gcd with the zero form is the other argument.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let ctx = &self.ctx;
        if self.is_zero() && other.is_zero() {
            return Ok(BinaryForm::zero(ctx, 0));
        }
        if self.is_zero() {
            return Ok(other.normalized());
        }
        if other.is_zero() {
            return Ok(self.normalized());
        }
        let s_ord = self.ord_s().min(other.ord_s());
        let t_ord = self.ord_t().min(other.ord_t());
        let a = self.stripped();
        let b = other.stripped();
        // Both strips have nonzero first and last coefficient; dehomogenize
        // at s = 1 and run univariate Euclid in t.
        let mut x = a;
        let mut y = b;
        while !y.iter().all(|c| c.is_zero()) {
            let r = poly_rem(ctx, &x, &y)?;
            x = y;
            y = r;
        }
        let g_deg = x.len() as u32 - 1;
        let mut coeffs = vec![Fq::ZERO; (s_ord + t_ord + g_deg) as usize + 1];
        for (j, &c) in x.iter().enumerate() {
            coeffs[t_ord as usize + j] = c;
        }
        let out = BinaryForm {
            degree: s_ord + t_ord + g_deg,
            coeffs,
            ctx: ctx.clone(),
        };
        Ok(out.normalized())
    }

    /// Strip common s and t factors and return the dense t-coefficients of
    /// the remaining part (constant term first).
    fn stripped(&self) -> Vec<Fq> {
        let lo = self.ord_t() as usize;
        let hi = (self.degree - self.ord_s()) as usize;
        self.coeffs[lo..=hi].to_vec()
    }

    fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(&lead) => self.scale(self.ctx.inv(lead).unwrap()),
        }
    }

    /// Substitute s -> m[0][0] s + m[0][1] t, t -> m[1][0] s + m[1][1] t.
    pub fn compose(&self, m: &[[Fq; 2]; 2]) -> Self {
        let ctx = &self.ctx;
        let mut acc = BinaryForm::zero(ctx, self.degree);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s_part =
                BinaryForm::linear_power(ctx, m[0][0], m[0][1], self.degree - i as u32);
            let t_part = BinaryForm::linear_power(ctx, m[1][0], m[1][1], i as u32);
            let term = s_part.mul(&t_part).unwrap().scale(c);
            acc = acc.add(&term).unwrap();
        }
        acc
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        let terms = self.coeffs.iter().enumerate().map(|(i, &c)| {
            (vec![self.degree - i as u32, i as u32], c)
        });
        MultiPoly::from_terms(&self.ctx, 2, self.degree, terms).unwrap()
    }

    /// Convert a homogeneous 2-variable polynomial (variables s, t) to dense
    /// form.
    pub fn from_multipoly(p: &MultiPoly) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::ValidationError(format!(
                "{}-variable polynomial is not a binary form",
                p.nvars()
            )));
        }
        let mut out = BinaryForm::zero(p.ctx(), p.degree());
        for (exps, c) in p.terms() {
            out.coeffs[exps[1] as usize] = c;
        }
        Ok(out)
    }

    pub fn lift(&self, emb: &Embedding) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| emb.map(c)).collect(),
            ctx: emb.to_ctx().clone(),
        }
    }
}

/// Remainder of dense univariate division (constant term first); divisor
/// need not be monic.
fn poly_rem(ctx: &FieldCtx, a: &[Fq], b: &[Fq]) -> Result<Vec<Fq>> {
    let deg = |v: &[Fq]| v.iter().rposition(|c| !c.is_zero());
    let Some(db) = deg(b) else {
        return Err(Error::DivisionByZero);
    };
    let mut r = a.to_vec();
    let lead_inv = ctx.inv(b[db])?;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let f = ctx.mul(r[dr], lead_inv);
        for i in 0..=db {
            let v = ctx.sub(r[dr - db + i], ctx.mul(f, b[i]));
            r[dr - db + i] = v;
        }
    }
    // Trim to a canonical short vector so the Euclid loop terminates.
    let n = deg(&r).map_or(1, |d| d + 1);
    r.truncate(n);
    Ok(r)
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let d = self.degree as usize;
                let mut s = self.ctx.format(c);
                if d - i > 0 {
                    s.push_str(&format!("*s^{}", d - i));
                }
                if i > 0 {
                    s.push_str(&format!("*t^{i}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use crate::rng::Rng;

    #[test]
    fn multiplication_and_eval() {
        let ctx = make_field(5, 1).unwrap();
        let s = BinaryForm::linear(&ctx, ctx.one(), ctx.zero());
        let t = BinaryForm::linear(&ctx, ctx.zero(), ctx.one());
        let st = s.mul(&t).unwrap();
        assert_eq!(st.coeff(1), ctx.one());
        assert_eq!(st.degree(), 2);
        let mut rng = Rng::new(1);
        for _ in 0..20 {
            let a = ctx.rand(&mut rng);
            let b = ctx.rand(&mut rng);
            assert_eq!(st.eval(a, b), ctx.mul(a, b));
        }
    }

    #[test]
    fn linear_power_matches_repeated_multiplication() {
        let ctx = make_field(3, 2).unwrap();
        let mut rng = Rng::new(2);
        for _ in 0..20 {
            let a = ctx.rand(&mut rng);
            let b = ctx.rand(&mut rng);
            let k = 1 + rng.below(6) as u32;
            let fast = BinaryForm::linear_power(&ctx, a, b, k);
            let slow = BinaryForm::linear(&ctx, a, b).pow(k);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn frobenius_collapse_in_char_3() {
        // (a s + b t)^3 = a^3 s^3 + b^3 t^3 in characteristic 3.
        let ctx = make_field(3, 2).unwrap();
        let mut rng = Rng::new(3);
        for _ in 0..10 {
            let a = ctx.rand(&mut rng);
            let b = ctx.rand(&mut rng);
            let p = BinaryForm::linear_power(&ctx, a, b, 3);
            assert_eq!(p.coeff(0), ctx.pow(a, 3));
            assert_eq!(p.coeff(3), ctx.pow(b, 3));
            assert!(p.coeff(1).is_zero());
            assert!(p.coeff(2).is_zero());
        }
    }

    #[test]
    fn gcd_examples() {
        let ctx = make_field(5, 1).unwrap();
        let s = BinaryForm::linear(&ctx, ctx.one(), ctx.zero());
        let t = BinaryForm::linear(&ctx, ctx.zero(), ctx.one());
        // gcd(s^2 t, s t^2) = s t
        let a = s.pow(2).mul(&t).unwrap();
        let b = s.mul(&t.pow(2)).unwrap();
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, s.mul(&t).unwrap());
        // gcd(s^3, t^3) = 1
        let g2 = s.pow(3).gcd(&t.pow(3)).unwrap();
        assert_eq!(g2.degree(), 0);
        assert!(!g2.is_zero());
        // gcd((s+t)^2(s-t), (s+t)(s-t)^2) = (s+t)(s-t)
        let u = BinaryForm::linear(&ctx, ctx.one(), ctx.one());
        let v = BinaryForm::linear(&ctx, ctx.one(), ctx.minus_one());
        let a = u.pow(2).mul(&v).unwrap();
        let b = u.mul(&v.pow(2)).unwrap();
        let g3 = a.gcd(&b).unwrap();
        assert_eq!(g3, u.mul(&v).unwrap().normalized());
    }

    #[test]
    fn gcd_with_zero_and_products_property() {
        let ctx = make_field(7, 1).unwrap();
        let mut rng = Rng::new(9);
        let z = BinaryForm::zero(&ctx, 4);
        let f = BinaryForm::from_coeffs(
            &ctx,
            (0..5).map(|_| ctx.rand(&mut rng)).collect(),
        )
        .unwrap();
        assert_eq!(z.gcd(&f).unwrap(), f.normalized());
        // gcd(h*a, h*b) is divisible by h for random h, a, b.
        for _ in 0..20 {
            let h = BinaryForm::from_coeffs(
                &ctx,
                vec![ctx.rand_nonzero(&mut rng), ctx.rand(&mut rng), ctx.rand_nonzero(&mut rng)],
            )
            .unwrap();
            let a = BinaryForm::from_coeffs(
                &ctx,
                (0..3).map(|_| ctx.rand(&mut rng)).collect(),
            )
            .unwrap();
            let b = BinaryForm::from_coeffs(
                &ctx,
                (0..3).map(|_| ctx.rand(&mut rng)).collect(),
            )
            .unwrap();
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let g = h.mul(&a).unwrap().gcd(&h.mul(&b).unwrap()).unwrap();
            assert!(g.degree() >= 2, "h must divide the gcd");
        }
    }

    #[test]
    fn compose_with_identity_and_swap() {
        let ctx = make_field(3, 1).unwrap();
        let mut rng = Rng::new(4);
        let f = BinaryForm::from_coeffs(
            &ctx,
            (0..5).map(|_| ctx.rand(&mut rng)).collect(),
        )
        .unwrap();
        let id = [[ctx.one(), ctx.zero()], [ctx.zero(), ctx.one()]];
        assert_eq!(f.compose(&id), f);
        let swap = [[ctx.zero(), ctx.one()], [ctx.one(), ctx.zero()]];
        let g = f.compose(&swap);
        for i in 0..=4u32 {
            assert_eq!(g.coeff(i), f.coeff(4 - i));
        }
    }

    #[test]
    fn multipoly_round_trip() {
        let ctx = make_field(5, 1).unwrap();
        let mut rng = Rng::new(5);
        let f = BinaryForm::from_coeffs(
            &ctx,
            (0..6).map(|_| ctx.rand(&mut rng)).collect(),
        )
        .unwrap();
        let p = f.to_multipoly();
        assert_eq!(BinaryForm::from_multipoly(&p).unwrap(), f);
    }
}
