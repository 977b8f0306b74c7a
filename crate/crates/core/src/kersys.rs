//! Base-point-free linear systems on P^k and the kernel bundle of the
//! evaluation map O(1)^(k+1) → O(r+1): certification, restriction to
//! parametrized rational curves, splitting classification of lines, and a
//! staged randomized search for curves whose restricted kernel is globally
//! generated.

use crate::error::Error;
use crate::galois::{extend_field, Embedding, FieldCtx, Fq};
use crate::linalg::Matrix;
use crate::p1split::{splitting_type, SplittingType, TwistedMap};
use crate::polyalg::{choose, monomials_of_degree, BinaryForm, LinearSubspace, MultiPoly};
use crate::rng::Rng;
use crate::Result;
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

/// k+1 forms of common degree r on P^k.
#[derive(Debug)]
pub struct LinearSystem {
    k: usize,
    r: u32,
    gens: Vec<MultiPoly>,
    ctx: FieldCtx,
    bpf: OnceLock<bool>,
}

impl Clone for LinearSystem {
    fn clone(&self) -> Self {
        let bpf = OnceLock::new();
        if let Some(&v) = self.bpf.get() {
            let _ = bpf.set(v);
        }
        LinearSystem {
            k: self.k,
            r: self.r,
            gens: self.gens.clone(),
            ctx: self.ctx.clone(),
            bpf,
        }
    }
}

impl LinearSystem {
    pub fn new(ctx: &FieldCtx, gens: Vec<MultiPoly>) -> Result<Self> {
        if gens.len() < 2 {
            return Err(Error::DegenerateInput(
                "a linear system needs at least two generators".into(),
            ));
        }
        let k = gens.len() - 1;
        let r = gens[0].degree();
        if r == 0 {
            return Err(Error::DegenerateInput(
                "generators must have positive degree".into(),
            ));
        }
        for g in &gens {
            if g.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            if g.degree() != r {
                return Err(Error::DegreeMismatch(format!(
                    "generators must share degree {r}, got {}",
                    g.degree()
                )));
            }
            if g.nvars() != k + 1 {
                return Err(Error::DegenerateInput(format!(
                    "generators of a system on P^{k} need {} variables",
                    k + 1
                )));
            }
        }
        if gens.iter().all(|g| g.is_zero()) {
            return Err(Error::DegenerateInput("all generators are zero".into()));
        }
        Ok(LinearSystem {
            k,
            r,
            gens,
            ctx: ctx.clone(),
            bpf: OnceLock::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// No common zero over the algebraic closure. Certified exactly: k+1
    /// forms of degree r with empty zero locus in P^k form a regular
    /// sequence, so the ideal contains every form of degree
    /// D = (k+1)(r−1)+1; conversely a full degree-D piece forces every
    /// monomial x_i^D to vanish at a common zero. One rank computation,
    /// cached.
    pub fn is_basepoint_free(&self) -> bool {
        *self.bpf.get_or_init(|| {
            let d = (self.k as u32 + 1) * (self.r - 1) + 1;
            ideal_piece_is_full(&self.gens, d).expect("validated system")
        })
    }

    pub fn lift(&self, emb: &Embedding) -> Self {
        let out = LinearSystem {
            k: self.k,
            r: self.r,
            gens: self.gens.iter().map(|g| g.lift(emb)).collect(),
            ctx: emb.to_ctx().clone(),
            bpf: OnceLock::new(),
        };
        // Base-point freeness is a statement over the closure, so the
        // cached verdict transfers to any extension.
        if let Some(&v) = self.bpf.get() {
            let _ = out.bpf.set(v);
        }
        out
    }
}

/// Whether the degree-D graded piece of the ideal (forms) is the full space
/// of degree-D forms: rank of the Macaulay multiplication matrix equals the
/// number of degree-D monomials. Full rank certifies that the forms have no
/// common zero over the algebraic closure.
pub fn ideal_piece_is_full(forms: &[MultiPoly], degree_d: u32) -> Result<bool> {
    if forms.is_empty() {
        return Err(Error::DegenerateInput("no forms given".into()));
    }
    let ctx = forms[0].ctx().clone();
    let nvars = forms[0].nvars();
    for f in forms {
        if *f.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
        if f.nvars() != nvars {
            return Err(Error::DegenerateInput(
                "forms must share a variable set".into(),
            ));
        }
    }
    let rows_mono = monomials_of_degree(nvars, degree_d);
    let row_of: HashMap<Vec<u32>, usize> = rows_mono
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let rows = rows_mono.len();
    let mut cols = 0usize;
    for f in forms {
        if f.is_zero() || f.degree() > degree_d {
            continue;
        }
        cols += choose((degree_d - f.degree()) as u64 + nvars as u64 - 1, nvars as u64 - 1)
            as usize;
    }
    if cols == 0 {
        return Ok(false);
    }
    let mut mat = Matrix::zero(&ctx, rows, cols);
    let mut col = 0;
    for f in forms {
        if f.is_zero() || f.degree() > degree_d {
            continue;
        }
        for mu in monomials_of_degree(nvars, degree_d - f.degree()) {
            for (exps, c) in f.terms() {
                let prod: Vec<u32> = mu.iter().zip(exps.iter()).map(|(a, b)| a + b).collect();
                let r = row_of[&prod];
                mat.set(r, col, ctx.add(mat.get(r, col), c));
            }
            col += 1;
        }
    }
    Ok(mat.rank() == rows)
}

/// Certificate degree for an arbitrary list of forms in `nvars` variables:
/// one more than the sum of (degree − 1) over the `nvars` largest degrees.
pub fn saturation_degree(degrees: &[u32], nvars: usize) -> u32 {
    let mut d: Vec<u32> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d.iter().take(nvars).map(|&x| x.saturating_sub(1)).sum::<u32>() + 1
}

// ---------------------------------------------------------------------------
// Exhaustive point scanning (the refutation oracle for the certificates).

/// Dense chart-restricted polynomial: nested coefficient vectors over the
/// free variables, univariate at the innermost level. Trees built over the
/// same variable range always have the same depth; sibling coefficient
/// lists may differ in length.
#[derive(Clone)]
enum Dense {
    Uni(Vec<Fq>),
    Multi(Vec<Dense>),
}

impl Dense {
    fn build(ctx: &FieldCtx, terms: &[(Vec<u32>, Fq)], var: usize, nfree: usize) -> Dense {
        if var + 1 == nfree {
            let max_e = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0) as usize;
            let mut coeffs = vec![Fq::ZERO; max_e + 1];
            for (e, c) in terms {
                let i = e[var] as usize;
                coeffs[i] = ctx.add(coeffs[i], *c);
            }
            return Dense::Uni(coeffs);
        }
        let max_e = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0) as usize;
        let mut groups: Vec<Vec<(Vec<u32>, Fq)>> = vec![Vec::new(); max_e + 1];
        for (e, c) in terms {
            groups[e[var] as usize].push((e.clone(), *c));
        }
        Dense::Multi(
            groups
                .into_iter()
                .map(|g| Dense::build(ctx, &g, var + 1, nfree))
                .collect(),
        )
    }

    fn scale(&self, ctx: &FieldCtx, v: Fq) -> Dense {
        match self {
            Dense::Uni(a) => Dense::Uni(a.iter().map(|&c| ctx.mul(c, v)).collect()),
            Dense::Multi(a) => Dense::Multi(a.iter().map(|x| x.scale(ctx, v)).collect()),
        }
    }

    /// self * v + other, used as the Horner step when specializing the
    /// current variable.
    fn horner_step(&self, ctx: &FieldCtx, v: Fq, other: &Dense) -> Dense {
        match (self, other) {
            (Dense::Uni(a), Dense::Uni(b)) => {
                let n = a.len().max(b.len());
                let mut out = vec![Fq::ZERO; n];
                for (i, &c) in a.iter().enumerate() {
                    out[i] = ctx.mul(c, v);
                }
                for (i, &c) in b.iter().enumerate() {
                    out[i] = ctx.add(out[i], c);
                }
                Dense::Uni(out)
            }
            (Dense::Multi(a), Dense::Multi(b)) => {
                let n = a.len().max(b.len());
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    out.push(match (a.get(i), b.get(i)) {
                        (Some(x), Some(y)) => x.horner_step(ctx, v, y),
                        (Some(x), None) => x.scale(ctx, v),
                        (None, Some(y)) => y.clone(),
                        (None, None) => unreachable!(),
                    });
                }
                Dense::Multi(out)
            }
            _ => unreachable!("dense trees over one variable range share a depth"),
        }
    }

    fn specialize(&self, ctx: &FieldCtx, v: Fq) -> Dense {
        match self {
            Dense::Uni(_) => unreachable!("specialize stops before the last variable"),
            Dense::Multi(children) => {
                let mut acc = children.last().expect("built trees are nonempty").clone();
                for c in children.iter().rev().skip(1) {
                    acc = acc.horner_step(ctx, v, c);
                }
                acc
            }
        }
    }

    fn eval_uni(&self, ctx: &FieldCtx, v: Fq) -> Fq {
        match self {
            Dense::Uni(coeffs) => {
                let mut acc = ctx.zero();
                for &c in coeffs.iter().rev() {
                    acc = ctx.add(ctx.mul(acc, v), c);
                }
                acc
            }
            Dense::Multi(_) => unreachable!("leaf evaluation on a non-leaf"),
        }
    }
}

/// Visit every common zero of `forms` in P^(nvars−1) over their own field,
/// one standard affine chart at a time, in a fixed deterministic order
/// (chart index, then coordinate values in field-encoding order). Points are
/// passed normalized (first nonzero coordinate 1). The visitor returns false
/// to stop early.
pub fn scan_common_zeros<F>(forms: &[MultiPoly], mut visit: F) -> Result<()>
where
    F: FnMut(&[Fq]) -> bool,
{
    if forms.is_empty() {
        return Err(Error::DegenerateInput("no forms to scan".into()));
    }
    let ctx = forms[0].ctx().clone();
    let nvars = forms[0].nvars();
    for f in forms {
        if *f.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
        if f.nvars() != nvars {
            return Err(Error::DegenerateInput(
                "forms must share a variable set".into(),
            ));
        }
    }
    let elements: Vec<Fq> = ctx.elements().collect();
    for chart in 0..nvars {
        let nfree = nvars - chart - 1;
        // Terms surviving x_0 = ... = x_{chart-1} = 0, x_chart = 1.
        let restricted: Vec<Vec<(Vec<u32>, Fq)>> = forms
            .iter()
            .map(|f| {
                f.terms()
                    .filter(|(e, _)| e[..chart].iter().all(|&x| x == 0))
                    .map(|(e, c)| (e[chart + 1..].to_vec(), c))
                    .collect()
            })
            .collect();
        if nfree == 0 {
            let all_zero = restricted.iter().all(|t| {
                let mut acc = ctx.zero();
                for (_, c) in t {
                    acc = ctx.add(acc, *c);
                }
                acc.is_zero()
            });
            if all_zero {
                let mut pt = vec![Fq::ZERO; nvars];
                pt[chart] = ctx.one();
                if !visit(&pt) {
                    return Ok(());
                }
            }
            continue;
        }
        let trees: Vec<Dense> = restricted
            .iter()
            .map(|t| Dense::build(&ctx, t, 0, nfree))
            .collect();
        let mut assignment = vec![Fq::ZERO; nfree];
        if !scan_rec(
            &ctx,
            &elements,
            &trees,
            0,
            nfree,
            chart,
            nvars,
            &mut assignment,
            &mut visit,
        ) {
            return Ok(());
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn scan_rec<F>(
    ctx: &FieldCtx,
    elements: &[Fq],
    trees: &[Dense],
    var: usize,
    nfree: usize,
    chart: usize,
    nvars: usize,
    assignment: &mut Vec<Fq>,
    visit: &mut F,
) -> bool
where
    F: FnMut(&[Fq]) -> bool,
{
    if var + 1 == nfree {
        for &v in elements {
            if !trees[0].eval_uni(ctx, v).is_zero() {
                continue;
            }
            if trees[1..].iter().any(|t| !t.eval_uni(ctx, v).is_zero()) {
                continue;
            }
            assignment[var] = v;
            let mut pt = vec![Fq::ZERO; nvars];
            pt[chart] = ctx.one();
            pt[chart + 1..].copy_from_slice(assignment);
            if !visit(&pt) {
                return false;
            }
        }
        return true;
    }
    for &v in elements {
        assignment[var] = v;
        let specialized: Vec<Dense> = trees.iter().map(|t| t.specialize(ctx, v)).collect();
        if !scan_rec(
            ctx,
            elements,
            &specialized,
            var + 1,
            nfree,
            chart,
            nvars,
            assignment,
            visit,
        ) {
            return false;
        }
    }
    true
}

/// First common zero in scan order, if any.
pub fn common_projective_zero(forms: &[MultiPoly]) -> Result<Option<Vec<Fq>>> {
    let mut found = None;
    scan_common_zeros(forms, |pt| {
        found = Some(pt.to_vec());
        false
    })?;
    Ok(found)
}

// ---------------------------------------------------------------------------
// Rational curves and restriction of the kernel bundle.

/// A morphism P¹ → P^k of degree e given by k+1 binary forms with no common
/// factor.
#[derive(Debug, Clone)]
pub struct RationalCurve {
    e: u32,
    components: Vec<BinaryForm>,
    ctx: FieldCtx,
}

impl RationalCurve {
    pub fn new(components: Vec<BinaryForm>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::DegenerateInput(
                "a curve in P^k needs at least two components".into(),
            ));
        }
        let ctx = components[0].ctx().clone();
        if components.iter().any(|c| *c.ctx() != ctx) {
            return Err(Error::ContextMismatch);
        }
        let nonzero: Vec<&BinaryForm> = components.iter().filter(|c| !c.is_zero()).collect();
        let Some(first) = nonzero.first() else {
            return Err(Error::DegenerateInput("all components are zero".into()));
        };
        let e = first.degree();
        if nonzero.iter().any(|c| c.degree() != e) {
            return Err(Error::DegreeMismatch(
                "components must share one degree".into(),
            ));
        }
        let mut gcd = (*first).clone();
        for c in &nonzero[1..] {
            gcd = gcd.gcd(c)?;
            if gcd.degree() == 0 {
                break;
            }
        }
        if gcd.degree() > 0 {
            return Err(Error::NotAMorphism);
        }
        Ok(RationalCurve {
            e,
            components,
            ctx,
        })
    }

    /// Degree-1 parametrization of a line from its two canonical basis rows.
    pub fn from_line(line: &LinearSubspace) -> Result<Self> {
        if line.dim() != 1 {
            return Err(Error::DegenerateInput("not a line".into()));
        }
        let ctx = line.ctx();
        let r0 = &line.basis_rows()[0];
        let r1 = &line.basis_rows()[1];
        let components = r0
            .iter()
            .zip(r1)
            .map(|(&a, &b)| BinaryForm::linear(ctx, a, b))
            .collect();
        RationalCurve::new(components)
    }

    /// (s³ : s²t : st² : t³), zero-padded into P^k.
    pub fn standard_twisted_cubic(ctx: &FieldCtx, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::DimensionTooSmall(
                "the twisted cubic needs P^3 or larger".into(),
            ));
        }
        let s = BinaryForm::linear(ctx, ctx.one(), ctx.zero());
        let t = BinaryForm::linear(ctx, ctx.zero(), ctx.one());
        let mut components = vec![
            s.pow(3),
            s.pow(2).mul(&t).unwrap(),
            s.mul(&t.pow(2)).unwrap(),
            t.pow(3),
        ];
        components.extend((3..k).map(|_| BinaryForm::zero(ctx, 3)));
        RationalCurve::new(components)
    }

    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn components(&self) -> &[BinaryForm] {
        &self.components
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn ambient_k(&self) -> usize {
        self.components.len() - 1
    }

    pub fn eval(&self, s: Fq, t: Fq) -> Vec<Fq> {
        self.components.iter().map(|c| c.eval(s, t)).collect()
    }

    /// f composed with the parametrization: a binary form of degree
    /// deg(f) · deg(C).
    pub fn pullback(&self, f: &MultiPoly) -> Result<BinaryForm> {
        if *f.ctx() != self.ctx {
            return Err(Error::ContextMismatch);
        }
        if f.nvars() != self.components.len() {
            return Err(Error::IndexOutOfRange(format!(
                "form in {} variables pulled back along a curve in P^{}",
                f.nvars(),
                self.ambient_k()
            )));
        }
        let total = self.e * f.degree();
        let mut acc = BinaryForm::zero(&self.ctx, total);
        for (exps, c) in f.terms() {
            let mut term = BinaryForm::monomial(&self.ctx, 0, 0, c);
            for (i, &ex) in exps.iter().enumerate() {
                if ex > 0 {
                    term = term.mul(&self.components[i].pow(ex))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

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
        RationalCurve::new(self.components.iter().map(|c| c.compose(m)).collect())
    }
}

/// Pull the kernel sequence 0 → M → O(1)^(k+1) → O(r+1) → 0 back along the
/// curve: a one-row twisted map O(e)^(k+1) → O(e(r+1)) with entries g_i ∘ C.
pub fn restrict_kernel(v: &LinearSystem, c: &RationalCurve) -> Result<TwistedMap> {
    if v.ctx() != c.ctx() {
        return Err(Error::ContextMismatch);
    }
    if c.ambient_k() != v.k() {
        return Err(Error::DegenerateInput(format!(
            "curve lives in P^{}, system on P^{}",
            c.ambient_k(),
            v.k()
        )));
    }
    if !v.is_basepoint_free() {
        return Err(Error::NotBasepointFree);
    }
    let ctx = v.ctx();
    let e = c.degree();
    let r = v.r();
    // Per-variable power tables up to the largest exponent in the system.
    let powers: Vec<Vec<BinaryForm>> = c
        .components()
        .iter()
        .map(|comp| {
            let mut p = vec![BinaryForm::from_coeffs(ctx, vec![ctx.one()]).unwrap()];
            for t in 1..=r {
                p.push(p[t as usize - 1].mul(comp).unwrap());
            }
            p
        })
        .collect();
    let entries: Vec<BinaryForm> = v
        .gens()
        .iter()
        .map(|g| {
            let mut acc = BinaryForm::zero(ctx, e * r);
            for (exps, coeff) in g.terms() {
                let mut term = BinaryForm::from_coeffs(ctx, vec![coeff]).unwrap();
                for (j, &ex) in exps.iter().enumerate() {
                    if ex > 0 {
                        term = term.mul(&powers[j][ex as usize]).unwrap();
                    }
                }
                // Zero components can collapse a term below full degree;
                // such terms vanish identically.
                if term.degree() == e * r {
                    acc = acc.add(&term).unwrap();
                }
            }
            acc
        })
        .collect();
    TwistedMap::single_row(
        ctx,
        vec![e as i32; v.k() + 1],
        (e * (r + 1)) as i32,
        entries,
    )
}

pub fn restricted_splitting(v: &LinearSystem, c: &RationalCurve) -> Result<SplittingType> {
    splitting_type(&restrict_kernel(v, c)?)
}

/// Is the restricted kernel bundle globally generated (no negative part)?
pub fn globally_generated(v: &LinearSystem, c: &RationalCurve) -> Result<bool> {
    Ok(restricted_splitting(v, c)?.is_nonnegative())
}

// ---------------------------------------------------------------------------
// Sampling experiments.

/// Splitting histogram over sampled lines.
#[derive(Debug, Clone)]
pub struct SplittingHistogram {
    pub counts: BTreeMap<SplittingType, usize>,
    pub samples: usize,
    pub extension: u32,
}

impl SplittingHistogram {
    pub fn count_of(&self, parts: &[i32]) -> usize {
        self.counts
            .get(&SplittingType::new(parts.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    /// Most frequent splitting; ties broken by the smaller type.
    pub fn majority(&self) -> Option<&SplittingType> {
        self.counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(k, _)| k)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Sample random lines over F_{q^ext} and histogram the splitting of the
/// restricted kernel. For k = 3, r = 3 the possible types are exactly
/// (−2,1,1), (−1,0,1) and (0,0,0).
pub fn classify_line_case(
    v: &LinearSystem,
    samples: usize,
    seed: u64,
    ext: u32,
) -> Result<SplittingHistogram> {
    if !v.is_basepoint_free() {
        return Err(Error::NotBasepointFree);
    }
    let (_big, emb) = extend_field(v.ctx(), ext)?;
    let lifted = v.lift(&emb);
    let big = lifted.ctx().clone();
    let rng = Rng::new(seed);
    let mut counts: BTreeMap<SplittingType, usize> = BTreeMap::new();
    for i in 0..samples {
        let mut rng = rng.split(i as u64);
        let line = LinearSubspace::random(&big, 1, v.k(), &mut rng);
        let curve = RationalCurve::from_line(&line)?;
        let split = restricted_splitting(&lifted, &curve)?;
        *counts.entry(split).or_insert(0) += 1;
    }
    Ok(SplittingHistogram {
        counts,
        samples,
        extension: ext,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SearchStage {
    Line,
    Conic,
    TwistedCubic,
    RandomCubic,
}

impl SearchStage {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStage::Line => "line",
            SearchStage::Conic => "conic",
            SearchStage::TwistedCubic => "twisted-cubic",
            SearchStage::RandomCubic => "random-cubic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FreeCurveWitness {
    pub curve: RationalCurve,
    pub splitting: SplittingType,
    pub stage: SearchStage,
    pub sample_index: u64,
    pub extension: u32,
}

/// Staged search for a curve with globally generated restricted kernel:
/// random lines, then random smooth conics, then the standard twisted
/// cubic, then random degree-3 curves. Each random stage draws at most
/// `budget` candidates over F_{q^ext}; the first success in (stage, index)
/// order is returned, so results are reproducible from the seed. `None`
/// means the budget ran out, not that no curve exists.
pub fn search_free_curve(
    v: &LinearSystem,
    budget: u64,
    seed: u64,
    ext: u32,
) -> Result<Option<FreeCurveWitness>> {
    if !v.is_basepoint_free() {
        return Err(Error::NotBasepointFree);
    }
    let (_big, emb) = extend_field(v.ctx(), ext)?;
    let lifted = v.lift(&emb);
    let big = lifted.ctx().clone();
    let rng = Rng::new(seed);
    let k = v.k();

    let check = |curve: RationalCurve, stage: SearchStage, index: u64| -> Result<Option<FreeCurveWitness>> {
        let split = restricted_splitting(&lifted, &curve)?;
        if split.is_nonnegative() {
            Ok(Some(FreeCurveWitness {
                curve,
                splitting: split,
                stage,
                sample_index: index,
                extension: ext,
            }))
        } else {
            Ok(None)
        }
    };

    // Stage 1: lines.
    for i in 0..budget {
        let mut rng = rng.split(i);
        let line = LinearSubspace::random(&big, 1, k, &mut rng);
        if let Some(w) = check(RationalCurve::from_line(&line)?, SearchStage::Line, i)? {
            return Ok(Some(w));
        }
    }
    // Stage 2: smooth conics — degree-2 components whose 3×(k+1)
    // coefficient matrix has rank 3 (image spans a plane) and gcd 1.
    for i in 0..budget {
        let mut rng = rng.split(1_000_000 + i);
        let comps: Vec<BinaryForm> = (0..=k)
            .map(|_| {
                BinaryForm::from_coeffs(&big, (0..3).map(|_| big.rand(&mut rng)).collect())
                    .unwrap()
            })
            .collect();
        let coeff_rows: Vec<Vec<Fq>> = (0..3)
            .map(|row| comps.iter().map(|c| c.coeff(row as u32)).collect())
            .collect();
        if Matrix::row_span_rank(&big, &coeff_rows) < 3 {
            continue;
        }
        let Ok(curve) = RationalCurve::new(comps) else {
            continue;
        };
        if let Some(w) = check(curve, SearchStage::Conic, i)? {
            return Ok(Some(w));
        }
    }
    // Stage 3: the standard twisted cubic, when the ambient allows it.
    if k >= 3 {
        let cubic = RationalCurve::standard_twisted_cubic(&big, k)?;
        if let Some(w) = check(cubic, SearchStage::TwistedCubic, 0)? {
            return Ok(Some(w));
        }
    }
    // Stage 4: random degree-3 curves.
    for i in 0..budget {
        let mut rng = rng.split(2_000_000 + i);
        let comps: Vec<BinaryForm> = (0..=k)
            .map(|_| {
                BinaryForm::from_coeffs(&big, (0..4).map(|_| big.rand(&mut rng)).collect())
                    .unwrap()
            })
            .collect();
        let Ok(curve) = RationalCurve::new(comps) else {
            continue;
        };
        if let Some(w) = check(curve, SearchStage::RandomCubic, i)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Build a base-point-free system on a k-plane inside V(f) from seeded
/// random combinations of the restricted partial derivatives. Tries up to
/// `budget` draws and reports exhaustion rather than silently succeeding.
pub fn system_from_plane(
    f: &MultiPoly,
    lambda: &LinearSubspace,
    seed: u64,
    budget: u64,
) -> Result<LinearSystem> {
    let ctx = f.ctx();
    if ctx != lambda.ctx() {
        return Err(Error::ContextMismatch);
    }
    if !lambda.restrict(f)?.is_zero() {
        return Err(Error::PlaneNotOnHypersurface);
    }
    let k = lambda.dim();
    let n = lambda.ambient_dim();
    if k >= n {
        return Err(Error::DegenerateInput(
            "the plane must be a proper subspace".into(),
        ));
    }
    let restricted: Vec<MultiPoly> = (0..=n)
        .map(|i| lambda.restrict(&f.partial(i)))
        .collect::<Result<_>>()?;
    let rng = Rng::new(seed);
    for attempt in 0..budget {
        let mut rng = rng.split(attempt);
        let mut gens = Vec::with_capacity(k + 1);
        for _ in 0..=k {
            let mut g = MultiPoly::zero(ctx, k + 1, f.degree() - 1);
            for rp in &restricted {
                let c = ctx.rand(&mut rng);
                if !c.is_zero() && !rp.is_zero() {
                    g = g.add(&rp.scale(c))?;
                }
            }
            gens.push(g);
        }
        let Ok(system) = LinearSystem::new(ctx, gens) else {
            continue;
        };
        if system.is_basepoint_free() {
            return Ok(system);
        }
    }
    Err(Error::BudgetExhausted(format!(
        "no base-point-free combination of restricted partials in {budget} draws from seed {seed}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;

    fn power_system(ctx: &FieldCtx, k: usize, r: u32) -> LinearSystem {
        let gens = (0..=k)
            .map(|i| {
                let mut exps = vec![0u32; k + 1];
                exps[i] = r;
                MultiPoly::monomial(ctx, exps, ctx.one()).unwrap()
            })
            .collect();
        LinearSystem::new(ctx, gens).unwrap()
    }

    fn random_system(ctx: &FieldCtx, k: usize, r: u32, rng: &mut Rng) -> LinearSystem {
        loop {
            let gens: Vec<MultiPoly> = (0..=k)
                .map(|_| {
                    let mut g = MultiPoly::zero(ctx, k + 1, r);
                    for exps in monomials_of_degree(k + 1, r) {
                        let c = ctx.rand(rng);
                        if !c.is_zero() {
                            g = g.add(&MultiPoly::monomial(ctx, exps, c).unwrap()).unwrap();
                        }
                    }
                    g
                })
                .collect();
            if let Ok(v) = LinearSystem::new(ctx, gens) {
                return v;
            }
        }
    }

    #[test]
    fn coordinate_cubes_are_basepoint_free() {
        let f5 = make_field(5, 1).unwrap();
        assert!(power_system(&f5, 3, 3).is_basepoint_free());
        // Swap the last cube for x_0 x_1 x_2: common zero (0:0:0:1).
        let mut gens: Vec<MultiPoly> = power_system(&f5, 3, 3).gens().to_vec();
        gens[3] = MultiPoly::monomial(&f5, vec![1, 1, 1, 0], f5.one()).unwrap();
        let v = LinearSystem::new(&f5, gens).unwrap();
        assert!(!v.is_basepoint_free());
    }

    #[test]
    fn certificate_agrees_with_point_search() {
        let f5 = make_field(5, 1).unwrap();
        let rng = Rng::new(31);
        // A crafted failure: (x_0^4, x_1^4, x_2^4, x_0x_1x_2x_3) has the
        // base point (0:0:0:1), and the scan finds exactly it over F_5.
        let mut gens: Vec<MultiPoly> = power_system(&f5, 3, 4).gens().to_vec();
        gens[3] = MultiPoly::monomial(&f5, vec![1, 1, 1, 1], f5.one()).unwrap();
        let bad = LinearSystem::new(&f5, gens).unwrap();
        assert!(!bad.is_basepoint_free());
        let zero = common_projective_zero(bad.gens()).unwrap().unwrap();
        assert_eq!(
            zero,
            vec![f5.zero(), f5.zero(), f5.zero(), f5.one()]
        );

        // Random quartic systems: any point found over F_{5^e}, e ≤ 3,
        // refutes; the certificate must agree with every refutation.
        for trial in 0..2u64 {
            let mut rng = rng.split(trial);
            let v = random_system(&f5, 3, 4, &mut rng);
            let verdict = v.is_basepoint_free();
            for e in 1..=3u32 {
                let (_big, emb) = extend_field(&f5, e).unwrap();
                let lifted = v.lift(&emb);
                let found = common_projective_zero(lifted.gens()).unwrap();
                if let Some(pt) = found {
                    assert!(!verdict, "rational base point {pt:?} refutes the certificate");
                    for g in lifted.gens() {
                        assert!(g.eval(&pt).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn scan_finds_all_zeros_of_a_split_quadric() {
        // x_0x_1 − x_2x_3 on P^3(F_2): the 9 points of the quadric.
        let f2 = make_field(2, 1).unwrap();
        let g = MultiPoly::monomial(&f2, vec![1, 1, 0, 0], f2.one())
            .unwrap()
            .add(&MultiPoly::monomial(&f2, vec![0, 0, 1, 1], f2.one()).unwrap())
            .unwrap();
        let mut pts = Vec::new();
        scan_common_zeros(std::slice::from_ref(&g), |p| {
            pts.push(p.to_vec());
            true
        })
        .unwrap();
        assert_eq!(pts.len(), 9);
        for p in &pts {
            assert!(g.eval(p).unwrap().is_zero());
        }
        // Determinism: a second scan yields the identical list.
        let mut again = Vec::new();
        scan_common_zeros(&[g], |p| {
            again.push(p.to_vec());
            true
        })
        .unwrap();
        assert_eq!(pts, again);
    }

    #[test]
    fn kernel_restriction_to_line_and_twisted_cubic() {
        let f3 = make_field(3, 1).unwrap();
        let v = power_system(&f3, 3, 3);
        let line = RationalCurve::from_line(&LinearSubspace::coordinate_plane(&f3, 1, 3))
            .unwrap();
        let map = restrict_kernel(&v, &line).unwrap();
        assert_eq!(map.source_twists(), &[1, 1, 1, 1]);
        assert_eq!(map.target_twists(), &[4]);
        let s = BinaryForm::linear(&f3, f3.one(), f3.zero());
        let t = BinaryForm::linear(&f3, f3.zero(), f3.one());
        assert_eq!(map.entry(0, 0), &s.pow(3));
        assert_eq!(map.entry(0, 1), &t.pow(3));
        assert!(map.entry(0, 2).is_zero());
        assert!(map.entry(0, 3).is_zero());
        assert_eq!(splitting_type(&map).unwrap().parts(), &[-2, 1, 1]);

        let cubic = RationalCurve::standard_twisted_cubic(&f3, 3).unwrap();
        let map = restrict_kernel(&v, &cubic).unwrap();
        assert_eq!(map.source_twists(), &[3, 3, 3, 3]);
        assert_eq!(map.target_twists(), &[12]);
        assert_eq!(map.entry(0, 0), &s.pow(9));
        assert_eq!(map.entry(0, 1), &s.pow(6).mul(&t.pow(3)).unwrap());
        assert_eq!(map.entry(0, 2), &s.pow(3).mul(&t.pow(6)).unwrap());
        assert_eq!(map.entry(0, 3), &t.pow(9));
        let split = splitting_type(&map).unwrap();
        assert_eq!(split.parts(), &[0, 0, 0]);
        assert!(globally_generated(&v, &cubic).unwrap());
    }

    #[test]
    fn every_line_is_case_one_for_cubes_in_char_three() {
        let f3 = make_field(3, 1).unwrap();
        let v = power_system(&f3, 3, 3);
        let hist = classify_line_case(&v, 30, 7, 2).unwrap();
        assert_eq!(hist.total(), 30);
        assert_eq!(hist.count_of(&[-2, 1, 1]), 30);
        assert_eq!(hist.majority().unwrap().parts(), &[-2, 1, 1]);
        assert_eq!(hist.extension, 2);
    }

    #[test]
    fn char_five_lines_never_hit_case_one() {
        let f5 = make_field(5, 1).unwrap();
        let mut rng = Rng::new(FIVE_SEED);
        let v = loop {
            let cand = random_system(&f5, 3, 3, &mut rng);
            if cand.is_basepoint_free() {
                break cand;
            }
        };
        let hist = classify_line_case(&v, 12, 3, 1).unwrap();
        assert_eq!(hist.total(), 12);
        assert_eq!(hist.count_of(&[-2, 1, 1]), 0);
        let majority = hist.majority().unwrap().parts().to_vec();
        assert!(
            majority == vec![0, 0, 0] || majority == vec![-1, 0, 1],
            "unexpected general-line type {majority:?}"
        );
        // Sanity on the taxonomy: every sampled type is one of the three.
        for split in hist.counts.keys() {
            let p = split.parts();
            assert!(
                p == [-2, 1, 1] || p == [-1, 0, 1] || p == [0, 0, 0],
                "impossible line splitting {p:?}"
            );
        }
    }

    const FIVE_SEED: u64 = 11;

    #[test]
    fn free_curve_search_follows_the_stage_order() {
        // Cubes in characteristic 3: lines and conics all fail, the
        // standard twisted cubic wins.
        let f3 = make_field(3, 1).unwrap();
        let v3 = power_system(&f3, 3, 3);
        let w = search_free_curve(&v3, 4, 5, 2).unwrap().unwrap();
        assert_eq!(w.stage, SearchStage::TwistedCubic);
        assert_eq!(w.splitting.parts(), &[0, 0, 0]);

        // Cubes in characteristic 2: a line or a conic suffices.
        let f2 = make_field(2, 1).unwrap();
        let v2 = power_system(&f2, 3, 3);
        let w = search_free_curve(&v2, 8, 5, 2).unwrap().unwrap();
        assert!(w.stage <= SearchStage::Conic, "found only at {:?}", w.stage);
        assert!(w.splitting.is_nonnegative());

        // Non-bpf input is rejected up front.
        let mut gens: Vec<MultiPoly> = v2.gens().to_vec();
        gens[3] = MultiPoly::monomial(&f2, vec![1, 1, 1, 0], f2.one()).unwrap();
        let bad = LinearSystem::new(&f2, gens).unwrap();
        assert_eq!(
            search_free_curve(&bad, 2, 1, 1).unwrap_err(),
            Error::NotBasepointFree
        );
    }

    #[test]
    fn splitting_invariants_on_random_curves() {
        let f4 = make_field(2, 2).unwrap();
        let mut rng = Rng::new(21);
        let v = loop {
            let cand = random_system(&f4, 2, 2, &mut rng);
            if cand.is_basepoint_free() {
                break cand;
            }
        };
        let k = 2i64;
        let r = 2i64;
        for trial in 0..8u64 {
            let mut rng = rng.split(trial);
            let curve = if trial % 2 == 0 {
                RationalCurve::from_line(&LinearSubspace::random(&f4, 1, 2, &mut rng))
                    .unwrap()
            } else {
                // random conics, resampled until they are morphisms
                loop {
                    let comps: Vec<BinaryForm> = (0..3)
                        .map(|_| {
                            BinaryForm::from_coeffs(
                                &f4,
                                (0..3).map(|_| f4.rand(&mut rng)).collect(),
                            )
                            .unwrap()
                        })
                        .collect();
                    if let Ok(c) = RationalCurve::new(comps) {
                        break c;
                    }
                }
            };
            let e = curve.degree() as i64;
            let split = restricted_splitting(&v, &curve).unwrap();
            assert_eq!(split.degree(), e * (k - r));
            assert!(split.max_part().unwrap() as i64 <= e);
            // Reparametrization invariance.
            let gl = loop {
                let a = f4.rand(&mut rng);
                let b = f4.rand(&mut rng);
                let c = f4.rand(&mut rng);
                let d = f4.rand(&mut rng);
                if !f4.sub(f4.mul(a, d), f4.mul(b, c)).is_zero() {
                    break [[a, b], [c, d]];
                }
            };
            let moved = curve.reparametrize(&gl).unwrap();
            assert_eq!(restricted_splitting(&v, &moved).unwrap(), split);
        }
    }

    #[test]
    fn curve_validation() {
        let f5 = make_field(5, 1).unwrap();
        let s = BinaryForm::linear(&f5, f5.one(), f5.zero());
        let t = BinaryForm::linear(&f5, f5.zero(), f5.one());
        // Common factor s: not a morphism.
        assert_eq!(
            RationalCurve::new(vec![
                s.pow(2),
                s.mul(&t).unwrap(),
                BinaryForm::zero(&f5, 2)
            ])
            .unwrap_err(),
            Error::NotAMorphism
        );
        // Mixed degrees are refused.
        assert!(matches!(
            RationalCurve::new(vec![s.pow(2), t.clone()]).unwrap_err(),
            Error::DegreeMismatch(_)
        ));
        // Coordinate line in P^3.
        let line = RationalCurve::from_line(&LinearSubspace::coordinate_plane(&f5, 1, 3))
            .unwrap();
        assert_eq!(line.eval(f5.one(), f5.from_int(2)), vec![
            f5.one(),
            f5.from_int(2),
            f5.zero(),
            f5.zero()
        ]);
    }

    #[test]
    fn plane_systems_from_fermat_like_hypersurfaces() {
        // Fermat cubic in P^5 over F_4 contains the plane
        // (s : μs : t : μt : u : μu) with μ³ = −1 = 1.
        let f4 = make_field(2, 2).unwrap();
        let mu = f4.root_of_minus_one(3).unwrap();
        let mut f = MultiPoly::zero(&f4, 6, 3);
        for i in 0..6 {
            let mut exps = vec![0u32; 6];
            exps[i] = 3;
            f = f.add(&MultiPoly::monomial(&f4, exps, f4.one()).unwrap()).unwrap();
        }
        let rows = vec![
            vec![f4.one(), mu, f4.zero(), f4.zero(), f4.zero(), f4.zero()],
            vec![f4.zero(), f4.zero(), f4.one(), mu, f4.zero(), f4.zero()],
            vec![f4.zero(), f4.zero(), f4.zero(), f4.zero(), f4.one(), mu],
        ];
        let plane = LinearSubspace::from_spanning_rows(&f4, &rows).unwrap();
        assert!(plane.restrict(&f).unwrap().is_zero());
        let v = system_from_plane(&f, &plane, 9, 50).unwrap();
        assert_eq!(v.k(), 2);
        assert_eq!(v.r(), 2);
        assert!(v.is_basepoint_free());

        // A plane off the hypersurface is rejected.
        let off = LinearSubspace::coordinate_plane(&f4, 2, 5);
        assert_eq!(
            system_from_plane(&f, &off, 1, 5).unwrap_err(),
            Error::PlaneNotOnHypersurface
        );

        // All restricted partials vanish: budget exhausts deterministically.
        // f = x_4²x_0 + x_5²x_1 on Λ = V(x_4, x_5) ⊂ P^5.
        let g = MultiPoly::monomial(&f4, vec![1, 0, 0, 0, 2, 0], f4.one())
            .unwrap()
            .add(&MultiPoly::monomial(&f4, vec![0, 1, 0, 0, 0, 2], f4.one()).unwrap())
            .unwrap();
        let lam = LinearSubspace::coordinate_plane(&f4, 3, 5);
        assert!(lam.restrict(&g).unwrap().is_zero());
        assert!(matches!(
            system_from_plane(&g, &lam, 1, 10).unwrap_err(),
            Error::BudgetExhausted(_)
        ));
    }

    #[test]
    fn large_ambient_plane_system_end_to_end() {
        // A quartic in P^12 through the coordinate 3-plane V(x_4..x_12):
        // random f with every monomial divisible by some x_j, j ≥ 4.
        let f5 = make_field(5, 1).unwrap();
        let mut rng = Rng::new(2024);
        let lambda = LinearSubspace::coordinate_plane(&f5, 3, 12);
        let mut f = MultiPoly::zero(&f5, 13, 4);
        // Sparse but full-rank enough: x_j * (random cubic in x_0..x_3),
        // j = 4..12.
        for j in 4..13 {
            for exps3 in monomials_of_degree(4, 3) {
                let c = f5.rand(&mut rng);
                if c.is_zero() {
                    continue;
                }
                let mut exps = vec![0u32; 13];
                exps[..4].copy_from_slice(&exps3);
                exps[j] += 1;
                f = f.add(&MultiPoly::monomial(&f5, exps, c).unwrap()).unwrap();
            }
        }
        assert!(lambda.restrict(&f).unwrap().is_zero());
        let v = system_from_plane(&f, &lambda, 1, 20).unwrap();
        assert_eq!((v.k(), v.r()), (3, 3));
        assert!(v.is_basepoint_free());
    }

    #[test]
    fn saturation_degree_rule() {
        assert_eq!(saturation_degree(&[3, 3, 3, 3], 4), 9);
        assert_eq!(saturation_degree(&[4, 3, 3, 3, 3], 4), 10);
        assert_eq!(saturation_degree(&[2, 2], 4), 3);
    }
}
