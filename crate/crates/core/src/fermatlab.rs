//! The Fermat hypersurface family: explicit free rational curves on it
//! when the characteristic does not divide the degree, and exhaustive
//! no-free-lines audits in the extremal degree-(p+1) case.

use crate::census::{gaussian_binomial, plane_census, run_jobs};
use crate::error::Error;
use crate::galois::{extend_field, make_field, FieldCtx, Fq};
use crate::kersys::RationalCurve;
use crate::linegeom::{normal_bundle_line, Hypersurface};
use crate::p1split::{splitting_type, SplittingType, TwistedMap};
use crate::polyalg::{BinaryForm, LinearSubspace, MultiPoly};
use crate::Result;
use std::collections::BTreeMap;

/// Default cap on enumerated line candidates for the no-free-lines audit:
/// admits p = 2 up to n = 5 and p = 3 up to n = 4.
pub const DEFAULT_LINE_BUDGET: u128 = 1_000_000;

/// The Fermat hypersurface x_0^d + … + x_n^d = 0 and its bookkeeping.
#[derive(Debug, Clone)]
pub struct FermatSpec {
    ctx: FieldCtx,
    n: usize,
    d: u32,
}

impl FermatSpec {
    pub fn new(ctx: &FieldCtx, n: usize, d: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::DimensionTooSmall(
                "the Fermat form needs at least two variables".into(),
            ));
        }
        if d < 1 {
            return Err(Error::DegenerateInput("degree must be positive".into()));
        }
        Ok(FermatSpec {
            ctx: ctx.clone(),
            n,
            d,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn d(&self) -> u32 {
        self.d
    }

    /// The Fermat is smooth exactly when the characteristic does not
    /// divide the degree.
    pub fn smooth(&self) -> bool {
        !self.ctx.char_divides(self.d as u64)
    }

    /// A d-th root of −1 in the coefficient field, when one exists.
    pub fn mu(&self) -> Result<Fq> {
        self.ctx.root_of_minus_one(self.d as u64)
    }

    pub fn hypersurface(&self) -> Hypersurface {
        let mut f = MultiPoly::zero(&self.ctx, self.n + 1, self.d);
        for i in 0..=self.n {
            let mut exps = vec![0u32; self.n + 1];
            exps[i] = self.d;
            f = f
                .add(&MultiPoly::monomial(&self.ctx, exps, self.ctx.one()).expect("unit monomial"))
                .expect("distinct monomials");
        }
        Hypersurface::new(f).expect("the Fermat form is nonzero")
    }
}

/// The Fermat hypersurface of degree d in P^n.
pub fn fermat(ctx: &FieldCtx, n: usize, d: u32) -> Result<Hypersurface> {
    Ok(FermatSpec::new(ctx, n, d)?.hypersurface())
}

/// Smallest extension of ctx containing a d-th root of −1, with the root.
/// In characteristic 2 the root is 1; otherwise x^d = −1 is solvable in
/// F_Q iff (Q−1)/gcd(d, Q−1) is even.
fn field_with_root(ctx: &FieldCtx, d: u32) -> Result<(FieldCtx, Fq)> {
    let q = ctx.q() as u128;
    let solvable = |big_q: u128| -> bool {
        if ctx.p() == 2 {
            return true;
        }
        let qm1 = big_q - 1;
        let g = gcd_u128(d as u128, qm1);
        (qm1 / g).is_multiple_of(2)
    };
    let mut big_q = q;
    for m in 1..=(4 * d as usize) {
        if solvable(big_q) {
            let big = if m == 1 {
                ctx.clone()
            } else {
                extend_field(ctx, m as u32)?.0
            };
            let mu = big.root_of_minus_one(d as u64)?;
            return Ok((big, mu));
        }
        big_q = big_q
            .checked_mul(q)
            .ok_or(Error::NoRootOfMinusOne)?;
    }
    Err(Error::NoRootOfMinusOne)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn free_curve_with_mu(ctx: &FieldCtx, d: u32, k: usize) -> Result<(RationalCurve, Fq)> {
    if ctx.char_divides(d as u64) {
        return Err(Error::CharacteristicDividesDegree);
    }
    if k < 2 * d as usize + 1 {
        return Err(Error::DimensionTooSmall(format!(
            "the paired curve needs k ≥ 2d+1 = {}",
            2 * d + 1
        )));
    }
    let (big, mu) = field_with_root(ctx, d)?;
    let mut components = Vec::with_capacity(k + 1);
    for j in 0..=d {
        // t^{d−j} s^j and its μ-twin, interleaved
        let m = BinaryForm::monomial(&big, d, d - j, big.one());
        components.push(m.scale(mu));
        components.push(m);
    }
    components.extend((2 * d as usize + 2..=k).map(|_| BinaryForm::zero(&big, d)));
    let curve = RationalCurve::new(components)?;
    Ok((curve, mu))
}

/// The μ-paired rational normal curve
/// (μt^d : t^d : μt^{d−1}s : t^{d−1}s : … : μs^d : s^d : 0 : …) in P^k,
/// which lies on the degree-d Fermat because μ^d = −1 cancels the pairs.
/// Extends the coefficient field when the root μ is missing.
pub fn standard_free_curve(ctx: &FieldCtx, d: u32, k: usize) -> Result<RationalCurve> {
    Ok(free_curve_with_mu(ctx, d, k)?.0)
}

/// Everything the free-curve check establishes, in one record.
#[derive(Debug, Clone)]
pub struct FreeCurveAudit {
    pub d: u32,
    pub k: usize,
    pub p: u64,
    /// Size of the field the curve ended up defined over.
    pub field_size: u64,
    pub mu: Fq,
    pub contained: bool,
    pub source_twists: Vec<i32>,
    pub target_twist: i32,
    pub splitting: SplittingType,
    pub free: bool,
}

/// Build the standard curve on the Fermat of degree d in P^k and test
/// freeness through the kernel of the restricted gradient map
/// O(d)^(k+1) → O(d²), whose entries are d·c_i^{d−1}.
pub fn audit_free_curve(ctx: &FieldCtx, d: u32, k: usize) -> Result<FreeCurveAudit> {
    let (curve, mu) = free_curve_with_mu(ctx, d, k)?;
    let cctx = curve.ctx().clone();
    let x = fermat(&cctx, k, d)?;
    let contained = curve.pullback(x.f())?.is_zero();
    let scalar = cctx.from_int(d as i64);
    let entries: Vec<BinaryForm> = curve
        .components()
        .iter()
        .map(|c| c.pow(d - 1).scale(scalar))
        .collect();
    let source_twists = vec![d as i32; k + 1];
    let target_twist = (d * d) as i32;
    let map = TwistedMap::single_row(&cctx, source_twists.clone(), target_twist, entries)?;
    let splitting = splitting_type(&map)?;
    let free = splitting.is_nonnegative();
    Ok(FreeCurveAudit {
        d,
        k,
        p: cctx.p(),
        field_size: cctx.q(),
        mu,
        contained,
        source_twists,
        target_twist,
        splitting,
        free,
    })
}

/// Outcome of enumerating every line of P^n(F_{p²}) against the Fermat of
/// degree p+1.
#[derive(Debug, Clone)]
pub struct NoFreeLinesAudit {
    pub p: u64,
    pub n: usize,
    pub d: u32,
    /// What field the enumeration actually covered.
    pub field_note: String,
    /// Enumeration certifies only lines defined over this field; lines
    /// over larger extensions are outside the scan.
    pub caveat: String,
    pub candidates: u128,
    pub lines_on_x: u64,
    pub free_lines: u64,
    pub splitting_histogram: BTreeMap<SplittingType, usize>,
    pub h0_histogram: BTreeMap<usize, usize>,
    pub min_h0: Option<usize>,
    /// The component lower bound 2n − 6 the h⁰ values are compared with.
    pub h0_lower_bound: i64,
}

impl NoFreeLinesAudit {
    pub fn no_free_lines(&self) -> bool {
        self.free_lines == 0
    }
}

/// Enumerate all lines of P^n over F_{p²} and compute the normal-bundle
/// splitting of each one lying on the degree-(p+1) Fermat.
pub fn audit_no_free_lines(
    p: u64,
    n: usize,
    max_candidates: u128,
    jobs: usize,
) -> Result<NoFreeLinesAudit> {
    if n < 2 {
        return Err(Error::DimensionTooSmall(
            "lines need an ambient P^2 or larger".into(),
        ));
    }
    let ctx = make_field(p, 2)?;
    let d = (p + 1) as u32;
    let q = ctx.q();
    let candidates = gaussian_binomial(q, n as u64 + 1, 2);
    if candidates > max_candidates {
        return Err(Error::BudgetExceeded(format!(
            "audit needs {candidates} candidate lines over F_{q}, budget is {max_candidates}"
        )));
    }
    let x = fermat(&ctx, n, d)?;
    // Containment of a line on the Fermat is the vanishing of
    // Σ (a_i s + b_i t)^d — much cheaper than generic restriction.
    let on_fermat = |l: &LinearSubspace| -> bool {
        let rows = l.basis_rows();
        let mut acc = BinaryForm::zero(&ctx, d);
        for (&a, &b) in rows[0].iter().zip(&rows[1]) {
            let lin = BinaryForm::linear(&ctx, a, b);
            acc = acc.add(&lin.pow(d)).expect("degrees agree");
        }
        acc.is_zero()
    };
    let census = plane_census(&ctx, 1, n, on_fermat, max_candidates, jobs)?;
    let reports = run_jobs(jobs, census.matches.len(), |i| {
        normal_bundle_line(&x, &census.matches[i])
    });
    let mut splitting_histogram: BTreeMap<SplittingType, usize> = BTreeMap::new();
    let mut h0_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut free_lines = 0u64;
    for r in reports {
        let r = r?;
        if r.free {
            free_lines += 1;
        }
        *splitting_histogram.entry(r.splitting).or_insert(0) += 1;
        *h0_histogram.entry(r.h0).or_insert(0) += 1;
    }
    Ok(NoFreeLinesAudit {
        p,
        n,
        d,
        field_note: format!("lines enumerated over F_{q} = F_{{{p}^2}}"),
        caveat:
            "enumeration certifies only lines defined over this field; larger extensions are out of scope"
                .into(),
        candidates,
        lines_on_x: census.matched,
        free_lines,
        min_h0: h0_histogram.keys().next().copied(),
        splitting_histogram,
        h0_histogram,
        h0_lower_bound: 2 * n as i64 - 6,
    })
}
