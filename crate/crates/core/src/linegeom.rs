//! Lines and k-planes on a hypersurface: containment, normal-bundle
//! splitting and freeness, tangent-space dimensions of the Fano schemes,
//! and the linear-part span checks that tie the local expansion picture to
//! the bundle picture.

use crate::error::Error;
use crate::galois::{FieldCtx, Fq};
use crate::kersys::{ideal_piece_is_full, saturation_degree};
use crate::linalg::{Matrix, SpanTracker};
use crate::p1split::{splitting_type, SplittingType, TwistedMap};
use crate::polyalg::{
    choose, expand_around_point, expand_around_subspace, monomials_of_degree,
    normalizing_change, straightening_change, BinaryForm, LinearSubspace, MultiPoly,
    MultisetIndex,
};
use crate::Result;
use std::collections::BTreeSet;

/// X = V(f) in P^n.
#[derive(Debug, Clone)]
pub struct Hypersurface {
    f: MultiPoly,
}

impl Hypersurface {
    pub fn new(f: MultiPoly) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::DegenerateInput(
                "a hypersurface needs a nonzero form".into(),
            ));
        }
        if f.degree() == 0 {
            return Err(Error::DegenerateInput(
                "a hypersurface needs positive degree".into(),
            ));
        }
        if f.nvars() < 2 {
            return Err(Error::DimensionTooSmall(
                "the ambient space must be at least P^1".into(),
            ));
        }
        Ok(Hypersurface { f })
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }
    pub fn n(&self) -> usize {
        self.f.nvars() - 1
    }
    pub fn d(&self) -> u32 {
        self.f.degree()
    }
    pub fn ctx(&self) -> &FieldCtx {
        self.f.ctx()
    }
}

/// Does the subspace lie on the hypersurface?
pub fn contains(x: &Hypersurface, sub: &LinearSubspace) -> Result<bool> {
    if x.ctx() != sub.ctx() {
        return Err(Error::ContextMismatch);
    }
    Ok(sub.restrict(x.f())?.is_zero())
}

/// Certify that X is smooth over the algebraic closure: the Macaulay rank
/// test on the gradient system at the saturation degree. When p ∤ d the
/// Euler relation makes f redundant and the n+1 partials suffice; when
/// p | d the form itself joins the system.
pub fn smoothness_certificate(x: &Hypersurface) -> Result<bool> {
    let n = x.n();
    let mut forms: Vec<MultiPoly> = (0..=n).map(|i| x.f().partial(i)).collect();
    if x.ctx().char_divides(x.d() as u64) {
        forms.push(x.f().clone());
    }
    let degrees: Vec<u32> = forms
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.degree())
        .collect();
    if degrees.is_empty() {
        return Ok(false);
    }
    let target = saturation_degree(&degrees, n + 1);
    ideal_piece_is_full(&forms, target)
}

/// Normal-bundle summary for a line on X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalBundleReport {
    pub splitting: SplittingType,
    /// h⁰(N_{l/X}) = dim of the tangent space to F_1(X) at [l].
    pub h0: usize,
    /// a = h¹(N_{l/X}(−1)); zero exactly when the line is free.
    pub h1_minus1: usize,
    pub free: bool,
    /// 2n − d − 3, the expected dimension of F_1(X).
    pub expected_dim: i64,
}

impl NormalBundleReport {
    fn from_splitting(splitting: SplittingType, n: usize, d: u32) -> Self {
        let h0 = splitting.h0(0);
        let h1_minus1 = splitting.h1(-1);
        let free = splitting.is_nonnegative();
        NormalBundleReport {
            splitting,
            h0,
            h1_minus1,
            free,
            expected_dim: 2 * n as i64 - d as i64 - 3,
        }
    }

    pub fn tangent_dim(&self) -> usize {
        self.h0
    }
}

/// Partials of the straightened form restricted to the coordinate line:
/// entries 0 and 1 are the tangential ones (identically zero for a line on
/// X), entries 2..=n drive the normal bundle.
fn straightened_line_partials(
    x: &Hypersurface,
    l: &LinearSubspace,
) -> Result<Vec<BinaryForm>> {
    if !contains(x, l)? {
        return Err(Error::LineNotOnHypersurface);
    }
    if l.dim() != 1 {
        return Err(Error::DegenerateInput("not a line".into()));
    }
    let n = x.n();
    let ch = straightening_change(l)?;
    let g = ch.transport(x.f())?;
    let line0 = LinearSubspace::coordinate_plane(x.ctx(), 1, n);
    let restricted: Vec<BinaryForm> = (0..=n)
        .map(|j| line0.restrict_line(&g.partial(j)))
        .collect::<Result<_>>()?;
    debug_assert!(
        restricted[0].is_zero() && restricted[1].is_zero(),
        "tangential partials must vanish on a contained line"
    );
    // Smoothness along l: the restricted gradient has no common zero over
    // the closure, i.e. the nonzero entries have gcd of degree zero.
    let mut gcd: Option<BinaryForm> = None;
    for r in &restricted {
        if r.is_zero() {
            continue;
        }
        gcd = Some(match gcd {
            None => r.clone(),
            Some(g) => g.gcd(r)?,
        });
        if gcd.as_ref().unwrap().degree() == 0 {
            break;
        }
    }
    match gcd {
        Some(g) if g.degree() == 0 => Ok(restricted),
        _ => Err(Error::SingularAlongLine),
    }
}

/// Splitting type and cohomology of N_{l/X} for a line l ⊂ X, via the map
/// O_l(1)^(n−1) → O_l(d) of normal partials.
pub fn normal_bundle_line(x: &Hypersurface, l: &LinearSubspace) -> Result<NormalBundleReport> {
    let restricted = straightened_line_partials(x, l)?;
    let n = x.n();
    let map = TwistedMap::single_row(
        x.ctx(),
        vec![1; n - 1],
        x.d() as i32,
        restricted[2..].to_vec(),
    )?;
    let splitting = splitting_type(&map)?;
    let report = NormalBundleReport::from_splitting(splitting, n, x.d());
    debug_assert_eq!(report.splitting.degree(), n as i64 - 1 - x.d() as i64);
    Ok(report)
}

/// Freeness of a line via two independent pipelines: the normal-bundle
/// splitting, and the kernel of the full-gradient map on l, which differs
/// from the normal bundle by two trivial O(1) summands coming from the zero
/// tangential columns. Disagreement is always a bug.
pub fn line_is_free(x: &Hypersurface, l: &LinearSubspace) -> Result<bool> {
    let restricted = straightened_line_partials(x, l)?;
    let n = x.n();
    let normal_map = TwistedMap::single_row(
        x.ctx(),
        vec![1; n - 1],
        x.d() as i32,
        restricted[2..].to_vec(),
    )?;
    let normal = splitting_type(&normal_map)?;
    let full_map =
        TwistedMap::single_row(x.ctx(), vec![1; n + 1], x.d() as i32, restricted)?;
    let full = splitting_type(&full_map)?;
    let mut expected: Vec<i32> = normal.parts().to_vec();
    expected.extend([1, 1]);
    expected.sort_unstable();
    if expected != full.parts() {
        return Err(Error::PipelineDisagreement(format!(
            "normal splitting {normal} plus two Euler summands differs from full-gradient splitting {full}"
        )));
    }
    let verdict = normal.is_nonnegative();
    if verdict != full.is_nonnegative() {
        return Err(Error::PipelineDisagreement(format!(
            "freeness verdicts differ: normal {normal}, full {full}"
        )));
    }
    Ok(verdict)
}

/// Linear parts L_1..L_d of the expansion pieces at a point of a line, with
/// their span data.
#[derive(Debug, Clone)]
pub struct LinearPartProfile {
    pub linear_parts: Vec<Vec<Fq>>,
    /// Rank of span(L_1..L_d).
    pub span_rank: usize,
    /// Largest r with L_1..L_r linearly independent.
    pub prefix_r: usize,
    /// Whether L_1..L_prefix_r spans span(L_1..L_m) for m = min(d, p).
    pub prefix_spans_initial: bool,
    /// m = min(d, p).
    pub initial_count: usize,
}

pub fn linear_part_profile(
    x: &Hypersurface,
    l: &LinearSubspace,
    q: &[Fq],
) -> Result<LinearPartProfile> {
    if !contains(x, l)? {
        return Err(Error::LineNotOnHypersurface);
    }
    let expansion = expand_around_point(x.f(), q, l)?;
    let linear_parts = expansion.linear_parts;
    let ctx = x.ctx();
    let mut all = SpanTracker::new(ctx);
    for lp in &linear_parts {
        all.insert(lp);
    }
    let span_rank = all.rank();
    let mut prefix = SpanTracker::new(ctx);
    let mut prefix_r = 0;
    for lp in &linear_parts {
        if prefix.insert(lp) {
            prefix_r += 1;
        } else {
            break;
        }
    }
    let m = (x.d() as u64).min(ctx.p()) as usize;
    let prefix_spans_initial = linear_parts[..m].iter().all(|lp| prefix.contains(lp));
    Ok(LinearPartProfile {
        linear_parts,
        span_rank,
        prefix_r,
        prefix_spans_initial,
        initial_count: m,
    })
}

/// Tangent dimension of the Fano scheme of k-planes at [Φ], with the
/// expected dimension (k+1)(n−k) − C(d+k, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneTangentReport {
    pub tangent_dim: usize,
    pub expected_dim: i64,
}

/// h⁰(N_{Φ/X}) as the nullity of the map sending n−k linear forms on Φ to
/// Σ λ_j ∂f/∂x_j|_Φ, computed in straightened coordinates.
pub fn fano_tangent_dim(x: &Hypersurface, phi: &LinearSubspace) -> Result<PlaneTangentReport> {
    if !contains(x, phi)? {
        return Err(Error::PlaneNotOnHypersurface);
    }
    let n = x.n();
    let d = x.d();
    let k = phi.dim();
    let ctx = x.ctx();
    let ch = straightening_change(phi)?;
    let g = ch.transport(x.f())?;
    let phi0 = LinearSubspace::coordinate_plane(ctx, k, n);
    let normal_partials: Vec<MultiPoly> = (k + 1..=n)
        .map(|j| phi0.restrict(&g.partial(j)))
        .collect::<Result<_>>()?;
    // Columns: (normal direction j, linear monomial on Φ); rows: degree-d
    // monomials on Φ.
    let rows_mono = monomials_of_degree(k + 1, d);
    let rows = rows_mono.len();
    let row_of = |exps: &[u32]| -> usize {
        rows_mono
            .binary_search_by(|m| m.as_slice().cmp(exps))
            .expect("product monomial stays in degree d")
    };
    let lin = monomials_of_degree(k + 1, 1);
    let cols = normal_partials.len() * lin.len();
    let mut mat = Matrix::zero(ctx, rows, cols);
    let mut col = 0;
    for np in &normal_partials {
        for mu in &lin {
            for (exps, c) in np.terms() {
                let prod: Vec<u32> =
                    mu.iter().zip(exps.iter()).map(|(a, b)| a + b).collect();
                let r = row_of(&prod);
                mat.set(r, col, ctx.add(mat.get(r, col), c));
            }
            col += 1;
        }
    }
    let rank = mat.rank();
    let expected = (k as i64 + 1) * (n as i64 - k as i64) - choose(d as u64 + k as u64, k as u64) as i64;
    Ok(PlaneTangentReport {
        tangent_dim: cols - rank,
        expected_dim: expected,
    })
}

/// Span of the nonempty-index linear parts of the flag expansion, and the
/// greedy downward basis extraction.
#[derive(Debug, Clone)]
pub struct DownwardReport {
    pub span_rank: usize,
    /// Greedily chosen downward-closed index set, in processing order
    /// (size, then lexicographic).
    pub witness: Vec<MultisetIndex>,
    /// True when the witness is a basis of the span.
    pub greedy_success: bool,
}

/// Tangent data of F^Λ(X) at a k-plane Φ containing the (k−1)-plane Λ:
/// rank of span{L(c_I) : I ≠ ∅} and a downward witness set when the greedy
/// extraction finds one.
pub fn tangent_f_lambda(
    x: &Hypersurface,
    lambda: &LinearSubspace,
    phi: &LinearSubspace,
) -> Result<DownwardReport> {
    if !phi.contains_subspace(lambda) {
        return Err(Error::InclusionViolated(
            "the small flag plane must lie in the big one".into(),
        ));
    }
    if !contains(x, phi)? {
        return Err(Error::InclusionViolated(
            "the big flag plane must lie on the hypersurface".into(),
        ));
    }
    let ctx = x.ctx();
    let n = x.n();
    let k = phi.dim();
    let ch = normalizing_change(lambda, phi)?;
    let g = ch.transport(x.f())?;
    let lambda0 = LinearSubspace::coordinate_plane(ctx, k - 1, n);
    let phi0 = LinearSubspace::coordinate_plane(ctx, k, n);
    let expansion = expand_around_subspace(&g, &lambda0, &phi0)?;
    let mut indexed: Vec<(MultisetIndex, Vec<Fq>)> = expansion
        .iter()
        .filter(|(i, _, _)| !i.is_empty())
        .map(|(i, _, lp)| (i.clone(), lp.to_vec()))
        .collect();
    indexed.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
    let mut all = SpanTracker::new(ctx);
    for (_, lp) in &indexed {
        all.insert(lp);
    }
    let span_rank = all.rank();
    let mut chosen: BTreeSet<MultisetIndex> = BTreeSet::new();
    let mut witness = Vec::new();
    let mut tracker = SpanTracker::new(ctx);
    for (i, lp) in &indexed {
        let admissible = (0..i.len()).all(|drop| {
            let mut sub = i.indices().to_vec();
            sub.remove(drop);
            sub.is_empty() || chosen.contains(&MultisetIndex::new(sub))
        });
        if admissible && tracker.insert(lp) {
            chosen.insert(i.clone());
            witness.push(i.clone());
        }
    }
    let greedy_success = witness.len() == span_rank;
    Ok(DownwardReport {
        span_rank,
        witness,
        greedy_success,
    })
}
