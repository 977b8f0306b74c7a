//! Exhaustive enumeration of linear subspaces of P^n over a finite field,
//! organized by reduced-echelon cells, plus the counting and sampling
//! surveys built on top of it: Fano point counts, extension-field growth
//! tables with heuristic dimension slopes, and singular-locus samples.

use crate::error::Error;
use crate::galois::{extend_field, FieldCtx, Fq};
use crate::kersys::scan_common_zeros;
use crate::linegeom::Hypersurface;
use crate::polyalg::{LinearSubspace, MultiPoly};
use crate::Result;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// All (k+1)-subsets of {0..n} in lexicographic order: the pivot patterns
/// of the echelon cells of the Grassmannian.
pub fn pivot_sets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..=k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that can still move
        let mut i = k + 1;
        while i > 0 {
            i -= 1;
            let limit = n - (k - i);
            if cur[i] < limit {
                cur[i] += 1;
                for j in i + 1..=k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Free coordinate positions of the echelon cell with the given pivots:
/// (row, col) with col right of the row's pivot and not itself a pivot.
pub fn free_positions(pivots: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut pos = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..=n {
            if !pivots.contains(&j) {
                pos.push((i, j));
            }
        }
    }
    pos
}

/// Visit every point of one echelon cell in odometer order (field elements
/// in encoding order, last free position fastest). The visitor returns
/// false to stop; the return value says whether enumeration ran to the end.
pub fn enumerate_cell<F>(ctx: &FieldCtx, pivots: &[usize], n: usize, mut visit: F) -> bool
where
    F: FnMut(&LinearSubspace) -> bool,
{
    let k = pivots.len() - 1;
    let pos = free_positions(pivots, n);
    let q = ctx.q();
    let elems: Vec<Fq> = ctx.elements().collect();
    let mut digits = vec![0u64; pos.len()];
    loop {
        let mut rows = vec![vec![Fq::ZERO; n + 1]; k + 1];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = ctx.one();
        }
        for (d, &(i, j)) in digits.iter().zip(&pos) {
            rows[i][j] = elems[*d as usize];
        }
        let sub = LinearSubspace::from_spanning_rows(ctx, &rows)
            .expect("echelon rows are independent");
        if !visit(&sub) {
            return false;
        }
        // odometer increment
        let mut idx = pos.len();
        loop {
            if idx == 0 {
                return true;
            }
            idx -= 1;
            digits[idx] += 1;
            if digits[idx] < q {
                break;
            }
            digits[idx] = 0;
        }
    }
}

/// Visit every k-plane of P^n exactly once, cell by cell in lexicographic
/// pivot order. k = n yields the single improper plane (the whole space).
pub fn enumerate_planes<F>(ctx: &FieldCtx, k: usize, n: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&LinearSubspace) -> bool,
{
    if k > n {
        return Err(Error::DegenerateInput(
            "subspace dimension exceeds the ambient space".into(),
        ));
    }
    for pivots in pivot_sets(k, n) {
        if !enumerate_cell(ctx, &pivots, n, &mut visit) {
            return Ok(());
        }
    }
    Ok(())
}

/// Gaussian binomial [n choose k]_q: the number of k-dimensional linear
/// subspaces of F_q^n. Projective k-planes of P^n are counted by
/// gaussian_binomial(q, n+1, k+1).
pub fn gaussian_binomial(q: u64, n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Per-cell tally of a census run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellReport {
    pub pivots: Vec<usize>,
    pub scanned: u64,
    pub matched: u64,
}

/// Aggregate of a full (or budget-refused) plane census.
#[derive(Debug, Clone)]
pub struct PlaneCensus {
    pub k: usize,
    pub n: usize,
    pub total_candidates: u128,
    pub matched: u64,
    pub cells: Vec<CellReport>,
    /// Every matching plane, in deterministic cell-major order.
    pub matches: Vec<LinearSubspace>,
}

/// Scan one echelon cell, keeping the planes the predicate accepts.
pub fn census_cell<P>(
    ctx: &FieldCtx,
    pivots: &[usize],
    n: usize,
    pred: P,
) -> (CellReport, Vec<LinearSubspace>)
where
    P: Fn(&LinearSubspace) -> bool,
{
    let mut scanned = 0u64;
    let mut matches = Vec::new();
    enumerate_cell(ctx, pivots, n, |sub| {
        scanned += 1;
        if pred(sub) {
            matches.push(sub.clone());
        }
        true
    });
    (
        CellReport {
            pivots: pivots.to_vec(),
            scanned,
            matched: matches.len() as u64,
        },
        matches,
    )
}

/// Run tasks 0..ntasks across worker threads, returning results in task
/// order so parallel and serial runs aggregate identically.
pub fn run_jobs<T, F>(jobs: usize, ntasks: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs <= 1 || ntasks <= 1 {
        return (0..ntasks).map(&work).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..ntasks).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(ntasks) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= ntasks {
                    break;
                }
                let r = work(i);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|o| o.expect("every task slot filled"))
        .collect()
}

/// Census of all k-planes of P^n against a predicate, fanned out over
/// echelon cells. Refuses up front when the candidate count exceeds the
/// budget. Deterministic regardless of the job count.
pub fn plane_census<P>(
    ctx: &FieldCtx,
    k: usize,
    n: usize,
    pred: P,
    max_candidates: u128,
    jobs: usize,
) -> Result<PlaneCensus>
where
    P: Fn(&LinearSubspace) -> bool + Sync,
{
    if k > n {
        return Err(Error::DegenerateInput(
            "subspace dimension exceeds the ambient space".into(),
        ));
    }
    let total = gaussian_binomial(ctx.q(), n as u64 + 1, k as u64 + 1);
    if total > max_candidates {
        return Err(Error::BudgetExceeded(format!(
            "census needs {total} candidate planes, budget is {max_candidates}"
        )));
    }
    let cells = pivot_sets(k, n);
    let results = run_jobs(jobs, cells.len(), |i| census_cell(ctx, &cells[i], n, &pred));
    let mut reports = Vec::with_capacity(results.len());
    let mut matches = Vec::new();
    let mut matched = 0u64;
    let mut scanned = 0u128;
    for (report, found) in results {
        matched += report.matched;
        scanned += report.scanned as u128;
        reports.push(report);
        matches.extend(found);
    }
    debug_assert_eq!(scanned, total, "cells must partition the Grassmannian");
    Ok(PlaneCensus {
        k,
        n,
        total_candidates: total,
        matched,
        cells: reports,
        matches,
    })
}

/// Number of k-planes over the coefficient field contained in X.
pub fn fano_point_count(
    x: &Hypersurface,
    k: usize,
    max_candidates: u128,
    jobs: usize,
) -> Result<u64> {
    let f = x.f();
    let census = plane_census(
        x.ctx(),
        k,
        x.n(),
        |sub| sub.restrict(f).map(|r| r.is_zero()).unwrap_or(false),
        max_candidates,
        jobs,
    )?;
    Ok(census.matched)
}

/// Slope of log(count) against log(field size) between the last two
/// nonzero entries; the standard point-count heuristic for dimension.
/// None means every count was zero; a single nonzero count reads as
/// dimension 0.
pub fn slope_estimate(q: u64, counts: &[u64]) -> Option<f64> {
    let nz: Vec<(usize, u64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i, c))
        .collect();
    match nz.len() {
        0 => None,
        1 => Some(0.0),
        m => {
            let (i1, c1) = nz[m - 2];
            let (i2, c2) = nz[m - 1];
            Some(((c2 as f64).ln() - (c1 as f64).ln()) / ((q as f64).ln() * (i2 - i1) as f64))
        }
    }
}

/// Point counts of F_k(X) over a tower of extensions with the heuristic
/// slope; counts[i] is the count over F_{q^(i+1)}.
#[derive(Debug, Clone)]
pub struct DimensionEstimate {
    pub q: u64,
    pub counts: Vec<u64>,
    /// Heuristic only — log-growth slope, not a certified dimension.
    pub estimate: Option<f64>,
}

/// Count k-planes on X over F_{q^e} for e = 1..E and fit the growth
/// slope. The slope is a heuristic estimate of dim F_k(X); an empty table
/// gives None.
pub fn dimension_estimate(
    x: &Hypersurface,
    k: usize,
    e_max: u32,
    max_candidates: u128,
    jobs: usize,
) -> Result<DimensionEstimate> {
    if e_max == 0 {
        return Err(Error::DegenerateInput("need at least one extension".into()));
    }
    let mut counts = Vec::new();
    for e in 1..=e_max {
        let count = if e == 1 {
            fano_point_count(x, k, max_candidates, jobs)?
        } else {
            let (_, emb) = extend_field(x.ctx(), e)?;
            let lifted = Hypersurface::new(x.f().lift(&emb))?;
            fano_point_count(&lifted, k, max_candidates, jobs)?
        };
        counts.push(count);
    }
    let estimate = slope_estimate(x.ctx().q(), &counts);
    Ok(DimensionEstimate {
        q: x.ctx().q(),
        counts,
        estimate,
    })
}

/// Counts of projective singular points of V(g) (common zeros of g and all
/// its partials) over a tower of extensions, with the heuristic dimension
/// slope. None estimate means the sampled singular locus is empty.
#[derive(Debug, Clone)]
pub struct SingularSample {
    pub q: u64,
    pub counts: Vec<u64>,
    /// Heuristic only — log-growth slope of the singular point counts.
    pub dim_estimate: Option<f64>,
}

/// Exhaustively count singular points of V(g) over F_{q^e}, e = 1..E.
pub fn singular_point_sample(g: &MultiPoly, e_max: u32, max_points: u128) -> Result<SingularSample> {
    if g.is_zero() {
        return Err(Error::DegenerateInput(
            "the zero form has no singular-locus sample".into(),
        ));
    }
    if e_max == 0 {
        return Err(Error::DegenerateInput("need at least one extension".into()));
    }
    let n = g.nvars() - 1;
    let base: Vec<MultiPoly> = std::iter::once(g.clone())
        .chain((0..=n).map(|i| g.partial(i)))
        .collect();
    let q = g.ctx().q();
    let mut counts = Vec::new();
    for e in 1..=e_max {
        let big_q = (q as u128)
            .checked_pow(e)
            .ok_or_else(|| Error::BudgetExceeded("field size overflows".into()))?;
        let points = big_q
            .checked_pow(n as u32 + 1)
            .map(|t| (t - 1) / (big_q - 1))
            .ok_or_else(|| Error::BudgetExceeded("point count overflows".into()))?;
        if points > max_points {
            return Err(Error::BudgetExceeded(format!(
                "scan needs {points} points over F_{{{q}^{e}}}, budget is {max_points}"
            )));
        }
        let forms: Vec<MultiPoly> = if e == 1 {
            base.clone()
        } else {
            let (_, emb) = extend_field(g.ctx(), e)?;
            base.iter().map(|f| f.lift(&emb)).collect()
        };
        let mut count = 0u64;
        scan_common_zeros(&forms, |_| {
            count += 1;
            true
        })?;
        counts.push(count);
    }
    let dim_estimate = slope_estimate(q, &counts);
    Ok(SingularSample {
        q,
        counts,
        dim_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::make_field;
    use crate::polyalg::{monomials_of_degree, CoordinateChange};
    use crate::rng::Rng;
    use std::collections::BTreeSet;

    #[test]
    fn line_counts_match_gaussian_binomials() {
        // (field, n, frozen projective line count)
        let cases: [(u64, u32, usize, u128); 5] = [
            (2, 1, 3, 35),
            (3, 1, 3, 130),
            (5, 1, 3, 806),
            (2, 2, 4, 5797),
            (2, 1, 4, 155),
        ];
        for (p, e, n, expect) in cases {
            let ctx = make_field(p, e).unwrap();
            assert_eq!(gaussian_binomial(ctx.q(), n as u64 + 1, 2), expect);
            let mut count = 0u128;
            enumerate_planes(&ctx, 1, n, |_| {
                count += 1;
                true
            })
            .unwrap();
            assert_eq!(count, expect);
        }
        assert_eq!(gaussian_binomial(5, 5, 2), 20306);
        assert_eq!(gaussian_binomial(9, 5, 2), 605242);
    }

    #[test]
    fn enumeration_is_duplicate_free_and_canonical() {
        let f3 = make_field(3, 1).unwrap();
        let mut seen = BTreeSet::new();
        enumerate_planes(&f3, 1, 3, |l| {
            let key: Vec<Vec<u32>> = l
                .basis_rows()
                .iter()
                .map(|r| r.iter().map(|c| c.encoding()).collect())
                .collect();
            assert!(seen.insert(key), "duplicate subspace emitted");
            assert_eq!(l.dim(), 1);
            assert_eq!(l.ambient_dim(), 3);
            true
        })
        .unwrap();
        assert_eq!(seen.len() as u128, gaussian_binomial(3, 4, 2));
    }

    #[test]
    fn early_stop_is_respected() {
        let f2 = make_field(2, 1).unwrap();
        let mut count = 0;
        enumerate_planes(&f2, 1, 3, |_| {
            count += 1;
            count < 10
        })
        .unwrap();
        assert_eq!(count, 10);
    }

    #[test]
    fn whole_space_is_the_single_top_plane() {
        let f3 = make_field(3, 1).unwrap();
        let mut count = 0;
        enumerate_planes(&f3, 3, 3, |l| {
            assert_eq!(l.dim(), 3);
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, 1);
        assert_eq!(gaussian_binomial(3, 4, 4), 1);
        assert!(enumerate_planes(&f3, 4, 3, |_| true).is_err());
    }

    fn split_quadric(ctx: &FieldCtx) -> Hypersurface {
        let f = MultiPoly::monomial(ctx, vec![1, 0, 0, 1], ctx.one())
            .unwrap()
            .sub(&MultiPoly::monomial(ctx, vec![0, 1, 1, 0], ctx.one()).unwrap())
            .unwrap();
        Hypersurface::new(f).unwrap()
    }

    fn fermat(ctx: &FieldCtx, n: usize, d: u32) -> Hypersurface {
        let mut f = MultiPoly::zero(ctx, n + 1, d);
        for i in 0..=n {
            let mut exps = vec![0u32; n + 1];
            exps[i] = d;
            f = f
                .add(&MultiPoly::monomial(ctx, exps, ctx.one()).unwrap())
                .unwrap();
        }
        Hypersurface::new(f).unwrap()
    }

    #[test]
    fn split_quadric_ruling_count() {
        // Two rulings, each a P^1 of lines: 2(q+1) lines over F_q.
        let f3 = make_field(3, 1).unwrap();
        let x = split_quadric(&f3);
        let q = f3.q();
        let ruling_oracle = 2 * (q + 1);
        assert_eq!(
            fano_point_count(&x, 1, 1_000_000, 1).unwrap(),
            ruling_oracle
        );
        // Projective invariance: conjugating X by a random change of
        // coordinates preserves the count.
        let mut rng = Rng::new(12);
        for _ in 0..3 {
            let ch = loop {
                let rows: Vec<Vec<Fq>> = (0..4)
                    .map(|_| (0..4).map(|_| f3.rand(&mut rng)).collect())
                    .collect();
                if let Ok(ch) = CoordinateChange::from_rows(&f3, &rows) {
                    break ch;
                }
            };
            let moved = Hypersurface::new(ch.transport(x.f()).unwrap()).unwrap();
            assert_eq!(
                fano_point_count(&moved, 1, 1_000_000, 1).unwrap(),
                ruling_oracle
            );
        }
    }

    #[test]
    fn cubic_surface_has_twenty_seven_lines() {
        let f4 = make_field(2, 2).unwrap();
        let x = fermat(&f4, 3, 3);
        assert_eq!(fano_point_count(&x, 1, 1_000_000, 1).unwrap(), 27);
    }

    #[test]
    fn parallel_census_matches_serial() {
        let f4 = make_field(2, 2).unwrap();
        let x = fermat(&f4, 3, 3);
        let f = x.f();
        let pred = |sub: &LinearSubspace| sub.restrict(f).map(|r| r.is_zero()).unwrap_or(false);
        let serial = plane_census(&f4, 1, 3, pred, 1_000_000, 1).unwrap();
        let parallel = plane_census(&f4, 1, 3, pred, 1_000_000, 4).unwrap();
        assert_eq!(serial.matched, 27);
        assert_eq!(serial.matched, parallel.matched);
        assert_eq!(serial.cells, parallel.cells);
        assert_eq!(serial.matches.len(), parallel.matches.len());
        for (a, b) in serial.matches.iter().zip(&parallel.matches) {
            assert_eq!(a.basis_rows(), b.basis_rows());
        }
    }

    #[test]
    fn dimension_estimate_stabilizes_on_a_finite_fano() {
        // All 27 lines of this cubic surface are already defined over F_4,
        // so the F_16 recount stays 27 and the slope is exactly zero.
        let f4 = make_field(2, 2).unwrap();
        let x = fermat(&f4, 3, 3);
        let est = dimension_estimate(&x, 1, 2, 1_000_000, 4).unwrap();
        assert_eq!(est.counts, vec![27, 27]);
        assert_eq!(est.estimate, Some(0.0));
    }

    #[test]
    fn dimension_estimate_sees_the_line_surface_of_a_cubic_threefold() {
        // A smooth cubic threefold carries a 2-dimensional family of
        // lines; the F_2 → F_4 growth slope should sit near 2.
        let f2 = make_field(2, 1).unwrap();
        let mut rng = Rng::new(21);
        let x = loop {
            let mut f = MultiPoly::zero(&f2, 5, 3);
            for exps in monomials_of_degree(5, 3) {
                let c = f2.rand(&mut rng);
                if !c.is_zero() {
                    f = f.add(&MultiPoly::monomial(&f2, exps, c).unwrap()).unwrap();
                }
            }
            if f.is_zero() {
                continue;
            }
            let cand = Hypersurface::new(f).unwrap();
            if crate::linegeom::smoothness_certificate(&cand).unwrap() {
                break cand;
            }
        };
        let est = dimension_estimate(&x, 1, 2, 1_000_000, 4).unwrap();
        assert!(est.counts[0] > 0, "counts: {:?}", est.counts);
        let slope = est.estimate.unwrap();
        assert!(
            (slope - 2.0).abs() < 0.8,
            "slope {slope} should sit near the family dimension 2 (counts {:?})",
            est.counts
        );
    }

    #[test]
    fn empty_fano_reports_no_estimate() {
        // A generic quartic surface contains no lines at all.
        let f5 = make_field(5, 1).unwrap();
        let mut rng = Rng::new(1);
        let x = loop {
            let mut f = MultiPoly::zero(&f5, 4, 4);
            for exps in monomials_of_degree(4, 4) {
                let c = f5.rand(&mut rng);
                if !c.is_zero() {
                    f = f.add(&MultiPoly::monomial(&f5, exps, c).unwrap()).unwrap();
                }
            }
            if !f.is_zero() {
                break Hypersurface::new(f).unwrap();
            }
        };
        let est = dimension_estimate(&x, 1, 2, 1_000_000, 4).unwrap();
        assert_eq!(est.counts, vec![0, 0]);
        assert_eq!(est.estimate, None);
    }

    #[test]
    fn singular_samples_match_hand_counts() {
        // Char 2, g = x_0²: the gradient vanishes identically, so the
        // whole hyperplane V(x_0) ⊂ P² is singular: q^e + 1 points.
        let f2 = make_field(2, 1).unwrap();
        let g = MultiPoly::monomial(&f2, vec![2, 0, 0], f2.one()).unwrap();
        let s = singular_point_sample(&g, 3, 10_000_000).unwrap();
        assert_eq!(s.counts, vec![3, 5, 9]);
        let est = s.dim_estimate.unwrap();
        assert!((est - 1.0).abs() < 0.3, "estimate {est} should approach 1");

        // p odd, full-rank quadric: projectively no singular point.
        let f5 = make_field(5, 1).unwrap();
        let mut q = MultiPoly::zero(&f5, 4, 2);
        for i in 0..4 {
            let mut exps = vec![0u32; 4];
            exps[i] = 2;
            q = q.add(&MultiPoly::monomial(&f5, exps, f5.one()).unwrap()).unwrap();
        }
        let s = singular_point_sample(&q, 2, 10_000_000).unwrap();
        assert_eq!(s.counts, vec![0, 0]);
        assert_eq!(s.dim_estimate, None);

        // Char 3, g = x_1³ (a partial derivative of a Fermat quartic):
        // everywhere non-reduced, singular along the whole hyperplane.
        let f3 = make_field(3, 1).unwrap();
        let g = MultiPoly::monomial(&f3, vec![0, 3, 0, 0], f3.one()).unwrap();
        let s = singular_point_sample(&g, 2, 10_000_000).unwrap();
        assert_eq!(s.counts, vec![13, 91]);
        let est = s.dim_estimate.unwrap();
        assert!((est - 2.0).abs() < 0.3, "estimate {est} should approach 2");
    }

    #[test]
    fn budgets_are_enforced() {
        let f4 = make_field(2, 2).unwrap();
        let x = fermat(&f4, 3, 3);
        assert!(matches!(
            fano_point_count(&x, 1, 10, 1).unwrap_err(),
            Error::BudgetExceeded(_)
        ));
        let f2 = make_field(2, 1).unwrap();
        let g = MultiPoly::monomial(&f2, vec![2, 0, 0], f2.one()).unwrap();
        assert!(matches!(
            singular_point_sample(&g, 3, 5).unwrap_err(),
            Error::BudgetExceeded(_)
        ));
    }
}
