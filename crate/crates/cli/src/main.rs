//! `freeline`: splitting types, free lines, and free rational curves on
//! hypersurfaces over finite fields.
//!
//! Exit codes: 0 = all assertions passed, 1 = a mathematical assertion
//! failed (the report says which), 2 = usage or input error, 3 = budget
//! exceeded. Malformed input never panics.

use clap::{Parser, Subcommand, ValueEnum};
use freeline_cli::input;
use freeline_cli::report::{splitting_value, OutputMode, Report};
use freeline_cli::suite::{run_suite, SuiteKind};
use freeline_core::census::{
    census_cell, dimension_estimate, gaussian_binomial, pivot_sets, plane_census, run_jobs,
};
use freeline_core::fermatlab::{audit_free_curve, audit_no_free_lines, DEFAULT_LINE_BUDGET};
use freeline_core::galois::{extend_field, Embedding};
use freeline_core::kersys::{
    globally_generated, restricted_splitting, search_free_curve, RationalCurve,
};
use freeline_core::linegeom::{
    contains, fano_tangent_dim, line_is_free, linear_part_profile, normal_bundle_line,
    tangent_f_lambda, Hypersurface,
};
use freeline_core::p1split::splitting_type;
use freeline_core::polyalg::LinearSubspace;
use freeline_core::rng::Rng;
use freeline_core::{Error, Result};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AuditMode {
    /// Check the standard free rational curve on a Fermat hypersurface.
    FreeCurve,
    /// Census all lines on the degree-(p+1) Fermat over F_{p^2}.
    NoFreeLines,
}

#[derive(Parser, Debug)]
#[command(
    name = "freeline",
    version,
    about = "Splitting types, free lines, and free rational curves on hypersurfaces over finite fields"
)]
struct Cli {
    /// Seed for all sampled operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Lift inputs to the degree-EXT extension field before computing.
    #[arg(long, global = true, default_value_t = 1)]
    ext: u32,

    /// Worker threads for census fan-out [default: $FREELINE_LAB_JOBS or 1].
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Candidate or sample budget for census and search commands.
    #[arg(long, global = true)]
    budget: Option<u128>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Resumable state file for long censuses.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Splitting type of the kernel of a twisted map on the projective line.
    Splitting {
        /// JSON map file.
        #[arg(long)]
        map: PathBuf,
    },
    /// Normal-bundle splitting and freeness of a line on a hypersurface.
    LineReport {
        #[arg(long)]
        hypersurface: PathBuf,
        /// JSON subspace file spanning the line.
        #[arg(long)]
        line: PathBuf,
        /// Also expand around a seeded sample point of the line.
        #[arg(long)]
        profile: bool,
    },
    /// Tangent dimension of the k-plane locus at a plane of a hypersurface.
    KplaneReport {
        #[arg(long)]
        hypersurface: PathBuf,
        /// JSON subspace file spanning the k-plane.
        #[arg(long)]
        plane: PathBuf,
        /// Optional contained (k-1)-plane for the flag tangent report.
        #[arg(long)]
        inner: Option<PathBuf>,
    },
    /// Base-point-freeness certificate for a linear system of forms.
    Bpf {
        #[arg(long)]
        system: PathBuf,
    },
    /// Splitting of the kernel bundle restricted to a rational curve.
    KernelSplitting {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Staged search for a curve with globally generated restricted kernel.
    SearchFreeCurve {
        #[arg(long)]
        system: PathBuf,
    },
    /// Audits of classical facts about Fermat hypersurfaces.
    FermatAudit {
        #[arg(long, value_enum)]
        mode: AuditMode,
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        /// Projective ambient dimension (no-free-lines mode).
        #[arg(long)]
        n: Option<usize>,
        /// Hypersurface degree (free-curve mode).
        #[arg(long)]
        d: Option<u32>,
        /// Target projective space of the curve (free-curve mode).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Enumerate the k-planes lying on a hypersurface, cell by cell.
    Census {
        #[arg(long)]
        hypersurface: PathBuf,
        /// Plane dimension to enumerate.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Also count over extensions up to this degree and estimate the
        /// growth slope (reported under "heuristic").
        #[arg(long)]
        estimate: Option<u32>,
    },
    /// Run the acceptance suite and report each criterion.
    VerifyPaper {
        /// "quick" or "full".
        #[arg(long, default_value = "quick")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let jobs = cli
        .jobs
        .or_else(|| {
            std::env::var("FREELINE_LAB_JOBS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    match run(&cli, jobs) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 1 = internal cross-checks disagreed (a mathematical assertion failed),
/// 2 = the input or its preconditions were invalid, 3 = budget exceeded.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) | Error::BudgetExhausted(_) => 3,
        Error::PipelineDisagreement(_) | Error::InternalInconsistency(_) => 1,
        _ => 2,
    }
}

fn mode(cli: &Cli) -> OutputMode {
    match cli.output {
        Output::Text => OutputMode::Text,
        Output::Json => OutputMode::Json,
    }
}

fn load_path(path: &Path) -> Result<(String, String)> {
    let text = input::read_file(path)?;
    Ok((text, path.display().to_string()))
}

fn lift_hypersurface(x: Hypersurface, ext: u32) -> Result<Hypersurface> {
    if ext <= 1 {
        return Ok(x);
    }
    let (_big, emb) = extend_field(x.ctx(), ext)?;
    Hypersurface::new(x.f().lift(&emb))
}

fn lift_subspace(sub: LinearSubspace, emb: Option<&Embedding>) -> LinearSubspace {
    match emb {
        Some(emb) => sub.lift(emb),
        None => sub,
    }
}

fn lift_curve(c: RationalCurve, ext: u32) -> Result<RationalCurve> {
    if ext <= 1 {
        return Ok(c);
    }
    let (_big, emb) = extend_field(c.ctx(), ext)?;
    RationalCurve::new(c.components().iter().map(|g| g.lift(&emb)).collect())
}

fn subspace_rows_json(sub: &LinearSubspace) -> Value {
    Value::Array(
        sub.basis_rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|c| Value::from(c.encoding())).collect()))
            .collect(),
    )
}

fn count_json(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

fn run(cli: &Cli, jobs: usize) -> Result<u8> {
    match &cli.cmd {
        Cmd::Splitting { map } => {
            let (text, src) = load_path(map)?;
            let m = input::parse_map(&text, &src)?;
            let st = splitting_type(&m)?;
            let mut r = Report::new("splitting");
            r.set("splitting", splitting_value(&st));
            r.set("display", Value::from(st.to_string()));
            r.line(st.to_string());
            r.emit(mode(cli));
            Ok(0)
        }
        Cmd::LineReport {
            hypersurface,
            line,
            profile,
        } => {
            let (xt, xsrc) = load_path(hypersurface)?;
            let x = lift_hypersurface(input::parse_hypersurface(&xt, &xsrc)?, cli.ext)?;
            let (lt, lsrc) = load_path(line)?;
            let emb = if cli.ext > 1 {
                let base = input::parse_subspace(&lt, &lsrc)?;
                Some((base.clone(), extend_field(base.ctx(), cli.ext)?.1))
            } else {
                None
            };
            let l = match emb {
                Some((base, ref e)) => lift_subspace(base, Some(e)),
                None => input::parse_subspace(&lt, &lsrc)?,
            };
            let mut r = Report::new("line-report");
            if l.dim() != 1 {
                return Err(Error::ValidationError(format!(
                    "line-report needs a line, got a {}-plane",
                    l.dim()
                )));
            }
            if !contains(&x, &l)? {
                r.set("contained", Value::from(false));
                r.line("the line does not lie on the hypersurface");
                r.emit(mode(cli));
                return Ok(0);
            }
            r.set("contained", Value::from(true));
            match normal_bundle_line(&x, &l) {
                Err(Error::SingularAlongLine) => {
                    r.set("smooth_along_line", Value::from(false));
                    r.line("the hypersurface is singular somewhere along the line");
                    r.emit(mode(cli));
                    Ok(0)
                }
                Err(e) => Err(e),
                Ok(report) => {
                    // Independent pipeline must agree or this errors (exit 1).
                    let free = line_is_free(&x, &l)?;
                    r.set("smooth_along_line", Value::from(true));
                    r.set("splitting", splitting_value(&report.splitting));
                    r.set("display", Value::from(report.splitting.to_string()));
                    r.set("h0", Value::from(report.h0 as u64));
                    r.set("h1_minus1", Value::from(report.h1_minus1 as u64));
                    r.set("free", Value::from(report.free));
                    r.set("expected_dim", Value::from(report.expected_dim));
                    r.line(format!(
                        "splitting {} — {}, h⁰(N) = {}, expected dim = {}",
                        report.splitting,
                        if free { "free" } else { "not free" },
                        report.h0,
                        report.expected_dim
                    ));
                    if *profile {
                        let mut rng = Rng::new(cli.seed);
                        let q = l.random_point(&mut rng);
                        let prof = linear_part_profile(&x, &l, &q)?;
                        r.set(
                            "point_profile",
                            json!({
                                "seed": cli.seed,
                                "span_rank": prof.span_rank,
                                "prefix_r": prof.prefix_r,
                                "prefix_spans_initial": prof.prefix_spans_initial,
                                "initial_count": prof.initial_count,
                            }),
                        );
                        r.line(format!(
                            "expansion at a seeded point: span rank {}, independent prefix {} of {}",
                            prof.span_rank, prof.prefix_r, prof.initial_count
                        ));
                    }
                    r.emit(mode(cli));
                    Ok(0)
                }
            }
        }
        Cmd::KplaneReport {
            hypersurface,
            plane,
            inner,
        } => {
            let (xt, xsrc) = load_path(hypersurface)?;
            let x = lift_hypersurface(input::parse_hypersurface(&xt, &xsrc)?, cli.ext)?;
            let (pt, psrc) = load_path(plane)?;
            let mut phi = input::parse_subspace(&pt, &psrc)?;
            if cli.ext > 1 {
                let e = extend_field(phi.ctx(), cli.ext)?.1;
                phi = phi.lift(&e);
            }
            let mut r = Report::new("kplane-report");
            r.set("k", Value::from(phi.dim() as u64));
            if !contains(&x, &phi)? {
                r.set("contained", Value::from(false));
                r.line("the plane does not lie on the hypersurface");
                r.emit(mode(cli));
                return Ok(0);
            }
            r.set("contained", Value::from(true));
            let report = fano_tangent_dim(&x, &phi)?;
            r.set("tangent_dim", Value::from(report.tangent_dim as u64));
            r.set("expected_dim", Value::from(report.expected_dim));
            r.line(format!(
                "tangent dimension {} (expected dimension {})",
                report.tangent_dim, report.expected_dim
            ));
            if let Some(inner_path) = inner {
                let (it, isrc) = load_path(inner_path)?;
                let mut lambda = input::parse_subspace(&it, &isrc)?;
                if cli.ext > 1 {
                    let e = extend_field(lambda.ctx(), cli.ext)?.1;
                    lambda = lambda.lift(&e);
                }
                let down = tangent_f_lambda(&x, &lambda, &phi)?;
                let witness: Vec<Value> = down
                    .witness
                    .iter()
                    .map(|i| {
                        Value::Array(i.indices().iter().map(|&v| Value::from(v)).collect())
                    })
                    .collect();
                r.set(
                    "flag",
                    json!({
                        "span_rank": down.span_rank,
                        "greedy_success": down.greedy_success,
                        "witness": witness,
                    }),
                );
                r.line(format!(
                    "flag span rank {} with downward witness of size {} (greedy {})",
                    down.span_rank,
                    down.witness.len(),
                    if down.greedy_success { "succeeded" } else { "failed" }
                ));
            }
            r.emit(mode(cli));
            Ok(0)
        }
        Cmd::Bpf { system } => {
            let (st, ssrc) = load_path(system)?;
            let v = input::parse_system(&st, &ssrc)?;
            let bpf = v.is_basepoint_free();
            let mut r = Report::new("bpf");
            r.set("basepoint_free", Value::from(bpf));
            r.set("k", Value::from(v.k() as u64));
            r.set("r", Value::from(v.r()));
            r.set("gens", Value::from(v.gens().len() as u64));
            r.line(format!(
                "{} generators of degree {} on P^{}: {}",
                v.gens().len(),
                v.r(),
                v.k(),
                if bpf {
                    "base-point free"
                } else {
                    "not base-point free"
                }
            ));
            r.emit(mode(cli));
            Ok(0)
        }
        Cmd::KernelSplitting { system, curve } => {
            let (st, ssrc) = load_path(system)?;
            let mut v = input::parse_system(&st, &ssrc)?;
            let (ct, csrc) = load_path(curve)?;
            let mut c = input::parse_curve(&ct, &csrc)?;
            if cli.ext > 1 {
                let emb = extend_field(v.ctx(), cli.ext)?.1;
                v = v.lift(&emb);
                c = lift_curve(c, cli.ext)?;
            }
            if v.ctx() != c.ctx() {
                return Err(Error::ValidationError(
                    "the system and the curve live over different fields".into(),
                ));
            }
            let split = restricted_splitting(&v, &c)?;
            let gg = globally_generated(&v, &c)?;
            let mut r = Report::new("kernel-splitting");
            r.set("splitting", splitting_value(&split));
            r.set("display", Value::from(split.to_string()));
            r.set("globally_generated", Value::from(gg));
            r.set("curve_degree", Value::from(c.degree()));
            r.line(format!(
                "restricted kernel splits as {} — {}globally generated",
                split,
                if gg { "" } else { "not " }
            ));
            r.emit(mode(cli));
            Ok(0)
        }
        Cmd::SearchFreeCurve { system } => {
            let (st, ssrc) = load_path(system)?;
            let v = input::parse_system(&st, &ssrc)?;
            let budget = cli.budget.unwrap_or(2_000).min(u128::from(u64::MAX)) as u64;
            let witness = search_free_curve(&v, budget, cli.seed, cli.ext)?;
            let mut r = Report::new("search-free-curve");
            match witness {
                Some(w) => {
                    let comps: Vec<Value> = w
                        .curve
                        .components()
                        .iter()
                        .map(|g| {
                            Value::Array(
                                g.coeffs()
                                    .iter()
                                    .map(|c| Value::from(c.encoding()))
                                    .collect(),
                            )
                        })
                        .collect();
                    r.set("found", Value::from(true));
                    r.set("stage", Value::from(w.stage.name()));
                    r.set("sample_index", Value::from(w.sample_index));
                    r.set("extension", Value::from(w.extension));
                    r.set("splitting", splitting_value(&w.splitting));
                    r.set("display", Value::from(w.splitting.to_string()));
                    r.set("components", Value::Array(comps));
                    r.line(format!(
                        "found a free curve at stage {}, sample {}, splitting {}",
                        w.stage.name(),
                        w.sample_index,
                        w.splitting
                    ));
                    r.emit(mode(cli));
                    Ok(0)
                }
                None => {
                    r.set("found", Value::from(false));
                    r.set("budget", Value::from(budget));
                    r.line(format!("no free curve within a budget of {budget} samples"));
                    r.emit(mode(cli));
                    Ok(3)
                }
            }
        }
        Cmd::FermatAudit { mode: m, p, n, d, k } => match m {
            AuditMode::FreeCurve => {
                let (Some(d), Some(k)) = (*d, *k) else {
                    return Err(Error::ValidationError(
                        "--mode free-curve requires --d and --k".into(),
                    ));
                };
                let ctx = freeline_core::galois::make_field(*p, 1)?;
                let audit = audit_free_curve(&ctx, d, k)?;
                let mut r = Report::new("fermat-audit");
                r.set("mode", Value::from("free-curve"));
                r.set("p", Value::from(audit.p));
                r.set("d", Value::from(audit.d));
                r.set("k", Value::from(audit.k as u64));
                r.set("field_size", Value::from(audit.field_size));
                r.set("mu", Value::from(audit.mu.encoding()));
                r.set("contained", Value::from(audit.contained));
                r.set(
                    "source_twists",
                    Value::Array(audit.source_twists.iter().map(|&t| Value::from(t)).collect()),
                );
                r.set("target_twist", Value::from(audit.target_twist));
                r.set("splitting", splitting_value(&audit.splitting));
                r.set("display", Value::from(audit.splitting.to_string()));
                r.set("free", Value::from(audit.free));
                let ok = audit.contained && audit.free;
                r.line(format!(
                    "degree-{d} curve to P^{k} over F_{}: contained = {}, splitting {}, {}",
                    audit.field_size,
                    audit.contained,
                    audit.splitting,
                    if audit.free { "free" } else { "NOT free" }
                ));
                if !ok {
                    r.set(
                        "failure",
                        Value::from("the standard curve is not a free curve on this Fermat"),
                    );
                }
                r.emit(mode(cli));
                Ok(if ok { 0 } else { 1 })
            }
            AuditMode::NoFreeLines => {
                let Some(n) = *n else {
                    return Err(Error::ValidationError(
                        "--mode no-free-lines requires --n".into(),
                    ));
                };
                let budget = cli.budget.unwrap_or(DEFAULT_LINE_BUDGET);
                let audit = audit_no_free_lines(*p, n, budget, jobs)?;
                let mut r = Report::new("fermat-audit");
                r.set("mode", Value::from("no-free-lines"));
                r.set("p", Value::from(audit.p));
                r.set("n", Value::from(audit.n as u64));
                r.set("d", Value::from(audit.d));
                r.set("field_note", Value::from(audit.field_note.clone()));
                r.set("caveat", Value::from(audit.caveat.clone()));
                r.set("candidates", count_json(audit.candidates));
                r.set("lines_on_x", Value::from(audit.lines_on_x));
                r.set("free_lines", Value::from(audit.free_lines));
                let hist: Vec<Value> = audit
                    .splitting_histogram
                    .iter()
                    .map(|(st, count)| {
                        json!({
                            "parts": st.parts(),
                            "display": st.to_string(),
                            "count": count,
                        })
                    })
                    .collect();
                r.set("splitting_histogram", Value::Array(hist));
                let h0s: Vec<Value> = audit
                    .h0_histogram
                    .iter()
                    .map(|(h0, count)| json!({ "h0": h0, "count": count }))
                    .collect();
                r.set("h0_histogram", Value::Array(h0s));
                r.set(
                    "min_h0",
                    audit
                        .min_h0
                        .map(|m| Value::from(m as u64))
                        .unwrap_or(Value::Null),
                );
                r.set("h0_lower_bound", Value::from(audit.h0_lower_bound));
                let ok = audit.no_free_lines();
                r.line(format!(
                    "degree-{} Fermat in P^{n}, {}: {} of {} candidate lines lie on X, {} free",
                    audit.d, audit.field_note, audit.lines_on_x, audit.candidates, audit.free_lines
                ));
                for (st, count) in &audit.splitting_histogram {
                    r.line(format!("  splitting {st}: {count} lines"));
                }
                r.line(audit.caveat.clone());
                if !ok {
                    r.set("failure", Value::from("a free line exists on this Fermat"));
                }
                r.emit(mode(cli));
                Ok(if ok { 0 } else { 1 })
            }
        },
        Cmd::Census {
            hypersurface,
            k,
            estimate,
        } => {
            let (xt, xsrc) = load_path(hypersurface)?;
            let x = lift_hypersurface(input::parse_hypersurface(&xt, &xsrc)?, cli.ext)?;
            let budget = cli.budget.unwrap_or(50_000_000);
            run_census(cli, jobs, &x, *k, *estimate, budget)
        }
        Cmd::VerifyPaper { suite } => {
            let Some(kind) = SuiteKind::parse(suite) else {
                return Err(Error::ValidationError(format!(
                    "unknown suite '{suite}' (expected quick or full)"
                )));
            };
            let outcomes = run_suite(kind, cli.seed, jobs);
            let all_pass = outcomes.iter().all(|o| o.pass);
            let mut r = Report::new("verify-paper");
            r.set("suite", Value::from(kind.name()));
            r.set("seed", Value::from(cli.seed));
            r.set("pass", Value::from(all_pass));
            let criteria: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "name": o.name,
                        "pass": o.pass,
                        "detail": o.detail,
                    })
                })
                .collect();
            r.set("criteria", Value::Array(criteria));
            for o in &outcomes {
                r.line(format!(
                    "CRITERION {}: {} — {} ({} ms)",
                    o.id,
                    if o.pass { "PASS" } else { "FAIL" },
                    o.detail,
                    o.millis
                ));
            }
            r.line(format!(
                "suite {}: {}",
                kind.name(),
                if all_pass { "all criteria passed" } else { "FAILURES PRESENT" }
            ));
            r.emit(mode(cli));
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}

/// Stable fingerprint of a census configuration, stored in checkpoints so a
/// resumed run cannot silently mix hypersurfaces.
fn census_fingerprint(x: &Hypersurface, k: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut mix = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x1000_0000_01b3);
    };
    mix(x.ctx().q());
    mix(x.n() as u64);
    mix(x.d() as u64);
    mix(k as u64);
    for (exps, c) in x.f().terms() {
        for &e in exps {
            mix(e as u64 + 1);
        }
        mix(c.encoding() as u64 + 1);
    }
    h
}

fn run_census(
    cli: &Cli,
    jobs: usize,
    x: &Hypersurface,
    k: usize,
    estimate: Option<u32>,
    budget: u128,
) -> Result<u8> {
    let n = x.n();
    let ctx = x.ctx().clone();
    let mut r = Report::new("census");
    r.set("q", Value::from(ctx.q()));
    r.set("k", Value::from(k as u64));
    r.set("n", Value::from(n as u64));
    r.set("d", Value::from(x.d()));

    let pred = |l: &LinearSubspace| matches!(contains(x, l), Ok(true));

    let (cells_json, matched, candidates, matches) = match &cli.checkpoint {
        None => {
            let census = plane_census(&ctx, k, n, pred, budget, jobs)?;
            let cells: Vec<Value> = census
                .cells
                .iter()
                .map(|c| {
                    json!({
                        "pivots": c.pivots,
                        "scanned": c.scanned,
                        "matched": c.matched,
                    })
                })
                .collect();
            (
                cells,
                census.matched,
                census.total_candidates,
                Some(census.matches),
            )
        }
        Some(path) => {
            let done = resume_census(path, x, k, jobs, budget)?;
            let matched = done.iter().map(|c| c.2).sum();
            let cells: Vec<Value> = done
                .iter()
                .map(|(pivots, scanned, matched)| {
                    json!({ "pivots": pivots, "scanned": scanned, "matched": matched })
                })
                .collect();
            let candidates = gaussian_binomial(ctx.q(), n as u64 + 1, k as u64 + 1);
            (cells, matched, candidates, None)
        }
    };

    r.set("candidates", count_json(candidates));
    r.set("matched", Value::from(matched));
    r.set("cells", Value::Array(cells_json));
    if let Some(matches) = &matches {
        // Keep reports bounded: list the planes only for small censuses.
        if matches.len() <= 200 {
            r.set(
                "matches",
                Value::Array(matches.iter().map(subspace_rows_json).collect()),
            );
        }
    }
    r.line(format!(
        "{matched} of {candidates} candidate {k}-planes lie on the hypersurface"
    ));

    if let Some(e_max) = estimate {
        let est = dimension_estimate(x, k, e_max, budget, jobs)?;
        r.set_heuristic(
            "extension_counts",
            Value::Array(est.counts.iter().map(|&c| Value::from(c)).collect()),
        );
        r.set_heuristic(
            "dimension_estimate",
            est.estimate.map(Value::from).unwrap_or(Value::Null),
        );
        r.set_heuristic("q", Value::from(est.q));
        r.line(format!(
            "heuristic: counts over F_q^e {:?}, growth slope {:?}",
            est.counts, est.estimate
        ));
    }
    r.emit(mode(cli));
    Ok(0)
}

type DoneCell = (Vec<usize>, u64, u64);

/// Run (or resume) a census cell by cell, rewriting the checkpoint file
/// after every batch. The final report is identical to a fresh run.
fn resume_census(
    path: &Path,
    x: &Hypersurface,
    k: usize,
    jobs: usize,
    budget: u128,
) -> Result<Vec<DoneCell>> {
    let n = x.n();
    let ctx = x.ctx().clone();
    let total = gaussian_binomial(ctx.q(), n as u64 + 1, k as u64 + 1);
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "census needs {total} candidate planes, budget is {budget}"
        )));
    }
    let fingerprint = census_fingerprint(x, k);
    let cells = pivot_sets(k, n);
    let mut done: Vec<DoneCell> = Vec::new();
    if path.exists() {
        let text = input::read_file(path)?;
        let state: Value = serde_json::from_str(&text)
            .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
        let stored = state
            .get("fingerprint")
            .and_then(Value::as_str)
            .unwrap_or("");
        if stored != format!("{fingerprint:016x}") {
            return Err(Error::ValidationError(format!(
                "checkpoint {} belongs to a different census configuration",
                path.display()
            )));
        }
        if let Some(arr) = state.get("cells").and_then(Value::as_array) {
            for cell in arr {
                let pivots: Vec<usize> = cell
                    .get("pivots")
                    .and_then(Value::as_array)
                    .map(|a| {
                        a.iter()
                            .filter_map(Value::as_u64)
                            .map(|v| v as usize)
                            .collect()
                    })
                    .unwrap_or_default();
                let scanned = cell.get("scanned").and_then(Value::as_u64).unwrap_or(0);
                let matched = cell.get("matched").and_then(Value::as_u64).unwrap_or(0);
                done.push((pivots, scanned, matched));
            }
        }
        // The prefix of completed cells must match the canonical order.
        for (i, cell) in done.iter().enumerate() {
            if i >= cells.len() || cell.0 != cells[i] {
                return Err(Error::ValidationError(format!(
                    "checkpoint {} lists cells out of order",
                    path.display()
                )));
            }
        }
    }

    let pred = |l: &LinearSubspace| matches!(contains(x, l), Ok(true));
    let batch = jobs.max(1) * 4;
    while done.len() < cells.len() {
        let start = done.len();
        let count = batch.min(cells.len() - start);
        let results = run_jobs(jobs, count, |i| {
            let (report, _) = census_cell(&ctx, &cells[start + i], n, pred);
            (report.pivots, report.scanned, report.matched)
        });
        done.extend(results);
        write_checkpoint(path, fingerprint, &done)?;
    }
    Ok(done)
}

fn write_checkpoint(path: &Path, fingerprint: u64, done: &[DoneCell]) -> Result<()> {
    let cells: Vec<Value> = done
        .iter()
        .map(|(pivots, scanned, matched)| {
            json!({ "pivots": pivots, "scanned": scanned, "matched": matched })
        })
        .collect();
    let state = json!({
        "schema": 1,
        "fingerprint": format!("{fingerprint:016x}"),
        "cells": cells,
    });
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(&state).expect("valid JSON"))
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}
