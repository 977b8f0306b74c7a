//! Strict JSON input formats for the CLI.
//!
//! Every loader validates homogeneity, degree bookkeeping, and field
//! membership before handing data to the core library, so malformed files
//! surface as `ParseError` (with the serde line/column location) or
//! `ValidationError` (naming the violated invariant) rather than panics.
//!
//! Field elements are written as their canonical encodings `0..q-1` (the
//! position in the deterministic enumeration of the field), which for prime
//! fields is just the residue `0..p-1`.

use freeline_core::galois::{make_field, FieldCtx, Fq};
use freeline_core::kersys::{LinearSystem, RationalCurve};
use freeline_core::linegeom::Hypersurface;
use freeline_core::p1split::TwistedMap;
use freeline_core::polyalg::{BinaryForm, LinearSubspace, MultiPoly};
use freeline_core::{Error, Result};
use serde::Deserialize;
use std::path::Path;

fn default_ext() -> u32 {
    1
}

/// Ground field `F_{p^e}`; `e` defaults to 1.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default = "default_ext")]
    pub e: u32,
}

/// One monomial `c * x_0^{exps[0]} ... x_n^{exps[n]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exps: Vec<u32>,
    pub c: u64,
}

/// A degree-d hypersurface in P^n: `{"field":{"p":2,"e":2},"n":3,"d":3,
/// "terms":[{"exps":[3,0,0,0],"c":1}, ...]}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub d: u32,
    pub terms: Vec<TermSpec>,
}

/// A linear system of r-forms on P^k; each generator is a term list.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub field: FieldSpec,
    pub k: usize,
    pub r: u32,
    pub gens: Vec<Vec<TermSpec>>,
}

/// A binary form by its coefficient list `[c_0, ..., c_d]` for
/// `c_0 s^d + c_1 s^{d-1} t + ... + c_d t^d`; `[]` means the zero form.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub coeffs: Vec<u64>,
}

/// A map of twisted sums on the projective line: row j, column i holds a
/// form of degree `target[j] - source[i]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub field: FieldSpec,
    pub source: Vec<i32>,
    pub target: Vec<i32>,
    pub rows: Vec<Vec<FormSpec>>,
}

/// A linear subspace of P^n spanned by the given rows of encodings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub rows: Vec<Vec<u64>>,
}

/// A rational curve to P^k by its k+1 component forms of a common degree.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub field: FieldSpec,
    pub components: Vec<FormSpec>,
}

/// Read a file, mapping I/O failures to `ParseError` naming the path.
pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, src: &str) -> Result<T> {
    // serde_json's message already carries "at line L column C".
    serde_json::from_str(text).map_err(|e| Error::ParseError(format!("{src}: {e}")))
}

/// The canonical element table of a field: index = encoding.
struct Elems {
    table: Vec<Fq>,
}

impl Elems {
    fn new(ctx: &FieldCtx) -> Self {
        Elems {
            table: ctx.elements().collect(),
        }
    }

    fn decode(&self, c: u64, what: &str) -> Result<Fq> {
        self.table
            .get(c as usize)
            .copied()
            .ok_or_else(|| {
                Error::ValidationError(format!(
                    "{what}: coefficient encoding {c} is out of range for a field of {} elements",
                    self.table.len()
                ))
            })
    }
}

fn build_field(spec: &FieldSpec) -> Result<FieldCtx> {
    make_field(spec.p, spec.e)
}

fn build_poly(
    ctx: &FieldCtx,
    elems: &Elems,
    nvars: usize,
    d: u32,
    terms: &[TermSpec],
    what: &str,
) -> Result<MultiPoly> {
    let mut f = MultiPoly::zero(ctx, nvars, d);
    for (i, term) in terms.iter().enumerate() {
        if term.exps.len() != nvars {
            return Err(Error::ValidationError(format!(
                "{what}, term {i}: expected {nvars} exponents, found {}",
                term.exps.len()
            )));
        }
        let sum: u32 = term.exps.iter().sum();
        if sum != d {
            return Err(Error::ValidationError(format!(
                "{what}, term {i}: exponent sum ≠ d ({sum} ≠ {d})"
            )));
        }
        let c = elems.decode(term.c, &format!("{what}, term {i}"))?;
        if c.is_zero() {
            continue;
        }
        f = f.add(&MultiPoly::monomial(ctx, term.exps.clone(), c)?)?;
    }
    Ok(f)
}

/// Build a hypersurface from an already-deserialized spec.
pub fn hypersurface_from_spec(spec: &HypersurfaceSpec) -> Result<Hypersurface> {
    let ctx = build_field(&spec.field)?;
    let elems = Elems::new(&ctx);
    let f = build_poly(&ctx, &elems, spec.n + 1, spec.d, &spec.terms, "hypersurface")?;
    Hypersurface::new(f)
}

/// Parse a hypersurface, e.g. the Fermat cubic surface over F_4.
pub fn parse_hypersurface(text: &str, src: &str) -> Result<Hypersurface> {
    hypersurface_from_spec(&from_json(text, src)?)
}

/// Build a linear system from an already-deserialized spec.
pub fn system_from_spec(spec: &SystemSpec) -> Result<LinearSystem> {
    let ctx = build_field(&spec.field)?;
    let elems = Elems::new(&ctx);
    let mut gens = Vec::with_capacity(spec.gens.len());
    for (j, terms) in spec.gens.iter().enumerate() {
        gens.push(build_poly(
            &ctx,
            &elems,
            spec.k + 1,
            spec.r,
            terms,
            &format!("generator {j}"),
        )?);
    }
    LinearSystem::new(&ctx, gens)
}

/// Parse a linear system of forms.
pub fn parse_system(text: &str, src: &str) -> Result<LinearSystem> {
    system_from_spec(&from_json(text, src)?)
}

fn build_form(
    ctx: &FieldCtx,
    elems: &Elems,
    spec: &FormSpec,
    degree: u32,
    what: &str,
) -> Result<BinaryForm> {
    if spec.coeffs.is_empty() {
        return Ok(BinaryForm::zero(ctx, degree));
    }
    if spec.coeffs.len() != degree as usize + 1 {
        return Err(Error::ValidationError(format!(
            "{what}: a degree-{degree} form needs {} coefficients, found {}",
            degree + 1,
            spec.coeffs.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(spec.coeffs.len());
    for (i, &c) in spec.coeffs.iter().enumerate() {
        coeffs.push(elems.decode(c, &format!("{what}, coefficient {i}"))?);
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Ok(BinaryForm::zero(ctx, degree));
    }
    BinaryForm::from_coeffs(ctx, coeffs)
}

/// Build a map of twisted sums from an already-deserialized spec.
pub fn map_from_spec(spec: &MapSpec) -> Result<TwistedMap> {
    let ctx = build_field(&spec.field)?;
    let elems = Elems::new(&ctx);
    if spec.rows.len() != spec.target.len() {
        return Err(Error::ValidationError(format!(
            "map: {} target twists but {} rows",
            spec.target.len(),
            spec.rows.len()
        )));
    }
    let mut entries = Vec::with_capacity(spec.rows.len());
    for (j, row) in spec.rows.iter().enumerate() {
        if row.len() != spec.source.len() {
            return Err(Error::ValidationError(format!(
                "map, row {j}: {} source twists but {} entries",
                spec.source.len(),
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(row.len());
        for (i, form) in row.iter().enumerate() {
            let diff = spec.target[j] - spec.source[i];
            if diff < 0 {
                if !form.coeffs.is_empty() && form.coeffs.iter().any(|&c| c != 0) {
                    return Err(Error::ValidationError(format!(
                        "map, row {j}, column {i}: twist difference {diff} is negative, \
                         so the entry must be zero"
                    )));
                }
                out.push(BinaryForm::zero(&ctx, 0));
                continue;
            }
            out.push(build_form(
                &ctx,
                &elems,
                form,
                diff as u32,
                &format!("map, row {j}, column {i}"),
            )?);
        }
        entries.push(out);
    }
    TwistedMap::new(&ctx, spec.source.clone(), spec.target.clone(), entries)
}

/// Parse a map of twisted sums on the projective line.
pub fn parse_map(text: &str, src: &str) -> Result<TwistedMap> {
    map_from_spec(&from_json(text, src)?)
}

/// Build a linear subspace from an already-deserialized spec.
pub fn subspace_from_spec(spec: &SubspaceSpec) -> Result<LinearSubspace> {
    let ctx = build_field(&spec.field)?;
    let elems = Elems::new(&ctx);
    if spec.rows.is_empty() {
        return Err(Error::ValidationError(
            "subspace: at least one spanning row is required".into(),
        ));
    }
    let mut rows = Vec::with_capacity(spec.rows.len());
    for (j, row) in spec.rows.iter().enumerate() {
        if row.len() != spec.n + 1 {
            return Err(Error::ValidationError(format!(
                "subspace, row {j}: expected {} coordinates, found {}",
                spec.n + 1,
                row.len()
            )));
        }
        let mut out = Vec::with_capacity(row.len());
        for (i, &c) in row.iter().enumerate() {
            out.push(elems.decode(c, &format!("subspace, row {j}, coordinate {i}"))?);
        }
        rows.push(out);
    }
    LinearSubspace::from_spanning_rows(&ctx, &rows)
}

/// Parse a linear subspace given by spanning rows.
pub fn parse_subspace(text: &str, src: &str) -> Result<LinearSubspace> {
    subspace_from_spec(&from_json(text, src)?)
}

/// Build a rational curve from an already-deserialized spec.
pub fn curve_from_spec(spec: &CurveSpec) -> Result<RationalCurve> {
    let ctx = build_field(&spec.field)?;
    let elems = Elems::new(&ctx);
    let longest = spec
        .components
        .iter()
        .map(|f| f.coeffs.len())
        .max()
        .unwrap_or(0);
    if longest == 0 {
        return Err(Error::ValidationError(
            "curve: every component is empty".into(),
        ));
    }
    let degree = (longest - 1) as u32;
    let mut components = Vec::with_capacity(spec.components.len());
    for (i, form) in spec.components.iter().enumerate() {
        components.push(build_form(
            &ctx,
            &elems,
            form,
            degree,
            &format!("curve, component {i}"),
        )?);
    }
    RationalCurve::new(components)
}

/// Parse a rational curve by its component forms.
pub fn parse_curve(text: &str, src: &str) -> Result<RationalCurve> {
    curve_from_spec(&from_json(text, src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FERMAT_SURFACE: &str = r#"{
        "field": {"p": 2, "e": 2},
        "n": 3,
        "d": 3,
        "terms": [
            {"exps": [3,0,0,0], "c": 1},
            {"exps": [0,3,0,0], "c": 1},
            {"exps": [0,0,3,0], "c": 1},
            {"exps": [0,0,0,3], "c": 1}
        ]
    }"#;

    #[test]
    fn well_formed_fermat_parses() {
        let x = parse_hypersurface(FERMAT_SURFACE, "mem").unwrap();
        assert_eq!(x.n(), 3);
        assert_eq!(x.d(), 3);
        assert_eq!(x.f().terms().count(), 4);
        assert_eq!(x.ctx().q(), 4);
    }

    #[test]
    fn non_homogeneous_terms_are_refused() {
        let bad = r#"{"field":{"p":5},"n":2,"d":3,
            "terms":[{"exps":[1,1,0],"c":2}]}"#;
        let err = parse_hypersurface(bad, "mem").unwrap_err();
        match err {
            Error::ValidationError(msg) => assert!(msg.contains("exponent sum ≠ d"), "{msg}"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_field_coefficients_are_refused() {
        let bad = r#"{"field":{"p":5},"n":2,"d":2,
            "terms":[{"exps":[2,0,0],"c":5}]}"#;
        assert!(matches!(
            parse_hypersurface(bad, "mem").unwrap_err(),
            Error::ValidationError(_)
        ));
    }

    #[test]
    fn syntax_errors_carry_a_location() {
        let err = parse_hypersurface("{\"field\": {\"p\": 5}\n  oops", "input.json").unwrap_err();
        match err {
            Error::ParseError(msg) => {
                assert!(msg.starts_with("input.json:"), "{msg}");
                assert!(msg.contains("line 2"), "{msg}");
                assert!(msg.contains("column"), "{msg}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_exponent_count_is_refused() {
        let bad = r#"{"field":{"p":3},"n":3,"d":1,"terms":[{"exps":[1,0],"c":1}]}"#;
        assert!(matches!(
            parse_hypersurface(bad, "mem").unwrap_err(),
            Error::ValidationError(_)
        ));
    }

    #[test]
    fn repeated_terms_accumulate() {
        let two = r#"{"field":{"p":3},"n":1,"d":1,
            "terms":[{"exps":[1,0],"c":2},{"exps":[1,0],"c":2}]}"#;
        let x = parse_hypersurface(two, "mem").unwrap();
        // 2 + 2 = 1 mod 3, so a single monomial with coefficient 1 remains.
        let terms: Vec<_> = x.f().terms().collect();
        assert_eq!(terms.len(), 1);
    }

    #[test]
    fn maps_round_trip_through_the_parser() {
        let euler = r#"{
            "field": {"p": 5},
            "source": [1, 1],
            "target": [2],
            "rows": [[{"coeffs": [1, 0]}, {"coeffs": [0, 1]}]]
        }"#;
        let map = parse_map(euler, "mem").unwrap();
        let st = freeline_core::p1split::splitting_type(&map).unwrap();
        assert_eq!(st.parts(), &[0]);
    }

    #[test]
    fn map_entries_must_fit_their_twists() {
        let bad = r#"{"field":{"p":5},"source":[0,0],"target":[2],
            "rows":[[{"coeffs":[1,0,0]},{"coeffs":[1,0]}]]}"#;
        assert!(matches!(
            parse_map(bad, "mem").unwrap_err(),
            Error::ValidationError(_)
        ));
        let negative_slot = r#"{"field":{"p":5},"source":[3],"target":[2],
            "rows":[[{"coeffs":[1]}]]}"#;
        assert!(matches!(
            parse_map(negative_slot, "mem").unwrap_err(),
            Error::ValidationError(_)
        ));
    }

    #[test]
    fn unknown_keys_are_refused() {
        let bad = r#"{"field":{"p":5},"n":2,"d":2,"terms":[],"extra":1}"#;
        assert!(matches!(
            parse_hypersurface(bad, "mem").unwrap_err(),
            Error::ParseError(_)
        ));
    }

    #[test]
    fn subspaces_and_curves_parse() {
        let line = r#"{"field":{"p":5},"n":3,
            "rows":[[1,0,0,0],[0,1,0,0]]}"#;
        let l = parse_subspace(line, "mem").unwrap();
        assert_eq!(l.dim(), 1);
        assert_eq!(l.ambient_dim(), 3);

        let cubic = r#"{"field":{"p":5},"components":[
            {"coeffs":[1,0,0,0]},
            {"coeffs":[0,1,0,0]},
            {"coeffs":[0,0,1,0]},
            {"coeffs":[0,0,0,1]}
        ]}"#;
        let c = parse_curve(cubic, "mem").unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.ambient_k(), 3);
    }
}
