//! Python bindings for the finite-field line/curve laboratory.
//!
//! The module keeps plain Python data at the boundary, with the same
//! conventions as the CLI's JSON formats:
//!
//! * field elements are canonical encodings `0..q-1` (for prime fields,
//!   the residue);
//! * polynomials are lists of `(exponents, coefficient)` terms;
//! * binary forms are coefficient lists `[c_0, ..., c_d]` for
//!   `c_0 s^d + c_1 s^{d-1} t + ... + c_d t^d`;
//! * splitting types are sorted lists of integers, and histogram keys are
//!   tuples of those integers.
//!
//! Every library error is raised as `ValueError` carrying the library's own
//! message text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use freeline_cli::input::{
    curve_from_spec, hypersurface_from_spec, map_from_spec, subspace_from_spec, system_from_spec,
    CurveSpec, FieldSpec, FormSpec, HypersurfaceSpec, MapSpec, SubspaceSpec, SystemSpec, TermSpec,
};
use freeline_core::census::{dimension_estimate, plane_census};
use freeline_core::fermatlab::{audit_free_curve, audit_no_free_lines, DEFAULT_LINE_BUDGET};
use freeline_core::galois::{make_field, FieldCtx, Fq};
use freeline_core::kersys::{
    classify_line_case, globally_generated, restricted_splitting, search_free_curve,
    LinearSystem as CoreSystem, RationalCurve,
};
use freeline_core::linegeom::{
    contains, line_is_free, normal_bundle_line, smoothness_certificate,
    Hypersurface as CoreHypersurface,
};
use freeline_core::p1split::{splitting_type, SplittingType};
use freeline_core::polyalg::LinearSubspace;
use freeline_core::Error;

fn raise(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field_spec(ctx: &FieldCtx) -> FieldSpec {
    FieldSpec {
        p: ctx.p(),
        e: ctx.e(),
    }
}

fn term_specs(terms: Vec<(Vec<u32>, u64)>) -> Vec<TermSpec> {
    terms
        .into_iter()
        .map(|(exps, c)| TermSpec { exps, c })
        .collect()
}

fn form_specs(coeffs: Vec<Vec<u64>>) -> Vec<FormSpec> {
    coeffs.into_iter().map(|coeffs| FormSpec { coeffs }).collect()
}

fn parts_list(st: &SplittingType) -> Vec<i32> {
    st.parts().to_vec()
}

fn parts_key<'py>(py: Python<'py>, st: &SplittingType) -> PyResult<Bound<'py, PyTuple>> {
    PyTuple::new(py, st.parts())
}

fn curve_encodings(curve: &RationalCurve) -> Vec<Vec<u64>> {
    curve
        .components()
        .iter()
        .map(|g| g.coeffs().iter().map(|c| c.encoding() as u64).collect())
        .collect()
}

/// The finite field F_{p^e}, with arithmetic on canonical encodings.
#[pyclass(frozen)]
struct Field {
    ctx: FieldCtx,
    table: Vec<Fq>,
}

impl Field {
    fn decode(&self, c: u64) -> PyResult<Fq> {
        self.table.get(c as usize).copied().ok_or_else(|| {
            PyValueError::new_err(format!(
                "encoding {c} is out of range for a field of {} elements",
                self.table.len()
            ))
        })
    }
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, e=1))]
    fn new(p: u64, e: u32) -> PyResult<Self> {
        let ctx = make_field(p, e).map_err(raise)?;
        let table = ctx.elements().collect();
        Ok(Field { ctx, table })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.ctx.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.ctx.e()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.ctx.q()
    }

    #[getter]
    fn zero(&self) -> u64 {
        self.ctx.zero().encoding() as u64
    }

    #[getter]
    fn one(&self) -> u64 {
        self.ctx.one().encoding() as u64
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.ctx.add(self.decode(a)?, self.decode(b)?).encoding() as u64)
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.ctx.sub(self.decode(a)?, self.decode(b)?).encoding() as u64)
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok(self.ctx.mul(self.decode(a)?, self.decode(b)?).encoding() as u64)
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.ctx.inv(self.decode(a)?).map_err(raise)?.encoding() as u64)
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, e={})", self.ctx.p(), self.ctx.e())
    }
}

/// A degree-d hypersurface in P^n over a finite field.
#[pyclass(frozen)]
struct Hypersurface {
    inner: CoreHypersurface,
}

impl Hypersurface {
    fn subspace(&self, rows: Vec<Vec<u64>>) -> PyResult<LinearSubspace> {
        subspace_from_spec(&SubspaceSpec {
            field: field_spec(self.inner.ctx()),
            n: self.inner.n(),
            rows,
        })
        .map_err(raise)
    }
}

#[pymethods]
impl Hypersurface {
    #[new]
    fn new(field: &Field, n: usize, d: u32, terms: Vec<(Vec<u32>, u64)>) -> PyResult<Self> {
        let inner = hypersurface_from_spec(&HypersurfaceSpec {
            field: field_spec(&field.ctx),
            n,
            d,
            terms: term_specs(terms),
        })
        .map_err(raise)?;
        Ok(Hypersurface { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.d()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.ctx().q()
    }

    /// Certified smoothness check (no F_qbar-points where all partials vanish).
    fn is_smooth(&self) -> PyResult<bool> {
        smoothness_certificate(&self.inner).map_err(raise)
    }

    /// Does the subspace spanned by the given coordinate rows lie on X?
    fn contains_subspace(&self, rows: Vec<Vec<u64>>) -> PyResult<bool> {
        contains(&self.inner, &self.subspace(rows)?).map_err(raise)
    }

    /// Normal bundle report for a line given by two spanning rows:
    /// `contained`, and when X is smooth along the line also `splitting`,
    /// `h0`, `h1_minus1`, `free`, and `expected_dim`. The `free` verdict is
    /// cross-checked against an independent pipeline.
    fn line_report<'py>(&self, py: Python<'py>, rows: Vec<Vec<u64>>) -> PyResult<Bound<'py, PyDict>> {
        let line = self.subspace(rows)?;
        let out = PyDict::new(py);
        if !contains(&self.inner, &line).map_err(raise)? {
            out.set_item("contained", false)?;
            return Ok(out);
        }
        out.set_item("contained", true)?;
        match normal_bundle_line(&self.inner, &line) {
            Err(Error::SingularAlongLine) => {
                out.set_item("smooth_along_line", false)?;
            }
            Err(e) => return Err(raise(e)),
            Ok(report) => {
                let cross = line_is_free(&self.inner, &line).map_err(raise)?;
                if cross != report.free {
                    return Err(PyValueError::new_err(
                        "freeness pipelines disagree".to_string(),
                    ));
                }
                out.set_item("smooth_along_line", true)?;
                out.set_item("splitting", parts_list(&report.splitting))?;
                out.set_item("h0", report.h0)?;
                out.set_item("h1_minus1", report.h1_minus1)?;
                out.set_item("free", report.free)?;
                out.set_item("expected_dim", report.expected_dim)?;
            }
        }
        Ok(out)
    }

    /// Exhaustive census of k-planes on X over the ground field:
    /// `{"candidates": ..., "matched": ...}`. Fails if the Grassmannian
    /// holds more than `max_candidates` points.
    #[pyo3(signature = (k=1, max_candidates=1_000_000, jobs=1))]
    fn count_planes<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        max_candidates: u128,
        jobs: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let x = &self.inner;
        let census = plane_census(
            x.ctx(),
            k,
            x.n(),
            |sub| matches!(contains(x, sub), Ok(true)),
            max_candidates,
            jobs,
        )
        .map_err(raise)?;
        let out = PyDict::new(py);
        out.set_item("candidates", census.total_candidates)?;
        out.set_item("matched", census.matched)?;
        Ok(out)
    }

    /// Heuristic dimension estimate of the k-plane scheme from point counts
    /// over F_q, ..., F_{q^e_max}: `{"q", "counts", "estimate"}`.
    #[pyo3(signature = (k=1, e_max=2, max_candidates=10_000_000, jobs=1))]
    fn estimate_plane_dimension<'py>(
        &self,
        py: Python<'py>,
        k: usize,
        e_max: u32,
        max_candidates: u128,
        jobs: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let est = dimension_estimate(&self.inner, k, e_max, max_candidates, jobs).map_err(raise)?;
        let out = PyDict::new(py);
        out.set_item("q", est.q)?;
        out.set_item("counts", est.counts)?;
        out.set_item("estimate", est.estimate)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "Hypersurface(n={}, d={}, q={})",
            self.inner.n(),
            self.inner.d(),
            self.inner.ctx().q()
        )
    }
}

/// A linear system of degree-r forms on P^k (k+1 generators) and the
/// splitting behaviour of its kernel bundle on rational curves.
#[pyclass(frozen)]
struct LinearSystem {
    inner: CoreSystem,
}

impl LinearSystem {
    fn curve(&self, components: Vec<Vec<u64>>) -> PyResult<RationalCurve> {
        curve_from_spec(&CurveSpec {
            field: field_spec(self.inner.ctx()),
            components: form_specs(components),
        })
        .map_err(raise)
    }
}

#[pymethods]
impl LinearSystem {
    #[new]
    fn new(field: &Field, k: usize, r: u32, gens: Vec<Vec<(Vec<u32>, u64)>>) -> PyResult<Self> {
        let inner = system_from_spec(&SystemSpec {
            field: field_spec(&field.ctx),
            k,
            r,
            gens: gens.into_iter().map(term_specs).collect(),
        })
        .map_err(raise)?;
        Ok(LinearSystem { inner })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn r(&self) -> u32 {
        self.inner.r()
    }

    fn is_basepoint_free(&self) -> bool {
        self.inner.is_basepoint_free()
    }

    /// Sample random lines over F_{q^ext} and histogram the splitting type
    /// of the restricted kernel bundle; keys are tuples of parts.
    #[pyo3(signature = (samples, seed=0, ext=1))]
    fn classify_lines<'py>(
        &self,
        py: Python<'py>,
        samples: usize,
        seed: u64,
        ext: u32,
    ) -> PyResult<Bound<'py, PyDict>> {
        let hist = classify_line_case(&self.inner, samples, seed, ext).map_err(raise)?;
        let out = PyDict::new(py);
        for (st, count) in &hist.counts {
            out.set_item(parts_key(py, st)?, count)?;
        }
        Ok(out)
    }

    /// Splitting type of the kernel bundle pulled back along the rational
    /// curve with the given component forms (coefficient lists).
    fn restricted_splitting(&self, components: Vec<Vec<u64>>) -> PyResult<Vec<i32>> {
        let st = restricted_splitting(&self.inner, &self.curve(components)?).map_err(raise)?;
        Ok(parts_list(&st))
    }

    /// Is the restricted kernel bundle on the given curve globally generated
    /// (all splitting parts nonnegative)?
    fn globally_generated_on(&self, components: Vec<Vec<u64>>) -> PyResult<bool> {
        globally_generated(&self.inner, &self.curve(components)?).map_err(raise)
    }

    /// Staged random search (lines, conics, twisted cubics, random cubics)
    /// for a curve with globally generated restricted kernel. Returns None
    /// if the budget runs out, else a dict with `stage`, `sample_index`,
    /// `extension`, `splitting`, and the curve `components` as coefficient
    /// encodings over F_{q^extension}.
    #[pyo3(signature = (budget=2000, seed=0, ext=1))]
    fn search_free_curve<'py>(
        &self,
        py: Python<'py>,
        budget: u64,
        seed: u64,
        ext: u32,
    ) -> PyResult<Option<Bound<'py, PyDict>>> {
        let found = search_free_curve(&self.inner, budget, seed, ext).map_err(raise)?;
        let Some(witness) = found else {
            return Ok(None);
        };
        let out = PyDict::new(py);
        out.set_item("stage", witness.stage.name())?;
        out.set_item("sample_index", witness.sample_index)?;
        out.set_item("extension", witness.extension)?;
        out.set_item("splitting", parts_list(&witness.splitting))?;
        out.set_item("components", curve_encodings(&witness.curve))?;
        Ok(Some(out))
    }

    fn __repr__(&self) -> String {
        format!("LinearSystem(k={}, r={})", self.inner.k(), self.inner.r())
    }
}

/// Splitting type of the kernel of a surjective map of twisted sums on P^1.
/// `rows[j][i]` is the coefficient list of a form of degree
/// `target[j] - source[i]` (empty list = zero form).
#[pyfunction]
fn splitting_of_map(
    field: &Field,
    source: Vec<i32>,
    target: Vec<i32>,
    rows: Vec<Vec<Vec<u64>>>,
) -> PyResult<Vec<i32>> {
    let map = map_from_spec(&MapSpec {
        field: field_spec(&field.ctx),
        source,
        target,
        rows: rows.into_iter().map(form_specs).collect(),
    })
    .map_err(raise)?;
    let st = splitting_type(&map).map_err(raise)?;
    Ok(parts_list(&st))
}

/// Audit the standard rational curve on the degree-d Fermat hypersurface in
/// P^k: containment, the splitting of its restricted normal data, and
/// freeness, as a dict.
#[pyfunction]
fn fermat_free_curve_audit<'py>(py: Python<'py>, p: u64, d: u32, k: usize) -> PyResult<Bound<'py, PyDict>> {
    let ctx = make_field(p, 1).map_err(raise)?;
    let audit = audit_free_curve(&ctx, d, k).map_err(raise)?;
    let out = PyDict::new(py);
    out.set_item("p", audit.p)?;
    out.set_item("d", audit.d)?;
    out.set_item("k", audit.k)?;
    out.set_item("field_size", audit.field_size)?;
    out.set_item("mu", audit.mu.encoding() as u64)?;
    out.set_item("contained", audit.contained)?;
    out.set_item("source_twists", audit.source_twists)?;
    out.set_item("target_twist", audit.target_twist)?;
    out.set_item("splitting", parts_list(&audit.splitting))?;
    out.set_item("free", audit.free)?;
    Ok(out)
}

/// Exhaustively audit lines on the degree-(2n-3) Fermat hypersurface in P^n
/// over F_p: how many lines lie on it, their splitting histogram, and that
/// none are free. Splitting histogram keys are tuples of parts.
#[pyfunction]
#[pyo3(signature = (p, n, max_candidates=DEFAULT_LINE_BUDGET, jobs=1))]
fn fermat_no_free_lines_audit<'py>(
    py: Python<'py>,
    p: u64,
    n: usize,
    max_candidates: u128,
    jobs: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let audit = audit_no_free_lines(p, n, max_candidates, jobs).map_err(raise)?;
    let out = PyDict::new(py);
    out.set_item("p", audit.p)?;
    out.set_item("n", audit.n)?;
    out.set_item("d", audit.d)?;
    out.set_item("field_note", &audit.field_note)?;
    out.set_item("caveat", &audit.caveat)?;
    out.set_item("candidates", audit.candidates)?;
    out.set_item("lines_on_x", audit.lines_on_x)?;
    out.set_item("free_lines", audit.free_lines)?;
    out.set_item("no_free_lines", audit.no_free_lines())?;
    out.set_item("min_h0", audit.min_h0)?;
    out.set_item("h0_lower_bound", audit.h0_lower_bound)?;
    let hist = PyDict::new(py);
    for (st, count) in &audit.splitting_histogram {
        hist.set_item(parts_key(py, st)?, count)?;
    }
    out.set_item("splitting_histogram", hist)?;
    let h0s = PyDict::new(py);
    for (h0, count) in &audit.h0_histogram {
        h0s.set_item(h0, count)?;
    }
    out.set_item("h0_histogram", h0s)?;
    Ok(out)
}

/// Finite-field laboratory for lines and rational curves on hypersurfaces:
/// splitting types on P^1, normal bundle freeness, plane censuses, and
/// Fermat-hypersurface audits.
#[pymodule]
fn freeline_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Hypersurface>()?;
    m.add_class::<LinearSystem>()?;
    m.add_function(wrap_pyfunction!(splitting_of_map, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_free_curve_audit, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_no_free_lines_audit, m)?)?;
    m.add("DEFAULT_LINE_BUDGET", DEFAULT_LINE_BUDGET)?;
    Ok(())
}
