//! Python bindings. Field elements cross the boundary as their packed
//! integer index; reports come back as plain dicts.

use asm_core::aut::{self, PlaneAut};
use asm_core::classic;
use asm_core::curve::{AffinePoint, CurveParams};
use asm_core::model::{self, BranchSource};
use asm_core::report::{self, CheckGroup, OutputFormat, RunConfig};
use asm_core::{adjoint, Error, FieldElement, Subfield, TowerField};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn level(s: &str) -> PyResult<Subfield> {
    match s.to_ascii_lowercase().replace(['_', '^'], "").as_str() {
        "fq" | "1" => Ok(Subfield::Fq),
        "fq2" | "2" => Ok(Subfield::Fq2),
        "fq4" | "4" => Ok(Subfield::Fq4),
        _ => Err(PyValueError::new_err(format!("unknown subfield {s:?}; use Fq, Fq2 or Fq4"))),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn elem(f: &TowerField, x: u32) -> PyResult<FieldElement> {
    f.from_index(x)
        .ok_or_else(|| PyValueError::new_err(format!("{x} is not an element of a field of size {}", f.size())))
}

/// The ambient field `F_{q^4}`, `q = p^e`.
#[pyclass(name = "Field", frozen, skip_from_py_object, module = "asm_curves")]
#[derive(Clone)]
pub struct PyField {
    inner: TowerField,
}

#[pymethods]
impl PyField {
    #[new]
    fn new(p: u32, e: u32) -> PyResult<Self> {
        Ok(PyField {
            inner: TowerField::build(p, e).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn e(&self) -> u32 {
        self.inner.e()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn size(&self) -> u64 {
        self.inner.size()
    }

    #[getter]
    fn defining_polynomial(&self) -> Vec<u32> {
        self.inner.defining_polynomial().to_vec()
    }

    #[getter]
    fn generator(&self) -> u32 {
        self.inner.generator().index()
    }

    fn element(&self, coeffs: Vec<i64>) -> u32 {
        self.inner.from_coeffs(&coeffs).index()
    }

    fn coeffs(&self, x: u32) -> PyResult<Vec<u32>> {
        Ok(self.inner.coeffs(elem(&self.inner, x)?))
    }

    fn format(&self, x: u32) -> PyResult<String> {
        Ok(self.inner.format(elem(&self.inner, x)?))
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.add(elem(f, a)?, elem(f, b)?).index())
    }

    fn sub(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.sub(elem(f, a)?, elem(f, b)?).index())
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.mul(elem(f, a)?, elem(f, b)?).index())
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        let f = &self.inner;
        f.inv(elem(f, a)?)
            .map(|x| x.index())
            .ok_or_else(|| PyValueError::new_err("zero has no inverse"))
    }

    fn div(&self, a: u32, b: u32) -> PyResult<u32> {
        let d = self.inv(b)?;
        self.mul(a, d)
    }

    fn pow(&self, a: u32, exp: i64) -> PyResult<u32> {
        let f = &self.inner;
        let x = elem(f, a)?;
        if x.is_zero() && exp < 0 {
            return Err(PyValueError::new_err("zero has no inverse"));
        }
        Ok(f.pow_i(x, exp).index())
    }

    /// `x^(q^k)`.
    #[pyo3(signature = (x, k = 1))]
    fn frobenius(&self, x: u32, k: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.frobenius(elem(f, x)?, k).index())
    }

    /// `x^q + x`.
    fn trace(&self, x: u32) -> PyResult<u32> {
        let f = &self.inner;
        Ok(f.trace_q(elem(f, x)?).index())
    }

    fn is_in(&self, x: u32, subfield: &str) -> PyResult<bool> {
        let f = &self.inner;
        Ok(f.is_in(elem(f, x)?, level(subfield)?))
    }

    fn elements(&self, subfield: &str) -> PyResult<Vec<u32>> {
        Ok(self.inner.subfield_elements(level(subfield)?).iter().map(|x| x.index()).collect())
    }

    #[pyo3(signature = (subfield = "Fq4"))]
    fn trace_zero_set(&self, subfield: &str) -> PyResult<Vec<u32>> {
        Ok(self.inner.trace_zero_set(level(subfield)?).iter().map(|x| x.index()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, e={})", self.inner.p(), self.inner.e())
    }
}

/// `(X^q + X)(Y^q + Y) = c`.
#[pyclass(name = "Curve", frozen, module = "asm_curves")]
pub struct PyCurve {
    inner: CurveParams,
}

impl PyCurve {
    fn point(&self, u: u32, v: u32) -> PyResult<AffinePoint> {
        let f = self.inner.field();
        Ok(AffinePoint::new(elem(f, u)?, elem(f, v)?))
    }

    fn on_curve_point(&self, u: u32, v: u32) -> PyResult<AffinePoint> {
        let pt = self.point(u, v)?;
        if !self.inner.on_curve(&pt) {
            return Err(err(Error::NotOnCurve));
        }
        Ok(pt)
    }

    fn precision(&self, precision: Option<usize>) -> usize {
        precision.unwrap_or(3 * self.inner.q() as usize)
    }
}

fn pair(pt: &AffinePoint) -> (u32, u32) {
    (pt.u.index(), pt.v.index())
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (p, e = 1, c = vec![1]))]
    fn new(p: u32, e: u32, c: Vec<i64>) -> PyResult<Self> {
        Ok(PyCurve {
            inner: CurveParams::from_c_coeffs(p, e, &c).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter]
    fn c(&self) -> u32 {
        self.inner.c().index()
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField {
            inner: self.inner.field().clone(),
        }
    }

    #[getter]
    fn genus(&self) -> u64 {
        let q = self.inner.q();
        (q - 1) * (q - 1)
    }

    fn on_curve(&self, u: u32, v: u32) -> PyResult<bool> {
        Ok(self.inner.on_curve(&self.point(u, v)?))
    }

    fn is_special(&self, u: u32, v: u32) -> PyResult<bool> {
        Ok(self.inner.is_special(&self.on_curve_point(u, v)?))
    }

    #[pyo3(signature = (subfield = "Fq2"))]
    fn points(&self, subfield: &str) -> PyResult<Vec<(u32, u32)>> {
        let pts = self.inner.enumerate_points(level(subfield)?).map_err(err)?;
        Ok(pts.iter().map(pair).collect())
    }

    #[pyo3(signature = (n, seed = 42, subfield = "Fq4"))]
    fn sample_points(&self, n: usize, seed: u64, subfield: &str) -> PyResult<Vec<(u32, u32)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(self.inner.sample_points(level(subfield)?, n, &mut rng).iter().map(pair).collect())
    }

    #[pyo3(signature = (n, seed = 42))]
    fn sample_special_points(&self, n: usize, seed: u64) -> Vec<(u32, u32)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.inner.sample_special_points(n, &mut rng).iter().map(pair).collect()
    }

    /// Coefficients of `y(t)` in the branch `x = u + t`.
    #[pyo3(signature = (u, v, precision = None))]
    fn branch(&self, u: u32, v: u32, precision: Option<usize>) -> PyResult<Vec<u32>> {
        let pt = self.on_curve_point(u, v)?;
        let b = self.inner.affine_branch(&pt, self.precision(precision)).map_err(err)?;
        Ok(b.y.coeffs().iter().map(|x| x.index()).collect())
    }

    fn osculation(&self, py: Python<'_>, u: u32, v: u32) -> PyResult<Py<PyAny>> {
        let pt = self.on_curve_point(u, v)?;
        let rec = classic::osculation_order(&self.inner, &pt, classic::dichotomy_precision(self.inner.q()))
            .map_err(err)?;
        to_py(py, &rec)
    }

    #[pyo3(signature = (u, v, precision = None))]
    fn conic_order_sequence(&self, u: u32, v: u32, precision: Option<usize>) -> PyResult<Vec<usize>> {
        let pt = self.on_curve_point(u, v)?;
        let n = precision.unwrap_or_else(|| classic::order_precision(self.inner.q()));
        classic::conic_order_sequence(&self.inner, &pt, n).map_err(err)
    }

    #[pyo3(signature = (u, v, precision = None))]
    fn order_sequence(&self, u: u32, v: u32, precision: Option<usize>) -> PyResult<Vec<usize>> {
        let pt = self.on_curve_point(u, v)?;
        model::order_sequence_at(&self.inner, BranchSource::Affine(pt), self.precision(precision)).map_err(err)
    }

    /// One sequence per branch at infinity, in place order.
    #[pyo3(signature = (precision = None))]
    fn infinity_order_sequences(&self, precision: Option<usize>) -> PyResult<Vec<Vec<usize>>> {
        let n = self.precision(precision);
        self.inner
            .infinite_places()
            .into_iter()
            .map(|pl| model::order_sequence_at(&self.inner, BranchSource::Infinite(pl), n).map_err(err))
            .collect()
    }

    /// Normalized coordinates of the image in the space model.
    fn tau(&self, u: u32, v: u32) -> PyResult<[u32; 4]> {
        let pt = self.on_curve_point(u, v)?;
        let s = model::tau_point(&self.inner, &pt).map_err(err)?;
        Ok(s.coords().map(|x| x.index()))
    }

    fn singularity_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.inner.singularity_and_genus().map_err(err)?)
    }

    fn adjoint_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &adjoint::adjoint_system(&self.inner).map_err(err)?)
    }

    fn omega_prime_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &model::omega_prime_report(&self.inner).map_err(err)?)
    }

    fn group_report(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &aut::closure_and_structure(&self.inner).map_err(err)?)
    }

    #[pyo3(signature = (samples = 50, seed = 42))]
    fn orbit_report(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let group = aut::group_elements(&self.inner).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases = self.inner.sample_points(Subfield::Fq4, samples, &mut rng);
        to_py(py, &aut::orbit_analysis(&self.inner, &group, &bases).map_err(err)?)
    }

    fn group_elements(&self) -> PyResult<Vec<Automorphism>> {
        Ok(aut::group_elements(&self.inner)
            .map_err(err)?
            .into_iter()
            .map(|g| Automorphism {
                inner: g,
                params: self.inner.clone(),
            })
            .collect())
    }

    /// `ξ^swap ∘ φ_{α,β,λ}`, validated.
    #[pyo3(signature = (alpha = 0, beta = 0, lam = 1, swap = false))]
    fn automorphism(&self, alpha: u32, beta: u32, lam: u32, swap: bool) -> PyResult<Automorphism> {
        let f = self.inner.field();
        let g = aut::make_aut(&self.inner, elem(f, alpha)?, elem(f, beta)?, elem(f, lam)?, swap).map_err(err)?;
        Ok(Automorphism {
            inner: g,
            params: self.inner.clone(),
        })
    }

    fn __repr__(&self) -> String {
        let f = self.inner.field();
        format!("Curve(p={}, e={}, c={})", f.p(), f.e(), f.format(self.inner.c()))
    }
}

#[pyclass(frozen, skip_from_py_object, module = "asm_curves")]
#[derive(Clone)]
pub struct Automorphism {
    inner: PlaneAut,
    params: CurveParams,
}

#[pymethods]
impl Automorphism {
    #[getter]
    fn alpha(&self) -> u32 {
        self.inner.alpha.index()
    }

    #[getter]
    fn beta(&self) -> u32 {
        self.inner.beta.index()
    }

    #[getter]
    fn lam(&self) -> u32 {
        self.inner.lambda.index()
    }

    #[getter]
    fn swap(&self) -> bool {
        self.inner.swap
    }

    fn apply(&self, u: u32, v: u32) -> PyResult<(u32, u32)> {
        let f = self.params.field();
        Ok(pair(&self.inner.apply(&AffinePoint::new(elem(f, u)?, elem(f, v)?), f)))
    }

    /// `self ∘ first`.
    fn compose(&self, first: &Automorphism) -> Automorphism {
        Automorphism {
            inner: self.inner.compose(&first.inner, self.params.field()),
            params: self.params.clone(),
        }
    }

    fn inverse(&self) -> Automorphism {
        Automorphism {
            inner: self.inner.inverse(self.params.field()),
            params: self.params.clone(),
        }
    }

    fn order(&self) -> usize {
        self.inner.order(self.params.field())
    }

    fn preserves_curve(&self) -> bool {
        aut::symbolic_invariance(&self.params, &self.inner)
    }

    /// The induced 4x4 matrix on the space model, row-major.
    fn matrix(&self) -> Vec<Vec<u32>> {
        let m = model::induced_space_matrix(&self.inner, self.params.field());
        m.m.iter().map(|r| r.iter().map(|x| x.index()).collect()).collect()
    }

    fn __eq__(&self, other: &Automorphism) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let f = self.params.field();
        format!(
            "Automorphism(alpha={}, beta={}, lam={}, swap={})",
            f.format(self.inner.alpha),
            f.format(self.inner.beta),
            f.format(self.inner.lambda),
            self.inner.swap
        )
    }
}

/// Runs the verification report; returns `(text, exit_code)`.
#[pyfunction]
#[pyo3(signature = (p, e = 1, c = vec![1], seed = 42, samples = 500, precision = None, checks = "all", format = "json"))]
#[allow(clippy::too_many_arguments)]
fn run_report(
    py: Python<'_>,
    p: u32,
    e: u32,
    c: Vec<i64>,
    seed: u64,
    samples: usize,
    precision: Option<usize>,
    checks: &str,
    format: &str,
) -> PyResult<(String, i32)> {
    let fmt = match format {
        "json" => OutputFormat::Json,
        "markdown" => OutputFormat::Markdown,
        _ => return Err(PyValueError::new_err(format!("unknown format {format:?}"))),
    };
    let config = RunConfig {
        c,
        seed,
        samples,
        precision,
        checks: CheckGroup::parse_list(checks).map_err(err)?,
        ..RunConfig::new(p, e)
    };
    let rep = py.detach(|| report::run_report(&config)).map_err(err)?;
    Ok((rep.render(fmt), rep.exit_code()))
}

#[pymodule]
pub fn asm_curves(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCurve>()?;
    m.add_class::<Automorphism>()?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    m.add("__version__", report::VERSION)?;
    Ok(())
}
