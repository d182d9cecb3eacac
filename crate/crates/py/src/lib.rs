//! Python bindings: fields, rational functions, Artin-Schreier solving,
//! coded integers, translation, evaluation, check suites and the twisted
//! curve.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use ffred::algebra::text::to_text;
use ffred::algebra::{FieldCtx, FqElem, Place, RatFun};
use ffred::artin_schreier::{self as as_, ASExponent};
use ffred::elliptic::{TwistCurve, TwistPoint};
use ffred::eval::{self, EvalConfig, Mode};
use ffred::geometry::{self, ExtensionDatum};
use ffred::logic::{self, Sig, TranslationEnv};
use ffred::model::ModelParams;
use ffred::verify::{self, Lemma, Report, VerifyParams};
use ffred::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(ffred_py, ResourceLimitError, PyRuntimeError, "A search or exponent exceeded its limit.");

fn err(e: Error) -> PyErr {
    match e {
        Error::SearchSpace { .. } | Error::ExponentOverflow(_) => ResourceLimitError::new_err(e.to_string()),
        Error::DivisionByZero => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

#[pyclass(name = "Field", module = "ffred_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: FieldCtx,
}

#[pymethods]
impl PyField {
    /// `F_q`, `q = p^n`; `modulus` lists coefficients low to high.
    #[new]
    #[pyo3(signature = (p, n = 1, modulus = None))]
    fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        let inner = match modulus {
            Some(m) if m.len() as u32 == n + 1 => FieldCtx::with_modulus(p, &m),
            Some(_) => return Err(PyValueError::new_err("modulus degree must equal n")),
            None => FieldCtx::new(p, n),
        }
        .map_err(err)?;
        Ok(PyField { inner })
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    /// The variable `t`.
    fn t(&self) -> PyRatFun {
        RatFun::t(&self.inner).into()
    }

    /// The integer `c` as a constant.
    fn constant(&self, c: i64) -> PyRatFun {
        RatFun::from_int(&self.inner, c).into()
    }

    /// The constant with base-`p` digits `digits`, lowest first.
    fn element(&self, digits: Vec<u32>) -> PyResult<PyRatFun> {
        let c = self.inner.from_digits(&digits).map_err(err)?;
        Ok(RatFun::constant(&self.inner, c).into())
    }

    /// `num / den` from integer coefficient lists, constant term first.
    #[pyo3(signature = (num, den = vec![1]))]
    fn ratfun(&self, num: Vec<i64>, den: Vec<i64>) -> PyResult<PyRatFun> {
        Ok(RatFun::from_ints(&self.inner, &num, &den).map_err(err)?.into())
    }

    fn __eq__(&self, other: PyRef<'_, PyField>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, n={}, modulus={:?})", self.inner.p(), self.inner.n(), self.inner.modulus())
    }
}

#[pyclass(name = "RatFun", module = "ffred_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyRatFun {
    inner: RatFun,
}

impl From<RatFun> for PyRatFun {
    fn from(inner: RatFun) -> Self {
        PyRatFun { inner }
    }
}

/// The other operand of an arithmetic operator.
fn operand(me: &RatFun, other: &Bound<'_, PyAny>) -> PyResult<Option<RatFun>> {
    if let Ok(r) = other.cast::<PyRatFun>() {
        let r = r.get().inner.clone();
        if r.field() != me.field() {
            return Err(PyValueError::new_err("operands live over different fields"));
        }
        return Ok(Some(r));
    }
    if let Ok(i) = other.extract::<i64>() {
        return Ok(Some(RatFun::from_int(me.field(), i)));
    }
    Ok(None)
}

#[pymethods]
impl PyRatFun {
    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(b) = operand(&self.inner, other)? else { return Ok(None) };
        let a = &self.inner;
        let v: PyResult<RatFun> = Ok(a.add(&b));
        v.map(|v| Some(v.into()))
    }

    fn __radd__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(a) = operand(&self.inner, other)? else { return Ok(None) };
        let (a, b) = (&a, self.inner.clone());
        let v: PyResult<RatFun> = Ok(a.add(&b));
        v.map(|v| Some(v.into()))
    }
    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(b) = operand(&self.inner, other)? else { return Ok(None) };
        let a = &self.inner;
        let v: PyResult<RatFun> = Ok(a.sub(&b));
        v.map(|v| Some(v.into()))
    }

    fn __rsub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(a) = operand(&self.inner, other)? else { return Ok(None) };
        let (a, b) = (&a, self.inner.clone());
        let v: PyResult<RatFun> = Ok(a.sub(&b));
        v.map(|v| Some(v.into()))
    }
    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(b) = operand(&self.inner, other)? else { return Ok(None) };
        let a = &self.inner;
        let v: PyResult<RatFun> = Ok(a.mul(&b));
        v.map(|v| Some(v.into()))
    }

    fn __rmul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(a) = operand(&self.inner, other)? else { return Ok(None) };
        let (a, b) = (&a, self.inner.clone());
        let v: PyResult<RatFun> = Ok(a.mul(&b));
        v.map(|v| Some(v.into()))
    }
    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(b) = operand(&self.inner, other)? else { return Ok(None) };
        let a = &self.inner;
        let v: PyResult<RatFun> = a.checked_div(&b).map_err(err);
        v.map(|v| Some(v.into()))
    }

    fn __rtruediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Option<PyRatFun>> {
        let Some(a) = operand(&self.inner, other)? else { return Ok(None) };
        let (a, b) = (&a, self.inner.clone());
        let v: PyResult<RatFun> = a.checked_div(&b).map_err(err);
        v.map(|v| Some(v.into()))
    }

    fn __neg__(&self) -> PyRatFun {
        self.inner.neg().into()
    }

    fn __pow__(&self, e: i64, modulo: Option<i64>) -> PyResult<PyRatFun> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular powers are not supported"));
        }
        Ok(self.inner.powi(e).map_err(err)?.into())
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(operand(&self.inner, other).ok().flatten().is_some_and(|o| o == self.inner))
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("RatFun({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn inv(&self) -> PyResult<PyRatFun> {
        Ok(self.inner.inv().map_err(err)?.into())
    }

    /// `f^(p^e)`.
    fn frobenius_power(&self, e: u32) -> PyResult<PyRatFun> {
        Ok(self.inner.checked_frobenius_power(e).map_err(err)?.into())
    }

    /// Order at the place at infinity, `deg den - deg num`.
    fn ord_at_infinity(&self) -> PyResult<i64> {
        self.inner.ord_at(&Place::Infinity).map_err(err)
    }

    /// Order at the place of the monic irreducible `poly` (integer
    /// coefficients, constant term first).
    fn ord_at(&self, poly: Vec<i64>) -> PyResult<i64> {
        let pi = ffred::algebra::Poly::from_ints(self.inner.field(), &poly);
        let place = Place::finite(pi).map_err(err)?;
        self.inner.ord_at(&place).map_err(err)
    }

    #[getter]
    fn num_degree(&self) -> u64 {
        self.inner.num().deg()
    }

    #[getter]
    fn den_degree(&self) -> u64 {
        self.inner.den().deg()
    }

    /// The serializable text form.
    fn to_text<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &serde_json::to_value(to_text(&self.inner)).expect("text form serializes"))
    }
}

fn exponent(r: u32) -> PyResult<ASExponent> {
    ASExponent::new(r).map_err(err)
}

/// `u^(p^r) - u`.
#[pyfunction]
#[pyo3(signature = (u, r = 1))]
fn as_image(u: PyRef<'_, PyRatFun>, r: u32) -> PyResult<PyRatFun> {
    Ok(as_::as_image(&u.inner, exponent(r)?).into())
}

/// Some `u` with `u^(p^r) - u = a`, or `None`.
#[pyfunction]
#[pyo3(signature = (a, r = 1))]
fn solve_as(a: PyRef<'_, PyRatFun>, r: u32) -> PyResult<Option<PyRatFun>> {
    Ok(as_::solve_as(&a.inner, exponent(r)?).map(Into::into))
}

/// `s` when both equations of the two-equation system are solvable for `w`.
#[pyfunction]
#[pyo3(signature = (w, r = 1))]
fn classify_version1(w: PyRef<'_, PyRatFun>, r: u32) -> PyResult<Option<u64>> {
    as_::classify_version1(&w.inner, exponent(r)?).map_err(err)
}

/// `{"w", "u", "v"}` for `w = t^(p^(rs))`.
#[pyfunction]
#[pyo3(signature = (field, s, r = 1))]
fn version1_witness<'py>(py: Python<'py>, field: PyRef<'_, PyField>, s: u64, r: u32) -> PyResult<Bound<'py, PyDict>> {
    let w = as_::version1_witness(&field.inner, s, exponent(r)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("w", PyRatFun::from(w.w))?;
    d.set_item("u", PyRatFun::from(w.u))?;
    d.set_item("v", PyRatFun::from(w.v))?;
    Ok(d)
}

/// `t^(B^s)`.
#[pyfunction]
fn encode(field: PyRef<'_, PyField>, s: u64) -> PyResult<PyRatFun> {
    Ok(ModelParams::new(&field.inner).encode(s).map_err(err)?.value.into())
}

/// `s` when `x = t^(B^s)`, `s >= 1`.
#[pyfunction]
fn decode(x: PyRef<'_, PyRatFun>) -> Option<u64> {
    ModelParams::new(x.inner.field()).decode(&x.inner)
}

/// `x` with `x^(B^s1 - 1) = t^(B^s2 - 1)`, present exactly when `s1 | s2`.
#[pyfunction]
fn divides_witness(field: PyRef<'_, PyField>, s1: u64, s2: u64) -> PyResult<Option<PyRatFun>> {
    Ok(ModelParams::new(&field.inner).divides_witness(s1, s2).map_err(err)?.map(Into::into))
}

/// Whether `(encode a, encode b, encode c)` lies in the addition graph.
#[pyfunction]
fn check_add_triple(a: PyRef<'_, PyRatFun>, b: PyRef<'_, PyRatFun>, c: PyRef<'_, PyRatFun>) -> bool {
    ModelParams::new(a.inner.field()).check_add_triple(&a.inner, &b.inner, &c.inner)
}

/// The ring sentence for an arithmetic sentence, parameter-free with `wrap_q`.
#[pyfunction]
#[pyo3(signature = (sentence, field, wrap_q = false))]
fn translate(sentence: &str, field: PyRef<'_, PyField>, wrap_q: bool) -> PyResult<String> {
    let phi = logic::parse(sentence, Sig::Arith).map_err(err)?;
    let env = TranslationEnv::new(&ModelParams::new(&field.inner));
    let out = if wrap_q { logic::wrap_parameter_free(&phi, &env) } else { logic::translate(&phi, &env) };
    Ok(logic::print(&out.map_err(err)?))
}

/// Truth of an arithmetic formula with quantifiers over `1..=bound`.
#[pyfunction]
#[pyo3(signature = (formula, bound = 30, bindings = None))]
fn eval_arith(formula: &str, bound: u64, bindings: Option<BTreeMap<String, u64>>) -> PyResult<bool> {
    let phi = logic::parse(formula, Sig::Arith).map_err(err)?;
    let b = bindings.unwrap_or_default();
    let pairs: Vec<(&str, u64)> = b.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    eval::eval_arith_with(&phi, bound, &pairs).map_err(err)
}

/// Evaluates a formula and returns the report as a dict. Arithmetic input
/// for `mode="arith"`, ring input otherwise.
#[pyfunction]
#[pyo3(signature = (formula, field, mode = "ring-witness", int_bound = 30, degree_bound = 3, s_max = 6, params = None))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    formula: &str,
    field: PyRef<'_, PyField>,
    mode: &str,
    int_bound: u64,
    degree_bound: u64,
    s_max: u64,
    params: Option<BTreeMap<String, PyRef<'_, PyRatFun>>>,
) -> PyResult<Bound<'py, PyAny>> {
    let mode: Mode = mode.parse().map_err(err)?;
    let sig = if mode == Mode::Arith { Sig::Arith } else { Sig::Ring };
    let phi = logic::parse(formula, sig).map_err(err)?;
    let params: BTreeMap<String, RatFun> =
        params.unwrap_or_default().into_iter().map(|(k, v)| (k, v.inner.clone())).collect();
    let cfg = EvalConfig { mode, int_bound, degree_bound, s_max };
    let f = field.inner.clone();
    let report = py.detach(|| eval::evaluate(&phi, &f, &cfg, &params, None)).map_err(err)?;
    json_to_py(py, &serde_json::to_value(&report).expect("reports serialize"))
}

/// Runs a check suite, or `"all"`, and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (lemma, field, seed = 1))]
fn run_checks<'py>(py: Python<'py>, lemma: &str, field: PyRef<'_, PyField>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let lemmas: Vec<Lemma> = if lemma == "all" {
        Lemma::ALL.into_iter().filter(|l| l.applies_to(&field.inner)).collect()
    } else {
        vec![lemma.parse().map_err(err)?]
    };
    let f = field.inner.clone();
    let mut p = VerifyParams::new(&f);
    p.seed = seed;
    let checks = py.detach(|| lemmas.iter().flat_map(|&l| verify::run(l, &p)).collect());
    let report = Report::new("verify", serde_json::json!({ "p": f.p(), "n": f.n(), "seed": seed }), checks);
    json_to_py(py, &serde_json::to_value(&report).expect("reports serialize"))
}

/// Least `(k, u)` with `(u - 2)(p^k - 1)/2 > g_k`.
#[pyfunction]
fn genus_params(g_k: u64, p: u64) -> (u64, u64) {
    geometry::genus_params(g_k, p)
}

/// `{"dpoly_degree", "ppoly_degree", "n_alpha", "ramified_degrees",
/// "infinity_ramifies"}` for `F_q(t)(sqrt g)`.
#[pyfunction]
fn quadratic_ramification<'py>(py: Python<'py>, g: PyRef<'_, PyRatFun>) -> PyResult<Bound<'py, PyDict>> {
    let d = ExtensionDatum::quadratic(&g.inner).map_err(err)?;
    let b = geometry::ramification_bound(&d).map_err(err)?;
    let places = geometry::ramified_finite_places(&d).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("dpoly_degree", b.dpoly.deg())?;
    out.set_item("ppoly_degree", b.ppoly.deg())?;
    out.set_item("n_alpha", b.n_alpha)?;
    out.set_item("ramified_degrees", places.iter().map(Place::degree).collect::<Vec<_>>())?;
    out.set_item("infinity_ramifies", geometry::infinity_ramifies(&d).map_err(err)?)?;
    Ok(out)
}

#[pyclass(name = "Point", module = "ffred_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoint {
    inner: TwistPoint,
}

#[pymethods]
impl PyPoint {
    #[getter]
    fn is_infinity(&self) -> bool {
        self.inner == TwistPoint::Infinity
    }

    #[getter]
    fn x(&self) -> Option<PyRatFun> {
        match &self.inner {
            TwistPoint::Affine { x, .. } => Some(x.clone().into()),
            TwistPoint::Infinity => None,
        }
    }

    #[getter]
    fn y(&self) -> Option<PyRatFun> {
        match &self.inner {
            TwistPoint::Affine { y, .. } => Some(y.clone().into()),
            TwistPoint::Infinity => None,
        }
    }

    fn __eq__(&self, other: PyRef<'_, PyPoint>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Point{}", self.inner)
    }
}

/// `P(t) y^2 = P(x)` for a monic cubic `P`, odd characteristic.
#[pyclass(name = "TwistCurve", module = "ffred_py", frozen, skip_from_py_object)]
struct PyTwistCurve {
    inner: TwistCurve,
}

#[pymethods]
impl PyTwistCurve {
    /// `coeffs` lists `P` from the constant term up.
    #[new]
    fn new(field: PyRef<'_, PyField>, coeffs: Vec<i64>) -> PyResult<Self> {
        Ok(PyTwistCurve { inner: TwistCurve::from_ints(&field.inner, &coeffs).map_err(err)? })
    }

    /// `P(t)`.
    fn twist(&self) -> PyRatFun {
        self.inner.twist().clone().into()
    }

    #[staticmethod]
    fn infinity() -> PyPoint {
        PyPoint { inner: TwistPoint::Infinity }
    }

    fn point(&self, x: PyRef<'_, PyRatFun>, y: PyRef<'_, PyRatFun>) -> PyResult<PyPoint> {
        let pt = TwistPoint::Affine { x: x.inner.clone(), y: y.inner.clone() };
        if !self.inner.on_curve(&pt) {
            return Err(PyValueError::new_err(format!("{pt} is not on the curve")));
        }
        Ok(PyPoint { inner: pt })
    }

    /// `(t^(q^m), P(t)^((q^m - 1)/2))`.
    fn frobenius_point(&self, m: u32) -> PyResult<PyPoint> {
        Ok(PyPoint { inner: self.inner.frobenius_point(m).map_err(err)? })
    }

    fn on_curve(&self, pt: PyRef<'_, PyPoint>) -> bool {
        self.inner.on_curve(&pt.inner)
    }

    fn add(&self, a: PyRef<'_, PyPoint>, b: PyRef<'_, PyPoint>) -> PyResult<PyPoint> {
        Ok(PyPoint { inner: self.inner.add(&a.inner, &b.inner).map_err(err)? })
    }

    fn neg(&self, a: PyRef<'_, PyPoint>) -> PyPoint {
        PyPoint { inner: self.inner.neg(&a.inner) }
    }

    fn mul(&self, k: u64, a: PyRef<'_, PyPoint>) -> PyResult<PyPoint> {
        Ok(PyPoint { inner: self.inner.mul_small(k, &a.inner).map_err(err)? })
    }
}

/// Representatives of the first `m + 1` Frobenius orbits of `F_q`, each as
/// base-`p` digits.
#[pyfunction]
fn orbit_constants(field: PyRef<'_, PyField>, m: usize) -> PyResult<Vec<Vec<u32>>> {
    let o = geometry::orbit_constants(&field.inner, m).map_err(err)?;
    Ok(o.constants.iter().map(|&c: &FqElem| field.inner.digits(c)).collect())
}

#[pymodule]
fn ffred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ResourceLimitError", m.py().get_type::<ResourceLimitError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyRatFun>()?;
    m.add_class::<PyPoint>()?;
    m.add_class::<PyTwistCurve>()?;
    m.add_function(wrap_pyfunction!(as_image, m)?)?;
    m.add_function(wrap_pyfunction!(solve_as, m)?)?;
    m.add_function(wrap_pyfunction!(classify_version1, m)?)?;
    m.add_function(wrap_pyfunction!(version1_witness, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(divides_witness, m)?)?;
    m.add_function(wrap_pyfunction!(check_add_triple, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(eval_arith, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    m.add_function(wrap_pyfunction!(genus_params, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_ramification, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_constants, m)?)?;
    Ok(())
}
