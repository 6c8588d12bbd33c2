//! Python bindings: the `pyfreelie` extension module.

use std::sync::Arc;

use freelie::formula::{bounded_eval, parse_formula, Env, Value};
use freelie::hall::bracketing_of;
use freelie::interp::{auxiliary_element, default_window, in_rz, nat_certify, rx_combine, transport, width_check, RxOp, WidthReport};
use freelie::json::{element_from_json, element_to_json};
use freelie::scalars::{brute_force_psw, psw_space, sym_space, truncated_free_lie_instance, FiniteBilinearInstance, FiniteRingTable};
use freelie::suite::run_suite;
use freelie::{
    decompose_l2, divide_shifted, lyndon_words, main_lemma_witness, parse_element, proportional, shifted_chain,
    witt_dimension as witt, Algebra, Alphabet, Coefficient, LieElement, Ring,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(pyfreelie, FreelieError, PyValueError, "Raised by the algebra and certificate routines.");

fn err(e: freelie::Error) -> PyErr {
    FreelieError::new_err(format!("{}: {e}", e.kind()))
}

fn coefficient(obj: &Bound<'_, PyAny>) -> PyResult<Coefficient> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Coefficient::from_int(n));
    }
    let text: String = obj.extract()?;
    text.trim().parse().map_err(|_| PyValueError::new_err(format!("invalid coefficient {text:?}")))
}

fn coefficients(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Coefficient>> {
    objs.iter().map(coefficient).collect()
}

/// A free Lie algebra on named generators over `Z` or `Q`.
#[pyclass(name = "Algebra", frozen)]
struct PyAlgebra {
    inner: Arc<Algebra>,
}

#[pymethods]
impl PyAlgebra {
    #[new]
    #[pyo3(signature = (alphabet = "a,b", ring = "Z"))]
    fn new(alphabet: &str, ring: &str) -> PyResult<Self> {
        let ring: Ring = ring.parse().map_err(err)?;
        Ok(PyAlgebra { inner: Algebra::new(Alphabet::parse(alphabet).map_err(err)?, ring) })
    }

    /// Parses an expression such as `"[a,[a,b]] + 2*a"` or `"(a)(b+1)"`.
    fn element(&self, text: &str) -> PyResult<PyElement> {
        Ok(PyElement { inner: parse_element(text, &self.inner).map_err(err)? })
    }

    fn generator(&self, name: &str) -> PyResult<PyElement> {
        Ok(PyElement { inner: LieElement::generator(&self.inner, name).map_err(err)? })
    }

    fn zero(&self) -> PyElement {
        PyElement { inner: LieElement::zero(&self.inner) }
    }

    /// Hall basis as `(word, bracketing)` pairs in (degree, lex) order.
    fn basis(&self, max_degree: usize) -> PyResult<Vec<(String, String)>> {
        let alphabet = self.inner.alphabet();
        let words = lyndon_words(alphabet, max_degree).map_err(err)?;
        Ok(words
            .iter()
            .flatten()
            .map(|w| (alphabet.word_text(w.letters()), bracketing_of(w).display(alphabet).to_string()))
            .collect())
    }

    #[getter]
    fn ring(&self) -> &'static str {
        self.inner.ring().as_str()
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().letters().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Algebra({:?}, {:?})", self.inner.alphabet().letters().join(","), self.inner.ring().as_str())
    }
}

/// An element in the Hall basis normal form.
#[pyclass(name = "Element", frozen, from_py_object)]
#[derive(Clone)]
struct PyElement {
    inner: LieElement,
}

fn wrap(inner: LieElement) -> PyElement {
    PyElement { inner }
}

#[pymethods]
impl PyElement {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(wrap(element_from_json(text).map_err(err)?))
    }

    fn to_json(&self) -> String {
        element_to_json(&self.inner)
    }

    /// `(word, coefficient)` pairs in (degree, lex) order.
    fn terms(&self) -> Vec<(String, String)> {
        let alphabet = self.inner.alphabet();
        self.inner.terms().iter().map(|(w, c)| (alphabet.word_text(w.letters()), c.to_string())).collect()
    }

    fn bracket(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(wrap(self.inner.bracket(&other.inner).map_err(err)?))
    }

    fn scale(&self, c: &Bound<'_, PyAny>) -> PyResult<PyElement> {
        Ok(wrap(self.inner.scale(&coefficient(c)?).map_err(err)?))
    }

    /// Degree of the top homogeneous component.
    fn weight(&self) -> PyResult<usize> {
        self.inner.weight().map_err(err)
    }

    fn top(&self) -> PyResult<PyElement> {
        Ok(wrap(self.inner.top().map_err(err)?))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// The chain `self(v+α₁)…(v+αₙ)`.
    fn shifted(&self, v: &PyElement, alphas: Vec<Bound<'_, PyAny>>) -> PyResult<PyElement> {
        Ok(wrap(shifted_chain(&self.inner, &v.inner, &coefficients(&alphas)?).map_err(err)?))
    }

    /// The `u` with `self = u(v+α)`, or `None`.
    fn divide(&self, v: &PyElement, alpha: &Bound<'_, PyAny>) -> PyResult<Option<PyElement>> {
        Ok(divide_shifted(&self.inner, &v.inner, &coefficient(alpha)?).map_err(err)?.map(wrap))
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(wrap(self.inner.try_add(&other.inner).map_err(err)?))
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        Ok(wrap(self.inner.try_sub(&other.inner).map_err(err)?))
    }

    fn __neg__(&self) -> PyElement {
        wrap(-&self.inner)
    }

    fn __eq__(&self, other: &PyElement) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.inner.to_string())
    }
}

#[pyfunction]
fn witt_dimension(k: u64, n: u64) -> PyResult<u128> {
    if k == 0 || n == 0 {
        return Err(PyValueError::new_err("k and n must be positive"));
    }
    witt(k, n).to_string().parse().map_err(|_| PyValueError::new_err("dimension exceeds 128 bits"))
}

/// `(γ, w)` with `γ·u = w(v+α₁)…(v+αₙ)` from pairs `(α_i, u_i)`.
#[pyfunction]
fn lemma_witness(v: &PyElement, pairs: Vec<(Bound<'_, PyAny>, PyElement)>) -> PyResult<(String, PyElement)> {
    let pairs = pairs.iter().map(|(a, u)| Ok((coefficient(a)?, u.inner.clone()))).collect::<PyResult<Vec<_>>>()?;
    let wit = main_lemma_witness(&v.inner, &pairs).map_err(err)?;
    Ok((wit.gamma.to_string(), wrap(wit.w)))
}

/// Summands `(z_i, index of x_i)` with `p = Σ [z_i, x_i]`.
#[pyfunction]
fn decompose(p: &PyElement, gens: Vec<PyElement>) -> PyResult<Vec<(PyElement, usize)>> {
    let gens: Vec<LieElement> = gens.into_iter().map(|g| g.inner).collect();
    Ok(decompose_l2(&p.inner, &gens).map_err(err)?.into_iter().map(|s| (wrap(s.z), s.gen_index)).collect())
}

#[pyfunction]
fn centralizer_pair(u: &PyElement, v: &PyElement) -> PyResult<Option<(String, String)>> {
    Ok(proportional(&u.inner, &v.inner).map_err(err)?.map(|(a, b)| (a.to_string(), b.to_string())))
}

#[pyfunction]
fn in_line(x: &PyElement, z: &PyElement) -> PyResult<Option<String>> {
    Ok(in_rz(&x.inner, &z.inner).map_err(err)?.map(|r| r.to_string()))
}

#[pyfunction]
#[pyo3(name = "transport")]
fn transport_py(x: &PyElement, x_prime: &PyElement, y: &PyElement) -> PyResult<Option<PyElement>> {
    Ok(transport(&x.inner, &x_prime.inner, &y.inner).map_err(err)?.map(wrap))
}

#[pyfunction]
fn rx(x: &PyElement, p: &PyElement, q: &PyElement, op: &str) -> PyResult<PyElement> {
    let op: RxOp = op.parse().map_err(err)?;
    Ok(wrap(rx_combine(&x.inner, &p.inner, &q.inner, op).map_err(err)?))
}

/// Divisibility certificate of `a·b(b+1)…(b+m)`.
#[pyclass(name = "NatCertificate", frozen)]
struct PyNatCertificate {
    #[pyo3(get)]
    divisible: Vec<String>,
    #[pyo3(get)]
    holds: bool,
    #[pyo3(get)]
    ladder_holds: bool,
    #[pyo3(get)]
    v: PyElement,
    #[pyo3(get)]
    aux: PyElement,
    #[pyo3(get)]
    table: Vec<(String, Option<PyElement>)>,
}

#[pyfunction]
#[pyo3(signature = (b, m, window = None, max_degree = None))]
fn nat_certificate(b: &PyElement, m: u32, window: Option<Vec<i64>>, max_degree: Option<usize>) -> PyResult<PyNatCertificate> {
    let window = match window {
        Some(w) => w.into_iter().map(Coefficient::from_int).collect(),
        None => default_window(m),
    };
    let d = match max_degree {
        Some(d) => d,
        None => {
            let wb = b.inner.weight().map_err(err)?;
            let aux = auxiliary_element(&b.inner, wb + 1).map_err(err)?;
            aux.weight().map_err(err)? + (m as usize + 1) * wb
        }
    };
    let cert = nat_certify(&b.inner, m, &window, d).map_err(err)?;
    Ok(PyNatCertificate {
        divisible: cert.divisible().iter().map(ToString::to_string).collect(),
        holds: cert.holds(),
        ladder_holds: cert.ladder_holds(),
        v: wrap(cert.v.clone()),
        aux: wrap(cert.aux.clone()),
        table: cert.table.iter().map(|(k, u)| (k.to_string(), u.clone().map(wrap))).collect(),
    })
}

/// `(True, None)` on a pass, `(False, witness)` on a failure.
#[pyfunction]
#[pyo3(name = "width_check")]
fn width_check_py(m: usize, gens: Vec<PyElement>, max_degree: usize) -> PyResult<(bool, Option<PyElement>)> {
    let gens: Vec<LieElement> = gens.into_iter().map(|g| g.inner).collect();
    Ok(match width_check(m, &gens, max_degree).map_err(err)? {
        WidthReport::Pass { .. } => (true, None),
        WidthReport::Failure { witness } => (false, Some(wrap(witness))),
    })
}

/// Bounded evaluation; returns `(verdict, [(var, value)], deciding atom)`.
#[pyfunction]
#[pyo3(signature = (formula, algebra, env = None))]
fn evaluate(
    formula: &str,
    algebra: &PyAlgebra,
    env: Option<Vec<(String, Bound<'_, PyAny>)>>,
) -> PyResult<(String, Vec<(String, String)>, Option<String>)> {
    let formula = parse_formula(formula).map_err(err)?;
    let mut bindings = Env::new();
    for (name, value) in env.unwrap_or_default() {
        let value = match value.extract::<PyRef<'_, PyElement>>() {
            Ok(e) => Value::Lie(e.inner.clone()),
            Err(_) => Value::Scalar(coefficient(&value)?),
        };
        bindings.insert(name, value);
    }
    let ev = bounded_eval(&formula, &bindings, &algebra.inner).map_err(err)?;
    let evidence = ev.evidence.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    Ok((ev.verdict.as_str().to_string(), evidence, ev.decided_by))
}

fn instance(text: &str) -> PyResult<FiniteBilinearInstance> {
    serde_json::from_str(text).map_err(|e| err(freelie::Error::InvalidInstance(e.to_string())))
}

fn ring_json(ring: &FiniteRingTable) -> String {
    serde_json::to_string(ring).expect("ring serializes")
}

#[pyfunction]
fn sym_dimension(instance_json: &str) -> PyResult<usize> {
    Ok(sym_space(&instance(instance_json)?).len())
}

/// Ring of scalars as JSON, by linear algebra.
#[pyfunction]
fn psw(instance_json: &str) -> PyResult<String> {
    Ok(ring_json(&psw_space(&instance(instance_json)?).map_err(err)?))
}

/// Ring of scalars as JSON, by exhaustive search.
#[pyfunction]
fn psw_brute(instance_json: &str) -> PyResult<String> {
    Ok(ring_json(&brute_force_psw(&instance(instance_json)?).map_err(err)?))
}

#[pyfunction]
fn lie_instance(k: usize, p: u64, max_degree: usize) -> PyResult<String> {
    let inst = truncated_free_lie_instance(k, p, max_degree).map_err(err)?;
    Ok(serde_json::to_string(&inst).expect("instance serializes"))
}

/// Acceptance reports as `(id, name, passed, detail)`.
#[pyfunction]
fn suite(py: Python<'_>, seed: u64) -> Vec<(u32, String, bool, String)> {
    py.detach(|| run_suite(seed))
        .into_iter()
        .map(|r| (r.id, r.name.to_string(), r.passed, r.detail))
        .collect()
}

#[pymodule]
fn pyfreelie(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FreelieError", m.py().get_type::<FreelieError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyNatCertificate>()?;
    m.add_function(wrap_pyfunction!(witt_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_witness, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(centralizer_pair, m)?)?;
    m.add_function(wrap_pyfunction!(in_line, m)?)?;
    m.add_function(wrap_pyfunction!(transport_py, m)?)?;
    m.add_function(wrap_pyfunction!(rx, m)?)?;
    m.add_function(wrap_pyfunction!(nat_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(width_check_py, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(sym_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(psw, m)?)?;
    m.add_function(wrap_pyfunction!(psw_brute, m)?)?;
    m.add_function(wrap_pyfunction!(lie_instance, m)?)?;
    m.add_function(wrap_pyfunction!(suite, m)?)?;
    Ok(())
}
