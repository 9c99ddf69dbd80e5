//! Python bindings. Field elements cross the boundary as raw indices
//! (`sum c_i p^i`); the point at infinity is `None`.

use grsdual::cli::verify_code;
use grsdual::constructions::{self, Case, ConstructionParams, Theorem};
use grsdual::descriptor::{CertificateDescriptor, CodeDescriptor};
use grsdual::grs::{self, MdsMode, MdsOptions};
use grsdual::mobius::{self, MobiusTransform, TransportCertificate};
use grsdual::{Elem, EvaluationPoint, EvaluationSet, ScalingVector};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(grsdual, GrsDualError, PyValueError);

fn err(e: grsdual::Error) -> PyErr {
    GrsDualError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(value).map_err(|e| GrsDualError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "Field", module = "grsdual", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(grsdual::Field);

impl PyField {
    fn elem(&self, raw: u32) -> PyResult<Elem> {
        self.0.from_raw(raw).map_err(err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, m = 1))]
    fn new(p: u64, m: u32) -> PyResult<Self> {
        grsdual::Field::new(p, m).map(PyField).map_err(err)
    }

    #[staticmethod]
    fn from_q(q: u64) -> PyResult<Self> {
        let (p, m) = constructions::odd_prime_power(q)
            .or_else(|| (q.is_power_of_two() && q > 1).then(|| (2, q.trailing_zeros())))
            .ok_or_else(|| GrsDualError::new_err(format!("{q} is not a prime power")))?;
        Self::new(p, m)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.m()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.0.modulus().to_vec()
    }

    #[getter]
    fn primitive(&self) -> u32 {
        self.0.primitive().raw()
    }

    fn elements(&self) -> Vec<u32> {
        self.0.elements().map(Elem::raw).collect()
    }

    fn coeffs(&self, x: u32) -> PyResult<Vec<u64>> {
        Ok(self.0.coeffs(self.elem(x)?))
    }

    fn from_coeffs(&self, coeffs: Vec<u64>) -> PyResult<u32> {
        self.0.from_coeffs(&coeffs).map(Elem::raw).map_err(err)
    }

    fn add(&self, x: u32, y: u32) -> PyResult<u32> {
        Ok(self.0.add(self.elem(x)?, self.elem(y)?).raw())
    }

    fn sub(&self, x: u32, y: u32) -> PyResult<u32> {
        Ok(self.0.sub(self.elem(x)?, self.elem(y)?).raw())
    }

    fn neg(&self, x: u32) -> PyResult<u32> {
        Ok(self.0.neg(self.elem(x)?).raw())
    }

    fn mul(&self, x: u32, y: u32) -> PyResult<u32> {
        Ok(self.0.mul(self.elem(x)?, self.elem(y)?).raw())
    }

    fn div(&self, x: u32, y: u32) -> PyResult<u32> {
        self.0.div(self.elem(x)?, self.elem(y)?).map(Elem::raw).map_err(err)
    }

    fn inv(&self, x: u32) -> PyResult<u32> {
        self.0.inv(self.elem(x)?).map(Elem::raw).map_err(err)
    }

    fn pow(&self, x: u32, e: i64) -> PyResult<u32> {
        self.0.pow(self.elem(x)?, e).map(Elem::raw).map_err(err)
    }

    fn dlog(&self, x: u32) -> PyResult<u64> {
        self.0.dlog(self.elem(x)?).map_err(err)
    }

    fn quadratic_character(&self, x: u32) -> PyResult<i8> {
        self.0.quadratic_character(self.elem(x)?).map_err(err)
    }

    /// A square root, or `None` for non-squares.
    fn sqrt(&self, x: u32) -> PyResult<Option<u32>> {
        match self.0.sqrt(self.elem(x)?) {
            Ok(s) => Ok(Some(s.raw())),
            Err(grsdual::Error::NotASquare) => Ok(None),
            Err(e) => Err(err(e)),
        }
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, m={})", self.0.p(), self.0.m())
    }
}

#[pyclass(name = "Code", module = "grsdual", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCode(grsdual::GrsCode);

fn certificate<'py>(py: Python<'py>, cert: TransportCertificate) -> PyResult<(PyCode, Bound<'py, PyAny>)> {
    let desc = to_py(py, &CertificateDescriptor::of(&cert, true))?;
    Ok((PyCode(cert.transported), desc))
}

#[pymethods]
impl PyCode {
    /// `GRS_k(points, scaling)`; `None` in `points` is the point at infinity.
    #[staticmethod]
    fn grs(field: &PyField, k: usize, points: Vec<Option<u32>>, scaling: Vec<u32>) -> PyResult<Self> {
        let f = &field.0;
        let pts = points
            .into_iter()
            .map(|p| match p {
                Some(raw) => f.from_raw(raw).map(EvaluationPoint::Finite),
                None => Ok(EvaluationPoint::Infinity),
            })
            .collect::<grsdual::Result<Vec<_>>>()
            .map_err(err)?;
        let v = scaling
            .into_iter()
            .map(|raw| f.from_raw(raw))
            .collect::<grsdual::Result<Vec<_>>>()
            .map_err(err)?;
        let set = EvaluationSet::new(f, pts).map_err(err)?;
        let v = ScalingVector::new(f, v).map_err(err)?;
        grs::make_code(f, k, set, v).map(PyCode).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let desc: CodeDescriptor = serde_json::from_str(text).map_err(|e| GrsDualError::new_err(e.to_string()))?;
        desc.to_code().map(PyCode).map_err(err)
    }

    #[pyo3(signature = (with_matrix = true))]
    fn to_json(&self, with_matrix: bool) -> PyResult<String> {
        grsdual::descriptor::to_json(&CodeDescriptor::of(&self.0, with_matrix)).map_err(err)
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn points(&self) -> Vec<Option<u32>> {
        self.0.points().points().iter().map(|p| p.finite().map(Elem::raw)).collect()
    }

    #[getter]
    fn scaling(&self) -> Vec<u32> {
        self.0.scaling().entries().iter().map(|e| e.raw()).collect()
    }

    #[getter]
    fn generator(&self) -> Vec<Vec<u32>> {
        let g = self.0.generator();
        (0..g.rows()).map(|i| g.row(i).iter().map(|e| e.raw()).collect()).collect()
    }

    #[getter]
    fn provenance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, self.0.provenance())
    }

    fn is_self_dual(&self) -> bool {
        grs::is_self_dual(&self.0).self_dual
    }

    /// Full verification report as a dict.
    #[pyo3(signature = (mds = "auto", seed = 0))]
    fn verify<'py>(&self, py: Python<'py>, mds: &str, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let mode: MdsMode = mds.parse().map_err(GrsDualError::new_err)?;
        let opts = MdsOptions {
            seed,
            ..MdsOptions::with_mode(mode)
        };
        let report = py.detach(|| verify_code(&self.0, &opts)).map_err(err)?;
        to_py(py, &report)
    }

    #[pyo3(signature = (bound = 1 << 22))]
    fn min_distance(&self, py: Python<'_>, bound: u128) -> PyResult<usize> {
        py.detach(|| grs::min_distance(&self.0, bound)).map(|(d, _)| d).map_err(err)
    }

    fn encode(&self, message: Vec<u32>) -> PyResult<Vec<u32>> {
        let f = self.0.field();
        let msg = message
            .into_iter()
            .map(|raw| f.from_raw(raw))
            .collect::<grsdual::Result<Vec<_>>>()
            .map_err(err)?;
        grs::encode(&self.0, &msg)
            .map(|w| w.into_iter().map(Elem::raw).collect())
            .map_err(err)
    }

    /// Recovers the message from a word with erasures (`None`).
    fn decode(&self, word: Vec<Option<u32>>) -> PyResult<Vec<u32>> {
        let f = self.0.field();
        let rx = word
            .into_iter()
            .map(|s| s.map(|raw| f.from_raw(raw)).transpose())
            .collect::<grsdual::Result<Vec<_>>>()
            .map_err(err)?;
        grs::erasure_decode(&self.0, &rx)
            .map(|m| m.into_iter().map(Elem::raw).collect())
            .map_err(err)
    }

    /// Moves the code along `t -> (c + d t) / (a + b t)`; returns the new
    /// code and its certificate.
    fn transport<'py>(
        &self,
        py: Python<'py>,
        a: u32,
        b: u32,
        c: u32,
        d: u32,
    ) -> PyResult<(PyCode, Bound<'py, PyAny>)> {
        let f = self.0.field();
        let [a, b, c, d] = [a, b, c, d].map(|x| f.from_raw(x));
        let g = MobiusTransform::new(f, a.map_err(err)?, b.map_err(err)?, c.map_err(err)?, d.map_err(err)?)
            .map_err(err)?;
        let cert = mobius::transport(&self.0, &g).map_err(err)?;
        certificate(py, cert)
    }

    fn remove_infinity<'py>(&self, py: Python<'py>) -> PyResult<(PyCode, Bound<'py, PyAny>)> {
        let cert = mobius::remove_infinity(&self.0).map_err(err)?;
        certificate(py, cert)
    }

    fn __repr__(&self) -> String {
        format!("Code(q={}, n={}, k={})", self.0.field().q(), self.0.n(), self.0.k())
    }
}

/// Builds the self-dual code for one parameter tuple.
#[pyfunction]
fn construct(q: u64, theorem: u8, case: &str, n_prime: u64, t: u64) -> PyResult<PyCode> {
    let theorem = Theorem::try_from(theorem).map_err(GrsDualError::new_err)?;
    let case: Case = case.parse().map_err(GrsDualError::new_err)?;
    let params = ConstructionParams::new(q, n_prime, t, theorem, case).map_err(err)?;
    let field = constructions::field_for_square(q).map_err(err)?;
    constructions::construct(&field, &params).map(PyCode).map_err(err)
}

/// One dict per achievable even length up to `max_n`.
#[pyfunction]
fn enumerate_lengths<'py>(py: Python<'py>, q: u64, max_n: u64) -> PyResult<Bound<'py, PyAny>> {
    let entries = constructions::enumerate_lengths(q, max_n).map_err(err)?;
    to_py(py, &entries)
}

#[pymodule(name = "grsdual")]
fn grsdual_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_lengths, m)?)?;
    m.add("GrsDualError", m.py().get_type::<GrsDualError>())?;
    Ok(())
}
