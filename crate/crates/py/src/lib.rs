use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use ::pamat::error::Error;
use ::pamat::matrix::{BinaryMatrix, Position};
use ::pamat::permutation::Permutation;
use ::pamat::zigzag::ZigzagPath;
use ::pamat::{analytics, construct312, containment, extremal, oracle, zigzag};

create_exception!(pamat, PamatError, PyValueError);
create_exception!(pamat, FormatError, PamatError);
create_exception!(pamat, DomainError, PamatError);
create_exception!(pamat, PreconditionError, PamatError);
create_exception!(pamat, StructuralError, PamatError);
create_exception!(pamat, ResourceError, PyRuntimeError);

struct PyErrWrap(Error);

impl From<Error> for PyErrWrap {
    fn from(e: Error) -> Self {
        PyErrWrap(e)
    }
}

impl From<PyErrWrap> for PyErr {
    fn from(e: PyErrWrap) -> PyErr {
        let msg = e.0.to_string();
        match e.0 {
            Error::Format { .. } => FormatError::new_err(msg),
            Error::Domain(_) => DomainError::new_err(msg),
            Error::Precondition(_) => PreconditionError::new_err(msg),
            Error::Structural { .. } => StructuralError::new_err(msg),
            Error::Resource(_) => ResourceError::new_err(msg),
        }
    }
}

type PResult<T> = Result<T, PyErrWrap>;

/// Library report structs go through their serde form and come back as plain dicts.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A (0,1)-matrix. Indices are 0-based in Python.
#[pyclass(name = "Matrix", module = "pamat", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatrix(BinaryMatrix);

#[pymethods]
impl PyMatrix {
    /// Build from text (`"101\n011"`) or a list of rows of 0/1 values.
    #[new]
    fn new(data: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = data.extract::<String>() {
            return Ok(PyMatrix(BinaryMatrix::parse(&text).map_err(PyErrWrap)?));
        }
        let rows: Vec<Vec<u8>> = data.extract()?;
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&v| v != 0).collect()).collect();
        Ok(PyMatrix(BinaryMatrix::from_rows(&rows).map_err(PyErrWrap)?))
    }

    #[staticmethod]
    fn zeros(rows: usize, cols: usize) -> PyResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(DomainError::new_err("dimensions must be positive"));
        }
        Ok(PyMatrix(BinaryMatrix::zeros(rows, cols)))
    }

    #[staticmethod]
    fn ones(rows: usize, cols: usize) -> PyResult<Self> {
        if rows == 0 || cols == 0 {
            return Err(DomainError::new_err("dimensions must be positive"));
        }
        Ok(PyMatrix(BinaryMatrix::ones(rows, cols)))
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn count_ones(&self) -> usize {
        self.0.count_ones()
    }

    fn __getitem__(&self, idx: (usize, usize)) -> PyResult<bool> {
        let (r, c) = idx;
        if r >= self.0.rows() || c >= self.0.cols() {
            return Err(pyo3::exceptions::PyIndexError::new_err("index out of range"));
        }
        Ok(self.0.get(r, c))
    }

    fn with_one(&self, r: usize, c: usize) -> PyResult<Self> {
        if r >= self.0.rows() || c >= self.0.cols() {
            return Err(pyo3::exceptions::PyIndexError::new_err("index out of range"));
        }
        Ok(PyMatrix(self.0.with_one(r, c)))
    }

    fn to_list(&self) -> Vec<Vec<u8>> {
        (0..self.0.rows()).map(|r| (0..self.0.cols()).map(|c| u8::from(self.0.get(r, c))).collect()).collect()
    }

    fn transpose(&self) -> Self {
        PyMatrix(self.0.transpose())
    }

    fn contains(&self, pattern: &PyPermutation) -> bool {
        containment::contains(&self.0, &pattern.0)
    }

    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.0.render())
    }
}

#[pyclass(name = "Permutation", module = "pamat", eq, frozen, skip_from_py_object, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermutation(Permutation);

#[pymethods]
impl PyPermutation {
    /// Accepts a one-line word (`"312"`), a comma list, or a sequence of ints.
    #[new]
    fn new(data: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(text) = data.extract::<String>() {
            return Ok(PyPermutation(Permutation::parse_word(&text).map_err(PyErrWrap)?));
        }
        let values: Vec<usize> = data.extract()?;
        Ok(PyPermutation(Permutation::new(values).map_err(PyErrWrap)?))
    }

    #[staticmethod]
    fn identity(k: usize) -> Self {
        PyPermutation(Permutation::identity(k))
    }

    #[staticmethod]
    fn max_first(k: usize) -> Self {
        PyPermutation(Permutation::max_first(k))
    }

    fn values(&self) -> Vec<usize> {
        self.0.values().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn inverse(&self) -> Self {
        PyPermutation(self.0.inverse())
    }

    fn reversal(&self) -> Self {
        PyPermutation(self.0.reversal())
    }

    fn complement(&self) -> Self {
        PyPermutation(self.0.complement())
    }

    fn to_matrix(&self) -> PyMatrix {
        PyMatrix(self.0.to_matrix())
    }

    fn __str__(&self) -> String {
        self.0.comma_list()
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.0.comma_list())
    }
}

#[pyclass(name = "ZigzagPath", module = "pamat", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyZigzagPath(ZigzagPath);

#[pymethods]
impl PyZigzagPath {
    /// Parse the path file format: an `RL` or `LR` header, then one `r,c` per line.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyZigzagPath(ZigzagPath::parse(text).map_err(PyErrWrap)?))
    }

    #[getter]
    fn orientation(&self) -> &'static str {
        self.0.orientation().tag()
    }

    /// Cells as 1-based `(row, col)` pairs, matching the file format.
    fn cells(&self) -> Vec<(usize, usize)> {
        self.0.cells().iter().map(|p| (p.row, p.col)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn to_matrix(&self, m: usize, n: usize) -> PResult<PyMatrix> {
        Ok(PyMatrix(self.0.to_matrix(m, n)?))
    }

    fn __str__(&self) -> String {
        self.0.render()
    }
}

fn pairs(v: &[Position]) -> Vec<(usize, usize)> {
    v.iter().map(|p| (p.row, p.col)).collect()
}

#[pyfunction]
fn contains(a: &PyMatrix, pattern: &PyPermutation) -> bool {
    containment::contains(&a.0, &pattern.0)
}

/// Closed-form maximum number of ones as `(value, status)`, or None if no formula is known.
#[pyfunction]
fn max_ones(pattern: &PyPermutation, m: usize, n: usize) -> Option<(usize, String)> {
    extremal::extremal_formula(m, n, &pattern.0).map(|v| {
        let status = match v.status {
            extremal::FormulaStatus::Trivial => "trivial",
            extremal::FormulaStatus::Proven => "proven",
            extremal::FormulaStatus::Conjectured => "conjectured",
        };
        (v.value, status.to_string())
    })
}

#[pyfunction]
#[pyo3(signature = (m, n, k, path=None))]
fn construct_identity_avoiding(m: usize, n: usize, k: usize, path: Option<&PyZigzagPath>) -> PResult<PyMatrix> {
    Ok(PyMatrix(match path {
        Some(p) => extremal::construct_identity_avoiding_from_path(m, n, k, &p.0)?,
        None => extremal::construct_canonical_identity_avoiding(m, n, k)?,
    }))
}

#[pyfunction]
#[pyo3(signature = (m, n, path=None, seed=0, shadow=false))]
fn construct_312(m: usize, n: usize, path: Option<&PyZigzagPath>, seed: u64, shadow: bool) -> PResult<PyMatrix> {
    let path = match path {
        Some(p) => p.0.clone(),
        None => construct312::random_lr_path(m, n, seed)?,
    };
    Ok(PyMatrix(if shadow {
        construct312::construct_312_shadow(m, n, &path)?
    } else {
        construct312::construct_312_maximal_seeded(m, n, &path, seed)?
    }))
}

#[pyfunction]
#[pyo3(signature = (a, pattern, seed=0))]
fn greedy_saturate(a: &PyMatrix, pattern: &PyPermutation, seed: u64) -> PResult<PyMatrix> {
    Ok(PyMatrix(extremal::greedy_saturate(&a.0, &pattern.0, seed)?))
}

#[pyfunction]
fn is_maximal(a: &PyMatrix, pattern: &PyPermutation) -> bool {
    extremal::validate_maximal(&a.0, &pattern.0)
}

#[pyfunction]
fn decompose(a: &PyMatrix, k: usize) -> PResult<Vec<PyZigzagPath>> {
    Ok(extremal::peel_zigzag_decomposition(&a.0, k)?.into_iter().map(PyZigzagPath).collect())
}

#[pyfunction]
fn recognize_zigzag(a: &PyMatrix) -> Option<PyZigzagPath> {
    zigzag::recognize_zigzag(&a.0).map(PyZigzagPath)
}

/// `(crucial, corners)` as lists of 1-based cells.
#[pyfunction]
fn crucial_ones(path: &PyZigzagPath) -> PResult<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let (crucial, corners) = zigzag::crucial_and_corner_ones(&path.0)?;
    Ok((pairs(&crucial), pairs(&corners)))
}

#[pyfunction]
fn decompose_jn(n: usize) -> PyResult<Vec<PyPermutation>> {
    if n == 0 {
        return Err(DomainError::new_err("n must be positive"));
    }
    Ok(extremal::decompose_jn(n).into_iter().map(PyPermutation).collect())
}

#[pyfunction]
fn permanent(a: &PyMatrix) -> PResult<u128> {
    Ok(analytics::permanent(&a.0)?)
}

/// The pattern-avoiding permanent; with `witnesses=True` returns `(value, [Permutation])`.
#[pyfunction]
#[pyo3(signature = (a, pattern, witnesses=false))]
fn avoiding_permanent<'py>(
    py: Python<'py>,
    a: &PyMatrix,
    pattern: &PyPermutation,
    witnesses: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let r = analytics::avoiding_permanent(&a.0, &pattern.0, witnesses).map_err(PyErrWrap)?;
    match r.witnesses {
        Some(w) => {
            let list: Vec<PyPermutation> = w.into_iter().map(PyPermutation).collect();
            (r.value, list).into_pyobject(py).map(Bound::into_any)
        }
        None => Ok(r.value.into_pyobject(py)?.into_any()),
    }
}

#[pyfunction]
fn catalan(n: u32) -> BigUint {
    analytics::catalan(n)
}

#[pyfunction]
fn enumerate_avoiding(n: usize, pattern: &PyPermutation) -> PyResult<Vec<PyPermutation>> {
    if n == 0 {
        return Err(DomainError::new_err("n must be positive"));
    }
    Ok(analytics::enumerate_avoiding(n, &pattern.0).map(PyPermutation).collect())
}

#[pyfunction]
fn extend_avoiding(values: Vec<usize>, n: usize, pattern: &PyPermutation) -> PResult<Option<PyPermutation>> {
    Ok(analytics::extend_avoiding(&values, n, &pattern.0)?.map(PyPermutation))
}

#[pyfunction]
fn is_total_support(a: &PyMatrix) -> PResult<bool> {
    Ok(analytics::is_total_support(&a.0)?)
}

#[pyfunction]
fn is_fully_indecomposable(a: &PyMatrix) -> PResult<bool> {
    Ok(analytics::is_fully_indecomposable(&a.0)?)
}

#[pyfunction]
fn is_permutation_avoiding(a: &PyMatrix, pattern: &PyPermutation) -> PResult<bool> {
    Ok(analytics::is_sigma_permutation_avoiding(&a.0, &pattern.0)?)
}

#[pyfunction]
fn oracle_max_ones<'py>(py: Python<'py>, pattern: &PyPermutation, m: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &oracle::brute_max_ones(m, n, &pattern.0).map_err(PyErrWrap)?)
}

#[pyfunction]
fn oracle_enumerate_maximal(pattern: &PyPermutation, m: usize, n: usize) -> PResult<Vec<PyMatrix>> {
    Ok(oracle::enumerate_maximal(m, n, &pattern.0)?.map(PyMatrix).collect())
}

#[pyfunction]
fn oracle_conjecture<'py>(py: Python<'py>, m: usize, n: usize, k: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &oracle::check_conjecture_k1(m, n, k).map_err(PyErrWrap)?)
}

#[pyfunction]
fn oracle_membership<'py>(py: Python<'py>, a: &PyMatrix, k: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &oracle::conjecture_membership(&a.0, k).map_err(PyErrWrap)?)
}

#[pyfunction]
#[pyo3(signature = (pattern, n, constraint="none"))]
fn oracle_permanent<'py>(
    py: Python<'py>,
    pattern: &PyPermutation,
    n: usize,
    constraint: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let constraint: oracle::PermanentConstraint = constraint.parse().map_err(PyErrWrap)?;
    to_py(py, &oracle::search_max_avoiding_permanent(n, &pattern.0, constraint).map_err(PyErrWrap)?)
}

#[pymodule]
#[pyo3(name = "pamat")]
fn pamat_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PamatError", py.get_type::<PamatError>())?;
    m.add("FormatError", py.get_type::<FormatError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("StructuralError", py.get_type::<StructuralError>())?;
    m.add("ResourceError", py.get_type::<ResourceError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyZigzagPath>()?;
    m.add_function(wrap_pyfunction!(contains, m)?)?;
    m.add_function(wrap_pyfunction!(max_ones, m)?)?;
    m.add_function(wrap_pyfunction!(construct_identity_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(construct_312, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_saturate, m)?)?;
    m.add_function(wrap_pyfunction!(is_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(recognize_zigzag, m)?)?;
    m.add_function(wrap_pyfunction!(crucial_ones, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_jn, m)?)?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(avoiding_permanent, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(extend_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(is_total_support, m)?)?;
    m.add_function(wrap_pyfunction!(is_fully_indecomposable, m)?)?;
    m.add_function(wrap_pyfunction!(is_permutation_avoiding, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_max_ones, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_enumerate_maximal, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_conjecture, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_membership, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_permanent, m)?)?;
    Ok(())
}
