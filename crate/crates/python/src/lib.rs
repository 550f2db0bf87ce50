//! Python bindings: the `ncu` extension module.
//!
//! Elements of the extended algebra are exposed as `ncu.Elem`, built from the same expression
//! syntax as the command line. Library errors raise `ncu.NcuError`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ncu_core::aext::AElem;
use ncu_core::cli::parse_aelem;
use ncu_core::ncmaxwell::{div, monopole_residual, rot, VecField};
use ncu_core::scalars::{CenterFun, GaussRat};
use ncu_core::suites;
use ncu_core::thetamat::theta_hat;
use ncu_core::whcalc::{deriv as quantum_deriv, Wrt};

create_exception!(ncu, NcuError, PyException);

fn err(e: ncu_core::Error) -> PyErr {
    NcuError::new_err(e.to_string())
}

fn parse_wrt(name: &str) -> PyResult<Wrt> {
    Wrt::parse(name).ok_or_else(|| NcuError::new_err(format!("unknown derivative {name:?}; expected t, ttilde, x, y or z")))
}

/// An element of the extended algebra in canonical form.
#[pyclass(module = "ncu", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Elem(AElem);

#[pymethods]
impl Elem {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        parse_aelem(expr).map(Elem).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Elem({:?})", self.0.to_string())
    }

    fn __add__(&self, o: &Elem) -> Elem {
        Elem(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Elem) -> Elem {
        Elem(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Elem) -> Elem {
        Elem(&self.0 * &o.0)
    }

    fn __neg__(&self) -> Elem {
        Elem(-&self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Elem {
        Elem(self.0.pow(e))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Quantum partial derivative; `wrt` is one of `t`, `ttilde`, `x`, `y`, `z`.
    fn deriv(&self, wrt: &str) -> PyResult<Elem> {
        Ok(Elem(quantum_deriv(parse_wrt(wrt)?, &self.0)))
    }

    /// The 4×4 matrix of the multiplicative map, as printed entries.
    fn theta(&self) -> Vec<Vec<String>> {
        let m = theta_hat(&self.0);
        (0..4).map(|i| (0..4).map(|j| m.get(i, j).to_string()).collect()).collect()
    }

    /// The commutator `self*o - o*self`.
    fn commutator(&self, o: &Elem) -> Elem {
        Elem(self.0.commutator(&o.0))
    }

    /// The classical limit hbar -> 0, printed with `r` for the radius.
    fn classical_limit(&self) -> PyResult<String> {
        self.0.classical_limit().map(|c| c.to_string()).map_err(err)
    }

    /// Substitute a Gaussian-rational value (`p/q` or `ip/q`) for hbar.
    fn specialize_hbar(&self, value: &str) -> PyResult<Elem> {
        let v: GaussRat = value.parse().map_err(|e: ncu_core::scalars::gauss::GaussParseError| NcuError::new_err(e.0))?;
        self.0.specialize_hbar(&v).map(Elem).map_err(err)
    }
}

/// Parse an expression into canonical form.
#[pyfunction]
fn parse(expr: &str) -> PyResult<Elem> {
    Elem::new(expr)
}

/// `deriv(wrt, expr)`: the quantum partial derivative of an expression.
#[pyfunction]
fn deriv(wrt: &str, expr: &str) -> PyResult<Elem> {
    Elem::new(expr)?.deriv(wrt)
}

/// Monopole check of the field `profile*(x, y, z)`, as printed results keyed by `residual`, `div` and `rot`.
#[pyfunction]
fn monopole<'py>(py: Python<'py>, profile: &str) -> PyResult<Bound<'py, PyDict>> {
    let f = parse_aelem(profile).map_err(err)?;
    let f: CenterFun = f.as_central().ok_or_else(|| NcuError::new_err(format!("{profile} is not central")))?;
    let residual = monopole_residual(&f).map_err(err)?;
    let field = VecField::radial(&f);
    let out = PyDict::new(py);
    out.set_item("residual", residual.to_string())?;
    out.set_item("div", div(&field).to_string())?;
    out.set_item("rot", rot(&field).0.iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    Ok(out)
}

/// Run an identity suite (`ch`, `braid`, `theta-mult`, `drham`, `evaluators` or `all`).
#[pyfunction]
#[pyo3(signature = (suite, seed = 0))]
fn check<'py>(py: Python<'py>, suite: &str, seed: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let reports = suites::run(suite, seed).ok_or_else(|| NcuError::new_err(format!("unknown suite {suite:?}")))?;
    reports
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("suite", r.name)?;
            d.set_item("pass", r.pass)?;
            d.set_item("checked", r.checked)?;
            d.set_item("detail", r.detail)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
pub fn ncu(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NcuError", m.py().get_type::<NcuError>())?;
    m.add_class::<Elem>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(deriv, m)?)?;
    m.add_function(wrap_pyfunction!(monopole, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
