//! Python bindings for `qcd`.

use std::sync::Arc;

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use qcd::QcdError;

create_exception!(pyqcd, DomainError, PyValueError, "Argument outside the domain of the operation.");
create_exception!(pyqcd, NumericError, PyArithmeticError, "An iterative computation failed to converge.");

fn to_py(e: QcdError) -> PyErr {
    match e {
        QcdError::Domain(_) => DomainError::new_err(e.to_string()),
        other => NumericError::new_err(other.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for qcd::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// The real-affine map z -> a*z + b*conj(z).
#[pyclass(name = "AffineMap", module = "pyqcd", frozen)]
struct PyAffineMap(qcd::affine::AffineMap);

#[pymethods]
impl PyAffineMap {
    #[new]
    fn new(a: Complex64, b: Complex64) -> PyResult<Self> {
        qcd::affine::AffineMap::new(a, b).py().map(Self)
    }

    /// Extremal map of the ellipse with horizontal semi-axis alpha and vertical beta
    /// onto the swapped ellipse.
    #[staticmethod]
    fn ellipse_extremal(alpha: f64, beta: f64) -> PyResult<Self> {
        let e = qcd::affine::Ellipse::new(alpha, beta).py()?;
        qcd::affine::ellipse_extremal_map(&e).py().map(Self)
    }

    /// Extremal stretch between rectangles of widths a1 and a2 and unit height.
    #[staticmethod]
    fn rectangle_extremal(a1: f64, a2: f64) -> PyResult<Self> {
        let p = qcd::affine::RectanglePair::new(a1, a2).py()?;
        qcd::affine::rect_extremal_map(&p).py().map(Self)
    }

    #[getter]
    fn a(&self) -> Complex64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> Complex64 {
        self.0.b()
    }

    #[getter]
    fn dilatation(&self) -> f64 {
        self.0.dilatation()
    }

    #[getter]
    fn beltrami(&self) -> Complex64 {
        self.0.beltrami()
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn __call__(&self, z: Complex64) -> Complex64 {
        self.0.apply(z)
    }

    fn __repr__(&self) -> String {
        format!("AffineMap(a={}, b={})", self.0.a(), self.0.b())
    }
}

/// The extremal boundary-fixing self-map of the unit disc sending 0 to -x.
#[pyclass(name = "ShiftMap", module = "pyqcd", frozen)]
struct PyShiftMap(Arc<qcd::shift::ShiftMap>);

#[pymethods]
impl PyShiftMap {
    #[new]
    #[pyo3(signature = (x, tol = 1e-9))]
    fn new(x: f64, tol: f64) -> PyResult<Self> {
        qcd::metrics::cached_shift(x, tol).py().map(Self)
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x()
    }

    /// Maximal dilatation K(x).
    #[getter]
    fn dilatation(&self) -> f64 {
        self.0.dilatation()
    }

    #[getter]
    fn beltrami_norm(&self) -> f64 {
        self.0.beltrami_norm()
    }

    /// Outer radius R of the annulus covering the slit disc.
    #[getter]
    fn outer_radius(&self) -> f64 {
        self.0.outer_radius()
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        qcd::shift::evaluate_shift(&self.0, z).py()
    }

    /// Evaluate at many points, releasing the GIL.
    fn map_points(&self, py: Python<'_>, zs: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        let f = Arc::clone(&self.0);
        py.detach(move || zs.into_iter().map(|z| qcd::shift::evaluate_shift(&f, z)).collect::<qcd::Result<_>>())
            .py()
    }

    /// Finite-difference Beltrami coefficient mu and quadratic differential q at z.
    #[pyo3(signature = (z, h = 1e-5))]
    fn beltrami(&self, z: Complex64, h: f64) -> PyResult<(Complex64, Complex64)> {
        let s = qcd::shift::beltrami_of_shift(&self.0, z, h).py()?;
        Ok((s.mu, s.q))
    }

    fn __repr__(&self) -> String {
        format!("ShiftMap(x={}, K={})", self.0.x(), self.0.dilatation())
    }
}

/// Groetzsch modulus function Phi(R), R > 1.
#[pyfunction]
fn phi(r: f64) -> PyResult<f64> {
    qcd::modulus::phi(r).py()
}

/// mu(r) = (pi/2) K(r')/K(r), the log-module of the disc minus [0, r].
#[pyfunction]
fn grotzsch_mu(r: f64) -> PyResult<f64> {
    qcd::modulus::grotzsch_mu(r).py()
}

#[pyfunction]
fn grotzsch_mu_inverse(value: f64) -> PyResult<f64> {
    qcd::modulus::grotzsch_mu_inverse(value).py()
}

/// K(x) = ((Phi(1/x) + 1)/(Phi(1/x) - 1))^2.
#[pyfunction]
fn extremal_dilatation(x: f64) -> PyResult<f64> {
    qcd::shift::extremal_dilatation(x).py()
}

#[pyfunction]
fn hyperbolic_distance(z1: Complex64, z2: Complex64) -> PyResult<f64> {
    qcd::metrics::hyperbolic_distance(z1, z2).py()
}

#[pyfunction]
fn kra_distance(z1: Complex64, z2: Complex64) -> PyResult<f64> {
    qcd::metrics::kra_distance(z1, z2).py()
}

/// The extremal map sending z1 to z2, evaluated at z.
#[pyfunction]
#[pyo3(signature = (z1, z2, z, tol = 1e-9))]
fn shift_between(z1: Complex64, z2: Complex64, z: Complex64, tol: f64) -> PyResult<Complex64> {
    qcd::metrics::shift_between(z1, z2, z, tol).py()
}

#[pyfunction]
#[pyo3(signature = (k, tol = 1e-9))]
fn gehring_h(k: f64, tol: f64) -> PyResult<f64> {
    qcd::metrics::gehring_h(k, tol).py()
}

/// Grid estimate of a ring module. `kind` is "annulus" (params r_in, r_out),
/// "grotzsch" (r) or "slit" (s).
#[pyfunction]
#[pyo3(signature = (kind, params, n = 512))]
fn laplace_ring_module(py: Python<'_>, kind: &str, params: Vec<f64>, n: usize) -> PyResult<f64> {
    use qcd::verify::RingDomain;
    let domain = match (kind, params.as_slice()) {
        ("annulus", &[r_in, r_out]) => RingDomain::Annulus { r_in, r_out },
        ("grotzsch", &[r]) => RingDomain::GrotzschRing { r },
        ("slit", &[s]) => RingDomain::SlitDisc { s },
        _ => return Err(DomainError::new_err(format!("unknown ring domain {kind} with {} parameters", params.len()))),
    };
    py.detach(|| qcd::verify::laplace_ring_module(domain, n)).py()
}

/// Smallest maximal triangle dilatation of a piecewise-affine disc map moving 0 to -x.
/// Returns (dilatation, converged).
#[pyfunction]
#[pyo3(signature = (x, mesh_refinement = qcd::verify::DEFAULT_MESH_REFINEMENT))]
fn discrete_min_dilatation(py: Python<'_>, x: f64, mesh_refinement: usize) -> PyResult<(f64, bool)> {
    let r = py.detach(|| qcd::verify::discrete_min_dilatation(x, mesh_refinement)).py()?;
    Ok((r.dilatation, r.converged))
}

/// Run the command-line interface with the given arguments; returns the exit code.
#[pyfunction]
fn run_cli(args: Vec<String>) -> i32 {
    qcd::cli::run_cli(std::iter::once("qcd".to_owned()).chain(args))
}

#[pymodule]
fn pyqcd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    m.add_class::<PyAffineMap>()?;
    m.add_class::<PyShiftMap>()?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(grotzsch_mu, m)?)?;
    m.add_function(wrap_pyfunction!(grotzsch_mu_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_dilatation, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(kra_distance, m)?)?;
    m.add_function(wrap_pyfunction!(shift_between, m)?)?;
    m.add_function(wrap_pyfunction!(gehring_h, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_ring_module, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_min_dilatation, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
