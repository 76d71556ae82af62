use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

use hullfix::boundary::{self, DEFAULT_MAX_PERIOD};
use hullfix::config::{parse_config, IfsConfig};
use hullfix::convex::{convex_hull, ConvexBody};
use hullfix::hutchinson::{self, DEFAULT_MAX_ITER};
use hullfix::ocsc::{self, RegularizeCaps};
use hullfix::{Angle, Error, Point};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_)
        | Error::InvalidArgument(_)
        | Error::InvalidAngle(_)
        | Error::InvalidSimilitude(_)
        | Error::DegenerateCandidate
        | Error::EmptyInput => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn polygon(points: Vec<(f64, f64)>) -> PyResult<ConvexBody> {
    let pts: Vec<Point> = points.into_iter().map(|(x, y)| Point::new(x, y)).collect();
    convex_hull(&pts).map_err(py_err)
}

/// A contracting similitude `z ↦ r·e^{iα}·z + b`.
///
/// The angle is `angle` radians, or exactly `num/den·π` when `angle_pi`
/// is given. Exactly one of `center` (fixed point) and `offset` (`b`)
/// must be set.
#[pyclass(module = "hullfix_py", frozen, from_py_object)]
#[derive(Clone)]
struct Similitude {
    inner: hullfix::Similitude,
}

#[pymethods]
impl Similitude {
    #[new]
    #[pyo3(signature = (ratio, angle=0.0, *, angle_pi=None, center=None, offset=None))]
    fn new(
        ratio: f64,
        angle: f64,
        angle_pi: Option<(i64, i64)>,
        center: Option<(f64, f64)>,
        offset: Option<(f64, f64)>,
    ) -> PyResult<Self> {
        let a = match angle_pi {
            Some((num, den)) => Angle::pi_fraction(num, den),
            None => Angle::radians(angle),
        }
        .map_err(py_err)?;
        let inner = match (center, offset) {
            (Some((x, y)), None) => hullfix::Similitude::from_center(ratio, a, Point::new(x, y)),
            (None, Some((x, y))) => hullfix::Similitude::from_offset(ratio, a, Point::new(x, y)),
            (None, None) => hullfix::Similitude::from_offset(ratio, a, Point::new(0.0, 0.0)),
            (Some(_), Some(_)) => {
                return Err(PyValueError::new_err(
                    "give either center or offset, not both",
                ))
            }
        }
        .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.inner.ratio()
    }

    /// Rotation angle in radians.
    #[getter]
    fn angle(&self) -> f64 {
        self.inner.angle().to_radians()
    }

    #[getter]
    fn offset(&self) -> (f64, f64) {
        let b = self.inner.offset();
        (b.x, b.y)
    }

    fn fixed_point(&self) -> (f64, f64) {
        let z = self.inner.fixed_point();
        (z.x, z.y)
    }

    fn __call__(&self, point: (f64, f64)) -> (f64, f64) {
        let z = self.inner.apply(Point::new(point.0, point.1));
        (z.x, z.y)
    }

    fn __repr__(&self) -> String {
        let b = self.inner.offset();
        format!(
            "Similitude(ratio={}, angle={}, offset=({}, {}))",
            self.inner.ratio(),
            self.inner.angle(),
            b.x,
            b.y
        )
    }
}

#[pyclass(module = "hullfix_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct IfsSystem {
    inner: hullfix::IfsSystem,
}

#[pymethods]
impl IfsSystem {
    #[new]
    fn new(maps: Vec<Similitude>) -> PyResult<Self> {
        let inner =
            hullfix::IfsSystem::new(maps.into_iter().map(|m| m.inner).collect()).map_err(py_err)?;
        Ok(Self { inner })
    }

    /// Parses the JSON config format used by the command-line tool.
    #[staticmethod]
    fn from_config(text: &str) -> PyResult<Self> {
        let inner = parse_config(text)
            .and_then(|c| c.to_system())
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    fn to_config(&self) -> String {
        IfsConfig::from_system(&self.inner).to_json_pretty()
    }

    fn maps(&self) -> Vec<Similitude> {
        self.inner
            .maps()
            .iter()
            .map(|&inner| Similitude { inner })
            .collect()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    fn fixed_points(&self) -> Vec<(f64, f64)> {
        self.inner
            .fixed_points()
            .iter()
            .map(|z| (z.x, z.y))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "IfsSystem(<{} maps, q={}>)",
            self.inner.len(),
            self.inner.q()
        )
    }
}

/// The convex hull of the attractor with its certified Hausdorff error.
#[pyclass(module = "hullfix_py", frozen)]
struct Hull {
    inner: hullfix::AttractorHull,
}

#[pymethods]
impl Hull {
    #[getter]
    fn vertices(&self) -> Vec<(f64, f64)> {
        self.inner
            .body
            .vertices()
            .iter()
            .map(|v| (v.x, v.y))
            .collect()
    }

    #[getter]
    fn error_bound(&self) -> f64 {
        self.inner.error_bound()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.certificate.iterations
    }

    fn perimeter(&self) -> f64 {
        self.inner.body.perimeter()
    }

    fn area(&self) -> f64 {
        self.inner.body.area()
    }

    fn diameter(&self) -> f64 {
        self.inner.body.diameter()
    }

    fn certificate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialize(py, &self.inner.certificate)
    }

    fn __repr__(&self) -> String {
        format!(
            "Hull(<{} vertices, error_bound={:e}>)",
            self.inner.body.vertices().len(),
            self.inner.error_bound()
        )
    }
}

/// Fixed point of the convexified Hutchinson operator, within `tol`.
#[pyfunction]
#[pyo3(signature = (system, tol=None, seed=None))]
fn attractor_hull(
    system: &IfsSystem,
    tol: Option<f64>,
    seed: Option<Vec<(f64, f64)>>,
) -> PyResult<Hull> {
    let sys = &system.inner;
    let tol = tol.unwrap_or_else(|| hutchinson::default_tolerance(sys));
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(PyValueError::new_err("tol must be positive and finite"));
    }
    let seed = match seed {
        Some(pts) => polygon(pts)?,
        None => hutchinson::default_seed(sys),
    };
    let inner =
        hutchinson::iterate_to_fixed_point(sys, &seed, tol, DEFAULT_MAX_ITER).map_err(py_err)?;
    Ok(Hull { inner })
}

#[pyfunction]
#[pyo3(signature = (system, hull, min_length, max_word=DEFAULT_MAX_PERIOD))]
fn sides<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: &Hull,
    min_length: f64,
    max_word: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let s = boundary::enumerate_sides(&system.inner, &hull.inner, max_word, min_length)
        .map_err(py_err)?;
    serialize(py, &s)
}

#[pyfunction]
fn sides_order_one<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: &Hull,
) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &boundary::sides_order_one(&system.inner, &hull.inner))
}

#[pyfunction]
#[pyo3(signature = (system, hull, threshold=0.1, max_period=DEFAULT_MAX_PERIOD))]
fn corners<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: &Hull,
    threshold: f64,
    max_period: usize,
) -> PyResult<Bound<'py, PyAny>> {
    serialize(
        py,
        &boundary::detect_corners(&system.inner, &hull.inner, threshold, max_period),
    )
}

#[pyfunction]
#[pyo3(signature = (system, hull, max_depth=8))]
fn dimension<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: &Hull,
    max_depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let est = boundary::vertex_dimension_estimate(&system.inner, &hull.inner, max_depth)
        .map_err(py_err)?;
    serialize(py, &est.rows)
}

/// Open convex set condition for `candidate` (polygon vertices), or for the
/// interior of the hull when no candidate is given.
#[pyfunction]
#[pyo3(signature = (system, hull=None, candidate=None))]
fn check_ocsc<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: Option<&Hull>,
    candidate: Option<Vec<(f64, f64)>>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = match (candidate, hull) {
        (Some(pts), _) => ocsc::check_ocsc(&system.inner, &polygon(pts)?),
        (None, Some(h)) => ocsc::interior_condition(&system.inner, &h.inner),
        (None, None) => return Err(PyValueError::new_err("give a hull or a candidate polygon")),
    }
    .map_err(py_err)?;
    serialize(py, &report)
}

#[pyfunction]
fn refine(system: &IfsSystem, p: usize) -> PyResult<IfsSystem> {
    Ok(IfsSystem {
        inner: ocsc::refine(&system.inner, p).map_err(py_err)?,
    })
}

/// Returns `(refined_system, report)`; raises `RuntimeError` when no
/// refinement up to `max_exponent` has connected components.
#[pyfunction]
#[pyo3(signature = (system, hull, max_exponent=8))]
fn regularize<'py>(
    py: Python<'py>,
    system: &IfsSystem,
    hull: &Hull,
    max_exponent: usize,
) -> PyResult<(IfsSystem, Bound<'py, PyAny>)> {
    let caps = RegularizeCaps {
        max_exponent,
        ..RegularizeCaps::default()
    };
    let (inner, report) = ocsc::regularize(&system.inner, &hull.inner, caps).map_err(py_err)?;
    Ok((IfsSystem { inner }, serialize(py, &report)?))
}

#[pymodule]
pub fn hullfix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Similitude>()?;
    m.add_class::<IfsSystem>()?;
    m.add_class::<Hull>()?;
    m.add_function(wrap_pyfunction!(attractor_hull, m)?)?;
    m.add_function(wrap_pyfunction!(sides, m)?)?;
    m.add_function(wrap_pyfunction!(sides_order_one, m)?)?;
    m.add_function(wrap_pyfunction!(corners, m)?)?;
    m.add_function(wrap_pyfunction!(dimension, m)?)?;
    m.add_function(wrap_pyfunction!(check_ocsc, m)?)?;
    m.add_function(wrap_pyfunction!(refine, m)?)?;
    m.add_function(wrap_pyfunction!(regularize, m)?)?;
    m.add("SCHEMA", hullfix::emit::SCHEMA)?;
    Ok(())
}
