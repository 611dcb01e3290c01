//! Python bindings. Results that are JSON documents on the command line come
//! back as plain dicts and lists; exact integers come back as Python ints.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde_json::Value;

use runge_kit::analytic::{check_cor_j, check_prop_j, check_siegel_d, check_siegel_global, CheckOptions};
use runge_kit::bounds::{self, PlaceKind, SplitCartanBound};
use runge_kit::exactmath::{self, IntMatrix};
use runge_kit::gl2::UnitLabel;
use runge_kit::group_spec::GroupSpec;
use runge_kit::runge::{runge_unit, verify_runge_unit};
use runge_kit::units::ModularCurve;
use runge_kit::{cusps, report, Error};

fn err(e: Error) -> PyErr {
    if e.is_invariant() || matches!(e, Error::RankDeficient { .. }) {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).expect("serializable");
    py.import("json")?.call_method1("loads", (text,))
}

fn fraction<'py>(py: Python<'py>, r: &exactmath::Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.numer().clone(), r.denom().clone()))
}

/// A subgroup G of GL2(Z/NZ) together with H_K, the Galois image in (Z/NZ)^x.
#[pyclass(module = "runge_kit", frozen)]
struct Group {
    spec: GroupSpec,
    curve: ModularCurve,
}

impl Group {
    fn from_spec(spec: GroupSpec) -> PyResult<Self> {
        let curve = spec.curve().map_err(err)?;
        Ok(Group { spec, curve })
    }

    fn label(&self, k1: i64, k2: i64) -> PyResult<UnitLabel> {
        UnitLabel::from_i64(self.curve.level(), k1, k2).map_err(err)
    }
}

#[pymethods]
impl Group {
    /// `galois` is "full", "detG" or a list of generating units.
    #[new]
    #[pyo3(signature = (level, generators, galois = None))]
    fn new(level: u32, generators: Vec<[[i64; 2]; 2]>, galois: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        use runge_kit::group_spec::{GaloisField, Preset};
        let galois = match galois {
            None => GaloisField::Preset(Preset::DetG),
            Some(g) => {
                if let Ok(s) = g.extract::<String>() {
                    match s.as_str() {
                        "full" => GaloisField::Preset(Preset::Full),
                        "detG" => GaloisField::Preset(Preset::DetG),
                        other => return Err(PyValueError::new_err(format!("unknown galois preset {other:?}"))),
                    }
                } else {
                    GaloisField::Units(g.extract::<Vec<i64>>()?)
                }
            }
        };
        Self::from_spec(GroupSpec { level, generators, galois })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = GroupSpec::parse(text).map_err(|e| {
            PyValueError::new_err(format!("malformed group spec at line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_spec(spec)
    }

    /// Diagonal subgroup mod the odd prime p with H_K = (Z/pZ)^x.
    #[staticmethod]
    fn split_cartan(p: u32) -> PyResult<Self> {
        if p < 3 || !bounds::is_prime(u64::from(p)) {
            return Err(PyValueError::new_err(format!("{p} is not an odd prime")));
        }
        Self::from_spec(GroupSpec::split_cartan(p))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.spec).expect("serializable")
    }

    #[getter]
    fn level(&self) -> u32 {
        self.curve.level()
    }

    #[getter]
    fn order(&self) -> usize {
        self.curve.group().order()
    }

    #[getter]
    fn gprime_order(&self) -> usize {
        self.curve.g_prime().order()
    }

    #[getter]
    fn det_image(&self) -> Vec<u32> {
        self.curve.group().det_image().elements().to_vec()
    }

    #[getter]
    fn galois(&self) -> Vec<u32> {
        self.curve.h_k().elements().to_vec()
    }

    /// Label classes (k1, k2), in the column order of `divisor_matrix`.
    fn labels(&self) -> Vec<(u32, u32)> {
        self.curve.labels().iter().map(|a| (a.k1(), a.k2())).collect()
    }

    /// Geometric cusps as dicts {"vector": [x, y], "width": e}.
    fn cusps<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &report::cusps(self.curve.layout()))
    }

    fn orbits(&self) -> Vec<Vec<usize>> {
        self.curve.layout().galois_orbits().to_vec()
    }

    fn runge_condition<'py>(&self, py: Python<'py>, s: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = cusps::runge_condition(self.curve.group(), self.curve.h_k(), s).map_err(err)?;
        to_py(py, &serde_json::to_value(r).expect("serializable"))
    }

    /// ord of w_(k1/N, k2/N) at each geometric cusp.
    fn divisor(&self, k1: i64, k2: i64) -> PyResult<Vec<BigInt>> {
        Ok(self.curve.div_w(&self.label(k1, k2)?).map_err(err)?.coefficients)
    }

    /// Rows indexed by Galois orbit, columns by `labels()`.
    fn divisor_matrix(&self) -> PyResult<Vec<Vec<BigInt>>> {
        Ok(self.curve.divisor_matrix().map_err(err)?.to_nested())
    }

    /// Construct and verify a Runge unit for the orbit indices `sigma`.
    #[pyo3(signature = (sigma, s = None, infinite_only = false))]
    fn runge_unit<'py>(
        &self,
        py: Python<'py>,
        sigma: Vec<usize>,
        s: Option<usize>,
        infinite_only: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let c = &self.curve;
        let unit = runge_unit(c, &sigma, s).map_err(err)?;
        let check = verify_runge_unit(c, &unit);
        let bound = bounds::bound_refined(c.level(), c.g_prime().order() as u64, &unit.budget_b, infinite_only)
            .map_err(err)?;
        to_py(py, &report::runge_unit(c, &unit, bound.value, &check))
    }

    fn __repr__(&self) -> String {
        format!("Group(level={}, order={}, galois={:?})", self.level(), self.order(), self.galois())
    }
}

/// B2(num/den) for 0 <= num/den < 1, as a Fraction.
#[pyfunction]
fn bernoulli2(py: Python<'_>, num: i64, den: i64) -> PyResult<Bound<'_, PyAny>> {
    if den == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    fraction(py, &exactmath::bernoulli2(&exactmath::rational(num, den)).map_err(err)?)
}

/// l_a = B2({k1/N})/2 as a Fraction.
#[pyfunction]
fn ell(py: Python<'_>, level: u32, k1: i64, k2: i64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &exactmath::ell(&UnitLabel::from_i64(level, k1, k2).map_err(err)?))
}

/// Integer b with every entry of M·b positive and a bounded l1 norm.
#[pyfunction]
fn positive_combination(rows: Vec<Vec<BigInt>>) -> PyResult<Vec<BigInt>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("rows have different lengths"));
    }
    let m = IntMatrix::new(r, c, rows.into_iter().flatten().collect()).map_err(err)?;
    Ok(exactmath::positive_combination(&m).map_err(err)?.entries().to_vec())
}

fn bound_dict<'py>(py: Python<'py>, r: bounds::BoundReport) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(r).expect("serializable"))
}

#[pyfunction]
fn bound_theorem_1_1(py: Python<'_>, level: u32, g_order: u64) -> PyResult<Bound<'_, PyAny>> {
    bound_dict(py, bounds::bound_theorem_1_1(level, g_order).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (level, g_order, s, infinite_only = false))]
fn bound_theorem_1_2(py: Python<'_>, level: u32, g_order: u64, s: u32, infinite_only: bool) -> PyResult<Bound<'_, PyAny>> {
    bound_dict(py, bounds::bound_theorem_1_2(level, g_order, s, infinite_only).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (level, gprime_order, b, infinite_only = false))]
fn bound_refined(py: Python<'_>, level: u32, gprime_order: u64, b: BigInt, infinite_only: bool) -> PyResult<Bound<'_, PyAny>> {
    bound_dict(py, bounds::bound_refined(level, gprime_order, &b, infinite_only).map_err(err)?)
}

/// `case` is "single-rational" or "two-rational".
#[pyfunction]
fn bound_split_cartan<'py>(py: Python<'py>, p: u32, case: &str) -> PyResult<Bound<'py, PyAny>> {
    let shape = match case {
        "single-rational" => SplitCartanBound::SingleRational,
        "two-rational" => SplitCartanBound::TwoRational,
        other => return Err(PyValueError::new_err(format!("unknown case {other:?}"))),
    };
    bound_dict(py, bounds::bound_split_cartan(p, shape).map_err(err)?)
}

#[pyfunction]
fn bound_x0_plus(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    bound_dict(py, bounds::bound_x0_plus(p).map_err(err)?)
}

#[pyfunction]
fn x0_plus_chain(py: Python<'_>, p: u32) -> PyResult<Bound<'_, PyAny>> {
    bound_dict(py, bounds::x0_plus_chain(p).map_err(err)?)
}

#[pyfunction]
fn isogeny_height_gap(h_prime: f64, delta: u64) -> PyResult<f64> {
    bounds::isogeny_height_gap(h_prime, delta).map_err(err)
}

/// `place` is "infinite", "finite-coprime" or "finite-dividing" (with `prime`).
#[pyfunction]
#[pyo3(signature = (level, place, prime = None))]
fn rho(level: u32, place: &str, prime: Option<u32>) -> PyResult<f64> {
    let kind = match (place, prime) {
        ("infinite", _) => PlaceKind::Infinite,
        ("finite-coprime", _) => PlaceKind::FiniteCoprime,
        ("finite-dividing", Some(p)) => PlaceKind::FiniteDividing(p),
        ("finite-dividing", None) => return Err(PyValueError::new_err("finite-dividing needs prime")),
        (other, _) => return Err(PyValueError::new_err(format!("unknown place {other:?}"))),
    };
    bounds::rho(level, kind).map_err(err)
}

/// Run one of the analytic checks: "prop-j", "cor-j", "siegel-d", "siegel-global".
#[pyfunction]
#[pyo3(signature = (check, level = None, samples = 10_000, seed = 42, terms = 40, hi_prec = false))]
fn verify<'py>(
    py: Python<'py>,
    check: &str,
    level: Option<u32>,
    samples: usize,
    seed: u64,
    terms: usize,
    hi_prec: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = CheckOptions { samples, seed, terms, hi_prec, ..CheckOptions::default() };
    let need = || level.ok_or_else(|| PyValueError::new_err(format!("{check} needs level")));
    let r = match check {
        "prop-j" => py.detach(|| check_prop_j(&opts)),
        "cor-j" => py.detach(|| check_cor_j(&opts)),
        "siegel-d" => {
            let n = need()?;
            py.detach(|| check_siegel_d(n, &opts))
        }
        "siegel-global" => {
            let n = need()?;
            py.detach(|| check_siegel_global(n, &opts))
        }
        other => return Err(PyValueError::new_err(format!("unknown check {other:?}"))),
    }
    .map_err(err)?;
    to_py(py, &serde_json::to_value(r).expect("serializable"))
}

/// Run the command-line front end in-process; returns (exit status, document).
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> PyResult<(i32, Bound<'_, PyAny>)> {
    use clap::Parser;
    let argv = std::iter::once("runge-kit".to_string()).chain(args);
    let config = runge_kit::cli::RunConfig::try_parse_from(argv).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let (code, doc) = py.detach(|| runge_kit::cli::run(&config));
    Ok((code, to_py(py, &doc)?))
}

#[pymodule]
#[pyo3(name = "runge_kit")]
fn runge_kit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(bernoulli2, m)?)?;
    m.add_function(wrap_pyfunction!(ell, m)?)?;
    m.add_function(wrap_pyfunction!(positive_combination, m)?)?;
    m.add_function(wrap_pyfunction!(bound_theorem_1_1, m)?)?;
    m.add_function(wrap_pyfunction!(bound_theorem_1_2, m)?)?;
    m.add_function(wrap_pyfunction!(bound_refined, m)?)?;
    m.add_function(wrap_pyfunction!(bound_split_cartan, m)?)?;
    m.add_function(wrap_pyfunction!(bound_x0_plus, m)?)?;
    m.add_function(wrap_pyfunction!(x0_plus_chain, m)?)?;
    m.add_function(wrap_pyfunction!(isogeny_height_gap, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("SCHEMA", report::SCHEMA)?;
    Ok(())
}
