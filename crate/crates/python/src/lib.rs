//! Python bindings for `ranwatt`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ranwatt::access::{self, AccessTechProfile};
use ranwatt::catalog::{self, Role};
use ranwatt::config::{validate_document, LoadedConfig};
use ranwatt::scenario::{self, parse_scenarios, DeploymentScenario};
use ranwatt::trend::{self, TrendParams, TrendSample};
use ranwatt::xhaul::{self, HaulParams, Segment};
use ranwatt::Error;

create_exception!(ranwatt, RanwattError, PyException);
create_exception!(ranwatt, SchemaError, RanwattError);
create_exception!(ranwatt, ValidationError, RanwattError);
create_exception!(ranwatt, DomainError, RanwattError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Schema { .. } => SchemaError::new_err(msg),
        Error::Validation(_) | Error::Misconfiguration(_) => ValidationError::new_err(msg),
        Error::Domain(_) => DomainError::new_err(msg),
        Error::Io { .. } => PyOSError::new_err(msg),
    }
}

/// One catalog device. Power in W, capacity in bit/s.
#[pyclass(name = "EquipmentSpec", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyEquipmentSpec {
    name: String,
    role: String,
    rated_power: f64,
    capacity: f64,
}

#[pymethods]
impl PyEquipmentSpec {
    #[new]
    fn new(name: String, role: &str, rated_power: f64, capacity: f64) -> PyResult<Self> {
        role.parse::<Role>().map_err(to_py)?;
        Ok(Self {
            name,
            role: role.to_string(),
            rated_power,
            capacity,
        })
    }

    /// J/bit at full utilisation.
    fn energy_per_bit(&self) -> PyResult<f64> {
        Ok(catalog::energy_per_bit(&self.spec()?))
    }

    fn __repr__(&self) -> String {
        format!(
            "EquipmentSpec({:?}, {:?}, rated_power={}, capacity={})",
            self.name, self.role, self.rated_power, self.capacity
        )
    }
}

impl PyEquipmentSpec {
    fn spec(&self) -> PyResult<catalog::EquipmentSpec> {
        let role = self.role.parse::<Role>().map_err(to_py)?;
        Ok(catalog::EquipmentSpec::new(
            self.name.clone(),
            role,
            self.rated_power,
            self.capacity,
        ))
    }

    fn from_spec(s: &catalog::EquipmentSpec) -> Self {
        Self {
            name: s.name.clone(),
            role: s.role.to_string(),
            rated_power: s.rated_power,
            capacity: s.capacity,
        }
    }
}

/// Devices of the built-in catalog.
#[pyfunction]
fn default_catalog() -> Vec<PyEquipmentSpec> {
    catalog::default_catalog()
        .devices
        .iter()
        .map(PyEquipmentSpec::from_spec)
        .collect()
}

/// Parses a TOML catalog document and returns its devices.
#[pyfunction]
fn load_catalog(source: &str) -> PyResult<Vec<PyEquipmentSpec>> {
    let c = catalog::load_catalog(source).map_err(to_py)?;
    Ok(c.devices.iter().map(PyEquipmentSpec::from_spec).collect())
}

#[pyfunction]
fn trend_project(e0: f64, mu: f64, t0: f64, t: f64) -> PyResult<f64> {
    let p = TrendParams::new(e0, mu, t0).map_err(to_py)?;
    Ok(trend::project(&p, t))
}

/// Returns `(e0, mu, r_squared)`.
#[pyfunction]
fn trend_fit(years: Vec<f64>, values: Vec<f64>, t0: f64) -> PyResult<(f64, f64, f64)> {
    if years.len() != values.len() {
        return Err(SchemaError::new_err("years and values differ in length"));
    }
    let samples: Vec<TrendSample> = years
        .into_iter()
        .zip(values)
        .map(|(year, value)| TrendSample { year, value })
        .collect();
    let f = trend::fit(&samples, t0).map_err(to_py)?;
    Ok((f.params.e0, f.params.mu, f.r_squared))
}

/// Per-user access energy, J/bit.
#[pyfunction]
#[pyo3(signature = (r_u, p_tu, n_tu, p_cpe, p_rn=0.0, n_rn=1))]
fn access_energy_per_bit(r_u: f64, p_tu: f64, n_tu: u32, p_cpe: f64, p_rn: f64, n_rn: u32) -> PyResult<f64> {
    let p = AccessTechProfile {
        name: "custom".into(),
        p_tu,
        n_tu,
        p_rn,
        n_rn,
        p_cpe,
        calibration: false,
    };
    p.validate().map_err(to_py)?;
    access::access_energy_per_bit(&p, r_u).map_err(to_py)
}

/// Default profiles over `rates`; returns `(tech, r_u, J/bit)` rows.
#[pyfunction]
fn compare_technologies(rates: Vec<f64>) -> PyResult<Vec<(String, f64, f64)>> {
    let profiles = access::default_profiles(&catalog::default_catalog()).map_err(to_py)?;
    let rows = access::compare_technologies(&profiles, &rates).map_err(to_py)?;
    Ok(rows.into_iter().map(|r| (r.tech, r.r_u, r.energy_per_bit)).collect())
}

/// Energy of one x-haul segment over the default catalog, J/bit.
#[pyfunction]
#[pyo3(signature = (segment, gamma, alpha=1.0, sigma=1.0, rho=1.0, hops_switch=0, hops_link=0, hops_router=0))]
#[allow(clippy::too_many_arguments)]
fn haul_energy(
    segment: &str,
    gamma: f64,
    alpha: f64,
    sigma: f64,
    rho: f64,
    hops_switch: u32,
    hops_link: u32,
    hops_router: u32,
) -> PyResult<f64> {
    let segment = match segment {
        "fronthaul" => Segment::Fronthaul,
        "midhaul" => Segment::Midhaul,
        "backhaul" => Segment::Backhaul,
        other => return Err(SchemaError::new_err(format!("unknown segment `{other}`"))),
    };
    let p = HaulParams {
        segment,
        alpha,
        sigma,
        rho,
        hops_switch,
        hops_link,
        hops_router,
    };
    xhaul::haul_energy(&p, gamma, &catalog::default_catalog()).map_err(to_py)
}

#[pyfunction]
fn du_count(n_ru: u32) -> PyResult<u32> {
    scenario::du_count(n_ru).map_err(to_py)
}

fn resolve(config: Option<&str>, lenient: bool) -> PyResult<ranwatt::config::Resolved> {
    let loaded = LoadedConfig::from_str(config.unwrap_or(""), lenient, None).map_err(to_py)?;
    loaded.config.resolve().map_err(to_py)
}

fn points(config: Option<&str>, scenarios: Option<&str>, lenient: bool) -> PyResult<Vec<scenario::SweepPoint>> {
    let r = resolve(config, lenient)?;
    let scen: Vec<DeploymentScenario> = match scenarios {
        Some(s) => parse_scenarios(s).map_err(to_py)?,
        None => r.scenarios.clone(),
    };
    scenario::sweep(&r.model, &scen, r.n_ru_min..=r.n_ru_max).map_err(to_py)
}

/// Runs the sweep. `config` is a TOML document merged over the defaults;
/// each row is a dict of the CSV columns, energies in J/bit.
#[pyfunction]
#[pyo3(signature = (config=None, scenarios=None, lenient=false))]
fn sweep<'py>(
    py: Python<'py>,
    config: Option<&str>,
    scenarios: Option<&str>,
    lenient: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut rows = Vec::new();
    for p in points(config, scenarios, lenient)? {
        for (s, b) in &p.breakdowns {
            let d = PyDict::new(py);
            d.set_item("scenario", s.as_str())?;
            d.set_item("n_ru", p.n_ru)?;
            d.set_item("n_du", p.n_du)?;
            d.set_item("n_cu", p.n_cu)?;
            for (k, v) in [
                ("e_w", b.e_w),
                ("e_e", b.e_e),
                ("e_pr", b.e_pr),
                ("e_eq", b.e_eq()),
                ("e_fh", b.e_fh),
                ("e_mh", b.e_mh),
                ("e_bh", b.e_bh),
                ("e_tr", b.e_tr),
                ("e_total", b.e_total),
            ] {
                d.set_item(k, v)?;
            }
            rows.push(d);
        }
    }
    Ok(rows)
}

/// Same sweep rendered as the CSV the command line writes.
#[pyfunction]
#[pyo3(signature = (config=None, scenarios=None, lenient=false))]
fn sweep_csv(config: Option<&str>, scenarios: Option<&str>, lenient: bool) -> PyResult<String> {
    ranwatt::format::sweep_csv_string(&points(config, scenarios, lenient)?).map_err(to_py)
}

/// Returns `(valid, report)`.
#[pyfunction]
#[pyo3(signature = (config, lenient=false))]
fn validate(config: &str, lenient: bool) -> (bool, String) {
    let r = validate_document(config, lenient, None);
    (r.is_valid(), r.render())
}

#[pymodule]
#[pyo3(name = "ranwatt")]
fn ranwatt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("RanwattError", py.get_type::<RanwattError>())?;
    m.add("SchemaError", py.get_type::<SchemaError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("DomainError", py.get_type::<DomainError>())?;
    m.add_class::<PyEquipmentSpec>()?;
    m.add_function(wrap_pyfunction!(default_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(load_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(trend_project, m)?)?;
    m.add_function(wrap_pyfunction!(trend_fit, m)?)?;
    m.add_function(wrap_pyfunction!(access_energy_per_bit, m)?)?;
    m.add_function(wrap_pyfunction!(compare_technologies, m)?)?;
    m.add_function(wrap_pyfunction!(haul_energy, m)?)?;
    m.add_function(wrap_pyfunction!(du_count, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
