//! Run configuration: document parsing, default merging, strict/lenient key
//! checking, validation reports and resolution into a [`Model`].

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogDoc, DeviceEntry, EquipmentSpec, Role, ServersEntry};
use crate::error::{Error, Result};
use crate::scenario::{parse_scenarios, CoverageHook, DeploymentScenario, Model, SiteProvisioning, SiteRule};
use crate::units::{GBPS, NJ};
use crate::xhaul::{HaulParams, NodalUnit, PerUnit, Segment, UnitParams};

pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

/// Parses a TOML document into `T`. Returns the paths of keys `T` does not
/// know about; in strict mode any such key is a schema error.
pub fn parse_document<T: DeserializeOwned>(source: &str, lenient: bool) -> Result<(T, Vec<String>)> {
    let value = parse_value(source)?;
    deserialize_value(value, lenient)
}

fn parse_value(source: &str) -> Result<toml::Value> {
    source
        .parse::<toml::Table>()
        .map(toml::Value::Table)
        .map_err(|e| Error::schema("<document>", e.message().to_string()))
}

fn deserialize_value<T: DeserializeOwned>(value: toml::Value, lenient: bool) -> Result<(T, Vec<String>)> {
    let mut ignored = Vec::new();
    let mut track = |path: serde_ignored::Path| ignored.push(path.to_string());
    let de = serde_ignored::Deserializer::new(value, &mut track);
    let parsed: T = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(
            if path == "." { "<root>".into() } else { path },
            e.into_inner().to_string(),
        )
    })?;
    if !lenient {
        if let Some(first) = ignored.first() {
            return Err(Error::schema(first.clone(), "unknown key (pass --lenient to ignore)"));
        }
    }
    Ok((parsed, ignored))
}

// ---- document schema ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficEntry {
    pub users: u32,
    pub monthly_gb_per_user: f64,
    pub ecpri_rate_per_ru_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadioEntry {
    pub e_w_nj_per_bit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ServerClass {
    Edge,
    Dc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitEntry {
    pub alpha: f64,
    pub sigma: f64,
    pub rho: f64,
    pub server: ServerClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerUnitEntry<T> {
    pub ru: T,
    pub du: T,
    pub cu: T,
    pub dc: T,
}

impl<T> PerUnitEntry<T> {
    fn get(&self, u: NodalUnit) -> &T {
        match u {
            NodalUnit::Ru => &self.ru,
            NodalUnit::Du => &self.du,
            NodalUnit::Cu => &self.cu,
            NodalUnit::Dc => &self.dc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaulEntry {
    pub alpha: f64,
    pub sigma: f64,
    pub rho: f64,
    pub hops_switch: u32,
    pub hops_link: u32,
    #[serde(default)]
    pub hops_router: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaulsEntry {
    pub fronthaul: HaulEntry,
    pub midhaul: HaulEntry,
    pub backhaul: HaulEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvisioningEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fanout: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<u32>,
    pub oversubscription: f64,
    pub multiplexing_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub hook: CoverageHook,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub n_ru_min: u32,
    pub n_ru_max: u32,
    pub scenarios: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// Sweep CSV path; `-` writes to standard output.
    pub csv: String,
    /// Prefix for chart files.
    pub chart_prefix: String,
}

/// The merged configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Optional separate catalog document replacing `devices` and `servers`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog_file: Option<PathBuf>,
    pub devices: Vec<DeviceEntry>,
    pub servers: ServersEntry,
    pub traffic: TrafficEntry,
    pub radio: RadioEntry,
    pub units: PerUnitEntry<UnitEntry>,
    pub hauls: HaulsEntry,
    pub provisioning: PerUnitEntry<ProvisioningEntry>,
    pub coverage: CoverageEntry,
    pub sweep: SweepEntry,
    pub output: OutputEntry,
}

/// Everything a run needs once defaults and overrides are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub model: Model,
    pub scenarios: Vec<DeploymentScenario>,
    pub n_ru_min: u32,
    pub n_ru_max: u32,
    pub output: OutputEntry,
}

/// One leaf of the merged document and where its value came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub path: String,
    pub value: String,
    pub overridden: bool,
}

/// A user document merged over the built-in defaults.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub settings: Vec<Setting>,
    /// Keys the schema does not know; only non-empty in lenient mode.
    pub unknown_keys: Vec<String>,
}

fn merge(base: &mut toml::Value, over: &toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (slot, v) => *slot = v.clone(),
    }
}

fn leaves(value: &toml::Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match value {
        toml::Value::Table(t) => {
            for (k, v) in t {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                leaves(v, &path, out);
            }
        }
        toml::Value::Array(a) if a.iter().all(|v| v.is_table()) && !a.is_empty() => {
            for (i, v) in a.iter().enumerate() {
                leaves(v, &format!("{prefix}[{i}]"), out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn user_has(user: &toml::Value, path: &str) -> bool {
    // Arrays are replaced wholesale, so any path under a user-supplied array
    // counts as overridden.
    let mut cur = user;
    for part in path.split('.') {
        let (key, idx) = match part.find('[') {
            Some(i) => (&part[..i], Some(())),
            None => (part, None),
        };
        match cur.get(key) {
            Some(next) if idx.is_some() => return next.is_array(),
            Some(next) => cur = next,
            None => return false,
        }
    }
    true
}

impl LoadedConfig {
    /// Merges `source` over the defaults. `base_dir` resolves a relative
    /// `catalog_file`.
    pub fn from_str(source: &str, lenient: bool, base_dir: Option<&Path>) -> Result<Self> {
        let user = parse_value(source)?;
        let mut merged = parse_value(DEFAULT_CONFIG).expect("default config parses");
        merge(&mut merged, &user);

        if let Some(file) = user.get("catalog_file").and_then(|v| v.as_str()) {
            let path = base_dir.map(|d| d.join(file)).unwrap_or_else(|| PathBuf::from(file));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::io(format!("reading catalog {}", path.display()), e))?;
            let cat = parse_value(&text)?;
            // validate the catalog document shape on its own first
            let _: (CatalogDoc, _) = deserialize_value(cat.clone(), false)
                .map_err(|e| e.context(format_args!("catalog {}", path.display())))?;
            if let (toml::Value::Table(m), toml::Value::Table(c)) = (&mut merged, cat) {
                for (k, v) in c {
                    m.insert(k, v);
                }
            }
        }

        let mut flat = Vec::new();
        leaves(&merged, "", &mut flat);
        let settings = flat
            .into_iter()
            .map(|(path, value)| Setting {
                overridden: user_has(&user, &path)
                    || (path.starts_with("devices") || path.starts_with("servers"))
                        && user.get("catalog_file").is_some(),
                path,
                value,
            })
            .collect();

        let (config, unknown_keys) = deserialize_value::<RunConfig>(merged, lenient)?;
        Ok(Self {
            config,
            settings,
            unknown_keys,
        })
    }

    pub fn from_path(path: &Path, lenient: bool) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading config {}", path.display()), e))?;
        Self::from_str(&text, lenient, path.parent())
    }

    pub fn defaults() -> Self {
        Self::from_str("", false, None).expect("default config loads")
    }
}

impl RunConfig {
    pub fn catalog_doc(&self) -> CatalogDoc {
        CatalogDoc {
            devices: self.devices.clone(),
            servers: self.servers.clone(),
        }
    }

    /// Applies every invariant and builds the evaluation model. All problems
    /// found are reported together.
    pub fn resolve(&self) -> Result<Resolved> {
        let catalog = self.catalog_doc().into_catalog()?;
        let mut problems = Vec::new();

        let units = PerUnit::from_fn(|u| {
            let e = self.units.get(u);
            let nic = match &e.nic {
                Some(name) => catalog
                    .by_name(name)
                    .cloned()
                    .ok_or_else(|| format!("units.{}.nic: no device named `{name}`", u.key())),
                None => catalog
                    .nic()
                    .cloned()
                    .map_err(|e| format!("units.{}.nic: {e}", u.key())),
            };
            let nic = nic.unwrap_or_else(|p| {
                problems.push(p);
                EquipmentSpec::new("<missing>", Role::Nic, 1.0, 1.0)
            });
            UnitParams {
                alpha: e.alpha,
                sigma: e.sigma,
                rho: e.rho,
                nic,
                server: Some(match e.server {
                    ServerClass::Edge => catalog.edge_server,
                    ServerClass::Dc => catalog.dc_server,
                }),
            }
        });

        let provisioning = PerUnit::from_fn(|u| {
            let e = self.provisioning.get(u);
            let rule = match (e.fanout, e.sites) {
                (Some(k), None) => SiteRule::FanOut(k),
                (None, Some(m)) => SiteRule::Fixed(m),
                _ => {
                    problems.push(format!(
                        "provisioning.{}: set exactly one of `fanout` or `sites`",
                        u.key()
                    ));
                    SiteRule::FanOut(1)
                }
            };
            SiteProvisioning {
                rule,
                oversubscription: e.oversubscription,
                multiplexing_exponent: e.multiplexing_exponent,
            }
        });

        let haul = |segment: Segment, e: &HaulEntry| HaulParams {
            segment,
            alpha: e.alpha,
            sigma: e.sigma,
            rho: e.rho,
            hops_switch: e.hops_switch,
            hops_link: e.hops_link,
            hops_router: e.hops_router,
        };
        let hauls = [
            haul(Segment::Fronthaul, &self.hauls.fronthaul),
            haul(Segment::Midhaul, &self.hauls.midhaul),
            haul(Segment::Backhaul, &self.hauls.backhaul),
        ];

        let model = Model {
            catalog,
            users: self.traffic.users,
            monthly_gb_per_user: self.traffic.monthly_gb_per_user,
            ecpri_rate_per_ru: self.traffic.ecpri_rate_per_ru_gbps * GBPS,
            e_w: self.radio.e_w_nj_per_bit * NJ,
            units,
            provisioning,
            hauls,
            coverage: self.coverage.hook,
        };
        if let Err(Error::Validation(more)) = model.validate() {
            problems.extend(more);
        }

        let scenarios = match parse_scenarios(&self.sweep.scenarios.join(",")) {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("sweep.scenarios: {e}"));
                Vec::new()
            }
        };
        if self.sweep.n_ru_min == 0 || self.sweep.n_ru_max < self.sweep.n_ru_min {
            problems.push(format!(
                "sweep: need 1 <= n_ru_min <= n_ru_max, got {}..{}",
                self.sweep.n_ru_min, self.sweep.n_ru_max
            ));
        }

        if !problems.is_empty() {
            let mut seen = BTreeSet::new();
            problems.retain(|p| seen.insert(p.clone()));
            return Err(Error::Validation(problems));
        }
        Ok(Resolved {
            model,
            scenarios,
            n_ru_min: self.sweep.n_ru_min,
            n_ru_max: self.sweep.n_ru_max,
            output: self.output.clone(),
        })
    }
}

/// Model built from the shipped default configuration.
pub fn default_model() -> Model {
    LoadedConfig::defaults()
        .config
        .resolve()
        .expect("default config resolves")
        .model
}

/// Outcome of `validate`: every applied setting plus the problems found.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub settings: Vec<Setting>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.settings {
            let tag = if s.overridden { "override" } else { "default " };
            out.push_str(&format!("{tag} {} = {}\n", s.path, s.value));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!("{} error(s)\n", self.errors.len()));
        out
    }
}

/// Loads, merges and resolves a document, collecting every problem instead
/// of stopping at the first.
pub fn validate_document(source: &str, lenient: bool, base_dir: Option<&Path>) -> ValidationReport {
    let loaded = match LoadedConfig::from_str(source, lenient, base_dir) {
        Ok(l) => l,
        Err(e) => {
            return ValidationReport {
                settings: Vec::new(),
                warnings: Vec::new(),
                errors: vec![e.to_string()],
            }
        }
    };
    let warnings = loaded
        .unknown_keys
        .iter()
        .map(|k| format!("ignored unknown key `{k}`"))
        .collect();
    let errors = match loaded.config.resolve() {
        Ok(_) => Vec::new(),
        Err(Error::Validation(p)) => p,
        Err(e) => vec![e.to_string()],
    };
    ValidationReport {
        settings: loaded.settings,
        warnings,
        errors,
    }
}
