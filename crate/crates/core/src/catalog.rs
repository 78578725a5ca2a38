//! Equipment and server specifications.
//!
//! The catalog is read from the same structured document as the rest of the
//! run configuration (`devices` and `servers` tables). Powers are given in
//! watts and capacities in Gbps; they are converted to bit/s on load.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::parse_document;
use crate::error::{Error, Result};
use crate::units::GBPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Router,
    CoreSwitch,
    AccessSwitch,
    FiberLink,
    Radio,
    Nic,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::Router,
        Role::CoreSwitch,
        Role::AccessSwitch,
        Role::FiberLink,
        Role::Radio,
        Role::Nic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Router => "router",
            Role::CoreSwitch => "core_switch",
            Role::AccessSwitch => "access_switch",
            Role::FiberLink => "fiber_link",
            Role::Radio => "radio",
            Role::Nic => "nic",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Role::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::schema("role", format!("unknown role `{s}`")))
    }
}

/// A named device with a rated power and a carried capacity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquipmentSpec {
    pub name: String,
    pub role: Role,
    /// Watts.
    pub rated_power: f64,
    /// Bits per second.
    pub capacity: f64,
}

impl EquipmentSpec {
    pub fn new(name: impl Into<String>, role: Role, rated_power: f64, capacity: f64) -> Self {
        Self {
            name: name.into(),
            role,
            rated_power,
            capacity,
        }
    }

    /// Joules per bit at full utilisation.
    pub fn energy_per_bit(&self) -> f64 {
        energy_per_bit(self)
    }
}

/// `rated_power / capacity`, in J/bit.
pub fn energy_per_bit(spec: &EquipmentSpec) -> f64 {
    spec.rated_power / spec.capacity
}

/// Baseband-processing server installed at a nodal unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ServerSpec {
    pub cores: u32,
    /// Watts per core.
    pub power_per_core: f64,
    /// Server-level BBP capacity in bit/s.
    pub total_bbp_capacity: f64,
}

impl ServerSpec {
    pub fn total_power(&self) -> f64 {
        f64::from(self.cores) * self.power_per_core
    }

    /// Joules per bit of a fully utilised server.
    pub fn energy_per_bit(&self) -> f64 {
        self.total_power() / self.total_bbp_capacity
    }

    fn check(&self, label: &str, problems: &mut Vec<String>) {
        if self.cores < 1 {
            problems.push(format!("servers.{label}.cores: must be >= 1"));
        }
        if !(self.power_per_core > 0.0 && self.power_per_core.is_finite()) {
            problems.push(format!(
                "servers.{label}.power_per_core_w: must be positive, got {}",
                self.power_per_core
            ));
        }
        if !(self.total_bbp_capacity > 0.0 && self.total_bbp_capacity.is_finite()) {
            problems.push(format!(
                "servers.{label}.bbp_capacity_gbps: must be positive, got {}",
                self.total_bbp_capacity / GBPS
            ));
        }
    }
}

/// Immutable set of devices plus the two server classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Catalog {
    pub devices: Vec<EquipmentSpec>,
    pub edge_server: ServerSpec,
    pub dc_server: ServerSpec,
}

impl Catalog {
    /// Builds a catalog and checks every invariant, reporting all problems at once.
    pub fn new(devices: Vec<EquipmentSpec>, edge_server: ServerSpec, dc_server: ServerSpec) -> Result<Self> {
        let mut problems = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, d) in devices.iter().enumerate() {
            let label = if d.name.is_empty() {
                format!("devices[{i}]")
            } else {
                format!("devices[{i}] `{}`", d.name)
            };
            if d.name.trim().is_empty() {
                problems.push(format!("{label}.name: must be non-empty"));
            } else if !seen.insert(d.name.as_str()) {
                problems.push(format!("{label}.name: duplicate device name"));
            }
            if !(d.rated_power > 0.0 && d.rated_power.is_finite()) {
                problems.push(format!("{label}.power_w: must be positive, got {}", d.rated_power));
            }
            if !(d.capacity > 0.0 && d.capacity.is_finite()) {
                problems.push(format!(
                    "{label}.capacity_gbps: must be positive, got {}",
                    d.capacity / GBPS
                ));
            }
        }
        edge_server.check("edge", &mut problems);
        dc_server.check("dc", &mut problems);
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(Self {
            devices,
            edge_server,
            dc_server,
        })
    }

    /// First device with the given role.
    pub fn device(&self, role: Role) -> Option<&EquipmentSpec> {
        self.devices.iter().find(|d| d.role == role)
    }

    pub fn require(&self, role: Role) -> Result<&EquipmentSpec> {
        self.device(role)
            .ok_or_else(|| Error::Misconfiguration(format!("catalog has no device with role `{role}`")))
    }

    pub fn by_name(&self, name: &str) -> Option<&EquipmentSpec> {
        self.devices.iter().find(|d| d.name == name)
    }

    /// NIC / line-system chassis. Falls back to the access switch when no
    /// explicit `nic` device is listed.
    pub fn nic(&self) -> Result<&EquipmentSpec> {
        match self.device(Role::Nic) {
            Some(d) => Ok(d),
            None => self.require(Role::AccessSwitch),
        }
    }

    pub fn to_document(&self) -> CatalogDoc {
        CatalogDoc {
            devices: self
                .devices
                .iter()
                .map(|d| DeviceEntry {
                    name: d.name.clone(),
                    role: d.role,
                    power_w: d.rated_power,
                    capacity_gbps: d.capacity / GBPS,
                })
                .collect(),
            servers: ServersEntry {
                edge: ServerEntry::from(&self.edge_server),
                dc: ServerEntry::from(&self.dc_server),
            },
        }
    }
}

/// Built-in catalog: the reference equipment table plus the edge and DC servers.
pub fn default_catalog() -> Catalog {
    let gbps = |x: f64| x * GBPS;
    Catalog::new(
        vec![
            EquipmentSpec::new("Cisco 8000", Role::Router, 172.0, gbps(3200.0)),
            EquipmentSpec::new("Cisco 9600", Role::CoreSwitch, 3000.0, gbps(25600.0)),
            EquipmentSpec::new("Cisco Catalyst 1300", Role::AccessSwitch, 86.7, gbps(480.0)),
            EquipmentSpec::new("1FINITY T600", Role::FiberLink, 4265.0, gbps(9600.0)),
            EquipmentSpec::new("Benetel 650", Role::Radio, 110.0, gbps(11.0)),
        ],
        ServerSpec {
            cores: 4,
            power_per_core: 6.0,
            total_bbp_capacity: gbps(1.0),
        },
        ServerSpec {
            cores: 20,
            power_per_core: 5.5,
            total_bbp_capacity: gbps(5.0),
        },
    )
    .expect("built-in catalog is valid")
}

// ---- document schema ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceEntry {
    pub name: String,
    pub role: Role,
    pub power_w: f64,
    pub capacity_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerEntry {
    pub cores: u32,
    pub power_per_core_w: f64,
    pub bbp_capacity_gbps: f64,
}

impl From<&ServerSpec> for ServerEntry {
    fn from(s: &ServerSpec) -> Self {
        Self {
            cores: s.cores,
            power_per_core_w: s.power_per_core,
            bbp_capacity_gbps: s.total_bbp_capacity / GBPS,
        }
    }
}

impl ServerEntry {
    fn to_spec(&self) -> ServerSpec {
        ServerSpec {
            cores: self.cores,
            power_per_core: self.power_per_core_w,
            total_bbp_capacity: self.bbp_capacity_gbps * GBPS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServersEntry {
    pub edge: ServerEntry,
    pub dc: ServerEntry,
}

/// Serialized form of a [`Catalog`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub devices: Vec<DeviceEntry>,
    pub servers: ServersEntry,
}

impl CatalogDoc {
    pub fn into_catalog(&self) -> Result<Catalog> {
        let devices = self
            .devices
            .iter()
            .map(|d| EquipmentSpec::new(d.name.clone(), d.role, d.power_w, d.capacity_gbps * GBPS))
            .collect();
        Catalog::new(devices, self.servers.edge.to_spec(), self.servers.dc.to_spec())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("catalog document serializes")
    }
}

/// Parses and validates a catalog document (`devices` + `servers` tables).
/// Unknown keys are rejected.
pub fn load_catalog(source: &str) -> Result<Catalog> {
    let doc: CatalogDoc = parse_document(source, false)?.0;
    doc.into_catalog()
}
