//! Energy-per-bit accounting for radio access networks.
//!
//! A transaction-based model: every bit a user sends or receives pays for the
//! radio, baseband processing, equipment and transport it traverses. The
//! crate covers the equipment catalog, year-over-year efficiency trends, an
//! access-technology comparison, the per-unit crosshaul model and the four
//! baseband-placement scenarios.

pub mod access;
pub mod catalog;
pub mod chart;
pub mod cli;
pub mod config;
pub mod error;
pub mod format;
pub mod scenario;
pub mod trend;
pub mod units;
pub mod xhaul;

pub use access::{access_energy_per_bit, compare_technologies, AccessRow, AccessTechProfile};
pub use catalog::{default_catalog, energy_per_bit, Catalog, EquipmentSpec, Role, ServerSpec};
pub use config::{default_model, LoadedConfig, RunConfig};
pub use error::{Error, Result};
pub use scenario::{du_count, sweep, DeploymentScenario, Model, SweepPoint};
pub use trend::{fit, project, FitResult, TrendParams, TrendSample};
pub use xhaul::{total_energy, EnergyBreakdown, NodalUnit, Segment, TrafficModel};
