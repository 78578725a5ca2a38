//! Deployment scenarios, densification rules and the RU sweep.
//!
//! A scenario fixes where baseband processing (BBP) runs. For a given RU
//! count, [`build`] turns the resolved [`Model`] into an [`EvaluationPlan`]:
//! how many sites of each unit are deployed, how many servers the BBP unit
//! needs, and which units and segments still carry eCPRI traffic.
//! [`evaluate`] then applies the per-bit formulas of [`crate::xhaul`].
//!
//! # Site provisioning
//!
//! A unit kind is deployed either with a fixed fan-out (`fanout = k`: one site
//! per `k` RUs, each site sized for its full fan-out when installed) or as a
//! fixed number of sites (`sites = m`: RUs are spread evenly and each site is
//! sized for the RUs it actually serves). A site serving `k` RUs provisions
//! BBP throughput `ecpri_rate * k^exponent / oversubscription`, and the server
//! count is that throughput divided by the server capacity, rounded up.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Role};
use crate::error::{Error, Result};
use crate::xhaul::{
    carries_ecpri, equipment_energy, gamma_equipment, gamma_haul, haul_energy, processing_energy, radio_energy,
    total_energy, EnergyBreakdown, EnergyParts, HaulParams, NodalUnit, PerUnit, Segment, TrafficModel, UnitParams,
};

/// RUs served by one DU under the reference densification rule.
pub const DU_FANOUT: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DeploymentScenario {
    /// BBP at the RU (distributed RAN).
    S1,
    /// BBP at the DU.
    S2,
    /// BBP at the CU.
    S3,
    /// BBP in the regional data center.
    S4,
}

impl DeploymentScenario {
    pub const ALL: [DeploymentScenario; 4] = [
        DeploymentScenario::S1,
        DeploymentScenario::S2,
        DeploymentScenario::S3,
        DeploymentScenario::S4,
    ];

    pub fn bbp_location(self) -> NodalUnit {
        match self {
            DeploymentScenario::S1 => NodalUnit::Ru,
            DeploymentScenario::S2 => NodalUnit::Du,
            DeploymentScenario::S3 => NodalUnit::Cu,
            DeploymentScenario::S4 => NodalUnit::Dc,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeploymentScenario::S1 => "S1",
            DeploymentScenario::S2 => "S2",
            DeploymentScenario::S3 => "S3",
            DeploymentScenario::S4 => "S4",
        }
    }
}

impl fmt::Display for DeploymentScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DeploymentScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DeploymentScenario::ALL
            .into_iter()
            .find(|sc| sc.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::schema("scenarios", format!("unknown scenario `{s}`")))
    }
}

/// Parses a comma-separated scenario list such as `S1,S3`. The result is
/// sorted and deduplicated.
pub fn parse_scenarios(list: &str) -> Result<Vec<DeploymentScenario>> {
    let mut out = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::schema("scenarios", "no scenario selected"));
    }
    Ok(out)
}

/// `ceil(n_ru / 4)`.
pub fn du_count(n_ru: u32) -> Result<u32> {
    if n_ru == 0 {
        return Err(Error::domain("at least one RU is required"));
    }
    Ok(n_ru.div_ceil(DU_FANOUT))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteRule {
    /// One site per `k` RUs; each site is sized for `k` RUs.
    FanOut(u32),
    /// A fixed number of sites sharing the RUs evenly.
    Fixed(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteProvisioning {
    pub rule: SiteRule,
    pub oversubscription: f64,
    pub multiplexing_exponent: f64,
}

impl SiteProvisioning {
    pub fn site_count(&self, n_ru: u32) -> u32 {
        match self.rule {
            SiteRule::FanOut(k) => n_ru.div_ceil(k),
            SiteRule::Fixed(m) => m,
        }
    }

    /// RUs each site is sized for.
    pub fn sized_for(&self, n_ru: u32) -> Vec<u32> {
        match self.rule {
            SiteRule::FanOut(k) => vec![k; n_ru.div_ceil(k) as usize],
            SiteRule::Fixed(m) => (0..m).map(|i| n_ru / m + u32::from(i < n_ru % m)).collect(),
        }
    }

    /// BBP throughput a site serving `rus` RUs must provision, bit/s.
    pub fn site_demand(&self, rus: u32, ecpri_rate_per_ru: f64) -> f64 {
        if rus == 0 {
            return 0.0;
        }
        ecpri_rate_per_ru * f64::from(rus).powf(self.multiplexing_exponent) / self.oversubscription
    }

    fn validate(&self, unit: NodalUnit, problems: &mut Vec<String>) {
        let key = unit.key();
        match self.rule {
            SiteRule::FanOut(0) => problems.push(format!("provisioning.{key}.fanout: must be >= 1")),
            SiteRule::Fixed(0) => problems.push(format!("provisioning.{key}.sites: must be >= 1")),
            _ => {}
        }
        if !(self.oversubscription > 0.0 && self.oversubscription.is_finite()) {
            problems.push(format!("provisioning.{key}.oversubscription: must be positive"));
        }
        if !(0.0..=1.0).contains(&self.multiplexing_exponent) {
            problems.push(format!("provisioning.{key}.multiplexing_exponent: must lie in [0, 1]"));
        }
    }
}

/// How the coverage factor of eCPRI-carrying units and segments follows the
/// deployment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverageHook {
    /// Use the configured factor unchanged.
    Identity,
    /// Multiply the configured factor by deployed units per user, so one unit
    /// per user gives a factor of 1.
    DeploymentDensity,
}

impl CoverageHook {
    pub fn factor(self, deployed_units: u32, users: u32) -> f64 {
        match self {
            CoverageHook::Identity => 1.0,
            CoverageHook::DeploymentDensity => f64::from(deployed_units) / f64::from(users),
        }
    }
}

/// Fully resolved model parameters (all defaults and overrides applied).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Model {
    pub catalog: Catalog,
    pub users: u32,
    pub monthly_gb_per_user: f64,
    /// bit/s of eCPRI per RU.
    pub ecpri_rate_per_ru: f64,
    /// Wireless transfer energy, J/bit.
    pub e_w: f64,
    pub units: PerUnit<UnitParams>,
    pub provisioning: PerUnit<SiteProvisioning>,
    /// Fronthaul, midhaul, backhaul.
    pub hauls: [HaulParams; 3],
    pub coverage: CoverageHook,
}

impl Model {
    /// Checks the cross-field invariants every evaluation relies on.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for role in [
            Role::Router,
            Role::CoreSwitch,
            Role::AccessSwitch,
            Role::FiberLink,
            Role::Radio,
        ] {
            if self.catalog.device(role).is_none() {
                problems.push(format!("devices: no device with role `{role}`"));
            }
        }
        if self.users == 0 {
            problems.push("traffic.users: must be >= 1".into());
        }
        if !(self.monthly_gb_per_user > 0.0 && self.monthly_gb_per_user.is_finite()) {
            problems.push("traffic.monthly_gb_per_user: must be positive".into());
        }
        if !(self.ecpri_rate_per_ru > 0.0 && self.ecpri_rate_per_ru.is_finite()) {
            problems.push("traffic.ecpri_rate_per_ru_gbps: must be positive".into());
        }
        if !(self.e_w >= 0.0 && self.e_w.is_finite()) {
            problems.push("radio.e_w_nj_per_bit: must be >= 0".into());
        }
        for (u, p) in self.units.iter() {
            for (name, v) in [("alpha", p.alpha), ("sigma", p.sigma), ("rho", p.rho)] {
                if !(v >= 1.0 && v.is_finite()) {
                    problems.push(format!("units.{}.{name}: must be >= 1, got {v}", u.key()));
                }
            }
            if p.server.is_none() {
                problems.push(format!("units.{}.server: a BBP server is required", u.key()));
            }
        }
        for (u, p) in self.provisioning.iter() {
            p.validate(u, &mut problems);
        }
        if self.provisioning[NodalUnit::Ru].rule != SiteRule::FanOut(1) {
            problems.push("provisioning.ru: RUs are always deployed one per RU (fanout = 1)".into());
        }
        for (h, seg) in self.hauls.iter().zip(Segment::ALL) {
            if h.segment != seg {
                problems.push(format!("hauls.{seg}: segment mismatch"));
            }
            for (name, v) in [("alpha", h.alpha), ("sigma", h.sigma), ("rho", h.rho)] {
                if !(v >= 1.0 && v.is_finite()) {
                    problems.push(format!("hauls.{seg}.{name}: must be >= 1, got {v}"));
                }
            }
            if let Err(e) = h.validate() {
                problems.push(format!("hauls.{seg}.hops_router: {e}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn traffic(&self, n_ru: u32) -> Result<TrafficModel> {
        TrafficModel::from_usage(self.users, self.monthly_gb_per_user, self.ecpri_rate_per_ru, n_ru)
    }

    pub fn haul(&self, segment: Segment) -> &HaulParams {
        &self.hauls[segment as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitPlan {
    /// Deployed sites.
    pub count: u32,
    /// True when the unit forwards unprocessed radio data.
    pub pre_bbp: bool,
    /// Coverage factor after the hook.
    pub rho: f64,
    /// BBP servers installed; non-zero only at the BBP unit.
    pub servers: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentPlan {
    pub carries_ecpri: bool,
    /// Haul parameters with the coverage hook applied.
    pub params: HaulParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationPlan {
    pub scenario: DeploymentScenario,
    pub n_ru: u32,
    pub traffic: TrafficModel,
    pub units: PerUnit<UnitPlan>,
    pub segments: [SegmentPlan; 3],
    /// Provisioned BBP throughput at the BBP unit, bit/s.
    pub bbp_throughput: f64,
}

impl EvaluationPlan {
    pub fn bbp_servers(&self) -> u32 {
        self.units[self.scenario.bbp_location()].servers
    }
}

/// Rounds up with a relative slack so exact multiples are not pushed over
/// by floating-point noise.
fn servers_for(demand: f64, capacity: f64) -> u32 {
    let ratio = demand / capacity;
    (ratio * (1.0 - 1e-12)).ceil() as u32
}

pub fn build(model: &Model, scenario: DeploymentScenario, n_ru: u32) -> Result<EvaluationPlan> {
    if n_ru == 0 {
        return Err(Error::domain("at least one RU is required"));
    }
    let traffic = model.traffic(n_ru)?;
    let bbp = scenario.bbp_location();

    let mut units = PerUnit::from_fn(|u| {
        let count = if u == NodalUnit::Ru {
            n_ru
        } else {
            model.provisioning[u].site_count(n_ru)
        };
        let pre_bbp = u.is_before(bbp);
        let configured = model.units[u].rho;
        let rho = if pre_bbp {
            configured * model.coverage.factor(count, model.users)
        } else {
            configured
        };
        UnitPlan {
            count,
            pre_bbp,
            rho,
            servers: 0,
        }
    });

    let server = model.units[bbp]
        .server
        .ok_or_else(|| Error::Misconfiguration(format!("{bbp} hosts BBP in {scenario} but has no server")))?;
    let prov = &model.provisioning[bbp];
    let servers: u32 = prov
        .sized_for(n_ru)
        .into_iter()
        .map(|rus| {
            servers_for(
                prov.site_demand(rus, model.ecpri_rate_per_ru),
                server.total_bbp_capacity,
            )
        })
        .sum();
    units[bbp].servers = servers;

    let segments = Segment::ALL.map(|seg| {
        let params = model.haul(seg);
        let carries_ecpri = carries_ecpri(seg, bbp);
        let rho = if carries_ecpri {
            params.rho * model.coverage.factor(units[seg.source()].count, model.users)
        } else {
            params.rho
        };
        SegmentPlan {
            carries_ecpri,
            params: HaulParams { rho, ..*params },
        }
    });

    Ok(EvaluationPlan {
        scenario,
        n_ru,
        traffic,
        units,
        segments,
        bbp_throughput: f64::from(servers) * server.total_bbp_capacity,
    })
}

pub fn evaluate(model: &Model, plan: &EvaluationPlan) -> Result<EnergyBreakdown> {
    let traffic = &plan.traffic;
    let bbp = plan.scenario.bbp_location();
    let radio_power = model.catalog.require(Role::Radio)?.rated_power;
    let radio = radio_energy(model.e_w, plan.n_ru, radio_power, traffic)?;

    let mut processing = PerUnit::<f64>::default();
    let unit = model.units[bbp].with_rho(plan.units[bbp].rho);
    processing[bbp] = processing_energy(&unit, &traffic.with_c_n(plan.bbp_throughput))?;

    let mut equipment = PerUnit::<f64>::default();
    for u in NodalUnit::ALL {
        let up = &plan.units[u];
        let gamma = gamma_equipment(up.pre_bbp, up.rho, traffic);
        equipment[u] = equipment_energy(&model.units[u], gamma)?;
    }

    let mut haul = [0.0; 3];
    for (out, (seg, sp)) in haul.iter_mut().zip(Segment::ALL.into_iter().zip(&plan.segments)) {
        let gamma = gamma_haul(seg, bbp, sp.params.rho, traffic);
        *out = haul_energy(&sp.params, gamma, &model.catalog)?;
    }

    Ok(total_energy(&EnergyParts {
        radio,
        processing,
        equipment,
        e_fh: haul[0],
        e_mh: haul[1],
        e_bh: haul[2],
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n_ru: u32,
    pub n_du: u32,
    pub n_cu: u32,
    pub n_dc: u32,
    pub users: u32,
    /// One breakdown per requested scenario, in scenario order.
    pub breakdowns: Vec<(DeploymentScenario, EnergyBreakdown)>,
}

impl SweepPoint {
    pub fn get(&self, scenario: DeploymentScenario) -> Option<&EnergyBreakdown> {
        self.breakdowns.iter().find(|(s, _)| *s == scenario).map(|(_, b)| b)
    }
}

fn evaluate_point(model: &Model, scenarios: &[DeploymentScenario], n_ru: u32) -> Result<SweepPoint> {
    let breakdowns = scenarios
        .iter()
        .map(|&s| {
            let plan = build(model, s, n_ru)?;
            Ok((s, evaluate(model, &plan)?))
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e: Error| e.context(format_args!("n_ru = {n_ru}")))?;
    Ok(SweepPoint {
        n_ru,
        n_du: model.provisioning[NodalUnit::Du].site_count(n_ru),
        n_cu: model.provisioning[NodalUnit::Cu].site_count(n_ru),
        n_dc: model.provisioning[NodalUnit::Dc].site_count(n_ru),
        users: model.users,
        breakdowns,
    })
}

/// Evaluates every scenario at every RU count in `n_ru_range`. Points are
/// independent and evaluated in parallel; the output order is
/// `(n_ru, scenario)` regardless.
pub fn sweep(
    model: &Model,
    scenarios: &[DeploymentScenario],
    n_ru_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<SweepPoint>> {
    if n_ru_range.is_empty() {
        return Err(Error::schema("sweep", "empty RU range"));
    }
    if *n_ru_range.start() == 0 {
        return Err(Error::domain("sweep must start at one RU or more"));
    }
    let mut scenarios = scenarios.to_vec();
    scenarios.sort();
    scenarios.dedup();
    if scenarios.is_empty() {
        return Err(Error::schema("scenarios", "no scenario selected"));
    }
    model.validate()?;
    n_ru_range
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|n| evaluate_point(model, &scenarios, n))
        .collect()
}
