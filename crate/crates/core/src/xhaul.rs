//! Per-bit radio, processing, node-equipment and x-haul transmission energy.
//!
//! Every function here is a pure evaluation of one term of the transaction
//! model. Deployment decisions (where baseband processing runs, how many
//! servers are installed, which coverage factor applies) are made by
//! [`crate::scenario`] and passed in.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Serialize, Serializer};

use crate::catalog::{energy_per_bit, Catalog, EquipmentSpec, Role, ServerSpec};
use crate::error::{Error, Result};
use crate::units::{BITS_PER_GB, SECONDS_PER_MONTH};

/// Nodal units along the uplink, in path order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodalUnit {
    #[serde(rename = "RU")]
    Ru,
    #[serde(rename = "DU")]
    Du,
    #[serde(rename = "CU")]
    Cu,
    #[serde(rename = "DC")]
    Dc,
}

impl NodalUnit {
    pub const ALL: [NodalUnit; 4] = [NodalUnit::Ru, NodalUnit::Du, NodalUnit::Cu, NodalUnit::Dc];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodalUnit::Ru => "RU",
            NodalUnit::Du => "DU",
            NodalUnit::Cu => "CU",
            NodalUnit::Dc => "DC",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            NodalUnit::Ru => "ru",
            NodalUnit::Du => "du",
            NodalUnit::Cu => "cu",
            NodalUnit::Dc => "dc",
        }
    }

    /// True when `self` sits upstream of `bbp`, i.e. the signal reaching it
    /// is still unprocessed radio data.
    pub fn is_before(self, bbp: NodalUnit) -> bool {
        self < bbp
    }
}

impl fmt::Display for NodalUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NodalUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NodalUnit::ALL
            .into_iter()
            .find(|u| u.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::schema("unit", format!("unknown nodal unit `{s}`")))
    }
}

/// One value per nodal unit, indexed by [`NodalUnit`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerUnit<T>(pub [T; 4]);

impl<T> PerUnit<T> {
    pub fn from_fn(mut f: impl FnMut(NodalUnit) -> T) -> Self {
        PerUnit(NodalUnit::ALL.map(&mut f))
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodalUnit, &T)> {
        NodalUnit::ALL.into_iter().zip(self.0.iter())
    }
}

impl<T> Index<NodalUnit> for PerUnit<T> {
    type Output = T;
    fn index(&self, u: NodalUnit) -> &T {
        &self.0[u.index()]
    }
}

impl<T> IndexMut<NodalUnit> for PerUnit<T> {
    fn index_mut(&mut self, u: NodalUnit) -> &mut T {
        &mut self.0[u.index()]
    }
}

impl<T: Serialize> Serialize for PerUnit<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(4))?;
        for (u, v) in self.iter() {
            m.serialize_entry(u.as_str(), v)?;
        }
        m.end()
    }
}

/// Deployment factors and equipment of one nodal unit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitParams {
    /// Overprovisioning factor.
    pub alpha: f64,
    /// Overhead factor (cooling, power distribution losses).
    pub sigma: f64,
    /// Coverage factor.
    pub rho: f64,
    /// NIC or line-system chassis.
    pub nic: EquipmentSpec,
    /// BBP server, when the unit can host processing.
    pub server: Option<ServerSpec>,
}

impl UnitParams {
    pub fn with_rho(&self, rho: f64) -> Self {
        Self { rho, ..self.clone() }
    }
}

/// Aggregate traffic seen by the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrafficModel {
    /// User traffic, bit/s.
    pub c_u: f64,
    /// eCPRI traffic through the unit or segment under evaluation, bit/s.
    pub c_n: f64,
}

impl TrafficModel {
    /// Mean aggregate user rate for `users` each consuming
    /// `monthly_gb_per_user` over a 30-day month.
    pub fn user_rate(users: u32, monthly_gb_per_user: f64) -> f64 {
        f64::from(users) * monthly_gb_per_user * BITS_PER_GB / SECONDS_PER_MONTH
    }

    pub fn from_usage(users: u32, monthly_gb_per_user: f64, ecpri_rate_per_ru: f64, n_ru: u32) -> Result<Self> {
        let c_u = Self::user_rate(users, monthly_gb_per_user);
        let c_n = f64::from(n_ru) * ecpri_rate_per_ru;
        if !(c_u > 0.0 && c_u.is_finite()) {
            return Err(Error::domain(format!("user traffic must be positive, got {c_u} bit/s")));
        }
        if n_ru > 0 && c_n < c_u {
            return Err(Error::domain(format!(
                "eCPRI traffic {c_n} bit/s is below the user traffic {c_u} bit/s"
            )));
        }
        Ok(Self { c_u, c_n })
    }

    pub fn with_c_n(self, c_n: f64) -> Self {
        Self { c_n, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Fronthaul,
    Midhaul,
    Backhaul,
}

impl Segment {
    pub const ALL: [Segment; 3] = [Segment::Fronthaul, Segment::Midhaul, Segment::Backhaul];

    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Fronthaul => "fronthaul",
            Segment::Midhaul => "midhaul",
            Segment::Backhaul => "backhaul",
        }
    }

    /// Unit at the radio end of the segment.
    pub fn source(self) -> NodalUnit {
        match self {
            Segment::Fronthaul => NodalUnit::Ru,
            Segment::Midhaul => NodalUnit::Du,
            Segment::Backhaul => NodalUnit::Cu,
        }
    }

    /// Switch class traversed on this segment.
    pub fn switch_role(self) -> Role {
        match self {
            Segment::Backhaul => Role::CoreSwitch,
            _ => Role::AccessSwitch,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaulParams {
    pub segment: Segment,
    pub alpha: f64,
    pub sigma: f64,
    pub rho: f64,
    /// Switch hops beyond the mandatory first switch.
    pub hops_switch: u32,
    /// WDM link hops.
    pub hops_link: u32,
    /// Router hops beyond the first router; backhaul only.
    pub hops_router: u32,
}

impl HaulParams {
    pub fn validate(&self) -> Result<()> {
        if self.segment != Segment::Backhaul && self.hops_router != 0 {
            return Err(Error::Misconfiguration(format!(
                "{}: router hops are only meaningful on the backhaul (got {})",
                self.segment, self.hops_router
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RadioEnergy {
    pub e_w: f64,
    pub e_e: f64,
    pub e_ra: f64,
}

/// Wireless transfer energy plus RU equipment energy `n_ru * p_r / c_u`.
pub fn radio_energy(e_w: f64, n_ru: u32, p_r: f64, traffic: &TrafficModel) -> Result<RadioEnergy> {
    if traffic.c_u.is_nan() || traffic.c_u <= 0.0 {
        return Err(Error::domain(format!(
            "user traffic must be positive, got {}",
            traffic.c_u
        )));
    }
    let e_e = f64::from(n_ru) * p_r / traffic.c_u;
    Ok(RadioEnergy {
        e_w,
        e_e,
        e_ra: e_w + e_e,
    })
}

/// `c_n / c_u`.
pub fn gamma_processing(traffic: &TrafficModel) -> f64 {
    traffic.c_n / traffic.c_u
}

/// Baseband-processing energy per user bit at one unit:
/// `alpha * sigma * rho * (c_n / c_u) * (cores * power_per_core) / capacity`.
pub fn processing_energy(unit: &UnitParams, traffic: &TrafficModel) -> Result<f64> {
    let server = unit
        .server
        .as_ref()
        .ok_or_else(|| Error::Misconfiguration("unit has no BBP server".into()))?;
    Ok(unit.alpha * unit.sigma * unit.rho * gamma_processing(traffic) * server.energy_per_bit())
}

/// `rho * c_n / c_u` before baseband processing, 1 after.
pub fn gamma_equipment(unit_is_pre_bbp: bool, rho: f64, traffic: &TrafficModel) -> f64 {
    if unit_is_pre_bbp {
        rho * gamma_processing(traffic)
    } else {
        1.0
    }
}

/// Node transport equipment: `alpha * sigma * gamma * P_I / C_I`.
pub fn equipment_energy(unit: &UnitParams, gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(unit.alpha * unit.sigma * gamma * energy_per_bit(&unit.nic))
}

/// Switch, link and (backhaul only) router terms of one segment, before the
/// `alpha * sigma * gamma` scaling.
pub fn haul_xi(params: &HaulParams, catalog: &Catalog) -> Result<f64> {
    params.validate()?;
    let switch = energy_per_bit(catalog.require(params.segment.switch_role())?);
    let link = energy_per_bit(catalog.require(Role::FiberLink)?);
    let xi_s = f64::from(params.hops_switch + 1) * switch;
    let xi_l = f64::from(params.hops_link) * link;
    let xi_r = match params.segment {
        Segment::Backhaul => f64::from(params.hops_router + 1) * energy_per_bit(catalog.require(Role::Router)?),
        _ => 0.0,
    };
    Ok(xi_s + xi_l + xi_r)
}

/// Transmission energy of one x-haul segment.
pub fn haul_energy(params: &HaulParams, gamma: f64, catalog: &Catalog) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    Ok(params.alpha * params.sigma * gamma * haul_xi(params, catalog)?)
}

/// True when processing happens beyond the far end of `segment`.
pub fn carries_ecpri(segment: Segment, bbp_location: NodalUnit) -> bool {
    match segment {
        Segment::Fronthaul => bbp_location != NodalUnit::Ru,
        Segment::Midhaul => matches!(bbp_location, NodalUnit::Cu | NodalUnit::Dc),
        Segment::Backhaul => bbp_location == NodalUnit::Dc,
    }
}

/// Traffic scaling on a segment given where baseband processing happens.
/// A segment carries eCPRI (and scales with `rho * c_n / c_u`) exactly when
/// processing happens beyond its far end.
pub fn gamma_haul(segment: Segment, bbp_location: NodalUnit, rho: f64, traffic: &TrafficModel) -> f64 {
    if carries_ecpri(segment, bbp_location) {
        rho * gamma_processing(traffic)
    } else {
        1.0
    }
}

/// Inputs to [`total_energy`], computed from one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyParts {
    pub radio: RadioEnergy,
    pub processing: PerUnit<f64>,
    pub equipment: PerUnit<f64>,
    pub e_fh: f64,
    pub e_mh: f64,
    pub e_bh: f64,
}

/// All per-bit energy components (J/bit) and their totals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct EnergyBreakdown {
    pub e_w: f64,
    pub e_e: f64,
    pub e_ra: f64,
    pub e_b_by_unit: PerUnit<f64>,
    pub e_pr: f64,
    pub e_eq_by_unit: PerUnit<f64>,
    pub e_fh: f64,
    pub e_mh: f64,
    pub e_bh: f64,
    pub e_tr: f64,
    pub e_total: f64,
}

impl EnergyBreakdown {
    /// Sum of node-equipment energy over all units.
    pub fn e_eq(&self) -> f64 {
        self.e_eq_by_unit.0.iter().sum()
    }

    /// Radio plus transport, the quantity plotted next to processing.
    pub fn e_radio_transport(&self) -> f64 {
        self.e_ra + self.e_tr
    }
}

/// Assembles the breakdown. Sums run in a fixed order so totals are
/// reproducible bit for bit.
pub fn total_energy(parts: &EnergyParts) -> EnergyBreakdown {
    let e_pr: f64 = parts.processing.0.iter().sum();
    let e_eq: f64 = parts.equipment.0.iter().sum();
    let e_tr = parts.e_fh + parts.e_mh + parts.e_bh + e_eq;
    let e_ra = parts.radio.e_w + parts.radio.e_e;
    EnergyBreakdown {
        e_w: parts.radio.e_w,
        e_e: parts.radio.e_e,
        e_ra,
        e_b_by_unit: parts.processing,
        e_pr,
        e_eq_by_unit: parts.equipment,
        e_fh: parts.e_fh,
        e_mh: parts.e_mh,
        e_bh: parts.e_bh,
        e_tr,
        e_total: e_ra + e_pr + e_tr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_catalog;
    use crate::units::{GBPS, NJ};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn unit(server: Option<ServerSpec>) -> UnitParams {
        UnitParams {
            alpha: 1.0,
            sigma: 1.0,
            rho: 1.0,
            nic: default_catalog().nic().unwrap().clone(),
            server,
        }
    }

    fn unity_traffic() -> TrafficModel {
        TrafficModel { c_u: 1e6, c_n: 1e6 }
    }

    #[test]
    fn user_rate_convention() {
        // 100 users x 10 GB over 30 days
        let c_u = TrafficModel::user_rate(100, 10.0);
        assert!(rel(c_u, 8e12 / 2_592_000.0) < 1e-15);
        assert!((c_u / 1e6 - 3.0864).abs() < 1e-4);
    }

    #[test]
    fn radio_energy_examples() {
        let c_u = TrafficModel::user_rate(100, 10.0);
        let t = TrafficModel { c_u, c_n: 11.0 * GBPS };
        let r = radio_energy(25.0 * NJ, 1, 110.0, &t).unwrap();
        assert_eq!(r.e_w, 25.0 * NJ);
        assert_eq!(r.e_e, 110.0 / c_u);
        assert_eq!(r.e_ra, r.e_w + r.e_e);
        let zero = radio_energy(25.0 * NJ, 0, 110.0, &t).unwrap();
        assert_eq!(zero.e_e, 0.0);
        assert_eq!(zero.e_ra, 25.0 * NJ);
        let bad = TrafficModel { c_u: 0.0, c_n: 1.0 };
        assert!(matches!(radio_energy(0.0, 1, 1.0, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn gamma_processing_examples() {
        assert_eq!(gamma_processing(&unity_traffic()), 1.0);
        assert_eq!(gamma_processing(&TrafficModel { c_u: 2.0, c_n: 32.0 }), 16.0);
        let t = TrafficModel::from_usage(100, 10.0, 11.0 * GBPS, 4).unwrap();
        assert!(rel(gamma_processing(&t), 44e9 * 2_592_000.0 / 8e12) < 1e-14);
    }

    #[test]
    fn processing_energy_examples() {
        let c = default_catalog();
        let edge = processing_energy(&unit(Some(c.edge_server)), &unity_traffic()).unwrap();
        assert!(rel(edge, 24.0 * NJ) < 1e-12);
        let dc = processing_energy(&unit(Some(c.dc_server)), &unity_traffic()).unwrap();
        assert!(rel(dc, 22.0 * NJ) < 1e-12);
        let doubled = processing_energy(&unit(Some(c.edge_server)).with_rho(2.0), &unity_traffic()).unwrap();
        assert_eq!(doubled, 2.0 * edge);
        assert!(matches!(
            processing_energy(&unit(None), &unity_traffic()),
            Err(Error::Misconfiguration(_))
        ));
    }

    #[test]
    fn gamma_equipment_branches() {
        assert_eq!(gamma_equipment(true, 1.0, &unity_traffic()), 1.0);
        let t = TrafficModel { c_u: 1.0, c_n: 16.0 };
        assert_eq!(gamma_equipment(false, 7.0, &t), 1.0);
        assert_eq!(gamma_equipment(true, 2.0, &t), 32.0);
    }

    #[test]
    fn equipment_energy_examples() {
        let u = unit(None);
        assert!(rel(equipment_energy(&u, 1.0).unwrap(), 0.180625 * NJ) < 1e-12);
        assert_eq!(equipment_energy(&u, 0.0).unwrap(), 0.0);
        let mut k = u.clone();
        k.alpha = 3.0;
        assert_eq!(
            equipment_energy(&k, 1.0).unwrap(),
            3.0 * equipment_energy(&u, 1.0).unwrap()
        );
        assert!(equipment_energy(&u, -1.0).is_err());
    }

    fn haul(segment: Segment, s: u32, l: u32, r: u32) -> HaulParams {
        HaulParams {
            segment,
            alpha: 1.0,
            sigma: 1.0,
            rho: 1.0,
            hops_switch: s,
            hops_link: l,
            hops_router: r,
        }
    }

    #[test]
    fn haul_energy_examples() {
        let c = default_catalog();
        let fh = haul_energy(&haul(Segment::Fronthaul, 0, 0, 0), 1.0, &c).unwrap();
        assert!(rel(fh, 86.7 / 480.0 * NJ) < 1e-12);
        let bh = haul_energy(&haul(Segment::Backhaul, 1, 2, 1), 1.0, &c).unwrap();
        let expected = 2.0 * 3000.0 / 25600.0 + 2.0 * 4265.0 / 9600.0 + 2.0 * 172.0 / 3200.0;
        assert!(rel(bh, expected * NJ) < 1e-12);
        assert!((bh / NJ - 1.2304).abs() < 1e-4);
        assert_eq!(haul_energy(&haul(Segment::Backhaul, 5, 9, 3), 0.0, &c).unwrap(), 0.0);
    }

    #[test]
    fn router_hops_outside_backhaul_rejected() {
        let c = default_catalog();
        assert!(matches!(
            haul_energy(&haul(Segment::Midhaul, 0, 1, 1), 1.0, &c),
            Err(Error::Misconfiguration(_))
        ));
    }

    #[test]
    fn gamma_haul_rules() {
        let t = TrafficModel { c_u: 1.0, c_n: 10.0 };
        assert_eq!(gamma_haul(Segment::Fronthaul, NodalUnit::Ru, 3.0, &t), 1.0);
        assert_eq!(gamma_haul(Segment::Fronthaul, NodalUnit::Du, 1.0, &t), 10.0);
        assert_eq!(gamma_haul(Segment::Midhaul, NodalUnit::Du, 3.0, &t), 1.0);
        assert_eq!(gamma_haul(Segment::Midhaul, NodalUnit::Cu, 1.0, &t), 10.0);
        assert_eq!(gamma_haul(Segment::Backhaul, NodalUnit::Cu, 1.5, &t), 1.0);
        assert_eq!(gamma_haul(Segment::Backhaul, NodalUnit::Dc, 1.5, &t), 15.0);
    }

    #[test]
    fn zero_parts_give_zero_totals() {
        let b = total_energy(&EnergyParts::default());
        assert_eq!(b, EnergyBreakdown::default());
    }

    #[test]
    fn totals_are_exact_sums() {
        let parts = EnergyParts {
            radio: RadioEnergy {
                e_w: 0.1,
                e_e: 0.2,
                e_ra: 0.3,
            },
            processing: PerUnit([0.0, 0.7, 0.0, 0.0]),
            equipment: PerUnit([0.11, 0.13, 0.17, 0.19]),
            e_fh: 0.3,
            e_mh: 0.03,
            e_bh: 0.003,
        };
        let b = total_energy(&parts);
        assert_eq!(b.e_pr, 0.7);
        assert_eq!(b.e_tr, 0.3 + 0.03 + 0.003 + (((0.11 + 0.13) + 0.17) + 0.19));
        assert_eq!(b.e_total, b.e_ra + b.e_pr + b.e_tr);
    }
}
