#![allow(dead_code)]

use proptest::prelude::*;
use ranwatt::catalog::{Catalog, EquipmentSpec, Role, ServerSpec};
use ranwatt::scenario::{CoverageHook, DeploymentScenario, Model, SiteProvisioning, SiteRule};
use ranwatt::xhaul::{EnergyBreakdown, HaulParams, NodalUnit, PerUnit, Segment, UnitParams};

/// Proptest settings for integration tests: no regression files, since
/// there is no source tree next to the test binary to store them in.
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub const GBPS: f64 = 1e9;

fn factor() -> impl Strategy<Value = f64> {
    1.0..4.0f64
}

fn catalog() -> impl Strategy<Value = Catalog> {
    let device = (1.0..5000.0f64, 1.0..30000.0f64);
    let server = (1u32..64, 0.5..20.0f64, 0.25..10.0f64);
    (proptest::collection::vec(device, 5), server.clone(), server).prop_map(|(d, e, c)| {
        let roles = [
            Role::Router,
            Role::CoreSwitch,
            Role::AccessSwitch,
            Role::FiberLink,
            Role::Radio,
        ];
        let devices = d
            .into_iter()
            .zip(roles)
            .enumerate()
            .map(|(i, ((p, cap), role))| EquipmentSpec::new(format!("dev{i}"), role, p, cap * GBPS))
            .collect();
        let srv = |(cores, ppc, cap): (u32, f64, f64)| ServerSpec {
            cores,
            power_per_core: ppc,
            total_bbp_capacity: cap * GBPS,
        };
        Catalog::new(devices, srv(e), srv(c)).expect("generated catalog is valid")
    })
}

fn provisioning() -> impl Strategy<Value = SiteProvisioning> {
    let rule = prop_oneof![
        (1u32..9).prop_map(SiteRule::FanOut),
        (1u32..7).prop_map(SiteRule::Fixed)
    ];
    (rule, 0.5..8.0f64, 0.0..=1.0f64).prop_map(|(rule, oversubscription, multiplexing_exponent)| SiteProvisioning {
        rule,
        oversubscription,
        multiplexing_exponent,
    })
}

fn haul(segment: Segment) -> impl Strategy<Value = HaulParams> {
    let routers = if segment == Segment::Backhaul { 0u32..5 } else { 0u32..1 };
    (factor(), factor(), factor(), 0u32..5, 0u32..30, routers).prop_map(move |(alpha, sigma, rho, s, l, r)| {
        HaulParams {
            segment,
            alpha,
            sigma,
            rho,
            hops_switch: s,
            hops_link: l,
            hops_router: r,
        }
    })
}

/// Random valid model: every factor >= 1, all powers and capacities positive.
pub fn model() -> impl Strategy<Value = Model> {
    let traffic = (1u32..1000, 0.1..100.0f64, 1.0..25.0f64, 0.0..100.0f64);
    let units = proptest::collection::vec((factor(), factor(), factor()), 4);
    let prov = proptest::collection::vec(provisioning(), 3);
    let hauls = (
        haul(Segment::Fronthaul),
        haul(Segment::Midhaul),
        haul(Segment::Backhaul),
    );
    (catalog(), traffic, units, prov, hauls, any::<bool>()).prop_map(
        |(catalog, (users, gb, ecpri, e_w), units, prov, (fh, mh, bh), density)| {
            let nic = catalog.nic().unwrap().clone();
            let units = PerUnit::from_fn(|u| {
                let (alpha, sigma, rho) = units[u.index()];
                UnitParams {
                    alpha,
                    sigma,
                    rho,
                    nic: nic.clone(),
                    server: Some(if u == NodalUnit::Dc {
                        catalog.dc_server
                    } else {
                        catalog.edge_server
                    }),
                }
            });
            let provisioning = PerUnit::from_fn(|u| match u {
                NodalUnit::Ru => SiteProvisioning {
                    rule: SiteRule::FanOut(1),
                    oversubscription: 1.0,
                    multiplexing_exponent: 1.0,
                },
                other => prov[other.index() - 1],
            });
            Model {
                catalog,
                users,
                monthly_gb_per_user: gb,
                ecpri_rate_per_ru: ecpri * GBPS,
                e_w: e_w * 1e-9,
                units,
                provisioning,
                hauls: [fh, mh, bh],
                coverage: if density {
                    CoverageHook::DeploymentDensity
                } else {
                    CoverageHook::Identity
                },
            }
        },
    )
}

pub fn scenario() -> impl Strategy<Value = DeploymentScenario> {
    prop_oneof![
        Just(DeploymentScenario::S1),
        Just(DeploymentScenario::S2),
        Just(DeploymentScenario::S3),
        Just(DeploymentScenario::S4),
    ]
}

/// Checks the exact sum structure and sign of every component. Returns a
/// description of the first violation.
pub fn check_sums(b: &EnergyBreakdown) -> Result<(), String> {
    let by = |v: &PerUnit<f64>| ((v[NodalUnit::Ru] + v[NodalUnit::Du]) + v[NodalUnit::Cu]) + v[NodalUnit::Dc];
    let e_eq = by(&b.e_eq_by_unit);
    let checks = [
        ("e_ra = e_w + e_e", b.e_ra, b.e_w + b.e_e),
        ("e_pr = sum e_b", b.e_pr, by(&b.e_b_by_unit)),
        ("e_eq = sum by unit", b.e_eq(), e_eq),
        ("e_tr = fh + mh + bh + e_eq", b.e_tr, b.e_fh + b.e_mh + b.e_bh + e_eq),
        ("e_total = e_ra + e_pr + e_tr", b.e_total, b.e_ra + b.e_pr + b.e_tr),
    ];
    for (name, got, want) in checks {
        if got != want {
            return Err(format!("{name}: {got:e} != {want:e}"));
        }
    }
    let mut all = vec![b.e_w, b.e_e, b.e_ra, b.e_pr, b.e_fh, b.e_mh, b.e_bh, b.e_tr, b.e_total];
    all.extend(b.e_b_by_unit.0);
    all.extend(b.e_eq_by_unit.0);
    if let Some(v) = all.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(format!("component {v} is negative or not finite"));
    }
    Ok(())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
