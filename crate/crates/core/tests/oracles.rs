//! Independent hand-coded evaluations compared against the library.

mod common;

use std::path::PathBuf;

use common::rel_close;
use ranwatt::access::{access_energy_per_bit, default_profiles};
use ranwatt::catalog::default_catalog;
use ranwatt::config::default_model;
use ranwatt::format::{g6, sweep_csv_string};
use ranwatt::scenario::{build, evaluate, sweep, DeploymentScenario};
use ranwatt::trend::{fit, TrendSample};
use ranwatt::xhaul::NodalUnit;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compares against a golden file; `UPDATE_GOLDEN=1` rewrites it instead.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(
        actual, expected,
        "golden mismatch for {name}; rerun with UPDATE_GOLDEN=1 after review"
    );
}

/// Scenario 2 at four RUs, written out term by term from the default
/// configuration values.
#[test]
fn scenario2_four_rus_monolithic() {
    let c_u = 100.0 * 10.0 * 8e9 / (30.0 * 24.0 * 3600.0);
    let c_n = 4.0 * 11e9;
    let access_switch = 86.7 / 480e9;
    let core_switch = 3000.0 / 25600e9;
    let link = 4265.0 / 9600e9;
    let router = 172.0 / 3200e9;

    let e_w = 25e-9;
    let e_e = 4.0 * 110.0 / c_u;
    // one DU site sized for 4 RUs at 4:1 oversubscription -> 11 Gbps -> 11 edge servers
    let e_pr = 2.0 * 1.5 * 1.0 * (11e9 / c_u) * (4.0 * 6.0 / 1e9);
    let rho_ru = 4.0 / 100.0;
    let e_eq_ru = 2.0 * 2.0 * (rho_ru * c_n / c_u) * access_switch;
    let e_eq_du = 2.0 * 1.5 * access_switch;
    let e_eq_cu = 2.0 * 1.5 * access_switch;
    let e_eq_dc = 1.2 * 1.1 * access_switch;
    let e_fh = 2.0 * 1.5 * (rho_ru * c_n / c_u) * (access_switch + link);
    let e_mh = 2.0 * 1.5 * (2.0 * access_switch + 2.0 * link);
    let e_bh = 2.0 * 1.5 * (3.0 * core_switch + 20.0 * link + 3.0 * router);
    let e_tr = e_fh + e_mh + e_bh + e_eq_ru + e_eq_du + e_eq_cu + e_eq_dc;
    let e_total = e_w + e_e + e_pr + e_tr;

    let m = default_model();
    let b = evaluate(&m, &build(&m, DeploymentScenario::S2, 4).unwrap()).unwrap();
    let pairs = [
        ("e_e", b.e_e, e_e),
        ("e_pr", b.e_pr, e_pr),
        ("eq ru", b.e_eq_by_unit[NodalUnit::Ru], e_eq_ru),
        ("eq du", b.e_eq_by_unit[NodalUnit::Du], e_eq_du),
        ("eq dc", b.e_eq_by_unit[NodalUnit::Dc], e_eq_dc),
        ("e_fh", b.e_fh, e_fh),
        ("e_mh", b.e_mh, e_mh),
        ("e_bh", b.e_bh, e_bh),
        ("e_tr", b.e_tr, e_tr),
        ("e_total", b.e_total, e_total),
    ];
    for (name, got, want) in pairs {
        assert!(rel_close(got, want, 1e-12), "{name}: {got:e} vs {want:e}");
    }
}

/// Textbook simple linear regression, kept deliberately separate from the
/// library implementation: sums of products rather than centred sums.
fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mean = sy / n;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (slope, intercept, 1.0 - ss_res / ss_tot)
}

pub fn noisy_samples() -> Vec<TrendSample> {
    // fixed multiplicative noise pattern, no RNG needed
    let noise = [
        0.03, -0.02, 0.05, -0.04, 0.01, 0.0, -0.03, 0.04, -0.01, 0.02, -0.05, 0.03,
    ];
    noise
        .iter()
        .enumerate()
        .map(|(i, eps)| TrendSample {
            year: 2008.0 + i as f64,
            value: 50.0 * 0.8f64.powi(i as i32) * (1.0 + eps),
        })
        .collect()
}

#[test]
fn trend_fit_matches_ols_oracle() {
    let s = noisy_samples();
    let xs: Vec<f64> = s.iter().map(|p| p.year - 2008.0).collect();
    let ys: Vec<f64> = s.iter().map(|p| p.value.ln()).collect();
    let (slope, intercept, r2) = ols(&xs, &ys);
    let f = fit(&s, 2008.0).unwrap();
    assert!(rel_close(f.params.mu, 1.0 - slope.exp(), 1e-9));
    assert!(rel_close(f.params.e0, intercept.exp(), 1e-9));
    assert!(rel_close(f.r_squared, r2, 1e-9));
    assert!(f.r_squared < 1.0);
}

#[test]
fn oran_access_value_matches_golden() {
    // access switch shared by 48 users, radio shared by 32, 2 W CPE
    let hand = 2.0 / 100e6 * (86.7 / 48.0 + 110.0 / 32.0 + 2.0 / 2.0);
    let profiles = default_profiles(&default_catalog()).unwrap();
    let oran = profiles.iter().find(|p| p.name == "O-RAN Split 8").unwrap();
    let got = access_energy_per_bit(oran, 100e6).unwrap();
    assert!(rel_close(got, hand, 1e-12));
    check_golden("oran_100mbps.txt", &format!("{}\n", g6(got * 1e9)));
}

#[test]
fn default_sweep_matches_golden() {
    let m = default_model();
    let pts = sweep(&m, &DeploymentScenario::ALL, 1..=100).unwrap();
    check_golden("sweep_default.csv", &sweep_csv_string(&pts).unwrap());
}
