//! Per-user access-network energy per bit:
//! `E_U = (2 / R_U) * (P_TU / N_TU + P_RN / N_RN + P_CPE / 2)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, Role};
use crate::config::parse_document;
use crate::error::{Error, Result};

/// Power budget of one access technology, split between the terminal unit in
/// the central office, the remote node and the customer premises equipment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessTechProfile {
    pub name: String,
    /// Terminal-unit power, W.
    pub p_tu: f64,
    /// Users sharing a terminal unit.
    pub n_tu: u32,
    /// Remote-node power, W. Zero when the technology has no active remote node.
    pub p_rn: f64,
    pub n_rn: u32,
    /// Customer-premises equipment power, W.
    pub p_cpe: f64,
    /// True when the numbers are placeholders rather than measured equipment.
    pub calibration: bool,
}

impl AccessTechProfile {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (field, v) in [("p_tu_w", self.p_tu), ("p_rn_w", self.p_rn), ("p_cpe_w", self.p_cpe)] {
            if !(v >= 0.0 && v.is_finite()) {
                problems.push(format!("profile `{}`.{field}: must be >= 0, got {v}", self.name));
            }
        }
        if self.n_tu < 1 {
            problems.push(format!("profile `{}`.n_tu: must be >= 1", self.name));
        }
        if self.n_rn < 1 {
            problems.push(format!("profile `{}`.n_rn: must be >= 1", self.name));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Per-user power in watts (the bracketed term).
    fn per_user_power(&self) -> f64 {
        self.p_tu / f64::from(self.n_tu) + self.p_rn / f64::from(self.n_rn) + self.p_cpe / 2.0
    }
}

/// Energy per bit of one user at access rate `r_u` (bit/s).
pub fn access_energy_per_bit(profile: &AccessTechProfile, r_u: f64) -> Result<f64> {
    if !(r_u > 0.0 && r_u.is_finite()) {
        return Err(Error::domain(format!("access rate must be positive, got {r_u}")));
    }
    Ok(2.0 / r_u * profile.per_user_power())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccessRow {
    pub tech: String,
    pub r_u: f64,
    pub energy_per_bit: f64,
}

/// Full cross product, ordered by profile then ascending rate.
pub fn compare_technologies(profiles: &[AccessTechProfile], r_u_grid: &[f64]) -> Result<Vec<AccessRow>> {
    if profiles.is_empty() {
        return Err(Error::schema("profiles", "at least one profile is required"));
    }
    if r_u_grid.is_empty() {
        return Err(Error::schema("rates", "the rate grid is empty"));
    }
    let mut rates = r_u_grid.to_vec();
    rates.sort_by(f64::total_cmp);

    let pairs: Vec<(&AccessTechProfile, f64)> = profiles
        .iter()
        .flat_map(|p| rates.iter().map(move |&r| (p, r)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(p, r)| {
            let e = access_energy_per_bit(p, r)
                .map_err(|e| e.context(format_args!("profile `{}` at {r} bit/s", p.name)))?;
            Ok(AccessRow {
                tech: p.name.clone(),
                r_u: r,
                energy_per_bit: e,
            })
        })
        .collect()
}

/// Builds a rate grid between `lo` and `hi` (inclusive) with `n` points.
pub fn rate_grid(lo: f64, hi: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::schema("rates", format!("invalid range {lo}:{hi}")));
    }
    if n == 0 {
        return Err(Error::schema("rates", "point count must be >= 1"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    let mut grid: Vec<f64> = if log {
        let (a, b) = (lo.ln(), hi.ln());
        (0..n).map(|i| (a + (b - a) * step(i)).exp()).collect()
    } else {
        (0..n).map(|i| lo + (hi - lo) * step(i)).collect()
    };
    // pin the endpoints against exp/ln round-off
    grid[0] = lo;
    grid[n - 1] = hi;
    Ok(grid)
}

// ---- profile documents ----

/// One `[[profiles]]` entry. Powers may be given directly or taken from a
/// catalog role (`tu_role`, `rn_role`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_tu_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tu_role: Option<Role>,
    pub n_tu: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_rn_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rn_role: Option<Role>,
    #[serde(default = "one")]
    pub n_rn: u32,
    pub p_cpe_w: f64,
    #[serde(default)]
    pub calibration: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilesDoc {
    #[serde(default)]
    pub profiles: Vec<ProfileEntry>,
}

fn resolve_power(
    name: &str,
    field: &str,
    watts: Option<f64>,
    role: Option<Role>,
    catalog: &Catalog,
    default: Option<f64>,
) -> Result<f64> {
    match (watts, role) {
        (Some(_), Some(_)) => Err(Error::schema(
            format!("profiles.{name}.{field}"),
            "give either a power or a catalog role, not both",
        )),
        (Some(w), None) => Ok(w),
        (None, Some(r)) => Ok(catalog.require(r)?.rated_power),
        (None, None) => {
            default.ok_or_else(|| Error::schema(format!("profiles.{name}.{field}"), "missing power or catalog role"))
        }
    }
}

impl ProfileEntry {
    pub fn resolve(&self, catalog: &Catalog) -> Result<AccessTechProfile> {
        let p_tu = resolve_power(&self.name, "p_tu_w", self.p_tu_w, self.tu_role, catalog, None)?;
        let p_rn = resolve_power(&self.name, "p_rn_w", self.p_rn_w, self.rn_role, catalog, Some(0.0))?;
        let profile = AccessTechProfile {
            name: self.name.clone(),
            p_tu,
            n_tu: self.n_tu,
            p_rn,
            n_rn: self.n_rn,
            p_cpe: self.p_cpe_w,
            calibration: self.calibration,
        };
        profile.validate()?;
        Ok(profile)
    }
}

pub const DEFAULT_PROFILES: &str = include_str!("../configs/profiles.toml");

/// Parses a profiles document and resolves catalog references.
pub fn load_profiles(source: &str, catalog: &Catalog, lenient: bool) -> Result<Vec<AccessTechProfile>> {
    let (doc, _ignored): (ProfilesDoc, _) = parse_document(source, lenient)?;
    if doc.profiles.is_empty() {
        return Err(Error::schema("profiles", "at least one profile is required"));
    }
    doc.profiles.iter().map(|p| p.resolve(catalog)).collect()
}

pub fn default_profiles(catalog: &Catalog) -> Result<Vec<AccessTechProfile>> {
    load_profiles(DEFAULT_PROFILES, catalog, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::default_catalog;

    fn profile(p_tu: f64, p_rn: f64, p_cpe: f64) -> AccessTechProfile {
        AccessTechProfile {
            name: "t".into(),
            p_tu,
            n_tu: 8,
            p_rn,
            n_rn: 4,
            p_cpe,
            calibration: false,
        }
    }

    #[test]
    fn doubling_rate_halves_energy() {
        let p = profile(100.0, 20.0, 5.0);
        let a = access_energy_per_bit(&p, 50e6).unwrap();
        let b = access_energy_per_bit(&p, 100e6).unwrap();
        assert_eq!(a, 2.0 * b);
    }

    #[test]
    fn zero_power_profile() {
        assert_eq!(access_energy_per_bit(&profile(0.0, 0.0, 0.0), 1e6).unwrap(), 0.0);
    }

    #[test]
    fn non_positive_rate_is_domain_error() {
        let p = profile(1.0, 1.0, 1.0);
        assert!(matches!(access_energy_per_bit(&p, 0.0), Err(Error::Domain(_))));
        assert!(matches!(access_energy_per_bit(&p, -5.0), Err(Error::Domain(_))));
    }

    #[test]
    fn cross_product_shape() {
        let mut q = profile(1.0, 0.0, 1.0);
        q.name = "q".into();
        let rows = compare_technologies(&[profile(1.0, 2.0, 3.0), q], &[3e6, 1e6, 2e6]).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].tech, "t");
        assert_eq!(rows[3].tech, "q");
        assert_eq!([rows[0].r_u, rows[1].r_u, rows[2].r_u], [1e6, 2e6, 3e6]);
        for r in &rows {
            let p = if r.tech == "t" {
                profile(1.0, 2.0, 3.0)
            } else {
                profile(1.0, 0.0, 1.0)
            };
            assert_eq!(r.energy_per_bit, access_energy_per_bit(&p, r.r_u).unwrap());
        }
    }

    #[test]
    fn compare_propagates_row_context() {
        let err = compare_technologies(&[profile(1.0, 1.0, 1.0)], &[1e6, 0.0]).unwrap_err();
        assert!(err.to_string().contains("profile `t`"), "{err}");
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(compare_technologies(&[], &[1e6]).is_err());
        assert!(compare_technologies(&[profile(1.0, 1.0, 1.0)], &[]).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = rate_grid(1e6, 1e9, 25, true).unwrap();
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], 1e6);
        assert_eq!(g[24], 1e9);
        assert!((g[8] / 1e7 - 1.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn default_profiles_resolve() {
        let c = default_catalog();
        let ps = default_profiles(&c).unwrap();
        let names: Vec<_> = ps.iter().map(|p| p.name.as_str()).collect();
        for want in ["PON", "PtP", "FTTN", "WiMAX", "LTE", "O-RAN Split 8"] {
            assert!(names.contains(&want), "missing {want}");
        }
        let oran = ps.iter().find(|p| p.name == "O-RAN Split 8").unwrap();
        assert_eq!(oran.p_rn, 110.0);
        assert_eq!(oran.p_tu, 86.7);
    }

    #[test]
    fn power_and_role_together_rejected() {
        let src = r#"
            [[profiles]]
            name = "x"
            p_tu_w = 1.0
            tu_role = "access_switch"
            n_tu = 1
            p_cpe_w = 1.0
        "#;
        assert!(matches!(
            load_profiles(src, &default_catalog(), false),
            Err(Error::Schema { .. })
        ));
    }
}
