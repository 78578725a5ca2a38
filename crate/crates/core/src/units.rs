//! SI conversion factors. Everything inside the crate is watts, bit/s and J/bit.

pub const GBPS: f64 = 1e9;
pub const MBPS: f64 = 1e6;
/// Joules per nanojoule.
pub const NJ: f64 = 1e-9;
/// Seconds in the 30-day accounting month.
pub const SECONDS_PER_MONTH: f64 = 30.0 * 24.0 * 3600.0;
pub const BITS_PER_GB: f64 = 8e9;

pub fn to_nj(joules_per_bit: f64) -> f64 {
    joules_per_bit / NJ
}
