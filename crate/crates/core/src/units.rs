//! Conversions between the angular units used internally and the
//! GHz / MHz figures used in configuration files and outputs.

use std::f64::consts::TAU;

/// 1 GHz expressed in rad/s.
pub const GHZ: f64 = TAU * 1e9;
/// 1 MHz expressed in rad/s.
pub const MHZ: f64 = TAU * 1e6;

/// Nominal phase velocity of the coplanar waveguide (m/s).
pub const CPW_VELOCITY: f64 = 1.2e8;

pub fn ghz_to_rad(ghz: f64) -> f64 {
    ghz * GHZ
}

pub fn mhz_to_rad(mhz: f64) -> f64 {
    mhz * MHZ
}

pub fn rad_to_ghz(omega: f64) -> f64 {
    omega / GHZ
}

pub fn rad_to_mhz(omega: f64) -> f64 {
    omega / MHZ
}
