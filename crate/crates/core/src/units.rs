//! Unit conversions and physical constants.

/// m/s per knot.
pub const KNOT: f64 = 0.514444;

/// Standard gravity, m/s^2.
pub const GRAVITY: f64 = 9.80665;

/// Sea water, kg/m^3.
pub const SEA_WATER_DENSITY: f64 = 1025.0;

pub fn knots_to_ms(knots: f64) -> f64 {
    knots * KNOT
}

pub fn ms_to_knots(speed: f64) -> f64 {
    speed / KNOT
}
