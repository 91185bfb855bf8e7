//! Physical constants (CODATA 2018) and library-wide numerical thresholds.

/// Vacuum permittivity ε0 in F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant ħ in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Half-linewidth of the Rb87 D2 line, 2π·3.03 MHz, in rad/s.
pub const RB87_D2_GAMMA: f64 = 2.0 * std::f64::consts::PI * 3.03e6;
/// Rb87 D2 vacuum wavelength in m.
pub const RB87_D2_WAVELENGTH: f64 = 780.24e-9;

/// Denominators of the susceptibility formulas below this magnitude
/// (γ-scaled) are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-12;
