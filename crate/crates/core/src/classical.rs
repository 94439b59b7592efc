//! Classical Sagnac interferometer: fringe shift and intensity readout.
//!
//! This is the reference the weak-value scheme is compared against. The
//! fringe shift of a loop enclosing area `S` rotating at `Ω` is
//!
//! ```text
//! Δz = 4 Ω S / (λ₀ c)
//! ```
//!
//! and a conventional detector records `I = A [1 + cos(2π Δz + Δφ_m)]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Nanometres per metre; the single conversion point between external (nm)
/// and internal (m) wavelengths.
pub const NM_PER_M: f64 = 1e9;

/// Loop geometry and source wavelength of a Sagnac interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerConfig {
    /// Enclosed loop area, m².
    pub area: f64,
    /// Vacuum centre wavelength, m.
    pub lambda0: f64,
    /// Constant modulation phase Δφ_m, rad.
    pub mod_phase: f64,
}

impl InterferometerConfig {
    /// Builds a config from an area in m² and a wavelength in metres.
    pub fn new(area: f64, lambda0_m: f64) -> Result<Self> {
        let cfg = Self {
            area,
            lambda0: lambda0_m,
            mod_phase: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a config from an area in m² and a wavelength in nanometres.
    pub fn from_nm(area: f64, lambda0_nm: f64) -> Result<Self> {
        Self::new(area, lambda0_nm / NM_PER_M)
    }

    pub fn with_mod_phase(mut self, mod_phase: f64) -> Result<Self> {
        self.mod_phase = ensure_finite("modulation phase", mod_phase)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("loop area", self.area)?;
        ensure_positive("centre wavelength", self.lambda0)?;
        ensure_finite("modulation phase", self.mod_phase)?;
        Ok(())
    }

    /// Rotation rate that advances the fringe pattern by exactly one fringe.
    pub fn fringe_period_rate(&self) -> f64 {
        self.lambda0 * SPEED_OF_LIGHT / (4.0 * self.area)
    }
}

/// Fringe shift Δz (dimensionless) at angular rate `omega` (rad/s).
pub fn fringe_shift(cfg: &InterferometerConfig, omega: f64) -> Result<f64> {
    cfg.validate()?;
    ensure_finite("rotation rate", omega)?;
    Ok(4.0 * omega * cfg.area / (cfg.lambda0 * SPEED_OF_LIGHT))
}

/// Detected intensity of the classical interferometer for source amplitude `amplitude`.
pub fn classical_intensity(cfg: &InterferometerConfig, amplitude: f64, omega: f64) -> Result<f64> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(Error::Domain(format!(
            "intensity amplitude must be non-negative and finite, got {amplitude}"
        )));
    }
    let dz = fringe_shift(cfg, omega)?;
    Ok(amplitude * (1.0 + (TAU * dz + cfg.mod_phase).cos()))
}
