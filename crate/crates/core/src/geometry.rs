//! Multipass curved-mirror loop.
//!
//! A ray injected at `θ_r` degrees advances `2θ_r` around the mirror per
//! bounce and closes after `lcm(2θ_r, 360°)` degrees, i.e.
//! `N_r = lcm(2θ_r, 360)/360` turns and `lcm(2θ_r, 360)/(2θ_r)` chords. The
//! equivalent enclosed area is
//!
//! ```text
//! S_r = lcm(2θ_r, 360)/(2θ_r) · R_s² · sin β_r · cos β_r,   β_r = 90° − θ_r
//! ```

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};

/// Injection angle in whole degrees, strictly between 0 and 90.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct InjectionAngle(u32);

impl InjectionAngle {
    pub fn new(degrees: u32) -> Result<Self> {
        if (1..90).contains(&degrees) {
            Ok(Self(degrees))
        } else {
            Err(Error::Domain(format!(
                "injection angle must lie strictly between 0 and 90 degrees, got {degrees}"
            )))
        }
    }

    /// Accepts only integral values; incommensurable angles never close the loop.
    pub fn from_degrees(degrees: f64) -> Result<Self> {
        if !degrees.is_finite() || degrees.fract() != 0.0 {
            return Err(Error::Domain(format!(
                "injection angle must be a whole number of degrees, got {degrees}"
            )));
        }
        if degrees <= 0.0 || degrees >= 90.0 {
            return Err(Error::Domain(format!(
                "injection angle must lie strictly between 0 and 90 degrees, got {degrees}"
            )));
        }
        Self::new(degrees as u32)
    }

    pub fn degrees(self) -> u32 {
        self.0
    }

    /// `lcm(2θ_r, 360)` in degrees.
    fn closure_degrees(self) -> u32 {
        (2 * self.0).lcm(&360)
    }

    /// Complementary angle `β_r = 90° − θ_r` in radians.
    fn complement_radians(self) -> f64 {
        f64::from(90 - self.0).to_radians()
    }
}

impl TryFrom<u32> for InjectionAngle {
    type Error = Error;

    fn try_from(degrees: u32) -> Result<Self> {
        Self::new(degrees)
    }
}

impl From<InjectionAngle> for u32 {
    fn from(angle: InjectionAngle) -> u32 {
        angle.0
    }
}

/// Number of turns before the multipass path closes.
pub fn turns(angle: InjectionAngle) -> u32 {
    angle.closure_degrees() / 360
}

/// Equivalent optical path area `S_r`, m².
pub fn equivalent_area(angle: InjectionAngle, radius: f64) -> Result<f64> {
    ensure_positive("device radius", radius)?;
    Ok(area_factor(angle) * radius * radius)
}

/// `S_r` relative to the square loop of side `2R_s` (area `4R_s²`).
pub fn amplification_ratio(angle: InjectionAngle) -> f64 {
    area_factor(angle) / 4.0
}

fn area_factor(angle: InjectionAngle) -> f64 {
    let chords = f64::from(angle.closure_degrees()) / f64::from(2 * angle.degrees());
    let beta = angle.complement_radians();
    chords * beta.sin() * beta.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipassDesign {
    pub theta_deg: InjectionAngle,
    /// Device radius R_s, m.
    pub radius_rs: f64,
    pub n_turns: u32,
    /// Equivalent area S_r, m².
    #[serde(rename = "area_equiv_m2")]
    pub area_equiv: f64,
    pub ratio_vs_square: f64,
}

impl MultipassDesign {
    pub fn new(theta_deg: InjectionAngle, radius_rs: f64) -> Result<Self> {
        Ok(Self {
            theta_deg,
            radius_rs,
            n_turns: turns(theta_deg),
            area_equiv: equivalent_area(theta_deg, radius_rs)?,
            ratio_vs_square: amplification_ratio(theta_deg),
        })
    }
}
