//! Weak-measurement core: polarization selections, the Sagnac phase, and the
//! complex weak value of the observable `|H⟩⟨H| − |V⟩⟨V|`.
//!
//! The post-selected probe amplitude is `m e^{−igp} + n e^{igp}` with
//!
//! ```text
//! m = −sin(α+β) cos(α) e^{iφ/2}
//! n =  cos(α+β) sin(α) e^{−iφ/2}
//! ```
//!
//! so that `⟨φ_f|φ_i⟩ = m + n` and `A_w = (m − n)/(m + n)`.
//!
//! [`weak_value_direct`] evaluates `⟨φ_f|Â|φ_i⟩ / ⟨φ_f|φ_i⟩` from explicit
//! two-component state vectors and is kept as an independent cross-check of
//! the closed form. The basis is ordered so that the `+1` eigenvector of the
//! observable carries amplitude `m`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::{fringe_shift, InterferometerConfig};
use crate::error::{ensure_finite, Error, Result};
use crate::spectrum::SpectrumModel;

/// Smallest `|m + n|` for which a weak value is reported.
pub const OVERLAP_FLOOR: f64 = 1e-12;

/// A polarization state in the `(|H⟩, |V⟩)` basis.
pub type Polarization = [Complex64; 2];

/// Pre-selection angle, post-selection angle and Sagnac phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
}

impl SelectionConfig {
    pub fn new(alpha: f64, beta: f64, phi: f64) -> Result<Self> {
        let sel = Self { alpha, beta, phi };
        sel.validate()?;
        Ok(sel)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("pre-selection angle", self.alpha)?;
        ensure_finite("post-selection angle", self.beta)?;
        ensure_finite("Sagnac phase", self.phi)?;
        Ok(())
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueResult {
    pub m: Complex64,
    pub n: Complex64,
    /// Post-selection amplitude `⟨φ_f|φ_i⟩ = m + n`.
    pub overlap: Complex64,
    pub a_w: Complex64,
}

impl WeakValueResult {
    /// Fraction of light surviving the post-selecting polarizer, `|m + n|²`.
    pub fn postselect_probability(&self) -> f64 {
        self.overlap.norm_sqr()
    }
}

/// Sagnac phase φ = 2π Δz, rad.
pub fn sagnac_phase(cfg: &InterferometerConfig, omega: f64) -> Result<f64> {
    Ok(TAU * fringe_shift(cfg, omega)?)
}

pub fn amplitudes_mn(sel: &SelectionConfig) -> Result<(Complex64, Complex64)> {
    sel.validate()?;
    let SelectionConfig { alpha, beta, phi } = *sel;
    let half = Complex64::from_polar(1.0, 0.5 * phi);
    let m = -(alpha + beta).sin() * alpha.cos() * half;
    let n = (alpha + beta).cos() * alpha.sin() * half.conj();
    Ok((m, n))
}

/// Closed-form weak value `(m − n)/(m + n)`.
pub fn weak_value(sel: &SelectionConfig) -> Result<WeakValueResult> {
    let (m, n) = amplitudes_mn(sel)?;
    let overlap = m + n;
    check_overlap(overlap)?;
    Ok(WeakValueResult {
        m,
        n,
        overlap,
        a_w: (m - n) / overlap,
    })
}

pub fn preselection_state(alpha: f64) -> Polarization {
    [Complex64::new(alpha.cos(), 0.0), Complex64::new(alpha.sin(), 0.0)]
}

pub fn postselection_state(alpha: f64, beta: f64, phi: f64) -> Polarization {
    [
        -(alpha + beta).sin() * Complex64::from_polar(1.0, -0.5 * phi),
        (alpha + beta).cos() * Complex64::from_polar(1.0, 0.5 * phi),
    ]
}

/// Eigenvalues of the measured observable on `|H⟩` and `|V⟩`.
pub const OBSERVABLE_EIGENVALUES: [f64; 2] = [1.0, -1.0];

/// `⟨bra|ket⟩` with the bra conjugated.
pub fn inner(bra: &Polarization, ket: &Polarization) -> Complex64 {
    bra.iter().zip(ket).map(|(b, k)| b.conj() * k).sum()
}

/// Weak value from the defining ratio `⟨φ_f|Â|φ_i⟩ / ⟨φ_f|φ_i⟩`.
pub fn weak_value_direct(sel: &SelectionConfig) -> Result<Complex64> {
    sel.validate()?;
    let pre = preselection_state(sel.alpha);
    let post = postselection_state(sel.alpha, sel.beta, sel.phi);
    let observed = [
        pre[0] * OBSERVABLE_EIGENVALUES[0],
        pre[1] * OBSERVABLE_EIGENVALUES[1],
    ];
    let overlap = inner(&post, &pre);
    check_overlap(overlap)?;
    Ok(inner(&post, &observed) / overlap)
}

fn check_overlap(overlap: Complex64) -> Result<()> {
    let norm = overlap.norm();
    if norm > OVERLAP_FLOOR {
        Ok(())
    } else {
        Err(Error::NearOrthogonal {
            overlap: norm,
            floor: OVERLAP_FLOOR,
        })
    }
}

/// `d Im(A_w) / dφ` at φ = 0: `−½ sin(2(α+β)) sin(2α) / sin²β`.
pub fn im_weak_value_slope(alpha: f64, beta: f64) -> f64 {
    -0.5 * (2.0 * (alpha + beta)).sin() * (2.0 * alpha).sin() / beta.sin().powi(2)
}

/// First-order probe momentum shift `2 g W² Im A_w`.
pub fn first_order_momentum_shift(g: f64, width: f64, a_w: Complex64) -> f64 {
    2.0 * g * width * width * a_w.im
}

/// Linear-response centre-wavelength shift `−4π Δλ² Im(A_w) / λ₀`, in the
/// probe's wavelength units.
pub fn analytic_wavelength_shift(probe: &SpectrumModel, a_w: Complex64) -> f64 {
    -4.0 * PI * probe.width * probe.width / probe.lambda0 * a_w.im
}
