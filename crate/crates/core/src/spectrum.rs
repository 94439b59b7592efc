//! Probe spectra in wavelength space.
//!
//! The input probe is a Gaussian `Γ_i(λ) = I₀ exp(−(λ−λ₀)²/W²)` with `W = Δλ`.
//! After the polarization-dependent coupling and post-selection the detected
//! spectrum is `|m e^{−igp} + n e^{igp}|² |Γ_i(p)|²` with `p = 2π/λ` and
//! `g = λ₀`. Two closed forms are offered:
//!
//! * [`SpectrumForm::Exact`]: the unapproximated modulus,
//!   `|m+n|² [(cos pg + Im A_w sin pg)² + (Re A_w)² sin² pg] |Γ|²`;
//! * [`SpectrumForm::Paper`]: `|m+n|² (cos pg + Im A_w sin pg)² |Γ|²`, which
//!   drops the `(Re A_w)²` term.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::weak::WeakValueResult;

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 2048;
/// Default grid half-span in units of Δλ.
pub const DEFAULT_GRID_HALF_WIDTHS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumForm {
    Paper,
    #[default]
    Exact,
}

impl fmt::Display for SpectrumForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::Exact => "exact",
        })
    }
}

impl FromStr for SpectrumForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "exact" => Ok(Self::Exact),
            other => Err(Error::Domain(format!(
                "unknown spectrum form {other:?} (expected paper or exact)"
            ))),
        }
    }
}

/// How the probe's spectral intensity `|⟨p|ψ_i⟩|²` relates to the width Δλ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeShape {
    /// `I₀ exp(−(λ−λ₀)²/(2Δλ²))`: Δλ is the rms width of the intensity.
    /// This is the reading under which the linear-response shift
    /// `−4π Δλ² Im(A_w)/λ₀` describes the detected spectrum.
    #[default]
    Rms,
    /// `I₀ exp(−(λ−λ₀)²/Δλ²)`: the Gaussian envelope used directly as intensity.
    Envelope,
    /// `I₀² exp(−2(λ−λ₀)²/Δλ²)`: the envelope treated as an amplitude and squared.
    Squared,
}

impl fmt::Display for ProbeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rms => "rms",
            Self::Envelope => "envelope",
            Self::Squared => "squared",
        })
    }
}

impl FromStr for ProbeShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rms" => Ok(Self::Rms),
            "envelope" => Ok(Self::Envelope),
            "squared" => Ok(Self::Squared),
            other => Err(Error::Domain(format!(
                "unknown probe shape {other:?} (expected rms, envelope or squared)"
            ))),
        }
    }
}

/// Gaussian input spectrum. Wavelengths are in nanometres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumModel {
    /// Peak intensity I₀.
    pub i0: f64,
    /// Centre wavelength λ₀, nm.
    pub lambda0: f64,
    /// Spectral width Δλ, nm.
    pub width: f64,
    #[serde(default)]
    pub shape: ProbeShape,
}

impl SpectrumModel {
    pub fn new(i0: f64, lambda0: f64, width: f64) -> Result<Self> {
        let model = Self {
            i0,
            lambda0,
            width,
            shape: ProbeShape::default(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_shape(self, shape: ProbeShape) -> Self {
        Self { shape, ..self }
    }

    pub fn with_i0(self, i0: f64) -> Result<Self> {
        let model = Self { i0, ..self };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("peak intensity", self.i0)?;
        ensure_positive("centre wavelength", self.lambda0)?;
        ensure_positive("spectral width", self.width)?;
        if self.width >= self.lambda0 {
            return Err(Error::Domain(format!(
                "spectral width {} nm must be smaller than the centre wavelength {} nm",
                self.width, self.lambda0
            )));
        }
        Ok(())
    }

    /// Coupling constant `g = 2π/p₀ = λ₀`.
    pub fn coupling(&self) -> f64 {
        self.lambda0
    }

    /// The default 2048-point grid over λ₀ ± 4Δλ.
    pub fn default_grid(&self) -> Vec<f64> {
        let half = DEFAULT_GRID_HALF_WIDTHS * self.width;
        uniform_grid(self.lambda0 - half, self.lambda0 + half, DEFAULT_GRID_POINTS)
            .expect("validated probe yields a valid grid")
    }
}

/// `points` evenly spaced wavelengths from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Domain(format!("a grid needs at least 2 points, got {points}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "grid bounds must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let i = i as f64;
            ((last - i) * lo + i * hi) / last
        })
        .collect())
}

/// The input spectrum `I₀ exp(−(λ−λ₀)²/Δλ²)`.
pub fn input_spectrum(probe: &SpectrumModel, lambda: f64) -> f64 {
    let x = (lambda - probe.lambda0) / probe.width;
    probe.i0 * (-x * x).exp()
}

/// Probe intensity `|⟨p|ψ_i⟩|²` at `lambda` under the probe's [`ProbeShape`].
pub fn probe_intensity(probe: &SpectrumModel, lambda: f64) -> f64 {
    match probe.shape {
        ProbeShape::Rms => {
            let x = (lambda - probe.lambda0) / probe.width;
            probe.i0 * (-0.5 * x * x).exp()
        }
        ProbeShape::Envelope => input_spectrum(probe, lambda),
        ProbeShape::Squared => input_spectrum(probe, lambda).powi(2),
    }
}

/// A spectrum sampled on a strictly increasing wavelength grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSpectrum {
    form: SpectrumForm,
    #[serde(rename = "lambda_nm")]
    wavelengths: Vec<f64>,
    #[serde(rename = "intensity")]
    intensities: Vec<f64>,
}

impl SampledSpectrum {
    pub fn new(wavelengths: Vec<f64>, intensities: Vec<f64>, form: SpectrumForm) -> Result<Self> {
        let spectrum = Self {
            form,
            wavelengths,
            intensities,
        };
        spectrum.validate()?;
        Ok(spectrum)
    }

    /// Checks the grid/intensity invariants; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.wavelengths.is_empty() {
            return Err(Error::Domain("spectrum grid is empty".into()));
        }
        if self.wavelengths.len() != self.intensities.len() {
            return Err(Error::Domain(format!(
                "{} wavelengths but {} intensities",
                self.wavelengths.len(),
                self.intensities.len()
            )));
        }
        if self.wavelengths.iter().any(|l| !l.is_finite())
            || self.wavelengths.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Domain("wavelength grid must be finite and strictly increasing".into()));
        }
        if let Some(bad) = self.intensities.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain(format!("intensity {bad} is negative or non-finite")));
        }
        Ok(())
    }

    pub fn form(&self) -> SpectrumForm {
        self.form
    }

    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn len(&self) -> usize {
        self.wavelengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.wavelengths.iter().copied().zip(self.intensities.iter().copied())
    }

    /// Largest sampled intensity and its wavelength.
    pub fn peak(&self) -> (f64, f64) {
        self.points()
            .fold((self.wavelengths[0], f64::NEG_INFINITY), |best, (l, v)| {
                if v > best.1 {
                    (l, v)
                } else {
                    best
                }
            })
    }
}

/// Post-selected output spectrum on `grid` for coupling `g`.
pub fn output_spectrum(
    probe: &SpectrumModel,
    wv: &WeakValueResult,
    g: f64,
    grid: &[f64],
    form: SpectrumForm,
) -> Result<SampledSpectrum> {
    probe.validate()?;
    ensure_positive("coupling", g)?;
    if grid.is_empty() {
        return Err(Error::Domain("wavelength grid is empty".into()));
    }
    if let Some(bad) = grid.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::Domain(format!("grid wavelength {bad} is not positive")));
    }
    let intensities = grid
        .iter()
        .map(|&lambda| {
            let pg = TAU / lambda * g;
            output_intensity(probe, wv, pg, lambda, form)
        })
        .collect();
    SampledSpectrum::new(grid.to_vec(), intensities, form)
}

/// Post-selected intensity at one wavelength given the phase `p·g`.
pub fn output_intensity(
    probe: &SpectrumModel,
    wv: &WeakValueResult,
    pg: f64,
    lambda: f64,
    form: SpectrumForm,
) -> f64 {
    let envelope = probe_intensity(probe, lambda);
    let (sin, cos) = pg.sin_cos();
    match form {
        SpectrumForm::Exact => {
            let shifted = Complex64::new(cos, -sin);
            (wv.m * shifted + wv.n * shifted.conj()).norm_sqr() * envelope
        }
        SpectrumForm::Paper => {
            let modulation = cos + wv.a_w.im * sin;
            wv.overlap.norm_sqr() * modulation * modulation * envelope
        }
    }
}

/// Intensity-weighted mean wavelength by trapezoidal quadrature.
pub fn centroid(spectrum: &SampledSpectrum) -> Result<f64> {
    if spectrum.len() == 1 {
        return if spectrum.intensities[0] > 0.0 {
            Ok(spectrum.wavelengths[0])
        } else {
            Err(Error::Degenerate("spectrum has zero total intensity".into()))
        };
    }
    let (mut weight, mut moment) = (0.0, 0.0);
    for (a, b) in spectrum.points().zip(spectrum.points().skip(1)) {
        let h = 0.5 * (b.0 - a.0);
        weight += h * (a.1 + b.1);
        moment += h * (a.0 * a.1 + b.0 * b.1);
    }
    if weight > 0.0 {
        Ok(moment / weight)
    } else {
        Err(Error::Degenerate("spectrum has zero total intensity".into()))
    }
}
