//! Rotation-rate sweeps and sensitivity.
//!
//! Every row of a sweep runs the full readout at one Ω and records the
//! linear-response shift next to the fitted one. Fitted shifts are measured
//! against the fitted centre at Ω = 0, which removes any constant bias the
//! `p·g` modulation puts on the fit. Rows are independent and evaluated in
//! parallel; the result is assembled in Ω order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::InterferometerConfig;
use crate::error::{ensure_finite, Error, Result};
use crate::readout::measure;
use crate::spectrum::{SpectrumForm, SpectrumModel};
use crate::weak::{analytic_wavelength_shift, sagnac_phase, weak_value, SelectionConfig};

/// Fraction of the sweep span covered by the default sensitivity window.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.2;

/// Below this `|sin(α+β)|` the amplitude `m` vanishes identically and the
/// selection cannot shift the spectrum.
const ZERO_SHIFT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl OmegaRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let range = Self { min, max, steps };
        range.validate()?;
        Ok(range)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("omega min", self.min)?;
        ensure_finite("omega max", self.max)?;
        if self.min >= self.max {
            return Err(Error::Domain(format!(
                "omega range needs min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.steps < 3 {
            return Err(Error::Domain(format!("a sweep needs at least 3 steps, got {}", self.steps)));
        }
        Ok(())
    }

    /// Evenly spaced rates; a range symmetric about zero yields exactly
    /// antisymmetric values.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                ((last - i) * self.min + i * self.max) / last
            })
            .collect()
    }

    /// The central [`DEFAULT_WINDOW_FRACTION`] of the range.
    pub fn central_window(&self) -> (f64, f64) {
        let mid = 0.5 * (self.min + self.max);
        let half = 0.5 * DEFAULT_WINDOW_FRACTION * (self.max - self.min);
        (mid - half, mid + half)
    }
}

/// One parameter set of a sweep study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    /// Loop area, m².
    pub area: f64,
    pub alpha: f64,
    pub beta: f64,
    pub probe: SpectrumModel,
    pub omega: OmegaRange,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        InterferometerConfig::from_nm(self.area, self.probe.lambda0)?;
        SelectionConfig::new(self.alpha, self.beta, 0.0)?;
        self.probe.validate()?;
        self.omega.validate()
    }

    pub fn interferometer(&self) -> Result<InterferometerConfig> {
        InterferometerConfig::from_nm(self.area, self.probe.lambda0)
    }

    /// True when `α + β ≡ 0 (mod π)`: then `m = 0`, `A_w = −1` for every Ω and
    /// no shift can be produced.
    pub fn is_zero_shift_selection(&self) -> bool {
        (self.alpha + self.beta).sin().abs() < ZERO_SHIFT_TOLERANCE
    }
}

/// The four reference models (S, α, β) for a probe given by the caller.
pub fn table1_models(lambda0: f64, dlambda: f64) -> Result<Vec<ModelSpec>> {
    let probe = SpectrumModel::new(1.0, lambda0, dlambda)?;
    let omega = OmegaRange::new(-0.1, 0.1, 201)?;
    let rows = [
        ("model1", 16.0, 0.1, -0.5),
        ("model2", 16.0, 0.1, -0.3),
        ("model3", 16.0, 0.1, -0.1),
        ("model4", 3.0, 0.1, -0.1),
    ];
    Ok(rows
        .into_iter()
        .map(|(name, area, alpha, beta)| ModelSpec {
            name: name.to_string(),
            area,
            alpha,
            beta,
            probe,
            omega,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega: f64,
    pub phi: f64,
    pub im_aw: Option<f64>,
    pub dlambda_analytic_nm: Option<f64>,
    pub dlambda_fitted_nm: Option<f64>,
    pub postselect_prob: Option<f64>,
    /// Why any of the optional columns is missing.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flag: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: String,
    pub form: SpectrumForm,
    pub rows: Vec<SweepRow>,
    pub window: (f64, f64),
    pub k_analytic: Option<f64>,
    pub k_fitted: Option<f64>,
    /// Fitted centre at Ω = 0, nm.
    pub reference_center_nm: Option<f64>,
    /// `α + β = 0`: the selection forces `Im A_w ≡ 0`.
    pub zero_shift_degenerate: bool,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn flagged_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.flag.is_some())
    }
}

/// Runs the sweep and computes k over the central window.
pub fn run_sweep(model: &ModelSpec, form: SpectrumForm) -> Result<SweepResult> {
    run_sweep_with_window(model, form, model.omega.central_window())
}

pub fn run_sweep_with_window(
    model: &ModelSpec,
    form: SpectrumForm,
    window: (f64, f64),
) -> Result<SweepResult> {
    model.validate()?;
    let cfg = model.interferometer()?;
    let grid = model.probe.default_grid();
    let base = SelectionConfig::new(model.alpha, model.beta, 0.0)?;
    let mut warnings = Vec::new();

    let reference = measure(&model.probe, &base, &grid, form).map(|r| r.fit.center);
    if let Err(e) = &reference {
        warnings.push(format!("no fitted shifts: the Ω = 0 reference failed ({e})"));
    }

    let rows: Vec<SweepRow> = model
        .omega
        .values()
        .into_par_iter()
        .map(|omega| -> Result<SweepRow> {
            let phi = sagnac_phase(&cfg, omega)?;
            let sel = base.with_phi(phi);
            let mut row = SweepRow {
                omega,
                phi,
                im_aw: None,
                dlambda_analytic_nm: None,
                dlambda_fitted_nm: None,
                postselect_prob: None,
                flag: None,
            };
            let weak = match weak_value(&sel) {
                Ok(w) => w,
                Err(e) => {
                    row.flag = Some(e.to_string());
                    return Ok(row);
                }
            };
            row.im_aw = Some(weak.a_w.im);
            row.dlambda_analytic_nm = Some(analytic_wavelength_shift(&model.probe, weak.a_w));
            row.postselect_prob = Some(weak.postselect_probability());
            match (&reference, measure(&model.probe, &sel, &grid, form)) {
                (Ok(center0), Ok(readout)) => {
                    row.dlambda_fitted_nm = Some(readout.fit.center - center0);
                }
                (Err(_), _) => row.flag = Some("Ω = 0 reference fit unavailable".into()),
                (_, Err(e)) => row.flag = Some(e.to_string()),
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let zero_shift_degenerate = model.is_zero_shift_selection();
    if zero_shift_degenerate {
        warnings.push(format!(
            "{}: α + β = 0 forces m = 0 and A_w = −1 for every Ω, so Im A_w and the analytic shift vanish identically",
            model.name
        ));
    }
    let flagged = rows.iter().filter(|r| r.flag.is_some()).count();
    if flagged > 0 {
        warnings.push(format!("{flagged} of {} rows flagged", rows.len()));
    }

    let mut result = SweepResult {
        model: model.name.clone(),
        form,
        rows,
        window,
        k_analytic: None,
        k_fitted: None,
        reference_center_nm: reference.ok(),
        zero_shift_degenerate,
        warnings,
    };
    match sensitivity(&result, window) {
        Ok(s) => {
            result.k_analytic = Some(s.k_analytic);
            result.k_fitted = Some(s.k_fitted);
        }
        Err(e) => result.warnings.push(format!("sensitivity unavailable: {e}")),
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sensitivity {
    /// nm per rad/s.
    pub k_analytic: f64,
    /// nm per rad/s.
    pub k_fitted: f64,
}

/// `|slope|` of the least-squares line through the rows with
/// `omega_lo ≤ Ω ≤ omega_hi`, for both shift columns.
pub fn sensitivity(sweep: &SweepResult, window: (f64, f64)) -> Result<Sensitivity> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("invalid sensitivity window [{lo}, {hi}]")));
    }
    let in_window = || sweep.rows.iter().filter(|r| r.omega >= lo && r.omega <= hi);
    let slope_of = |column: fn(&SweepRow) -> Option<f64>, name: &str| -> Result<f64> {
        let points: Vec<(f64, f64)> = in_window()
            .filter_map(|r| column(r).map(|v| (r.omega, v)))
            .collect();
        if points.len() < 3 {
            return Err(Error::Domain(format!(
                "{} usable {name} rows inside [{lo}, {hi}], need at least 3",
                points.len()
            )));
        }
        Ok(least_squares_slope(&points).abs())
    };
    Ok(Sensitivity {
        k_analytic: slope_of(|r| r.dlambda_analytic_nm, "analytic")?,
        k_fitted: slope_of(|r| r.dlambda_fitted_nm, "fitted")?,
    })
}

/// Ordinary least-squares slope of `y` on `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        let dx = x - mean_x;
        (sxy + dx * (y - mean_y), sxx + dx * dx)
    });
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
