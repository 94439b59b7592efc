//! Inverse design: choose the post-selection angle and the smallest loop area
//! that make a target rotation rate visible on a given spectrometer.
//!
//! A design `(β, S)` is feasible when, at `Ω = omega_target` and with the
//! exact spectrum,
//!
//! * the detected peak intensity reaches the detection floor `i_min`, and
//! * the fitted centre moves by at least `delta_lambda_res` relative to the
//!   fitted centre at `Ω = 0`.
//!
//! For each β the smallest feasible `S` is located by bisection once eight
//! probe points confirm that feasibility switches on only once across the
//! bracket; otherwise a dense geometric scan is used instead.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::InterferometerConfig;
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::readout::measure;
use crate::spectrum::{SpectrumForm, SpectrumModel};
use crate::weak::{sagnac_phase, SelectionConfig};

/// Relative bisection tolerance on S.
pub const AREA_TOLERANCE: f64 = 1e-4;
pub const PROBE_POINTS: usize = 8;
pub const SCAN_POINTS: usize = 256;
/// Fitted shifts closer than this (nm) are treated as equal by the monotonicity check.
const SHIFT_NOISE_NM: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignConstraints {
    /// Source peak intensity.
    pub i0: f64,
    /// Spectrometer detection floor, same units as `i0`.
    pub i_min: f64,
    /// Smallest resolvable centre-wavelength shift, nm.
    pub delta_lambda_res: f64,
    /// Rotation rate that must be resolved, rad/s.
    pub omega_target: f64,
    /// Fixed pre-selection angle, rad.
    pub alpha: f64,
    pub probe: SpectrumModel,
}

impl DesignConstraints {
    /// The probe's peak intensity is replaced by `i0`.
    pub fn new(
        i0: f64,
        i_min: f64,
        delta_lambda_res: f64,
        omega_target: f64,
        alpha: f64,
        probe: SpectrumModel,
    ) -> Result<Self> {
        let c = Self {
            i0,
            i_min,
            delta_lambda_res,
            omega_target,
            alpha,
            probe: probe.with_i0(i0)?,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("source intensity", self.i0)?;
        if !(self.i_min.is_finite() && self.i_min >= 0.0 && self.i_min < self.i0) {
            return Err(Error::Domain(format!(
                "detection floor must satisfy 0 <= i_min < i0, got {} (i0 = {})",
                self.i_min, self.i0
            )));
        }
        if !(self.delta_lambda_res.is_finite() && self.delta_lambda_res >= 0.0) {
            return Err(Error::Domain(format!(
                "wavelength resolution must be non-negative, got {}",
                self.delta_lambda_res
            )));
        }
        ensure_positive("target rotation rate", self.omega_target)?;
        ensure_finite("pre-selection angle", self.alpha)?;
        self.probe.validate()?;
        if self.probe.i0 != self.i0 {
            return Err(Error::Domain("probe peak intensity must equal i0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub beta: f64,
    pub area: f64,
    pub feasible: bool,
    /// Maximum of the post-selected spectrum at `omega_target`.
    pub peak_intensity: f64,
    /// `peak_intensity − i_min`.
    pub intensity_margin: f64,
    /// `|δλ_fit(omega_target) − δλ_fit(0)|`, nm.
    pub shift_nm: f64,
    /// `shift_nm − delta_lambda_res`, nm.
    pub shift_margin_nm: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub beta: f64,
    pub area_s_min: f64,
    /// Achieved sensitivity, nm per rad/s.
    pub k_achieved: f64,
    pub peak_intensity: f64,
    pub feasible: bool,
    pub shift_nm: f64,
    pub warnings: Vec<String>,
}

/// Feasibility checks sharing one wavelength grid.
pub struct Evaluator<'a> {
    constraints: &'a DesignConstraints,
    grid: Vec<f64>,
}

/// Feasibility checks for one β, with the Ω = 0 reference fit cached.
pub struct BetaEvaluator<'a> {
    parent: &'a Evaluator<'a>,
    beta: f64,
    reference: Result<f64>,
}

impl<'a> Evaluator<'a> {
    pub fn new(constraints: &'a DesignConstraints) -> Result<Self> {
        constraints.validate()?;
        Ok(Self {
            constraints,
            grid: constraints.probe.default_grid(),
        })
    }

    pub fn for_beta(&'a self, beta: f64) -> Result<BetaEvaluator<'a>> {
        ensure_finite("post-selection angle", beta)?;
        let sel = SelectionConfig::new(self.constraints.alpha, beta, 0.0)?;
        let reference = measure(&self.constraints.probe, &sel, &self.grid, SpectrumForm::Exact)
            .map(|r| r.fit.center);
        Ok(BetaEvaluator {
            parent: self,
            beta,
            reference,
        })
    }
}

impl BetaEvaluator<'_> {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn check(&self, area: f64) -> Result<FeasibilityReport> {
        let c = self.parent.constraints;
        let cfg = InterferometerConfig::from_nm(area, c.probe.lambda0)?;
        let phi = sagnac_phase(&cfg, c.omega_target)?;
        let sel = SelectionConfig::new(c.alpha, self.beta, phi)?;

        let infeasible = |reason: String| FeasibilityReport {
            beta: self.beta,
            area,
            feasible: false,
            peak_intensity: 0.0,
            intensity_margin: -c.i_min,
            shift_nm: 0.0,
            shift_margin_nm: -c.delta_lambda_res,
            reason: Some(reason),
        };
        let center0 = match &self.reference {
            Ok(center) => *center,
            Err(e) => return Ok(infeasible(format!("Ω = 0 reference unavailable: {e}"))),
        };
        let readout = match measure(&c.probe, &sel, &self.parent.grid, SpectrumForm::Exact) {
            Ok(r) => r,
            Err(e) => return Ok(infeasible(e.to_string())),
        };

        let (_, peak) = readout.spectrum.peak();
        let shift = (readout.fit.center - center0).abs();
        let intensity_margin = peak - c.i_min;
        let shift_margin = shift - c.delta_lambda_res;
        let reason = match (intensity_margin >= 0.0, shift_margin >= 0.0) {
            (true, true) => None,
            (false, true) => Some("peak intensity below the detection floor".to_string()),
            (true, false) => Some("shift below the wavelength resolution".to_string()),
            (false, false) => Some("peak intensity and shift both below their limits".to_string()),
        };
        Ok(FeasibilityReport {
            beta: self.beta,
            area,
            feasible: reason.is_none(),
            peak_intensity: peak,
            intensity_margin,
            shift_nm: shift,
            shift_margin_nm: shift_margin,
            reason,
        })
    }
}

/// Evaluates one design point.
pub fn feasible(beta: f64, area: f64, constraints: &DesignConstraints) -> Result<FeasibilityReport> {
    let evaluator = Evaluator::new(constraints)?;
    let beta_eval = evaluator.for_beta(beta)?;
    beta_eval.check(area)
}

struct BetaOutcome {
    beta: f64,
    best: Option<FeasibilityReport>,
    warning: Option<String>,
}

/// Smallest feasible loop area over `beta_grid` within `area_bracket`.
pub fn min_area(
    constraints: &DesignConstraints,
    beta_grid: &[f64],
    area_bracket: (f64, f64),
) -> Result<DesignSolution> {
    let (lo, hi) = area_bracket;
    if beta_grid.is_empty() {
        return Err(Error::Domain("post-selection grid is empty".into()));
    }
    for &b in beta_grid {
        ensure_finite("post-selection angle", b)?;
    }
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::Domain(format!(
            "area bracket must satisfy 0 < S_lo < S_hi, got [{lo}, {hi}]"
        )));
    }
    let evaluator = Evaluator::new(constraints)?;

    let outcomes: Vec<BetaOutcome> = beta_grid
        .par_iter()
        .map(|&beta| search_beta(&evaluator, beta, lo, hi))
        .collect::<Result<_>>()?;

    let warnings: Vec<String> = outcomes.iter().filter_map(|o| o.warning.clone()).collect();
    let best = outcomes
        .iter()
        .filter_map(|o| o.best.as_ref())
        .min_by(|a, b| {
            a.area
                .total_cmp(&b.area)
                .then(a.beta.abs().total_cmp(&b.beta.abs()))
                .then(a.beta.total_cmp(&b.beta))
        });

    let solution = match best {
        Some(report) => DesignSolution {
            beta: report.beta,
            area_s_min: report.area,
            k_achieved: report.shift_nm / constraints.omega_target,
            peak_intensity: report.peak_intensity,
            feasible: true,
            shift_nm: report.shift_nm,
            warnings,
        },
        None => {
            let beta = outcomes[0].beta;
            let report = evaluator.for_beta(beta)?.check(hi)?;
            DesignSolution {
                beta,
                area_s_min: hi,
                k_achieved: report.shift_nm / constraints.omega_target,
                peak_intensity: report.peak_intensity,
                feasible: false,
                shift_nm: report.shift_nm,
                warnings,
            }
        }
    };
    Ok(solution)
}

/// `count` geometrically spaced areas from `lo` to `hi` inclusive.
fn geometric_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let ratio = hi / lo;
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => lo * ratio.powf(i as f64 / last),
        })
        .collect()
}

fn search_beta(evaluator: &Evaluator<'_>, beta: f64, lo: f64, hi: f64) -> Result<BetaOutcome> {
    let beta_eval = evaluator.for_beta(beta)?;
    let probes = geometric_points(lo, hi, PROBE_POINTS)
        .into_iter()
        .map(|s| beta_eval.check(s))
        .collect::<Result<Vec<_>>>()?;

    let switches_once = probes.windows(2).all(|w| w[0].feasible <= w[1].feasible);
    let shift_monotone = probes
        .windows(2)
        .all(|w| w[1].shift_nm >= w[0].shift_nm - SHIFT_NOISE_NM);

    let (samples, warning) = if switches_once && shift_monotone {
        (probes, None)
    } else {
        let scan = geometric_points(lo, hi, SCAN_POINTS)
            .into_iter()
            .map(|s| beta_eval.check(s))
            .collect::<Result<Vec<_>>>()?;
        let warning = format!(
            "β = {beta}: feasibility is not monotone in S across [{lo}, {hi}]; used a {SCAN_POINTS}-point scan"
        );
        (scan, Some(warning))
    };

    let best = match samples.iter().position(|r| r.feasible) {
        None => None,
        Some(0) => Some(samples[0].clone()),
        Some(i) => Some(bisect(&beta_eval, samples[i - 1].area, samples[i].clone())?),
    };
    Ok(BetaOutcome {
        beta,
        best,
        warning,
    })
}

/// Narrows `(infeasible_area, feasible)` until the bracket is within
/// [`AREA_TOLERANCE`] of its upper end; returns the feasible end.
fn bisect(
    beta_eval: &BetaEvaluator<'_>,
    mut infeasible_area: f64,
    mut feasible: FeasibilityReport,
) -> Result<FeasibilityReport> {
    while feasible.area - infeasible_area > AREA_TOLERANCE * feasible.area {
        let mid = 0.5 * (infeasible_area + feasible.area);
        let report = beta_eval.check(mid)?;
        if report.feasible {
            feasible = report;
        } else {
            infeasible_area = mid;
        }
    }
    Ok(feasible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constraints(i_min: f64, res: f64) -> DesignConstraints {
        let probe = SpectrumModel::new(1.0, 1550.0, 10.0).unwrap();
        DesignConstraints::new(1.0, i_min, res, 0.01, 0.1, probe).unwrap()
    }

    #[test]
    fn vacuous_constraints_are_always_feasible() {
        let c = constraints(0.0, 0.0);
        for (beta, area) in [(-0.3, 1.0), (-0.5, 16.0), (-0.1, 3.0)] {
            assert!(feasible(beta, area, &c).unwrap().feasible);
        }
        let sol = min_area(&c, &[-0.3, -0.5], (2.0, 40.0)).unwrap();
        assert!(sol.feasible);
        assert_eq!(sol.area_s_min, 2.0);
        assert_eq!(sol.beta, -0.3);
    }

    #[test]
    fn zero_shift_selection_is_infeasible() {
        let c = constraints(0.0, 1e-6);
        let report = feasible(-0.1, 16.0, &c).unwrap();
        assert!(!report.feasible);
        assert_eq!(report.shift_nm, 0.0);
        let sol = min_area(&c, &[-0.1], (1.0, 100.0)).unwrap();
        assert!(!sol.feasible);
    }

    #[test]
    fn tightened_floor_rejects_the_design_point() {
        let c = constraints(0.0, 0.0);
        let base = feasible(-0.3, 16.0, &c).unwrap();
        assert!(base.feasible);
        let tight = constraints((1.01 * base.peak_intensity).min(0.999), 0.0);
        assert!(1.01 * base.peak_intensity < 1.0);
        assert!(!feasible(-0.3, 16.0, &tight).unwrap().feasible);
    }

    #[test]
    fn near_orthogonal_is_infeasible_not_an_error() {
        // β = 0 makes the Ω = 0 reference orthogonal.
        let c = constraints(0.0, 0.0);
        let report = feasible(0.0, 16.0, &c).unwrap();
        assert!(!report.feasible);
        assert!(report.reason.is_some());
    }

    #[test]
    fn input_validation() {
        let c = constraints(0.0, 0.0);
        assert!(min_area(&c, &[], (1.0, 2.0)).is_err());
        assert!(min_area(&c, &[-0.3], (2.0, 1.0)).is_err());
        assert!(min_area(&c, &[-0.3], (0.0, 1.0)).is_err());
        let probe = SpectrumModel::new(1.0, 1550.0, 10.0).unwrap();
        assert!(DesignConstraints::new(1.0, 1.0, 0.0, 0.01, 0.1, probe).is_err());
        assert!(DesignConstraints::new(1.0, 0.1, -1.0, 0.01, 0.1, probe).is_err());
        assert!(DesignConstraints::new(1.0, 0.1, 0.0, 0.0, 0.1, probe).is_err());
    }

    #[test]
    fn geometric_points_hit_the_ends() {
        let p = geometric_points(2.0, 50.0, 8);
        assert_eq!(p.len(), 8);
        assert_eq!(p[0], 2.0);
        assert_eq!(p[7], 50.0);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
    }
}
