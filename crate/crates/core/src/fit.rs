//! Gaussian centre-wavelength fitting.
//!
//! Fits `peak · exp(−(λ − center)² / width²)` to the samples inside
//! `center_seed ± 2.5 · width_seed` by damped Gauss–Newton with an analytic
//! Jacobian. The damping (Marquardt-scaled) is divided by ten after every
//! accepted step and multiplied by ten after every rejected one.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::spectrum::{centroid, SampledSpectrum};

/// Fit window half-width in units of the seed width.
pub const FIT_WINDOW_HALF_WIDTHS: f64 = 2.5;
pub const MAX_ITERATIONS: usize = 200;
/// Convergence threshold on the largest relative parameter change.
pub const PARAMETER_TOLERANCE: f64 = 1e-12;
/// Minimum number of nonzero samples inside the window.
pub const MIN_FIT_POINTS: usize = 16;

const INITIAL_DAMPING: f64 = 1e-3;
const DAMPING_RANGE: (f64, f64) = (1e-15, 1e15);

/// Starting point for [`fit_center`]. `width` also sets the fit window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSeed {
    pub peak: f64,
    pub center: f64,
    pub width: f64,
}

impl FitSeed {
    /// Seeds from the spectrum's maximum and centroid, with a nominal width.
    pub fn from_spectrum(spectrum: &SampledSpectrum, width: f64) -> Result<Self> {
        ensure_positive("seed width", width)?;
        let center = centroid(spectrum)?;
        let (_, peak) = spectrum.peak();
        Ok(Self {
            peak,
            center,
            width,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub center: f64,
    pub width: f64,
    pub peak: f64,
    /// `‖y − model‖ / ‖y‖` over the fit window.
    pub residual_norm: f64,
    pub iterations: usize,
}

pub fn gaussian(lambda: f64, peak: f64, center: f64, width: f64) -> f64 {
    let x = (lambda - center) / width;
    peak * (-x * x).exp()
}

/// Least-squares Gaussian fit around the seed.
pub fn fit_center(spectrum: &SampledSpectrum, seed: &FitSeed) -> Result<FitResult> {
    for (name, v) in [("seed peak", seed.peak), ("seed width", seed.width)] {
        ensure_positive(name, v)?;
    }
    if !seed.center.is_finite() {
        return Err(Error::Domain(format!("seed center {} is not finite", seed.center)));
    }

    let half = FIT_WINDOW_HALF_WIDTHS * seed.width;
    let (xs, ys): (Vec<f64>, Vec<f64>) = spectrum
        .points()
        .filter(|(l, _)| (l - seed.center).abs() <= half)
        .unzip();
    let nonzero = ys.iter().filter(|v| **v > 0.0).count();
    if nonzero < MIN_FIT_POINTS {
        return Err(Error::Degenerate(format!(
            "fit window holds {nonzero} nonzero samples, need at least {MIN_FIT_POINTS}"
        )));
    }
    let data_norm = ys.iter().map(|y| y * y).sum::<f64>().sqrt();

    let problem = Problem { xs: &xs, ys: &ys };
    let mut params = Vector3::new(seed.peak, seed.center, seed.width);
    let mut cost = problem.cost(&params);
    let mut damping = INITIAL_DAMPING;
    let (mut jtj, mut jtr) = problem.normal_equations(&params);

    for iteration in 1..=MAX_ITERATIONS {
        let mut lhs = jtj;
        for i in 0..3 {
            lhs[(i, i)] += damping * jtj[(i, i)].max(f64::MIN_POSITIVE);
        }
        let Some(step) = lhs.cholesky().map(|c| c.solve(&jtr)) else {
            damping = (damping * 10.0).min(DAMPING_RANGE.1);
            continue;
        };

        let mut trial = params + step;
        trial[2] = trial[2].abs();
        let trial_cost = problem.cost(&trial);
        let change = (0..3)
            .map(|i| step[i].abs() / params[i].abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);

        if trial_cost.is_finite() && trial_cost <= cost {
            params = trial;
            cost = trial_cost;
            damping = (damping / 10.0).max(DAMPING_RANGE.0);
            if change < PARAMETER_TOLERANCE {
                return finish(spectrum, params, cost, data_norm, iteration);
            }
            (jtj, jtr) = problem.normal_equations(&params);
        } else {
            if change < PARAMETER_TOLERANCE {
                return finish(spectrum, params, cost, data_norm, iteration);
            }
            damping = (damping * 10.0).min(DAMPING_RANGE.1);
        }
    }

    Err(Error::FitFailure {
        iterations: MAX_ITERATIONS,
        residual: cost.sqrt() / data_norm,
    })
}

fn finish(
    spectrum: &SampledSpectrum,
    params: Vector3<f64>,
    cost: f64,
    data_norm: f64,
    iterations: usize,
) -> Result<FitResult> {
    let residual_norm = cost.sqrt() / data_norm;
    let grid = spectrum.wavelengths();
    let inside = params[1] >= grid[0] && params[1] <= grid[grid.len() - 1];
    if !inside || params[0] <= 0.0 || params[2] <= 0.0 {
        return Err(Error::FitFailure {
            iterations,
            residual: residual_norm,
        });
    }
    Ok(FitResult {
        peak: params[0],
        center: params[1],
        width: params[2],
        residual_norm,
        iterations,
    })
}

struct Problem<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
}

impl Problem<'_> {
    fn cost(&self, p: &Vector3<f64>) -> f64 {
        self.xs
            .iter()
            .zip(self.ys)
            .map(|(&x, &y)| {
                let r = y - gaussian(x, p[0], p[1], p[2]);
                r * r
            })
            .sum()
    }

    /// `JᵀJ` and `Jᵀr` for residuals `r = y − model`.
    fn normal_equations(&self, p: &Vector3<f64>) -> (Matrix3<f64>, Vector3<f64>) {
        let (peak, center, width) = (p[0], p[1], p[2]);
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&x, &y) in self.xs.iter().zip(self.ys) {
            let u = (x - center) / width;
            let e = (-u * u).exp();
            let model = peak * e;
            let row = Vector3::new(e, 2.0 * model * u / width, 2.0 * model * u * u / width);
            jtj += row * row.transpose();
            jtr += row * (y - model);
        }
        (jtj, jtr)
    }
}
