//! One spectral measurement: selection → weak value → output spectrum → fitted centre.

use crate::error::Result;
use crate::fit::{fit_center, FitResult, FitSeed};
use crate::spectrum::{output_spectrum, SampledSpectrum, SpectrumForm, SpectrumModel};
use crate::weak::{weak_value, SelectionConfig, WeakValueResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Readout {
    pub weak: WeakValueResult,
    pub spectrum: SampledSpectrum,
    pub fit: FitResult,
}

/// Simulates the spectrometer record for `sel` and fits its centre, seeding
/// the fit with the centroid and the nominal probe width.
pub fn measure(
    probe: &SpectrumModel,
    sel: &SelectionConfig,
    grid: &[f64],
    form: SpectrumForm,
) -> Result<Readout> {
    let weak = weak_value(sel)?;
    let spectrum = output_spectrum(probe, &weak, probe.coupling(), grid, form)?;
    let seed = FitSeed::from_spectrum(&spectrum, probe.width)?;
    let fit = fit_center(&spectrum, &seed)?;
    Ok(Readout {
        weak,
        spectrum,
        fit,
    })
}
