//! Weak-value amplification of rotation signals in a polarization Sagnac
//! interferometer.
//!
//! The crate covers the whole forward model and its inverse:
//!
//! * [`classical`]: fringe shift and intensity of the conventional interferometer;
//! * [`weak`]: selections, Sagnac phase and the complex weak value;
//! * [`spectrum`] and [`fit`]: post-selected spectra and Gaussian centre fitting;
//! * [`sweep`]: Ω sweeps and the sensitivity `k = |dδλ₀/dΩ|`;
//! * [`design`]: smallest loop area and a post-selection angle that meet detector limits;
//! * [`geometry`]: turns and equivalent area of the multipass curved-mirror loop.
//!
//! Wavelengths are nanometres at every public boundary except
//! [`InterferometerConfig`], which stores metres.

pub mod classical;
pub mod design;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod readout;
pub mod spectrum;
pub mod sweep;
pub mod weak;

pub use classical::{classical_intensity, fringe_shift, InterferometerConfig, SPEED_OF_LIGHT};
pub use design::{feasible, min_area, DesignConstraints, DesignSolution, FeasibilityReport};
pub use error::{Error, Result};
pub use fit::{fit_center, FitResult, FitSeed};
pub use geometry::{amplification_ratio, equivalent_area, turns, InjectionAngle, MultipassDesign};
pub use readout::{measure, Readout};
pub use spectrum::{
    centroid, input_spectrum, output_spectrum, probe_intensity, ProbeShape, SampledSpectrum,
    SpectrumForm, SpectrumModel,
};
pub use sweep::{
    run_sweep, run_sweep_with_window, sensitivity, table1_models, ModelSpec, OmegaRange,
    Sensitivity, SweepResult, SweepRow,
};
pub use weak::{
    amplitudes_mn, analytic_wavelength_shift, first_order_momentum_shift, sagnac_phase,
    weak_value, weak_value_direct, SelectionConfig, WeakValueResult,
};

pub use num_complex::Complex64;
