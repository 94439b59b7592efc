//! Shared fixtures for the benchmarks.

use wva_core::{DesignConstraints, ModelSpec, OmegaRange, SpectrumModel};

pub fn probe() -> SpectrumModel {
    SpectrumModel::new(1.0, 1550.0, 10.0).expect("valid probe")
}

pub fn sweep_model(steps: usize) -> ModelSpec {
    ModelSpec {
        name: "bench".into(),
        area: 16.0,
        alpha: 0.1,
        beta: -0.3,
        probe: probe(),
        omega: OmegaRange::new(-0.1, 0.1, steps).expect("valid range"),
    }
}

pub fn design_constraints() -> DesignConstraints {
    DesignConstraints::new(1.0, 0.02, 2e-3, 0.01, 0.1, probe()).expect("valid constraints")
}
