//! Command dispatch. [`render`] is pure: it returns the artifact text and the
//! stderr summary without touching the filesystem.

use std::fs;
use std::io::Write;

use serde::{Deserialize, Serialize};
use wva_core::spectrum::uniform_grid;
use wva_core::spectrum::DEFAULT_GRID_HALF_WIDTHS;
use wva_core::{
    classical_intensity, fringe_shift, measure, min_area, run_sweep, run_sweep_with_window,
    sagnac_phase, DesignConstraints, InjectionAngle, InterferometerConfig, ModelSpec,
    MultipassDesign, OmegaRange, ProbeShape, SelectionConfig, SpectrumModel,
};

use crate::args::{Command, Format, Output, RunConfig};
use crate::emit;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub artifact: String,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
    /// Set when a design search found nothing feasible.
    pub infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub theta_deg: u32,
    pub radius_rs: f64,
    pub n_turns: u32,
    pub area_equiv_m2: f64,
    pub ratio_vs_square: f64,
}

impl From<MultipassDesign> for GeometryReport {
    fn from(d: MultipassDesign) -> Self {
        Self {
            theta_deg: d.theta_deg.degrees(),
            radius_rs: d.radius_rs,
            n_turns: d.n_turns,
            area_equiv_m2: d.area_equiv,
            ratio_vs_square: d.ratio_vs_square,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalReport {
    pub omega: f64,
    pub fringe_shift: f64,
    pub sagnac_phase: f64,
    pub intensity: f64,
}

pub fn render(cfg: &RunConfig) -> Result<Rendered, CliError> {
    match cfg.command {
        Command::Simulate => simulate(cfg),
        Command::Sweep => sweep(cfg),
        Command::Design => design(cfg),
        Command::Geometry => geometry(cfg),
        Command::Classical => classical(cfg),
    }
}

/// Renders, writes the artifact and summary, and returns the exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let result = render(cfg).and_then(|r| {
        write_artifact(&cfg.output, &r.artifact)?;
        for line in &r.summary {
            eprintln!("{line}");
        }
        if r.infeasible {
            Err(CliError::Infeasible)
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("wva {}: {e}", cfg.command);
            e.exit_code()
        }
    }
}

fn write_artifact(out: &Output, text: &str) -> Result<(), CliError> {
    match out {
        Output::Stdout => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
        Output::File(path) => fs::write(path, text)?,
    }
    Ok(())
}

fn probe(cfg: &RunConfig, i0: f64) -> Result<SpectrumModel, CliError> {
    let shape: ProbeShape = cfg
        .text("probe-shape")
        .unwrap_or("rms")
        .parse()
        .map_err(|e: wva_core::Error| CliError::Usage(format!("--probe-shape: {e}")))?;
    Ok(SpectrumModel::new(i0, cfg.number("lambda0")?, cfg.number("dlambda")?)?.with_shape(shape))
}

fn simulate(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let probe = probe(cfg, cfg.number("i0")?)?;
    let points = cfg.count("points")?;
    let half = DEFAULT_GRID_HALF_WIDTHS * probe.width;
    let grid = uniform_grid(probe.lambda0 - half, probe.lambda0 + half, points)?;
    let ring = InterferometerConfig::from_nm(cfg.number("area")?, probe.lambda0)?;
    let omega = cfg.number("omega")?;
    let phi = sagnac_phase(&ring, omega)?;
    let sel = SelectionConfig::new(cfg.number("alpha")?, cfg.number("beta")?, phi)?;
    let readout = measure(&probe, &sel, &grid, cfg.form)?;

    let artifact = match cfg.format {
        Format::Csv => emit::spectrum_csv(&readout.spectrum),
        Format::Json => emit::json(&readout.spectrum),
    };
    let a_w = readout.weak.a_w;
    let summary = vec![
        format!("phi = {phi:.6e} rad, A_w = {:.6e} {:+.6e}i", a_w.re, a_w.im),
        format!(
            "fitted centre = {:.9} nm (shift {:+.6e} nm), width {:.6} nm, residual {:.2e}",
            readout.fit.center,
            readout.fit.center - probe.lambda0,
            readout.fit.width,
            readout.fit.residual_norm
        ),
    ];
    Ok(Rendered {
        artifact,
        summary,
        infeasible: false,
    })
}

fn sweep(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let model = ModelSpec {
        name: cfg.text("name").unwrap_or("sweep").to_string(),
        area: cfg.number("area")?,
        alpha: cfg.number("alpha")?,
        beta: cfg.number("beta")?,
        probe: probe(cfg, cfg.number("i0")?)?,
        omega: OmegaRange::new(cfg.number("omega-min")?, cfg.number("omega-max")?, cfg.count("steps")?)?,
    };
    let result = match (cfg.maybe_number("window-lo"), cfg.maybe_number("window-hi")) {
        (None, None) => run_sweep(&model, cfg.form)?,
        (Some(lo), Some(hi)) => run_sweep_with_window(&model, cfg.form, (lo, hi))?,
        _ => {
            return Err(CliError::Usage(
                "give both --window-lo and --window-hi, or neither".into(),
            ))
        }
    };

    let artifact = match cfg.format {
        Format::Csv => emit::sweep_csv(&result),
        Format::Json => emit::json(&result),
    };
    let k = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |k| format!("{k:.6e}"));
    let mut summary = vec![format!(
        "{}: k_analytic = {} nm/(rad/s), k_fitted = {} nm/(rad/s) over [{}, {}]",
        result.model,
        k(result.k_analytic),
        k(result.k_fitted),
        result.window.0,
        result.window.1
    )];
    if let Some(c) = result.reference_center_nm {
        summary.push(format!("reference centre at Ω = 0: {c:.9} nm"));
    }
    summary.extend(result.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(Rendered {
        artifact,
        summary,
        infeasible: false,
    })
}

fn beta_grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    if let Some(list) = cfg.text("betas") {
        return list
            .split(',')
            .map(|s| {
                let v: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid value '{}' in --betas", s.trim())))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(CliError::Usage(format!("--betas entry '{}' must be finite", s.trim())))
                }
            })
            .collect();
    }
    let (lo, hi) = (cfg.number("beta-min")?, cfg.number("beta-max")?);
    let steps = cfg.count("beta-steps")?;
    match steps {
        0 => Err(CliError::Usage("--beta-steps must be at least 1".into())),
        1 => Ok(vec![lo]),
        _ => {
            let last = (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| ((last - i as f64) * lo + i as f64 * hi) / last)
                .collect())
        }
    }
}

fn design(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let i0 = cfg.number("i0")?;
    let constraints = DesignConstraints::new(
        i0,
        cfg.number("i-min")?,
        cfg.number("dlambda-res")?,
        cfg.number("omega-target")?,
        cfg.number("alpha")?,
        probe(cfg, i0)?,
    )?;
    let betas = beta_grid(cfg)?;
    let bracket = (cfg.number("area-lo")?, cfg.number("area-hi")?);
    let sol = min_area(&constraints, &betas, bracket)?;

    let artifact = match cfg.format {
        Format::Json => emit::json(&sol),
        Format::Csv => emit::record_csv(&[
            ("beta", sol.beta),
            ("area_s_min", sol.area_s_min),
            ("k_achieved", sol.k_achieved),
            ("peak_intensity", sol.peak_intensity),
            ("feasible", if sol.feasible { 1.0 } else { 0.0 }),
            ("shift_nm", sol.shift_nm),
        ]),
    };
    let mut summary = vec![if sol.feasible {
        format!(
            "S_min = {:.6} m² at β = {}, shift {:.6e} nm, peak {:.6e}",
            sol.area_s_min, sol.beta, sol.shift_nm, sol.peak_intensity
        )
    } else {
        format!("infeasible up to S = {} m² over {} post-selection angles", bracket.1, betas.len())
    }];
    summary.extend(sol.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(Rendered {
        artifact,
        summary,
        infeasible: !sol.feasible,
    })
}

fn geometry(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let angle = InjectionAngle::from_degrees(cfg.number("theta-deg")?)?;
    let report = GeometryReport::from(MultipassDesign::new(angle, cfg.number("rs")?)?);
    let artifact = match cfg.format {
        Format::Json => emit::json(&report),
        Format::Csv => emit::record_csv(&[
            ("theta_deg", report.theta_deg as f64),
            ("radius_rs", report.radius_rs),
            ("n_turns", report.n_turns as f64),
            ("area_equiv_m2", report.area_equiv_m2),
            ("ratio_vs_square", report.ratio_vs_square),
        ]),
    };
    let summary = vec![format!(
        "θ_r = {}°: {} turns, S_r = {:.6} m², {:.4}× the inscribed square",
        report.theta_deg, report.n_turns, report.area_equiv_m2, report.ratio_vs_square
    )];
    Ok(Rendered {
        artifact,
        summary,
        infeasible: false,
    })
}

fn classical(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let ring = InterferometerConfig::from_nm(cfg.number("area")?, cfg.number("lambda0")?)?
        .with_mod_phase(cfg.number("mod-phase")?)?;
    let omega = cfg.number("omega")?;
    let report = ClassicalReport {
        omega,
        fringe_shift: fringe_shift(&ring, omega)?,
        sagnac_phase: sagnac_phase(&ring, omega)?,
        intensity: classical_intensity(&ring, cfg.number("amplitude")?, omega)?,
    };
    let artifact = match cfg.format {
        Format::Json => emit::json(&report),
        Format::Csv => emit::record_csv(&[
            ("omega", report.omega),
            ("fringe_shift", report.fringe_shift),
            ("sagnac_phase", report.sagnac_phase),
            ("intensity", report.intensity),
        ]),
    };
    let summary = vec![format!(
        "fringe shift {:.6e}, phase {:.6e} rad",
        report.fringe_shift, report.sagnac_phase
    )];
    Ok(Rendered {
        artifact,
        summary,
        infeasible: false,
    })
}
