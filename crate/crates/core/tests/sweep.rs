use std::f64::consts::PI;

use wva_core::weak::im_weak_value_slope;
use wva_core::{
    run_sweep, run_sweep_with_window, sensitivity, table1_models, ModelSpec, OmegaRange,
    SpectrumForm, SpectrumModel, SPEED_OF_LIGHT,
};

fn model(area: f64, alpha: f64, beta: f64, omega: OmegaRange) -> ModelSpec {
    ModelSpec {
        name: format!("S={area} α={alpha} β={beta}"),
        area,
        alpha,
        beta,
        probe: SpectrumModel::new(1.0, 1550.0, 10.0).unwrap(),
        omega,
    }
}

/// dδλ₀/dΩ at Ω = 0 from the chain Ω → φ → Im A_w → δλ₀.
fn closed_form_k(m: &ModelSpec) -> f64 {
    let p = &m.probe;
    let dphi_domega = 8.0 * PI * m.area / (p.lambda0 * 1e-9 * SPEED_OF_LIGHT);
    4.0 * PI * p.width * p.width / p.lambda0 * im_weak_value_slope(m.alpha, m.beta).abs() * dphi_domega
}

#[test]
fn shifts_are_odd_in_omega() {
    let m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.1, 0.1, 41).unwrap());
    let sweep = run_sweep(&m, SpectrumForm::Exact).unwrap();
    let n = sweep.rows.len();
    for i in 0..n {
        let (a, b) = (&sweep.rows[i], &sweep.rows[n - 1 - i]);
        assert_eq!(a.omega, -b.omega);
        let (da, db) = (a.dlambda_analytic_nm.unwrap(), b.dlambda_analytic_nm.unwrap());
        assert!((da + db).abs() <= 1e-9, "analytic {da} vs {db}");
        let (fa, fb) = (a.dlambda_fitted_nm.unwrap(), b.dlambda_fitted_nm.unwrap());
        assert!((fa + fb).abs() <= 1e-4 * fa.abs() + 1e-9, "fitted {fa} vs {fb}");
    }
}

#[test]
fn zero_rotation_row_has_zero_shift() {
    let m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.1, 0.1, 21).unwrap());
    let sweep = run_sweep(&m, SpectrumForm::Exact).unwrap();
    let row = &sweep.rows[10];
    assert_eq!(row.omega, 0.0);
    assert_eq!(row.dlambda_analytic_nm, Some(0.0));
    assert_eq!(row.dlambda_fitted_nm, Some(0.0));
    assert!(sweep.rows.windows(2).all(|w| w[0].omega < w[1].omega));
    for r in &sweep.rows {
        let p = r.postselect_prob.unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
    assert!(sweep.k_analytic.unwrap() >= 0.0 && sweep.k_fitted.unwrap() >= 0.0);
}

#[test]
fn zero_shift_selection_is_flagged() {
    let models = table1_models(1550.0, 10.0).unwrap();
    let model3 = &models[2];
    let sweep = run_sweep(
        &ModelSpec {
            omega: OmegaRange::new(-0.03, 0.03, 13).unwrap(),
            ..model3.clone()
        },
        SpectrumForm::Exact,
    )
    .unwrap();
    assert!(sweep.zero_shift_degenerate);
    assert!(sweep.warnings.iter().any(|w| w.contains("α + β = 0")));
    for r in &sweep.rows {
        assert_eq!(r.im_aw, Some(0.0));
        assert_eq!(r.dlambda_analytic_nm.map(f64::abs), Some(0.0));
        assert_eq!(r.dlambda_fitted_nm, Some(0.0));
    }
    assert_eq!(sweep.k_analytic, Some(0.0));
}

#[test]
fn model1_sensitivity_matches_closed_form_chain() {
    let m = model(16.0, 0.1, -0.5, OmegaRange::new(-0.01, 0.01, 41).unwrap());
    let sweep = run_sweep(&m, SpectrumForm::Exact).unwrap();
    let k = sweep.k_analytic.unwrap();
    let expected = closed_form_k(&m);
    assert!(((k - expected) / expected).abs() < 1e-3, "k {k} vs closed form {expected}");
}

#[test]
fn sensitivity_is_linear_in_area() {
    let range = OmegaRange::new(-0.1, 0.1, 51).unwrap();
    let big = run_sweep(&model(16.0, 0.1, -0.3, range), SpectrumForm::Exact).unwrap();
    let small = run_sweep(&model(8.0, 0.1, -0.3, range), SpectrumForm::Exact).unwrap();
    let ratio = big.k_analytic.unwrap() / small.k_analytic.unwrap();
    assert!((ratio - 2.0).abs() <= 0.005 * 2.0, "ratio {ratio}");
}

#[test]
fn fitted_shifts_track_analytic_in_linear_regime() {
    let m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.05, 0.05, 41).unwrap());
    let sweep = run_sweep(&m, SpectrumForm::Exact).unwrap();
    let mut checked = 0;
    for r in &sweep.rows {
        if r.im_aw.unwrap().abs() > 0.01 {
            continue;
        }
        let (a, f) = (r.dlambda_analytic_nm.unwrap(), r.dlambda_fitted_nm.unwrap());
        let tol = if a.abs() < 1e-3 { 1e-4 } else { 0.05 * a.abs() };
        assert!((f - a).abs() <= tol, "Ω = {}: fitted {f} analytic {a}", r.omega);
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn larger_post_selection_angle_amplifies_less() {
    assert!(im_weak_value_slope(0.1, -0.3).abs() > im_weak_value_slope(0.1, -0.5).abs());
}

#[test]
fn orthogonal_rows_are_isolated() {
    // β = 0: the Ω = 0 row is orthogonal; every other row is fine.
    let m = model(16.0, 0.1, 0.0, OmegaRange::new(-0.1, 0.1, 5).unwrap());
    let sweep = run_sweep(&m, SpectrumForm::Exact).unwrap();
    assert_eq!(sweep.rows.len(), 5);
    assert!(sweep.rows[2].flag.is_some());
    assert_eq!(sweep.rows[2].im_aw, None);
    assert!(sweep.rows[0].im_aw.is_some());
    assert!(sweep.reference_center_nm.is_none());
    assert!(sweep.rows.iter().all(|r| r.dlambda_fitted_nm.is_none()));
}

#[test]
fn sweeps_are_deterministic() {
    let m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.1, 0.1, 33).unwrap());
    let a = run_sweep(&m, SpectrumForm::Exact).unwrap();
    let b = run_sweep(&m, SpectrumForm::Exact).unwrap();
    assert_eq!(a, b);
}

#[test]
fn explicit_window_matches_recomputed_sensitivity() {
    let m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.1, 0.1, 41).unwrap());
    let sweep = run_sweep_with_window(&m, SpectrumForm::Paper, (-0.03, 0.03)).unwrap();
    let s = sensitivity(&sweep, (-0.03, 0.03)).unwrap();
    assert_eq!(sweep.k_analytic, Some(s.k_analytic));
    assert_eq!(sweep.k_fitted, Some(s.k_fitted));
    assert_eq!(sweep.form, SpectrumForm::Paper);
}

#[test]
fn invalid_models_are_rejected() {
    let mut m = model(16.0, 0.1, -0.3, OmegaRange::new(-0.1, 0.1, 5).unwrap());
    m.area = -1.0;
    assert!(run_sweep(&m, SpectrumForm::Exact).is_err());
}
