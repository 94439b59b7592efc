use proptest::prelude::*;
use wva_core::fit::gaussian;
use wva_core::spectrum::{output_intensity, uniform_grid};
use wva_core::{
    analytic_wavelength_shift, fit_center, measure, output_spectrum, probe_intensity, weak_value,
    FitSeed, SampledSpectrum, SelectionConfig, SpectrumForm, SpectrumModel,
};

fn probe() -> SpectrumModel {
    SpectrumModel::new(1.0, 1550.0, 10.0).unwrap()
}

/// φ that makes Im A_w equal `target` for the given angles, by bisection on the closed form.
fn phase_for_im(alpha: f64, beta: f64, target: f64) -> f64 {
    let im = |phi: f64| weak_value(&SelectionConfig::new(alpha, beta, phi).unwrap()).unwrap().a_w.im;
    let (mut lo, mut hi) = (0.0, 0.5);
    if im(hi) < im(lo) {
        std::mem::swap(&mut lo, &mut hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if im(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn zero_rotation_fit_stays_at_center() {
    let p = probe();
    let sel = SelectionConfig::new(0.1, -0.3, 0.0).unwrap();
    let r = measure(&p, &sel, &p.default_grid(), SpectrumForm::Exact).unwrap();
    assert_eq!(r.weak.a_w.im, 0.0);
    assert!((r.fit.center - 1550.0).abs() < 1e-3 * p.width);
}

#[test]
fn fitted_shift_matches_linear_response() {
    let p = probe();
    let grid = p.default_grid();
    let phi = phase_for_im(0.1, -0.3, 0.01);
    let sel = SelectionConfig::new(0.1, -0.3, phi).unwrap();
    let reference = measure(&p, &sel.with_phi(0.0), &grid, SpectrumForm::Exact).unwrap();
    let shifted = measure(&p, &sel, &grid, SpectrumForm::Exact).unwrap();
    assert!((shifted.weak.a_w.im - 0.01).abs() < 1e-12);

    let analytic = analytic_wavelength_shift(&p, shifted.weak.a_w);
    assert!((analytic + 0.008_107).abs() < 1e-6);
    let fitted = shifted.fit.center - reference.fit.center;
    assert!(
        ((fitted - analytic) / analytic).abs() < 0.05,
        "fitted {fitted} vs analytic {analytic}"
    );
}

#[test]
fn paper_form_agrees_when_real_part_is_negligible() {
    // β = −2α makes Re A_w vanish at φ = 0; a small φ keeps it below 1e-3.
    let p = probe();
    let sel = SelectionConfig::new(0.1, -0.2, 1e-3).unwrap();
    let wv = weak_value(&sel).unwrap();
    let grid = p.default_grid();
    let g = p.coupling();
    let window: Vec<f64> = grid.iter().copied().filter(|l| (l - 1550.0).abs() <= 25.0).collect();
    let worst = window
        .iter()
        .map(|&l| (wv.a_w.re * (std::f64::consts::TAU / l * g).sin()).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-3, "|Re A_w sin(pg)| reaches {worst}");

    let exact = output_spectrum(&p, &wv, g, &window, SpectrumForm::Exact).unwrap();
    let paper = output_spectrum(&p, &wv, g, &window, SpectrumForm::Paper).unwrap();
    for (e, q) in exact.intensities().iter().zip(paper.intensities()) {
        assert!((e - q).abs() <= 2e-3 * e, "exact {e} paper {q}");
    }
}

#[test]
fn null_coupling_only_scales_the_probe() {
    let p = probe();
    let grid = uniform_grid(1520.0, 1580.0, 97).unwrap();
    for (alpha, beta, phi) in [(0.1, -0.3, 0.05), (0.4, 0.9, -1.0), (0.1, -0.1, 0.2)] {
        let wv = weak_value(&SelectionConfig::new(alpha, beta, phi).unwrap()).unwrap();
        for form in [SpectrumForm::Exact, SpectrumForm::Paper] {
            for &l in &grid {
                let got = output_intensity(&p, &wv, 0.0, l, form);
                let expected = wv.postselect_probability() * probe_intensity(&p, l);
                assert!((got - expected).abs() <= 1e-14 * expected.max(1e-300));
            }
        }
    }
}

#[test]
fn fit_is_exact_on_unmodulated_gaussians_at_any_density() {
    for points in [64, 100, 257, 2048, 5000] {
        let grid = uniform_grid(1550.0 - 40.0, 1550.0 + 40.0, points).unwrap();
        let ys = grid.iter().map(|&l| gaussian(l, 3.0, 1550.2, 10.0)).collect();
        let s = SampledSpectrum::new(grid, ys, SpectrumForm::Exact).unwrap();
        let fit = fit_center(&s, &FitSeed::from_spectrum(&s, 10.0).unwrap()).unwrap();
        assert!(((fit.center - 1550.2) / 1550.2).abs() < 1e-10, "{points} points");
        assert!(((fit.width - 10.0) / 10.0).abs() < 1e-10, "{points} points");
        assert!(((fit.peak - 3.0) / 3.0).abs() < 1e-10, "{points} points");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectra_are_nonnegative_and_exact_dominates_paper(
        alpha in -1.5f64..1.5,
        beta in -1.5f64..1.5,
        phi in -1.0f64..1.0,
        width in 1.0f64..40.0,
    ) {
        let sel = SelectionConfig::new(alpha, beta, phi).unwrap();
        let Ok(wv) = weak_value(&sel) else { return Ok(()); };
        prop_assume!(wv.overlap.norm() > 1e-6);
        let p = SpectrumModel::new(2.0, 1550.0, width).unwrap();
        let grid = p.default_grid();
        let exact = output_spectrum(&p, &wv, p.coupling(), &grid, SpectrumForm::Exact).unwrap();
        let paper = output_spectrum(&p, &wv, p.coupling(), &grid, SpectrumForm::Paper).unwrap();
        let scale = exact.intensities().iter().chain(paper.intensities()).fold(0.0f64, |a, b| a.max(*b));
        for (i, &l) in grid.iter().enumerate() {
            let (e, q) = (exact.intensities()[i], paper.intensities()[i]);
            prop_assert!(e >= 0.0 && q >= 0.0);
            let s = (std::f64::consts::TAU / l * p.coupling()).sin();
            let term = wv.postselect_probability() * (wv.a_w.re * s).powi(2) * probe_intensity(&p, l);
            prop_assert!(((e - q) - term).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn intensity_scale_leaves_the_center_alone(scale in 0.01f64..100.0, phi in -0.05f64..0.05) {
        let base = probe();
        let scaled = base.with_i0(scale).unwrap();
        let sel = SelectionConfig::new(0.1, -0.3, phi).unwrap();
        let grid = base.default_grid();
        let a = measure(&base, &sel, &grid, SpectrumForm::Exact).unwrap();
        let b = measure(&scaled, &sel, &grid, SpectrumForm::Exact).unwrap();
        for (x, y) in a.spectrum.intensities().iter().zip(b.spectrum.intensities()) {
            prop_assert!((y - scale * x).abs() <= 1e-13 * (scale * x).max(f64::MIN_POSITIVE));
        }
        prop_assert!((a.fit.center - b.fit.center).abs() < 1e-9);
    }
}
