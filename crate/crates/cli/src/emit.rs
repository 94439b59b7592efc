//! CSV and JSON writers. Floats use `{:.16e}` in CSV so output round-trips
//! exactly; missing values are written as `NaN` (CSV) or `null` (JSON).

use std::fmt::Write as _;

use serde::Serialize;
use wva_core::{SampledSpectrum, SweepResult};

pub const SPECTRUM_HEADER: &str = "lambda_nm,intensity";
pub const SWEEP_HEADER: &str =
    "omega,phi,im_aw,dlambda_analytic_nm,dlambda_fitted_nm,postselect_prob";

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), float)
}

pub fn spectrum_csv(s: &SampledSpectrum) -> String {
    let mut out = String::with_capacity(48 * (s.len() + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (l, i) in s.points() {
        let _ = writeln!(out, "{},{}", float(l), float(i));
    }
    out
}

pub fn sweep_csv(s: &SweepResult) -> String {
    let mut out = String::with_capacity(140 * (s.rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in &s.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            float(r.omega),
            float(r.phi),
            cell(r.im_aw),
            cell(r.dlambda_analytic_nm),
            cell(r.dlambda_fitted_nm),
            cell(r.postselect_prob)
        );
    }
    out
}

/// Header row plus one line of values, in field order.
pub fn record_csv(fields: &[(&str, f64)]) -> String {
    let names: Vec<_> = fields.iter().map(|(k, _)| *k).collect();
    let values: Vec<_> = fields.iter().map(|(_, v)| float(*v)).collect();
    format!("{}\n{}\n", names.join(","), values.join(","))
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize to JSON");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1_550.000_000_001, 5e-300, 0.0] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(cell(None), "NaN");
    }

    #[test]
    fn record_layout() {
        assert_eq!(record_csv(&[("a", 1.0), ("b", 2.0)]), "a,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
