//! Chart and summary generation from a sweep CSV.
//!
//! A report consists of four SVG charts and a plain-text table:
//! satisfaction vs background load for each scheme, the utilization
//! comparison across load levels, and the utilization each scheme reaches
//! while keeping mean satisfaction at 0.95 or better.

use std::fmt::Write as _;

use bbsim_core::{Scheme, SweepRow};

use crate::svg::{Bar, BarChart, LineChart, Series};

/// Threshold used by the high-satisfaction utilization comparison.
pub const HIGH_SL_THRESHOLD: f64 = 0.95;

/// One rendered report file: name and contents.
pub struct ReportFile {
    pub name: &'static str,
    pub contents: String,
}

fn scheme_points(
    rows: &[SweepRow],
    scheme: Scheme,
    y: impl Fn(&SweepRow) -> f64,
) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.scheme == scheme)
        .map(|r| (r.arbit_kbps.value(), y(r)))
        .collect()
}

/// Best utilization a scheme reaches among rows meeting the satisfaction
/// threshold, with the load level it happens at.
fn best_high_sl_row(rows: &[SweepRow], scheme: Scheme) -> Option<&SweepRow> {
    rows.iter()
        .filter(|r| r.scheme == scheme && r.mean_sl >= HIGH_SL_THRESHOLD)
        .max_by(|a, b| {
            a.mean_util
                .partial_cmp(&b.mean_util)
                .expect("finite utilization")
        })
}

fn sl_chart(rows: &[SweepRow], scheme: Scheme) -> String {
    LineChart {
        title: format!("Femtocell satisfaction level, {scheme} scheme"),
        x_label: "average requested background bandwidth, ARBIT (kbps)".to_string(),
        y_label: "mean satisfaction level".to_string(),
        series: vec![Series {
            name: scheme.to_string(),
            points: scheme_points(rows, scheme, |r| r.mean_sl),
        }],
        y_range: Some((0.0, 1.05)),
    }
    .render()
}

fn utilization_chart(rows: &[SweepRow]) -> String {
    LineChart {
        title: "Link utilization by background load (both schemes)".to_string(),
        x_label: "average requested background bandwidth, ARBIT (kbps)".to_string(),
        y_label: "mean utilization".to_string(),
        series: Scheme::all()
            .iter()
            .map(|&scheme| Series {
                name: scheme.to_string(),
                points: scheme_points(rows, scheme, |r| r.mean_util),
            })
            .filter(|s| !s.points.is_empty())
            .collect(),
        y_range: Some((0.0, 1.05)),
    }
    .render()
}

fn high_sl_chart(rows: &[SweepRow]) -> String {
    let bars = Scheme::all()
        .iter()
        .map(|&scheme| match best_high_sl_row(rows, scheme) {
            Some(row) => Bar {
                label: format!("{scheme} @ ARBIT {:.0}", row.arbit_kbps.value()),
                value: row.mean_util,
            },
            None => Bar {
                label: format!("{scheme} (no level ≥ {HIGH_SL_THRESHOLD:.2} SL)"),
                value: 0.0,
            },
        })
        .collect();
    BarChart {
        title: format!("Utilization achievable at mean SL ≥ {HIGH_SL_THRESHOLD:.2}"),
        y_label: "mean utilization".to_string(),
        bars,
        y_range: Some((0.0, 1.05)),
    }
    .render()
}

fn summary_text(rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>12} {:>12} {:>18} {:>18} {:>6}",
        "arbit_kbps", "scheme", "mean_sl (± std)", "mean_util (± std)", "reps"
    );
    for row in rows {
        let _ = writeln!(
            out,
            "{:>12.0} {:>12} {:>9.4} ± {:.4} {:>9.4} ± {:.4} {:>6}",
            row.arbit_kbps.value(),
            row.scheme.to_string(),
            row.mean_sl,
            row.std_sl,
            row.mean_util,
            row.std_util,
            row.replications
        );
    }
    let _ = writeln!(out);
    for scheme in Scheme::all() {
        match best_high_sl_row(rows, scheme) {
            Some(row) => {
                let _ = writeln!(
                    out,
                    "{scheme}: utilization {:.4} at ARBIT {:.0} kbps with mean SL {:.4} (≥ {HIGH_SL_THRESHOLD})",
                    row.mean_util,
                    row.arbit_kbps.value(),
                    row.mean_sl
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{scheme}: no swept level reaches mean SL ≥ {HIGH_SL_THRESHOLD}"
                );
            }
        }
    }
    out
}

/// Renders the full report from parsed sweep rows.
pub fn build_report(rows: &[SweepRow]) -> Vec<ReportFile> {
    vec![
        ReportFile {
            name: "fig_sl_traditional.svg",
            contents: sl_chart(rows, Scheme::Traditional),
        },
        ReportFile {
            name: "fig_sl_proposed.svg",
            contents: sl_chart(rows, Scheme::Proposed),
        },
        ReportFile {
            name: "fig_utilization.svg",
            contents: utilization_chart(rows),
        },
        ReportFile {
            name: "fig_utilization_high_sl.svg",
            contents: high_sl_chart(rows),
        },
        ReportFile {
            name: "summary.txt",
            contents: summary_text(rows),
        },
    ]
}
