//! Minimal standalone SVG chart rendering (no external renderer needed).

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 40.0;
const MARGIN_TOP: f64 = 60.0;
const MARGIN_BOTTOM: f64 = 70.0;

pub const SERIES_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Fixed y range; autoscaled from the data when absent.
    pub y_range: Option<(f64, f64)>,
}

pub struct Bar {
    pub label: String,
    pub value: f64,
}

pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub bars: Vec<Bar>,
    pub y_range: Option<(f64, f64)>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn axis_range(values: impl Iterator<Item = f64>, fixed: Option<(f64, f64)>) -> (f64, f64) {
    if let Some(range) = fixed {
        return range;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        // degenerate span: pad around the single value
        let pad = if hi.abs() < 1e-12 {
            1.0
        } else {
            hi.abs() * 0.1
        };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * w
    }

    fn y(&self, v: f64) -> f64 {
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        HEIGHT - MARGIN_BOTTOM - (v - self.y_min) / (self.y_max - self.y_min) * h
    }
}

fn chart_header(out: &mut String, title: &str) {
    let _ = write!(
        out,
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" ",
            "viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\" ",
            "font-family=\"sans-serif\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "<text x=\"{cx}\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">{title}</text>\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        cx = WIDTH / 2.0,
        title = escape(title),
    );
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = write!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    );
    // 5 ticks per axis
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let xv = frame.x_min + frac * (frame.x_max - frame.x_min);
        let xp = frame.x(xv);
        let _ = writeln!(
            out,
            "<line x1=\"{xp}\" y1=\"{y0}\" x2=\"{xp}\" y2=\"{}\" stroke=\"black\"/>\n\
             <text x=\"{xp}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{xv:.0}</text>",
            y0 + 6.0,
            y0 + 22.0,
        );
        let yv = frame.y_min + frac * (frame.y_max - frame.y_min);
        let yp = frame.y(yv);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{yp}\" x2=\"{x0}\" y2=\"{yp}\" stroke=\"black\"/>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\">{yv:.2}</text>",
            x0 - 6.0,
            x0 - 10.0,
            yp + 4.0,
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(x_label),
    );
    let _ = writeln!(
        out,
        "<text x=\"22\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" \
         transform=\"rotate(-90 22 {})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label),
    );
}

impl LineChart {
    pub fn render(&self) -> String {
        let (x_min, x_max) = axis_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0)),
            None,
        );
        let (y_min, y_max) = axis_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1)),
            self.y_range,
        );
        let frame = Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        };

        let mut out = String::new();
        chart_header(&mut out, &self.title);
        axes(&mut out, &frame, &self.x_label, &self.y_label);

        for (i, series) in self.series.iter().enumerate() {
            let color = SERIES_COLORS[i % SERIES_COLORS.len()];
            if series.points.len() > 1 {
                let points: Vec<String> = series
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
                    .collect();
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                    points.join(" ")
                );
            }
            for &(x, y) in &series.points {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>",
                    frame.x(x),
                    frame.y(y)
                );
            }
            // legend entry
            let ly = MARGIN_TOP + 8.0 + i as f64 * 20.0;
            let _ = write!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{color}\"/>\n\
                 <text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>\n",
                WIDTH - MARGIN_RIGHT - 170.0,
                ly - 11.0,
                WIDTH - MARGIN_RIGHT - 150.0,
                ly,
                escape(&series.name),
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

impl BarChart {
    pub fn render(&self) -> String {
        let (y_min, y_max) = axis_range(
            self.bars
                .iter()
                .map(|b| b.value)
                .chain(std::iter::once(0.0)),
            self.y_range,
        );
        let frame = Frame {
            x_min: 0.0,
            x_max: self.bars.len().max(1) as f64,
            y_min,
            y_max,
        };

        let mut out = String::new();
        chart_header(&mut out, &self.title);
        axes(&mut out, &frame, "", &self.y_label);

        let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / self.bars.len().max(1) as f64;
        for (i, bar) in self.bars.iter().enumerate() {
            let color = SERIES_COLORS[i % SERIES_COLORS.len()];
            let x = MARGIN_LEFT + i as f64 * slot + slot * 0.2;
            let y = frame.y(bar.value);
            let base = frame.y(y_min.max(0.0));
            let _ = writeln!(
                out,
                "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{color}\"/>",
                y.min(base),
                slot * 0.6,
                (base - y).abs(),
            );
            let _ = write!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n\
                 <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"13\">{:.3}</text>\n",
                x + slot * 0.3,
                HEIGHT - MARGIN_BOTTOM + 22.0,
                escape(&bar.label),
                x + slot * 0.3,
                y - 8.0,
                bar.value,
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_chart_renders_series() {
        let chart = LineChart {
            title: "Satisfaction vs load".to_string(),
            x_label: "ARBIT (kbps)".to_string(),
            y_label: "mean SL".to_string(),
            series: vec![Series {
                name: "traditional".to_string(),
                points: vec![(4500.0, 0.99), (5500.0, 0.7), (6000.0, 0.34)],
            }],
            y_range: Some((0.0, 1.0)),
        };
        let svg = chart.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("traditional"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn bar_chart_renders_bars() {
        let chart = BarChart {
            title: "Utilization".to_string(),
            y_label: "mean utilization".to_string(),
            bars: vec![
                Bar {
                    label: "traditional @ 4500".to_string(),
                    value: 0.82,
                },
                Bar {
                    label: "proposed @ 5500".to_string(),
                    value: 0.95,
                },
            ],
            y_range: Some((0.0, 1.0)),
        };
        let svg = chart.render();
        assert!(svg.contains("<rect"));
        assert!(svg.contains("proposed @ 5500"));
        assert!(svg.contains("0.950"));
    }

    #[test]
    fn single_point_series_still_renders() {
        let chart = LineChart {
            title: "t".to_string(),
            x_label: "x".to_string(),
            y_label: "y".to_string(),
            series: vec![Series {
                name: "s".to_string(),
                points: vec![(6000.0, 0.5)],
            }],
            y_range: None,
        };
        let svg = chart.render();
        assert!(svg.contains("<circle"));
        assert!(!svg.contains("NaN"));
    }
}
