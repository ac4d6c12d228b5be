//! Figure data and a small deterministic SVG renderer.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FigureError {
    #[error("figure {figure}: series {series:?} in panel {panel:?} is empty")]
    EmptySeries {
        figure: String,
        panel: String,
        series: String,
    },
    #[error("figure {figure}: {panels} panels do not fit a {rows}x{cols} layout")]
    Layout {
        figure: String,
        panels: usize,
        rows: usize,
        cols: usize,
    },
    #[error("figure {figure}: series {series:?} has a non-finite sample")]
    NonFinite { figure: String, series: String },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Plot `log10` of both coordinates.
    pub log_log: bool,
}

impl Panel {
    pub fn new(title: impl Into<String>, x_label: &str, y_label: &str, series: Vec<Series>) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.to_owned(),
            y_label: y_label.to_owned(),
            series,
            log_log: false,
        }
    }
}

/// Panels in row-major order on a `rows × cols` grid, with the metadata that
/// identifies the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureBundle {
    pub name: String,
    pub title: String,
    pub rows: usize,
    pub cols: usize,
    pub panels: Vec<Panel>,
    /// Configuration hash of the producing run.
    pub stamp: String,
    pub solver: String,
    pub version: String,
}

impl FigureBundle {
    pub fn validate(&self) -> Result<(), FigureError> {
        if self.panels.is_empty() || self.panels.len() > self.rows * self.cols {
            return Err(FigureError::Layout {
                figure: self.name.clone(),
                panels: self.panels.len(),
                rows: self.rows,
                cols: self.cols,
            });
        }
        for p in &self.panels {
            if p.series.is_empty() {
                return Err(FigureError::EmptySeries {
                    figure: self.name.clone(),
                    panel: p.title.clone(),
                    series: String::new(),
                });
            }
            for s in &p.series {
                if s.points.is_empty() {
                    return Err(FigureError::EmptySeries {
                        figure: self.name.clone(),
                        panel: p.title.clone(),
                        series: s.label.clone(),
                    });
                }
                if s.points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(FigureError::NonFinite {
                        figure: self.name.clone(),
                        series: s.label.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// All series as `panel,series,x,y` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("panel,series,x,y\n");
        for p in &self.panels {
            for s in &p.series {
                for (x, y) in &s.points {
                    let _ = writeln!(out, "{},{},{x},{y}", csv_field(&p.title), csv_field(&s.label));
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 240.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 44.0;
const HEADER: f64 = 36.0;
const FOOTER: f64 = 24.0;
const MAX_POINTS: usize = 600;
const COLORS: [&str; 4] = ["#1f4e9c", "#c0392b", "#2e8b57", "#7d3c98"];

/// Renders the bundle; identical bundles give identical bytes.
pub fn render_svg(bundle: &FigureBundle) -> Result<String, FigureError> {
    bundle.validate()?;
    let width = bundle.cols as f64 * (PANEL_W + MARGIN_L + MARGIN_R);
    let height = HEADER + bundle.rows as f64 * (PANEL_H + MARGIN_T + MARGIN_B) + FOOTER;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"##,
        w = fmt(width),
        h = fmt(height)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="22" font-size="15" text-anchor="middle">{}</text>"##,
        fmt(width / 2.0),
        escape(&bundle.title)
    );
    for (i, panel) in bundle.panels.iter().enumerate() {
        let (row, col) = (i / bundle.cols, i % bundle.cols);
        let x0 = col as f64 * (PANEL_W + MARGIN_L + MARGIN_R) + MARGIN_L;
        let y0 = HEADER + row as f64 * (PANEL_H + MARGIN_T + MARGIN_B) + MARGIN_T;
        draw_panel(&mut svg, panel, x0, y0);
    }
    let _ = writeln!(
        svg,
        r##"<text x="8" y="{}" font-size="9" fill="#555">{} | solver {} | version {} | config {}</text>"##,
        fmt(height - 8.0),
        escape(&bundle.name),
        escape(&bundle.solver),
        escape(&bundle.version),
        escape(&bundle.stamp)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(bundle: &FigureBundle, path: &Path) -> Result<(), FigureError> {
    let svg = render_svg(bundle)?;
    std::fs::write(path, svg).map_err(|source| FigureError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn draw_panel(svg: &mut String, panel: &Panel, x0: f64, y0: f64) {
    let tr = |p: &(f64, f64)| if panel.log_log { (p.0.log10(), p.1.log10()) } else { *p };
    let pts: Vec<Vec<(f64, f64)>> = panel
        .series
        .iter()
        .map(|s| s.points.iter().map(tr).filter(|(x, y)| x.is_finite() && y.is_finite()).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for (x, y) in all {
        xmin = xmin.min(*x);
        xmax = xmax.max(*x);
        ymin = ymin.min(*y);
        ymax = ymax.max(*y);
    }
    if xmax <= xmin {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if ymax <= ymin {
        ymin -= 0.5;
        ymax += 0.5;
    }
    let pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    let sx = |x: f64| x0 + (x - xmin) / (xmax - xmin) * PANEL_W;
    let sy = |y: f64| y0 + PANEL_H - (y - ymin) / (ymax - ymin) * PANEL_H;

    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
        fmt(x0),
        fmt(y0),
        fmt(PANEL_W),
        fmt(PANEL_H)
    );
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"##,
        fmt(x0 + PANEL_W / 2.0),
        fmt(y0 - 8.0),
        escape(&panel.title)
    );
    for t in ticks(xmin, xmax) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="{b}" x2="{x}" y2="{b2}" stroke="#333"/><text x="{x}" y="{ty}" text-anchor="middle">{}</text>"##,
            tick_label(t, panel.log_log),
            x = fmt(x),
            b = fmt(y0 + PANEL_H),
            b2 = fmt(y0 + PANEL_H + 4.0),
            ty = fmt(y0 + PANEL_H + 16.0)
        );
    }
    for t in ticks(ymin, ymax) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{l}" y1="{y}" x2="{l2}" y2="{y}" stroke="#333"/><text x="{tx}" y="{ty}" text-anchor="end">{}</text>"##,
            tick_label(t, panel.log_log),
            l = fmt(x0 - 4.0),
            l2 = fmt(x0),
            y = fmt(y),
            tx = fmt(x0 - 6.0),
            ty = fmt(y + 4.0)
        );
    }
    if ymin < 0.0 && ymax > 0.0 && !panel.log_log {
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#bbb" stroke-dasharray="3,3"/>"##,
            fmt(x0),
            fmt(x0 + PANEL_W),
            y = fmt(sy(0.0))
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{}" y="{}" text-anchor="middle">{}</text>"##,
        fmt(x0 + PANEL_W / 2.0),
        fmt(y0 + PANEL_H + 32.0),
        escape(&panel.x_label)
    );
    let _ = writeln!(
        svg,
        r##"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})">{}</text>"##,
        escape(&panel.y_label),
        x = fmt(x0 - 46.0),
        y = fmt(y0 + PANEL_H / 2.0)
    );
    for (k, (series, p)) in panel.series.iter().zip(&pts).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let stride = p.len().div_ceil(MAX_POINTS).max(1);
        let mut path = String::new();
        for (j, q) in p.iter().enumerate() {
            if j % stride == 0 || j + 1 == p.len() {
                let _ = write!(path, "{},{} ", fmt(sx(q.0)), fmt(sy(q.1)));
            }
        }
        let _ = writeln!(
            svg,
            r##"<polyline fill="none" stroke="{color}" stroke-width="1.4" points="{}"/>"##,
            path.trim_end()
        );
        let ly = y0 + 14.0 + 13.0 * k as f64;
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"##,
            fmt(x0 + PANEL_W - 120.0),
            fmt(x0 + PANEL_W - 104.0),
            fmt(x0 + PANEL_W - 100.0),
            fmt(ly + 4.0),
            escape(&series.label),
            ly = fmt(ly)
        );
    }
}

/// Round steps of 1, 2 or 5 times a power of ten, about five per axis.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(t: f64, log: bool) -> String {
    let t = if t.abs() < 1e-12 { 0.0 } else { t };
    if log {
        format!("1e{}", fmt_short(t))
    } else {
        fmt_short(t)
    }
}

fn fmt_short(t: f64) -> String {
    let s = format!("{t:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn fmt(x: f64) -> String {
    format!("{x:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle(points: Vec<(f64, f64)>) -> FigureBundle {
        FigureBundle {
            name: "t".into(),
            title: "test".into(),
            rows: 1,
            cols: 1,
            panels: vec![Panel::new("p", "x", "y", vec![Series::new("s", points)])],
            stamp: "abc".into(),
            solver: "none".into(),
            version: "0".into(),
        }
    }

    #[test]
    fn empty_series_is_rejected() {
        assert!(matches!(render_svg(&bundle(vec![])), Err(FigureError::EmptySeries { .. })));
        assert!(matches!(
            render_svg(&bundle(vec![(0.0, f64::NAN)])),
            Err(FigureError::NonFinite { .. })
        ));
    }

    #[test]
    fn rendering_is_deterministic_and_stamped() {
        let b = bundle((0..1000).map(|i| (i as f64, (i as f64 / 100.0).sin())).collect());
        let a = render_svg(&b).unwrap();
        assert_eq!(a, render_svg(&b).unwrap());
        assert!(a.contains("config abc"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn layout_must_hold_all_panels() {
        let mut b = bundle(vec![(0.0, 1.0)]);
        b.panels.push(b.panels[0].clone());
        assert!(matches!(render_svg(&b), Err(FigureError::Layout { .. })));
    }

    #[test]
    fn tick_choice() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(fmt_short(0.6000000000000001), "0.6");
        assert_eq!(ticks(-4.0, 4.0).len(), 5);
    }

    #[test]
    fn csv_quotes_fields() {
        let mut b = bundle(vec![(1.0, 2.0)]);
        b.panels[0].title = "c = 0.2, fermi".into();
        assert_eq!(b.to_csv(), "panel,series,x,y\n\"c = 0.2, fermi\",s,1,2\n");
    }
}
