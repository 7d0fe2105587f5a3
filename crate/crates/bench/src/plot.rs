//! Static SVG renderings of the eight figures: scatter plots against the
//! degree extreme difference, boxplots along a sweep, and per-replicate
//! bound-versus-attained charts.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context};

use crate::output::{read_rows, CsvRow};
use crate::runner::median;
use crate::scenario::{Family, ScenarioId};

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 240.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 34.0;
const MARGIN_B: f64 = 46.0;
const ATTAINED_W: f64 = 640.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Parses `fig3`, `3` or a scenario name.
pub fn parse_figure(s: &str) -> Option<ScenarioId> {
    let digits = s.strip_prefix("fig").unwrap_or(s);
    digits
        .parse::<u8>()
        .ok()
        .and_then(ScenarioId::from_figure)
        .or_else(|| ScenarioId::parse(s))
}

#[derive(Clone, Copy)]
enum Marker {
    Circle,
    Star,
    Diamond,
    Square,
}

const MARKERS: [Marker; 4] = [Marker::Star, Marker::Diamond, Marker::Circle, Marker::Square];

type Series = (&'static str, fn(&CsvRow) -> f64);

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    }
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + hi.abs()) {
        let pad = 0.5 * (1.0 + hi.abs()) * 0.1;
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Panel {
    x0: f64,
    w: f64,
    y0: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Panel {
    fn px(&self, x: f64) -> f64 {
        self.x0 + MARGIN_L + (x - self.xr.0) / (self.xr.1 - self.xr.0) * (self.w - MARGIN_L - MARGIN_R)
    }

    fn py(&self, y: f64) -> f64 {
        let h = PANEL_H - MARGIN_T - MARGIN_B;
        self.y0 + MARGIN_T + h - (y - self.yr.0) / (self.yr.1 - self.yr.0) * h
    }
}

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

fn label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s == "-0" || s.starts_with("-0.") && s.trim_start_matches("-0.").chars().all(|c| c == '0') {
        s[1..].to_string()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Svg {
    fn new(width: f64, rows: usize) -> Self {
        Self {
            body: String::new(),
            width,
            height: PANEL_H * rows as f64 + 30.0,
        }
    }

    fn text(&mut self, x: f64, y: f64, size: u32, anchor: &str, s: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{x:.2}" y="{y:.2}" font-size="{size}" text-anchor="{anchor}">{}</text>"#,
            esc(s)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{stroke}" stroke-width="{width}"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    /// Axes, ticks and labels; `xticks` replaces numeric x ticks with
    /// categorical labels at the given positions.
    fn axes(&mut self, p: &Panel, title: &str, xlabel: &str, ylabel: &str, xticks: Option<&[(f64, String)]>) {
        let (l, r) = (p.x0 + MARGIN_L, p.x0 + p.w - MARGIN_R);
        let (t, b) = (p.y0 + MARGIN_T, p.y0 + PANEL_H - MARGIN_B);
        let _ = writeln!(
            self.body,
            r##"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
            r - l,
            b - t
        );
        self.text((l + r) / 2.0, p.y0 + 15.0, 13, "middle", title);
        self.text((l + r) / 2.0, b + 36.0, 11, "middle", xlabel);
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">{}</text>"#,
            p.x0 + 14.0,
            (t + b) / 2.0,
            p.x0 + 14.0,
            (t + b) / 2.0,
            esc(ylabel)
        );
        let ystep = nice_step(p.yr.1 - p.yr.0);
        let mut y = (p.yr.0 / ystep).ceil() * ystep;
        while y <= p.yr.1 + 1e-9 * ystep {
            let py = p.py(y);
            self.line((l - 4.0, py), (l, py), "#333", 1.0);
            self.text(l - 6.0, py + 4.0, 10, "end", &label(y, ystep));
            y += ystep;
        }
        match xticks {
            Some(ticks) => {
                for (x, s) in ticks {
                    let px = p.px(*x);
                    self.line((px, b), (px, b + 4.0), "#333", 1.0);
                    self.text(px, b + 16.0, 10, "middle", s);
                }
            }
            None => {
                let xstep = nice_step(p.xr.1 - p.xr.0);
                let mut x = (p.xr.0 / xstep).ceil() * xstep;
                while x <= p.xr.1 + 1e-9 * xstep {
                    let px = p.px(x);
                    self.line((px, b), (px, b + 4.0), "#333", 1.0);
                    self.text(px, b + 16.0, 10, "middle", &label(x, xstep));
                    x += xstep;
                }
            }
        }
    }

    fn marker(&mut self, x: f64, y: f64, m: Marker, color: &str) {
        let _ = match m {
            Marker::Circle => writeln!(
                self.body,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{color}"/>"#
            ),
            Marker::Square => writeln!(
                self.body,
                r#"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="none" stroke="{color}"/>"#,
                x - 3.0,
                y - 3.0
            ),
            Marker::Diamond => writeln!(
                self.body,
                r#"<polygon points="{x:.2},{:.2} {:.2},{y:.2} {x:.2},{:.2} {:.2},{y:.2}" fill="none" stroke="{color}"/>"#,
                y - 4.0,
                x + 4.0,
                y + 4.0,
                x - 4.0
            ),
            Marker::Star => {
                let mut pts = String::new();
                for k in 0..10 {
                    let rad = if k % 2 == 0 { 5.0 } else { 2.2 };
                    let a = std::f64::consts::PI * (k as f64 / 5.0 - 0.5);
                    let _ = write!(pts, "{:.2},{:.2} ", x + rad * a.cos(), y + rad * a.sin());
                }
                writeln!(
                    self.body,
                    r#"<polygon points="{}" fill="none" stroke="{color}"/>"#,
                    pts.trim_end()
                )
            }
        };
    }

    /// Stacked inside the top-left corner, or in one row above the plot area.
    fn legend(&mut self, p: &Panel, entries: &[(String, Marker, &str)], above: bool) {
        for (i, (name, m, color)) in entries.iter().enumerate() {
            let (x, y) = if above {
                (p.x0 + MARGIN_L + 110.0 * i as f64 + 6.0, p.y0 + MARGIN_T - 4.0)
            } else {
                (p.x0 + MARGIN_L + 8.0, p.y0 + MARGIN_T + 12.0 + 14.0 * i as f64)
            };
            self.marker(x, y - 3.0, *m, color);
            self.text(x + 9.0, y + 1.0, 10, "start", name);
        }
    }

    fn finish(self, caption: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}" font-family="sans-serif">"#,
            self.width, self.height, self.width, self.height
        );
        let _ = writeln!(
            s,
            r#"<rect width="{:.0}" height="{:.0}" fill="white"/>"#,
            self.width, self.height
        );
        s.push_str(&self.body);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            self.width / 2.0,
            self.height - 10.0,
            esc(caption)
        );
        s.push_str("</svg>\n");
        s
    }
}

fn comparisons(rows: &[CsvRow]) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for r in rows {
        if !seen.contains(&r.comparison) {
            seen.push(r.comparison.clone());
        }
    }
    seen
}

/// Bound and attained distance against the degree extreme difference.
fn scatter_figure(rows: &[CsvRow], caption: &str) -> String {
    let comps = comparisons(rows);
    let mut svg = Svg::new(2.0 * PANEL_W, 1);
    let panels: [Series; 2] = [
        ("(a) extended bound", |r| r.extended),
        ("(b) attained rho1 / c", |r| r.rho1_rescaled),
    ];
    let xr = range_of(rows.iter().map(|r| r.degree_extreme_difference.unwrap_or(0) as f64));
    for (col, (title, f)) in panels.iter().enumerate() {
        let p = Panel {
            x0: PANEL_W * col as f64,
            w: PANEL_W,
            y0: 0.0,
            xr,
            yr: range_of(rows.iter().map(f)),
        };
        svg.axes(&p, title, "degree extreme difference", "rescaled value", None);
        for r in rows {
            let i = comps.iter().position(|c| *c == r.comparison).unwrap_or(0);
            let x = r.degree_extreme_difference.unwrap_or(0) as f64;
            svg.marker(p.px(x), p.py(f(r)), MARKERS[i % 4], COLORS[i % 4]);
        }
        let entries: Vec<_> = comps
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), MARKERS[i % 4], COLORS[i % 4]))
            .collect();
        svg.legend(&p, &entries, false);
    }
    svg.finish(caption)
}

struct Quartiles {
    lo_whisker: f64,
    q1: f64,
    median: f64,
    q3: f64,
    hi_whisker: f64,
    outliers: Vec<f64>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos - pos.floor());
    if i + 1 < sorted.len() {
        sorted[i] + frac * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

fn quartiles(values: &[f64]) -> Option<Quartiles> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let (q1, q3) = (quantile(&v, 0.25), quantile(&v, 0.75));
    let fence = 1.5 * (q3 - q1);
    let inside: Vec<f64> = v
        .iter()
        .copied()
        .filter(|x| *x >= q1 - fence && *x <= q3 + fence)
        .collect();
    Some(Quartiles {
        lo_whisker: inside.first().copied().unwrap_or(q1),
        q1,
        median: median(&v),
        q3,
        hi_whisker: inside.last().copied().unwrap_or(q3),
        outliers: v.into_iter().filter(|x| *x < q1 - fence || *x > q3 + fence).collect(),
    })
}

/// Rows of comparisons, columns of bound, `c1` and `c0`, boxplots along the
/// grid. Supremum rows enter the bound column only, since their parameters
/// are arbitrary far-out representatives.
fn boxplot_figure(rows: &[CsvRow], axis: &str, caption: &str) -> String {
    let comps = comparisons(rows);
    let mut grid: Vec<usize> = rows.iter().map(|r| r.param).collect();
    grid.sort_unstable();
    grid.dedup();
    let columns: [Series; 3] = [
        ("bound", |r| r.extended),
        ("c1", |r| if r.supremum { f64::NAN } else { r.c1.unwrap_or(f64::NAN) }),
        ("c0", |r| if r.supremum { f64::NAN } else { r.c0.unwrap_or(f64::NAN) }),
    ];
    let mut svg = Svg::new(3.0 * PANEL_W, comps.len());
    let xticks: Vec<(f64, String)> = grid
        .iter()
        .enumerate()
        .map(|(i, g)| (i as f64, g.to_string()))
        .collect();
    for (ri, comp) in comps.iter().enumerate() {
        let sel: Vec<&CsvRow> = rows.iter().filter(|r| &r.comparison == comp).collect();
        for (ci, (name, f)) in columns.iter().enumerate() {
            let p = Panel {
                x0: PANEL_W * ci as f64,
                w: PANEL_W,
                y0: PANEL_H * ri as f64,
                xr: (-0.6, grid.len() as f64 - 0.4),
                yr: range_of(sel.iter().map(|r| f(r))),
            };
            svg.axes(&p, &format!("{comp}: {name}"), axis, name, Some(&xticks));
            for (gi, g) in grid.iter().enumerate() {
                let vals: Vec<f64> = sel.iter().filter(|r| r.param == *g).map(|r| f(r)).collect();
                let Some(q) = quartiles(&vals) else { continue };
                let x = gi as f64;
                let (xl, xr) = (p.px(x - 0.25), p.px(x + 0.25));
                let color = COLORS[ri % 4];
                svg.line((p.px(x), p.py(q.lo_whisker)), (p.px(x), p.py(q.q1)), color, 1.0);
                svg.line((p.px(x), p.py(q.q3)), (p.px(x), p.py(q.hi_whisker)), color, 1.0);
                let _ = writeln!(
                    svg.body,
                    r#"<rect x="{xl:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="{color}"/>"#,
                    p.py(q.q3),
                    xr - xl,
                    (p.py(q.q1) - p.py(q.q3)).max(0.5)
                );
                svg.line((xl, p.py(q.median)), (xr, p.py(q.median)), color, 2.0);
                for o in &q.outliers {
                    svg.marker(p.px(x), p.py(*o), Marker::Circle, color);
                }
            }
        }
    }
    svg.finish(caption)
}

/// Per-replicate standard bound, extended bound and attained distances.
fn attained_figure(rows: &[CsvRow], caption: &str) -> String {
    let comps = comparisons(rows);
    let mut svg = Svg::new(ATTAINED_W, comps.len());
    let series: [Series; 4] = [
        ("standard DK", |r| r.standard.unwrap_or(f64::NAN)),
        ("extended bound", |r| r.extended),
        ("rho2", |r| r.rho2),
        ("rho1 / c", |r| r.rho1_rescaled),
    ];
    for (ri, comp) in comps.iter().enumerate() {
        let mut sel: Vec<&CsvRow> = rows.iter().filter(|r| &r.comparison == comp).collect();
        sel.sort_by_key(|r| r.replicate);
        let yr = range_of(
            sel.iter()
                .flat_map(|r| series.iter().map(move |(_, f)| f(r)))
                .chain([0.0, 1.0]),
        );
        let p = Panel {
            x0: 0.0,
            w: ATTAINED_W,
            y0: PANEL_H * ri as f64,
            xr: range_of(sel.iter().map(|r| (r.replicate + 1) as f64)),
            yr,
        };
        svg.axes(&p, comp, "replicate", "rescaled value", None);
        svg.line((p.px(p.xr.0), p.py(1.0)), (p.px(p.xr.1), p.py(1.0)), "#999", 0.8);
        for (si, (_, f)) in series.iter().enumerate() {
            let pts: Vec<(f64, f64)> = sel
                .iter()
                .filter(|r| f(r).is_finite())
                .map(|r| (p.px((r.replicate + 1) as f64), p.py(f(r))))
                .collect();
            let mut path = String::new();
            for (x, y) in &pts {
                let _ = write!(path, "{x:.2},{y:.2} ");
            }
            let _ = writeln!(
                svg.body,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                path.trim_end(),
                COLORS[si]
            );
            for (x, y) in pts {
                svg.marker(x, y, MARKERS[si], COLORS[si]);
            }
        }
        let entries: Vec<_> = series
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.to_string(), MARKERS[i], COLORS[i]))
            .collect();
        svg.legend(&p, &entries, true);
    }
    svg.finish(caption)
}

/// Renders the figure for `figure` from CSV text. Fails on malformed input,
/// on rows from a different scenario, and when no successful rows remain.
pub fn render(figure: ScenarioId, csv_text: &str) -> anyhow::Result<String> {
    let rows = read_rows(csv_text)?;
    if let Some(other) = rows.iter().find(|r| r.scenario != figure) {
        bail!(
            "figure {} is drawn from {} results, but the CSV holds {}",
            figure.figure(),
            figure,
            other.scenario
        );
    }
    let ok: Vec<CsvRow> = rows.into_iter().filter(|r| r.ok).collect();
    if ok.is_empty() {
        bail!("no successful rows to plot");
    }
    let caption = format!("figure {}: {}", figure.figure(), figure);
    Ok(match figure {
        ScenarioId::GsoPairwise | ScenarioId::GenVsGso => scatter_figure(&ok, &caption),
        ScenarioId::GenAttainedVsBound | ScenarioId::PcaAttainedVsBound => attained_figure(&ok, &caption),
        _ => {
            let axis = if figure.family() == Family::Pca {
                figure.axis()
            } else {
                "n"
            };
            boxplot_figure(&ok, axis, &caption)
        }
    })
}

/// Reads `csv`, renders, and writes `out` only after rendering succeeded.
pub fn plot_file(figure: ScenarioId, csv: &Path, out: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(csv).with_context(|| format!("reading {}", csv.display()))?;
    let svg = render(figure, &text).with_context(|| format!("plotting {}", csv.display()))?;
    std::fs::write(out, svg).with_context(|| format!("writing {}", out.display()))
}
