//! CSV with a `#` manifest header, and a small SVG line chart.

use std::fmt::Write as _;

use darts_core::optimizer::{DartboardSweep, Increase};
use darts_core::GCurve;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Reproducibility header written above every CSV. Wall time goes to stderr only.
#[derive(Clone, Debug, Default)]
pub struct Manifest {
    pub command: String,
    pub seed: Option<u64>,
    pub engine: String,
    pub entries: Vec<(String, String)>,
    pub digests: Vec<(String, String)>,
}

impl Manifest {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# version: darts-cli {} darts-core {}", env!("CARGO_PKG_VERSION"), darts_core::VERSION);
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "# seed: {seed}");
        }
        let _ = writeln!(s, "# engine: {}", self.engine);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "# {k}: {v}");
        }
        for (name, hex) in &self.digests {
            let _ = writeln!(s, "# sha256 {name}: {hex}");
        }
        s
    }
}

/// Renders a command line for the manifest, quoting words that need it.
pub fn command_line(args: &[String]) -> String {
    args.iter()
        .map(|a| {
            if !a.is_empty() && a.chars().all(|c| c.is_ascii_alphanumeric() || "-_.,=/:+".contains(c)) {
                a.clone()
            } else {
                format!("'{}'", a.replace('\'', "'\\''"))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn increases_entry(inc: &[Increase]) -> String {
    if inc.is_empty() {
        return "none".into();
    }
    inc.iter().map(|i| format!("({},{},{})", i.d_from, i.d_to, i.magnitude)).collect::<Vec<_>>().join(";")
}

/// Shortest round-trip decimal, switching to exponent form for tiny magnitudes.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() < 1e-4 && x.is_finite() {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

/// Rows of `d,g,aim_0[,aim_1],err_est,n_evals,status`.
pub fn g_curve_rows(curve: &GCurve, dim: usize) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = if dim == 2 {
        vec!["d", "g", "aim_0", "aim_1", "err_est", "n_evals", "status"]
    } else {
        vec!["d", "g", "aim_0", "err_est", "n_evals", "status"]
    };
    let rows = curve
        .d_grid
        .iter()
        .zip(&curve.points)
        .map(|(d, p)| {
            let mut r = vec![num(*d), num(p.g), num(p.aim.x)];
            if dim == 2 {
                r.push(num(p.aim.y));
            }
            r.extend([num(p.err_est), p.n_evals.to_string(), p.status.name().to_string()]);
            r
        })
        .collect();
    (header, rows)
}

/// Rows of `radius_mm,best_score,aim_x_mm,aim_y_mm,sector_label,err_est`.
pub fn sweep_rows(s: &DartboardSweep) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let header = vec!["radius_mm", "best_score", "aim_x_mm", "aim_y_mm", "sector_label", "err_est"];
    let rows = s
        .curve
        .d_grid
        .iter()
        .zip(&s.curve.points)
        .zip(&s.sectors)
        .map(|((r, p), label)| vec![num(*r), num(p.g), num(p.aim.x), num(p.aim.y), label.to_string(), num(p.err_est)])
        .collect();
    (header, rows)
}

pub fn csv(manifest: &Manifest, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = manifest.render();
    s.push_str(&header.join(","));
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// A coordinate with its CSV text.
pub type Tick = (f64, String);

/// Line chart of `y` against `x`, with the points at `marked` indices circled.
/// Axis labels reuse the caller's text for the extreme values.
pub struct Chart<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x: Vec<Tick>,
    pub y: Vec<Tick>,
    pub marked: Vec<usize>,
}

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn extremes(v: &[Tick]) -> Option<(&Tick, &Tick)> {
    let lo = v.iter().min_by(|a, b| a.0.total_cmp(&b.0))?;
    let hi = v.iter().max_by(|a, b| a.0.total_cmp(&b.0))?;
    Some((lo, hi))
}

pub fn svg(c: &Chart) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#, W / 2.0, escape(c.title));
    let (x0, y0, x1, y1) = (LEFT, TOP, W - RIGHT, H - BOTTOM);
    let _ = writeln!(s, r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#, x1 - x0, y1 - y0);
    let (Some((xlo, xhi)), Some((ylo, yhi))) = (extremes(&c.x), extremes(&c.y)) else {
        s.push_str("</svg>\n");
        return s;
    };
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (xs, ys) = (span(xlo.0, xhi.0), span(ylo.0, yhi.0));
    let px = |x: f64| x0 + (x - xlo.0) / xs * (x1 - x0);
    let py = |y: f64| y1 - (y - ylo.0) / ys * (y1 - y0);
    let pts: Vec<String> = c.x.iter().zip(&c.y).map(|(x, y)| format!("{:.2},{:.2}", px(x.0), py(y.0))).collect();
    let _ = writeln!(s, r#"<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
    for &i in &c.marked {
        if let (Some(x), Some(y)) = (c.x.get(i), c.y.get(i)) {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="7" fill="none" stroke="crimson" stroke-width="2"/>"#, px(x.0), py(y.0));
        }
    }
    let font = r#"font-family="sans-serif" font-size="12""#;
    let _ = writeln!(s, r#"<text x="{x0}" y="{}" {font}>{}</text>"#, y1 + 18.0, escape(&xlo.1));
    let _ = writeln!(s, r#"<text x="{x1}" y="{}" text-anchor="end" {font}>{}</text>"#, y1 + 18.0, escape(&xhi.1));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" {font}>{}</text>"#, x0 - 6.0, y1, escape(&ylo.1));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end" {font}>{}</text>"#, x0 - 6.0, y0 + 10.0, escape(&yhi.1));
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" {font}>{}</text>"#, (x0 + x1) / 2.0, H - 14.0, escape(c.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})" {font}>{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(c.y_label)
    );
    s.push_str("</svg>\n");
    s
}

/// Indices of the upper end of each increase.
pub fn increase_marks(grid: &[f64], inc: &[Increase]) -> Vec<usize> {
    inc.iter().filter_map(|i| grid.iter().position(|&d| d == i.d_to)).collect()
}
