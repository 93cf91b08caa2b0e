//! CSV rows and SVG plots for report subcommands.

use std::fmt::Write;

use crate::asymptotics::MainTermReport;
use crate::census::{CensusReport, ExpSumReport};

/// Bumped whenever a CSV header changes.
pub const REPORT_SCHEMA: u32 = 1;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::from("schema_version,");
    out.push_str(&header.join(","));
    out.push('\n');
    for r in rows {
        out.push_str(&REPORT_SCHEMA.to_string());
        out.push(',');
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

pub fn census_csv(r: &CensusReport) -> String {
    csv(
        &[
            "k", "a_re", "a_im", "t", "u", "halfwidth", "n1", "n2", "n3", "total", "main_total",
            "remainder_ratio", "boundary", "beta_excess",
        ],
        &[vec![
            r.k.to_string(),
            num(r.a.re),
            num(r.a.im),
            num(r.t),
            num(r.u),
            num(r.halfwidth),
            r.n1.to_string(),
            r.n2.to_string(),
            r.n3.to_string(),
            r.total.to_string(),
            num(r.main_total),
            num(r.remainder_ratio),
            r.boundary.len().to_string(),
            num(r.beta_excess),
        ]],
    )
}

pub fn expsum_csv(r: &ExpSumReport) -> String {
    csv(
        &[
            "k", "a_re", "a_im", "x", "t", "observed_re", "observed_im", "predicted_re", "predicted_im",
            "remainder_ratio",
        ],
        &[vec![
            r.k.to_string(),
            num(r.a.re),
            num(r.a.im),
            num(r.x.value()),
            num(r.t),
            num(r.observed.re),
            num(r.observed.im),
            num(r.predicted.re),
            num(r.predicted.im),
            num(r.remainder_ratio),
        ]],
    )
}

/// One row per (T, U, report); U is blank for cumulative quantities.
pub fn main_term_csv(k: u32, a_re: f64, a_im: f64, rows: &[(f64, Option<f64>, MainTermReport)]) -> String {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|(t, u, r)| {
            vec![
                k.to_string(),
                num(a_re),
                num(a_im),
                num(*t),
                u.map(num).unwrap_or_default(),
                num(r.observed.re),
                num(r.observed.im),
                num(r.predicted.re),
                num(r.predicted.im),
                num(r.normalizer),
                num(r.ratio),
            ]
        })
        .collect();
    csv(
        &[
            "k", "a_re", "a_im", "t", "u", "observed_re", "observed_im", "predicted_re", "predicted_im",
            "normalizer", "ratio",
        ],
        &rows,
    )
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

fn frame(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 12.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (v, px, py, anchor) in [
        (x.0, PAD, H - PAD + 16.0, "middle"),
        (x.1, W - PAD, H - PAD + 16.0, "middle"),
        (y.0, PAD - 4.0, H - PAD, "end"),
        (y.1, PAD - 4.0, PAD + 4.0, "end"),
    ] {
        let _ = writeln!(s, r#"<text x="{px}" y="{py}" text-anchor="{anchor}">{}</text>"#, tick(v));
    }
    s
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn scale(v: f64, (lo, hi): (f64, f64), p0: f64, p1: f64) -> f64 {
    if hi > lo {
        p0 + (v - lo) / (hi - lo) * (p1 - p0)
    } else {
        (p0 + p1) / 2.0
    }
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Histogram of β with the central band shaded.
pub fn beta_histogram_svg(title: &str, betas: &[f64], bins: usize, band: (f64, f64)) -> String {
    let bins = bins.max(1);
    let (mut lo, mut hi) = range(betas.iter().copied().chain([band.0, band.1]));
    if hi <= lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &b in betas {
        let i = (((b - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut s = frame(title, "beta", "count", (lo, hi), (0.0, top));
    let (bx0, bx1) = (scale(band.0, (lo, hi), PAD, W - PAD), scale(band.1, (lo, hi), PAD, W - PAD));
    let _ = writeln!(
        s,
        r##"<rect x="{bx0:.2}" y="{PAD}" width="{:.2}" height="{:.2}" fill="#dde8f6"/>"##,
        bx1 - bx0,
        H - 2.0 * PAD
    );
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let x0 = scale(lo + i as f64 * width, (lo, hi), PAD, W - PAD);
        let x1 = scale(lo + (i + 1) as f64 * width, (lo, hi), PAD, W - PAD);
        let y = scale(c as f64, (0.0, top), H - PAD, PAD);
        let _ = writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#3b6ea8"/>"##,
            (x1 - x0).max(0.5),
            H - PAD - y
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Polyline of (x, y) samples, e.g. a remainder ratio against T.
pub fn curve_svg(title: &str, x_label: &str, y_label: &str, samples: &[(f64, f64)]) -> String {
    let xr = range(samples.iter().map(|p| p.0));
    let yr = range(samples.iter().map(|p| p.1).chain([0.0]));
    let (xr, yr) = if samples.is_empty() { ((0.0, 1.0), (0.0, 1.0)) } else { (xr, yr) };
    let mut s = frame(title, x_label, y_label, xr, yr);
    let pts: Vec<String> = samples
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", scale(x, xr, PAD, W - PAD), scale(y, yr, H - PAD, PAD)))
        .collect();
    if !pts.is_empty() {
        let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#a83b3b"/>"##, pts.join(" "));
    }
    s.push_str("</svg>\n");
    s
}
