//! CSV, JSON and SVG output for experiment records.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::experiment::ExperimentRecord;

pub const CSV_HEADER: &str = "level,volume,b1,b1_over_vol,rlength_norm,rlength_exact,thin_fraction,R,runtime_ms";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Failed rows keep the level and R and leave the measured cells empty.
pub fn to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        if r.error.is_some() {
            writeln!(out, "{},,,,,,,{},{}", csv_field(&r.level), r.r, r.runtime_ms).unwrap();
        } else {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv_field(&r.level),
                r.volume,
                r.b1,
                r.b1_over_vol,
                r.rlength_norm,
                r.rlength_exact,
                r.thin_fraction,
                r.r,
                r.runtime_ms
            )
            .unwrap();
        }
    }
    out
}

pub fn to_json(records: &[ExperimentRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<ExperimentRecord>> {
    serde_json::from_str(text)
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line chart against volume on a log axis: one series for b1/vol and one
/// rlength_norm series per threshold R.
pub fn to_svg(records: &[ExperimentRecord]) -> String {
    let (w, h, pad) = (720.0, 440.0, 60.0);
    let ok: Vec<&ExperimentRecord> = records.iter().filter(|r| r.error.is_none() && r.volume > 0.0).collect();
    let mut rs: Vec<f64> = Vec::new();
    for r in &ok {
        if !rs.contains(&r.r) {
            rs.push(r.r);
        }
    }
    // b1/vol once per level, taken from the first threshold's rows
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    if let Some(&r0) = rs.first() {
        series.push((
            "b1/vol".into(),
            ok.iter().filter(|r| r.r == r0).map(|r| (r.volume, r.b1_over_vol)).collect(),
        ));
    }
    for &rv in &rs {
        series.push((
            format!("rlength_norm R={rv}"),
            ok.iter().filter(|r| r.r == rv).map(|r| (r.volume, r.rlength_norm)).collect(),
        ));
    }
    let xs: Vec<f64> = ok.iter().map(|r| r.volume.log10()).collect();
    let (xmin, xmax) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (xmin, xmax) = if xs.is_empty() {
        (0.0, 1.0)
    } else if xmax - xmin < 1e-12 {
        (xmin - 0.5, xmax + 0.5)
    } else {
        (xmin, xmax)
    };
    let ymax = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let px = |v: f64| pad + (v.log10() - xmin) / (xmax - xmin) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - y / ymax * (h - 2.0 * pad);

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        h - pad,
        w - pad,
        h - pad
    )
    .unwrap();
    writeln!(out, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#, h - pad).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">volume (log scale)</text>"#,
        w / 2.0,
        h - 20.0
    )
    .unwrap();
    let mut decade = xmin.floor();
    while decade <= xmax.ceil() {
        let v = 10f64.powf(decade);
        if decade >= xmin - 1e-9 && decade <= xmax + 1e-9 {
            writeln!(
                out,
                r#"<text x="{:.2}" y="{}" font-size="10" text-anchor="middle">{v}</text>"#,
                px(v),
                h - pad + 14.0
            )
            .unwrap();
        }
        decade += 1.0;
    }
    writeln!(out, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{ymax:.4}</text>"#, pad - 4.0, pad + 4.0).unwrap();
    writeln!(out, r#"<text x="{}" y="{}" font-size="10" text-anchor="end">0</text>"#, pad - 4.0, h - pad).unwrap();
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        writeln!(
            out,
            r#"<polyline class="series" data-name="{name}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        )
        .unwrap();
        for &(x, y) in pts {
            writeln!(
                out,
                r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(x),
                py(y)
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" fill="{color}">{name}</text>"#,
            w - pad - 150.0,
            pad + 14.0 * i as f64
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Writes `<stem>.csv`, `<stem>.json` and `<stem>.svg` into `dir`.
pub fn emit_report(records: &[ExperimentRecord], dir: &Path, stem: &str) -> io::Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no records to report"));
    }
    fs::create_dir_all(dir)?;
    let files = [
        (format!("{stem}.csv"), to_csv(records)),
        (format!("{stem}.json"), to_json(records)),
        (format!("{stem}.svg"), to_svg(records)),
    ];
    let mut paths = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        paths.push(path);
    }
    Ok(paths)
}
