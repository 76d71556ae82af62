//! Deterministic SVG, CSV and JSON output.

use serde::Serialize;
use serde_json::{json, Value};

use crate::boundary::{Corner, DimensionEstimate, Side};
use crate::convex::{bbox, ConvexBody};
use crate::similitude::AddressWord;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "hullfix/1";

const VIEW: f64 = 1000.0;
const MARGIN: f64 = 0.05;

/// Wraps a serializable payload as `{"schema": …, "kind": …, "report": …}`.
pub fn json_report<T: Serialize>(kind: &str, payload: &T) -> Value {
    json!({
        "schema": SCHEMA,
        "kind": kind,
        "report": serde_json::to_value(payload).expect("report serializes"),
    })
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// `x` with 12 significant digits, without exponent for ordinary magnitudes.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn opt(x: Option<impl ToString>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One row per side: direction (radians mod π), exact rotation from the
/// base side, length, address, base side and endpoints.
pub fn sides_csv(sides: &[Side]) -> String {
    let rows = sides
        .iter()
        .map(|s| {
            vec![
                sig12(s.direction),
                s.rotation.clone().unwrap_or_default(),
                sig12(s.length),
                address(&s.address),
                opt(s.base_side()),
                sig12(s.start.x),
                sig12(s.start.y),
                sig12(s.end.x),
                sig12(s.end.y),
            ]
        })
        .collect();
    csv_table(
        &[
            "direction_rad",
            "rotation_exact",
            "length",
            "address",
            "base_side",
            "x0",
            "y0",
            "x1",
            "y1",
        ],
        rows,
    )
}

pub fn corners_csv(corners: &[Corner]) -> String {
    let rows = corners
        .iter()
        .map(|c| {
            let w = c.witness.as_ref();
            vec![
                sig12(c.point.x),
                sig12(c.point.y),
                sig12(c.interior_angle),
                sig12(c.turn),
                opt(w.map(|w| address(&w.prefix))),
                opt(w.map(|w| address(&w.period))),
                opt(w.map(|w| sig12(w.distance))),
            ]
        })
        .collect();
    csv_table(
        &[
            "x",
            "y",
            "interior_angle_rad",
            "turn_rad",
            "witness_prefix",
            "witness_period",
            "witness_distance",
        ],
        rows,
    )
}

pub fn dimension_csv(est: &DimensionEstimate) -> String {
    let rows = est
        .rows
        .iter()
        .map(|r| {
            vec![
                r.p.to_string(),
                r.component_count.to_string(),
                sig12(r.max_diameter),
                opt(r.exponent.map(sig12)),
                sig12(r.bound),
                r.within_bound.to_string(),
            ]
        })
        .collect();
    csv_table(&["p", "N_p", "d_p", "s_p", "bound", "within_bound"], rows)
}

fn address(w: &AddressWord) -> String {
    w.to_string()
}

/// Maps world coordinates into the fixed viewBox, y pointing up.
struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    pad_x: f64,
    pad_y: f64,
}

impl Frame {
    fn new(body: &ConvexBody) -> Self {
        let (lo, hi) = bbox(body.vertices());
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        let inner = VIEW * (1.0 - 2.0 * MARGIN);
        let span = w.max(h);
        let scale = if span > 0.0 { inner / span } else { 1.0 };
        Self {
            min_x: lo.x,
            max_y: hi.y,
            scale,
            pad_x: VIEW * MARGIN + (inner - w * scale) / 2.0,
            pad_y: VIEW * MARGIN + (inner - h * scale) / 2.0,
        }
    }

    fn path(&self, body: &ConvexBody) -> String {
        let mut d = String::new();
        for (k, v) in body.vertices().iter().enumerate() {
            let x = self.pad_x + (v.x - self.min_x) * self.scale;
            let y = self.pad_y + (self.max_y - v.y) * self.scale;
            d.push_str(&format!(
                "{}{:.3},{:.3} ",
                if k == 0 { 'M' } else { 'L' },
                x,
                y
            ));
        }
        d.push('Z');
        d
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// SVG 1.1 drawing of `hull`, optionally overlaid with image bodies colored
/// by the first letter of their address. `metadata` lands in `<desc>`.
pub fn hull_svg(
    hull: &ConvexBody,
    images: &[(AddressWord, ConvexBody)],
    metadata: &[(String, String)],
) -> String {
    let frame = Frame::new(hull);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{VIEW}\" height=\"{VIEW}\" viewBox=\"0 0 {VIEW} {VIEW}\">\n"
    ));
    if !metadata.is_empty() {
        s.push_str("<desc>");
        let lines: Vec<String> = metadata
            .iter()
            .map(|(k, v)| format!("{}={}", escape(k), escape(v)))
            .collect();
        s.push_str(&lines.join("; "));
        s.push_str("</desc>\n");
    }
    s.push_str(&format!(
        "<rect width=\"{VIEW}\" height=\"{VIEW}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<path id=\"hull\" d=\"{}\" fill=\"#dde6f0\" stroke=\"#1f3a5f\" stroke-width=\"2\"/>\n",
        frame.path(hull)
    ));
    for (w, body) in images {
        let first = w.indices().first().copied().unwrap_or(0);
        let hue = (first as f64 * 137.507_764) % 360.0;
        s.push_str(&format!(
            "<path data-address=\"{}\" d=\"{}\" fill=\"hsl({:.1},60%,60%)\" fill-opacity=\"0.45\" stroke=\"#333\" stroke-width=\"0.5\"/>\n",
            escape(&w.to_string()),
            frame.path(body),
            hue
        ));
    }
    s.push_str("</svg>\n");
    s
}
