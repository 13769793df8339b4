//! Curve files: CSV, JSON and SVG.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use desitter_core::{FramedSample, Vec4f};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, Result};
use crate::projection::ProjectionSpec;

pub const CSV_HEADER: [&str; 8] = ["t", "s", "x1", "x2", "x3", "x4", "kappa_g", "tau_g"];
/// Side of the square SVG view box.
pub const SVG_SIZE: f64 = 800.0;
/// Margin around the autoscaled drawing, as a fraction of the view box.
pub const SVG_MARGIN: f64 = 0.05;
/// Largest `|⟨x,x⟩ − 1|` accepted for exported points.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// One exported sample. Curvatures are absent for curves that are only
/// evaluated, not framed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub t: f64,
    /// Arc length, when the curve is timelike and was framed.
    pub s: Option<f64>,
    pub x: [f64; 4],
    pub kappa_g: Option<f64>,
    pub tau_g: Option<f64>,
}

impl CurveRecord {
    pub fn point(t: f64, x: Vec4f) -> Self {
        CurveRecord { t, s: None, x: x.0, kappa_g: None, tau_g: None }
    }

    pub fn vec(&self) -> Vec4f {
        Vec4f::from_f64(self.x)
    }
}

impl From<&FramedSample<f64>> for CurveRecord {
    fn from(f: &FramedSample<f64>) -> Self {
        CurveRecord { t: f.t, s: Some(f.s), x: f.alpha.0, kappa_g: Some(f.kappa_g), tau_g: Some(f.tau_g) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

/// Free-form description stored with JSON exports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub name: String,
    pub parameter: String,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonCurve {
    meta: Meta,
    samples: Vec<CurveRecord>,
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

/// Fails on the first record off S³₁.
pub fn check_membership(records: &[CurveRecord]) -> Result<()> {
    for (row, r) in records.iter().enumerate() {
        let dev = (r.vec().norm_sq() - 1.0).abs();
        if !(dev <= MEMBERSHIP_TOL) {
            return Err(CliError::Record { row: row + 1, message: format!("off S³₁ by {dev:e}") });
        }
    }
    Ok(())
}

pub fn write_csv<W: Write>(out: W, records: &[CurveRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let row = [
            number(r.t),
            optional(r.s),
            number(r.x[0]),
            number(r.x[1]),
            number(r.x[2]),
            number(r.x[3]),
            optional(r.kappa_g),
            optional(r.tau_g),
        ];
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<CurveRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let index = |name: &str| headers.iter().position(|h| h.trim() == name);
    let required = ["t", "x1", "x2", "x3", "x4"];
    let mut cols = [0usize; 5];
    for (c, name) in cols.iter_mut().zip(required) {
        *c = index(name).ok_or_else(|| CliError::Record { row: 0, message: format!("missing column {name}") })?;
    }
    let (s_col, k_col, tau_col) = (index("s"), index("kappa_g"), index("tau_g"));
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<Option<f64>> {
            let raw = rec.get(i).unwrap_or("").trim();
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse().map(Some).map_err(|e| CliError::Record { row: row + 1, message: format!("{raw:?}: {e}") })
        };
        let need = |i: usize| -> Result<f64> {
            field(i)?.ok_or_else(|| CliError::Record { row: row + 1, message: "empty required field".into() })
        };
        let t = need(cols[0])?;
        let x = [need(cols[1])?, need(cols[2])?, need(cols[3])?, need(cols[4])?];
        let s = s_col.map(field).transpose()?.flatten();
        let kappa_g = k_col.map(field).transpose()?.flatten();
        let tau_g = tau_col.map(field).transpose()?.flatten();
        out.push(CurveRecord { t, s, x, kappa_g, tau_g });
    }
    Ok(out)
}

pub fn write_json<W: Write>(out: W, meta: &Meta, records: &[CurveRecord]) -> Result<()> {
    let doc = JsonCurve { meta: Meta { count: records.len(), ..meta.clone() }, samples: records.to_vec() };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn read_json<R: std::io::Read>(input: R) -> Result<(Meta, Vec<CurveRecord>)> {
    let doc: JsonCurve = serde_json::from_reader(input)?;
    Ok((doc.meta, doc.samples))
}

/// Single polyline of the first two projected coordinates, scaled uniformly
/// into the view box with a 5% margin. The vertical axis points up.
pub fn svg_polyline(records: &[CurveRecord], projection: &ProjectionSpec) -> Result<String> {
    let pts = records.iter().map(|r| projection.project(&r.vec()).map(|p| [p[0], p[1]])).collect::<Result<Vec<_>>>()?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = if pts.is_empty() { 1.0 } else { (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE) };
    let inner = SVG_SIZE * (1.0 - 2.0 * SVG_MARGIN);
    let scale = inner / span;
    let offset = [
        SVG_SIZE * SVG_MARGIN + 0.5 * (inner - scale * (hi[0] - lo[0])),
        SVG_SIZE * SVG_MARGIN + 0.5 * (inner - scale * (hi[1] - lo[1])),
    ];
    let mut coords = String::new();
    for (i, p) in pts.iter().enumerate() {
        let x = offset[0] + scale * (p[0] - lo[0]);
        let y = SVG_SIZE - (offset[1] + scale * (p[1] - lo[1]));
        if i > 0 {
            coords.push(' ');
        }
        write!(coords, "{x:.4},{y:.4}").unwrap();
    }
    Ok(format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"{coords}\"/>\n\
         </svg>\n",
        size = SVG_SIZE
    ))
}

/// Writes `records` to `path` after checking S³₁ membership.
pub fn export_curve(
    records: &[CurveRecord],
    path: &Path,
    format: Format,
    meta: &Meta,
    projection: &ProjectionSpec,
) -> Result<()> {
    check_membership(records)?;
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(&mut out, records)?,
        Format::Json => write_json(&mut out, meta, records)?,
        Format::Svg => out.write_all(svg_polyline(records, projection)?.as_bytes()).map_err(io_err(path))?,
    }
    out.flush().map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(k: usize) -> Vec<CurveRecord> {
        (0..k)
            .map(|i| {
                let t = i as f64 * 0.1;
                CurveRecord {
                    t,
                    s: Some(t),
                    x: [t.sinh(), 0.0, t.cosh(), 0.0],
                    kappa_g: Some(1.0 / 3.0),
                    tau_g: if i == 1 { None } else { Some(-t) },
                }
            })
            .collect()
    }

    #[test]
    fn csv_line_counts() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &sample(3)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), "t,s,x1,x2,x3,x4,kappa_g,tau_g");
        assert!(text.lines().all(|l| l.split(',').count() == 8));

        let mut empty = Vec::new();
        write_csv(&mut empty, &[]).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), "t,s,x1,x2,x3,x4,kappa_g,tau_g\n");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let recs = sample(5);
        let mut buf = Vec::new();
        write_csv(&mut buf, &recs).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn json_shape() {
        let mut buf = Vec::new();
        write_json(&mut buf, &Meta { name: "x".into(), ..Meta::default() }, &[]).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["samples"], serde_json::json!([]));
        assert_eq!(v["meta"]["count"], 0);
        let mut buf = Vec::new();
        write_json(&mut buf, &Meta::default(), &sample(4)).unwrap();
        let (meta, back) = read_json(buf.as_slice()).unwrap();
        assert_eq!(meta.count, 4);
        assert_eq!(back, sample(4));
    }

    #[test]
    fn svg_polyline_has_every_point_inside() {
        let recs = sample(30);
        let svg = svg_polyline(&recs, &ProjectionSpec::default()).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let line = doc.descendants().find(|n| n.has_tag_name("polyline")).unwrap();
        let pts: Vec<(f64, f64)> = line
            .attribute("points")
            .unwrap()
            .split(' ')
            .map(|p| {
                let (x, y) = p.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        assert_eq!(pts.len(), 30);
        for (x, y) in pts {
            assert!((40.0..=760.0).contains(&x) && (40.0..=760.0).contains(&y));
        }
    }

    #[test]
    fn off_sphere_points_are_refused() {
        let mut recs = sample(3);
        recs[2].x[1] = 0.1;
        assert!(matches!(check_membership(&recs), Err(CliError::Record { row: 3, .. })));
    }

    proptest! {
        #[test]
        fn csv_is_lossless(vals in prop::collection::vec(prop::array::uniform4(-1e6f64..1e6), 0..20)) {
            let recs: Vec<CurveRecord> = vals
                .iter()
                .map(|v| CurveRecord { t: v[0], s: Some(v[1]), x: *v, kappa_g: Some(v[2] / 7.0), tau_g: Some(v[3] * 1e-300) })
                .collect();
            let mut buf = Vec::new();
            write_csv(&mut buf, &recs).unwrap();
            prop_assert_eq!(read_csv(buf.as_slice()).unwrap(), recs);
        }
    }
}
