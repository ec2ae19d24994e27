//! JSON curve files.
//!
//! ```text
//! {"kind":"polyline","closed":true,"points":[[x,y,z],...]}
//! {"kind":"piecewise","closed":true,"segments":[
//!     {"type":"line","a":[..],"b":[..]},
//!     {"type":"arc","center":[..],"radius":r,"u":[..],"v":[..],"theta0":t0,"theta1":t1},
//!     {"type":"helix","origin":[..],"axis":[..],"radius":r,"pitch":p,"theta0":t0,"theta1":t1}]}
//! ```
//!
//! Reals are written with 17 significant digits so files round-trip
//! bit-for-bit.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::curve::{Curve, PiecewiseCurve, PolyCurve, Segment};
use crate::error::{Error, Result};
use crate::geom::{Direction3, Point3};

#[derive(Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum CurveDoc {
    #[serde(rename = "polyline")]
    Polyline { closed: bool, points: Vec<[f64; 3]> },
    #[serde(rename = "piecewise")]
    Piecewise { closed: bool, segments: Vec<SegmentDoc> },
}

#[derive(Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
enum SegmentDoc {
    #[serde(rename = "line")]
    Line { a: [f64; 3], b: [f64; 3] },
    #[serde(rename = "arc")]
    Arc {
        center: [f64; 3],
        radius: f64,
        u: [f64; 3],
        v: [f64; 3],
        theta0: f64,
        theta1: f64,
    },
    #[serde(rename = "helix")]
    Helix {
        origin: [f64; 3],
        axis: [f64; 3],
        radius: f64,
        pitch: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl SegmentDoc {
    fn into_segment(self) -> Result<Segment> {
        match self {
            SegmentDoc::Line { a, b } => {
                let s = Segment::line(a.into(), b.into());
                s.validate()?;
                Ok(s)
            }
            SegmentDoc::Arc {
                center,
                radius,
                u,
                v,
                theta0,
                theta1,
            } => Segment::arc(center.into(), radius, u.into(), v.into(), theta0, theta1),
            SegmentDoc::Helix {
                origin,
                axis,
                radius,
                pitch,
                theta0,
                theta1,
            } => {
                // Accept axes that are unit only to file precision.
                let axis = Direction3::new(axis.into()).or_else(|_| Direction3::normalize(axis.into()))?;
                Segment::helix(origin.into(), axis, radius, pitch, theta0, theta1)
            }
        }
    }
}

/// Parse a curve document. Syntax errors carry the line and column.
pub fn curve_from_json(text: &str) -> Result<Curve> {
    let doc: CurveDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match doc {
        CurveDoc::Polyline { closed, points } => Ok(Curve::Poly(PolyCurve::new(
            points.into_iter().map(Point3::from).collect(),
            closed,
        )?)),
        CurveDoc::Piecewise { closed, segments } => {
            let segs = segments
                .into_iter()
                .map(SegmentDoc::into_segment)
                .collect::<Result<Vec<_>>>()?;
            Ok(Curve::Piecewise(PiecewiseCurve::new(segs, closed)?))
        }
    }
}

fn real(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

fn point(out: &mut String, p: Point3) {
    out.push('[');
    real(out, p.x);
    out.push(',');
    real(out, p.y);
    out.push(',');
    real(out, p.z);
    out.push(']');
}

fn field_point(out: &mut String, name: &str, p: Point3) {
    let _ = write!(out, "\"{name}\":");
    point(out, p);
}

fn field_real(out: &mut String, name: &str, x: f64) {
    let _ = write!(out, "\"{name}\":");
    real(out, x);
}

fn segment_json(out: &mut String, s: &Segment) {
    match *s {
        Segment::Line { a, b } => {
            out.push_str("{\"type\":\"line\",");
            field_point(out, "a", a);
            out.push(',');
            field_point(out, "b", b);
        }
        Segment::Arc {
            center,
            radius,
            u,
            v,
            theta0,
            theta1,
        } => {
            out.push_str("{\"type\":\"arc\",");
            field_point(out, "center", center);
            out.push(',');
            field_real(out, "radius", radius);
            out.push(',');
            field_point(out, "u", u);
            out.push(',');
            field_point(out, "v", v);
            out.push(',');
            field_real(out, "theta0", theta0);
            out.push(',');
            field_real(out, "theta1", theta1);
        }
        Segment::Helix {
            origin,
            axis,
            radius,
            pitch,
            theta0,
            theta1,
        } => {
            out.push_str("{\"type\":\"helix\",");
            field_point(out, "origin", origin);
            out.push(',');
            field_point(out, "axis", axis.vec());
            out.push(',');
            field_real(out, "radius", radius);
            out.push(',');
            field_real(out, "pitch", pitch);
            out.push(',');
            field_real(out, "theta0", theta0);
            out.push(',');
            field_real(out, "theta1", theta1);
        }
    }
    out.push('}');
}

pub fn polyline_to_json(c: &PolyCurve) -> String {
    let mut out = format!("{{\"kind\":\"polyline\",\"closed\":{},\"points\":[", c.is_closed());
    for (i, &p) in c.vertices().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        point(&mut out, p);
    }
    out.push_str("]}");
    out
}

pub fn piecewise_to_json(c: &PiecewiseCurve) -> String {
    let mut out = format!("{{\"kind\":\"piecewise\",\"closed\":{},\"segments\":[", c.is_closed());
    for (i, s) in c.segments().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        segment_json(&mut out, s);
    }
    out.push_str("]}");
    out
}

pub fn curve_to_json(c: &Curve) -> String {
    match c {
        Curve::Poly(p) => polyline_to_json(p),
        Curve::Piecewise(p) => piecewise_to_json(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_polyline() {
        let c = curve_from_json(r#"{"kind":"polyline","closed":true,"points":[[0,0,0],[1,0,0],[0,1,0]]}"#).unwrap();
        match c {
            Curve::Poly(p) => {
                assert!(p.is_closed());
                assert_eq!(p.vertex_count(), 3);
            }
            _ => panic!("expected polyline"),
        }
    }

    #[test]
    fn parse_error_has_line() {
        let err = curve_from_json("{\"kind\":\"polyline\",\n\"closed\":tru}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_kind_and_bad_helix() {
        assert!(curve_from_json(r#"{"kind":"spline","closed":true}"#).is_err());
        let bad = r#"{"kind":"piecewise","closed":false,"segments":[{"type":"helix","origin":[0,0,0],"axis":[0,0,1],"radius":-1,"pitch":0,"theta0":0,"theta1":1}]}"#;
        assert!(matches!(curve_from_json(bad), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn reals_have_seventeen_digits() {
        let c = PolyCurve::open(vec![Point3::new(0.5, 0.0, 1.0), Point3::new(1.0, 2.0, 3.0)]).unwrap();
        let s = polyline_to_json(&c);
        assert!(s.contains("5.0000000000000000e-1"), "{s}");
    }

    proptest! {
        #[test]
        fn polyline_roundtrip_is_bit_exact(
            pts in prop::collection::vec(prop::array::uniform3(-1e6f64..1e6), 2..20),
            closed in any::<bool>(),
        ) {
            let c = PolyCurve::new(pts.into_iter().map(Point3::from).collect(), closed).unwrap();
            let back = curve_from_json(&polyline_to_json(&c)).unwrap();
            prop_assert_eq!(back, Curve::Poly(c));
        }
    }
}
