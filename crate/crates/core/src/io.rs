//! Text formats: the JSON diagram document and fixed-precision reports.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::diagram::{CrossingAssignment, DegenerateOverlap, PolyDiagram};
use crate::error::{Result, RibbonError};
use crate::geom::Point2;
use crate::ribbon::{Fold, FoldingInfo};

/// On-disk form of a diagram, optionally with a width and fold choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub components: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub crossings: Vec<CrossingAssignment>,
    #[serde(default)]
    pub degenerate_overlaps: Vec<DegenerateOverlap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folds: Option<BTreeMap<usize, Fold>>,
}

impl DiagramDocument {
    pub fn new(k: &PolyDiagram, width: Option<f64>, folds: Option<&FoldingInfo>) -> Self {
        DiagramDocument {
            components: k.components().iter().map(|c| c.iter().map(|p| [p.x, p.y]).collect()).collect(),
            crossings: k.crossing_assignments().to_vec(),
            degenerate_overlaps: k.degenerate_overlaps().to_vec(),
            width,
            folds: folds.map(|f| f.iter().collect()),
        }
    }

    pub fn diagram(&self) -> Result<PolyDiagram> {
        let components = self.components.iter().map(|c| c.iter().map(|&p| Point2::from(p)).collect()).collect();
        PolyDiagram::new(components, self.crossings.clone(), self.degenerate_overlaps.clone())
    }

    pub fn folding(&self) -> Option<FoldingInfo> {
        self.folds.as_ref().map(|f| FoldingInfo::new(f.clone()))
    }
}

pub fn parse_diagram(text: &str) -> Result<DiagramDocument> {
    serde_json::from_str(text).map_err(|e| RibbonError::Parse(e.to_string()))
}

/// Writes the document with every number at 17 significant digits.
pub fn write_diagram(doc: &DiagramDocument) -> String {
    to_string_with(doc, FloatFormat::Significant17)
}

/// Serializes a report with fixed six-decimal numbers.
pub fn write_report<T: Serialize>(value: &T) -> String {
    to_string_with(value, FloatFormat::Fixed6)
}

#[derive(Debug, Clone, Copy)]
enum FloatFormat {
    Significant17,
    Fixed6,
}

fn to_string_with<T: Serialize>(value: &T, format: FloatFormat) -> String {
    let mut buf = Vec::new();
    let fmt = NumberFormatter { inner: PrettyFormatter::with_indent(b"  "), format };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

/// Pretty printer with controlled float formatting. Non-finite values are
/// written as `null`.
struct NumberFormatter<'a> {
    inner: PrettyFormatter<'a>,
    format: FloatFormat,
}

impl NumberFormatter<'_> {
    fn float<W: ?Sized + io::Write>(&self, w: &mut W, x: f64) -> io::Result<()> {
        if !x.is_finite() {
            return w.write_all(b"null");
        }
        let s = match self.format {
            FloatFormat::Significant17 => format!("{x:.16e}"),
            FloatFormat::Fixed6 => {
                let s = format!("{x:.6}");
                // avoid "-0.000000"
                if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
                    s.trim_start_matches('-').to_string()
                } else {
                    s
                }
            }
        };
        w.write_all(s.as_bytes())
    }
}

impl Formatter for NumberFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        self.float(w, x)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        self.float(w, x as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{pentagram_diagram, two_stick_unknot};
    use proptest::prelude::*;

    #[test]
    fn round_trip_exact() {
        let k = pentagram_diagram(1.0).unwrap();
        let mut f = FoldingInfo::uniform(&k, Fold::Over);
        f.set(3, Fold::Under);
        let doc = DiagramDocument::new(&k, Some(0.1), Some(&f));
        let text = write_diagram(&doc);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.diagram().unwrap(), k);
        assert_eq!(back.folding().unwrap(), f);
        assert!(text.contains("\"3\": \"under\""));
    }

    #[test]
    fn degenerate_overlaps_survive() {
        let (k, f) = two_stick_unknot(1.5).unwrap();
        let doc = DiagramDocument::new(&k, None, Some(&f));
        let back = parse_diagram(&write_diagram(&doc)).unwrap();
        assert_eq!(back.diagram().unwrap(), k);
        assert!(!write_diagram(&doc).contains("width"));
    }

    #[test]
    fn minimal_document() {
        let doc = parse_diagram(r#"{"components": [[[0,0],[1,0],[0,1]]]}"#).unwrap();
        assert_eq!(doc.diagram().unwrap().num_edges(), 3);
        assert!(doc.folding().is_none());
        assert!(matches!(parse_diagram("{"), Err(RibbonError::Parse(_))));
        assert!(matches!(parse_diagram(r#"{"components": [], "extra": 1}"#), Err(RibbonError::Parse(_))));
    }

    #[test]
    fn report_numbers_have_six_decimals() {
        #[derive(Serialize)]
        struct R {
            a: f64,
            b: Vec<f64>,
            c: f64,
        }
        let s = write_report(&R { a: 1.0 / 3f64.sqrt(), b: vec![24.0, -1e-9], c: f64::INFINITY });
        assert!(s.contains("\"a\": 0.577350"));
        assert!(s.contains("24.000000"));
        assert!(s.contains("0.000000") && !s.contains("-0.000000"));
        assert!(s.contains("\"c\": null"));
    }

    proptest! {
        #[test]
        fn coordinates_round_trip(xs in proptest::collection::vec(-1e6f64..1e6, 6)) {
            let pts = vec![
                Point2::new(xs[0], xs[1]),
                Point2::new(xs[2], xs[3]),
                Point2::new(xs[4], xs[5]),
            ];
            prop_assume!(pts[0] != pts[1] && pts[1] != pts[2] && pts[2] != pts[0]);
            let k = PolyDiagram::polygon(pts).unwrap();
            let doc = DiagramDocument::new(&k, Some(xs[0].abs() + 1.0), None);
            let back = parse_diagram(&write_diagram(&doc)).unwrap();
            prop_assert_eq!(back, doc);
        }
    }
}
