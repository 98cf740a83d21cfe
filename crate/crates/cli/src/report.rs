//! Report records and serialization.
//!
//! JSON floats are printed with 17 significant digits (`{:.16e}`), which
//! uniquely identifies every f64, so a report parsed and re-serialized is
//! byte-identical. CSV favors readability at 12 significant digits with a
//! fixed, documented column order.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use skewbound::{BoundLadder, SkewMomentTable};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MomentEntry {
    pub order: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RowRecord {
    pub order: usize,
    pub determinant: f64,
    pub norm: f64,
    pub numerator: f64,
    pub term: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeometryRecord {
    pub arc_length: f64,
    pub angle: f64,
    pub direct_angle: f64,
    pub residual: f64,
    pub response: f64,
}

/// The machine-readable output of `compute`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportRecord {
    pub label: String,
    pub dim: usize,
    pub purity: f64,
    pub preshift: bool,
    pub requested_order: usize,
    pub truncation_order: usize,
    pub saturation: bool,
    pub bound: f64,
    pub moments: Vec<MomentEntry>,
    pub rows: Vec<RowRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub third_order_closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryRecord>,
}

impl ReportRecord {
    pub fn from_ladder(
        label: String,
        purity: f64,
        table: &SkewMomentTable,
        ladder: &BoundLadder,
        requested_order: usize,
    ) -> Self {
        let moments = table
            .orders()
            .map(|order| MomentEntry {
                order,
                value: table.moment(order).unwrap(),
            })
            .collect();
        let rows = ladder
            .rows
            .iter()
            .map(|r| RowRecord {
                order: r.order,
                determinant: r.determinant,
                norm: r.norm,
                numerator: r.numerator,
                term: r.term,
                cumulative: r.cumulative,
            })
            .collect();
        ReportRecord {
            label,
            dim: table.dim(),
            purity,
            preshift: table.preshift(),
            requested_order,
            truncation_order: ladder.truncation_order,
            saturation: ladder.saturation_flag,
            bound: ladder.bound(),
            moments,
            rows,
            third_order_closed_form: None,
            geometry: None,
        }
    }

    /// Fixed column order: label, dim, purity, n, D, N, U, term, cumulative.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,dim,purity,n,D,N,U,term,cumulative\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.label,
                self.dim,
                sig12(self.purity),
                row.order,
                sig12(row.determinant),
                sig12(row.norm),
                sig12(row.numerator),
                sig12(row.term),
                sig12(row.cumulative),
            ));
        }
        out
    }
}

/// 12 significant digits.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Compact JSON with 17-significant-digit floats.
struct Sci17;

impl Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Pretty JSON with the same float convention, for instance files.
struct PrettySci17<'a> {
    inner: PrettyFormatter<'a>,
}

impl Formatter for PrettySci17<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Sci17);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let formatter = PrettySci17 {
        inner: PrettyFormatter::new(),
    };
    let mut ser = Serializer::with_formatter(&mut out, formatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}
