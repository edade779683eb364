//! Byte-stable text serialization: JSON and CSV with 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{Error, Result};
use crate::perturbation::MapCell;
use crate::profile::Profile;

/// A float with 17 significant digits in exponent form; non-finite values
/// become `NaN`, `inf` or `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Pretty JSON formatter writing every float with 17 significant digits and
/// non-finite floats as `null`.
struct Sig17<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::with_indent(b"  ")));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Serialization(e.to_string()))
}

fn comment_block(out: &mut String, comments: &[String]) {
    for c in comments {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
}

/// Profile as CSV with columns `r,h,dh`, preceded by `#` comment lines.
pub fn profile_csv(p: &Profile, comments: &[String]) -> String {
    let mut out = String::with_capacity(64 * p.len());
    comment_block(&mut out, comments);
    out.push_str("r,h,dh\n");
    for ((r, h), dh) in p.grid.iter().zip(&p.h).zip(&p.dh) {
        out.push_str(&format!("{},{},{}\n", fmt_f64(*r), fmt_f64(*h), fmt_f64(*dh)));
    }
    out
}

/// Stability map as CSV, one row per cell.
pub fn map_csv(cells: &[MapCell], comments: &[String]) -> String {
    let mut out = String::new();
    comment_block(&mut out, comments);
    out.push_str("t,R,threshold_flag,delta_sign,R_threshold,delta_I_exact,class\n");
    for c in cells {
        let flag = match c.threshold_flag {
            crate::perturbation::ThresholdFlag::BelowThreshold => "below-threshold",
            crate::perturbation::ThresholdFlag::AboveThreshold => "above-threshold",
        };
        let class = match c.class {
            crate::perturbation::CellClass::ProvablyStable => "provably-stable",
            crate::perturbation::CellClass::UnstableWitnessed => "unstable-witnessed",
            crate::perturbation::CellClass::Undetermined => "undetermined",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(c.t),
            fmt_f64(c.radius),
            flag,
            c.delta_sign.map_or("error".to_string(), |s| s.to_string()),
            fmt_f64(c.r_threshold),
            c.delta.map_or(String::new(), fmt_f64),
            class
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Doc {
        x: f64,
        v: Vec<f64>,
        bad: f64,
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        let s = to_json(&Doc {
            x: 1.0 / 3.0,
            v: vec![1.0, 2.5],
            bad: f64::NAN,
        })
        .unwrap();
        assert!(s.contains("\"x\": 3.3333333333333331e-1"));
        assert!(s.contains("\"bad\": null"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(back["v"][1].as_f64().unwrap(), 2.5);
    }

    #[test]
    fn every_float_round_trips() {
        for &v in &[1e-300, 123_456_789.123_456_79, std::f64::consts::PI, -7.25e-9, 5e-324] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
