//! Canonical JSON output: sorted keys, compact layout, floats written with 17
//! significant digits so identical inputs give byte-identical reports.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::Value;

struct FixedFloat;

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_i64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: i64) -> io::Result<()> {
        CompactFormatter.write_i64(writer, value)
    }

    fn write_u64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: u64) -> io::Result<()> {
        CompactFormatter.write_u64(writer, value)
    }
}

/// Serializes a JSON value canonically. `serde_json::Map` is a BTreeMap in
/// this build, so object keys come out sorted.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat);
    value
        .serialize(&mut ser)
        .expect("serializing a Value into memory cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}
