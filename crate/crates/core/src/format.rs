//! Fixed 17-significant-digit decimal output for CSV and JSON.

use std::io;

/// Scientific notation with 17 significant digits, e.g. `3.9894228040143270e-1`.
pub fn fmt17(x: f64) -> String {
    // -0.0 would otherwise print with a sign
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// `serde_json` formatter writing every float through [`fmt17`].
#[derive(Debug, Default, Clone, Copy)]
pub struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serialize `value` as JSON with [`Sig17Formatter`].
pub fn to_json_string<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
