//! JSON serialization with floats written at 17 significant digits
//! (`{:.16e}`), so artifact bytes are reproducible and every f64
//! round-trips exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::Result;

#[derive(Default)]
pub struct Sig17Formatter;

impl Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits utf-8"))
}
