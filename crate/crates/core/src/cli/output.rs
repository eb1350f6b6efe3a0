//! JSON and CSV writers that print every float with 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON with floats as `{:.16e}`.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", float(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{}", float(f64::from(value)))
    }
}

pub fn float(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Writes `# <config>`, the header, and one row per sample.
pub fn write_csv<W: Write>(mut w: W, comment: &str, header: &[String], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(w, "# {comment}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row.iter().map(|v| float(*v)))?;
    }
    csv.flush()
}

/// A CSV written by [`write_csv`].
pub struct CsvTable {
    pub comment: Option<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_csv(text: &str) -> Result<CsvTable, String> {
    let comment = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .map(|c| c.trim().to_string());
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let row = rec
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|e| format!("row {}: {e}: {f:?}", k + 1)))
            .collect::<Result<Vec<f64>, String>>()?;
        rows.push(row);
    }
    Ok(CsvTable { comment, header, rows })
}
