//! Table emission in CSV and JSON.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::Format;

/// Formats `x` like C's `%g`: 6 significant digits, trailing zeros removed,
/// scientific notation below 1e-4 and from 1e6 upwards.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A rectangular table: header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()
    }
}

/// Where a command's output goes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
}

impl Sink {
    /// `-` selects stdout; otherwise `explicit`, or `<dir>/<stem>.<ext>` when
    /// a default file name applies, or stdout.
    pub fn resolve(
        explicit: Option<&Path>,
        dir: Option<&Path>,
        default_stem: Option<&str>,
        format: Format,
    ) -> Self {
        match (explicit, default_stem) {
            (Some(p), _) if p == Path::new("-") => Sink::Stdout,
            (Some(p), _) => Sink::File(p.to_path_buf()),
            (None, Some(stem)) => {
                let dir = dir.unwrap_or_else(|| Path::new("."));
                Sink::File(dir.join(format!("{stem}.{}", format.extension())))
            }
            (None, None) => Sink::Stdout,
        }
    }

    pub fn open(&self) -> io::Result<Box<dyn Write>> {
        match self {
            Sink::Stdout => Ok(Box::new(io::stdout().lock())),
            Sink::File(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(parent)?;
                }
                Ok(Box::new(BufWriter::new(File::create(p)?)))
            }
        }
    }
}

pub fn emit<T: Serialize>(sink: &Sink, format: Format, table: &Table, json: &T) -> io::Result<()> {
    let mut w = sink.open()?;
    match format {
        Format::Csv => table.write_csv(&mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, json)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (15.9387416453, "15.9387"),
            (5.5938658035, "5.59387"),
            (-91.94533615078, "-91.9453"),
            (0.0036256558, "0.00362566"),
            (2.566070109474755e-7, "2.56607e-07"),
            (1234567.0, "1.23457e+06"),
            (999999.5, "1e+06"),
            (100000.0, "100000"),
            (0.0001, "0.0001"),
            (0.5, "0.5"),
            (80.0, "80"),
            (0.0, "0"),
            (1e-300, "1e-300"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }

    #[test]
    fn sentinels() {
        assert_eq!(fmt_g(f64::NAN), "nan");
        assert_eq!(fmt_g(f64::INFINITY), "inf");
        assert_eq!(fmt_g(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn six_significant_digits_round_trip() {
        for x in [1.0 / 3.0, -123.456789, 9.87654321e-9, 6.02214076e23] {
            let back: f64 = fmt_g(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-6 * x.abs(), "{x} -> {back}");
        }
    }

    #[test]
    fn sink_resolution() {
        let dir = Path::new("/tmp/out");
        assert_eq!(
            Sink::resolve(None, Some(dir), Some("sweep-d1"), Format::Json),
            Sink::File(dir.join("sweep-d1.json"))
        );
        assert_eq!(
            Sink::resolve(Some(Path::new("-")), Some(dir), Some("x"), Format::Csv),
            Sink::Stdout
        );
        assert_eq!(
            Sink::resolve(None, Some(dir), None, Format::Csv),
            Sink::Stdout
        );
        assert_eq!(
            Sink::resolve(None, None, Some("max-dsr"), Format::Csv),
            Sink::File(PathBuf::from("./max-dsr.csv"))
        );
    }
}
