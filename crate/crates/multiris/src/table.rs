//! CSV tables.
//!
//! Floats are written as `{:.16e}` (17 significant digits, `.` separator,
//! lowercase `e`), which round-trips every finite `f64` and does not depend
//! on the locale. Metadata goes into leading `#` lines; the data section is
//! plain RFC 4180 CSV with a header row.

use std::io::{self, BufRead, Write};

use multiris_core::montecarlo::{DeltaEstimate, GainStats};

/// Column order of the sweep table.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "L",
    "N_I",
    "trials",
    "mean_physics",
    "se_physics",
    "theory_physics",
    "gain_conventional",
    "delta_empirical",
    "delta_theory",
];

/// Column order of the `gain` table.
pub const GAIN_COLUMNS: [&str; 8] = [
    "model",
    "L",
    "N_I",
    "trials",
    "mean_gain",
    "std_error",
    "theory_gain",
    "relative_deviation",
];

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("expected column {expected:?} at position {position}, found {found:?}")]
    Column {
        position: usize,
        expected: &'static str,
        found: String,
    },
    #[error("row {row}: column {column:?} has invalid value {value:?}")]
    Value {
        row: usize,
        column: &'static str,
        value: String,
    },
    #[error("table has no header row")]
    MissingHeader,
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One data row of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub ris_count: usize,
    pub elements: usize,
    pub trials: u64,
    pub mean_physics: f64,
    pub se_physics: f64,
    pub theory_physics: f64,
    pub gain_conventional: f64,
    pub delta_empirical: f64,
    pub delta_theory: f64,
}

impl SweepRecord {
    fn fields(&self) -> [String; 9] {
        [
            self.ris_count.to_string(),
            self.elements.to_string(),
            self.trials.to_string(),
            format_float(self.mean_physics),
            format_float(self.se_physics),
            format_float(self.theory_physics),
            format_float(self.gain_conventional),
            format_float(self.delta_empirical),
            format_float(self.delta_theory),
        ]
    }
}

fn write_comments<W: Write>(out: &mut W, comments: &[String]) -> io::Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    Ok(())
}

fn write_table<W: Write, I, R>(out: &mut W, columns: &[&str], rows: I) -> Result<(), TableError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(mut out: W, comments: &[String], rows: &[SweepRecord]) -> Result<(), TableError> {
    write_comments(&mut out, comments)?;
    write_table(&mut out, &SWEEP_COLUMNS, rows.iter().map(SweepRecord::fields))
}

/// Writes one row per model; `L` and `N_I` describe the topology.
pub fn write_gain<W: Write>(
    mut out: W,
    comments: &[String],
    ris_count: usize,
    elements: usize,
    stats: &[GainStats],
    delta: Option<DeltaEstimate>,
) -> Result<(), TableError> {
    write_comments(&mut out, comments)?;
    if let Some(d) = delta {
        write_comments(
            &mut out,
            &[format!(
                "delta_empirical = {} (paired std_error {})",
                format_float(d.value),
                format_float(d.std_error)
            )],
        )?;
    }
    let rows = stats.iter().map(|s| {
        [
            s.model.as_str().to_string(),
            ris_count.to_string(),
            elements.to_string(),
            s.trials.to_string(),
            format_float(s.mean_gain),
            format_float(s.std_error),
            format_float(s.theory_gain),
            format_float(s.relative_deviation),
        ]
    });
    write_table(&mut out, &GAIN_COLUMNS, rows)
}

/// Splits a sweep file into its `#` lines and its CSV section.
pub fn split_comments<R: BufRead>(input: R) -> io::Result<(Vec<String>, String)> {
    let mut comments = Vec::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line?;
        match line.strip_prefix('#') {
            Some(c) if body.is_empty() => comments.push(c.trim_start().to_string()),
            _ => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    Ok((comments, body))
}

/// Parses and validates a sweep table, naming the first offending column.
pub fn read_sweep<R: BufRead>(input: R) -> Result<Vec<SweepRecord>, TableError> {
    let (_, body) = split_comments(input)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    let mut records = reader.records();
    let header = records.next().ok_or(TableError::MissingHeader)??;
    for (position, expected) in SWEEP_COLUMNS.iter().enumerate() {
        let found = header.get(position).unwrap_or("");
        if found != *expected {
            return Err(TableError::Column {
                position,
                expected,
                found: found.to_string(),
            });
        }
    }
    if header.len() > SWEEP_COLUMNS.len() {
        return Err(TableError::Column {
            position: SWEEP_COLUMNS.len(),
            expected: "end of row",
            found: header[SWEEP_COLUMNS.len()].to_string(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let row = i + 1;
        let field = |k: usize| rec.get(k).unwrap_or("").trim().to_string();
        let float = |k: usize| -> Result<f64, TableError> {
            field(k).parse::<f64>().map_err(|_| TableError::Value {
                row,
                column: SWEEP_COLUMNS[k],
                value: field(k),
            })
        };
        let int = |k: usize| -> Result<u64, TableError> {
            field(k).parse::<u64>().map_err(|_| TableError::Value {
                row,
                column: SWEEP_COLUMNS[k],
                value: field(k),
            })
        };
        rows.push(SweepRecord {
            ris_count: int(0)? as usize,
            elements: int(1)? as usize,
            trials: int(2)?,
            mean_physics: float(3)?,
            se_physics: float(4)?,
            theory_physics: float(5)?,
            gain_conventional: float(6)?,
            delta_empirical: float(7)?,
            delta_theory: float(8)?,
        });
    }
    Ok(rows)
}
