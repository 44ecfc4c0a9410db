//! On-disk formats.
//!
//! Sample grids are CSV with the header `t,state,x,re,im,density,potential`.
//! Floats use the shortest representation that parses back to the same
//! `f64`. Points on a wall carry `wall` in the potential column instead of an
//! infinite value. NaN and infinities are never written.
//!
//! Reports are written twice: as text, one `PASS`/`FAIL` line per check, and
//! as JSON with the same content.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use moving_wells::verify::{Bound, VerificationReport};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CSV_HEADER: [&str; 7] = ["t", "state", "x", "re", "im", "density", "potential"];
pub const WALL_MARKER: &str = "wall";

/// Potential column of a sample record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialCell {
    Value(f64),
    Wall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub t: f64,
    pub state: String,
    pub x: f64,
    pub re: f64,
    pub im: f64,
    pub density: f64,
    pub potential: PotentialCell,
}

fn finite(name: &str, v: f64) -> CliResult<String> {
    if v.is_finite() {
        Ok(v.to_string())
    } else {
        Err(CliError::Format(format!("refusing to write non-finite {name} = {v}")))
    }
}

pub fn write_samples(path: &Path, records: &[SampleRecord]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        let potential = match r.potential {
            PotentialCell::Value(v) => finite("potential", v)?,
            PotentialCell::Wall => WALL_MARKER.to_string(),
        };
        w.write_record([
            finite("t", r.t)?,
            r.state.clone(),
            finite("x", r.x)?,
            finite("re", r.re)?,
            finite("im", r.im)?,
            finite("density", r.density)?,
            potential,
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(field: &str, what: &str) -> CliResult<f64> {
    field.parse().map_err(|_| CliError::Format(format!("bad {what} value {field:?}")))
}

pub fn read_samples(path: &Path) -> CliResult<Vec<SampleRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    if r.headers()?.iter().ne(CSV_HEADER) {
        return Err(CliError::Format(format!("unexpected header in {}", path.display())));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let potential = match &rec[6] {
                WALL_MARKER => PotentialCell::Wall,
                v => PotentialCell::Value(parse_f64(v, "potential")?),
            };
            Ok(SampleRecord {
                t: parse_f64(&rec[0], "t")?,
                state: rec[1].to_string(),
                x: parse_f64(&rec[2], "x")?,
                re: parse_f64(&rec[3], "re")?,
                im: parse_f64(&rec[4], "im")?,
                density: parse_f64(&rec[5], "density")?,
                potential,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    /// `null` when the check errored before producing a value.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub bound: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StencilDoc {
    pub label: String,
    pub order: u32,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub subject: String,
    pub t: f64,
    pub passed: bool,
    pub checks: Vec<CheckDoc>,
    pub stencils: Vec<StencilDoc>,
}

impl From<&VerificationReport> for ReportDoc {
    fn from(r: &VerificationReport) -> Self {
        ReportDoc {
            subject: r.subject.clone(),
            t: r.t,
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckDoc {
                    name: c.name.clone(),
                    value: c.value.is_finite().then_some(c.value),
                    tolerance: c.tolerance,
                    bound: match c.bound {
                        Bound::AtMost => "at_most".into(),
                        Bound::AtLeast => "at_least".into(),
                    },
                    passed: c.passed,
                })
                .collect(),
            stencils: r
                .stencils
                .iter()
                .map(|s| StencilDoc { label: s.label.clone(), order: s.order, step: s.step })
                .collect(),
        }
    }
}

/// Writes `<stem>.txt` and `<stem>.json`.
pub fn write_reports(dir: &Path, stem: &str, reports: &[VerificationReport]) -> CliResult<()> {
    let mut text = BufWriter::new(File::create(dir.join(format!("{stem}.txt")))?);
    for r in reports {
        write!(text, "{r}")?;
    }
    text.flush()?;
    let docs: Vec<ReportDoc> = reports.iter().map(ReportDoc::from).collect();
    std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&docs)? + "\n")?;
    Ok(())
}
