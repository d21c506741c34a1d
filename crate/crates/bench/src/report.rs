//! File formats.
//!
//! Sweep results are CSV with the header
//! `axis,value,impl,seconds,executions,relative_pct`, preceded by `# key=value`
//! metadata lines. `relative_pct` is empty when Conv was not part of the
//! run. Floats are written in shortest round-trip form, so reading a file
//! back yields the records that were written.
//!
//! Adaptive traces are CSV with the header `index,impl,nanos`, one line per
//! execution, again preceded by metadata lines. `impl` is `data`, `BF` or
//! `NBF`; `nanos` is empty when the execution was not timed.

use crate::sweep::BenchRecord;
use anyhow::{anyhow, Context, Result};
use rcpsp_ssgs::hybrid::{ExecutionKind, TraceRecord};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

/// Ordered `key=value` pairs written as comment lines above the CSV header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_owned(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        for (k, v) in &self.0 {
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }

    fn parse_line(&mut self, line: &str) {
        if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
            self.push(k.trim(), v.trim());
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RecordRow {
    axis: String,
    value: f64,
    #[serde(rename = "impl")]
    implementation: String,
    seconds: f64,
    executions: u64,
    relative_pct: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TraceRow {
    index: u64,
    #[serde(rename = "impl")]
    kind: String,
    nanos: Option<u64>,
}

pub fn write_records(out: impl Write, metadata: &Metadata, records: &[BenchRecord]) -> Result<()> {
    let mut out = out;
    metadata.write_to(&mut out)?;
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(RecordRow {
            axis: r.axis.to_string(),
            value: r.value,
            implementation: r.implementation.to_string(),
            seconds: r.seconds,
            executions: r.executions,
            relative_pct: r.relative_pct,
        })?;
    }
    if records.is_empty() {
        writer.write_record([
            "axis",
            "value",
            "impl",
            "seconds",
            "executions",
            "relative_pct",
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records(input: impl BufRead) -> Result<(Metadata, Vec<BenchRecord>)> {
    let (metadata, body) = split_metadata(input)?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<RecordRow>().enumerate() {
        let row = row.with_context(|| format!("record {}", i + 1))?;
        records.push(BenchRecord {
            axis: row.axis.parse().map_err(|e: String| anyhow!(e))?,
            value: row.value,
            implementation: row.implementation.parse().map_err(|e: String| anyhow!(e))?,
            seconds: row.seconds,
            executions: row.executions,
            relative_pct: row.relative_pct,
        });
    }
    Ok((metadata, records))
}

pub fn write_trace(out: impl Write, metadata: &Metadata, trace: &[TraceRecord]) -> Result<()> {
    let mut out = out;
    metadata.write_to(&mut out)?;
    let mut writer = csv::Writer::from_writer(out);
    for t in trace {
        writer.serialize(TraceRow {
            index: t.index,
            kind: t.kind.to_string(),
            nanos: t.nanos,
        })?;
    }
    if trace.is_empty() {
        writer.write_record(["index", "impl", "nanos"])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_trace(input: impl BufRead) -> Result<(Metadata, Vec<TraceRecord>)> {
    let (metadata, body) = split_metadata(input)?;
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut trace = Vec::new();
    for (i, row) in reader.deserialize::<TraceRow>().enumerate() {
        let row = row.with_context(|| format!("trace line {}", i + 1))?;
        let kind: ExecutionKind = row.kind.parse().map_err(|e: String| anyhow!(e))?;
        trace.push(TraceRecord {
            index: row.index,
            kind,
            nanos: row.nanos,
        });
    }
    Ok((metadata, trace))
}

/// Leading `#` lines become metadata; the rest is returned as CSV text.
fn split_metadata(input: impl BufRead) -> Result<(Metadata, String)> {
    let mut metadata = Metadata::default();
    let mut body = String::new();
    let mut in_header = true;
    for line in input.lines() {
        let line = line?;
        if in_header && line.starts_with('#') {
            metadata.parse_line(&line);
            continue;
        }
        in_header = false;
        body.push_str(&line);
        body.push('\n');
    }
    Ok((metadata, body))
}
