//! Serialisation of split-prime records and scan records.
//!
//! CSV uses the header `h,d,p,ratio`, LF line endings and four-decimal
//! ratios. JSON is an array of flat objects with keys in the order
//! `h, d, p, witness_x, witness_y, ratio`. Markdown mirrors the published
//! table layout.

use std::fmt::Write as _;

use clap::ValueEnum;
use hcf_core::analytic::round4;
use hcf_core::fixture::TABLE_HEADER;
use hcf_core::search::{ScanRecord, ScanValue};
use hcf_core::SplitPrimeRecord;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecordFormat {
    Text,
    Csv,
    Json,
    Md,
}

#[derive(Serialize)]
struct JsonRow {
    h: u64,
    d: u64,
    p: u64,
    witness_x: i64,
    witness_y: i64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified_no_smaller: Option<bool>,
}

impl JsonRow {
    fn from_record(r: &SplitPrimeRecord) -> Self {
        Self {
            h: r.h,
            d: r.d.get(),
            p: r.p,
            witness_x: r.witness.x,
            witness_y: r.witness.y,
            ratio: round4(r.ratio),
            verified_no_smaller: r.verified_no_smaller.then_some(true),
        }
    }
}

pub fn format_ratio(ratio: f64) -> String {
    format!("{:.4}", round4(ratio))
}

pub fn records_csv(records: &[SplitPrimeRecord]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.h, r.d, r.p, format_ratio(r.ratio));
    }
    out
}

pub fn records_json(records: &[SplitPrimeRecord]) -> String {
    let rows: Vec<JsonRow> = records.iter().map(JsonRow::from_record).collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("plain data serialises");
    s.push('\n');
    s
}

pub fn records_md(records: &[SplitPrimeRecord]) -> String {
    let mut out = String::from("| h_K | d | p | Ratio |\n|---:|---:|---:|---:|\n");
    for r in records {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.h,
            r.d,
            r.p,
            format_ratio(r.ratio)
        );
    }
    out
}

pub fn format_records(records: &[SplitPrimeRecord], fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Csv => records_csv(records),
        OutputFormat::Json => records_json(records),
        OutputFormat::Md => records_md(records),
    }
}

pub fn record_text(r: &SplitPrimeRecord) -> String {
    let mut s = format!(
        "d={} h={} p={} witness=({},{}) ratio={}",
        r.d,
        r.h,
        r.p,
        r.witness.x,
        r.witness.y,
        format_ratio(r.ratio)
    );
    if r.verified_no_smaller {
        s.push_str(" verified_no_smaller=true");
    }
    s.push('\n');
    s
}

pub fn format_record(r: &SplitPrimeRecord, fmt: RecordFormat) -> String {
    let one = std::slice::from_ref(r);
    match fmt {
        RecordFormat::Text => record_text(r),
        RecordFormat::Csv => records_csv(one),
        RecordFormat::Json => {
            let mut s = serde_json::to_string_pretty(&JsonRow::from_record(r)).expect("serialises");
            s.push('\n');
            s
        }
        RecordFormat::Md => records_md(one),
    }
}

fn scan_value(v: ScanValue) -> String {
    match v {
        // shortest representation that round-trips exactly
        ScanValue::Real(x) => format!("{x:?}"),
        ScanValue::Integer(n) => n.to_string(),
    }
}

#[derive(Serialize)]
struct JsonScanRecord {
    kind: &'static str,
    key: u64,
    d: u64,
    value: serde_json::Value,
}

#[derive(Serialize)]
struct JsonScan {
    records: Vec<JsonScanRecord>,
    chowla_threshold: f64,
}

pub fn format_scan(records: &[ScanRecord], threshold: f64, fmt: OutputFormat) -> String {
    let mut out = String::new();
    match fmt {
        OutputFormat::Csv => {
            out.push_str("kind,key,d,value\n");
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    r.kind.as_str(),
                    r.key,
                    r.d,
                    scan_value(r.value)
                );
            }
            let _ = writeln!(out, "# chowla_threshold={threshold:?}");
        }
        OutputFormat::Json => {
            let doc = JsonScan {
                records: records
                    .iter()
                    .map(|r| JsonScanRecord {
                        kind: r.kind.as_str(),
                        key: r.key,
                        d: r.d.get(),
                        value: match r.value {
                            ScanValue::Real(x) => serde_json::json!(x),
                            ScanValue::Integer(n) => serde_json::json!(n),
                        },
                    })
                    .collect(),
                chowla_threshold: threshold,
            };
            out = serde_json::to_string_pretty(&doc).expect("serialises");
            out.push('\n');
        }
        OutputFormat::Md => {
            out.push_str("| kind | h | d | value |\n|---|---:|---:|---:|\n");
            for r in records {
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    r.kind.as_str(),
                    r.key,
                    r.d,
                    scan_value(r.value)
                );
            }
            let _ = writeln!(out, "\nchowla_threshold = {threshold:?}");
        }
    }
    out
}
