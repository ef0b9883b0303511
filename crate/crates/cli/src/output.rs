//! CSV and JSON writers.
//!
//! Contract: single-run CSVs have the exact header `step,expected_gain`,
//! floats carry 12 significant digits with `.` as decimal separator, and
//! lines end in `\n`. Standard errors (Monte Carlo runs) ride along in the
//! JSON format only.

use crate::manifest::RunManifest;
use parrondo_core::search::{SearchReport, SignFlip};
use parrondo_core::series::GainSeries;
use serde::Serialize;
use std::fs;
use std::io;
use std::path::Path;

/// 12 significant digits, scientific notation.
pub fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

pub fn write_series_csv(path: &Path, series: &GainSeries) -> io::Result<()> {
    let mut text = String::with_capacity(32 * series.records.len() + 32);
    text.push_str("step,expected_gain\n");
    for record in &series.records {
        text.push_str(&format!("{},{}\n", record.step, sig12(record.expected_gain)));
    }
    fs::write(path, text)
}

#[derive(Serialize)]
struct SeriesDocument<'a> {
    manifest: &'a RunManifest,
    meta: &'a parrondo_core::series::RunMeta,
    records: &'a [parrondo_core::series::GainRecord],
}

pub fn write_series_json(
    path: &Path,
    manifest: &RunManifest,
    series: &GainSeries,
) -> Result<(), String> {
    let doc = SeriesDocument {
        manifest,
        meta: &series.meta,
        records: &series.records,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// File name for one search run's series, unique per report entry.
pub fn series_file_name(
    strategy: &str,
    offset: i64,
    b_mapping: parrondo_core::quantum::BMapping,
    gain_formula: parrondo_core::quantum::GainFormula,
) -> String {
    format!("{strategy}_off{offset}_{b_mapping}_{gain_formula}.csv")
}

pub fn write_search_report_csv(path: &Path, report: &SearchReport) -> io::Result<()> {
    let mut text = String::new();
    text.push_str("strategy,offset,b_mapping,gain_formula,final_gain,reference_match,series_file\n");
    for entry in &report.entries {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            entry.strategy,
            entry.offset,
            entry.b_mapping,
            entry.gain_formula,
            sig12(entry.final_gain),
            entry.reference_match.as_deref().unwrap_or(""),
            series_file_name(&entry.strategy, entry.offset, entry.b_mapping, entry.gain_formula),
        ));
    }
    fs::write(path, text)
}

pub fn write_sign_flips_csv(path: &Path, flips: &[SignFlip]) -> io::Result<()> {
    let mut text = String::new();
    text.push_str("strategy,b_mapping,gain_formula,offset,final_gain\n");
    for flip in flips {
        for (offset, gain) in &flip.offset_gains {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                flip.strategy,
                flip.b_mapping,
                flip.gain_formula,
                offset,
                sig12(*gain),
            ));
        }
    }
    fs::write(path, text)
}

#[derive(Serialize)]
pub struct SearchEntrySummary {
    pub strategy: String,
    pub offset: i64,
    pub b_mapping: parrondo_core::quantum::BMapping,
    pub gain_formula: parrondo_core::quantum::GainFormula,
    pub final_gain: f64,
    pub reference_match: Option<String>,
    pub series_file: String,
}

#[derive(Serialize)]
struct SearchDocument<'a> {
    manifest: &'a RunManifest,
    capital_qubits: usize,
    iterations: usize,
    entries: Vec<SearchEntrySummary>,
    sign_flips: &'a [SignFlip],
}

pub fn write_search_report_json(
    path: &Path,
    manifest: &RunManifest,
    report: &SearchReport,
) -> Result<(), String> {
    let entries = report
        .entries
        .iter()
        .map(|entry| SearchEntrySummary {
            strategy: entry.strategy.clone(),
            offset: entry.offset,
            b_mapping: entry.b_mapping,
            gain_formula: entry.gain_formula,
            final_gain: entry.final_gain,
            reference_match: entry.reference_match.clone(),
            series_file: series_file_name(
                &entry.strategy,
                entry.offset,
                entry.b_mapping,
                entry.gain_formula,
            ),
        })
        .collect();
    let doc = SearchDocument {
        manifest,
        capital_qubits: report.capital_qubits,
        iterations: report.iterations,
        entries,
        sign_flips: &report.sign_flips,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

#[derive(Serialize)]
pub struct SweepSummary {
    pub strategy: String,
    pub iterations: usize,
    pub capital_qubits: usize,
    pub final_gains: Vec<(i64, f64)>,
    /// True when the final gain is strictly positive at some offset and
    /// strictly negative at another.
    pub sign_flip: bool,
}

pub fn write_sweep_summary(path: &Path, summary: &SweepSummary) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(summary).map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
