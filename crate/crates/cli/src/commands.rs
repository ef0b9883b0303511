//! The five subcommand implementations.

use crate::manifest::{compact_timestamp, RunManifest};
use crate::output::{
    series_file_name, sig12, write_search_report_csv, write_search_report_json,
    write_series_csv, write_series_json, write_sign_flips_csv, write_sweep_summary, SweepSummary,
};
use crate::params::{
    ClassicalParamsResolved, OutputFormat, QuantumParams, SearchParams, SweepParams,
};
use crate::CliError;
use parrondo_core::classical::{expected_gain_exact, monte_carlo, ClassicalParams};
use parrondo_core::quantum::{run_strategy, QuantumGameConfig};
use parrondo_core::search::{rank_strategies, sweep_offsets, SearchConfig};
use parrondo_core::strategy::Strategy;
use parrondo_core::validate::run_validation;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub struct OutDir {
    pub path: PathBuf,
}

impl OutDir {
    pub fn create(requested: Option<PathBuf>, subcommand: &str, created_at: &str) -> Result<Self, CliError> {
        let path = requested.unwrap_or_else(|| {
            PathBuf::from("parrondo-out").join(format!(
                "{subcommand}-{}",
                compact_timestamp(created_at)
            ))
        });
        fs::create_dir_all(&path)
            .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", path.display())))?;
        Ok(Self { path })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }
}

fn parse_strategy(text: &str) -> Result<Strategy, CliError> {
    text.parse::<Strategy>()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn write_manifest(out: &OutDir, manifest: &RunManifest) -> Result<(), CliError> {
    manifest
        .write(&out.file("manifest.json"))
        .map_err(CliError::Failure)
}

pub fn run_quantum(
    params: QuantumParams,
    seed: Option<u64>,
    created_at: String,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let strategy = parse_strategy(&params.strategy)?;
    let config = QuantumGameConfig::new(
        params.gates.params_a(),
        params.gates.params_b1(),
        params.gates.params_b2(),
        params.capital_qubits,
        params.offset,
        params.b_mapping,
        params.gain_formula,
    )?;
    let series = run_strategy(&config, &strategy, params.iterations)?;

    let manifest = RunManifest::new("quantum", &params, seed, created_at)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let out = OutDir::create(out, "quantum", &manifest.created_at)?;
    match params.format {
        OutputFormat::Csv => {
            write_series_csv(&out.file("series.csv"), &series)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            write_manifest(&out, &manifest)?;
        }
        OutputFormat::Json => {
            write_series_json(&out.file("series.json"), &manifest, &series)
                .map_err(CliError::Failure)?;
        }
    }
    println!(
        "quantum: strategy {} x {} iterations ({} games) on {} capital qubits ({} total)",
        strategy,
        params.iterations,
        series.len(),
        params.capital_qubits,
        params.capital_qubits + 4
    );
    println!("final expected gain: {}", sig12(series.final_gain()));
    println!("wrote {}", out.path.display());
    Ok(ExitCode::SUCCESS)
}

pub fn run_classical(
    params: ClassicalParamsResolved,
    created_at: String,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let strategy = parse_strategy(&params.strategy)?;
    let classical = ClassicalParams::new(params.epsilon)?;
    let series = match params.mc_trials {
        None => expected_gain_exact(&strategy, params.steps, &classical, params.initial_capital)?,
        Some(trials) => monte_carlo(
            &strategy,
            params.steps,
            trials,
            params.seed,
            &classical,
            params.initial_capital,
        )?,
    };

    let seed = params.mc_trials.map(|_| params.seed);
    let manifest = RunManifest::new("classical", &params, seed, created_at)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let out = OutDir::create(out, "classical", &manifest.created_at)?;
    match params.format {
        OutputFormat::Csv => {
            write_series_csv(&out.file("series.csv"), &series)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            write_manifest(&out, &manifest)?;
        }
        OutputFormat::Json => {
            write_series_json(&out.file("series.json"), &manifest, &series)
                .map_err(CliError::Failure)?;
        }
    }
    println!(
        "classical ({}): strategy {} for {} steps",
        series.meta.kind, strategy, params.steps
    );
    println!("final expected gain: {}", sig12(series.final_gain()));
    println!("wrote {}", out.path.display());
    Ok(ExitCode::SUCCESS)
}

pub fn run_search(
    params: SearchParams,
    created_at: String,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let config = SearchConfig {
        params_a: params.gates.params_a(),
        params_b1: params.gates.params_b1(),
        params_b2: params.gates.params_b2(),
        capital_qubits: Some(params.capital_qubits),
        b_mappings: params.b_mappings.clone(),
        gain_formulas: params.gain_formulas.clone(),
    };
    let report = rank_strategies(params.length, params.iterations, &params.offsets, &config)?;

    let manifest = RunManifest::new("search", &params, None, created_at)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let out = OutDir::create(out, "search", &manifest.created_at)?;

    let series_dir = out.file("series");
    fs::create_dir_all(&series_dir)
        .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", series_dir.display())))?;
    for entry in &report.entries {
        let name = series_file_name(&entry.strategy, entry.offset, entry.b_mapping, entry.gain_formula);
        write_series_csv(&series_dir.join(name), &entry.series)
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    match params.format {
        OutputFormat::Csv => {
            write_search_report_csv(&out.file("report.csv"), &report)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            write_sign_flips_csv(&out.file("sign_flips.csv"), &report.sign_flips)
                .map_err(|e| CliError::Failure(e.to_string()))?;
            write_manifest(&out, &manifest)?;
        }
        OutputFormat::Json => {
            write_search_report_json(&out.file("report.json"), &manifest, &report)
                .map_err(CliError::Failure)?;
        }
    }

    println!(
        "search: {} runs ({} strategies x {} offsets x {} conventions) on {} capital qubits",
        report.entries.len(),
        1usize << params.length,
        params.offsets.len(),
        params.b_mappings.len() * params.gain_formulas.len(),
        report.capital_qubits,
    );
    if let Some(best) = report.entries.first() {
        println!(
            "best: {} offset={} {}/{} gain {}",
            best.strategy, best.offset, best.b_mapping, best.gain_formula, sig12(best.final_gain)
        );
    }
    let flagged: Vec<_> = report
        .entries
        .iter()
        .filter(|e| e.reference_match.is_some())
        .collect();
    for entry in &flagged {
        println!(
            "reference match: {} offset={} {}/{} gain {} ({})",
            entry.strategy,
            entry.offset,
            entry.b_mapping,
            entry.gain_formula,
            sig12(entry.final_gain),
            entry.reference_match.as_deref().unwrap_or(""),
        );
    }
    println!("sign flips across offsets: {}", report.sign_flips.len());
    println!("wrote {}", out.path.display());
    Ok(ExitCode::SUCCESS)
}

pub fn run_sweep(
    params: SweepParams,
    created_at: String,
    out: Option<PathBuf>,
) -> Result<ExitCode, CliError> {
    let strategy = parse_strategy(&params.strategy)?;
    let template = QuantumGameConfig::new(
        params.gates.params_a(),
        params.gates.params_b1(),
        params.gates.params_b2(),
        params.capital_qubits,
        0,
        params.b_mapping,
        params.gain_formula,
    )?;
    let series = sweep_offsets(&strategy, &params.offsets, params.iterations, &template)?;

    let manifest = RunManifest::new("sweep", &params, None, created_at)
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let out = OutDir::create(out, "sweep", &manifest.created_at)?;

    let final_gains: Vec<(i64, f64)> = params
        .offsets
        .iter()
        .zip(&series)
        .map(|(&offset, s)| (offset, s.final_gain()))
        .collect();
    let sign_flip = final_gains.iter().any(|&(_, g)| g > 0.0)
        && final_gains.iter().any(|&(_, g)| g < 0.0);

    match params.format {
        OutputFormat::Csv => {
            for (&offset, s) in params.offsets.iter().zip(&series) {
                write_series_csv(&out.file(&format!("series_off{offset}.csv")), s)
                    .map_err(|e| CliError::Failure(e.to_string()))?;
            }
            write_manifest(&out, &manifest)?;
        }
        OutputFormat::Json => {
            for (&offset, s) in params.offsets.iter().zip(&series) {
                write_series_json(&out.file(&format!("series_off{offset}.json")), &manifest, s)
                    .map_err(CliError::Failure)?;
            }
        }
    }
    let summary = SweepSummary {
        strategy: strategy.to_string(),
        iterations: params.iterations,
        capital_qubits: params.capital_qubits,
        final_gains: final_gains.clone(),
        sign_flip,
    };
    write_sweep_summary(&out.file("summary.json"), &summary).map_err(CliError::Failure)?;

    println!("sweep: strategy {} over offsets {:?}", strategy, params.offsets);
    for (offset, gain) in &final_gains {
        println!("offset {offset}: final expected gain {}", sig12(*gain));
    }
    println!("sign flip across offsets: {sign_flip}");
    println!("wrote {}", out.path.display());
    Ok(ExitCode::SUCCESS)
}

pub fn run_validate(max_qubits: usize, seed: u64) -> Result<ExitCode, CliError> {
    if max_qubits > parrondo_core::oracle::MAX_ORACLE_QUBITS {
        return Err(CliError::Usage(format!(
            "--max-qubits {max_qubits} exceeds the dense-oracle cap of {}",
            parrondo_core::oracle::MAX_ORACLE_QUBITS
        )));
    }
    let results = run_validation(max_qubits, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut all_passed = true;
    for result in &results {
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} - {}", result.name, result.detail);
        all_passed &= result.passed;
    }
    if all_passed {
        println!("all {} checks passed", results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let failed: Vec<_> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name)
            .collect();
        println!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

/// Replay helper: reads the manifest next to `path` semantics (the file
/// itself), returning params, seed, and the original timestamp.
pub fn load_replay<P: serde::de::DeserializeOwned>(
    path: &Path,
    subcommand: &str,
) -> Result<(P, Option<u64>, String), CliError> {
    let manifest = RunManifest::load(path).map_err(CliError::Usage)?;
    let params = manifest.params_for(subcommand).map_err(CliError::Usage)?;
    Ok((params, manifest.seed, manifest.created_at))
}
