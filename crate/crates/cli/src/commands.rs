//! The four subcommands, decoupled from flag parsing so they can be tested
//! directly.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bbsim_core::{
    broker, replication_seed, run_replication, sweep_arbit, Bandwidth, Kbps, ScenarioConfig,
    Scheme, TickRecord,
};

use crate::config::{config_to_json, load_config_or_default};
use crate::output::{parse_summary_csv, render_summary_csv, render_timeseries_csv};
use crate::report::build_report;
use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: Option<PathBuf>,
    pub schemes: Vec<Scheme>,
    pub seed: Option<u64>,
    pub timeseries: Option<PathBuf>,
    pub history: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub config: Option<PathBuf>,
    pub arbit_range: String,
    pub schemes: Vec<Scheme>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub sweep_csv: PathBuf,
    pub out_dir: PathBuf,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::OutputIo {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes to the given path, or to stdout when no path is given.
fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => write_file(path, contents),
        None => {
            print!("{contents}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

/// Runs the configured experiment at its configured background load and
/// writes one summary row per scheme. Optionally dumps the first
/// replication's per-tick timeseries and broker history.
pub fn cmd_run(opts: &RunOptions) -> Result<(), CliError> {
    let mut cfg = load_config_or_default(opts.config.as_deref())?;
    if let Some(seed) = opts.seed {
        cfg.run.base_seed = seed;
    }
    cfg.validate()?;

    let rows = sweep_arbit(&cfg, &[cfg.background.arbit_kbps], &opts.schemes)?;
    write_output(opts.out.as_deref(), &render_summary_csv(&rows))?;

    if opts.timeseries.is_some() || opts.history.is_some() {
        let ticks = first_replication_ticks(&cfg, &opts.schemes)?;
        if let Some(path) = opts.timeseries.as_deref() {
            write_file(path, &render_timeseries_csv(&ticks))?;
        }
        if let Some(path) = opts.history.as_deref() {
            let records: Vec<_> = ticks.iter().map(TickRecord::history_record).collect();
            broker::export_history(&records, path).map_err(|e| CliError::OutputIo {
                path: e.path,
                source: e.source,
            })?;
        }
    }
    Ok(())
}

/// Per-tick records of replication 0 for every requested scheme, in
/// canonical scheme order.
fn first_replication_ticks(
    cfg: &ScenarioConfig,
    schemes: &[Scheme],
) -> Result<Vec<TickRecord>, CliError> {
    let seed = replication_seed(cfg.run.base_seed, 0);
    let mut ticks = Vec::new();
    for scheme in Scheme::all() {
        if !schemes.contains(&scheme) {
            continue;
        }
        let result = run_replication(cfg, scheme, seed, true)?;
        ticks.extend(result.ticks.expect("timeseries was requested"));
    }
    Ok(ticks)
}

/// Parses `start:stop:step` (kbps) into the swept load levels, inclusive of
/// `stop`.
pub fn parse_arbit_range(range: &str) -> Result<Vec<Kbps>, CliError> {
    let usage = |detail: String| {
        CliError::Usage(format!(
            "malformed --arbit range '{range}': {detail} (expected start:stop:step in kbps)"
        ))
    };
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("found {} field(s)", parts.len())));
    }
    let mut values = [0.0f64; 3];
    for (value, part) in values.iter_mut().zip(&parts) {
        *value = part
            .trim()
            .parse()
            .map_err(|_| usage(format!("'{part}' is not a number")))?;
    }
    let [start, stop, step] = values;
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() || start < 0.0 {
        return Err(usage("values must be finite and non-negative".to_string()));
    }
    if start > stop {
        return Err(usage(format!("start {start} exceeds stop {stop}")));
    }
    if step <= 0.0 {
        return Err(usage(format!("step must be positive, got {step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 10_000 {
        return Err(usage(format!("range produces {count} levels")));
    }
    Ok((0..count)
        .map(|i| Bandwidth::new(start + i as f64 * step))
        .collect())
}

/// Sweeps the background load and writes the sweep table CSV; this file
/// feeds `report`.
pub fn cmd_sweep(opts: &SweepOptions) -> Result<(), CliError> {
    let cfg = load_config_or_default(opts.config.as_deref())?;
    cfg.validate()?;
    let levels = parse_arbit_range(&opts.arbit_range)?;
    let rows = sweep_arbit(&cfg, &levels, &opts.schemes)?;
    write_output(opts.out.as_deref(), &render_summary_csv(&rows))
}

/// Renders the chart files and text summary from a sweep CSV.
pub fn cmd_report(opts: &ReportOptions) -> Result<(), CliError> {
    let text = fs::read_to_string(&opts.sweep_csv).map_err(|e| {
        CliError::InputData(format!(
            "cannot read sweep CSV {}: {e}",
            opts.sweep_csv.display()
        ))
    })?;
    let rows = parse_summary_csv(&text)?;

    fs::create_dir_all(&opts.out_dir).map_err(|source| CliError::OutputIo {
        path: opts.out_dir.clone(),
        source,
    })?;
    for file in build_report(&rows) {
        let path = opts.out_dir.join(file.name);
        write_file(&path, &file.contents)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Validates a config file, printing the effective config on success.
pub fn cmd_validate(config: &Path) -> Result<(), CliError> {
    let cfg = load_config_or_default(Some(config))?;
    println!("configuration OK");
    println!("{}", config_to_json(&cfg));
    Ok(())
}
