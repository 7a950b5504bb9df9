//! Result CSV formats. All writers render deterministically: the same
//! inputs always produce byte-identical files.

use std::str::FromStr;

use bbsim_core::{Bandwidth, Scheme, SweepRow, TickRecord};

use crate::CliError;

pub const SUMMARY_CSV_HEADER: &str =
    "scheme,arbit_kbps,mean_sl,std_sl,mean_util,std_util,replications";

pub const TIMESERIES_CSV_HEADER: &str = "t,b_f,b_i,b_r,grant,femto_served,bg_served,sl,util,scheme";

/// Renders summary rows (one per ARBIT level and scheme) as CSV.
pub fn render_summary_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{:.3},{:.6},{:.6},{:.6},{:.6},{}\n",
            row.scheme,
            row.arbit_kbps.value(),
            row.mean_sl,
            row.std_sl,
            row.mean_util,
            row.std_util,
            row.replications
        ));
    }
    out
}

/// Renders per-tick records as CSV.
pub fn render_timeseries_csv(ticks: &[TickRecord]) -> String {
    let mut out = String::from(TIMESERIES_CSV_HEADER);
    out.push('\n');
    for tick in ticks {
        out.push_str(&format!(
            "{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.6},{:.6},{}\n",
            tick.time_s,
            tick.femto_demand.value(),
            tick.background_demand.value(),
            tick.reserved.value(),
            tick.allocation.femto_grant.value(),
            tick.allocation.femto_served.value(),
            tick.allocation.background_served.value(),
            tick.allocation.satisfaction,
            tick.utilization,
            tick.scheme
        ));
    }
    out
}

fn parse_field<T: FromStr>(field: &str, name: &str, line: usize) -> Result<T, CliError> {
    field.trim().parse().map_err(|_| {
        CliError::InputData(format!("line {line}: cannot parse {name} from '{field}'"))
    })
}

/// Parses a summary CSV back into sweep rows, validating the header and
/// reporting the offending line on malformed rows.
pub fn parse_summary_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut lines = text.lines().enumerate();
    let header = match lines.next() {
        Some((_, header)) => header.trim_end(),
        None => return Err(CliError::InputData("sweep CSV is empty".to_string())),
    };
    if header != SUMMARY_CSV_HEADER {
        return Err(CliError::InputData(format!(
            "unexpected header '{header}' (expected '{SUMMARY_CSV_HEADER}')"
        )));
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CliError::InputData(format!(
                "line {lineno}: expected 7 fields, found {}",
                fields.len()
            )));
        }
        let scheme = Scheme::from_str(fields[0].trim())
            .map_err(|e| CliError::InputData(format!("line {lineno}: {e}")))?;
        rows.push(SweepRow {
            scheme,
            arbit_kbps: Bandwidth::new(parse_field(fields[1], "arbit_kbps", lineno)?),
            mean_sl: parse_field(fields[2], "mean_sl", lineno)?,
            std_sl: parse_field(fields[3], "std_sl", lineno)?,
            mean_util: parse_field(fields[4], "mean_util", lineno)?,
            std_util: parse_field(fields[5], "std_util", lineno)?,
            replications: parse_field(fields[6], "replications", lineno)?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::InputData(
            "sweep CSV contains no data rows".to_string(),
        ));
    }
    Ok(rows)
}
