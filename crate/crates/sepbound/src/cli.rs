//! Experiment configuration, sweep presets, and CSV/SVG emission.
//!
//! A run is described by an [`ExperimentConfig`]: one command plus exactly
//! the fields that command needs. Configs come from command-line flags, a
//! JSON document, or both (flags override the document); [`resolve`] applies
//! defaults and rejects missing or extraneous fields by name.
//!
//! Commands:
//!
//! - `bounds`: one row of loss factors for an explicit rate profile.
//! - `gap`: one row of superposition gap figures for an explicit channel.
//! - `fig3`: two-receiver sweep of scheme rates relative to the
//!   joint-coding reference, versus the better receiver's snr, for several
//!   noise ratios (matched source, `R = C`).
//! - `fig4`: same grid, reporting the construction gap and the uniform
//!   backoff distance in bits.
//! - `fig5`: many-receiver sweep over geometric capacity profiles with a
//!   fixed spread and geometric mean.
//! - `sweep`: the fig3 and fig4 quantities side by side on one grid.
//!
//! Output is a [`SweepTable`] written as CSV: `#`-prefixed metadata lines
//! (including the full resolved config, so any table can be reproduced from
//! its own header), then a header row, then one record per row with 12
//! significant digits. Identical configs produce byte-identical files
//! regardless of thread count: rows are computed in parallel but assembled
//! in input order. `--svg` additionally renders a minimal line chart per
//! ratio/gap column.

use crate::awgn::{construction_gap, uniform_backoff_distance};
use crate::bounds::{
    asymptotic_factor, combined_factor, naive_factor, refined_factor, worst_case_factor,
};
use crate::model::{
    capacities_from_awgn, noises_from_capacities, AwgnBroadcast, CapacityProfile, RateProfile,
};
use crate::schemes::{
    joint_reference_rate, labels_consistent, optimal_separation_rate, relative_rates,
    time_sharing_rate, SweepPoint, OPTIMAL_SEPARATION, TIME_SHARING, TWO_DOF,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SNR_DB_RANGE: (f64, f64, f64) = (-30.0, 50.0, 1.0);
pub const DEFAULT_NOISE_RATIOS: [f64; 4] = [0.01, 0.1, 0.5, 0.9];
pub const DEFAULT_CAPACITY_RATIO: f64 = 8.0;
pub const DEFAULT_GEO_MEAN_BITS: f64 = 1.0;
pub const DEFAULT_POWER: f64 = 1.0;
pub const DEFAULT_RECEIVER_RANGE: (usize, usize) = (2, 64);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(#[from] crate::model::Error),
    #[error("unknown command `{got}` (expected bounds, gap, fig3, fig4, fig5, or sweep)")]
    UnknownCommand { got: String },
    #[error("missing field(s) for {command}: {fields}")]
    MissingFields {
        command: &'static str,
        fields: String,
    },
    #[error("unexpected field(s) for {command}: {fields}")]
    UnexpectedFields {
        command: &'static str,
        fields: String,
    },
    #[error("invalid {what}: {message}")]
    InvalidField {
        what: &'static str,
        message: String,
    },
    #[error("cannot read config {path}: {message}")]
    ConfigRead { path: String, message: String },
    #[error("invalid config JSON: {message}")]
    ConfigParse { message: String },
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    /// 2 for invalid configs or profiles, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 3,
            _ => 2,
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bounds,
    Gap,
    Fig3,
    Fig4,
    Fig5,
    Sweep,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Bounds => "bounds",
            Command::Gap => "gap",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Fig5 => "fig5",
            Command::Sweep => "sweep",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "bounds" => Ok(Command::Bounds),
            "gap" => Ok(Command::Gap),
            "fig3" => Ok(Command::Fig3),
            "fig4" => Ok(Command::Fig4),
            "fig5" => Ok(Command::Fig5),
            "sweep" => Ok(Command::Sweep),
            other => Err(CliError::UnknownCommand {
                got: other.to_string(),
            }),
        }
    }
}

/// Raw, partially specified configuration: the merge unit for JSON documents
/// and command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigDoc {
    pub command: Option<Command>,
    pub rates: Option<Vec<f64>>,
    pub capacities: Option<Vec<f64>>,
    pub noises: Option<Vec<f64>>,
    pub power: Option<f64>,
    pub snr_db_range: Option<(f64, f64, f64)>,
    pub noise_ratios: Option<Vec<f64>>,
    pub receiver_counts: Option<Vec<usize>>,
    pub capacity_ratio: Option<f64>,
    pub geometric_mean_bits: Option<f64>,
    pub output_path: Option<String>,
    pub emit_svg: Option<bool>,
}

impl ConfigDoc {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::ConfigParse {
            message: e.to_string(),
        })
    }

    /// Field-by-field override: any field set in `overrides` wins.
    pub fn merged_with(self, overrides: ConfigDoc) -> ConfigDoc {
        ConfigDoc {
            command: overrides.command.or(self.command),
            rates: overrides.rates.or(self.rates),
            capacities: overrides.capacities.or(self.capacities),
            noises: overrides.noises.or(self.noises),
            power: overrides.power.or(self.power),
            snr_db_range: overrides.snr_db_range.or(self.snr_db_range),
            noise_ratios: overrides.noise_ratios.or(self.noise_ratios),
            receiver_counts: overrides.receiver_counts.or(self.receiver_counts),
            capacity_ratio: overrides.capacity_ratio.or(self.capacity_ratio),
            geometric_mean_bits: overrides.geometric_mean_bits.or(self.geometric_mean_bits),
            output_path: overrides.output_path.or(self.output_path),
            emit_svg: overrides.emit_svg.or(self.emit_svg),
        }
    }

    fn present_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.rates.is_some() {
            out.push("rates");
        }
        if self.capacities.is_some() {
            out.push("capacities");
        }
        if self.noises.is_some() {
            out.push("noises");
        }
        if self.power.is_some() {
            out.push("power");
        }
        if self.snr_db_range.is_some() {
            out.push("snr_db_range");
        }
        if self.noise_ratios.is_some() {
            out.push("noise_ratios");
        }
        if self.receiver_counts.is_some() {
            out.push("receiver_counts");
        }
        if self.capacity_ratio.is_some() {
            out.push("capacity_ratio");
        }
        if self.geometric_mean_bits.is_some() {
            out.push("geometric_mean_bits");
        }
        out
    }
}

/// Fully resolved run description: defaults applied, field set validated
/// against the command. Serialized verbatim into output metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacities: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noises: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_db_range: Option<(f64, f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_ratios: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub receiver_counts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capacity_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_mean_bits: Option<f64>,
    pub output_path: String,
    pub emit_svg: bool,
}

struct FieldRules {
    required: &'static [&'static str],
    optional: &'static [&'static str],
}

fn rules_for(command: Command) -> FieldRules {
    match command {
        Command::Bounds => FieldRules {
            required: &["rates"],
            optional: &["capacities"],
        },
        Command::Gap => FieldRules {
            required: &["noises"],
            optional: &["power"],
        },
        Command::Fig3 | Command::Fig4 | Command::Sweep => FieldRules {
            required: &[],
            optional: &["snr_db_range", "noise_ratios"],
        },
        Command::Fig5 => FieldRules {
            required: &[],
            optional: &[
                "receiver_counts",
                "capacity_ratio",
                "geometric_mean_bits",
                "power",
            ],
        },
    }
}

/// Validate the field set against the command, fill in defaults, and check
/// every value. Lists missing or unexpected fields by name.
pub fn resolve(command: Command, doc: ConfigDoc) -> Result<ExperimentConfig, CliError> {
    let rules = rules_for(command);
    let present = doc.present_fields();

    let missing: Vec<&str> = rules
        .required
        .iter()
        .copied()
        .filter(|f| !present.contains(f))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::MissingFields {
            command: command.as_str(),
            fields: missing.join(", "),
        });
    }
    let unexpected: Vec<&str> = present
        .iter()
        .copied()
        .filter(|f| !rules.required.contains(f) && !rules.optional.contains(f))
        .collect();
    if !unexpected.is_empty() {
        return Err(CliError::UnexpectedFields {
            command: command.as_str(),
            fields: unexpected.join(", "),
        });
    }

    let mut cfg = ExperimentConfig {
        command,
        rates: doc.rates,
        capacities: doc.capacities,
        noises: doc.noises,
        power: doc.power,
        snr_db_range: doc.snr_db_range,
        noise_ratios: doc.noise_ratios,
        receiver_counts: doc.receiver_counts,
        capacity_ratio: doc.capacity_ratio,
        geometric_mean_bits: doc.geometric_mean_bits,
        output_path: doc
            .output_path
            .unwrap_or_else(|| format!("{}.csv", command.as_str())),
        emit_svg: doc.emit_svg.unwrap_or(false),
    };

    match command {
        Command::Bounds => {
            RateProfile::new(cfg.rates.clone().unwrap())?;
            if let Some(c) = &cfg.capacities {
                CapacityProfile::new(c.clone())?;
            }
        }
        Command::Gap => {
            cfg.power = Some(cfg.power.unwrap_or(DEFAULT_POWER));
            AwgnBroadcast::new(cfg.power.unwrap(), cfg.noises.clone().unwrap())?;
        }
        Command::Fig3 | Command::Fig4 | Command::Sweep => {
            let range = cfg.snr_db_range.unwrap_or(DEFAULT_SNR_DB_RANGE);
            validate_snr_range(range)?;
            cfg.snr_db_range = Some(range);
            let ratios = cfg
                .noise_ratios
                .unwrap_or_else(|| DEFAULT_NOISE_RATIOS.to_vec());
            validate_noise_ratios(&ratios)?;
            cfg.noise_ratios = Some(ratios);
        }
        Command::Fig5 => {
            let counts = cfg.receiver_counts.unwrap_or_else(|| {
                (DEFAULT_RECEIVER_RANGE.0..=DEFAULT_RECEIVER_RANGE.1).collect()
            });
            if counts.is_empty() {
                return Err(CliError::InvalidField {
                    what: "receiver_counts",
                    message: "must be non-empty".to_string(),
                });
            }
            if let Some(bad) = counts.iter().find(|&&t| t < 2) {
                return Err(CliError::InvalidField {
                    what: "receiver_counts",
                    message: format!("every count must be at least 2 (got {bad})"),
                });
            }
            cfg.receiver_counts = Some(counts);
            let ratio = cfg.capacity_ratio.unwrap_or(DEFAULT_CAPACITY_RATIO);
            if !ratio.is_finite() || ratio < 1.0 {
                return Err(CliError::InvalidField {
                    what: "capacity_ratio",
                    message: format!("must be a finite value >= 1 (got {ratio})"),
                });
            }
            cfg.capacity_ratio = Some(ratio);
            let geo = cfg.geometric_mean_bits.unwrap_or(DEFAULT_GEO_MEAN_BITS);
            if !geo.is_finite() || geo <= 0.0 {
                return Err(CliError::InvalidField {
                    what: "geometric_mean_bits",
                    message: format!("must be a positive finite value (got {geo})"),
                });
            }
            cfg.geometric_mean_bits = Some(geo);
            let power = cfg.power.unwrap_or(DEFAULT_POWER);
            if !power.is_finite() || power <= 0.0 {
                return Err(CliError::InvalidField {
                    what: "power",
                    message: format!("must be a positive finite value (got {power})"),
                });
            }
            cfg.power = Some(power);
        }
    }
    Ok(cfg)
}

fn validate_snr_range(range: (f64, f64, f64)) -> Result<(), CliError> {
    let (start, stop, step) = range;
    if !start.is_finite() || !stop.is_finite() || !step.is_finite() || step <= 0.0 {
        return Err(CliError::InvalidField {
            what: "snr_db_range",
            message: format!("start/stop must be finite and step positive (got {range:?})"),
        });
    }
    if start > stop {
        return Err(CliError::InvalidField {
            what: "snr_db_range",
            message: format!("empty range: start {start} exceeds stop {stop}"),
        });
    }
    Ok(())
}

fn validate_noise_ratios(ratios: &[f64]) -> Result<(), CliError> {
    if ratios.is_empty() {
        return Err(CliError::InvalidField {
            what: "noise_ratios",
            message: "must be non-empty".to_string(),
        });
    }
    for &r in ratios {
        if !r.is_finite() || r <= 0.0 || r > 1.0 {
            return Err(CliError::InvalidField {
                what: "noise_ratios",
                message: format!("each ratio N_1/N_2 must lie in (0, 1] (got {r})"),
            });
        }
    }
    Ok(())
}

/// "start:stop:step" (the flag form of `snr_db_range`).
pub fn parse_snr_range_arg(text: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = |message: String| CliError::InvalidField {
        what: "snr-db",
        message,
    };
    if parts.len() != 3 {
        return Err(bad(format!("expected start:stop:step, got `{text}`")));
    }
    let mut nums = [0.0; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| bad(format!("`{part}` is not a number")))?;
    }
    Ok((nums[0], nums[1], nums[2]))
}

/// "2..64" (inclusive) or a comma list "2,4,8".
pub fn parse_receivers_arg(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |message: String| CliError::InvalidField {
        what: "receivers",
        message,
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{lo}` is not a count")))?;
        let hi: usize = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad(format!("`{hi}` is not a count")))?;
        if lo > hi {
            return Err(bad(format!("empty range `{text}`")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| bad(format!("`{p}` is not a count")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// SweepTable
// ---------------------------------------------------------------------------

/// Rectangular numeric table plus metadata, the unit of output.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
    /// Column whose value splits rows into chart series (e.g. noise_ratio).
    series_column: Option<usize>,
}

impl SweepTable {
    pub fn new(columns: Vec<&'static str>, series_column: Option<usize>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata: Vec::new(),
            series_column,
        }
    }

    pub fn add_metadata(&mut self, key: &str, value: String) {
        self.metadata.push((key.to_string(), value));
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::InvalidField {
                what: "sweep row",
                message: format!(
                    "expected {} values, got {}",
                    self.columns.len(),
                    row.len()
                ),
            });
        }
        if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
            return Err(CliError::InvalidField {
                what: "sweep row",
                message: format!("non-finite value {bad}"),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    /// Columns rendered as charts when SVG emission is requested.
    pub fn chart_columns(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, name)| name.starts_with("ratio_") || name.starts_with("gap_"))
            .map(|(i, _)| i)
            .collect()
    }

    /// Render as CSV: `#` metadata lines, header, then one record per row
    /// with 12 significant digits and `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.metadata {
            let _ = writeln!(out, "# {key} = {value}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_sig(v, 12)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Format with the given number of significant digits, positional where
/// reasonable and scientific otherwise, trailing zeros trimmed. The output
/// is locale-independent (`.` decimal separator) and deterministic.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    debug_assert!((1..=17).contains(&sig));
    if x == 0.0 {
        return "0".to_string();
    }
    let formatted = format!("{:.*e}", sig - 1, x);
    let (mantissa, exponent) = formatted.rsplit_once('e').expect("exponential format");
    let exponent: i32 = exponent.parse().expect("numeric exponent");
    let negative = mantissa.starts_with('-');
    let digits: Vec<u8> = mantissa.bytes().filter(|b| b.is_ascii_digit()).collect();

    fn trim_zeros(d: &[u8]) -> String {
        let end = d.iter().rposition(|&b| b != b'0').map_or(0, |i| i + 1);
        d[..end].iter().map(|&b| b as char).collect()
    }

    let body = if exponent < -4 || exponent >= sig as i32 {
        let frac = trim_zeros(&digits[1..]);
        if frac.is_empty() {
            format!("{}e{}", digits[0] as char, exponent)
        } else {
            format!("{}.{}e{}", digits[0] as char, frac, exponent)
        }
    } else {
        let point = exponent + 1;
        if point <= 0 {
            format!("0.{}{}", "0".repeat(-point as usize), trim_zeros(&digits))
        } else if point as usize >= digits.len() {
            let mut s: String = digits.iter().map(|&b| b as char).collect();
            s.push_str(&"0".repeat(point as usize - digits.len()));
            s
        } else {
            let int_part: String = digits[..point as usize].iter().map(|&b| b as char).collect();
            let frac = trim_zeros(&digits[point as usize..]);
            if frac.is_empty() {
                int_part
            } else {
                format!("{int_part}.{frac}")
            }
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

/// Inclusive grid `start, start+step, ..., stop` (within rounding slop).
pub fn snr_grid(range: (f64, f64, f64)) -> Vec<f64> {
    let (start, stop, step) = range;
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let x = start + step * k as f64;
        if x > stop + step * 1e-9 {
            break;
        }
        out.push(x);
        k += 1;
    }
    out
}

/// Two-receiver channel with `N_1 = 1`, `N_2 = 1 / ratio`, `P = 10^(db/10)`.
pub fn two_user_channel(snr_db: f64, noise_ratio: f64) -> AwgnBroadcast {
    let power = 10f64.powf(snr_db / 10.0);
    AwgnBroadcast::new(power, vec![1.0, 1.0 / noise_ratio]).expect("grid channels are valid")
}

/// Geometric capacity profile: `count` capacities with `C_1/C_T = spread`
/// and the prescribed geometric mean.
pub fn geometric_capacity_profile(count: usize, spread: f64, geo_mean: f64) -> CapacityProfile {
    assert!(count >= 2, "geometric profile needs at least two receivers");
    let top = geo_mean * spread.sqrt();
    let ln_step = -(spread.ln()) / (count - 1) as f64;
    let values = (0..count)
        .map(|t| top * (ln_step * t as f64).exp())
        .collect();
    CapacityProfile::new(values).expect("geometric capacities are ordered")
}

fn config_metadata(table: &mut SweepTable, cfg: &ExperimentConfig) {
    table.add_metadata("tool", format!("sepbound {TOOL_VERSION}"));
    table.add_metadata("command", cfg.command.as_str().to_string());
    let json = serde_json::to_string(cfg).expect("config serializes");
    table.add_metadata("config", json);
}

const GAP_METRIC_NOTE: &str = "gap_thm4_bits backs off only the most degraded receiver via the \
     tight power recursion; gap_uniform_backoff_bits is the smallest uniform per-receiver \
     backoff, and the two coincide whenever the recursion fits the power budget (always for \
     two receivers)";

fn run_bounds(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let rates = RateProfile::new(cfg.rates.clone().expect("validated"))?;
    let t = rates.receiver_count();
    let capacities = match &cfg.capacities {
        Some(values) => CapacityProfile::new(values.clone())?,
        // Flat capacities: the combined factor then reduces to the refined one.
        None => CapacityProfile::new(vec![1.0; t])?,
    };
    let mut table = SweepTable::new(
        vec![
            "receivers",
            "naive_factor",
            "refined_factor",
            "combined_factor",
            "worst_case_factor",
            "asymptotic_factor",
        ],
        None,
    );
    config_metadata(&mut table, cfg);
    if cfg.capacities.is_none() {
        table.add_metadata(
            "note",
            "no capacities supplied; combined_factor computed against a flat capacity profile"
                .to_string(),
        );
    }
    table.push_row(vec![
        t as f64,
        naive_factor(t)?.factor,
        refined_factor(&rates).factor,
        combined_factor(&rates, &capacities)?.factor,
        worst_case_factor(rates.min_rate(), rates.max_rate(), t)?.factor,
        asymptotic_factor(rates.min_rate(), rates.max_rate())?.factor,
    ])?;
    Ok(table)
}

fn run_gap(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let channel = AwgnBroadcast::new(
        cfg.power.expect("validated"),
        cfg.noises.clone().expect("validated"),
    )?;
    let report = construction_gap(&channel);
    let backoff = uniform_backoff_distance(&channel);
    let mut table = SweepTable::new(
        vec![
            "receivers",
            "gap_thm4_bits",
            "alpha_last",
            "corollary_log2T",
            "corollary_noise_range_bits",
            "gap_uniform_backoff_bits",
        ],
        None,
    );
    config_metadata(&mut table, cfg);
    table.add_metadata("note", GAP_METRIC_NOTE.to_string());
    table.push_row(vec![
        channel.receiver_count() as f64,
        report.gap_bits,
        report.alpha_last,
        report.receiver_count_bound,
        report.noise_range_bound,
        backoff,
    ])?;
    Ok(table)
}

/// (noise_ratio, snr_db) grid in emission order: ratio-major, snr-minor.
fn ratio_snr_grid(cfg: &ExperimentConfig) -> Vec<(f64, f64)> {
    let snrs = snr_grid(cfg.snr_db_range.expect("validated"));
    let ratios = cfg.noise_ratios.clone().expect("validated");
    let mut params = Vec::with_capacity(snrs.len() * ratios.len());
    for ratio in &ratios {
        for snr in &snrs {
            params.push((*ratio, *snr));
        }
    }
    params
}

/// Matched-source scheme ratios for one two-receiver grid point.
fn scheme_ratio_point(snr_db: f64, noise_ratio: f64) -> SweepPoint {
    let channel = two_user_channel(snr_db, noise_ratio);
    let capacities = capacities_from_awgn(&channel);
    let rates = RateProfile::new(capacities.values().to_vec()).expect("capacities are a profile");
    let reference = joint_reference_rate(&rates, &capacities).expect("lengths match");
    let ts = time_sharing_rate(&rates, &capacities).expect("lengths match");
    let os = optimal_separation_rate(&rates, &channel).expect("lengths match");
    let mut results = std::collections::BTreeMap::new();
    results.insert(TIME_SHARING, ts.rate / reference.rate);
    results.insert(OPTIMAL_SEPARATION, os.rate / reference.rate);
    SweepPoint {
        snr_db,
        results,
        params_digest: format!("noise_ratio={noise_ratio} {}", channel.digest()),
    }
}

fn run_fig3(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let params = ratio_snr_grid(cfg);
    let points: Vec<SweepPoint> = params
        .par_iter()
        .map(|&(ratio, snr)| scheme_ratio_point(snr, ratio))
        .collect();
    debug_assert!(labels_consistent(&points));

    let mut table = SweepTable::new(
        vec![
            "snr_db",
            "noise_ratio",
            "ratio_time_sharing",
            "ratio_optimal_separation",
        ],
        Some(1),
    );
    config_metadata(&mut table, cfg);
    for (&(ratio, snr), point) in params.iter().zip(&points) {
        table.push_row(vec![
            snr,
            ratio,
            point.results[TIME_SHARING],
            point.results[OPTIMAL_SEPARATION],
        ])?;
    }
    Ok(table)
}

fn run_fig4(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let params = ratio_snr_grid(cfg);
    let rows: Vec<Vec<f64>> = params
        .par_iter()
        .map(|&(ratio, snr)| {
            let channel = two_user_channel(snr, ratio);
            let report = construction_gap(&channel);
            let backoff = uniform_backoff_distance(&channel);
            vec![
                snr,
                ratio,
                report.gap_bits,
                backoff,
                report.receiver_count_bound,
            ]
        })
        .collect();

    let mut table = SweepTable::new(
        vec![
            "snr_db",
            "noise_ratio",
            "gap_thm4_bits",
            "gap_uniform_backoff_bits",
            "corollary_log2T",
        ],
        Some(1),
    );
    config_metadata(&mut table, cfg);
    table.add_metadata("note", GAP_METRIC_NOTE.to_string());
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

fn run_fig5(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let counts = cfg.receiver_counts.clone().expect("validated");
    let spread = cfg.capacity_ratio.expect("validated");
    let geo_mean = cfg.geometric_mean_bits.expect("validated");
    let power = cfg.power.expect("validated");

    let points: Vec<(usize, SweepPoint)> = counts
        .par_iter()
        .map(|&t| {
            let capacities = geometric_capacity_profile(t, spread, geo_mean);
            let channel =
                noises_from_capacities(&capacities, power).expect("derived channel is valid");
            let rates =
                RateProfile::new(capacities.values().to_vec()).expect("capacities are a profile");
            let results = relative_rates(&rates, &channel).expect("lengths match");
            let point = SweepPoint {
                snr_db: t as f64,
                results,
                params_digest: format!("T={t} spread={spread} geo_mean={geo_mean} P={power}"),
            };
            (t, point)
        })
        .collect();
    debug_assert!(labels_consistent(
        &points.iter().map(|(_, p)| p.clone()).collect::<Vec<_>>()
    ));

    let mut table = SweepTable::new(
        vec![
            "T",
            "ratio_time_sharing",
            "ratio_optimal_separation",
            "ratio_two_dof",
        ],
        None,
    );
    config_metadata(&mut table, cfg);
    for (t, point) in points {
        table.push_row(vec![
            t as f64,
            point.results[TIME_SHARING],
            point.results[OPTIMAL_SEPARATION],
            point.results[TWO_DOF],
        ])?;
    }
    Ok(table)
}

fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    let params = ratio_snr_grid(cfg);
    let rows: Vec<Vec<f64>> = params
        .par_iter()
        .map(|&(ratio, snr)| {
            let point = scheme_ratio_point(snr, ratio);
            let channel = two_user_channel(snr, ratio);
            let report = construction_gap(&channel);
            let backoff = uniform_backoff_distance(&channel);
            vec![
                snr,
                ratio,
                point.results[TIME_SHARING],
                point.results[OPTIMAL_SEPARATION],
                report.gap_bits,
                backoff,
            ]
        })
        .collect();

    let mut table = SweepTable::new(
        vec![
            "snr_db",
            "noise_ratio",
            "ratio_time_sharing",
            "ratio_optimal_separation",
            "gap_thm4_bits",
            "gap_uniform_backoff_bits",
        ],
        Some(1),
    );
    config_metadata(&mut table, cfg);
    table.add_metadata("note", GAP_METRIC_NOTE.to_string());
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

/// Execute the resolved config and assemble its table.
pub fn run(cfg: &ExperimentConfig) -> Result<SweepTable, CliError> {
    match cfg.command {
        Command::Bounds => run_bounds(cfg),
        Command::Gap => run_gap(cfg),
        Command::Fig3 => run_fig3(cfg),
        Command::Fig4 => run_fig4(cfg),
        Command::Fig5 => run_fig5(cfg),
        Command::Sweep => run_sweep(cfg),
    }
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// Write the CSV (and charts, when requested); returns the written paths.
pub fn emit(table: &SweepTable, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let csv_path = PathBuf::from(&cfg.output_path);
    let io_err = |path: &PathBuf, e: std::io::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    std::fs::write(&csv_path, table.to_csv()).map_err(|e| io_err(&csv_path, e))?;
    let mut written = vec![csv_path.clone()];

    if cfg.emit_svg && table.rows().len() >= 2 {
        let stem = csv_path.with_extension("");
        for col in table.chart_columns() {
            let svg = line_chart_svg(table, col);
            let path = PathBuf::from(format!("{}_{}.svg", stem.display(), table.columns()[col]));
            std::fs::write(&path, svg).map_err(|e| io_err(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Minimal static line chart: x = first column, one polyline per series,
/// linear axes with labeled ticks.
fn line_chart_svg(table: &SweepTable, col: usize) -> String {
    const WIDTH: f64 = 800.0;
    const HEIGHT: f64 = 520.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 170.0;
    const TOP: f64 = 44.0;
    const BOTTOM: f64 = 56.0;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;

    // Split rows into series on the series column, preserving first-seen order.
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in table.rows() {
        let label = match table.series_column {
            Some(s) => format!("{} = {}", table.columns()[s], fmt_sig(row[s], 6)),
            None => table.columns()[col].to_string(),
        };
        let point = (row[0], row[col]);
        match series.iter_mut().find(|(l, _)| *l == label) {
            Some((_, pts)) => pts.push(point),
            None => series.push((label, vec![point])),
        }
    }

    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, pts) in &series {
        for &(x, y) in pts {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if x_hi - x_lo < 1e-300 {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi - y_lo < 1e-300 {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    let pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    let map_x = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let map_y = |y: f64| TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="26" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        LEFT + plot_w / 2.0,
        table.columns()[col]
    );

    // Ticks and grid.
    for i in 0..5 {
        let f = i as f64 / 4.0;
        let xv = x_lo + f * (x_hi - x_lo);
        let px = map_x(xv);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            TOP + plot_h
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            TOP + plot_h + 20.0,
            fmt_sig(xv, 6)
        );

        let yv = y_lo + f * (y_hi - y_lo);
        let py = map_y(yv);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            fmt_sig(yv, 6)
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        table.columns()[0]
    );

    // Series polylines and legend.
    for (i, (label, pts)) in series.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let mut coords = String::new();
        for &(x, y) in pts {
            let _ = write!(coords, "{:.2},{:.2} ", map_x(x), map_y(y));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.trim_end()
        );
        let ly = TOP + 18.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{ly:.2}" width="10" height="10" fill="{color}"/>"#,
            LEFT + plot_w + 12.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{label}</text>"#,
            LEFT + plot_w + 26.0,
            ly + 9.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
