use clap::Parser;
use sepbound::cli::{self, CliError, ConfigDoc};
use std::path::PathBuf;

/// Separation and time-sharing loss bounds for source broadcasting, with
/// sweep presets and CSV/SVG output.
#[derive(Parser, Debug)]
#[command(name = "sepbound", version, arg_required_else_help = true)]
struct Args {
    /// bounds | gap | fig3 | fig4 | fig5 | sweep
    command: String,

    /// Per-receiver source rates, bits per source symbol (non-increasing).
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,

    /// Per-receiver point-to-point capacities, bits per channel use.
    #[arg(long, value_delimiter = ',')]
    capacities: Option<Vec<f64>>,

    /// Per-receiver noise powers (non-decreasing).
    #[arg(long, value_delimiter = ',')]
    noises: Option<Vec<f64>>,

    /// Transmit power, linear units.
    #[arg(long)]
    power: Option<f64>,

    /// SNR grid in dB as start:stop:step, e.g. -30:50:1.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,

    /// Noise ratios N_1/N_2 for the two-receiver sweeps.
    #[arg(long = "noise-ratios", value_delimiter = ',')]
    noise_ratios: Option<Vec<f64>>,

    /// Receiver counts for fig5: a comma list or an inclusive range like 2..64.
    #[arg(long)]
    receivers: Option<String>,

    /// Capacity spread C_max/C_min for fig5.
    #[arg(long = "capacity-ratio")]
    capacity_ratio: Option<f64>,

    /// Geometric mean of the fig5 capacity profile, bits per channel use.
    #[arg(long = "geo-mean-bits")]
    geo_mean_bits: Option<f64>,

    /// JSON config document; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path (default <command>.csv).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also emit one SVG line chart per ratio/gap column.
    #[arg(long)]
    svg: bool,
}

fn run(args: Args) -> Result<(), CliError> {
    let command = cli::Command::parse(&args.command)?;

    let base = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigRead {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            ConfigDoc::from_json(&text)?
        }
        None => ConfigDoc::default(),
    };

    let overrides = ConfigDoc {
        command: Some(command),
        rates: args.rates,
        capacities: args.capacities,
        noises: args.noises,
        power: args.power,
        snr_db_range: args.snr_db.as_deref().map(cli::parse_snr_range_arg).transpose()?,
        noise_ratios: args.noise_ratios,
        receiver_counts: args.receivers.as_deref().map(cli::parse_receivers_arg).transpose()?,
        capacity_ratio: args.capacity_ratio,
        geometric_mean_bits: args.geo_mean_bits,
        output_path: args.out.map(|p| p.display().to_string()),
        emit_svg: if args.svg { Some(true) } else { None },
    };

    let cfg = cli::resolve(command, base.merged_with(overrides))?;
    let table = cli::run(&cfg)?;
    let written = cli::emit(&table, &cfg)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() {
    let args = Args::parse();
    if let Err(e) = run(args) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
