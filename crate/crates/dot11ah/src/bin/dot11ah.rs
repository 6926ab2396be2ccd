use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dot11ah::error::{Error, Result};
use dot11ah::range::{default_columns, RangeColumn, RangeTable};
use dot11ah::scenario::{load_scenario, AggregationDoc, Scenario};
use dot11ah::svg::sweep_plot;
use dot11ah::sweep::{self, parse_gi, run_sweep, Aggregation, PayloadRange, SweepSpec};
use dot11ah::validate::{run_validation, ValidateConfig};
use dot11ah_core::profiles::{AckScheme, ProfileId};
use dot11ah_core::propagation::{propagation_delay_us, PathLossKind, PathLossModel};

#[derive(Parser)]
#[command(
    name = "dot11ah",
    version,
    about = "802.11ah vs 802.11a/n/ac range and throughput models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum range per path-loss model and radio.
    Range(RangeArgs),
    /// Single-frame throughput sweep over payload and PER.
    Throughput(SweepArgs),
    /// A-MPDU throughput sweep; aggregation defaults to auto.
    Ampdu(SweepArgs),
    /// Monte Carlo check of the expected backoff.
    Validate(ValidateArgs),
    /// Regenerate every comparison table and plot into a directory.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct RangeArgs {
    /// Profile label; all of its presets become columns. Default: the comparison set.
    #[arg(long)]
    profile: Option<ProfileId>,
    #[arg(long, requires = "profile")]
    preset: Option<String>,
    /// Path-loss models, comma separated. Default: all four.
    #[arg(long, value_delimiter = ',')]
    model: Vec<PathLossKind>,
    /// Append published values and deviation columns.
    #[arg(long)]
    compare_paper: bool,
    /// Exit 1 when any cell is n/a.
    #[arg(long)]
    strict: bool,
    /// Scenario file; its profile becomes the only column.
    #[arg(long, conflicts_with = "profile")]
    scenario: Option<PathBuf>,
    /// Write range.csv into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    profile: Option<ProfileId>,
    #[arg(long)]
    preset: Option<String>,
    /// N, START:END or START:END:STEP bytes.
    #[arg(long)]
    payload: Option<PayloadRange>,
    /// PER values, comma separated.
    #[arg(long, value_delimiter = ',')]
    per: Vec<f64>,
    /// off, auto or a fixed subframe count.
    #[arg(long)]
    aggregation: Option<Aggregation>,
    /// normal, ndp or block.
    #[arg(long)]
    ack: Option<AckScheme>,
    #[arg(long, conflicts_with = "distance_m")]
    delta_us: Option<f64>,
    /// Derive the propagation delay from a distance in metres.
    #[arg(long)]
    distance_m: Option<f64>,
    /// long or short.
    #[arg(long)]
    gi: Option<String>,
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Write <command>.csv / <command>.svg into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Outputs to produce, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "csv")]
    format: Vec<Format>,
    /// Append published values and deviation columns.
    #[arg(long)]
    compare_paper: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// Profiles, comma separated. Default: ah-long-header,ac.
    #[arg(long, value_delimiter = ',')]
    profile: Vec<ProfileId>,
    /// PER grid, comma separated. Default: 0,0.1,0.3,0.5.
    #[arg(long, value_delimiter = ',')]
    per: Vec<f64>,
    #[arg(long)]
    payload: Option<u32>,
    #[arg(long, default_value_t = dot11ah::validate::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = dot11ah::validate::DEFAULT_FRAMES)]
    frames: u64,
    /// Also write validate.txt into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, default_value = "report")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Range(args) => cmd_range(args),
        Command::Throughput(args) => cmd_sweep(args, "throughput", Aggregation::Off),
        Command::Ampdu(args) => cmd_sweep(args, "ampdu", Aggregation::Auto),
        Command::Validate(args) => cmd_validate(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read scenario {}: {e}", path.display())))?;
    load_scenario(&text)
}

/// Opens `<dir>/<name>`, or stdout when no directory was given.
fn output(dir: Option<&Path>, name: &str) -> Result<Box<dyn Write>> {
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            eprintln!("writing {}", path.display());
            Ok(Box::new(BufWriter::new(fs::File::create(path)?)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn cmd_range(args: RangeArgs) -> Result<ExitCode> {
    let models: Vec<PathLossModel> = if args.model.is_empty() {
        PathLossModel::all().to_vec()
    } else {
        args.model.iter().map(|&k| PathLossModel::new(k)).collect()
    };
    let columns = match (&args.scenario, args.profile) {
        (Some(path), _) => vec![RangeColumn::custom(read_scenario(path)?.profile)],
        (None, Some(id)) => RangeColumn::for_profile(id, args.preset.as_deref())?,
        (None, None) => default_columns(),
    };
    let table = RangeTable::compute(&models, columns);
    table.write_csv(
        output(args.out.as_deref(), "range.csv")?,
        args.compare_paper,
    )?;
    if args.strict && table.has_unreachable() {
        eprintln!("strict: at least one link closes nowhere (n/a cell)");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs, name: &str, default_aggregation: Aggregation) -> Result<ExitCode> {
    let scenario = args.scenario.as_deref().map(read_scenario).transpose()?;
    let doc = scenario
        .as_ref()
        .map(|s| s.sweep.clone())
        .unwrap_or_default();
    let base = scenario.as_ref().map(|s| s.profile);
    let id = match (args.profile, base) {
        (Some(id), _) => id,
        (None, Some(p)) => p.id,
        (None, None) => return Err(Error::Usage("--profile or --scenario is required".into())),
    };
    let base = base.filter(|p| p.id == id);

    let mut spec = SweepSpec::new(id);
    spec.preset = args.preset.or(doc.preset);
    if let Some(gi) = args.gi.as_deref().or(doc.gi.as_deref()) {
        spec.gi = parse_gi(gi)?;
    }
    spec.aggregation = match (args.aggregation, doc.aggregation) {
        (Some(a), _) => a,
        (None, Some(AggregationDoc::Fixed(k))) => format!("{k}").parse()?,
        (None, Some(AggregationDoc::Mode(m))) => m.parse()?,
        (None, None) => default_aggregation,
    };
    spec.ack_scheme = match (args.ack, doc.ack) {
        (Some(a), _) => Some(a),
        (None, Some(a)) => Some(a.parse()?),
        (None, None) => None,
    };
    let profile = spec.resolve_profile(base)?;
    spec.payload = match (args.payload, doc.payload) {
        (Some(p), _) => p,
        (None, Some(p)) => PayloadRange {
            start: p.start,
            end: p.end,
            step: p.step,
        },
        (None, None) => sweep::default_payload_range(&profile),
    };
    if !args.per.is_empty() {
        spec.per_list = args.per;
    } else if let Some(per) = doc.per {
        spec.per_list = per;
    }
    spec.delta_us = match (args.delta_us, args.distance_m) {
        (Some(d), _) => d,
        (None, Some(m)) => propagation_delay_us(m),
        (None, None) => doc.delta_us.unwrap_or(0.0),
    };

    let rows = run_sweep(&profile, &spec).map_err(|e| match e {
        Error::Model(m) => Error::Usage(m.to_string()),
        other => other,
    })?;
    let dir = args.out.as_deref();
    if args.format.contains(&Format::Csv) {
        sweep::write_csv(
            output(dir, &format!("{name}.csv"))?,
            &rows,
            &spec,
            args.compare_paper,
        )?;
    }
    if args.format.contains(&Format::Svg) {
        let title = format!("{} {} throughput vs payload", profile.id, name);
        let mut out = output(dir, &format!("{name}.svg"))?;
        out.write_all(sweep_plot(&rows, &title).as_bytes())?;
        out.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: ValidateArgs) -> Result<ExitCode> {
    let mut config = ValidateConfig {
        seed: args.seed,
        n_frames: args.frames,
        ..ValidateConfig::default()
    };
    if !args.profile.is_empty() {
        config.profiles = args.profile;
    }
    if !args.per.is_empty() {
        config.per_list = args.per;
    }
    if let Some(p) = args.payload {
        config.payload_bytes = p;
    }
    if config.n_frames == 0 {
        return Err(Error::Usage("--frames must be at least 1".into()));
    }
    let report = run_validation(&config)?;
    report.write_text(io::stdout().lock())?;
    if let Some(dir) = args.out.as_deref() {
        let mut out = output(Some(dir), "validate.txt")?;
        report.write_text(&mut out)?;
        out.flush()?;
    }
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    for path in dot11ah::reproduce::reproduce(&args.out)? {
        writeln!(out, "{}", path.display())?;
    }
    Ok(ExitCode::SUCCESS)
}
