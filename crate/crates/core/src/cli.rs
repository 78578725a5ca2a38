//! Command-line frontend.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::access::{compare_technologies, default_profiles, load_profiles, rate_grid};
use crate::chart::{self, Panel};
use crate::config::{validate_document, LoadedConfig};
use crate::error::{Error, Result};
use crate::format;
use crate::scenario::{parse_scenarios, sweep};
use crate::trend::{fit, project, TrendParams, TrendSample};

#[derive(Debug, Parser)]
#[command(
    name = "ranwatt",
    version,
    about = "Energy-per-bit accounting for radio access networks"
)]
pub struct Cli {
    /// Ignore unknown configuration keys instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the placement scenarios over the RU range.
    Sweep(SweepArgs),
    /// Access-technology comparison.
    #[command(subcommand)]
    Access(AccessCommand),
    /// Equipment efficiency trend.
    #[command(subcommand)]
    Trend(TrendCommand),
    /// Show every applied default and override, then check the configuration.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV destination; `-` for standard output. Overrides `output.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset, e.g. `S1,S3`.
    #[arg(long)]
    pub scenarios: Option<String>,
    /// Also write one SVG chart per panel.
    #[arg(long)]
    pub chart: bool,
    /// Logarithmic y axis for charts.
    #[arg(long, requires = "chart")]
    pub log_y: bool,
}

#[derive(Debug, Subcommand)]
pub enum AccessCommand {
    /// Energy per bit of each profile over a grid of user rates.
    Compare {
        /// Catalog source for profiles that reference device roles.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        profiles: Option<PathBuf>,
        /// `lo:hi:log|lin[:points]`, rates in bit/s with optional k/M/G suffix.
        #[arg(long, default_value = "1M:1G:log")]
        rates: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TrendCommand {
    /// Fit `year,value` samples; prints `e0,mu,r_squared`.
    Fit {
        /// CSV file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Reference year; defaults to the earliest sample.
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project the trend over whole years `from..=to`.
    Project {
        #[arg(long)]
        e0: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        t0: f64,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `1M:1G:log`, `1e6:1e9:lin:50` and similar.
pub fn parse_rates(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |m: &str| Error::schema("--rates", format!("{m} in `{spec}`"));
    if !(3..=4).contains(&parts.len()) {
        return Err(bad("expected lo:hi:log|lin[:points]"));
    }
    let lo = parse_si(parts[0]).ok_or_else(|| bad("bad lower rate"))?;
    let hi = parse_si(parts[1]).ok_or_else(|| bad("bad upper rate"))?;
    let log = match parts[2] {
        "log" => true,
        "lin" => false,
        _ => return Err(bad("scale must be `log` or `lin`")),
    };
    let n = match parts.get(3) {
        Some(p) => p.parse().map_err(|_| bad("bad point count"))?,
        None => 25,
    };
    rate_grid(lo, hi, n, log)
}

fn parse_si(s: &str) -> Option<f64> {
    let s = s.trim();
    let (num, mult) = match s.chars().last()? {
        'k' | 'K' => (&s[..s.len() - 1], 1e3),
        'M' => (&s[..s.len() - 1], 1e6),
        'G' => (&s[..s.len() - 1], 1e9),
        'T' => (&s[..s.len() - 1], 1e12),
        _ => (s, 1.0),
    };
    num.parse::<f64>().ok().map(|v| v * mult)
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::io("reading standard input", e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn load_config(path: Option<&Path>, lenient: bool) -> Result<LoadedConfig> {
    let loaded = match path {
        Some(p) => LoadedConfig::from_path(p, lenient)?,
        None => LoadedConfig::defaults(),
    };
    for k in &loaded.unknown_keys {
        eprintln!("warning: ignored unknown key `{k}`");
    }
    Ok(loaded)
}

/// Writes `bytes` to `path`, or standard output for `None` / `-`.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, bytes).map_err(|e| Error::io(format!("writing {}", p.display()), e))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("writing standard output", e))
        }
    }
}

fn cmd_sweep(args: &SweepArgs, lenient: bool) -> Result<()> {
    let loaded = load_config(args.config.as_deref(), lenient)?;
    let resolved = loaded.config.resolve()?;
    let scenarios = match &args.scenarios {
        Some(s) => parse_scenarios(s)?,
        None => resolved.scenarios.clone(),
    };
    let points = sweep(&resolved.model, &scenarios, resolved.n_ru_min..=resolved.n_ru_max)?;
    let csv = format::sweep_csv_string(&points)?;

    let out = args.out.clone().unwrap_or_else(|| PathBuf::from(&resolved.output.csv));
    emit(Some(&out), csv.as_bytes())?;

    if args.chart {
        let dir = if out == Path::new("-") {
            PathBuf::from(".")
        } else {
            out.parent().map(Path::to_path_buf).unwrap_or_default()
        };
        for panel in Panel::ALL {
            let path = dir.join(format!("{}_{}.svg", resolved.output.chart_prefix, panel.slug()));
            let svg = chart::render(&points, panel, args.log_y);
            fs::write(&path, svg).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        }
    }
    Ok(())
}

fn cmd_access(cmd: &AccessCommand, lenient: bool) -> Result<()> {
    let AccessCommand::Compare {
        config,
        profiles,
        rates,
        out,
    } = cmd;
    let loaded = load_config(config.as_deref(), lenient)?;
    let catalog = loaded.config.catalog_doc().into_catalog()?;
    let profiles = match profiles {
        Some(p) => load_profiles(&read_text(p)?, &catalog, lenient)?,
        None => default_profiles(&catalog)?,
    };
    let grid = parse_rates(rates)?;
    let rows = compare_technologies(&profiles, &grid)?;
    let mut buf = Vec::new();
    format::write_access_csv(&rows, &mut buf)?;
    emit(out.as_deref(), &buf)
}

fn cmd_trend(cmd: &TrendCommand) -> Result<()> {
    let mut buf = Vec::new();
    let out = match cmd {
        TrendCommand::Fit { input, t0, out } => {
            let samples = format::read_series_csv(&read_text(input)?)?;
            let t0 = t0.unwrap_or_else(|| samples.iter().map(|s| s.year).fold(f64::INFINITY, f64::min));
            let t0 = if t0.is_finite() { t0 } else { 0.0 };
            format::write_fit_csv(&fit(&samples, t0)?, &mut buf)?;
            out
        }
        TrendCommand::Project {
            e0,
            mu,
            t0,
            from,
            to,
            step,
            out,
        } => {
            let params = TrendParams::new(*e0, *mu, *t0)?;
            if step.is_nan() || *step <= 0.0 || from.is_nan() || to.is_nan() || to < from {
                return Err(Error::domain(format!(
                    "need from <= to and step > 0, got {from}..{to} by {step}"
                )));
            }
            let n = ((to - from) / step + 1e-9).floor() as usize;
            let series: Vec<TrendSample> = (0..=n)
                .map(|i| {
                    let year = from + step * i as f64;
                    TrendSample {
                        year,
                        value: project(&params, year),
                    }
                })
                .collect();
            format::write_series_csv(&series, &mut buf)?;
            out
        }
    };
    emit(out.as_deref(), &buf)
}

fn cmd_validate(config: Option<&Path>, lenient: bool) -> Result<i32> {
    let (source, dir) = match config {
        Some(p) => (read_text(p)?, p.parent().map(Path::to_path_buf)),
        None => (String::new(), None),
    };
    let report = validate_document(&source, lenient, dir.as_deref());
    emit(None, report.render().as_bytes())?;
    Ok(if report.is_valid() { 0 } else { 2 })
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Sweep(args) => cmd_sweep(args, cli.lenient).map(|_| 0),
        Command::Access(cmd) => cmd_access(cmd, cli.lenient).map(|_| 0),
        Command::Trend(cmd) => cmd_trend(cmd).map(|_| 0),
        Command::Validate { config } => cmd_validate(config.as_deref(), cli.lenient),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
