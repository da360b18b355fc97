//! Command-line front end for the hdcap library: SNR sweeps (`curve`),
//! closed-form zero-SNR tables (`lowsnr`), and seeded Monte Carlo detector
//! checks (`simulate`), emitted as CSV or JSON.
//!
//! SNR is in dB at this boundary and linear inside the library; the
//! conversion is exactly 10·log10. Exit codes: 0 success, 1 usage error,
//! 2 numeric failure, 3 simulation deviation beyond the acceptance bound.

mod config;
mod emit;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use config::{
    load_file, resolve_grid, resolve_output, ChannelArg, ChannelInputs, CliError, OutputFormat,
    SchemeInputs, SchemeKind,
};
use emit::{ChannelEcho, CurveEmit, LowsnrRow, SimulateEmit};
use hdcap::channel::ChannelSpec;
use hdcap::metrics::{sweep, Scheme};
use hdcap::psk::{psk_lowsnr, psk_lowsnr_asymptotic, PskConfig};
use hdcap::simcheck::{simulate_oofsk, simulate_psk};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_DEVIATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hdcap",
    version,
    about = "Capacity, bit energy, and detector simulation for hard-decision PSK and on-off FSK"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep rate, spectral efficiency, and bit energy over an SNR grid.
    Curve(CurveArgs),
    /// Zero-SNR derivative table for PSK across a list of M values.
    Lowsnr(LowsnrArgs),
    /// Monte Carlo detector run checked against the analytic matrix.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SchemeArgs {
    /// Modulation scheme.
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    /// Constellation size / tone count M.
    #[arg(long)]
    m: Option<u32>,
    /// Duty cycle in (0,1]; required for oofsk, fixed to 1 for fsk.
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
}

#[derive(Args)]
struct ChannelFlags {
    /// Channel model; rician means fading unknown to both ends.
    #[arg(long, value_enum)]
    channel: Option<ChannelArg>,
    /// Rician factor d^2/gamma^2 of a fading channel (default 1).
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
    /// Total fading power d^2 + gamma^2 (default 1, with --k).
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Line-of-sight amplitude d; the gain on awgn.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Diffuse fading power gamma^2 (with --d, instead of --k/--omega).
    #[arg(long, allow_negative_numbers = true)]
    gamma_sq: Option<f64>,
}

impl ChannelFlags {
    fn into_inputs(self) -> ChannelInputs {
        ChannelInputs {
            kind: self.channel,
            k: self.k,
            omega: self.omega,
            d: self.d,
            gamma_sq: self.gamma_sq,
        }
    }
}

#[derive(Args)]
struct OutputFlags {
    /// Output format on stdout.
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Emit only the summary block.
    #[arg(long)]
    quiet: bool,
    /// JSON file with defaults for any omitted flag.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    channel: ChannelFlags,
    #[command(flatten)]
    out: OutputFlags,
    /// Grid start in dB (default -50).
    #[arg(long, allow_negative_numbers = true)]
    min_db: Option<f64>,
    /// Grid end in dB (default 20).
    #[arg(long, allow_negative_numbers = true)]
    max_db: Option<f64>,
    /// Number of grid points (default 60).
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args)]
struct LowsnrArgs {
    /// Scheme; the table is defined for psk only.
    #[arg(long, value_enum)]
    scheme: Option<SchemeKind>,
    /// Comma-separated M values (default 2,4,8,16,32,64). The
    /// continuous-phase limit row is always appended.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<u32>>,
    #[command(flatten)]
    channel: ChannelFlags,
    #[command(flatten)]
    out: OutputFlags,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    channel: ChannelFlags,
    #[command(flatten)]
    out: OutputFlags,
    /// Operating point in dB.
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed; identical seeds reproduce reports bit for bit.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = match cli.command {
        Command::Curve(args) => run_curve(args),
        Command::Lowsnr(args) => run_lowsnr(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match run {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn echo(kind: ChannelArg, spec: &ChannelSpec) -> ChannelEcho {
    ChannelEcho { kind, d: spec.d(), gamma_sq: spec.gamma_sq() }
}

fn run_curve(args: CurveArgs) -> Result<ExitCode, CliError> {
    let file = load_file(args.out.config.as_deref())?;
    let (scheme_kind, m, nu, scheme) = SchemeInputs {
        scheme: args.scheme.scheme,
        m: args.scheme.m,
        nu: args.scheme.nu,
    }
    .merged(&file)
    .resolve()?;
    let (chan_kind, spec) =
        args.channel.into_inputs().merged(file.channel.as_ref()).resolve()?;
    let grid_db = resolve_grid(args.min_db, args.max_db, args.points, &file)?;
    let grid: Vec<f64> = grid_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();
    let result = sweep(&scheme, &spec, &grid)?;
    let out = CurveEmit {
        scheme: scheme_kind,
        m,
        nu,
        channel: echo(chan_kind, &spec),
        grid_db: &grid_db,
        result: &result,
        quiet: args.out.quiet,
    };
    match resolve_output(args.out.output, &file) {
        OutputFormat::Csv => print!("{}", emit::curve_csv(&out)),
        OutputFormat::Json => println!("{}", emit::curve_json(&out)),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_lowsnr(args: LowsnrArgs) -> Result<ExitCode, CliError> {
    let file = load_file(args.out.config.as_deref())?;
    if let Some(kind) = args.scheme.or(file.scheme) {
        if kind != SchemeKind::Psk {
            return Err(CliError::Usage(
                "the zero-SNR table is defined for --scheme psk only".into(),
            ));
        }
    }
    let (chan_kind, spec) =
        args.channel.into_inputs().merged(file.channel.as_ref()).resolve()?;
    let ms = args
        .m
        .or_else(|| file.m.map(|m| vec![m]))
        .unwrap_or_else(|| vec![2, 4, 8, 16, 32, 64]);
    if ms.is_empty() {
        return Err(CliError::Usage("--m needs at least one value".into()));
    }
    let mut rows = Vec::with_capacity(ms.len() + 1);
    for &m in &ms {
        rows.push(LowsnrRow { m: Some(m), summary: psk_lowsnr(&PskConfig::new(m)?, &spec) });
    }
    rows.push(LowsnrRow { m: None, summary: psk_lowsnr_asymptotic(&spec) });
    let channel = echo(chan_kind, &spec);
    match resolve_output(args.out.output, &file) {
        OutputFormat::Csv => print!("{}", emit::lowsnr_csv(&rows)),
        OutputFormat::Json => println!("{}", emit::lowsnr_json(&channel, &rows)),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_simulate(args: SimulateArgs) -> Result<ExitCode, CliError> {
    let file = load_file(args.out.config.as_deref())?;
    let (scheme_kind, m, nu, scheme) = SchemeInputs {
        scheme: args.scheme.scheme,
        m: args.scheme.m,
        nu: args.scheme.nu,
    }
    .merged(&file)
    .resolve()?;
    let (chan_kind, spec) =
        args.channel.into_inputs().merged(file.channel.as_ref()).resolve()?;
    let snr_db = args
        .snr_db
        .or(file.snr_db)
        .ok_or_else(|| CliError::Usage("missing --snr-db".into()))?;
    let trials = args
        .trials
        .or(file.trials)
        .ok_or_else(|| CliError::Usage("missing --trials".into()))?;
    let seed = args
        .seed
        .or(file.seed)
        .ok_or_else(|| CliError::Usage("missing --seed".into()))?;
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let snr = 10f64.powf(snr_db / 10.0);
    let report = match &scheme {
        Scheme::Psk(cfg) => simulate_psk(cfg, &spec, snr, trials, seed)?,
        Scheme::Oofsk(cfg) => simulate_oofsk(cfg, &spec, snr, trials, seed)?,
    };
    let out = SimulateEmit {
        scheme: scheme_kind,
        m,
        nu,
        channel: echo(chan_kind, &spec),
        snr_db,
        report: &report,
        quiet: args.out.quiet,
    };
    match resolve_output(args.out.output, &file) {
        OutputFormat::Csv => print!("{}", emit::simulate_csv(&out)),
        OutputFormat::Json => println!("{}", emit::simulate_json(&out)),
    }
    Ok(if report.passes() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_DEVIATION) })
}
