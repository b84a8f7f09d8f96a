mod bench;
mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lemcodec::codec::encode_with_stats;
use lemcodec::quality::{measure, pow2_prefix, spectrum};
use lemcodec::{decode_with_seed, CodecParams, Mode, ValueRange};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Acceptance(String),
}

impl CliError {
    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Acceptance(_) => 3,
        }
    }
}

impl From<lemcodec::Error> for CliError {
    fn from(e: lemcodec::Error) -> Self {
        match e {
            lemcodec::Error::InvalidParams(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

/// Lossy time-series compression by exchangeable-block substitution.
#[derive(Debug, Parser)]
#[command(name = "lemcodec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress a series into a stream.
    Encode(EncodeArgs),
    /// Reconstruct a series from a stream.
    Decode(DecodeArgs),
    /// Print the six shape measures of one or two series as CSV.
    Analyze(AnalyzeArgs),
    /// Print the amplitude spectrum of a series as CSV.
    Spectrum(SpectrumArgs),
    /// Run the bound-saturation and transform-direction experiments.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct EncodeArgs {
    input: PathBuf,
    output: PathBuf,
    /// standard, residual or delta.
    #[arg(long, default_value = "standard")]
    mode: Mode,
    #[arg(short = 'B', long = "block-size", default_value_t = 32)]
    block_size: usize,
    /// Dictionary slots; 1 selects the hit-count layout.
    #[arg(short = 'D', long = "dict-count", default_value_t = 255)]
    dict_count: u8,
    /// KS significance level.
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Min/max gate tolerance relative to the stored block's range. Off when absent.
    #[arg(long)]
    rtol: Option<f64>,
    /// Largest value of a single hit-count byte.
    #[arg(long = "max-count", default_value_t = 255)]
    max_count: u8,
    /// Lower end of a periodic value range (residual/delta only).
    #[arg(
        long = "range-min",
        requires = "range_max",
        allow_negative_numbers = true
    )]
    range_min: Option<f64>,
    /// Upper end of a periodic value range.
    #[arg(
        long = "range-max",
        requires = "range_min",
        allow_negative_numbers = true
    )]
    range_max: Option<f64>,
    /// Read the input as single-column CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct DecodeArgs {
    input: PathBuf,
    output: PathBuf,
    /// Seed for the permutation of substituted blocks.
    #[arg(long, env = "LEMCODEC_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// One series, or an original and its reconstruction.
    #[arg(num_args = 1..=2, required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    csv: bool,
    /// Write CSV here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    input: PathBuf,
    /// Transform length, a power of two. Defaults to the largest that fits.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    csv: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, env = "LEMCODEC_SEED", default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo trials per transform experiment.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
}

fn encode_cmd(args: &EncodeArgs) -> Result<(), CliError> {
    let range = match (args.range_min, args.range_max) {
        (Some(lo), Some(hi)) => Some(ValueRange::new(lo, hi)?),
        _ => None,
    };
    let params = CodecParams::new(args.mode, args.block_size)
        .with_dict_count(args.dict_count)
        .with_alpha(args.alpha)
        .with_rtol(args.rtol)
        .with_max_count(args.max_count)
        .with_range(range);
    params.validate()?;
    let series = io::read_series(&args.input, args.csv)?;
    let start = Instant::now();
    let (bytes, stats) = encode_with_stats(&series, &params)?;
    let elapsed = start.elapsed();
    std::fs::write(&args.output, &bytes).map_err(|e| CliError::io(&args.output, e))?;

    let original = 8 * series.len() as u64;
    println!("samples: {}", series.len());
    println!("original_bytes: {original}");
    println!("encoded_bytes: {}", bytes.len());
    if original > 0 {
        println!(
            "compression_ratio: {:.4}",
            original as f64 / bytes.len() as f64
        );
    }
    println!("blocks: {}", stats.blocks);
    println!("hits: {}", stats.hits);
    println!("new: {}", stats.new_blocks);
    println!("overwrites: {}", stats.overwrites);
    println!("ks_tests: {}", stats.ks_tests);
    println!("gate_rejections: {}", stats.gate_rejections);
    println!("tail_samples: {}", stats.tail_samples);
    println!("wall_time_s: {:.6}", elapsed.as_secs_f64());
    Ok(())
}

fn decode_cmd(args: &DecodeArgs) -> Result<(), CliError> {
    let bytes = std::fs::read(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let values = decode_with_seed(&bytes, args.seed)?;
    io::write_series(&args.output, &values)
}

fn format_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn analyze_cmd(args: &AnalyzeArgs) -> Result<(), CliError> {
    let reports = args
        .inputs
        .iter()
        .map(|p| Ok(measure(&io::read_series(p, args.csv)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let names: Vec<String> = args
        .inputs
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let mut header = vec!["measure"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = (0..6)
        .map(|i| {
            let mut row = vec![reports[0].rows()[i].0.to_string()];
            row.extend(reports.iter().map(|r| format_opt(r.rows()[i].1)));
            row
        })
        .collect();
    io::write_csv(args.output.as_deref(), &header, &rows)
}

fn spectrum_cmd(args: &SpectrumArgs) -> Result<(), CliError> {
    let series = io::read_series(&args.input, args.csv)?;
    let n = match args.length {
        Some(n) => n,
        None => pow2_prefix(series.len())
            .ok_or_else(|| CliError::Data(format!("{}: empty series", args.input.display())))?,
    };
    let spec = spectrum(&series, n)?;
    let rows: Vec<Vec<String>> = spec
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| vec![(i + 1).to_string(), a.to_string()])
        .collect();
    io::write_csv(args.output.as_deref(), &["bin", "amplitude"], &rows)
}

fn bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    let checks = bench::run(args.seed, args.trials)?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    for c in &checks {
        println!(
            "[{}] {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Acceptance(format!(
            "failed: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Encode(a) => encode_cmd(a),
        Command::Decode(a) => decode_cmd(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Spectrum(a) => spectrum_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
