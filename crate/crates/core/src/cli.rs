//! The `addrhash` command line.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data errors
//! (unreadable or malformed traces and config files).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use clap::{Args, Parser, Subcommand};

use crate::entropy::{bucket, simulate_lookups, sweep};
use crate::error::Error;
use crate::hash::{BitWindow, HashScheme};
use crate::mask::{
    analytic_rejection_rate, approx_rejection_rate, empirical_rejection_rate, mask_size_for,
    power_of_two_window, rejection_curve, RejectionModel, DEFAULT_MASK_SIZES,
};
use crate::svg;
use crate::trace::{parse_trace, synthesize, SynthConfig, Trace};

/// Seed used by randomized commands when `--seed` is not given.
pub const DEFAULT_SEED: u64 = SynthConfig::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(
    name = "addrhash",
    version,
    about = "Address hashing schemes, information content and hash-mask sizing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic address trace.
    Synth(SynthArgs),
    /// Summarize a trace.
    Stats(StatsArgs),
    /// Information content of one scheme and bit window.
    Info(WindowArgs),
    /// Information content over a range of bit windows (CSV, optional SVG).
    Sweep(SweepArgs),
    /// Unwanted-rejection rates of M x 1 hash masks, or mask sizing.
    Mask(MaskArgs),
    /// Replay a trace and report binary-search lookups per frame.
    Lookup(WindowArgs),
    /// List hash scheme identifiers and output widths.
    Schemes,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// key = value file with stations, frames, skew, seed, prefix.
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    stations: Option<usize>,
    #[arg(long)]
    frames: Option<usize>,
    #[arg(long)]
    skew: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Vendor prefix `aa:bb:cc@weight`; repeatable, replaces the defaults.
    #[arg(long = "prefix")]
    prefixes: Vec<String>,
    /// Serial allocation: `uniform`, `batched` or `batched:<mean>:<gap>`.
    #[arg(long)]
    suffixes: Option<String>,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    trace: String,
    /// Number of most-referenced addresses to list.
    #[arg(long, default_value_t = 10)]
    top: usize,
}

#[derive(Debug, Args)]
struct WindowArgs {
    #[arg(long)]
    trace: String,
    #[arg(long, value_parser = parse_scheme)]
    scheme: HashScheme,
    /// Bit window `start:length`.
    #[arg(long, value_parser = parse_window)]
    window: BitWindow,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    trace: String,
    #[arg(long, value_parser = parse_scheme)]
    scheme: HashScheme,
    /// Window lengths `lo..hi` (inclusive) or a single value.
    #[arg(long = "m", default_value = "1..8", value_parser = parse_range)]
    lengths: RangeInclusive<u64>,
    /// Start bits `lo..hi` (inclusive); defaults to every start.
    #[arg(long = "i", value_parser = parse_range)]
    starts: Option<RangeInclusive<u64>>,
    #[arg(long, default_value = "-")]
    out: String,
    /// Also write an SVG line chart, one curve per window length.
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Debug, Args)]
struct MaskArgs {
    /// (1 - 1/M)^k, the default model.
    #[arg(long, group = "model")]
    analytic: bool,
    /// 1 - k/M.
    #[arg(long, group = "model")]
    approx: bool,
    /// Monte-Carlo estimate with random addresses.
    #[arg(long, group = "model")]
    empirical: bool,
    /// Wanted address counts: `n`, `lo..hi` or a comma list of either.
    #[arg(long = "k", value_parser = parse_list)]
    k: Option<CountList>,
    /// Mask sizes: `n`, `lo..hi` or a comma list of either.
    #[arg(long = "M", value_parser = parse_list)]
    mask_sizes: Option<CountList>,
    /// Report the mask size needed to reject this fraction of unwanted frames.
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value = "crc32", value_parser = parse_scheme)]
    scheme: HashScheme,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long)]
    svg: Option<String>,
}

fn parse_scheme(s: &str) -> Result<HashScheme, String> {
    s.parse::<HashScheme>()
        .map_err(|_| format!("expected one of {}", HashScheme::NAMES.join(", ")))
}

fn parse_window(s: &str) -> Result<BitWindow, String> {
    s.parse::<BitWindow>().map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("{t:?} is not a non-negative integer"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok(lo..=hi)
        }
        None => num(s).map(|v| v..=v),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CountList(Vec<u64>);

fn parse_list(s: &str) -> Result<CountList, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.extend(parse_range(part)?);
    }
    Ok(CountList(out))
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn from_error(context: Option<&str>, err: Error) -> Self {
        let msg = match context {
            Some(c) => format!("{c}: {err}"),
            None => err.to_string(),
        };
        match err {
            Error::LineSyntax { .. }
            | Error::EmptyTrace
            | Error::Io(_)
            | Error::Capacity { .. } => Failure::Data(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::from_error(None, err)
    }
}

type CmdResult = Result<(), Failure>;

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_trace(&mut self, path: &str) -> Result<Trace, Failure> {
        let parsed = if path == "-" {
            parse_trace(&mut *self.stdin)
        } else {
            File::open(path)
                .map_err(Error::from)
                .and_then(|f| parse_trace(BufReader::new(f)))
        };
        parsed.map_err(|e| Failure::from_error(Some(path), e))
    }

    fn write_output(&mut self, path: &str, contents: &str) -> CmdResult {
        let written = if path == "-" {
            self.stdout.write_all(contents.as_bytes())
        } else {
            std::fs::write(Path::new(path), contents)
        };
        written.map_err(|e| Failure::Data(format!("{path}: {e}")))
    }
}

/// Runs one command and returns its exit status.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    let mut io = Io { stdin, stdout };
    let result = match cli.command {
        Command::Synth(a) => cmd_synth(&mut io, a),
        Command::Stats(a) => cmd_stats(&mut io, a),
        Command::Info(a) => cmd_info(&mut io, a),
        Command::Sweep(a) => cmd_sweep(&mut io, a),
        Command::Mask(a) => cmd_mask(&mut io, a),
        Command::Lookup(a) => cmd_lookup(&mut io, a),
        Command::Schemes => cmd_schemes(&mut io),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

/// Runs against the process's standard streams.
pub fn main_with_std_streams() -> i32 {
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(
        std::env::args_os(),
        &mut stdin.lock(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

fn cmd_synth(io: &mut Io<'_>, a: SynthArgs) -> CmdResult {
    let mut cfg = SynthConfig::default();
    if let Some(path) = &a.config {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{path}: {e}")))?;
        cfg.apply_text(&text)
            .map_err(|e| Failure::from_error(Some(path), e))?;
    }
    if let Some(v) = a.stations {
        cfg.stations = v;
    }
    if let Some(v) = a.frames {
        cfg.frames = v;
    }
    if let Some(v) = a.skew {
        cfg.skew = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = &a.suffixes {
        cfg.suffixes = v.parse()?;
    }
    if !a.prefixes.is_empty() {
        cfg.prefixes = a
            .prefixes
            .iter()
            .map(|p| p.parse())
            .collect::<Result<_, _>>()?;
    }
    let trace = synthesize(&cfg)?;
    io.write_output(&a.out, &trace.to_text())
}

fn cmd_stats(io: &mut Io<'_>, a: StatsArgs) -> CmdResult {
    let trace = io.read_trace(&a.trace)?;
    let text = trace.stats(a.top).to_string();
    io.write_output("-", &text)
}

fn cmd_info(io: &mut Io<'_>, a: WindowArgs) -> CmdResult {
    let trace = io.read_trace(&a.trace)?;
    let dist = bucket(&trace, &a.scheme, a.window)?;
    let text = format!(
        "scheme\t{}\nwindow\t{}\nframes\t{}\ndistinct\t{}\noccupied_cells\t{}\ninfo_bits\t{:.12}\naddress_entropy_bits\t{:.12}\n",
        a.scheme,
        a.window,
        dist.frame_count(),
        dist.distinct_count(),
        dist.occupied_cells(),
        dist.info_content(),
        dist.address_entropy(),
    );
    io.write_output("-", &text)
}

fn cmd_lookup(io: &mut Io<'_>, a: WindowArgs) -> CmdResult {
    let trace = io.read_trace(&a.trace)?;
    let cost = simulate_lookups(&trace, &a.scheme, a.window)?;
    let text = format!(
        "scheme\t{}\nwindow\t{}\nbaseline_lookups\t{:.12}\navg_lookups\t{:.12}\nlookups_saved\t{:.12}\navg_integer_lookups\t{:.12}\n",
        a.scheme, a.window, cost.baseline, cost.avg_lookups, cost.saved, cost.avg_integer_lookups
    );
    io.write_output("-", &text)
}

fn to_u32_range(r: &RangeInclusive<u64>, flag: &str) -> Result<RangeInclusive<u32>, Failure> {
    let conv = |v: u64| {
        u32::try_from(v).map_err(|_| Failure::Usage(format!("--{flag} value {v} is too large")))
    };
    Ok(conv(*r.start())?..=conv(*r.end())?)
}

fn cmd_sweep(io: &mut Io<'_>, a: SweepArgs) -> CmdResult {
    let lengths = to_u32_range(&a.lengths, "m")?;
    let starts = match &a.starts {
        Some(r) => to_u32_range(r, "i")?,
        None => 0..=a.scheme.width() - 1,
    };
    let trace = io.read_trace(&a.trace)?;
    let report = sweep(&trace, &a.scheme, lengths, starts)?;
    io.write_output(&a.out, &report.to_csv())?;
    if let Some(path) = &a.svg {
        io.write_output(path, &svg::sweep_chart(&report).render())?;
    }
    Ok(())
}

fn cmd_mask(io: &mut Io<'_>, a: MaskArgs) -> CmdResult {
    if let Some(target) = a.target {
        let k = match a.k.as_ref().map(|l| l.0.as_slice()) {
            Some([k]) => *k,
            _ => {
                return Err(Failure::Usage(
                    "--target needs exactly one --k value".into(),
                ))
            }
        };
        let s = mask_size_for(target, k)?;
        let text = format!(
            "target\t{target}\nk\t{k}\nmask_size\t{}\nrate\t{:.6}\nlinear_size\t{}\n",
            s.mask_size, s.rate, s.linear_size
        );
        return io.write_output(&a.out, &text);
    }

    let model = if a.empirical {
        RejectionModel::Empirical {
            scheme: a.scheme.clone(),
            trials: a.trials,
            seed: a.seed,
        }
    } else if a.approx {
        RejectionModel::Approximate
    } else {
        RejectionModel::Analytic
    };
    let ks = a.k.map_or_else(|| (1..=100).collect(), |l| l.0);
    let sizes = a
        .mask_sizes
        .map_or_else(|| DEFAULT_MASK_SIZES.to_vec(), |l| l.0);
    if let Some(&m) = sizes.iter().find(|&&m| m == 0) {
        return Err(Failure::Usage(format!("--M value {m} must be at least 1")));
    }

    if let ([k], [m]) = (ks.as_slice(), sizes.as_slice()) {
        let text = match &model {
            RejectionModel::Analytic => format!("{:.6}\n", analytic_rejection_rate(*k, *m)),
            RejectionModel::Approximate => format!("{:.6}\n", approx_rejection_rate(*k, *m)),
            RejectionModel::Empirical {
                scheme,
                trials,
                seed,
            } => {
                let window = power_of_two_window(*m)?;
                let est = empirical_rejection_rate(scheme, window, *k as usize, *trials, *seed)?;
                format!("{:.6} +/- {:.6}\n", est.rate, est.ci_half_width())
            }
        };
        return io.write_output(&a.out, &text);
    }

    let curve = rejection_curve(&sizes, &ks, &model)?;
    io.write_output(&a.out, &curve.to_csv())?;
    if let Some(path) = &a.svg {
        io.write_output(path, &svg::rejection_chart(&curve).render())?;
    }
    Ok(())
}

fn cmd_schemes(io: &mut Io<'_>) -> CmdResult {
    let mut text = String::from("scheme\twidth\n");
    for scheme in HashScheme::all() {
        text.push_str(&format!("{}\t{}\n", scheme.name(), scheme.width()));
    }
    io.write_output("-", &text)
}
