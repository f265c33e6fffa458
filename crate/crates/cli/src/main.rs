//! `sawmark`: embed, extract and verify ROI digests in grayscale images.
//!
//! stdout carries only machine-readable results; diagnostics go to stderr.
//! Exit status: 0 success/pass, 1 authentication failure, 2 any other error
//! (reported on stderr as `{"error":"<code>","message":"..."}`).

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sawmark::{Rect, VerifyMode};

#[derive(Parser)]
#[command(
    name = "sawmark",
    version,
    about = "Strict-authentication watermarking for grayscale images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic ultrasound-like phantom as PGM.
    Gen {
        #[arg(long, default_value_t = 800)]
        width: usize,
        #[arg(long, default_value_t = 600)]
        height: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Hash the ROI and embed the digest; prints the digest hex.
    Embed {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(short, long)]
        manifest: PathBuf,
        #[command(flatten)]
        wm: WmArgs,
    },
    /// Read the embedded digest; prints its hex.
    Extract {
        /// PGM or baseline JPEG.
        input: PathBuf,
        #[arg(short, long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        wm: WmArgs,
    },
    /// Authenticate an image; prints a JSON report.
    Verify {
        /// PGM or baseline JPEG.
        input: PathBuf,
        #[arg(short, long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        #[command(flatten)]
        wm: WmArgs,
    },
    /// Embed, compress, decode and extract over planes × qualities.
    Sweep {
        input: PathBuf,
        /// Comma-separated planes.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        planes: Vec<u8>,
        /// Range `lo-hi` or comma-separated list.
        #[arg(long, default_value = "40-100", value_parser = parse_qualities)]
        qualities: Qualities,
        /// CSV destination; without it the CSV goes to stdout and the
        /// summary to stderr.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        wm: WmArgs,
    },
    /// PSNR between two images; prints dB or `inf`.
    Psnr { a: PathBuf, b: PathBuf },
    /// Encode a PGM as baseline JPEG; prints size and compression as JSON.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        quality: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Decode a baseline JPEG to PGM.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Flags shared by the watermarking commands. Plane, guard and ROI default
/// to the manifest's values where one is given.
#[derive(Args, Clone)]
struct WmArgs {
    /// Mapping key; must be coprime with the embeddable block count.
    #[arg(long, default_value_t = 37)]
    key: u64,
    /// Bit plane 1–3 (default 1).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    plane: Option<u8>,
    /// Guard band in blocks around the ROI (default 1).
    #[arg(long)]
    guard: Option<usize>,
    /// Pixels above this value are content.
    #[arg(long, default_value_t = 0)]
    fg_threshold: u8,
    /// Use HMAC-SHA-256 with this key instead of plain SHA-256.
    #[arg(long)]
    hash_key: Option<String>,
    /// ROI as x,y,w,h; overrides detection and the manifest.
    #[arg(long, value_parser = parse_roi)]
    roi: Option<Rect>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Reference,
}

impl From<Mode> for VerifyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => VerifyMode::Strict,
            Mode::Reference => VerifyMode::Reference,
        }
    }
}

#[derive(Clone, Debug)]
struct Qualities(Vec<u32>);

fn parse_roi(s: &str) -> Result<Rect, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, w, h] => Ok(Rect::new(x, y, w, h)),
        _ => Err("expected x,y,w,h".into()),
    }
}

fn parse_qualities(s: &str) -> Result<Qualities, String> {
    let num = |p: &str| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}"));
    let list = match s.split_once('-') {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {lo}-{hi}"));
            }
            (lo..=hi).collect()
        }
        None => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    Ok(Qualities(list))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen {
            width,
            height,
            seed,
            output,
        } => commands::gen(width, height, seed, &output),
        Command::Embed {
            input,
            output,
            manifest,
            wm,
        } => commands::embed(&input, &output, &manifest, &wm),
        Command::Extract {
            input,
            manifest,
            wm,
        } => commands::extract(&input, manifest.as_deref(), &wm),
        Command::Verify {
            input,
            manifest,
            mode,
            wm,
        } => commands::verify(&input, manifest.as_deref(), mode.into(), &wm),
        Command::Sweep {
            input,
            planes,
            qualities,
            csv,
            wm,
        } => commands::sweep(&input, &planes, &qualities.0, csv.as_deref(), &wm),
        Command::Psnr { a, b } => commands::psnr(&a, &b),
        Command::Compress {
            input,
            quality,
            output,
        } => commands::compress(&input, quality, &output),
        Command::Decompress { input, output } => commands::decompress(&input, &output),
    };
    match result {
        Ok(commands::Outcome::Success) => ExitCode::SUCCESS,
        Ok(commands::Outcome::AuthFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
