use std::fs;
use std::io::Write;
use std::path::Path;

use sawmark::pixmap::{self, gen_phantom, load_pgm, save_pgm};
use sawmark::sweep::{run_sweep, SweepConfig, SweepError};
use sawmark::watermark::{
    detect_roi, embed as embed_digest, extract as extract_digest, verify_reference, verify_strict,
};
use sawmark::{
    decode_jpeg, encode_jpeg, BitPlane, EmbedManifest, Image, JpegError, PixmapError, Rect,
    VerifyMode, WatermarkError, WatermarkParams,
};
use serde_json::json;

use crate::WmArgs;

pub enum Outcome {
    Success,
    AuthFailed,
}

pub struct CliError {
    code: &'static str,
    message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.code, "message": self.message }).to_string()
    }
}

macro_rules! coded {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::new(e.code(), e.to_string())
            }
        }
    )*};
}
coded!(WatermarkError, PixmapError, JpegError, SweepError);

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::new("io-error", format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes)
        .map_err(|e| CliError::new("io-error", format!("{}: {e}", path.display())))
}

/// PGM or JPEG, told apart by the SOI marker.
fn load_image(path: &Path) -> Result<Image> {
    let bytes = read(path)?;
    if bytes.starts_with(&[0xFF, 0xD8]) {
        Ok(decode_jpeg(&bytes)?)
    } else {
        Ok(load_pgm(&bytes)?)
    }
}

fn load_manifest(path: &Path) -> Result<EmbedManifest> {
    let text =
        String::from_utf8(read(path)?).map_err(|e| CliError::new("bad-manifest", e.to_string()))?;
    Ok(EmbedManifest::from_json(&text)?)
}

fn plane(index: u8) -> Result<BitPlane> {
    Ok(BitPlane::new(index)?)
}

fn embed_params(wm: &WmArgs) -> Result<WatermarkParams> {
    Ok(WatermarkParams {
        key: wm.key,
        plane: plane(wm.plane.unwrap_or(1))?,
        guard: wm.guard.unwrap_or(1),
        fg_threshold: wm.fg_threshold,
        hash_key: wm.hash_key.as_ref().map(|k| k.as_bytes().to_vec()),
    })
}

/// ROI and parameters for the reading side: flags win over the manifest,
/// which wins over the defaults.
fn reader_setup(
    img: &Image,
    manifest: Option<&EmbedManifest>,
    wm: &WmArgs,
) -> Result<(Rect, WatermarkParams)> {
    let mut params = embed_params(wm)?;
    if let Some(m) = manifest {
        if wm.roi.is_none() && wm.guard.is_none() {
            m.check_dims(img.width(), img.height())?;
        }
        params.plane = match wm.plane {
            Some(p) => plane(p)?,
            None => m.plane,
        };
        params.guard = wm.guard.unwrap_or(m.guard);
    }
    let roi = wm
        .roi
        .or(manifest.map(|m| m.roi))
        .ok_or_else(|| CliError::new("missing-roi", "give --manifest or --roi"))?;
    Ok((roi, params))
}

pub fn gen(width: usize, height: usize, seed: u64, output: &Path) -> Result<Outcome> {
    let img = gen_phantom(width, height, seed)?;
    write(output, &save_pgm(&img))?;
    Ok(Outcome::Success)
}

pub fn embed(input: &Path, output: &Path, manifest_path: &Path, wm: &WmArgs) -> Result<Outcome> {
    let img = load_pgm(&read(input)?)?;
    let params = embed_params(wm)?;
    let roi = match wm.roi {
        Some(r) => r,
        None => detect_roi(&img, params.fg_threshold)?,
    };
    let (marked, manifest) = embed_digest(&img, roi, &params)?;
    write(output, &save_pgm(&marked))?;
    write(
        manifest_path,
        format!("{}\n", manifest.to_json()).as_bytes(),
    )?;
    println!("{}", manifest.digest);
    Ok(Outcome::Success)
}

pub fn extract(input: &Path, manifest: Option<&Path>, wm: &WmArgs) -> Result<Outcome> {
    let img = load_image(input)?;
    let manifest = manifest.map(load_manifest).transpose()?;
    let (roi, params) = reader_setup(&img, manifest.as_ref(), wm)?;
    println!("{}", extract_digest(&img, roi, &params)?);
    Ok(Outcome::Success)
}

pub fn verify(
    input: &Path,
    manifest: Option<&Path>,
    mode: VerifyMode,
    wm: &WmArgs,
) -> Result<Outcome> {
    let img = load_image(input)?;
    let manifest = manifest.map(load_manifest).transpose()?;
    let (roi, params) = reader_setup(&img, manifest.as_ref(), wm)?;
    let report = match mode {
        VerifyMode::Strict => {
            if manifest.as_ref().is_some_and(|m| m.keyed_hash) && params.hash_key.is_none() {
                return Err(CliError::new(
                    "missing-hash-key",
                    "manifest records a keyed hash; give --hash-key",
                ));
            }
            verify_strict(&img, roi, &params)?
        }
        VerifyMode::Reference => {
            let m = manifest.as_ref().ok_or_else(|| {
                CliError::new("missing-manifest", "reference mode needs --manifest")
            })?;
            verify_reference(extract_digest(&img, roi, &params)?, m.digest)
        }
    };
    println!("{}", report.to_json());
    Ok(if report.passed() {
        Outcome::Success
    } else {
        Outcome::AuthFailed
    })
}

pub fn sweep(
    input: &Path,
    planes: &[u8],
    qualities: &[u32],
    csv: Option<&Path>,
    wm: &WmArgs,
) -> Result<Outcome> {
    let img = load_pgm(&read(input)?)?;
    let params = embed_params(wm)?;
    let roi = match wm.roi {
        Some(r) => r,
        None => detect_roi(&img, params.fg_threshold)?,
    };
    let config = SweepConfig {
        planes: planes.iter().map(|&p| plane(p)).collect::<Result<_>>()?,
        qualities: qualities.to_vec(),
        params,
    };
    let report = run_sweep(&img, roi, &config)?;
    let warnings = report.warnings();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let summary = json!({
        "roi": roi.to_array(),
        "thresholds": report.planes,
        "warnings": warnings,
    })
    .to_string();
    let csv_text = report.to_csv_string();
    match csv {
        Some(path) => {
            write(path, csv_text.as_bytes())?;
            println!("{summary}");
        }
        None => {
            std::io::stdout()
                .write_all(csv_text.as_bytes())
                .map_err(|e| CliError::new("io-error", e.to_string()))?;
            eprintln!("{summary}");
        }
    }
    Ok(Outcome::Success)
}

pub fn psnr(a: &Path, b: &Path) -> Result<Outcome> {
    println!("{}", pixmap::psnr(&load_image(a)?, &load_image(b)?)?);
    Ok(Outcome::Success)
}

pub fn compress(input: &Path, quality: u32, output: &Path) -> Result<Outcome> {
    let img = load_pgm(&read(input)?)?;
    let jpeg = encode_jpeg(&img, quality)?;
    write(output, jpeg.as_bytes())?;
    println!(
        "{}",
        json!({ "bytes": jpeg.len(), "compression_pct": (jpeg.compression_pct() * 1e4).round() / 1e4 })
    );
    Ok(Outcome::Success)
}

pub fn decompress(input: &Path, output: &Path) -> Result<Outcome> {
    let img = decode_jpeg(&read(input)?)?;
    write(output, &save_pgm(&img))?;
    Ok(Outcome::Success)
}
