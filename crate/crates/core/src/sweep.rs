//! Robustness sweep: embed, compress through the real codec at each
//! quality, decode, extract, and record survival, size and distortion.

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Exec;
use crate::jpegsim::{decode_jpeg_with, encode_jpeg_with, JpegError};
use crate::pixmap::{psnr, Image, Psnr};
use crate::watermark::{embed, extract, BitPlane, Rect, WatermarkError, WatermarkParams};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Watermark(#[from] WatermarkError),
    #[error(transparent)]
    Jpeg(#[from] JpegError),
    #[error("empty sweep: no planes or no qualities")]
    Empty,
}

impl SweepError {
    pub fn code(&self) -> &'static str {
        match self {
            SweepError::Watermark(e) => e.code(),
            SweepError::Jpeg(e) => e.code(),
            SweepError::Empty => "empty-sweep",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub planes: Vec<BitPlane>,
    pub qualities: Vec<u32>,
    /// Key, guard, thresholds and hash key; the plane field is ignored.
    pub params: WatermarkParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub plane: u8,
    pub quality: u32,
    /// Extracted digest equals the embedded one.
    pub survived: bool,
    pub jpeg_bytes: usize,
    /// `(1 − jpeg_bytes / (width·height)) · 100`.
    pub compression_pct: f64,
    /// Decoded image against the watermarked image before compression.
    pub psnr_db: Psnr,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneSummary {
    pub plane: u8,
    /// Lowest tested quality that survived together with every tested
    /// quality above it; `None` if the highest quality already failed.
    pub threshold: Option<u32>,
    /// Surviving qualities below the threshold (non-empty means the
    /// survival region over the grid is not contiguous).
    pub isolated_survivals: Vec<u32>,
}

impl PlaneSummary {
    pub fn is_contiguous(&self) -> bool {
        self.isolated_survivals.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub planes: Vec<PlaneSummary>,
}

impl SweepReport {
    pub fn row(&self, plane: u8, quality: u32) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.plane == plane && r.quality == quality)
    }

    pub fn summary(&self, plane: u8) -> Option<&PlaneSummary> {
        self.planes.iter().find(|p| p.plane == plane)
    }

    /// Human-readable warnings about non-contiguous survival.
    pub fn warnings(&self) -> Vec<String> {
        self.planes
            .iter()
            .filter(|p| !p.is_contiguous())
            .map(|p| {
                let list: Vec<String> = p.isolated_survivals.iter().map(u32::to_string).collect();
                format!(
                    "plane {}: survival is not contiguous; also survived at quality {} below threshold {}",
                    p.plane,
                    list.join(","),
                    p.threshold.map_or("none".to_string(), |t| t.to_string()),
                )
            })
            .collect()
    }

    /// CSV with a leading `#` comment line documenting the columns, then
    /// `plane,quality,survived,compression_pct,psnr_db`.
    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# compression_pct = (1 - jpeg_bytes / (width*height)) * 100; psnr_db = decoded JPEG vs watermarked image before compression"
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["plane", "quality", "survived", "compression_pct", "psnr_db"])?;
        for r in &self.rows {
            w.write_record([
                r.plane.to_string(),
                r.quality.to_string(),
                r.survived.to_string(),
                format!("{:.4}", r.compression_pct),
                r.psnr_db.to_string(),
            ])?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

/// Runs every `(plane, quality)` cell. Rows come back ordered by plane,
/// then by ascending quality, whatever the execution order.
pub fn run_sweep(img: &Image, roi: Rect, config: &SweepConfig) -> Result<SweepReport, SweepError> {
    run_sweep_with(img, roi, config, Exec::default())
}

pub fn run_sweep_with(
    img: &Image,
    roi: Rect,
    config: &SweepConfig,
    exec: Exec,
) -> Result<SweepReport, SweepError> {
    if config.planes.is_empty() || config.qualities.is_empty() {
        return Err(SweepError::Empty);
    }
    let mut planes = config.planes.clone();
    planes.sort();
    planes.dedup();
    let mut qualities = config.qualities.clone();
    qualities.sort();
    qualities.dedup();

    let mut marked = Vec::with_capacity(planes.len());
    for &plane in &planes {
        let params = config.params.clone().with_plane(plane);
        let (image, manifest) = embed(img, roi, &params)?;
        marked.push((params, image, manifest.digest));
    }

    let cells: Vec<(usize, u32)> = (0..planes.len())
        .flat_map(|p| qualities.iter().map(move |&q| (p, q)))
        .collect();
    // Each cell already runs sequentially; parallelism is across cells.
    let rows = exec.try_map(&cells, |&(p, quality)| -> Result<SweepRow, SweepError> {
        let (params, image, expected) = &marked[p];
        let jpeg = encode_jpeg_with(image, quality, Exec::Sequential)?;
        let decoded = decode_jpeg_with(jpeg.as_bytes(), Exec::Sequential)?;
        let survived = extract(&decoded, roi, params)? == *expected;
        Ok(SweepRow {
            plane: params.plane.index(),
            quality,
            survived,
            jpeg_bytes: jpeg.len(),
            compression_pct: jpeg.compression_pct(),
            psnr_db: psnr(&decoded, image).expect("same dimensions"),
        })
    })?;

    let summaries = planes
        .iter()
        .map(|plane| summarize(plane.index(), &rows))
        .collect();
    Ok(SweepReport {
        rows,
        planes: summaries,
    })
}

fn summarize(plane: u8, rows: &[SweepRow]) -> PlaneSummary {
    let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.plane == plane).collect();
    // rows are in ascending quality; walk down from the top
    let mut threshold = None;
    for r in mine.iter().rev() {
        if !r.survived {
            break;
        }
        threshold = Some(r.quality);
    }
    let isolated_survivals = mine
        .iter()
        .filter(|r| r.survived && threshold.is_none_or(|t| r.quality < t))
        .map(|r| r.quality)
        .collect();
    PlaneSummary {
        plane,
        threshold,
        isolated_survivals,
    }
}
