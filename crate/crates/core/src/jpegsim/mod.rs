//! The compression channel.
//!
//! Two paths produce the same pixels:
//! - [`roundtrip`] runs DCT → quantize → dequantize → IDCT → round/clamp on
//!   every block directly;
//! - [`encode_jpeg`] / [`decode_jpeg`] do the same around a real baseline
//!   JFIF bytestream (zigzag scan, DC differences, Huffman coding).
//!
//! Both share [`analyze_block`] and [`reconstruct_block`], so entropy coding
//! is the only difference between them and it is lossless.

mod codec;
mod dct;
mod quant;
mod zigzag;

pub use codec::{decode_jpeg, decode_jpeg_with, encode_jpeg, encode_jpeg_with, JpegBytes};
pub use dct::{dct2, idct2, LEVEL_SHIFT};
pub use quant::{dequantize, quality_table, quantize, QTable, BASE_LUMA_TABLE};
pub use zigzag::{unzigzag, zigzag, ZIGZAG};

use thiserror::Error;

use crate::exec::Exec;
use crate::pixmap::{block_grid, Block, Image};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JpegError {
    #[error("quality {0} outside 1..=100")]
    QualityOutOfRange(u32),
    #[error("quantization table contains a zero step")]
    InvalidQuantTable,
    #[error("stream does not start with SOI")]
    MissingSoi,
    #[error("unexpected marker 0xFF{0:02X}")]
    UnexpectedMarker(u8),
    #[error("unsupported JPEG mode: {0}")]
    Unsupported(&'static str),
    #[error("malformed {0} segment")]
    MalformedSegment(&'static str),
    #[error("scan references undefined {0} table")]
    MissingTable(&'static str),
    #[error("invalid Huffman code in scan data")]
    InvalidHuffmanCode,
    #[error("coefficient value outside the baseline range")]
    CoefficientOverflow,
    #[error("truncated stream")]
    TruncatedStream,
}

impl JpegError {
    /// Stable kebab-case identifier for machine-readable reporting.
    pub fn code(&self) -> &'static str {
        match self {
            JpegError::QualityOutOfRange(_) => "quality-out-of-range",
            JpegError::InvalidQuantTable => "invalid-quant-table",
            JpegError::MissingSoi => "missing-soi",
            JpegError::UnexpectedMarker(_) => "unexpected-marker",
            JpegError::Unsupported(_) => "unsupported-jpeg",
            JpegError::MalformedSegment(_) => "malformed-segment",
            JpegError::MissingTable(_) => "missing-table",
            JpegError::InvalidHuffmanCode => "invalid-huffman-code",
            JpegError::CoefficientOverflow => "coefficient-overflow",
            JpegError::TruncatedStream => "truncated-stream",
        }
    }
}

/// DCT coefficients of one block, natural order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBlock {
    pub coeffs: [f64; 64],
}

impl CoeffBlock {
    pub fn zero() -> Self {
        CoeffBlock { coeffs: [0.0; 64] }
    }
}

/// Quantizer output for one block, natural order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelBlock {
    pub levels: [i32; 64],
}

impl LevelBlock {
    pub fn zero() -> Self {
        LevelBlock { levels: [0; 64] }
    }
}

/// Encoder half of the channel for one block: forward DCT then quantize.
pub fn analyze_block(block: &Block, q: &QTable, level_shift: bool) -> LevelBlock {
    quantize(&dct2(block, level_shift), q)
}

/// Decoder half: dequantize, inverse DCT, round half away from zero and
/// clamp to the 8-bit range.
pub fn reconstruct_block(levels: &LevelBlock, q: &QTable, level_shift: bool) -> [u8; 64] {
    let spatial = idct2(&dequantize(levels, q), level_shift);
    spatial.values.map(|v| v.round().clamp(0.0, 255.0) as u8)
}

/// Simulated compress/decompress of `img` at `quality`.
pub fn roundtrip(img: &Image, quality: u32, level_shift: bool) -> Result<Image, JpegError> {
    roundtrip_with(img, quality, level_shift, Exec::default())
}

pub fn roundtrip_with(
    img: &Image,
    quality: u32,
    level_shift: bool,
    exec: Exec,
) -> Result<Image, JpegError> {
    let q = QTable::for_quality(quality)?;
    let padded = img.pad_to_blocks();
    let grid = block_grid(&padded).expect("padded image is block aligned");
    let blocks = exec.map(&grid, |&pos| {
        let levels = analyze_block(&padded.block(pos), &q, level_shift);
        reconstruct_block(&levels, &q, level_shift)
    });
    let mut out = padded;
    for (pos, samples) in grid.iter().zip(&blocks) {
        out.put_block(*pos, samples);
    }
    Ok(out.crop(img.width(), img.height()))
}
