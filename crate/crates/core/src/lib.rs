//! Strict-authentication watermarking for 8-bit grayscale medical images.
//!
//! The region of interest (the smallest rectangle around all foreground
//! pixels) is hashed with SHA-256, and the 256-bit digest is written into
//! dark background blocks outside that rectangle at one bit per 8×8 block.
//! Because each bit occupies a whole JPEG block, it can survive baseline
//! JPEG quantization; the [`jpegsim`] module provides both a block-level
//! simulator of that channel and a real baseline JFIF encoder/decoder.
//!
//! Modules:
//! - [`pixmap`]: image container, PGM I/O, PSNR, histogram, synthetic phantom.
//! - [`jpegsim`]: DCT/IDCT, quality-scaled quantization, baseline JPEG codec.
//! - [`watermark`]: ROI detection, digest, keyed block mapping, embed/extract/verify.
//! - [`sweep`]: quality sweep reproducing the robustness experiment.
//!
//! Block-level work runs on rayon when the `parallel` feature is enabled
//! (the default); every entry point also has an [`Exec`]-taking variant so
//! the sequential path stays available for comparison.

pub mod exec;
pub mod jpegsim;
pub mod pixmap;
pub mod sweep;
pub mod watermark;

pub use exec::Exec;
pub use jpegsim::{decode_jpeg, encode_jpeg, roundtrip, JpegBytes, JpegError, QTable};
pub use pixmap::{Image, PixmapError, Psnr};
pub use watermark::{
    BitPlane, Digest256, EmbedManifest, Rect, VerifyMode, VerifyReport, WatermarkError,
    WatermarkParams,
};
