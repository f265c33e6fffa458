//! The authentication scheme: ROI hashing, keyed block mapping, embedding
//! into dark background blocks, extraction and verification.
//!
//! Bit `x` of the digest (1-based, most significant bit of byte 0 first) is
//! written into block `map_position(key, x, n)` of the raster-ordered list of
//! `n` embeddable blocks. The block's 64 pixels are all set to either 0 or
//! the plane amplitude `2^(plane−1)`; extraction thresholds the block mean at
//! half that amplitude, which keeps the bit readable after JPEG rounds the
//! block to a nearby constant.

mod digest;
mod embed;
mod manifest;
mod mapping;
mod roi;
mod verify;

pub use digest::{digest, Digest256, DIGEST_BITS};
pub use embed::{embed, extract, mapped_blocks, restore};
pub use manifest::EmbedManifest;
pub use mapping::{embeddable_blocks, map_position, sequential_position};
pub use roi::{detect_roi, serialize_roi, Rect};
pub use verify::{verify_reference, verify_strict, Verdict, VerifyMode, VerifyReport};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WatermarkError {
    #[error("no pixel above the foreground threshold {0}")]
    NoContent(u8),
    #[error("rectangle {rect:?} does not fit a {width}x{height} image")]
    RectOutOfBounds {
        rect: Rect,
        width: usize,
        height: usize,
    },
    #[error("key {key} shares a factor with block count {n}")]
    KeyNotCoprime { key: u64, n: u64 },
    #[error("bit index {x} outside 1..={n}")]
    IndexOutOfRange { x: u64, n: u64 },
    #[error("only {available} embeddable blocks, {required} needed")]
    CapacityExceeded { available: usize, required: usize },
    #[error("mapped block ({bx},{by}) contains pixels above the foreground threshold")]
    BlockNotDark { bx: usize, by: usize },
    #[error("bit plane {0} outside 1..=3")]
    InvalidPlane(u8),
    #[error("manifest does not match image: {0}")]
    ManifestMismatch(String),
    #[error("malformed manifest: {0}")]
    Manifest(String),
}

impl WatermarkError {
    /// Stable kebab-case identifier for machine-readable reporting.
    pub fn code(&self) -> &'static str {
        match self {
            WatermarkError::NoContent(_) => "no-content",
            WatermarkError::RectOutOfBounds { .. } => "rect-out-of-bounds",
            WatermarkError::KeyNotCoprime { .. } => "key-not-coprime",
            WatermarkError::IndexOutOfRange { .. } => "index-out-of-range",
            WatermarkError::CapacityExceeded { .. } => "capacity-exceeded",
            WatermarkError::BlockNotDark { .. } => "block-not-dark",
            WatermarkError::InvalidPlane(_) => "invalid-plane",
            WatermarkError::ManifestMismatch(_) => "manifest-mismatch",
            WatermarkError::Manifest(_) => "bad-manifest",
        }
    }
}

/// Bit plane 1 (LSB), 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitPlane(u8);

impl BitPlane {
    pub const LSB: BitPlane = BitPlane(1);

    pub fn new(plane: u8) -> Result<Self, WatermarkError> {
        if (1..=3).contains(&plane) {
            Ok(BitPlane(plane))
        } else {
            Err(WatermarkError::InvalidPlane(plane))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// Pixel value of a set bit: `2^(plane−1)`.
    pub fn amplitude(self) -> u8 {
        1 << (self.0 - 1)
    }
}

impl Default for BitPlane {
    fn default() -> Self {
        BitPlane::LSB
    }
}

/// Secret and geometric parameters shared by embedder and verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkParams {
    /// Mapping key `k`; must be coprime with the embeddable block count.
    pub key: u64,
    pub plane: BitPlane,
    /// Blocks excluded around the ROI.
    pub guard: usize,
    /// Pixels strictly above this value count as content.
    pub fg_threshold: u8,
    /// When set, the digest is HMAC-SHA-256 under this key.
    pub hash_key: Option<Vec<u8>>,
}

impl Default for WatermarkParams {
    fn default() -> Self {
        WatermarkParams {
            key: 37,
            plane: BitPlane::LSB,
            guard: 1,
            fg_threshold: 0,
            hash_key: None,
        }
    }
}

impl WatermarkParams {
    pub fn with_plane(mut self, plane: BitPlane) -> Self {
        self.plane = plane;
        self
    }

    pub fn with_key(mut self, key: u64) -> Self {
        self.key = key;
        self
    }

    pub fn with_hash_key(mut self, hash_key: impl Into<Vec<u8>>) -> Self {
        self.hash_key = Some(hash_key.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planes() {
        assert_eq!(BitPlane::new(1).unwrap().amplitude(), 1);
        assert_eq!(BitPlane::new(3).unwrap().amplitude(), 4);
        assert_eq!(BitPlane::new(0), Err(WatermarkError::InvalidPlane(0)));
        assert_eq!(BitPlane::new(4), Err(WatermarkError::InvalidPlane(4)));
    }

    #[test]
    fn error_codes() {
        let e = WatermarkError::CapacityExceeded {
            available: 3,
            required: 256,
        };
        assert_eq!(e.code(), "capacity-exceeded");
        assert_eq!(
            WatermarkError::KeyNotCoprime { key: 4, n: 20 }.code(),
            "key-not-coprime"
        );
    }
}
