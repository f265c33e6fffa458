//! Baseline sequential JFIF codec for single-component 8-bit images.

mod bits;
mod decode;
mod encode;
mod huffman;

pub use decode::{decode_jpeg, decode_jpeg_with};
pub use encode::{encode_jpeg, encode_jpeg_with};

pub(crate) mod marker {
    pub const SOI: u8 = 0xd8;
    pub const EOI: u8 = 0xd9;
    pub const SOF0: u8 = 0xc0;
    pub const SOF1: u8 = 0xc1;
    pub const DHT: u8 = 0xc4;
    pub const DQT: u8 = 0xdb;
    pub const DRI: u8 = 0xdd;
    pub const SOS: u8 = 0xda;
    pub const APP0: u8 = 0xe0;
    pub const COM: u8 = 0xfe;
}

/// An encoded bytestream plus the parameters it was produced with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JpegBytes {
    pub bytes: Vec<u8>,
    pub width: usize,
    pub height: usize,
    pub quality: u32,
}

impl JpegBytes {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// `(1 − encoded / raw) · 100` with raw = one byte per pixel.
    pub fn compression_pct(&self) -> f64 {
        let raw = (self.width * self.height) as f64;
        (1.0 - self.bytes.len() as f64 / raw) * 100.0
    }
}

impl AsRef<[u8]> for JpegBytes {
    fn as_ref(&self) -> &[u8] {
        &self.bytes
    }
}

/// Magnitude category: number of bits needed for `|v|`.
#[inline]
fn category(v: i32) -> u8 {
    (32 - v.unsigned_abs().leading_zeros()) as u8
}

/// Inverse of the sign-folded amplitude encoding (T.81 F.2.2.1 EXTEND).
#[inline]
fn extend(bits: u32, cat: u8) -> i32 {
    if cat == 0 {
        return 0;
    }
    let v = bits as i32;
    if v < 1 << (cat - 1) {
        v - (1 << cat) + 1
    } else {
        v
    }
}
