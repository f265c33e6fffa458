//! Quality-scaled quantization tables and the scalar quantizer.

use super::{CoeffBlock, JpegError, LevelBlock};

/// Luminance table from the JPEG standard (Annex K.1), natural order.
pub const BASE_LUMA_TABLE: [u8; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// 64 quantizer step sizes in natural (row-major) order, each in 1..=255.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QTable {
    steps: [u8; 64],
}

impl QTable {
    pub fn new(steps: [u8; 64]) -> Result<Self, JpegError> {
        if steps.contains(&0) {
            return Err(JpegError::InvalidQuantTable);
        }
        Ok(QTable { steps })
    }

    /// IJG quality scaling of [`BASE_LUMA_TABLE`]:
    /// `scale = 5000/q` below 50, `200 − 2q` otherwise; each entry is
    /// `clamp((base·scale + 50) / 100, 1, 255)` in integer arithmetic.
    pub fn for_quality(quality: u32) -> Result<Self, JpegError> {
        if !(1..=100).contains(&quality) {
            return Err(JpegError::QualityOutOfRange(quality));
        }
        let scale = if quality < 50 {
            5000 / quality
        } else {
            200 - 2 * quality
        };
        let steps =
            BASE_LUMA_TABLE.map(|base| ((base as u32 * scale + 50) / 100).clamp(1, 255) as u8);
        Ok(QTable { steps })
    }

    pub fn steps(&self) -> &[u8; 64] {
        &self.steps
    }

    #[inline]
    pub fn step(&self, v: usize) -> f64 {
        self.steps[v] as f64
    }
}

/// Convenience for [`QTable::for_quality`].
pub fn quality_table(quality: u32) -> Result<QTable, JpegError> {
    QTable::for_quality(quality)
}

/// `level(v) = round(F(v) / Q(v))`, ties away from zero.
pub fn quantize(coeffs: &CoeffBlock, q: &QTable) -> LevelBlock {
    LevelBlock {
        levels: std::array::from_fn(|v| (coeffs.coeffs[v] / q.step(v)).round() as i32),
    }
}

/// `F̃(v) = level(v) · Q(v)`.
pub fn dequantize(levels: &LevelBlock, q: &QTable) -> CoeffBlock {
    CoeffBlock {
        coeffs: std::array::from_fn(|v| levels.levels[v] as f64 * q.step(v)),
    }
}
