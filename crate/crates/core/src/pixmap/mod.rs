//! 8-bit grayscale raster, block tiling, PGM I/O, metrics and the phantom.

mod metrics;
mod pgm;
mod phantom;

pub use metrics::{histogram, mse, psnr, Psnr};
pub use pgm::{load_pgm, save_pgm};
pub use phantom::{gen_phantom, Lcg};

use thiserror::Error;

/// Side length of a transform block.
pub const BLOCK: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PixmapError {
    #[error("invalid dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },
    #[error("pixel buffer holds {got} bytes, expected {expected}")]
    BufferSize { expected: usize, got: usize },
    #[error("dimensions must be multiples of 8 (got {width}x{height})")]
    NotBlockAligned { width: usize, height: usize },
    #[error("phantom needs at least 64x64 pixels (got {width}x{height})")]
    PhantomTooSmall { width: usize, height: usize },
    #[error("image dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
    #[error("not a binary PGM file (bad magic)")]
    BadMagic,
    #[error("ASCII PGM (P2) is not supported")]
    AsciiUnsupported,
    #[error("malformed PGM header: {0}")]
    MalformedHeader(&'static str),
    #[error("PGM maxval {0} is not supported (only 255)")]
    MaxvalUnsupported(u32),
    #[error("truncated pixel data: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
}

impl PixmapError {
    /// Stable kebab-case identifier for machine-readable reporting.
    pub fn code(&self) -> &'static str {
        match self {
            PixmapError::InvalidDimensions { .. } => "invalid-dimensions",
            PixmapError::BufferSize { .. } => "buffer-size",
            PixmapError::NotBlockAligned { .. } => "not-block-aligned",
            PixmapError::PhantomTooSmall { .. } => "phantom-too-small",
            PixmapError::DimensionMismatch(..) => "dimension-mismatch",
            PixmapError::BadMagic => "bad-magic",
            PixmapError::AsciiUnsupported => "ascii-unsupported",
            PixmapError::MalformedHeader(_) => "malformed-header",
            PixmapError::MaxvalUnsupported(_) => "maxval-unsupported",
            PixmapError::Truncated { .. } => "truncated-pgm",
        }
    }
}

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, PixmapError> {
        if width == 0 || height == 0 {
            return Err(PixmapError::InvalidDimensions { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(PixmapError::InvalidDimensions { width, height })?;
        if pixels.len() != expected {
            return Err(PixmapError::BufferSize {
                expected,
                got: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// An image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, PixmapError> {
        Image::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self, PixmapError> {
        let mut pixels = Vec::with_capacity(width.saturating_mul(height));
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Image::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn is_block_aligned(&self) -> bool {
        self.width.is_multiple_of(BLOCK) && self.height.is_multiple_of(BLOCK)
    }

    /// Number of whole blocks horizontally and vertically (rounded up).
    pub fn blocks_across(&self) -> (usize, usize) {
        (self.width.div_ceil(BLOCK), self.height.div_ceil(BLOCK))
    }

    /// Extends the image to the next multiple of 8 in each direction by
    /// repeating the last column and row. Aligned images are returned as-is.
    pub fn pad_to_blocks(&self) -> Image {
        if self.is_block_aligned() {
            return self.clone();
        }
        let (bw, bh) = self.blocks_across();
        let (pw, ph) = (bw * BLOCK, bh * BLOCK);
        let mut pixels = Vec::with_capacity(pw * ph);
        for y in 0..ph {
            let row = self.row(y.min(self.height - 1));
            pixels.extend_from_slice(row);
            let last = row[self.width - 1];
            pixels.extend(std::iter::repeat_n(last, pw - self.width));
        }
        Image {
            width: pw,
            height: ph,
            pixels,
        }
    }

    /// Top-left `width × height` sub-image.
    pub fn crop(&self, width: usize, height: usize) -> Image {
        assert!(width <= self.width && height <= self.height && width > 0 && height > 0);
        if (width, height) == self.dims() {
            return self.clone();
        }
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            pixels.extend_from_slice(&self.row(y)[..width]);
        }
        Image {
            width,
            height,
            pixels,
        }
    }

    /// Reads the 8×8 block at block coordinates `pos` as real samples.
    /// The image must be block aligned (see [`Image::pad_to_blocks`]).
    pub fn block(&self, pos: BlockPos) -> Block {
        let mut values = [0.0; 64];
        let (x0, y0) = pos.origin();
        for r in 0..BLOCK {
            let row = &self.pixels[(y0 + r) * self.width + x0..][..BLOCK];
            for (c, &p) in row.iter().enumerate() {
                values[r * BLOCK + c] = p as f64;
            }
        }
        Block { values }
    }

    /// Writes 64 samples (row-major) into the block at `pos`.
    pub fn put_block(&mut self, pos: BlockPos, samples: &[u8; 64]) {
        let (x0, y0) = pos.origin();
        for r in 0..BLOCK {
            let start = (y0 + r) * self.width + x0;
            self.pixels[start..start + BLOCK].copy_from_slice(&samples[r * BLOCK..][..BLOCK]);
        }
    }

    /// Iterates the 64 pixel values of block `pos` in row-major order.
    pub fn block_pixels(&self, pos: BlockPos) -> impl Iterator<Item = u8> + '_ {
        let (x0, y0) = pos.origin();
        (0..BLOCK).flat_map(move |r| {
            self.pixels[(y0 + r) * self.width + x0..][..BLOCK]
                .iter()
                .copied()
        })
    }
}

/// Block coordinates (in units of 8 pixels).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPos {
    pub bx: usize,
    pub by: usize,
}

impl BlockPos {
    pub fn new(bx: usize, by: usize) -> Self {
        BlockPos { bx, by }
    }

    /// Pixel coordinates of the top-left corner.
    pub fn origin(self) -> (usize, usize) {
        (self.bx * BLOCK, self.by * BLOCK)
    }
}

/// 8×8 real-valued samples, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub values: [f64; 64],
}

impl Block {
    pub fn new(values: [f64; 64]) -> Self {
        Block { values }
    }

    pub fn splat(v: f64) -> Self {
        Block { values: [v; 64] }
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * BLOCK + col]
    }
}

/// Raster-ordered block positions covering an image whose dimensions are
/// multiples of 8. Use [`Image::pad_to_blocks`] first for other sizes.
pub fn block_grid(img: &Image) -> Result<Vec<BlockPos>, PixmapError> {
    if !img.is_block_aligned() {
        return Err(PixmapError::NotBlockAligned {
            width: img.width,
            height: img.height,
        });
    }
    let (bw, bh) = img.blocks_across();
    Ok((0..bh)
        .flat_map(|by| (0..bw).map(move |bx| BlockPos::new(bx, by)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_buffers() {
        assert_eq!(
            Image::new(2, 2, vec![0; 3]),
            Err(PixmapError::BufferSize {
                expected: 4,
                got: 3
            })
        );
        assert!(matches!(
            Image::new(0, 4, vec![]),
            Err(PixmapError::InvalidDimensions { .. })
        ));
    }

    #[test]
    fn grid_counts_and_order() {
        let img = Image::filled(800, 600, 0).unwrap();
        assert_eq!(block_grid(&img).unwrap().len(), 7500);

        let one = Image::filled(8, 8, 0).unwrap();
        assert_eq!(block_grid(&one).unwrap(), vec![BlockPos::new(0, 0)]);

        let wide = Image::filled(16, 8, 0).unwrap();
        assert_eq!(
            block_grid(&wide).unwrap(),
            vec![BlockPos::new(0, 0), BlockPos::new(1, 0)]
        );
    }

    #[test]
    fn grid_requires_alignment() {
        let img = Image::filled(10, 8, 0).unwrap();
        assert!(matches!(
            block_grid(&img),
            Err(PixmapError::NotBlockAligned { .. })
        ));
        assert_eq!(block_grid(&img.pad_to_blocks()).unwrap().len(), 2);
    }

    #[test]
    fn padding_replicates_edges_and_crops_back() {
        let img = Image::from_fn(10, 9, |x, y| (x + 10 * y) as u8).unwrap();
        let padded = img.pad_to_blocks();
        assert_eq!(padded.dims(), (16, 16));
        assert_eq!(padded.get(15, 0), img.get(9, 0));
        assert_eq!(padded.get(3, 15), img.get(3, 8));
        assert_eq!(padded.get(15, 15), img.get(9, 8));
        assert_eq!(padded.crop(10, 9), img);
    }

    #[test]
    fn block_read_write() {
        let mut img = Image::filled(16, 16, 0).unwrap();
        let samples: [u8; 64] = std::array::from_fn(|i| i as u8);
        img.put_block(BlockPos::new(1, 1), &samples);
        assert_eq!(img.get(8, 8), 0);
        assert_eq!(img.get(15, 15), 63);
        let b = img.block(BlockPos::new(1, 1));
        assert_eq!(b.at(2, 3), 19.0);
        let back: Vec<u8> = img.block_pixels(BlockPos::new(1, 1)).collect();
        assert_eq!(back, samples.to_vec());
    }
}
