use num_integer::Integer;

use super::{Rect, WatermarkError};
use crate::pixmap::{BlockPos, BLOCK};

/// Keyed position of bit `x` among `n` slots: `((key·x) mod n) + 1`.
///
/// The map is a bijection on `1..=n` exactly when `gcd(key, n) = 1`; other
/// keys are rejected. The `+1` keeps positions 1-based, so key 37 over 20
/// slots sends bit 1 to slot 18 and bit 20 to slot 1.
pub fn map_position(key: u64, x: u64, n: u64) -> Result<u64, WatermarkError> {
    if n == 0 || key.gcd(&n) != 1 {
        return Err(WatermarkError::KeyNotCoprime { key, n });
    }
    if x == 0 || x > n {
        return Err(WatermarkError::IndexOutOfRange { x, n });
    }
    Ok(((key as u128 * x as u128) % n as u128) as u64 + 1)
}

/// Unkeyed placement: bit `x` goes to slot `x` (wrapping past `n`), i.e.
/// `((x − 1) mod n) + 1`. Not what `((1·x) mod n) + 1` gives, which is
/// shifted by one slot.
pub fn sequential_position(x: u64, n: u64) -> Result<u64, WatermarkError> {
    if n == 0 || x == 0 {
        return Err(WatermarkError::IndexOutOfRange { x, n });
    }
    Ok((x - 1) % n + 1)
}

/// Whole 8×8 blocks of a `width × height` image lying entirely outside the
/// ROI grown by `guard` blocks on every side, in raster order.
///
/// Depends only on geometry, so embedder and verifier always agree.
pub fn embeddable_blocks(width: usize, height: usize, roi: Rect, guard: usize) -> Vec<BlockPos> {
    let pad = guard * BLOCK;
    let (gx0, gy0) = (roi.x.saturating_sub(pad), roi.y.saturating_sub(pad));
    let (gx1, gy1) = (roi.right() + pad, roi.bottom() + pad);
    let (bw, bh) = (width / BLOCK, height / BLOCK);
    let mut out = Vec::new();
    for by in 0..bh {
        for bx in 0..bw {
            let (x0, y0) = (bx * BLOCK, by * BLOCK);
            let clear = x0 + BLOCK <= gx0 || x0 >= gx1 || y0 + BLOCK <= gy0 || y0 >= gy1;
            if clear {
                out.push(BlockPos::new(bx, by));
            }
        }
    }
    out
}
