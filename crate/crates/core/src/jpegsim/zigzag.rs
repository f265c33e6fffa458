//! Zigzag scan order.

use super::LevelBlock;

/// `ZIGZAG[i]` is the natural (row-major) index of the i-th scanned coefficient.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, //
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6, 7, 14, 21, 28, //
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, //
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
];

/// Natural order to scan order.
pub fn zigzag(levels: &LevelBlock) -> [i32; 64] {
    ZIGZAG.map(|natural| levels.levels[natural])
}

/// Scan order back to natural order.
pub fn unzigzag(scan: &[i32; 64]) -> LevelBlock {
    let mut levels = [0; 64];
    for (i, &natural) in ZIGZAG.iter().enumerate() {
        levels[natural] = scan[i];
    }
    LevelBlock { levels }
}
