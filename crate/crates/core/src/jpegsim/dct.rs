//! Orthonormal 8×8 DCT-II and its inverse, evaluated separably.

use std::sync::LazyLock;

use super::CoeffBlock;
use crate::pixmap::Block;

/// `COS[k][n] = cos(π(2n+1)k / 16)`; row 0 is exactly 1.
static COS: LazyLock<[[f64; 8]; 8]> = LazyLock::new(|| {
    let mut table = [[1.0; 8]; 8];
    for (k, row) in table.iter_mut().enumerate().skip(1) {
        for (n, v) in row.iter_mut().enumerate() {
            *v = (std::f64::consts::PI * (2 * n + 1) as f64 * k as f64 / 16.0).cos();
        }
    }
    table
});

/// `α_p·α_q` with α_0 = √(1/8), α_k = √(2/8) (k > 0). The DC and pure-AC
/// products are exact dyadic numbers, so a constant block transforms to an
/// exact DC value and back without rounding noise.
#[inline]
fn norm(p: usize, q: usize) -> f64 {
    match (p == 0, q == 0) {
        (true, true) => 0.125,
        (false, false) => 0.25,
        _ => 0.125 * std::f64::consts::SQRT_2,
    }
}

/// Offset removed before the forward transform when level shifting.
pub const LEVEL_SHIFT: f64 = 128.0;

/// Forward transform. With `level_shift`, 128 is subtracted from every
/// sample first, as baseline JPEG does.
pub fn dct2(block: &Block, level_shift: bool) -> CoeffBlock {
    let c = &*COS;
    let shift = if level_shift { LEVEL_SHIFT } else { 0.0 };
    let x = &block.values;

    // rows: tmp[m][q] = Σ_n x[m][n]·cos_q(n)
    let mut tmp = [0.0; 64];
    for m in 0..8 {
        let row = &x[m * 8..m * 8 + 8];
        for q in 0..8 {
            let mut acc = 0.0;
            for n in 0..8 {
                acc += (row[n] - shift) * c[q][n];
            }
            tmp[m * 8 + q] = acc;
        }
    }
    // columns: F[p][q] = α_p α_q Σ_m cos_p(m)·tmp[m][q]
    let mut out = [0.0; 64];
    for p in 0..8 {
        for q in 0..8 {
            let mut acc = 0.0;
            for m in 0..8 {
                acc += c[p][m] * tmp[m * 8 + q];
            }
            out[p * 8 + q] = norm(p, q) * acc;
        }
    }
    CoeffBlock { coeffs: out }
}

/// Inverse transform, returning real-valued samples before any rounding.
pub fn idct2(coeffs: &CoeffBlock, level_shift: bool) -> Block {
    let c = &*COS;
    let shift = if level_shift { LEVEL_SHIFT } else { 0.0 };
    let f = &coeffs.coeffs;

    // tmp[p][n] = Σ_q α_p α_q F[p][q]·cos_q(n)
    let mut tmp = [0.0; 64];
    for p in 0..8 {
        for n in 0..8 {
            let mut acc = 0.0;
            for q in 0..8 {
                acc += norm(p, q) * f[p * 8 + q] * c[q][n];
            }
            tmp[p * 8 + n] = acc;
        }
    }
    // x[m][n] = Σ_p cos_p(m)·tmp[p][n]
    let mut out = [0.0; 64];
    for m in 0..8 {
        for n in 0..8 {
            let mut acc = 0.0;
            for p in 0..8 {
                acc += c[p][m] * tmp[p * 8 + n];
            }
            out[m * 8 + n] = acc + shift;
        }
    }
    Block::new(out)
}
