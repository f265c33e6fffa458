//! Deterministic synthetic ultrasound-like test image.
//!
//! A sector ("fan") of speckled tissue on an exactly-zero background, with
//! a hypoechoic cyst and a bright inclusion. All randomness comes from
//! [`Lcg`], so the output is a pure function of `(width, height, seed)` on
//! every platform.

use std::f64::consts::PI;

use super::{Image, PixmapError, BLOCK};

/// 64-bit linear congruential generator, `state ← a·state + c (mod 2^64)`,
/// with Knuth's MMIX constants a = 6364136223846793005 and
/// c = 1442695040888963407. The seed is used as the initial state after one
/// warm-up step.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        let mut lcg = Lcg { state: seed };
        lcg.step();
        lcg
    }

    fn step(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// High 32 bits of the next state.
    pub fn next_u32(&mut self) -> u32 {
        (self.step() >> 32) as u32
    }

    /// Uniform in `(0, 1]`, built from the high 53 bits of the next state.
    pub fn next_unit(&mut self) -> f64 {
        ((self.step() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
    }
}

/// Zero margin (pixels) kept on every side of the fan.
fn margin(width: usize, height: usize) -> usize {
    (width.min(height) / 20).max(3 * BLOCK)
}

pub fn gen_phantom(width: usize, height: usize, seed: u64) -> Result<Image, PixmapError> {
    if !width.is_multiple_of(BLOCK) || !height.is_multiple_of(BLOCK) {
        return Err(PixmapError::NotBlockAligned { width, height });
    }
    if width < 64 || height < 64 {
        return Err(PixmapError::PhantomTooSmall { width, height });
    }
    let m = margin(width, height) as f64;
    let (w, h) = (width as f64, height as f64);

    // Sector geometry: apex above the top margin, inner radius r0, outer R.
    let depth = h - 2.0 * m;
    let r0 = 0.08 * depth;
    let mut half_angle = 40f64.to_radians();
    let mut apex_y = m - r0 * half_angle.cos();
    let mut outer = h - m - apex_y;
    for _ in 0..4 {
        let limit = ((w / 2.0 - m) / outer).min(1.0).asin();
        half_angle = half_angle.min(limit);
        apex_y = m - r0 * half_angle.cos();
        outer = h - m - apex_y;
    }
    let cx = w / 2.0;

    // Speckle: Rayleigh samples on a coarse grid, bilinearly interpolated so
    // grains span a few pixels (wider laterally than axially).
    const CELL_X: usize = 4;
    const CELL_Y: usize = 3;
    let gw = width / CELL_X + 2;
    let gh = height / CELL_Y + 2;
    let mut rng = Lcg::new(seed);
    let grid: Vec<f64> = (0..gw * gh)
        .map(|_| 0.5 * (-2.0 * rng.next_unit().ln()).sqrt())
        .collect();
    let speckle = |x: f64, y: f64| {
        let gx = x / CELL_X as f64;
        let gy = y / CELL_Y as f64;
        let (ix, iy) = (gx.floor() as usize, gy.floor() as usize);
        let (fx, fy) = (gx - ix as f64, gy - iy as f64);
        let at = |i: usize, j: usize| grid[j.min(gh - 1) * gw + i.min(gw - 1)];
        let top = at(ix, iy) * (1.0 - fx) + at(ix + 1, iy) * fx;
        let bot = at(ix, iy + 1) * (1.0 - fx) + at(ix + 1, iy + 1) * fx;
        top * (1.0 - fy) + bot * fy
    };

    // Seed-dependent placement of the two inclusions.
    let jitter = |rng: &mut Lcg| rng.next_unit() - 0.5;
    let cyst = (
        cx - 0.18 * outer + 0.05 * outer * jitter(&mut rng),
        apex_y + 0.55 * outer + 0.05 * outer * jitter(&mut rng),
        0.07 * outer,
    );
    let lesion = (
        cx + 0.15 * outer + 0.05 * outer * jitter(&mut rng),
        apex_y + 0.40 * outer + 0.05 * outer * jitter(&mut rng),
        0.09 * outer,
        0.05 * outer,
    );
    let layer_phase = 2.0 * PI * rng.next_unit();

    let lo = (m, m);
    let hi = (w - m, h - m);
    Image::from_fn(width, height, |x, y| {
        let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
        if px < lo.0 || px > hi.0 || py < lo.1 || py > hi.1 {
            return 0;
        }
        let (dx, dy) = (px - cx, py - apex_y);
        let r = dx.hypot(dy);
        if r < r0 || r > outer || dy <= 0.0 || dx.atan2(dy).abs() > half_angle {
            return 0;
        }
        let d = (r - r0) / (outer - r0);

        // Tissue echogenicity: soft layered bands plus inclusions.
        let mut echo = 0.55 + 0.2 * (d * 9.0 * PI + layer_phase).sin();
        let cyst_r = (px - cyst.0).hypot(py - cyst.1) / cyst.2;
        if cyst_r < 1.0 {
            echo = 0.06;
        } else if cyst_r < 1.15 {
            echo *= 1.4;
        }
        let (ex, ey) = ((px - lesion.0) / lesion.2, (py - lesion.1) / lesion.3);
        if ex * ex + ey * ey < 1.0 {
            echo = 1.0;
        }
        let gain = 1.0 - 0.4 * d;
        let v = echo * gain * speckle(px, py);
        (30.0 + 225.0 * v.min(1.0)).round() as u8
    })
}
