use std::fmt;

use super::{Image, PixmapError};

/// Peak signal-to-noise ratio in dB. Identical images have no finite PSNR.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    pub fn is_infinite(self) -> bool {
        matches!(self, Psnr::Infinite)
    }

    /// Decibel value, `None` for [`Psnr::Infinite`].
    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Finite(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    /// True if this PSNR is at least `db` (infinite satisfies every bound).
    pub fn at_least(self, db: f64) -> bool {
        self.db().is_none_or(|v| v >= db)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

impl serde::Serialize for Psnr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Psnr::Finite(v) => s.serialize_f64(*v),
            Psnr::Infinite => s.serialize_str("inf"),
        }
    }
}

fn check_dims(a: &Image, b: &Image) -> Result<(), PixmapError> {
    if a.dims() != b.dims() {
        return Err(PixmapError::DimensionMismatch(a.dims(), b.dims()));
    }
    Ok(())
}

/// Mean squared pixel difference.
pub fn mse(a: &Image, b: &Image) -> Result<f64, PixmapError> {
    check_dims(a, b)?;
    let sse: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&p, &q)| {
            let d = p.abs_diff(q) as u64;
            d * d
        })
        .sum();
    Ok(sse as f64 / a.pixels().len() as f64)
}

/// `10·log10(255² / MSE)`.
pub fn psnr(a: &Image, b: &Image) -> Result<Psnr, PixmapError> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(Psnr::Infinite);
    }
    Ok(Psnr::Finite(10.0 * (255.0 * 255.0 / m).log10()))
}

/// Count of pixels at each intensity.
pub fn histogram(img: &Image) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &p in img.pixels() {
        bins[p as usize] += 1;
    }
    bins
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_is_infinite() {
        let a = Image::filled(4, 4, 9).unwrap();
        assert_eq!(psnr(&a, &a).unwrap(), Psnr::Infinite);
        assert_eq!(Psnr::Infinite.to_string(), "inf");
    }

    #[test]
    fn single_pixel_full_scale_difference() {
        let a = Image::filled(800, 600, 0).unwrap();
        let mut b = a.clone();
        b.set(17, 33, 255);
        let p = psnr(&a, &b).unwrap().db().unwrap();
        assert!((p - 10.0 * 480_000f64.log10()).abs() < 1e-9);
        assert!((p - 56.81).abs() < 0.005);
    }

    #[test]
    fn unit_difference_everywhere() {
        let a = Image::from_fn(32, 16, |x, y| (x * 7 + y) as u8).unwrap();
        let b = Image::from_fn(32, 16, |x, y| (x * 7 + y) as u8 + 1).unwrap();
        let p = psnr(&a, &b).unwrap().db().unwrap();
        assert!((p - 20.0 * 255f64.log10()).abs() < 1e-9);
        assert!((p - 48.13).abs() < 0.005);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Image::filled(4, 4, 0).unwrap();
        let b = Image::filled(4, 5, 0).unwrap();
        assert!(matches!(
            psnr(&a, &b),
            Err(PixmapError::DimensionMismatch(..))
        ));
    }

    #[test]
    fn histogram_of_zero_image() {
        let h = histogram(&Image::filled(4, 4, 0).unwrap());
        assert_eq!(h[0], 16);
        assert!(h[1..].iter().all(|&c| c == 0));
    }

    proptest! {
        #[test]
        fn psnr_symmetric(px in proptest::collection::vec(any::<u8>(), 64), qx in proptest::collection::vec(any::<u8>(), 64)) {
            let a = Image::new(8, 8, px).unwrap();
            let b = Image::new(8, 8, qx).unwrap();
            prop_assert_eq!(psnr(&a, &b).unwrap(), psnr(&b, &a).unwrap());
        }

        #[test]
        fn histogram_sums_to_area(w in 1usize..30, h in 1usize..30, fill in proptest::collection::vec(any::<u8>(), 900)) {
            let img = Image::from_fn(w, h, |x, y| fill[y * 30 + x]).unwrap();
            prop_assert_eq!(histogram(&img).iter().sum::<u64>(), (w * h) as u64);
        }
    }
}
