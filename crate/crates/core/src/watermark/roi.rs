use serde::{Deserialize, Serialize};

use super::WatermarkError;
use crate::pixmap::Image;

/// Axis-aligned pixel rectangle; `(x, y)` is the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> usize {
        self.x + self.w
    }

    pub fn bottom(&self) -> usize {
        self.y + self.h
    }

    pub fn contains(&self, px: usize, py: usize) -> bool {
        px >= self.x && px < self.right() && py >= self.y && py < self.bottom()
    }

    pub fn fits(&self, width: usize, height: usize) -> bool {
        self.w >= 1 && self.h >= 1 && self.right() <= width && self.bottom() <= height
    }

    pub(crate) fn check_fits(&self, width: usize, height: usize) -> Result<(), WatermarkError> {
        if self.fits(width, height) {
            Ok(())
        } else {
            Err(WatermarkError::RectOutOfBounds {
                rect: *self,
                width,
                height,
            })
        }
    }

    pub fn to_array(self) -> [usize; 4] {
        [self.x, self.y, self.w, self.h]
    }

    pub fn from_array([x, y, w, h]: [usize; 4]) -> Self {
        Rect { x, y, w, h }
    }
}

/// Smallest rectangle containing every pixel brighter than `fg_threshold`.
pub fn detect_roi(img: &Image, fg_threshold: u8) -> Result<Rect, WatermarkError> {
    let (mut x0, mut y0) = (usize::MAX, usize::MAX);
    let (mut x1, mut y1) = (0, 0);
    for y in 0..img.height() {
        let row = img.row(y);
        let Some(first) = row.iter().position(|&p| p > fg_threshold) else {
            continue;
        };
        let last = row.iter().rposition(|&p| p > fg_threshold).unwrap_or(first);
        x0 = x0.min(first);
        x1 = x1.max(last);
        y0 = y0.min(y);
        y1 = y;
    }
    if x0 == usize::MAX {
        return Err(WatermarkError::NoContent(fg_threshold));
    }
    Ok(Rect::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1))
}

/// ROI pixels in raster order, one byte each.
pub fn serialize_roi(img: &Image, roi: Rect) -> Result<Vec<u8>, WatermarkError> {
    roi.check_fits(img.width(), img.height())?;
    let mut out = Vec::with_capacity(roi.w * roi.h);
    for y in roi.y..roi.bottom() {
        out.extend_from_slice(&img.row(y)[roi.x..roi.right()]);
    }
    Ok(out)
}
