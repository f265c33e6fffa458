use super::{
    digest, embeddable_blocks, map_position, serialize_roi, Digest256, EmbedManifest, Rect,
    WatermarkError, WatermarkParams, DIGEST_BITS,
};
use crate::pixmap::{BlockPos, Image};

/// The block carrying each digest bit, in bit order `1..=256`.
///
/// Fails with `CapacityExceeded` when fewer than 256 blocks are available
/// and `KeyNotCoprime` when the key does not permute them.
pub fn mapped_blocks(
    img: &Image,
    roi: Rect,
    params: &WatermarkParams,
) -> Result<(Vec<BlockPos>, usize), WatermarkError> {
    roi.check_fits(img.width(), img.height())?;
    let blocks = embeddable_blocks(img.width(), img.height(), roi, params.guard);
    let n = blocks.len();
    if n < DIGEST_BITS {
        return Err(WatermarkError::CapacityExceeded {
            available: n,
            required: DIGEST_BITS,
        });
    }
    let mapped = (1..=DIGEST_BITS as u64)
        .map(|x| map_position(params.key, x, n as u64).map(|p| blocks[p as usize - 1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((mapped, n))
}

/// Hashes the ROI and writes the digest into the mapped background blocks.
///
/// Each target block must be uniformly dark (no pixel above the foreground
/// threshold); its 64 pixels become 0 or the plane amplitude. Nothing else
/// in the image changes.
pub fn embed(
    img: &Image,
    roi: Rect,
    params: &WatermarkParams,
) -> Result<(Image, EmbedManifest), WatermarkError> {
    let (targets, n) = mapped_blocks(img, roi, params)?;
    if let Some(pos) = targets
        .iter()
        .find(|&&pos| img.block_pixels(pos).any(|p| p > params.fg_threshold))
    {
        return Err(WatermarkError::BlockNotDark {
            bx: pos.bx,
            by: pos.by,
        });
    }

    let hash = digest(&serialize_roi(img, roi)?, params.hash_key.as_deref());
    let amp = params.plane.amplitude();
    let mut out = img.clone();
    for (i, &pos) in targets.iter().enumerate() {
        let v = if hash.bit(i + 1) { amp } else { 0 };
        out.put_block(pos, &[v; 64]);
    }

    let manifest = EmbedManifest {
        roi,
        plane: params.plane,
        guard: params.guard,
        n,
        digest: hash,
        keyed_hash: params.hash_key.is_some(),
    };
    Ok((out, manifest))
}

/// Reads the digest back: bit `x` is set when the mean of its block exceeds
/// half the plane amplitude.
pub fn extract(
    img: &Image,
    roi: Rect,
    params: &WatermarkParams,
) -> Result<Digest256, WatermarkError> {
    let (targets, _) = mapped_blocks(img, roi, params)?;
    // mean > amp/2  ⇔  sum > 64·amp/2 = 32·amp
    let cut = 32 * params.plane.amplitude() as u32;
    Ok(Digest256::from_bits(targets.iter().map(|&pos| {
        let sum: u32 = img.block_pixels(pos).map(u32::from).sum();
        sum > cut
    })))
}

/// Clears the watermark plane in every mapped block. On an image whose
/// mapped blocks were all zero before embedding, this restores it exactly.
pub fn restore(img: &Image, roi: Rect, params: &WatermarkParams) -> Result<Image, WatermarkError> {
    let (targets, _) = mapped_blocks(img, roi, params)?;
    let mask = !params.plane.amplitude();
    let mut out = img.clone();
    for pos in targets {
        let cleared: Vec<u8> = img.block_pixels(pos).map(|p| p & mask).collect();
        out.put_block(pos, &cleared.try_into().expect("64 pixels"));
    }
    Ok(out)
}
