use serde::{Deserialize, Serialize};

use super::{embeddable_blocks, BitPlane, Digest256, Rect, WatermarkError, WatermarkParams};

/// Sidecar record written next to a watermarked image.
///
/// JSON form: `{"roi":[x,y,w,h],"plane":b,"guard":g,"n":count,"digest":"<hex>","keyed_hash":bool}`.
/// The mapping key and hash key are deliberately absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawManifest", into = "RawManifest")]
pub struct EmbedManifest {
    pub roi: Rect,
    pub plane: BitPlane,
    pub guard: usize,
    pub n: usize,
    pub digest: Digest256,
    pub keyed_hash: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    roi: [usize; 4],
    plane: u8,
    guard: usize,
    n: usize,
    digest: Digest256,
    keyed_hash: bool,
}

impl TryFrom<RawManifest> for EmbedManifest {
    type Error = WatermarkError;

    fn try_from(raw: RawManifest) -> Result<Self, Self::Error> {
        Ok(EmbedManifest {
            roi: Rect::from_array(raw.roi),
            plane: BitPlane::new(raw.plane)?,
            guard: raw.guard,
            n: raw.n,
            digest: raw.digest,
            keyed_hash: raw.keyed_hash,
        })
    }
}

impl From<EmbedManifest> for RawManifest {
    fn from(m: EmbedManifest) -> Self {
        RawManifest {
            roi: m.roi.to_array(),
            plane: m.plane.index(),
            guard: m.guard,
            n: m.n,
            digest: m.digest,
            keyed_hash: m.keyed_hash,
        }
    }
}

impl EmbedManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, WatermarkError> {
        serde_json::from_str(s).map_err(|e| WatermarkError::Manifest(e.to_string()))
    }

    /// Parameters for verification: plane and guard come from the manifest,
    /// the secrets from the caller.
    pub fn params(&self, key: u64, hash_key: Option<Vec<u8>>, fg_threshold: u8) -> WatermarkParams {
        WatermarkParams {
            key,
            plane: self.plane,
            guard: self.guard,
            fg_threshold,
            hash_key,
        }
    }

    /// Checks that the manifest geometry is consistent with `width × height`.
    pub fn check_dims(&self, width: usize, height: usize) -> Result<(), WatermarkError> {
        if !self.roi.fits(width, height) {
            return Err(WatermarkError::ManifestMismatch(format!(
                "roi {:?} outside {width}x{height} image",
                self.roi.to_array()
            )));
        }
        let n = embeddable_blocks(width, height, self.roi, self.guard).len();
        if n != self.n {
            return Err(WatermarkError::ManifestMismatch(format!(
                "manifest records {} embeddable blocks, image has {n}",
                self.n
            )));
        }
        Ok(())
    }
}
