use serde::{Deserialize, Serialize};

use super::{digest, extract, serialize_roi, Digest256, Rect, WatermarkError, WatermarkParams};
use crate::pixmap::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// What the extracted digest is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// A digest recomputed from the received image's ROI.
    Strict,
    /// A stored digest, e.g. from the embed manifest.
    Reference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub extracted: Digest256,
    pub reference: Digest256,
    pub differing_bits: u32,
    pub mode: VerifyMode,
}

impl VerifyReport {
    fn compare(extracted: Digest256, reference: Digest256, mode: VerifyMode) -> Self {
        let differing_bits = extracted.hamming(&reference);
        VerifyReport {
            verdict: if differing_bits == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            extracted,
            reference,
            differing_bits,
            mode,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn verify_reference(extracted: Digest256, expected: Digest256) -> VerifyReport {
    VerifyReport::compare(extracted, expected, VerifyMode::Reference)
}

/// Extracts the embedded digest and compares it with a fresh hash of the
/// received ROI. Any change inside the ROI makes this fail.
pub fn verify_strict(
    img: &Image,
    roi: Rect,
    params: &WatermarkParams,
) -> Result<VerifyReport, WatermarkError> {
    let extracted = extract(img, roi, params)?;
    let recomputed = digest(&serialize_roi(img, roi)?, params.hash_key.as_deref());
    Ok(VerifyReport::compare(
        extracted,
        recomputed,
        VerifyMode::Strict,
    ))
}
