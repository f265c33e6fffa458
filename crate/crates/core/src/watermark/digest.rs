use std::fmt;
use std::str::FromStr;

use hmac::{Hmac, KeyInit, Mac};
use sha2::{Digest as _, Sha256};

/// Number of watermark bits carried per image.
pub const DIGEST_BITS: usize = 256;

/// A SHA-256 / HMAC-SHA-256 value, rendered as 64 lowercase hex digits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest256(pub [u8; 32]);

impl Digest256 {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// Bit `x` for `x` in `1..=256`, most significant bit of byte 0 first.
    pub fn bit(&self, x: usize) -> bool {
        assert!((1..=DIGEST_BITS).contains(&x), "bit index {x} out of range");
        let i = x - 1;
        (self.0[i / 8] >> (7 - i % 8)) & 1 == 1
    }

    /// Inverse of [`Digest256::bit`] over all 256 positions.
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut out = [0u8; 32];
        let mut count = 0;
        for (i, b) in bits.into_iter().enumerate().take(DIGEST_BITS) {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
            count = i + 1;
        }
        assert_eq!(count, DIGEST_BITS, "need exactly 256 bits");
        Digest256(out)
    }

    /// Number of differing bits.
    pub fn hamming(&self, other: &Digest256) -> u32 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }
}

impl fmt::Display for Digest256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Digest256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest256({})", self.to_hex())
    }
}

impl FromStr for Digest256 {
    type Err = hex::FromHexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out)?;
        Ok(Digest256(out))
    }
}

impl serde::Serialize for Digest256 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> serde::Deserialize<'de> for Digest256 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <std::borrow::Cow<'de, str>>::deserialize(d)?;
        if s.len() != 64 {
            return Err(serde::de::Error::custom("digest must be 64 hex characters"));
        }
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// SHA-256 of `data`, or HMAC-SHA-256 when `hash_key` is given.
pub fn digest(data: &[u8], hash_key: Option<&[u8]>) -> Digest256 {
    let mut out = [0u8; 32];
    match hash_key {
        None => out.copy_from_slice(&Sha256::digest(data)),
        Some(key) => {
            let mut mac = <Hmac<Sha256> as KeyInit>::new_from_slice(key)
                .expect("HMAC accepts any key length");
            mac.update(data);
            out.copy_from_slice(&mac.finalize().into_bytes());
        }
    }
    Digest256(out)
}
