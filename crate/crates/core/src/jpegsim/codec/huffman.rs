//! Huffman tables: the Annex K luminance defaults, an encoder lookup and a
//! canonical-code decoder.

use super::super::JpegError;

pub const LUMA_DC_BITS: [u8; 16] = [0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0];
pub const LUMA_DC_VALUES: [u8; 12] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

pub const LUMA_AC_BITS: [u8; 16] = [0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d];
pub const LUMA_AC_VALUES: [u8; 162] = [
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7,
    0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5,
    0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
    0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8,
    0xf9, 0xfa,
];

/// Symbol → (code, length) for emitting.
pub struct EncodeTable {
    codes: [(u16, u8); 256],
}

impl EncodeTable {
    pub fn new(bits: &[u8; 16], values: &[u8]) -> Self {
        let mut codes = [(0u16, 0u8); 256];
        let mut code = 0u16;
        let mut k = 0;
        for (i, &count) in bits.iter().enumerate() {
            for _ in 0..count {
                codes[values[k] as usize] = (code, i as u8 + 1);
                code += 1;
                k += 1;
            }
            code <<= 1;
        }
        EncodeTable { codes }
    }

    /// `(code, length)`; length 0 means the symbol has no code.
    #[inline]
    pub fn get(&self, symbol: u8) -> (u16, u8) {
        self.codes[symbol as usize]
    }
}

/// Canonical decoder in the style of T.81 F.2.2.3 (MAXCODE/VALPTR).
#[derive(Debug, Clone)]
pub struct DecodeTable {
    mincode: [i32; 17],
    maxcode: [i32; 17],
    valptr: [usize; 17],
    values: Vec<u8>,
}

impl DecodeTable {
    pub fn new(bits: &[u8; 16], values: Vec<u8>) -> Result<Self, JpegError> {
        let total: usize = bits.iter().map(|&b| b as usize).sum();
        if total != values.len() || total > 256 {
            return Err(JpegError::MalformedSegment("DHT"));
        }
        let mut mincode = [0; 17];
        let mut maxcode = [-1; 17];
        let mut valptr = [0; 17];
        let mut code = 0i32;
        let mut k = 0usize;
        for len in 1..=16 {
            let count = bits[len - 1] as i32;
            if count > 0 {
                valptr[len] = k;
                mincode[len] = code;
                code += count;
                k += count as usize;
                maxcode[len] = code - 1;
                if code > (1 << len) {
                    return Err(JpegError::MalformedSegment("DHT"));
                }
            }
            code <<= 1;
        }
        Ok(DecodeTable {
            mincode,
            maxcode,
            valptr,
            values,
        })
    }

    /// Reads one symbol, pulling bits one at a time from `next_bit`.
    pub fn decode(
        &self,
        mut next_bit: impl FnMut() -> Result<u32, JpegError>,
    ) -> Result<u8, JpegError> {
        let mut code = 0i32;
        for len in 1..=16 {
            code = (code << 1) | next_bit()? as i32;
            if code <= self.maxcode[len] {
                return Ok(self.values[self.valptr[len] + (code - self.mincode[len]) as usize]);
            }
        }
        Err(JpegError::InvalidHuffmanCode)
    }
}
