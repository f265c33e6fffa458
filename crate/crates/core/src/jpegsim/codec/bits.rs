use super::super::JpegError;

/// MSB-first bit packer with 0xFF byte stuffing.
pub struct BitWriter {
    out: Vec<u8>,
    acc: u32,
    nbits: u8,
}

impl BitWriter {
    pub fn new(out: Vec<u8>) -> Self {
        BitWriter {
            out,
            acc: 0,
            nbits: 0,
        }
    }

    /// Appends the low `len` bits of `bits` (len ≤ 16).
    pub fn put(&mut self, bits: u32, len: u8) {
        debug_assert!(len <= 16);
        self.acc = (self.acc << len) | (bits & ((1u32 << len) - 1));
        self.nbits += len;
        while self.nbits >= 8 {
            self.nbits -= 8;
            let byte = (self.acc >> self.nbits) as u8;
            self.out.push(byte);
            if byte == 0xff {
                self.out.push(0x00);
            }
        }
        self.acc &= (1u32 << self.nbits) - 1;
    }

    /// Pads the final partial byte with 1-bits and returns the buffer.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            let pad = 8 - self.nbits;
            self.put((1 << pad) - 1, pad);
        }
        self.out
    }
}

/// Reads entropy-coded data, removing stuffed zero bytes and stopping at the
/// first marker.
pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
    acc: u32,
    nbits: u8,
    hit_marker: bool,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader {
            data,
            pos: 0,
            acc: 0,
            nbits: 0,
            hit_marker: false,
        }
    }

    fn fill_byte(&mut self) -> Result<(), JpegError> {
        if self.hit_marker {
            return Err(JpegError::TruncatedStream);
        }
        let byte = *self.data.get(self.pos).ok_or(JpegError::TruncatedStream)?;
        if byte == 0xff {
            match self.data.get(self.pos + 1) {
                Some(0x00) => self.pos += 2,
                Some(_) => {
                    self.hit_marker = true;
                    return Err(JpegError::TruncatedStream);
                }
                None => return Err(JpegError::TruncatedStream),
            }
        } else {
            self.pos += 1;
        }
        self.acc = (self.acc << 8) | byte as u32;
        self.nbits += 8;
        Ok(())
    }

    pub fn bit(&mut self) -> Result<u32, JpegError> {
        if self.nbits == 0 {
            self.fill_byte()?;
        }
        self.nbits -= 1;
        Ok((self.acc >> self.nbits) & 1)
    }

    pub fn bits(&mut self, len: u8) -> Result<u32, JpegError> {
        let mut v = 0;
        for _ in 0..len {
            v = (v << 1) | self.bit()?;
        }
        Ok(v)
    }

    /// Byte offset just past the entropy-coded data consumed so far
    /// (partial trailing byte included).
    pub fn position(&self) -> usize {
        self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stuffs_ff_and_pads_with_ones() {
        let mut w = BitWriter::new(Vec::new());
        w.put(0xff, 8);
        w.put(0b01, 2);
        assert_eq!(w.finish(), vec![0xff, 0x00, 0b0111_1111]);
    }

    #[test]
    fn reader_unstuffs_and_stops_at_marker() {
        let data = [0xff, 0x00, 0xa5, 0xff, 0xd9];
        let mut r = BitReader::new(&data);
        assert_eq!(r.bits(8).unwrap(), 0xff);
        assert_eq!(r.bits(8).unwrap(), 0xa5);
        assert_eq!(r.position(), 3);
        assert_eq!(r.bit(), Err(JpegError::TruncatedStream));
    }

    #[test]
    fn writer_reader_roundtrip() {
        let items: Vec<(u32, u8)> = (0..500u32)
            .map(|i| ((i * 7919) & 0xffff, (i % 16 + 1) as u8))
            .collect();
        let mut w = BitWriter::new(Vec::new());
        for &(v, l) in &items {
            w.put(v, l);
        }
        let data = w.finish();
        let mut r = BitReader::new(&data);
        for &(v, l) in &items {
            assert_eq!(r.bits(l).unwrap(), v & ((1 << l) - 1));
        }
    }
}
