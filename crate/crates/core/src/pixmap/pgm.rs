//! Binary PGM (P5, maxval 255) reader and writer.

use super::{Image, PixmapError};

/// Parses a binary PGM. Header tokens may be separated by any whitespace
/// and interleaved with `#` comments; exactly one whitespace byte follows
/// the maxval. Bytes after the raster are ignored.
pub fn load_pgm(bytes: &[u8]) -> Result<Image, PixmapError> {
    match bytes.get(..2) {
        Some(b"P5") => {}
        Some(b"P2") => return Err(PixmapError::AsciiUnsupported),
        _ => return Err(PixmapError::BadMagic),
    }
    let mut cursor = Header { bytes, pos: 2 };
    let width = cursor.number()?;
    let height = cursor.number()?;
    let maxval = cursor.number()?;
    if maxval != 255 {
        return Err(PixmapError::MaxvalUnsupported(maxval));
    }
    match bytes.get(cursor.pos) {
        Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
        _ => {
            return Err(PixmapError::MalformedHeader(
                "missing whitespace after maxval",
            ))
        }
    }
    let (width, height) = (width as usize, height as usize);
    if width == 0 || height == 0 {
        return Err(PixmapError::InvalidDimensions { width, height });
    }
    let expected = width * height;
    let data = &bytes[cursor.pos..];
    if data.len() < expected {
        return Err(PixmapError::Truncated {
            expected,
            got: data.len(),
        });
    }
    Image::new(width, height, data[..expected].to_vec())
}

/// Canonical encoding: `P5\n<w> <h>\n255\n` followed by the raw pixels.
pub fn save_pgm(img: &Image) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.pixels().len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(img.pixels());
    out
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) -> Result<(), PixmapError> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while let Some(&b) = self.bytes.get(self.pos) {
                        self.pos += 1;
                        if b == b'\n' || b == b'\r' {
                            break;
                        }
                    }
                }
                Some(_) => return Ok(()),
                None => return Err(PixmapError::MalformedHeader("unexpected end of header")),
            }
        }
    }

    fn number(&mut self) -> Result<u32, PixmapError> {
        let before = self.pos;
        self.skip_space()?;
        if self.pos == before {
            return Err(PixmapError::MalformedHeader("expected whitespace"));
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PixmapError::MalformedHeader("expected a decimal number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PixmapError::MalformedHeader("number out of range"))
    }
}
