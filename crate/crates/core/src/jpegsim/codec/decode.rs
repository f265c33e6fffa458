use super::bits::BitReader;
use super::huffman::DecodeTable;
use super::{extend, marker};
use crate::exec::Exec;
use crate::jpegsim::{reconstruct_block, unzigzag, JpegError, LevelBlock, QTable, ZIGZAG};
use crate::pixmap::{block_grid, Image};

/// Decodes a baseline (or 8-bit extended sequential) single-component
/// Huffman JPEG. Progressive, lossless, arithmetic-coded, multi-component,
/// 12-bit and restart-interval streams are rejected.
pub fn decode_jpeg(data: &[u8]) -> Result<Image, JpegError> {
    decode_jpeg_with(data, Exec::default())
}

pub fn decode_jpeg_with(data: &[u8], exec: Exec) -> Result<Image, JpegError> {
    let mut parser = Parser::new(data);
    if parser.marker()? != marker::SOI {
        return Err(JpegError::MissingSoi);
    }

    let mut qtables: [Option<QTable>; 4] = [None; 4];
    let mut dc_tables: [Option<DecodeTable>; 4] = Default::default();
    let mut ac_tables: [Option<DecodeTable>; 4] = Default::default();
    let mut frame: Option<Frame> = None;

    loop {
        let code = parser.marker()?;
        match code {
            marker::SOF0 | marker::SOF1 => {
                if frame.is_some() {
                    return Err(JpegError::UnexpectedMarker(code));
                }
                frame = Some(parse_frame(parser.segment()?)?);
            }
            0xc2 | 0xc6 | 0xca | 0xce => return Err(JpegError::Unsupported("progressive")),
            0xc3 | 0xc7 | 0xcb | 0xcf => return Err(JpegError::Unsupported("lossless")),
            0xc5 => return Err(JpegError::Unsupported("hierarchical")),
            0xc9 | 0xcd => return Err(JpegError::Unsupported("arithmetic coding")),
            marker::DHT => parse_dht(parser.segment()?, &mut dc_tables, &mut ac_tables)?,
            marker::DQT => parse_dqt(parser.segment()?, &mut qtables)?,
            marker::DRI => {
                let body = parser.segment()?;
                if body.len() != 2 {
                    return Err(JpegError::MalformedSegment("DRI"));
                }
                if u16::from_be_bytes([body[0], body[1]]) != 0 {
                    return Err(JpegError::Unsupported("restart intervals"));
                }
            }
            0xe0..=0xef | marker::COM => {
                parser.segment()?;
            }
            marker::SOS => {
                let frame = frame.as_ref().ok_or(JpegError::UnexpectedMarker(code))?;
                let scan = parse_sos(parser.segment()?, frame)?;
                let q = qtables[frame.qtable].ok_or(JpegError::MissingTable("quantization"))?;
                let dc = dc_tables[scan.dc]
                    .as_ref()
                    .ok_or(JpegError::MissingTable("DC Huffman"))?;
                let ac = ac_tables[scan.ac]
                    .as_ref()
                    .ok_or(JpegError::MissingTable("AC Huffman"))?;

                let nblocks = frame.width.div_ceil(8) * frame.height.div_ceil(8);
                let mut reader = BitReader::new(parser.rest());
                let levels = decode_scan(&mut reader, nblocks, dc, ac)?;
                parser.advance(reader.position());
                match parser.marker()? {
                    marker::EOI => {}
                    other => return Err(JpegError::UnexpectedMarker(other)),
                }
                return Ok(assemble(frame, &levels, &q, exec));
            }
            other => return Err(JpegError::UnexpectedMarker(other)),
        }
    }
}

struct Frame {
    width: usize,
    height: usize,
    component: u8,
    qtable: usize,
}

struct Scan {
    dc: usize,
    ac: usize,
}

struct Parser<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(data: &'a [u8]) -> Self {
        Parser { data, pos: 0 }
    }

    /// Next marker code, skipping fill bytes. Non-marker bytes are an error.
    fn marker(&mut self) -> Result<u8, JpegError> {
        let first = *self.data.get(self.pos).ok_or(JpegError::TruncatedStream)?;
        if first != 0xff {
            return Err(if self.pos == 0 {
                JpegError::MissingSoi
            } else {
                JpegError::MalformedSegment("marker")
            });
        }
        self.pos += 1;
        loop {
            let b = *self.data.get(self.pos).ok_or(JpegError::TruncatedStream)?;
            self.pos += 1;
            match b {
                0xff => continue,
                0x00 => return Err(JpegError::MalformedSegment("marker")),
                code => return Ok(code),
            }
        }
    }

    /// Body of a length-prefixed segment.
    fn segment(&mut self) -> Result<&'a [u8], JpegError> {
        let len_bytes = self
            .data
            .get(self.pos..self.pos + 2)
            .ok_or(JpegError::TruncatedStream)?;
        let len = u16::from_be_bytes([len_bytes[0], len_bytes[1]]) as usize;
        if len < 2 {
            return Err(JpegError::MalformedSegment("length"));
        }
        let body = self
            .data
            .get(self.pos + 2..self.pos + len)
            .ok_or(JpegError::TruncatedStream)?;
        self.pos += len;
        Ok(body)
    }

    fn rest(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }

    fn advance(&mut self, n: usize) {
        self.pos += n;
    }
}

fn parse_frame(body: &[u8]) -> Result<Frame, JpegError> {
    if body.len() < 6 {
        return Err(JpegError::MalformedSegment("SOF"));
    }
    if body[0] != 8 {
        return Err(JpegError::Unsupported("sample precision other than 8 bits"));
    }
    let height = u16::from_be_bytes([body[1], body[2]]) as usize;
    let width = u16::from_be_bytes([body[3], body[4]]) as usize;
    let ncomp = body[5];
    if ncomp != 1 {
        return Err(JpegError::Unsupported("multi-component"));
    }
    if body.len() != 9 {
        return Err(JpegError::MalformedSegment("SOF"));
    }
    if height == 0 {
        return Err(JpegError::Unsupported("DNL-defined height"));
    }
    if width == 0 {
        return Err(JpegError::MalformedSegment("SOF"));
    }
    let qtable = body[8] as usize;
    if qtable > 3 {
        return Err(JpegError::MalformedSegment("SOF"));
    }
    Ok(Frame {
        width,
        height,
        component: body[6],
        qtable,
    })
}

fn parse_dqt(mut body: &[u8], tables: &mut [Option<QTable>; 4]) -> Result<(), JpegError> {
    while !body.is_empty() {
        let precision = body[0] >> 4;
        let id = (body[0] & 0x0f) as usize;
        if id > 3 || precision > 1 {
            return Err(JpegError::MalformedSegment("DQT"));
        }
        let entry = if precision == 0 { 1 } else { 2 };
        let values = body
            .get(1..1 + 64 * entry)
            .ok_or(JpegError::MalformedSegment("DQT"))?;
        let mut steps = [0u8; 64];
        for (i, &natural) in ZIGZAG.iter().enumerate() {
            let v = if precision == 0 {
                values[i] as u16
            } else {
                u16::from_be_bytes([values[2 * i], values[2 * i + 1]])
            };
            steps[natural] =
                u8::try_from(v).map_err(|_| JpegError::Unsupported("quantizer steps above 255"))?;
        }
        tables[id] = Some(QTable::new(steps)?);
        body = &body[1 + 64 * entry..];
    }
    Ok(())
}

fn parse_dht(
    mut body: &[u8],
    dc: &mut [Option<DecodeTable>; 4],
    ac: &mut [Option<DecodeTable>; 4],
) -> Result<(), JpegError> {
    while !body.is_empty() {
        if body.len() < 17 {
            return Err(JpegError::MalformedSegment("DHT"));
        }
        let class = body[0] >> 4;
        let id = (body[0] & 0x0f) as usize;
        if class > 1 || id > 3 {
            return Err(JpegError::MalformedSegment("DHT"));
        }
        let bits: [u8; 16] = body[1..17].try_into().expect("16 bytes");
        let total: usize = bits.iter().map(|&b| b as usize).sum();
        let values = body
            .get(17..17 + total)
            .ok_or(JpegError::MalformedSegment("DHT"))?;
        let table = DecodeTable::new(&bits, values.to_vec())?;
        if class == 0 {
            dc[id] = Some(table);
        } else {
            ac[id] = Some(table);
        }
        body = &body[17 + total..];
    }
    Ok(())
}

fn parse_sos(body: &[u8], frame: &Frame) -> Result<Scan, JpegError> {
    if body.is_empty() {
        return Err(JpegError::MalformedSegment("SOS"));
    }
    if body[0] != 1 {
        return Err(JpegError::Unsupported("multi-component scan"));
    }
    if body.len() != 6 {
        return Err(JpegError::MalformedSegment("SOS"));
    }
    if body[1] != frame.component {
        return Err(JpegError::MalformedSegment("SOS"));
    }
    let (dc, ac) = ((body[2] >> 4) as usize, (body[2] & 0x0f) as usize);
    if dc > 3 || ac > 3 {
        return Err(JpegError::MalformedSegment("SOS"));
    }
    if body[3] != 0 || body[4] != 63 || body[5] != 0 {
        return Err(JpegError::Unsupported(
            "spectral selection or successive approximation",
        ));
    }
    Ok(Scan { dc, ac })
}

fn decode_scan(
    reader: &mut BitReader<'_>,
    nblocks: usize,
    dc: &DecodeTable,
    ac: &DecodeTable,
) -> Result<Vec<LevelBlock>, JpegError> {
    let mut out = Vec::with_capacity(nblocks);
    let mut pred = 0i32;
    for _ in 0..nblocks {
        let mut scan = [0i32; 64];
        let cat = dc.decode(|| reader.bit())?;
        if cat > 11 {
            return Err(JpegError::CoefficientOverflow);
        }
        pred += extend(reader.bits(cat)?, cat);
        scan[0] = pred;

        let mut k = 1;
        while k < 64 {
            let symbol = ac.decode(|| reader.bit())?;
            let (run, cat) = ((symbol >> 4) as usize, symbol & 0x0f);
            if cat == 0 {
                if run == 15 {
                    k += 16;
                    continue;
                }
                break;
            }
            k += run;
            if k > 63 || cat > 10 {
                return Err(JpegError::CoefficientOverflow);
            }
            scan[k] = extend(reader.bits(cat)?, cat);
            k += 1;
        }
        if k > 64 {
            return Err(JpegError::CoefficientOverflow);
        }
        out.push(unzigzag(&scan));
    }
    Ok(out)
}

fn assemble(frame: &Frame, levels: &[LevelBlock], q: &QTable, exec: Exec) -> Image {
    let (pw, ph) = (frame.width.div_ceil(8) * 8, frame.height.div_ceil(8) * 8);
    let mut img = Image::filled(pw, ph, 0).expect("non-zero frame size");
    let grid = block_grid(&img).expect("aligned");
    let samples = exec.map(levels, |l| reconstruct_block(l, q, true));
    for (pos, s) in grid.iter().zip(&samples) {
        img.put_block(*pos, s);
    }
    img.crop(frame.width, frame.height)
}
