use super::bits::BitWriter;
use super::huffman::{EncodeTable, LUMA_AC_BITS, LUMA_AC_VALUES, LUMA_DC_BITS, LUMA_DC_VALUES};
use super::{category, marker, JpegBytes};
use crate::exec::Exec;
use crate::jpegsim::{analyze_block, zigzag, JpegError, LevelBlock, QTable, ZIGZAG};
use crate::pixmap::{block_grid, Image};

/// Encodes `img` as a baseline grayscale JFIF at `quality`.
///
/// Segment order: SOI, APP0 (JFIF 1.01), DQT, SOF0, DHT (DC then AC),
/// SOS, scan, EOI. Images whose sides are not multiples of 8 are padded by
/// edge replication; SOF0 carries the true size.
pub fn encode_jpeg(img: &Image, quality: u32) -> Result<JpegBytes, JpegError> {
    encode_jpeg_with(img, quality, Exec::default())
}

pub fn encode_jpeg_with(img: &Image, quality: u32, exec: Exec) -> Result<JpegBytes, JpegError> {
    let q = QTable::for_quality(quality)?;
    if img.width() > u16::MAX as usize || img.height() > u16::MAX as usize {
        return Err(JpegError::Unsupported("dimensions above 65535"));
    }
    let padded = img.pad_to_blocks();
    let grid = block_grid(&padded).expect("padded image is block aligned");
    let levels: Vec<LevelBlock> =
        exec.map(&grid, |&pos| analyze_block(&padded.block(pos), &q, true));

    let mut out = Vec::with_capacity(img.pixels().len() / 8);
    out.extend_from_slice(&[0xff, marker::SOI]);
    write_app0(&mut out);
    write_dqt(&mut out, &q);
    write_sof0(&mut out, img.width() as u16, img.height() as u16);
    write_dht(&mut out, 0, &LUMA_DC_BITS, &LUMA_DC_VALUES);
    write_dht(&mut out, 1, &LUMA_AC_BITS, &LUMA_AC_VALUES);
    write_sos(&mut out);

    let dc = EncodeTable::new(&LUMA_DC_BITS, &LUMA_DC_VALUES);
    let ac = EncodeTable::new(&LUMA_AC_BITS, &LUMA_AC_VALUES);
    let mut writer = BitWriter::new(out);
    // DC prediction runs over blocks in raster order.
    let mut pred = 0;
    for block in &levels {
        let scan = zigzag(block);
        encode_block(&mut writer, &scan, &mut pred, &dc, &ac)?;
    }
    let mut out = writer.finish();
    out.extend_from_slice(&[0xff, marker::EOI]);

    Ok(JpegBytes {
        bytes: out,
        width: img.width(),
        height: img.height(),
        quality,
    })
}

fn encode_block(
    w: &mut BitWriter,
    scan: &[i32; 64],
    pred: &mut i32,
    dc: &EncodeTable,
    ac: &EncodeTable,
) -> Result<(), JpegError> {
    let diff = scan[0] - *pred;
    *pred = scan[0];
    let cat = category(diff);
    if cat > 11 {
        return Err(JpegError::CoefficientOverflow);
    }
    emit(w, dc, cat);
    put_amplitude(w, diff, cat);

    let mut run = 0u8;
    for &v in &scan[1..] {
        if v == 0 {
            run += 1;
            continue;
        }
        while run > 15 {
            emit(w, ac, 0xf0);
            run -= 16;
        }
        let cat = category(v);
        if cat > 10 {
            return Err(JpegError::CoefficientOverflow);
        }
        emit(w, ac, (run << 4) | cat);
        put_amplitude(w, v, cat);
        run = 0;
    }
    if run > 0 {
        emit(w, ac, 0x00);
    }
    Ok(())
}

#[inline]
fn emit(w: &mut BitWriter, table: &EncodeTable, symbol: u8) {
    let (code, len) = table.get(symbol);
    debug_assert!(len > 0, "symbol {symbol:#x} missing from table");
    w.put(code as u32, len);
}

#[inline]
fn put_amplitude(w: &mut BitWriter, v: i32, cat: u8) {
    if cat > 0 {
        let bits = if v >= 0 { v } else { v + (1 << cat) - 1 };
        w.put(bits as u32, cat);
    }
}

fn segment(out: &mut Vec<u8>, code: u8, body: &[u8]) {
    out.extend_from_slice(&[0xff, code]);
    out.extend_from_slice(&((body.len() + 2) as u16).to_be_bytes());
    out.extend_from_slice(body);
}

fn write_app0(out: &mut Vec<u8>) {
    // identifier, version 1.01, no units, 1:1 density, no thumbnail
    segment(
        out,
        marker::APP0,
        &[b'J', b'F', b'I', b'F', 0, 1, 1, 0, 0, 1, 0, 1, 0, 0],
    );
}

fn write_dqt(out: &mut Vec<u8>, q: &QTable) {
    let mut body = Vec::with_capacity(65);
    body.push(0x00); // 8-bit precision, table 0
    body.extend(ZIGZAG.iter().map(|&n| q.steps()[n]));
    segment(out, marker::DQT, &body);
}

fn write_sof0(out: &mut Vec<u8>, width: u16, height: u16) {
    let mut body = vec![8];
    body.extend_from_slice(&height.to_be_bytes());
    body.extend_from_slice(&width.to_be_bytes());
    body.extend_from_slice(&[1, 1, 0x11, 0]);
    segment(out, marker::SOF0, &body);
}

fn write_dht(out: &mut Vec<u8>, class: u8, bits: &[u8; 16], values: &[u8]) {
    let mut body = vec![class << 4];
    body.extend_from_slice(bits);
    body.extend_from_slice(values);
    segment(out, marker::DHT, &body);
}

fn write_sos(out: &mut Vec<u8>) {
    // one component (id 1, tables 0/0), full spectral range, no approximation
    segment(out, marker::SOS, &[1, 1, 0x00, 0, 63, 0]);
}
