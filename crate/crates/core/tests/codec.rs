use std::path::PathBuf;

use proptest::prelude::*;
use sawmark::jpegsim::{decode_jpeg_with, encode_jpeg_with};
use sawmark::pixmap::{gen_phantom, load_pgm, Lcg};
use sawmark::{decode_jpeg, encode_jpeg, roundtrip, Exec, Image, JpegError};
use zune_core::bytestream::ZCursor;
use zune_core::colorspace::ColorSpace;
use zune_core::options::DecoderOptions;
use zune_jpeg::JpegDecoder;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn noisy(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = Lcg::new(seed);
    Image::from_fn(width, height, |x, y| {
        let base = ((x * 3 + y * 5) % 200) as u32;
        (base + rng.next_u32() % 56) as u8
    })
    .unwrap()
}

fn zune_decode(bytes: &[u8]) -> Vec<u8> {
    let opts = DecoderOptions::default().jpeg_set_out_colorspace(ColorSpace::Luma);
    let mut dec = JpegDecoder::new_with_options(ZCursor::new(bytes), opts);
    dec.decode()
        .expect("independent decoder accepts the stream")
}

/// Compares against a checked-in file; `SAWMARK_BLESS=1` rewrites it.
fn check_golden(name: &str, bytes: &[u8]) {
    let path = golden(name);
    if std::env::var_os("SAWMARK_BLESS").is_some() {
        std::fs::write(&path, bytes).unwrap();
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        want == bytes,
        "{name} differs from the golden file ({} vs {} bytes)",
        bytes.len(),
        want.len()
    );
}

#[test]
fn encoder_matches_golden_files() {
    let phantom = gen_phantom(64, 64, 7).unwrap();
    check_golden(
        "phantom64_q60.jpg",
        encode_jpeg(&phantom, 60).unwrap().as_bytes(),
    );
    check_golden(
        "phantom64_q90.jpg",
        encode_jpeg(&phantom, 90).unwrap().as_bytes(),
    );
    let ramp = Image::from_fn(21, 13, |x, y| (x * 12 + y * 3) as u8).unwrap();
    check_golden(
        "ramp21x13_q75.jpg",
        encode_jpeg(&ramp, 75).unwrap().as_bytes(),
    );
}

#[test]
fn golden_files_decode_like_the_simulator() {
    let phantom = gen_phantom(64, 64, 7).unwrap();
    for q in [60, 90] {
        let bytes = std::fs::read(golden(&format!("phantom64_q{q}.jpg"))).unwrap();
        assert_eq!(
            decode_jpeg(&bytes).unwrap(),
            roundtrip(&phantom, q, true).unwrap()
        );
    }
}

#[test]
fn codec_equals_simulator_on_unaligned_images() {
    for (w, h, q) in [
        (8, 8, 50),
        (13, 29, 30),
        (67, 45, 90),
        (100, 9, 5),
        (31, 64, 100),
    ] {
        let img = noisy(w, h, (w * h) as u64);
        let jpeg = encode_jpeg(&img, q).unwrap();
        assert_eq!((jpeg.width, jpeg.height), (w, h));
        let decoded = decode_jpeg(jpeg.as_bytes()).unwrap();
        assert_eq!(decoded, roundtrip(&img, q, true).unwrap(), "{w}x{h} q{q}");
    }
}

#[test]
fn sequential_and_parallel_codecs_agree() {
    let img = noisy(96, 80, 3);
    let a = encode_jpeg_with(&img, 70, Exec::Sequential).unwrap();
    let b = encode_jpeg_with(&img, 70, Exec::Parallel).unwrap();
    assert_eq!(a.as_bytes(), b.as_bytes());
    assert_eq!(
        decode_jpeg_with(a.as_bytes(), Exec::Sequential).unwrap(),
        decode_jpeg_with(a.as_bytes(), Exec::Parallel).unwrap()
    );
}

#[test]
fn stream_layout() {
    let jpeg = encode_jpeg(&noisy(16, 16, 1), 60).unwrap();
    let b = jpeg.as_bytes();
    assert_eq!(&b[..2], &[0xFF, 0xD8]);
    assert_eq!(&b[2..4], &[0xFF, 0xE0]);
    assert_eq!(&b[6..11], b"JFIF\0");
    assert_eq!(&b[b.len() - 2..], &[0xFF, 0xD9]);
    // SOF0 before SOS, exactly one of each.
    let find = |m: u8| b.windows(2).filter(|w| w == &[0xFF, m]).count();
    assert_eq!(find(0xC0), 1);
    assert_eq!(find(0xDA), 1);
    assert_eq!(find(0xC4), 2);
}

#[test]
fn independent_decoder_accepts_and_agrees_within_one_level() {
    // Fixed-point IDCTs in common decoders round differently from the exact
    // float IDCT, so agreement is ±1 rather than bit-exact.
    let phantom = gen_phantom(800, 600, 1).unwrap();
    for q in [30, 60, 90, 100] {
        let jpeg = encode_jpeg(&phantom, q).unwrap();
        let theirs = zune_decode(jpeg.as_bytes());
        let ours = decode_jpeg(jpeg.as_bytes()).unwrap();
        assert_eq!(theirs.len(), ours.pixels().len());
        let worst = theirs
            .iter()
            .zip(ours.pixels())
            .map(|(&a, &b)| a.abs_diff(b))
            .max()
            .unwrap();
        assert!(worst <= 1, "q{q}: max difference {worst}");
    }
}

#[test]
fn decodes_third_party_baseline_files() {
    // Produced by libjpeg at quality 75: standard and optimized Huffman
    // tables, with libjpeg's own decode stored alongside.
    for name in ["libjpeg_q75", "libjpeg_q75_optimized"] {
        let bytes = std::fs::read(golden(&format!("{name}.jpg"))).unwrap();
        let reference =
            load_pgm(&std::fs::read(golden(&format!("{name}_reference.pgm"))).unwrap()).unwrap();
        let ours = decode_jpeg(&bytes).unwrap();
        assert_eq!(ours.dims(), (67, 45));
        let worst = ours
            .pixels()
            .iter()
            .zip(reference.pixels())
            .map(|(&a, &b)| a.abs_diff(b))
            .max()
            .unwrap();
        assert!(worst <= 1, "{name}: max difference {worst}");
    }
}

#[test]
fn rejects_unsupported_files() {
    let progressive = std::fs::read(golden("libjpeg_progressive.jpg")).unwrap();
    assert!(matches!(
        decode_jpeg(&progressive),
        Err(JpegError::Unsupported(_))
    ));
    let rgb = std::fs::read(golden("libjpeg_rgb.jpg")).unwrap();
    assert!(matches!(decode_jpeg(&rgb), Err(JpegError::Unsupported(_))));
}

#[test]
fn rejects_restart_intervals() {
    let jpeg = encode_jpeg(&noisy(16, 16, 2), 60).unwrap().into_bytes();
    // Insert DRI with a nonzero interval right after SOI.
    let mut bytes = vec![0xFF, 0xD8, 0xFF, 0xDD, 0x00, 0x04, 0x00, 0x01];
    bytes.extend_from_slice(&jpeg[2..]);
    assert!(matches!(
        decode_jpeg(&bytes),
        Err(JpegError::Unsupported(_))
    ));
}

#[test]
fn truncation_is_detected() {
    let jpeg = encode_jpeg(&noisy(64, 64, 5), 80).unwrap().into_bytes();
    assert_eq!(decode_jpeg(&[]), Err(JpegError::TruncatedStream));
    assert_eq!(decode_jpeg(&[0x00, 0x01, 0x02]), Err(JpegError::MissingSoi));
    // Every prefix must fail cleanly; none may panic or succeed.
    for len in (2..jpeg.len() - 2).step_by(7) {
        assert!(
            decode_jpeg(&jpeg[..len]).is_err(),
            "prefix of {len} bytes decoded"
        );
    }
    assert_eq!(
        decode_jpeg(&jpeg[..jpeg.len() - 2]),
        Err(JpegError::TruncatedStream)
    );
}

#[test]
fn rejects_bad_quality_and_size() {
    let img = noisy(8, 8, 0);
    assert_eq!(
        encode_jpeg(&img, 0).unwrap_err(),
        JpegError::QualityOutOfRange(0)
    );
    assert_eq!(
        encode_jpeg(&img, 101).unwrap_err(),
        JpegError::QualityOutOfRange(101)
    );
}

#[test]
fn size_shrinks_with_quality() {
    let phantom = gen_phantom(256, 256, 4).unwrap();
    let sizes: Vec<usize> = [20, 40, 60, 80, 95]
        .iter()
        .map(|&q| encode_jpeg(&phantom, q).unwrap().len())
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_images_roundtrip_through_the_codec(
        w in 1usize..40,
        h in 1usize..40,
        q in 1u32..=100,
        seed in any::<u64>(),
    ) {
        let img = noisy(w, h, seed);
        let decoded = decode_jpeg(encode_jpeg(&img, q).unwrap().as_bytes()).unwrap();
        prop_assert_eq!(decoded, roundtrip(&img, q, true).unwrap());
    }

    #[test]
    fn corrupted_streams_never_panic(seed in any::<u64>(), flips in 1usize..8) {
        let mut bytes = encode_jpeg(&noisy(24, 24, seed), 60).unwrap().into_bytes();
        let mut rng = Lcg::new(seed);
        for _ in 0..flips {
            let i = rng.next_u32() as usize % bytes.len();
            bytes[i] ^= 1 << (rng.next_u32() % 8);
        }
        let _ = decode_jpeg(&bytes);
    }
}
