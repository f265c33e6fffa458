use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sawmark::pixmap::load_pgm;
use sawmark::watermark::{detect_roi, digest, embeddable_blocks, serialize_roi};
use sawmark::EmbedManifest;
use tempfile::TempDir;

fn sawmark(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sawmark"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("stderr is a JSON error");
    v["error"].as_str().unwrap().to_string()
}

/// A phantom plus its watermarked copy and manifest.
fn setup(width: usize, height: usize) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let w = width.to_string();
    let h = height.to_string();
    let o = sawmark(
        &["gen", "--width", &w, "--height", &h, "-o", "p.pgm"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = sawmark(
        &["embed", "p.pgm", "-o", "w.pgm", "-m", "m.json"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let path = dir.path().to_path_buf();
    (dir, path)
}

#[test]
fn gen_writes_deterministic_phantom() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.pgm", "b.pgm"] {
        let o = sawmark(
            &[
                "gen", "--width", "800", "--height", "600", "--seed", "1", "-o", name,
            ],
            dir.path(),
        );
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let a = std::fs::read(dir.path().join("a.pgm")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.pgm")).unwrap());
    let img = load_pgm(&a).unwrap();
    assert_eq!(img.pixels().len(), 480_000);
    let roi = detect_roi(&img, 0).unwrap();
    assert!(embeddable_blocks(800, 600, roi, 1).len() >= 256);
}

#[test]
fn gen_rejects_unaligned_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = sawmark(
        &["gen", "--width", "100", "--height", "64", "-o", "x.pgm"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "not-block-aligned");
}

#[test]
fn embed_prints_the_manifest_digest() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sawmark(&["gen", "-o", "p.pgm"], dir.path())
        .status
        .success());
    let o = sawmark(
        &["embed", "p.pgm", "-o", "w.pgm", "-m", "m.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let printed = stdout(&o).trim().to_string();
    let manifest =
        EmbedManifest::from_json(&std::fs::read_to_string(dir.path().join("m.json")).unwrap())
            .unwrap();
    assert_eq!(printed, manifest.digest.to_hex());

    let img = load_pgm(&std::fs::read(dir.path().join("p.pgm")).unwrap()).unwrap();
    assert_eq!(
        manifest.digest,
        digest(&serialize_roi(&img, manifest.roi).unwrap(), None)
    );
    let raw: serde_json::Value = serde_json::from_str(&manifest.to_json()).unwrap();
    let mut keys: Vec<&str> = raw
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort();
    assert_eq!(keys, ["digest", "guard", "keyed_hash", "n", "plane", "roi"]);
}

#[test]
fn embed_is_deterministic() {
    let (_d, dir) = setup(320, 240);
    let o = sawmark(&["embed", "p.pgm", "-o", "w2.pgm", "-m", "m2.json"], &dir);
    assert!(o.status.success());
    let same = |a: &str, b: &str| {
        std::fs::read(dir.join(a)).unwrap() == std::fs::read(dir.join(b)).unwrap()
    };
    assert!(same("w.pgm", "w2.pgm"));
    assert!(same("m.json", "m2.json"));
}

#[test]
fn tiny_input_reports_capacity() {
    let dir = tempfile::tempdir().unwrap();
    assert!(sawmark(
        &["gen", "--width", "64", "--height", "64", "-o", "t.pgm"],
        dir.path()
    )
    .status
    .success());
    let o = sawmark(
        &["embed", "t.pgm", "-o", "w.pgm", "-m", "m.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(error_code(&o), "capacity-exceeded");
    assert!(!dir.path().join("w.pgm").exists());
}

#[test]
fn strict_verify_passes_then_fails_on_tamper() {
    let (_d, dir) = setup(320, 240);
    let o = sawmark(&["verify", "w.pgm", "-m", "m.json"], &dir);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["mode"], "strict");
    assert_eq!(report["differing_bits"], 0);

    // Flip the LSB of one pixel in the middle of the ROI.
    let manifest =
        EmbedManifest::from_json(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    let mut img = load_pgm(&std::fs::read(dir.join("w.pgm")).unwrap()).unwrap();
    let (x, y) = (
        manifest.roi.x + manifest.roi.w / 2,
        manifest.roi.y + manifest.roi.h / 2,
    );
    img.set(x, y, img.get(x, y) ^ 1);
    std::fs::write(dir.join("t.pgm"), sawmark::pixmap::save_pgm(&img)).unwrap();
    let o = sawmark(
        &["verify", "t.pgm", "-m", "m.json", "--mode", "strict"],
        &dir,
    );
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "fail");
}

#[test]
fn reference_verify_survives_quality_60() {
    let (_d, dir) = setup(320, 240);
    let o = sawmark(&["compress", "w.pgm", "-q", "60", "-o", "w.jpg"], &dir);
    assert!(o.status.success());
    let info: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(info["compression_pct"].as_f64().unwrap() > 80.0);

    let o = sawmark(
        &["verify", "w.jpg", "-m", "m.json", "--mode", "reference"],
        &dir,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    // ROI pixels changed, so the recomputed digest cannot match.
    let o = sawmark(
        &["verify", "w.jpg", "-m", "m.json", "--mode", "strict"],
        &dir,
    );
    assert_eq!(o.status.code(), Some(1));

    let o = sawmark(&["extract", "w.jpg", "-m", "m.json"], &dir);
    let manifest =
        EmbedManifest::from_json(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    assert_eq!(stdout(&o).trim(), manifest.digest.to_hex());
}

#[test]
fn roi_flag_overrides_manifest() {
    let (_d, dir) = setup(320, 240);
    let m =
        EmbedManifest::from_json(&std::fs::read_to_string(dir.join("m.json")).unwrap()).unwrap();
    let roi = format!("{},{},{},{}", m.roi.x, m.roi.y, m.roi.w, m.roi.h);
    let o = sawmark(&["verify", "w.pgm", "--roi", &roi], &dir);
    assert_eq!(o.status.code(), Some(0));
    let o = sawmark(&["verify", "w.pgm"], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "missing-roi");
}

#[test]
fn keyed_hash_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(sawmark(
        &["gen", "--width", "320", "--height", "240", "-o", "p.pgm"],
        d
    )
    .status
    .success());
    let o = sawmark(
        &[
            "embed",
            "p.pgm",
            "-o",
            "w.pgm",
            "-m",
            "m.json",
            "--hash-key",
            "s3cret",
        ],
        d,
    );
    assert!(o.status.success());
    assert!(std::fs::read_to_string(d.join("m.json"))
        .unwrap()
        .contains("\"keyed_hash\": true"));
    assert_eq!(
        sawmark(
            &["verify", "w.pgm", "-m", "m.json", "--hash-key", "s3cret"],
            d
        )
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        sawmark(
            &["verify", "w.pgm", "-m", "m.json", "--hash-key", "other"],
            d
        )
        .status
        .code(),
        Some(1)
    );
    let o = sawmark(&["verify", "w.pgm", "-m", "m.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "missing-hash-key");
}

#[test]
fn operational_errors_exit_two() {
    let (_d, dir) = setup(320, 240);
    let o = sawmark(&["verify", "missing.pgm", "-m", "m.json"], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "io-error");

    assert!(sawmark(
        &["gen", "--width", "400", "--height", "240", "-o", "q.pgm"],
        &dir
    )
    .status
    .success());
    let o = sawmark(&["verify", "q.pgm", "-m", "m.json"], &dir);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "manifest-mismatch");

    std::fs::write(dir.join("bad.json"), "{\"roi\":[1,2,3]}").unwrap();
    let o = sawmark(&["verify", "w.pgm", "-m", "bad.json"], &dir);
    assert_eq!(error_code(&o), "bad-manifest");

    let o = sawmark(
        &[
            "embed", "p.pgm", "-o", "x.pgm", "-m", "x.json", "--key", "2",
        ],
        &dir,
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "key-not-coprime");

    let o = sawmark(
        &[
            "embed", "p.pgm", "-o", "x.pgm", "-m", "x.json", "--plane", "4",
        ],
        &dir,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_one_row_per_cell() {
    let (_d, dir) = setup(320, 240);
    let o = sawmark(
        &[
            "sweep",
            "p.pgm",
            "--planes",
            "1,3",
            "--qualities",
            "58-62",
            "--csv",
            "s.csv",
        ],
        &dir,
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("s.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "plane,quality,survived,compression_pct,psnr_db");
    assert_eq!(rows.len(), 1 + 2 * 5);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["thresholds"].as_array().unwrap().len(), 2);

    let o = sawmark(
        &["sweep", "p.pgm", "--planes", "2", "--qualities", "100"],
        &dir,
    );
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l.starts_with("2,100,true,")));
}

#[test]
fn psnr_of_identical_images_is_infinite() {
    let (_d, dir) = setup(320, 240);
    assert_eq!(
        stdout(&sawmark(&["psnr", "p.pgm", "p.pgm"], &dir)).trim(),
        "inf"
    );
    let db: f64 = stdout(&sawmark(&["psnr", "p.pgm", "w.pgm"], &dir))
        .trim()
        .parse()
        .unwrap();
    assert!(db >= 48.13);
}

#[test]
fn compress_and_decompress_match_library() {
    let (_d, dir) = setup(320, 240);
    assert!(
        sawmark(&["compress", "w.pgm", "-q", "75", "-o", "w.jpg"], &dir)
            .status
            .success()
    );
    assert!(sawmark(&["decompress", "w.jpg", "-o", "d.pgm"], &dir)
        .status
        .success());
    let w = load_pgm(&std::fs::read(dir.join("w.pgm")).unwrap()).unwrap();
    let d = load_pgm(&std::fs::read(dir.join("d.pgm")).unwrap()).unwrap();
    assert_eq!(d, sawmark::roundtrip(&w, 75, true).unwrap());
}
