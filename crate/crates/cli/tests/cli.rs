use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn vplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vplane"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = vplane(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn cover(dir: &TempDir, pattern: &str) -> PathBuf {
    let path = dir.path().join(format!("{pattern}.pgm"));
    ok(&["synth", "--pattern", pattern, "--value", "7", "--out", p(&path)]);
    path
}

#[test]
fn plan_reports_plane_counts() {
    for (system, n) in [("natural", 23), ("prime", 15), ("binary", 8), ("fib:1", 11)] {
        let out = ok(&["plan", "--system", system]);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains(&format!("n={n}\n")), "{system}: {text}");
    }
    let out = ok(&["plan", "--system", "prime", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["planes"], 15);
    assert_eq!(v["representable_max"], 282);
}

#[test]
fn table_rows_are_msb_first() {
    let out = ok(&["table", "--system", "prime", "--from", "4", "--to", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "4  000000000000101");
}

#[test]
fn embed_extract_roundtrip_for_every_system() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "random");
    let msg = dir.path().join("msg.bin");
    std::fs::write(&msg, (0u8..40).map(|i| i.wrapping_mul(37)).collect::<Vec<_>>()).unwrap();
    for (system, plane) in [("binary", "2"), ("natural", "0"), ("prime", "3"), ("fib:1", "5"), ("fib:2", "1")] {
        let stego = dir.path().join(format!("{system}.pgm"));
        let back = dir.path().join(format!("{system}.out"));
        ok(&["embed", p(&c), "--system", system, "--plane", plane, "--message-file", p(&msg), "--out", p(&stego)]);
        ok(&["extract", p(&stego), "--system", system, "--plane", plane, "--out", p(&back)]);
        assert_eq!(std::fs::read(&back).unwrap(), std::fs::read(&msg).unwrap(), "{system}");
    }
}

#[test]
fn embedding_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let a = dir.path().join("a.pgm");
    let b = dir.path().join("b.pgm");
    for out in [&a, &b] {
        ok(&["embed", p(&c), "--plane", "1", "--random", "50", "--seed", "9", "--out", p(out)]);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn random_without_seed_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let out = vplane(&["embed", p(&c), "--plane", "0", "--random", "4", "--out", p(&dir.path().join("s.pgm"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fill_uses_whole_capacity() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let stego = dir.path().join("s.pgm");
    let out = ok(&["embed", p(&c), "--plane", "0", "--message", "sandipan", "--fill", "--out", p(&stego)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["embed"]["bits_embedded"], 544);
    assert_eq!(v["message_bits"], 512);
    let back = ok(&["extract", p(&stego), "--plane", "0"]).stdout;
    assert_eq!(back, b"sandipan".repeat(8));
}

#[test]
fn raw_mode_with_explicit_length() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "random");
    let stego = dir.path().join("s.pgm");
    ok(&["embed", p(&c), "--system", "prime", "--plane", "2", "--message", "abc", "--raw", "--out", p(&stego)]);
    let back = ok(&["extract", p(&stego), "--system", "prime", "--plane", "2", "--length", "24"]).stdout;
    assert_eq!(back, b"abc");
    // 20 bits: trailing nibble zero-padded
    let back = ok(&["extract", p(&stego), "--system", "prime", "--plane", "2", "--length", "20"]).stdout;
    assert_eq!(back, [b'a', b'b', b'c' & 0xf0]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let s = dir.path().join("s.pgm");
    let big = "x".repeat(200);
    let capacity = vplane(&["embed", p(&c), "--plane", "0", "--message", &big, "--out", p(&s)]);
    assert_eq!(capacity.status.code(), Some(3));
    assert!(!s.exists());

    let junk = dir.path().join("junk.pgm");
    std::fs::write(&junk, b"P5 4 4 255\n\x00").unwrap();
    assert_eq!(vplane(&["extract", p(&junk), "--plane", "0"]).status.code(), Some(4));

    assert_eq!(vplane(&["plan", "--system", "octal"]).status.code(), Some(2));
    assert_eq!(vplane(&["embed", p(&c), "--plane", "99", "--message", "x", "--out", p(&s)]).status.code(), Some(2));

    let missing = dir.path().join("missing.pgm");
    assert_eq!(vplane(&["extract", p(&missing), "--plane", "0"]).status.code(), Some(5));
}

#[test]
fn refuses_to_overwrite_without_force() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let before = std::fs::read(&c).unwrap();
    let out = vplane(&["synth", "--pattern", "checker", "--out", p(&c)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(std::fs::read(&c).unwrap(), before);
    ok(&["synth", "--pattern", "checker", "--out", p(&c), "--force"]);
    assert_ne!(std::fs::read(&c).unwrap(), before);
}

#[test]
fn wrong_plane_extraction_fails_cleanly() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "random");
    let s = dir.path().join("s.pgm");
    ok(&["embed", p(&c), "--plane", "4", "--message", "secret", "--out", p(&s)]);
    for plane in ["0", "3", "5", "22"] {
        let out = vplane(&["extract", p(&s), "--plane", plane]);
        let code = out.status.code();
        assert!(matches!(code, Some(0) | Some(4)), "plane {plane}: {code:?}");
    }
}

#[test]
fn analyze_reports_distortion() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let s = dir.path().join("s.pgm");
    let hist = dir.path().join("hist.csv");
    ok(&["embed", p(&c), "--plane", "0", "--message", "sandipan", "--fill", "--out", p(&s)]);
    let out = ok(&["analyze", p(&c), p(&s), "--plane", "0", "--csv", p(&hist)]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["max_abs_delta"], 1);
    assert_eq!(v["capacity"], 544);
    let csv = std::fs::read_to_string(hist).unwrap();
    assert_eq!(csv.lines().next(), Some("level,cover,stego"));
    assert_eq!(csv.lines().count(), 257);
}

#[test]
fn sweep_emits_one_row_per_configuration() {
    let dir = TempDir::new().unwrap();
    let c = cover(&dir, "gradient");
    let weights = dir.path().join("w.csv");
    let out = ok(&["sweep", p(&c), "--weights-csv", p(&weights)]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 9);
    let kl = header.iter().position(|h| *h == "kl_nats").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8 + 23 + 15 + 11);
    for row in &rows {
        assert_eq!(row.len(), 9);
        assert!(row[kl].parse::<f64>().unwrap() >= 0.0);
    }
    let w = std::fs::read_to_string(weights).unwrap();
    assert_eq!(w.lines().next(), Some("plane,binary,natural,prime,fib:1"));
    assert_eq!(w.lines().count(), 1 + 23);
}
