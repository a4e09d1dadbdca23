//! End-to-end runs of the binary: exit codes, output formats, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ringwalk::formats::{parse_dump, parse_program};
use ringwalk::manifest::{manifest_path, RunManifest};

const APPENDIX_CIRCUIT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/appendix_circuit.txt");
const APPENDIX_TRACE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/appendix_trace.txt");

fn ringwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ringwalk_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringwalk"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn compile_appendix(dir: &Path) -> std::path::PathBuf {
    let prog = dir.join("appendix.prog");
    let o = ringwalk(&["compile", APPENDIX_CIRCUIT, "-o", s(&prog)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    prog
}

#[test]
fn verify_appendix_passes() {
    let o = ringwalk(&["verify-appendix"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "48/48 steps match\n");
}

#[test]
fn verify_appendix_reports_a_corrupted_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    let text = fs::read_to_string(APPENDIX_TRACE)
        .unwrap()
        .replacen("00011|rgb", "00011|rbg", 1);
    fs::write(&bad, text).unwrap();
    let o = ringwalk(&["verify-appendix", "--fixture", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("47/48 steps match"), "{}", stderr(&o));
}

#[test]
fn foreign_gate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("cz.txt");
    fs::write(&c, "qubits 2\nCZ 0 1\n").unwrap();
    let o = ringwalk(&["compile", s(&c), "-o", s(&dir.path().join("p"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported gate"));
    assert!(!dir.path().join("p").exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ringwalk(&[]).status.code(), Some(2));
    assert_eq!(
        ringwalk(&["walk", "--tbar", "3", "--variant", "start-stop"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringwalk(&["walk", "--tbar", "3", "--variant", "zigzag", "--tmax", "1", "-o", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringwalk(&["trace", "/nonexistent/p.txt", "-o", "/nonexistent/t"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ringwalk(&["compile", APPENDIX_CIRCUIT, "-o", "x", "--frob"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let prog = compile_appendix(dir.path());
    let o = ringwalk(&["hinit", s(&prog), "--scan", "--input", "10"]);
    assert_eq!(o.status.code(), Some(2));
    // Hadamard string shorter than the iteration count
    let broken = dir.path().join("broken.prog");
    fs::write(
        &broken,
        "qubits 3\niterations 4\nswap 0001\nhadamard 100\norder 1 0 2\n",
    )
    .unwrap();
    let o = ringwalk(&["equiv", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.prog"));
}

#[test]
fn compile_then_trace_matches_the_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let prog = compile_appendix(dir.path());
    let p = parse_program(&fs::read_to_string(&prog).unwrap()).unwrap();
    assert_eq!(p.iterations, 4);
    let trace = dir.path().join("trace.txt");
    let o = ringwalk(&["trace", s(&prog), "--labels", "rgb", "-o", s(&trace)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "tbar 47, 3 gate events\n");
    assert_eq!(
        fs::read_to_string(&trace).unwrap(),
        fs::read_to_string(APPENDIX_TRACE).unwrap()
    );
    let o = ringwalk(&["trace", s(&prog), "-o", s(&trace)]);
    assert_eq!(o.status.code(), Some(0));
    let recs = parse_dump(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(recs.len(), 48);
    assert_eq!(recs[2].event.unwrap().tag(), "CS b c");
}

#[test]
fn walk_two_site_peak() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let o = ringwalk(&[
        "walk",
        "--tbar",
        "1",
        "--variant",
        "start-stop",
        "--tmax",
        "3.2",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,abs_amp,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 100);
    let peak = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    assert!((peak[0] - std::f64::consts::FRAC_PI_2).abs() < 0.02);
    assert!((peak[1] - 1.0).abs() < 1e-3);
    assert!(stdout(&o).contains("peak t 1.570796"));
}

#[test]
fn walk_from_a_program_and_literal_warning() {
    let dir = tempfile::tempdir().unwrap();
    let prog = compile_appendix(dir.path());
    let csv = dir.path().join("w.csv");
    let o = ringwalk(&[
        "walk",
        s(&prog),
        "--variant",
        "dummy-padding:5",
        "--tmax",
        "40",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("tbar 47, variant dummy-padding:5\n"));
    let o = ringwalk(&[
        "walk",
        "--tbar",
        "8",
        "--variant",
        "perfect-transfer-literal",
        "--tmax",
        "5",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning: coupling on hop 8 is zero"));
    assert!(stdout(&o).contains("transfer deficit 1"));
    let o = ringwalk(&[
        "walk",
        s(&prog),
        "--tbar",
        "4",
        "--variant",
        "start-stop",
        "--tmax",
        "1",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn adiabatic_pass_and_shortfall() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("gap.csv");
    let o = ringwalk(&[
        "adiabatic",
        "--tbar",
        "3",
        "--delta",
        "1",
        "--eps",
        "0.1",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let gaps = fs::read_to_string(&csv).unwrap();
    assert!(gaps.starts_with("s,gap\n0,1\n"));
    assert_eq!(gaps.lines().count(), 102);
    let summary = fs::read_to_string(dir.path().join("gap.csv.summary")).unwrap();
    assert!(summary.contains("pass true"));
    assert_eq!(stdout(&o), summary);
    let m = RunManifest::from_json(&fs::read_to_string(manifest_path(&csv)).unwrap()).unwrap();
    assert_eq!(m.outputs.len(), 2);

    let o = ringwalk(&[
        "adiabatic",
        "--tbar",
        "3",
        "--delta",
        "1",
        "--eps",
        "0.1",
        "--time-factor",
        "1e-9",
        "-o",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pass false"));
}

#[test]
fn equiv_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let prog = compile_appendix(dir.path());
    let sparse = dir.path().join("h.txt");
    let o = ringwalk(&["equiv", s(&prog), "--export", s(&sparse)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("tbar 47, 48 configurations"));
    let entries: Vec<(u64, u64)> = fs::read_to_string(&sparse)
        .unwrap()
        .lines()
        .map(|l| {
            let f: Vec<&str> = l.split(' ').collect();
            assert_eq!(f.len(), 4);
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert!(entries.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(entries.iter().map(|e| e.0).max(), Some(48 * 8 - 1));
}

#[test]
fn hinit_scan_counts_one() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("cs.txt");
    fs::write(&c, "qubits 3\nCS 0 2\n").unwrap();
    let prog = dir.path().join("cs.prog");
    assert_eq!(ringwalk(&["compile", s(&c), "-o", s(&prog)]).status.code(), Some(0));
    let one = ringwalk_env(
        &["hinit", s(&prog), "--scan", "--input", "101"],
        "RINGWALK_THREADS",
        "1",
    );
    let four = ringwalk_env(
        &["hinit", s(&prog), "--scan", "--input", "101"],
        "RINGWALK_THREADS",
        "4",
    );
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(stdout(&one), stdout(&four));
    assert!(stdout(&one).contains("kernel dimension 1 (exhaustive)"));
    assert!(stdout(&one).contains("transfer-matrix count 1"));

    let app = compile_appendix(dir.path());
    let o = ringwalk(&["hinit", s(&app), "--scan"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kernel dimension 1 (transfer-matrix)"));
}

#[test]
fn replaying_a_manifest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let args = [
        "walk",
        "--tbar",
        "12",
        "--variant",
        "runway-landing:3",
        "--tmax",
        "9.5",
        "-o",
        s(&csv),
    ];
    assert_eq!(ringwalk(&args).status.code(), Some(0));
    let first = fs::read(&csv).unwrap();
    let manifest_text = fs::read_to_string(manifest_path(&csv)).unwrap();
    let m = RunManifest::from_json(&manifest_text).unwrap();
    assert_eq!(m.command, "walk");
    assert!(m.seed.is_none());
    fs::remove_file(&csv).unwrap();
    let argv = m.to_argv();
    let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
    assert_eq!(ringwalk(&argv).status.code(), Some(0));
    assert_eq!(fs::read(&csv).unwrap(), first);
    assert_eq!(fs::read_to_string(manifest_path(&csv)).unwrap(), manifest_text);

    let gap = dir.path().join("g.csv");
    let adi = [
        "adiabatic",
        "--tbar",
        "4",
        "--delta",
        "1",
        "--eps",
        "0.2",
        "-o",
        s(&gap),
    ];
    assert_eq!(ringwalk(&adi).status.code(), Some(0));
    let a = (
        fs::read(&gap).unwrap(),
        fs::read(dir.path().join("g.csv.summary")).unwrap(),
    );
    assert_eq!(ringwalk(&adi).status.code(), Some(0));
    let b = (
        fs::read(&gap).unwrap(),
        fs::read(dir.path().join("g.csv.summary")).unwrap(),
    );
    assert_eq!(a, b);
}

#[test]
fn explicit_manifest_location() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("run.json");
    let o = ringwalk(&["verify-appendix", "--manifest", s(&m)]);
    assert_eq!(o.status.code(), Some(0));
    let m = RunManifest::from_json(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(m.command, "verify-appendix");
    assert!(m.outputs.is_empty());
}
