use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cdiagram(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiagram")).args(args).current_dir(dir).output().expect("runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workdir(src: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("d.cd"), src).unwrap();
    dir
}

const GOLDEN: &str = include_str!("fixtures/golden.cd");

#[test]
fn geom_output_matches_fixture() {
    let dir = workdir(GOLDEN);
    let o = cdiagram(&["d.cd", "--format", "geom"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dump = fs::read_to_string(dir.path().join("d.geom")).unwrap();
    assert_eq!(dump, include_str!("fixtures/golden.geom"));
    assert!(!dir.path().join("d.svg").exists());
}

#[test]
fn svg_output_matches_fixture() {
    let dir = workdir(GOLDEN);
    let o = cdiagram(&["d.cd", "-o", "out.svg"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("out.svg")).unwrap();
    assert_eq!(svg, include_str!("fixtures/golden.svg"));
}

#[test]
fn both_formats_share_a_stem() {
    let dir = workdir(GOLDEN);
    let o = cdiagram(&["d.cd", "--format", "both", "-o", "pic.x"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("pic.svg").exists());
    assert!(dir.path().join("pic.geom").exists());
}

#[test]
fn repeated_runs_are_identical() {
    let dir = workdir(GOLDEN);
    let mut seen = Vec::new();
    for _ in 0..3 {
        let o = cdiagram(&["d.cd", "--format", "both"], dir.path());
        let svg = fs::read(dir.path().join("d.svg")).unwrap();
        let geom = fs::read(dir.path().join("d.geom")).unwrap();
        seen.push((o.status.code(), svg, geom));
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn out_of_grid_is_status_one() {
    let dir = workdir("\\CD A &\n B @(2,0) \\endCD\n");
    let o = cdiagram(&["d.cd"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    assert!(e.starts_with("d.cd:2:4: "), "{e}");
    assert!(e.contains("points outside"), "{e}");
}

#[test]
fn parse_error_is_status_one() {
    let dir = workdir("\\CD A @()\\0q@(1,0) & B \\endCD");
    let o = cdiagram(&["d.cd"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Invalid option \\0 (`q`)"), "{}", stderr(&o));
}

#[test]
fn missing_input_is_status_two() {
    let dir = TempDir::new().unwrap();
    let o = cdiagram(&["absent.cd"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn strict_turns_warnings_into_errors() {
    let src = "\\CD A @()\\L{f}\\L{g}@(1,0) & B \\endCD";
    let dir = workdir(src);
    let o = cdiagram(&["d.cd"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let o = cdiagram(&["d.cd", "--strict"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gap_scale_widens_columns() {
    let dir = workdir(GOLDEN);
    let o = cdiagram(&["d.cd", "--format", "geom", "--cgap-scale", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let dump = fs::read_to_string(dir.path().join("d.geom")).unwrap();
    // 40pt gap halves to 20pt: second.x = 47pt - 20pt
    assert!(dump.contains(&format!("second={},163840", 27 * 65536)), "{dump}");
}

#[test]
fn metrics_file_changes_boxes() {
    let dir = workdir("\\CD A @(1,0) & B \\endCD");
    fs::write(dir.path().join("m.txt"), "# wide glyphs\ndefault 10 7 2\n").unwrap();
    let o = cdiagram(&["d.cd", "--format", "geom", "--metrics", "m.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dump = fs::read_to_string(dir.path().join("d.geom")).unwrap();
    assert!(dump.contains(&format!("first={},163840", 8 * 65536)), "{dump}");
    fs::write(dir.path().join("bad.txt"), "default 1 2\n").unwrap();
    let o = cdiagram(&["d.cd", "--metrics", "bad.txt"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("bad.txt:1:"));
}

#[test]
fn scale_sets_pixel_size() {
    let dir = workdir(GOLDEN);
    let o = cdiagram(&["d.cd", "--scale", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("d.svg")).unwrap();
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"40\" height=\"28\""));
}
