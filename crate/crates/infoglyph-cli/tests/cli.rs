//! End-to-end tests of the installed binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_infoglyph"))
}

fn fixture(name: &str) -> PathBuf {
    infoglyph::fixtures::dir().join(name)
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn validate_clean_specimen_exits_zero() {
    let output = bin()
        .arg("validate")
        .arg(fixture("alcoa.yaml"))
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    // The canvas-size alias produces a warning but no error.
    assert!(stderr(&output).contains("alias"));
}

#[test]
fn validate_all_specimens() {
    for name in infoglyph::fixtures::SPECIMEN_NAMES {
        let output = bin()
            .arg("validate")
            .arg(fixture(&format!("{name}.yaml")))
            .output()
            .unwrap();
        assert!(
            output.status.success(),
            "{name} stderr: {}",
            stderr(&output)
        );
    }
}

#[test]
fn missing_model_file_exits_2_and_names_it() {
    let output = bin()
        .args(["render", "missing.yaml", "-o", "x.png"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("missing.yaml"));
}

#[test]
fn parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.yaml");
    std::fs::write(&path, "bgcolor: white\nbgsize: 10x10\nwobble: 1\n").unwrap();
    let output = bin().arg("validate").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("wobble"));
}

#[test]
fn census_two_models_tsv() {
    let output = bin()
        .arg("census")
        .arg(fixture("alcoa.yaml"))
        .arg(fixture("vanderbilt.yaml"))
        .args(["--format", "tsv"])
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let stdout = String::from_utf8_lossy(&output.stdout);
    let header = stdout.lines().next().unwrap();
    assert_eq!(header, "Id\tName\talcoa\tvanderbilt");
    let boxes = stdout.lines().find(|l| l.starts_with("C7\t")).unwrap();
    assert_eq!(boxes, "C7\tBox\t7\t15");
    let pies = stdout.lines().find(|l| l.starts_with("C11\t")).unwrap();
    assert_eq!(pies, "C11\tPie chart\t0\t1");
}

#[test]
fn bind_substitutes_and_prints_canonical_text() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.yaml");
    std::fs::write(
        &model,
        "bgcolor: white\nbgsize: 100x100\nhead: off\nfoot: off\ntext1:\n  value: \"Reduced waste by {{reduction}}%\"\n  font: 10px X\n  position: 5x5\n",
    )
    .unwrap();
    let output = bin()
        .arg("bind")
        .arg(&model)
        .arg("--data")
        .arg(fixture("account.yaml"))
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("Reduced waste by 41%"), "stdout:\n{stdout}");
    assert!(stdout.starts_with("bgcolor: ffffff\nbgsize: 100x100\n"));
}

#[test]
fn bind_unknown_indicator_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.yaml");
    std::fs::write(
        &model,
        "bgcolor: white\nbgsize: 10x10\nhead: off\nfoot: off\ntext1:\n  value: \"{{ghost}}\"\n  font: 10px X\n  position: 1x1\n",
    )
    .unwrap();
    let account = dir.path().join("account.yaml");
    std::fs::write(&account, "values:\n  real: 1\n").unwrap();
    let output = bin()
        .arg("bind")
        .arg(&model)
        .arg("--data")
        .arg(&account)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("ghost"));
}

#[test]
fn render_offline_writes_deterministic_png() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.png");
    let out_b = dir.path().join("b.png");
    for out in [&out_a, &out_b] {
        let output = bin()
            .arg("render")
            .arg(fixture("vanderbilt.yaml"))
            .arg("-o")
            .arg(out)
            .args(["--offline", "--assets"])
            .arg(dir.path().join("cache"))
            .output()
            .unwrap();
        assert!(output.status.success(), "stderr: {}", stderr(&output));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(a.starts_with(&[0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a]));
    assert_eq!(a, b, "two offline renders must be byte-identical");
}

#[test]
fn render_offline_missing_asset_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.yaml");
    std::fs::write(
        &model,
        "bgcolor: white\nbgsize: 10x10\nhead: off\nfoot: off\nimage1:\n  position: 0x0\n  size: 5x5\n  src: \"https://example.invalid/a.png\"\n",
    )
    .unwrap();
    let output = bin()
        .arg("render")
        .arg(&model)
        .arg("-o")
        .arg(dir.path().join("x.png"))
        .args(["--offline", "--assets"])
        .arg(dir.path().join("cache"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(4));
    assert!(stderr(&output).contains("example.invalid"));
}

#[test]
fn usage_error_exits_1() {
    let output = bin().arg("render").arg("--bogus-flag").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn version_and_help_exit_zero() {
    let version = bin().arg("--version").output().unwrap();
    assert!(version.status.success());
    assert!(String::from_utf8_lossy(&version.stdout).contains("infoglyph"));
    let help = bin().arg("--help").output().unwrap();
    assert!(help.status.success());
    let text = String::from_utf8_lossy(&help.stdout);
    for subcommand in ["render", "validate", "census", "bind"] {
        assert!(text.contains(subcommand));
    }
}

#[test]
fn census_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census.csv");
    let output = bin()
        .arg("census")
        .arg(fixture("lenovo.yaml"))
        .args(["--format", "csv", "-o"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(
        output.stdout.is_empty(),
        "data must go to the file, not stdout"
    );
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("Id,Name,lenovo"));
    // The lenovo foot is present but its text is off.
    assert!(table.contains("C18,Foot section,1"));
    assert!(table.contains("C20,Foot text,0"));
}
