//! End-to-end tests of the command-line interface: exit codes, pipe
//! composition, document round-trips, and output determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bikepath"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn bikepath");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait for bikepath")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn generate_regular_path_document() {
    let out = run(&["generate", "regular", "--n", "5"], None);
    assert_eq!(code_of(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["format"], "bikepath-v1");
    assert_eq!(doc["p"], 5);
    assert_eq!(doc["m"], 1);
    assert_eq!(doc["scalar"], "rational");
    assert_eq!(doc["vertices"][0][0], "0");
    assert_eq!(doc["vertices"][4][0], "4/5");
    assert_eq!(doc["vertices"][4][1], "0");
}

#[test]
fn generate_validate_pipe_passes() {
    let gen = run(&["generate", "signseq", "--n", "4", "--chi", "+-+-", "--r", "1"], None);
    assert_eq!(code_of(&gen), 0);
    let doc = stdout_of(&gen);
    let val = run(&["validate", "--k", "3"], Some(&doc));
    assert_eq!(code_of(&val), 0);
    // The document is forwarded unchanged for further piping.
    assert_eq!(stdout_of(&val), doc);
}

#[test]
fn unbalanced_sign_sequence_is_degenerate_input() {
    let out = run(&["generate", "signseq", "--n", "5", "--chi", "++-+-"], None);
    assert_eq!(code_of(&out), 3);
    assert!(String::from_utf8(out.stderr.clone()).unwrap().contains("error"));
}

#[test]
fn failing_validation_exits_one() {
    let gen = run(
        &["generate", "signseq", "--n", "4", "--chi", "++--", "--r", "1"],
        None,
    );
    let val = run(&["validate", "--k", "2"], Some(&stdout_of(&gen)));
    assert_eq!(code_of(&val), 1);
}

#[test]
fn degenerate_diagonal_step_exits_three() {
    let gen = run(&["generate", "regular", "--n", "4"], None);
    let val = run(&["validate", "--k", "8"], Some(&stdout_of(&gen)));
    assert_eq!(code_of(&val), 3);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["generate", "regular", "--bogus", "1"], None);
    assert_eq!(code_of(&out), 2);
    let out = run(&["no-such-command"], None);
    assert_eq!(code_of(&out), 2);
}

#[test]
fn trapezoidal_verdicts() {
    let alternating = run(
        &["generate", "signseq", "--n", "6", "--chi", "+-+-+-", "--r", "1/2"],
        None,
    );
    let out = run(&["trapezoidal", "--k", "5"], Some(&stdout_of(&alternating)));
    assert_eq!(code_of(&out), 0);

    let staircase = run(
        &["generate", "signseq", "--n", "6", "--chi", "+++---", "--r", "1/2"],
        None,
    );
    let out = run(&["trapezoidal", "--k", "5"], Some(&stdout_of(&staircase)));
    assert_eq!(code_of(&out), 1);
}

#[test]
fn darboux_translate_closes_and_emits_image() {
    let gen = run(&["generate", "regular", "--n", "3"], None);
    let out = run(
        &["darboux", "--ell", "1/4", "--t0", "0"],
        Some(&stdout_of(&gen)),
    );
    assert_eq!(code_of(&out), 0);
    let image: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(image["p"], 3);
    assert_eq!(image["vertices"][0][0], "1/4");
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(stderr.contains("\"closed\":true"));
}

#[test]
fn compare_area_on_a_closed_correspondence() {
    let gen = run(&["generate", "regular", "--n", "3"], None);
    let doc = stdout_of(&gen);
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.json");
    std::fs::write(&src, &doc).unwrap();
    let image = run(&["darboux", "--ell", "1/4", "--t0", "0"], Some(&doc));
    let out = run(
        &[
            "compare-area",
            src.to_str().unwrap(),
            "-",
            "--ell",
            "1/4",
        ],
        Some(&stdout_of(&image)),
    );
    assert_eq!(code_of(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["difference"], "0");
    assert_eq!(report["boundary_equal"], true);
}

#[test]
fn monodromy_report_fields() {
    let gen = run(&["generate", "regular", "--n", "4"], None);
    let out = run(&["monodromy", "--ell", "1/2"], Some(&stdout_of(&gen)));
    assert_eq!(code_of(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(doc["matrix"].is_array());
    assert!(doc.get("det").is_some());
    assert!(doc.get("trace").is_some());
    assert!(doc.get("invariant").is_some());
    // Regular path: fixed directions along the axis, one of them at t = ∞.
    assert_eq!(doc["fixed_points"].as_array().unwrap().len(), 2);
    assert!(stdout_of(&out).contains("\"inf\""));
}

#[test]
fn sweep_emits_csv_with_degenerate_tag() {
    let gen = run(&["generate", "regular", "--n", "4"], None);
    let out = run(
        &["sweep", "--ell-min", "1/8", "--ell-max", "1/2", "--steps", "4"],
        Some(&stdout_of(&gen)),
    );
    assert_eq!(code_of(&out), 0);
    let csv = stdout_of(&out);
    assert!(csv.starts_with("ell,invariant,det,trace,fixed_point_count,status\n"));
    assert_eq!(csv.lines().count(), 5);
    // The grid hits ℓ = 1/4, the edge length.
    assert!(csv.contains("degenerate"));
}

#[test]
fn area_prints_exact_rational() {
    let gen = run(&["generate", "regular", "--n", "3"], None);
    let out = run(&["area", "--c", "1"], Some(&stdout_of(&gen)));
    assert_eq!(code_of(&out), 0);
    assert_eq!(stdout_of(&out).trim(), "1");

    let zigzag = run(
        &["generate", "signseq", "--n", "4", "--chi", "+-+-", "--r", "1"],
        None,
    );
    let out = run(&["area", "--c", "2"], Some(&stdout_of(&zigzag)));
    assert_eq!(stdout_of(&out).trim(), "5/2");
}

#[test]
fn linkages_document_and_render() {
    let gen = run(
        &["generate", "signseq", "--n", "6", "--chi", "+-+-+-", "--r", "1/2"],
        None,
    );
    let out = run(&["linkages", "--k", "5"], Some(&stdout_of(&gen)));
    assert_eq!(code_of(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["k"], 5);
    assert_eq!(doc["linkages"].as_array().unwrap().len(), 5);
    assert_eq!(doc["linkages"][0]["p"], 6);
    assert_eq!(doc["linkages"][0]["m"], 5);

    let svg = run(&["render"], Some(&stdout_of(&out)));
    assert_eq!(code_of(&svg), 0);
    assert!(stdout_of(&svg).starts_with("<svg"));
}

#[test]
fn render_path_and_correspondence_deterministically() {
    let gen = run(
        &["generate", "signseq", "--n", "6", "--chi", "+++---", "--r", "1/2"],
        None,
    );
    let doc = stdout_of(&gen);
    let first = run(&["render", "--labels", "--baseline", "1"], Some(&doc));
    let second = run(&["render", "--labels", "--baseline", "1"], Some(&doc));
    assert_eq!(code_of(&first), 0);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    assert!(stdout_of(&first).contains("<polyline"));

    // Correspondence document render.
    let reg = run(&["generate", "regular", "--n", "3"], None);
    let corr = run(
        &["darboux", "--ell", "1/4", "--t0", "0", "--emit", "correspondence"],
        Some(&stdout_of(&reg)),
    );
    assert_eq!(code_of(&corr), 0);
    let svg = run(&["render"], Some(&stdout_of(&corr)));
    assert_eq!(code_of(&svg), 0);
    assert!(stdout_of(&svg).contains("<polygon"));

    // Writing to a file matches stdout output.
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fig.svg");
    let out = run(
        &["render", "--labels", "--baseline", "1", "-o", file.to_str().unwrap()],
        Some(&doc),
    );
    assert_eq!(code_of(&out), 0);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), stdout_of(&first));
}

#[test]
fn rigidity_is_deterministic_and_honors_env_seed() {
    let args = ["rigidity", "--n", "4", "--k", "3", "--trials", "12", "--jsonl"];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(code_of(&a), 0);
    assert_eq!(stdout_of(&a), stdout_of(&b));
    let last = stdout_of(&a);
    let summary: serde_json::Value = serde_json::from_str(last.lines().last().unwrap()).unwrap();
    assert_eq!(summary["n"], 4);
    assert_eq!(summary["k"], 3);
    assert_eq!(summary["trials"], 12);
    assert_eq!(summary["outside_family"], 0);

    // BIKEPATH_SEED overrides the --seed default.
    let mut cmd = bin();
    cmd.args(["rigidity", "--n", "4", "--k", "3", "--trials", "12", "--jsonl"])
        .env("BIKEPATH_SEED", "7")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let env_out = cmd.output().unwrap();
    let env_stdout = String::from_utf8(env_out.stdout).unwrap();
    assert_ne!(env_stdout, stdout_of(&a));

    // An explicit --seed beats the environment default.
    let mut cmd = bin();
    cmd.args([
        "rigidity", "--n", "4", "--k", "3", "--trials", "12", "--jsonl", "--seed", "0",
    ])
    .env("BIKEPATH_SEED", "7")
    .stdout(Stdio::piped())
    .stderr(Stdio::piped());
    let explicit = cmd.output().unwrap();
    assert_eq!(String::from_utf8(explicit.stdout).unwrap(), stdout_of(&a));
}

#[test]
fn float_mode_generates_numeric_documents() {
    let out = run(&["--float", "generate", "regular", "--n", "2"], None);
    assert_eq!(code_of(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["scalar"], "float");
    assert_eq!(doc["vertices"][1][0], 0.5);
}

#[test]
fn darboux_closure_picks_a_fixed_point() {
    let gen = run(&["generate", "regular", "--n", "3"], None);
    let out = run(
        &["darboux", "--ell", "0.25", "--closure", "first"],
        Some(&stdout_of(&gen)),
    );
    assert_eq!(code_of(&out), 0);
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(stderr.contains("\"closed\":true"));
    let image: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(image["scalar"], "float");
}
