use std::path::PathBuf;

use ctprof::cli::{EXIT_INFEASIBLE, EXIT_INVALID, EXIT_IO, EXIT_OK};
use ctprof::{run_captured, run_with_env, CliOutput};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn path(rel: &str) -> String {
    root().join(rel).display().to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn run(args: &[&str]) -> CliOutput {
    run_captured(args.iter().map(|s| s.to_string()))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn cat_markdown_report_matches_golden() {
    let out = run(&["analyze", &path("fixtures/cat.ctp.json")]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, golden("cat.md"));
    assert!(out
        .stdout
        .contains("| algorithm_debugging | blocked | missing: resettable"));
    assert!(out.stderr.is_empty());
}

#[test]
fn cat_json_report_matches_golden() {
    let out = run(&[
        "analyze",
        &path("fixtures/cat.ctp.json"),
        "--format",
        "json",
    ]);
    assert_eq!(out.exit_code, EXIT_OK);
    assert_eq!(out.stdout, golden("cat.json"));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["analyze", &path("fixtures/zoombinis.ctp.json")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn maximal_profile_activates_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let profile = r#"{"domain": "virtual", "functionalities": ["variables", "operators", "sequences",
        "repetitions", "conditionals", "functions", "parallelism", "events"], "resettability": "direct",
        "observability": "total", "cardinality": "one_to_one", "explicitness": "explicit",
        "constrained": true, "representation": "manifest_written", "state_unknown": true}"#;
    let p = write_temp(&dir, "max.json", profile);
    let out = run(&["analyze", &p]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    let rows: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.contains(" | activable | "))
        .collect();
    assert_eq!(rows.len(), 18);
    assert!(!out.stdout.contains("| blocked |"));
}

#[test]
fn infeasible_design_exits_two_with_explanation_on_stderr() {
    let out = run(&[
        "design",
        "--develop",
        "system_state_verification",
        "--lock",
        "state_unknown=false",
    ]);
    assert_eq!(out.exit_code, EXIT_INFEASIBLE);
    assert!(
        out.stderr.contains("state_unknown is locked to false"),
        "{}",
        out.stderr
    );
}

#[test]
fn missing_file_exits_three() {
    let out = run(&["validate", "does_not_exist.ctp.json"]);
    assert_eq!(out.exit_code, EXIT_IO);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("does_not_exist.ctp.json"));
}

#[test]
fn unknown_flag_exits_three() {
    assert_eq!(run(&["analyze", "--bogus", "x"]).exit_code, EXIT_IO);
    assert_eq!(run(&["frobnicate"]).exit_code, EXIT_IO);
    assert_eq!(run(&[]).exit_code, EXIT_IO);
}

#[test]
fn help_and_version_exit_zero_on_stdout() {
    let help = run(&["--help"]);
    assert_eq!(help.exit_code, EXIT_OK);
    assert!(help.stdout.contains("design"));
    let version = run(&["--version"]);
    assert_eq!(version.exit_code, EXIT_OK);
    assert!(version.stdout.starts_with("ctprof "));
}

#[test]
fn malformed_json_exits_three_and_schema_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write_temp(&dir, "broken.ctp.json", "{\"name\": ");
    let out = run(&["validate", &broken]);
    assert_eq!(out.exit_code, EXIT_IO);
    assert!(out.stderr.contains("line"), "{}", out.stderr);

    let text = std::fs::read_to_string(root().join("fixtures/cat.ctp.json"))
        .unwrap()
        .replace("\"variables\"", "\"loops\"");
    let bad = write_temp(&dir, "bad.ctp.json", &text);
    let out = run(&["validate", &bad]);
    assert_eq!(out.exit_code, EXIT_INVALID);
    assert!(out.stderr.contains("UnknownEnum"), "{}", out.stderr);
}

#[test]
fn validation_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(root().join("fixtures/cat.ctp.json")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["task"]["algorithm"] =
        serde_json::json!({"status": "given", "count": "one", "explicitness": "explicit"});
    let p = write_temp(&dir, "no_objective.ctp.json", &doc.to_string());
    let out = run(&["validate", &p]);
    assert_eq!(out.exit_code, EXIT_INVALID);
    assert!(out.stderr.contains("NoObjective"), "{}", out.stderr);
}

#[test]
fn validate_accepts_every_fixture() {
    for entry in std::fs::read_dir(root().join("fixtures")).unwrap() {
        let p = entry.unwrap().path();
        if p.to_string_lossy().ends_with(".ctp.json") {
            let out = run(&["validate", &p.display().to_string()]);
            assert_eq!(out.exit_code, EXIT_OK, "{}: {}", p.display(), out.stderr);
        }
    }
}

#[test]
fn derive_prints_the_profile() {
    let out = run(&["derive", &path("fixtures/cat.ctp.json")]);
    assert_eq!(out.exit_code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["resettability"], "none");
    assert_eq!(v["representation"], "manifest_non_written");
}

#[test]
fn diff_of_cat_and_its_virtual_redesign() {
    let out = run(&[
        "diff",
        &path("fixtures/cat.ctp.json"),
        &path("walkthroughs/virtual_cat.ctp.json"),
    ]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    let rows: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| Characteristic"))
        .collect();
    assert_eq!(rows.len(), 3, "{}", out.stdout);
    assert!(out.stdout.contains("| resettability | none | indirect |"));
    assert!(out.stdout.contains("Domain: unplugged -> virtual"));
}

#[test]
fn design_with_malformed_lock_or_unknown_competency_exits_three() {
    assert_eq!(
        run(&["design", "--develop", "variables", "--lock", "nonsense"]).exit_code,
        EXIT_IO
    );
    assert_eq!(
        run(&["design", "--develop", "variables", "--lock", "color=red"]).exit_code,
        EXIT_IO
    );
    assert_eq!(run(&["design", "--develop", "juggling"]).exit_code, EXIT_IO);
}

#[test]
fn empty_or_overlapping_design_exits_one() {
    assert_eq!(run(&["design", "--develop", ""]).exit_code, EXIT_INVALID);
    assert_eq!(
        run(&["design", "--develop", "events", "--avoid", "events"]).exit_code,
        EXIT_INVALID
    );
}

#[test]
fn feasible_design_lists_ranked_profiles() {
    let out = run(&[
        "design",
        "--develop",
        "variables",
        "--max-solutions",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(out.exit_code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["feasible"], true);
    assert_eq!(v["profiles"].as_array().unwrap().len(), 3);
}

#[test]
fn corpus_subcommand_renders_both_tables() {
    let out = run(&["corpus", &path("fixtures")]);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("# Characteristics taxonomy"));
    assert!(out.stdout.contains("# Competencies taxonomy"));
    assert!(out
        .stdout
        .contains("| resettable | 33% (2/6) | 40% (2/5) | 100% (4/4) |"));

    let collapsed = run(&[
        "corpus",
        &path("fixtures"),
        "--kind",
        "competencies",
        "--collapse-groups",
    ]);
    assert!(collapsed
        .stdout
        .contains("| algorithm | repetitions | 100% (4/4) | 75% (3/4) | 67% (2/3) |"));

    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run(&["corpus", &dir.path().display().to_string()]).exit_code,
        EXIT_IO
    );
}

#[test]
fn ruleset_flag_wins_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let text = ctprof_core::ruleset::default_ruleset_text()
        .replace("\"name\": \"default\"", "\"name\": \"custom\"");
    let custom = write_temp(&dir, "custom.rules.json", &text);
    let missing = dir.path().join("missing.rules.json").display().to_string();
    let cat = path("fixtures/cat.ctp.json");

    let run_env = |args: &[&str], env: Option<&str>| {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with_env(args.iter().map(|s| s.to_string()), env, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    };
    let (code, out) = run_env(&["analyze", &cat], Some(&custom));
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Ruleset: custom (version 1)"));

    let (code, _) = run_env(&["analyze", &cat], Some(&missing));
    assert_eq!(code, EXIT_IO);

    let (code, out) = run_env(&["analyze", &cat, "--ruleset", &custom], Some(&missing));
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Ruleset: custom"));

    let (code, out) = run_env(&["analyze", &cat], None);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("Ruleset: default"));
}

#[test]
fn invalid_ruleset_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        ctprof_core::ruleset::default_ruleset_text().replace("\"resettable\"", "\"resetable\"");
    let bad = write_temp(&dir, "bad.rules.json", &text);
    let out = run(&["analyze", &path("fixtures/cat.ctp.json"), "--ruleset", &bad]);
    assert_eq!(out.exit_code, EXIT_IO);
    assert!(out.stderr.contains("resetable"), "{}", out.stderr);
}
