use std::path::PathBuf;

use wildmcg::cli::{run_captured, EXIT_INPUT, EXIT_OK};
use wildmcg::wmcg::AnalysisReport;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn analyze(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["wildmcg".to_string(), "analyze".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_captured(argv)
}

#[test]
fn text_output_matches_goldens() {
    for ex in ["ex1_gl9", "ex2_gl9", "ex3_gl9"] {
        let input = fixture(&format!("{ex}.json"));
        let (code, out, err) = analyze(&[input.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{err}");
        let golden = std::fs::read_to_string(fixture(&format!("{ex}.txt"))).unwrap();
        assert_eq!(out, golden, "{ex}");
    }
}

#[test]
fn dot_output_matches_goldens() {
    for ex in ["ex1_gl9", "ex2_gl9", "ex3_gl9"] {
        let input = fixture(&format!("{ex}.json"));
        let (code, out, _) = analyze(&[input.to_str().unwrap(), "--format", "dot"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(
            out,
            std::fs::read_to_string(fixture(&format!("{ex}.dot"))).unwrap()
        );
    }
}

#[test]
fn first_example_summary_line() {
    let (_, out, _) = analyze(&[fixture("ex1_gl9.json").to_str().unwrap()]);
    assert!(out.contains("Aut(T,r) = S2 x (S2 wr S3), covering degree 144\n"));
    let (_, out, _) = analyze(&[fixture("ex3_gl9.json").to_str().unwrap(), "--unicode"]);
    assert!(out.contains("Aut(T,r) = S2³ × S3, covering degree 48\n"));
}

#[test]
fn json_reports_round_trip() {
    for ex in [
        "ex1_gl9",
        "ex2_gl9",
        "ex3_gl9",
        "b2_nongeneric",
        "g2_complete",
    ] {
        let (code, out, _) = analyze(&[
            fixture(&format!("{ex}.json")).to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(code, EXIT_OK);
        let report: AnalysisReport = serde_json::from_str(&out).unwrap();
        assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", out);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        for key in [
            "input",
            "tree",
            "groups",
            "covering_degree",
            "generators",
            "verifications",
        ] {
            assert!(value.get(key).is_some(), "{ex} lacks {key}");
        }
    }
}

#[test]
fn emit_generators_lists_words() {
    let (code, out, _) = analyze(&[
        fixture("ex3_gl9.json").to_str().unwrap(),
        "--emit-generators",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("  pure: [").count(), 13);
    assert_eq!(out.matches("  full: [").count(), 19);
}

#[test]
fn bad_inputs_exit_with_one() {
    let (code, _, err) = analyze(&[fixture("bad_rational.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(
        err.contains("bad_rational.json:5:15: not a rational"),
        "{err}"
    );

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(
        &broken,
        "{\"algebra\": \"gl\",\n \"n\": 2,\n \"coefficients\": [[1, 2]\n",
    )
    .unwrap();
    let (code, _, err) = analyze(&[broken.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains(":4:"), "{err}");

    let mismatch = dir.path().join("mismatch.json");
    std::fs::write(
        &mismatch,
        r#"{"algebra": "gl", "n": 3, "coefficients": [[1, 2]]}"#,
    )
    .unwrap();
    assert_eq!(analyze(&[mismatch.to_str().unwrap()]).0, EXIT_INPUT);

    let missing = dir.path().join("missing.json");
    assert_eq!(analyze(&[missing.to_str().unwrap()]).0, EXIT_INPUT);
    assert_eq!(
        analyze(&[
            fixture("ex1_gl9.json").to_str().unwrap(),
            "--max-brute-n",
            "1"
        ])
        .0,
        EXIT_INPUT
    );
    assert_eq!(
        analyze(&[
            fixture("g2_complete.json").to_str().unwrap(),
            "--format",
            "dot"
        ])
        .0,
        EXIT_INPUT
    );
}

#[test]
fn forced_oracles_pass_on_small_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a3.json");
    std::fs::write(
        &path,
        r#"{"algebra": "sl", "n": 4, "coefficients": [[1, 2, 3, 4], ["1/2", "1/2", 0, 0]]}"#,
    )
    .unwrap();
    let (code, out, _) = analyze(&[path.to_str().unwrap(), "--verify"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("algebra: sl4, p = 2\n"));
    assert!(!out.contains("[skip]"));
    assert!(!out.contains("[FAIL]"));
}

#[test]
fn selftest_is_seeded() {
    let argv = [
        "wildmcg",
        "selftest",
        "--cases",
        "30",
        "--seed",
        "11",
        "--max-brute-n",
        "4",
    ];
    let (code, first, _) = run_captured(argv);
    assert_eq!(code, EXIT_OK, "{first}");
    let (_, second, _) = run_captured(argv);
    assert_eq!(first, second);
    assert!(first.contains("seed=11"));
    assert!(first.contains("skipped"));
}
