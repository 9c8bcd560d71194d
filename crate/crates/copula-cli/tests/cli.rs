use std::fs;
use std::process::Command;

use serde_json::Value;

fn copula(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_copula")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = copula(args);
    assert!(stderr.is_empty(), "unexpected stderr: {stderr}");
    (code, serde_json::from_str(&stdout).unwrap())
}

#[test]
fn validate_reports_and_exit_codes() {
    let (code, stdout, _) = copula(&["validate", "fixtures:ex10-A", "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next().unwrap(), "quasi-copula: yes, copula: no");

    let (code, v) = json(&["validate", "fixtures:wbound@3"]);
    assert_eq!(code, 0);
    assert_eq!(v["quasi_copula"], Value::Bool(true));
    assert_eq!(v["copula"], Value::Bool(true));

    // Grounded and neutral but with a dented interior value: not a quasi-copula.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dent.txt");
    fs::write(&path, "0 1/2 1\n0 1/2 1\n0 0 0\n0 3/4 1/2\n0 1/2 1\n").unwrap();
    let (code, v) = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["quasi_copula"], Value::Bool(false));
}

#[test]
fn pair_validate_exit_codes() {
    let (code, v) = json(&["pair-validate", "fixtures:ex10-A", "fixtures:ex10-B"]);
    assert_eq!(code, 0);
    assert_eq!(v["imprecise_copula"], Value::Bool(true));

    // Order violated: exit 1, still a report.
    let (code, v) = json(&["pair-validate", "fixtures:min@4", "fixtures:wbound@4"]);
    assert_eq!(code, 1);
    assert_eq!(v["order_ok"], Value::Bool(false));

    // Mesh mismatch is bad input, not a verdict.
    let (code, _, stderr) = copula(&["pair-validate", "fixtures:pi@3", "fixtures:pi@4"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));
}

#[test]
fn extend_evaluates_the_bilinear_extension() {
    let (code, v) = json(&["extend", "fixtures:pi@2", "--at", "1/2,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], Value::String("1/4".into()));

    // Off-breakpoint coordinates interpolate.
    let (code, v) = json(&["extend", "fixtures:min@2", "--at", "1/4,3/4"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], Value::String("1/4".into()));

    let (code, _, _) = copula(&["extend", "fixtures:pi@2", "--at", "3/2,1/2"]);
    assert_eq!(code, 2);
}

#[test]
fn transform_and_defect_match_fixtures() {
    let (_, lifted) = json(&["transform", "fixtures:ex10-A", "--op", "m"]);
    let (_, b) = json(&["fixtures", "ex10-B"]);
    assert_eq!(lifted, b);

    // The seven-cell pair is stationary, so lowering inverts raising there.
    let (_, dropped) = json(&["transform", "fixtures:ex7-B", "--op", "o"]);
    let (_, a7) = json(&["fixtures", "ex7-A"]);
    assert_eq!(dropped, a7);

    let (_, bundle) = json(&["defect", "fixtures:ex10-A"]);
    let (_, dm) = json(&["fixtures", "ex10-DM"]);
    assert_eq!(bundle["d_m"], dm);
}

#[test]
fn reflect_and_restrict_identities() {
    let (_, reflected) = json(&["reflect", "fixtures:min@4", "--axis", "x"]);
    let (_, w) = json(&["fixtures", "wbound@4"]);
    assert_eq!(reflected, w);

    let (_, refined) = json(&["restrict", "fixtures:pi@4", "--mesh", "8"]);
    let (_, pi8) = json(&["fixtures", "pi@8"]);
    assert_eq!(refined, pi8);

    // Restricting to the grid's own mesh is the identity.
    let (_, same) = json(&["restrict", "fixtures:ex10-A", "--mesh", "fixtures:ex10-A"]);
    let (_, a) = json(&["fixtures", "ex10-A"]);
    assert_eq!(same, a);
}

#[test]
fn iterate_reports_stationary_pair_and_dumps_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace");
    let (code, v) = json(&[
        "iterate",
        "fixtures:ex7-A",
        "fixtures:ex7-B",
        "--dump-trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["steps"], Value::from(0));
    assert_eq!(v["converged"], Value::Bool(true));
    assert_eq!(v["limit_is_copula"], Value::Bool(false));

    let lower = trace.join("step-000-lower.txt");
    assert!(lower.exists() && trace.join("step-000-upper.txt").exists());
    let (code, _, _) = copula(&["validate", lower.to_str().unwrap()]);
    assert_eq!(code, 0);

    // A non-pair input is rejected before iterating.
    let (code, _, _) = copula(&["iterate", "fixtures:min@4", "fixtures:wbound@4"]);
    assert_eq!(code, 2);
}

#[test]
fn sandwich_feasible_and_infeasible() {
    let (code, v) = json(&["sandwich", "fixtures:pi@5", "fixtures:pi@5"]);
    assert_eq!(code, 0);
    assert_eq!(v["outcome"], Value::String("copula".into()));
    let (_, pi5) = json(&["fixtures", "pi@5"]);
    assert_eq!(v["copula"], pi5);

    for method in ["greedy", "lp"] {
        let (code, v) =
            json(&["sandwich", "fixtures:ex10-A", "fixtures:ex10-B", "--method", method]);
        assert_eq!(code, 1);
        assert_eq!(v["outcome"], Value::String("infeasible".into()));
        let rects = v["witness"]["rects"].as_array().unwrap();
        assert!(!rects.is_empty());
        assert!(rects[0]["i1"].is_u64() && rects[0]["count"].is_u64());
        assert!(v["witness"]["l_value"].as_str().unwrap().starts_with('-'));
    }
}

#[test]
fn witness_exit_codes() {
    let (code, v) = json(&["witness", "fixtures:ex10-A", "fixtures:ex10-B"]);
    assert_eq!(code, 1);
    assert_eq!(v["witness"]["l_value"], Value::String("-1/50".into()));

    let (code, v) = json(&["witness", "fixtures:ex7-A", "fixtures:ex7-B"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn pvalues_at_recorded_points() {
    let (code, v) = json(&["pvalues", "fixtures:ex10-A", "fixtures:ex10-B", "--point", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["p_main"]["value"], Value::String("1/50".into()));
    assert_eq!(v["p_opposite"]["value"], Value::String("-1/50".into()));
    assert_eq!(v["gamma"], Value::String("-1/50".into()));
    assert!(v["p_opposite"]["attaining"].is_array());

    // A point with no completion at all: both ratios are -inf, exit 1.
    let (code, v) = json(&["pvalues", "fixtures:ex10-A", "fixtures:ex10-B", "--point", "2,3"]);
    assert_eq!(code, 1);
    assert_eq!(v["p_main"]["value"], Value::String("-inf".into()));

    let (code, v) = json(&[
        "pvalues", "fixtures:ex10-A", "fixtures:ex10-B", "--point", "2,2", "--anchor", "m",
    ]);
    assert_eq!(code, 0);
    assert!(v.get("p_opposite").is_none());
}

#[test]
fn extremal_of_the_frechet_interval() {
    let (code, v) = json(&["extremal", "fixtures:wbound@4", "fixtures:min@4"]);
    assert_eq!(code, 0);
    assert_eq!(v["upper_extremal"], Value::Bool(true));
    assert_eq!(v["lower_extremal"], Value::Bool(true));

    // Empty interval: extremality is undefined, mathematical negative.
    let (code, _, _) = copula(&["extremal", "fixtures:ex10-A", "fixtures:ex10-B"]);
    assert_eq!(code, 1);
}

#[test]
fn fixtures_listing_and_file_round_trip() {
    let (code, v) = json(&["fixtures"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for name in ["ex7-A", "ex7-B", "ex10-A", "ex10-DM", "ex10-B", "ex10-V", "pi@N", "min@N", "wbound@N"] {
        assert!(names.contains(&name), "{name} missing from listing");
    }

    let (code, v) = json(&["fixtures", "ex10-V"]);
    assert_eq!(code, 0);
    assert_eq!(v["cells"][0][1], Value::String("1/50".into()));
    assert_eq!(v["cells"][1][3], Value::String("-1/50".into()));

    let dir = tempfile::tempdir().unwrap();
    for format in ["text", "json"] {
        let (code, stdout, _) = copula(&["fixtures", "ex10-A", "--format", format]);
        assert_eq!(code, 0);
        let path = dir.path().join(format!("a.{format}"));
        fs::write(&path, stdout).unwrap();
        let (_, lifted) = json(&["transform", path.to_str().unwrap(), "--op", "m"]);
        let (_, b) = json(&["fixtures", "ex10-B"]);
        assert_eq!(lifted, b, "round trip through {format} changed the grid");
    }
}

#[test]
fn heatmap_files_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("a.png");
    let ppm = dir.path().join("a.ppm");
    let pgm = dir.path().join("a.pgm");
    copula(&["validate", "fixtures:ex10-A", "--png", png.to_str().unwrap()]);
    copula(&["validate", "fixtures:ex10-A", "--png", ppm.to_str().unwrap()]);
    copula(&["transform", "fixtures:ex10-A", "--op", "m", "--png", pgm.to_str().unwrap()]);
    assert_eq!(&fs::read(&png).unwrap()[1..4], b"PNG");
    assert_eq!(&fs::read(&ppm).unwrap()[..2], b"P6");
    assert_eq!(&fs::read(&pgm).unwrap()[..2], b"P5");
}

#[test]
fn bad_inputs_exit_two() {
    // Valid product-copula grid on a mesh with no reflection symmetry.
    let dir = tempfile::tempdir().unwrap();
    let asym = dir.path().join("asym.txt");
    fs::write(&asym, "0 1/5 1\n0 1/2 1\n0 0 0\n0 1/10 1/5\n0 1/2 1\n").unwrap();
    let asym = asym.to_str().unwrap();

    let cases: &[&[&str]] = &[
        &["validate", "fixtures:nope"],
        &["validate", "no-such-file.txt"],
        &["validate", "fixtures:pi@0"],
        &["validate", "fixtures:ex10-V"],
        &["extend", "fixtures:pi@2", "--at", "1/2"],
        &["restrict", "fixtures:pi@4", "--mesh", "0"],
        &["reflect", asym, "--axis", "x"],
        &["pvalues", "fixtures:ex10-A", "fixtures:ex10-B", "--point", "99,0"],
        &["fixtures", "ex10-V", "--png", "x.png"],
        &["no-such-command"],
    ];
    for args in cases {
        let (code, _, stderr) = copula(args);
        assert_eq!(code, 2, "{args:?} should exit 2 (stderr: {stderr})");
    }
}

#[test]
fn reproduce_paper_passes() {
    let (code, stdout, _) = copula(&["reproduce-paper", "--format", "text"]);
    assert_eq!(code, 0, "reproduction failed:\n{stdout}");
    assert!(stdout.trim_end().ends_with("all 14 checks passed"));
    assert!(!stdout.contains("FAIL"));

    let (code, v) = json(&["reproduce-paper"]);
    assert_eq!(code, 0);
    assert_eq!(v["all_ok"], Value::Bool(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 14);
}
