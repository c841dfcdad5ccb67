use std::process::Command;

fn run(spec: &str, args: &[&str]) -> (i32, String, String) {
    let path = format!("{}/tests/specs/{spec}", env!("CARGO_MANIFEST_DIR"));
    let out = Command::new(env!("CARGO_BIN_EXE_openbook")).arg(path).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes_on_the_corpus() {
    let cases: &[(&str, &[&str], i32)] = &[
        ("annulus.ob", &["build"], 0),
        ("annulus.ob", &["admissibility"], 0),
        ("annulus.ob", &["homology", "--word", "two"], 0),
        ("annulus.ob", &["contact"], 0),
        ("annulus.ob", &["contact", "--word", "neg"], 0),
        ("annulus.ob", &["comult", "pos", "pos"], 0),
        ("annulus.ob", &["comult", "pos", "pos", "--cap", "0"], 1),
        ("annulus.ob", &["monoid", "pos", "neg", "two"], 0),
        ("annulus.ob", &["export-json"], 0),
        ("annulus.ob", &["export-dot"], 0),
        ("annulus.ob", &["contact", "--word", "missing"], 2),
        ("torus.ob", &["comult", "g", "h"], 0),
        ("torus.ob", &["homology", "--word", "g"], 0),
        ("disk.ob", &["build"], 2),
        ("typo.ob", &["build"], 2),
        ("unknown.ob", &["build"], 2),
    ];
    for (spec, args, code) in cases {
        let (c, _, err) = run(spec, args);
        assert_eq!(c, *code, "{spec} {args:?}: {err}");
    }
}

#[test]
fn contact_verdicts() {
    assert!(run("annulus.ob", &["contact"]).1.contains("verdict: nonzero over GF(2)"));
    assert!(run("annulus.ob", &["contact", "--word", "neg"]).1.contains("verdict: zero over GF(2)"));
}

#[test]
fn syntax_errors_report_positions() {
    let (_, _, err) = run("typo.ob", &["build"]);
    assert!(err.contains("syntax error at 3:1"), "{err}");
}

#[test]
fn json_output_is_stable_and_versioned() {
    let a = run("torus.ob", &["comult", "g", "h", "--json"]).1;
    let b = run("torus.ob", &["comult", "g", "h", "--json"]).1;
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "openbook/1");
    assert_eq!(v["verdict"], "certificate OK");
}

#[test]
fn exports() {
    let dot = run("annulus.ob", &["export-dot"]).1;
    assert!(dot.starts_with("graph regions {") && dot.contains("fillcolor"));
    let json: serde_json::Value = serde_json::from_str(&run("annulus.ob", &["export-json"]).1).unwrap();
    assert_eq!(json["genus"], 1);
}
