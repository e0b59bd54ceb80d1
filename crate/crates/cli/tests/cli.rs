use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn tml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tml")).args(args).output().unwrap()
}

fn out(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_syntax_prints_a_typed_tree() {
    let o = tml(&["check-syntax", "--sig", &data("sig_basic.tms"), "K[c] P(c)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out(&o).contains("agt"), "{}", out(&o));
    let bad = tml(&["check-syntax", "--sig", &data("sig_basic.tms"), "P(c"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn check_syntax_accepts_every_shipped_file() {
    for f in [
        "sig_basic.tms",
        "smallest.tmm",
        "prop3.tmn",
        "lewis.tmn",
        "exists_c.tmp",
        "bogus_ps.tmp",
    ] {
        let o = tml(&["check-syntax", &data(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}: {}", out(&o));
    }
}

#[test]
fn validity_finds_the_control_countermodel() {
    let sig = data("sig_basic.tms");
    let valid = tml(&["validity", "--sig", &sig, "x = c -> (P(x) -> P(c))"]);
    assert_eq!(valid.status.code(), Some(0), "{}", out(&valid));
    let refuted = tml(&["validity", "--sig", &sig, "P(c)"]);
    assert_eq!(refuted.status.code(), Some(1));
    assert!(out(&refuted).contains("model standard"), "{}", out(&refuted));
}

#[test]
fn usage_and_load_errors_exit_with_two() {
    assert_eq!(
        tml(&["eval", "--model", "/nonexistent.tmn", "--world", "w", "T"])
            .status
            .code(),
        Some(2)
    );
    let o = tml(&["eval", "--model", &data("prop3.tmn"), "--world", "nowhere", "P(c)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tml(&["eval", "--model", &data("prop3.tmn"), "--world", "w", "P(x)"]);
    assert_eq!(o.status.code(), Some(2), "free x without a valuation");
    assert_eq!(tml(&["fuzz", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(tml(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn fuzz_records_end_with_a_result_line() {
    let o = tml(&["fuzz", "--seed", "4", "--samples", "50", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let text = out(&o);
    assert!(
        text.lines().all(|l| l.starts_with("CLAIM ") || l == "RESULT pass"),
        "{text}"
    );
    assert_eq!(text.lines().last(), Some("RESULT pass"));
}
