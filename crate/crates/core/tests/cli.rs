mod common;

use std::path::PathBuf;

use cech_descent::cli;
use common::data_path;

fn run(format: &str, args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["cech".to_string(), "--format".into(), format.into()];
    full.extend(args.iter().map(|a| {
        if a.contains('.') && !a.starts_with('-') && !a.starts_with('/') {
            data_path(a).display().to_string()
        } else {
            a.to_string()
        }
    }));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn machine(args: &[&str]) -> (i32, String) {
    let (code, out, _) = run("machine", args);
    (code, out)
}

fn fields<'a>(out: &'a str, key: &str) -> Vec<&'a str> {
    out.lines()
        .filter_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .collect()
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    fields(out, key).first().copied().unwrap_or_else(|| panic!("no `{key}` in\n{out}"))
}

fn scratch(name: &str, contents: &str) -> String {
    let path: PathBuf = std::env::temp_dir().join(format!("cech-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn pseudocircle_has_infinite_cyclic_vertex_group() {
    let (code, out) = machine(&["pi1", "--space", "pc4.space", "--cover", "cd.cover", "--base", "c"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "generators"), "1");
    assert_eq!(field(&out, "relators"), "0");
}

#[test]
fn vertex_group_ranks() {
    for (nerve, base, rank) in [("figure8.nerve", "o", "2"), ("tet.nerve", "0", "0"), ("circle3.nerve", "A", "1")] {
        let (code, out) = machine(&["pi1", "--nerve", nerve, "--base", base]);
        assert_eq!(code, 0, "{nerve}");
        assert_eq!(field(&out, "generators"), rank, "{nerve}");
    }
}

#[test]
fn count_comparisons() {
    for (nerve, expected) in [("tet.nerve", "1"), ("circle3.nerve", "3")] {
        let (code, out) = machine(&["compare-counts", "--nerve", nerve, "--group", "s3.group"]);
        assert_eq!(code, 0);
        for key in ["hom", "h1", "torsor"] {
            assert_eq!(field(&out, key), expected, "{nerve} {key}");
        }
        assert_eq!(field(&out, "equal"), "true");
    }
}

#[test]
fn double_cover_checks_and_is_connected() {
    let base = ["--space", "pc4.space", "--cover", "cd.cover", "--datum", "doublecover.datum"];
    let (code, out) = machine(&[&["check"], &base[..]].concat());
    assert_eq!(code, 0);
    assert_eq!(field(&out, "valid"), "true");
    let (code, out) = machine(&[&["orbits"], &base[..]].concat());
    assert_eq!(code, 0, "{out}");
    let (code, out) = machine(&[&["cp-test"], &base[..]].concat());
    assert_eq!(code, 0, "{out}");
    let (code, out) = machine(&[&["homs"], &base[..], &["--datum", "doublecover.datum"]].concat());
    assert_eq!(code, 0, "{out}");
}

#[test]
fn seq_checks() {
    let (code, out) = machine(&["seq-check", "--object", "shiftswap.seq"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "locally_constant"), "true");
    assert_eq!(field(&out, "covering_projection"), "false");
    let (code, out) = machine(&["seq-check", "--object", "perturbed.seq"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "covering_projection"), "true");
    assert_eq!(field(&out, "max_bound"), "6");
}

#[test]
fn cohomology_of_the_circle() {
    let (code, out) = machine(&["h1", "--nerve", "circle3.nerve", "--group", "z2.group"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "classes"), "2");
    assert_eq!(fields(&out, "class").len(), 2);
    let (code, out) = machine(&[
        "torsor-from-cocycle", "--nerve", "circle3.nerve", "--group", "z2.group", "--values", "1 0 0",
    ]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "torsor"), "true");
    assert_eq!(field(&out, "orbits"), "1");
}

#[test]
fn colimit_stages_count_representations() {
    for (group, n) in [("z2.group", "2"), ("z3.group", "3"), ("z4.group", "4")] {
        let (code, out) = machine(&[
            "pro-eval", "--space", "pc4.space", "--cover", "whole.cover", "--cover", "cd.cover", "--cover", "minimal",
            "--group", group,
        ]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(field(&out, "colimit"), n);
    }
}

#[test]
fn non_cocycle_exits_one_with_diagnostics() {
    let mut text = String::from("datum bad on tet\n");
    for i in 0..4 {
        text.push_str(&format!("fiber {i}: a b\n"));
    }
    text.push_str("edge e01: a->b b->a\n");
    for e in ["e02", "e03", "e12", "e13", "e23"] {
        text.push_str(&format!("edge {e}: a->a b->b\n"));
    }
    let datum = scratch("bad.datum", &text);
    let (code, out) = machine(&["check", "--nerve", "tet.nerve", "--datum", &datum]);
    assert_eq!(code, 1);
    assert_eq!(field(&out, "valid"), "false");
    assert!(fields(&out, "diagnostic").iter().any(|d| d.contains("t012")));
}

#[test]
fn malformed_input_exits_two() {
    let nerve = scratch("bad.nerve", "nerve x\nobjects: A\nedge q A A\n");
    let (code, _, err) = run("machine", &["nerve", "--nerve", &nerve]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = run("machine", &["nerve", "--nerve", "/nonexistent/x.nerve"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/x.nerve"));
    let (code, _, _) = run("machine", &["no-such-command"]);
    assert_eq!(code, 2);
    let (code, _, _) = run("machine", &["pi1", "--nerve", "tet.nerve"]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_references_exit_one() {
    let (code, _, err) = run("machine", &["pi1", "--nerve", "tet.nerve", "--base", "Z"]);
    assert_eq!(code, 1);
    assert!(err.contains("`Z`"));
}

#[test]
fn help_exits_zero() {
    let (code, _, _) = run("human", &["--help"]);
    assert_eq!(code, 0);
}

#[test]
fn machine_output_is_deterministic() {
    let runs = [
        vec!["pi1", "--nerve", "figure8.nerve", "--base", "o"],
        vec!["h1", "--nerve", "tet.nerve", "--group", "s3.group"],
        vec!["refine", "--space", "pc4.space", "--cover", "minimal", "--cover", "cd.cover"],
        vec!["trivialize", "--space", "pc4.space", "--cover", "cd.cover", "--datum", "doublecover.datum"],
        vec!["seq-check", "--object", "perturbed.seq"],
    ];
    for args in runs {
        let first = machine(&args);
        assert_eq!(first.0, 0, "{args:?}: {}", first.1);
        assert_eq!(machine(&args), first, "{args:?}");
        assert!(first.1.lines().all(|l| l.contains('=')), "{args:?}");
    }
}

#[test]
fn human_output_aligns_fields() {
    let (code, out, _) = run("human", &["check", "--space", "pc4.space", "--cover", "cd.cover", "--datum", "doublecover.datum"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("valid") && l.trim_end().ends_with("true")));
    assert!(!out.contains('='));
}
