use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use skewfree::cli::{parse_problem, print_problem, run, Outcome};
use skewfree::error::Position;
use skewfree::field::Field;
use skewfree::Error;

const FIXTURES: [&str; 8] = [
    "commutative",
    "diagonal-f7",
    "dilation",
    "mixed",
    "reflection",
    "shift-derivation-f5",
    "weyl-delta",
    "weyl-sigma",
];

fn fixture_path(name: &str) -> String {
    format!("{}/tests/fixtures/{name}.ore", env!("CARGO_MANIFEST_DIR"))
}

/// Writes `text` to a scratch file named after the calling test.
fn scratch(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{name}.ore"));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn call(args: &[&str]) -> (Outcome, Value) {
    let mut full = vec!["skewfree", "--quiet"];
    full.extend_from_slice(args);
    let out = run(full);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out, v)
}

fn parse_err(text: &str) -> Error {
    match parse_problem(text) {
        Ok(_) => panic!("accepted:\n{text}"),
        Err(e) => e,
    }
}

#[test]
fn grammar_examples() {
    let pf = parse_problem("field: Q\nvars: t\nsigma.t: t+1\nsigma_inv.t: t-1\n").unwrap();
    assert!(pf.spec.pair.is_pure_automorphism());
    assert!(!pf.spec.pair.sigma().is_identity());

    let pf = parse_problem("field: Fp 5\nvars: x0,x1\ndelta.x0: x1\ndelta.x1: 0\n").unwrap();
    assert!(pf.spec.pair.is_pure_derivation());
    assert_eq!(pf.spec.pair.presentation().field(), Field::Prime(5));

    // defaults, comments, blank lines and an affine inverse worked out automatically
    let pf = parse_problem("# header\n\nfield: Q   # rationals\nvars: a, b\nsigma.a: 3*a - 1\n").unwrap();
    let pair = &pf.spec.pair;
    assert!(pair.delta().is_zero());
    let a = pair.presentation().generator(0);
    assert_eq!(pair.apply_sigma(&pair.apply_sigma(&a, 1), -1), a);

    let pf = parse_problem("field: Q\nvars: t\noption.word_length: 2\noption.orbit_bound: 10\nE.one: 1\n").unwrap();
    assert_eq!(pf.spec.options.word_length, 2);
    assert_eq!(pf.spec.options.orbit_bound, 10);
    assert_eq!(pf.constant_names, ["one"]);
}

#[test]
fn structural_errors() {
    let e = parse_err("field: Q\nvars: t\nsigma.t: t^2\nsigma_inv.t: t\n");
    assert!(matches!(e, Error::NotAnAutomorphism(_)), "{e:?}");
    let e = parse_err("field: Q\nvars: t\nsigma.t: t^2\nsigma_inv.t: t-1\n");
    assert!(matches!(e, Error::NotAnAutomorphism(_)), "{e:?}");
    let e = parse_err("field: Fp 6\nvars: t\n");
    assert!(matches!(e, Error::BadCharacteristic(_)), "{e:?}");
    let e = parse_err("field: Fp 1\nvars: t\n");
    assert!(matches!(e, Error::BadCharacteristic(_)), "{e:?}");
    // delta(yz) computed two ways disagrees
    let e = parse_err("field: Q\nvars: y, z\nsigma.y: y+1\ndelta.z: 1\n");
    assert!(matches!(e, Error::InconsistentDerivation(_)), "{e:?}");
}

#[test]
fn parse_errors_carry_positions() {
    let cases: [(&str, Position); 6] = [
        ("field: Q\nvars: t\nsigma.t: t+*1\n", Position { line: 3, column: 12 }),
        ("field: Q\nvars: t\nsigma.t: (t+1\n", Position { line: 3, column: 14 }),
        ("field: Q\nvars: t\nbogus line\n", Position { line: 3, column: 1 }),
        ("field: Q\nvars: t\nvars: s\n", Position { line: 3, column: 1 }),
        ("field: Q\nvars: t\n  color.t: 1\n", Position { line: 3, column: 3 }),
        ("field: Q\nvars: t\ndelta.t: 2 $ t\n", Position { line: 3, column: 12 }),
    ];
    for (text, want) in cases {
        let e = parse_err(text);
        assert_eq!(e.kind(), "ParseError", "{text:?}: {e:?}");
        assert_eq!(e.position(), Some(want), "{text:?}: {e}");
    }
    let e = parse_err("field: Q\nvars: t\nsigma.t: s+1\n");
    assert_eq!(e.kind(), "UndeclaredVariable");
    assert_eq!(e.position(), Some(Position { line: 3, column: 10 }));
    let e = parse_err("field: Q\nvars: t\nsigma.s: t+1\n");
    assert_eq!(e.kind(), "UndeclaredVariable");
    assert_eq!(e.position().map(|p| p.line), Some(3));
}

#[test]
fn fixtures_round_trip_through_print() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture_path(name)).unwrap();
        let pf = parse_problem(&text).unwrap();
        let printed = print_problem(&pf);
        let again = parse_problem(&printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert!(pf.same_as(&again), "{name}:\n{printed}");
        assert_eq!(print_problem(&again), printed, "{name}");
    }
    let text = "field: Fp 7\nvars: t\nsigma.t: 3*t\nE.c: t^6\noption.window: 4\noption.certify: false\noption.max_words: 9\n";
    let pf = parse_problem(text).unwrap();
    let again = parse_problem(&print_problem(&pf)).unwrap();
    assert!(pf.same_as(&again));
}

#[test]
fn command_examples() {
    let (out, v) = call(&["classify", &fixture_path("weyl-sigma")]);
    assert_eq!(out.code, 0);
    assert_eq!(v["kind"], "Free");

    let (out, v) = call(&["freeness", &fixture_path("dilation"), "--b", "1/(t-1)", "--max-len", "3"]);
    assert_eq!(out.code, 0);
    assert_eq!(v["verdict"], "Independent");
    assert_eq!(v["word_count"], 15);

    let (out, v) = call(&["orbit", &fixture_path("reflection"), "--elem", "t", "--bound", "8"]);
    assert_eq!(out.code, 0);
    assert_eq!(v["kind"], "Finite");
    assert_eq!(v["period"], 2);
    let (_, v) = call(&["orbit", &fixture_path("dilation"), "--elem", "t"]);
    assert_eq!(v["kind"], "Infinite");

    let (out, v) = call(&["tower", &fixture_path("shift-derivation-f5"), "--elem", "x0", "--depth", "4"]);
    assert_eq!(out.code, 0);
    let levels = v["levels"].as_array().unwrap();
    assert!(levels.iter().all(|l| l["status"] == "Strict"), "{v}");

    let (out, v) = call(&["normalize", &fixture_path("mixed")]);
    assert_eq!(out.code, 0);
    assert_eq!(v["report"], "shifted to pure automorphism type");
    assert_eq!(v["c"], "-t");
    let (_, v) = call(&["normalize", &fixture_path("weyl-delta")]);
    assert_eq!(v["report"], "pure derivation type");

    let (out, v) = call(&["compute", &fixture_path("weyl-sigma"), "--expr", "inv(X)*X"]);
    assert_eq!(out.code, 0);
    assert_eq!(v["value"], "1");
    // x u - u x = (u+1) x - u x = x
    let (_, v) = call(&["compute", &fixture_path("weyl-sigma"), "--expr", "X*u - u*X"]);
    assert_eq!(v["value"], "X");
    // (1 - x)^-1 (1 - x) = 1 even through a sum
    let (_, v) = call(&["compute", &fixture_path("weyl-delta"), "--expr", "inv(1-X)*(1-X) + t - t"]);
    assert_eq!(v["value"], "1");
}

#[test]
fn exit_codes() {
    let (out, v) = call(&["classify", &scratch("exit_parse", "field: Q\nvars: t\nsigma.t: t+\n")]);
    assert_eq!(out.code, 1);
    assert_eq!(v["error"], "ParseError");
    assert_eq!(v["position"]["line"], 3);
    assert!(v["detail"].is_string());

    let (out, v) = call(&["classify", &scratch("exit_auto", "field: Q\nvars: t\nsigma.t: t^2\nsigma_inv.t: t\n")]);
    assert_eq!(out.code, 2);
    assert_eq!(v["error"], "NotAnAutomorphism");

    let (out, v) = call(&["--max-words", "3", "freeness", &fixture_path("dilation"), "--b", "1/(t-1)", "--max-len", "3"]);
    assert_eq!(out.code, 3);
    assert_eq!(v["error"], "ResourceBoundExceeded");

    let (out, v) = call(&["freeness", &fixture_path("dilation"), "--b", "1/(s-1)"]);
    assert_eq!(out.code, 1);
    assert_eq!(v["error"], "UndeclaredVariable");

    let (out, v) = call(&["classify", "/nonexistent/problem.ore"]);
    assert_eq!(out.code, 1);
    assert_eq!(v["error"], "InvalidArgument");

    let (out, v) = call(&["frobnicate", &fixture_path("dilation")]);
    assert_eq!(out.code, 1);
    assert_eq!(v["error"], "UsageError");

    let (out, v) = call(&["compute", &fixture_path("weyl-sigma"), "--expr", "inv(X - X)"]);
    assert_eq!(out.code, 1);
    // evaluation errors in a flag expression point into it; flags are line 0
    assert_eq!(v["error"], "ParseError");
    assert!(v["detail"].as_str().unwrap().contains("division by zero"), "{v}");
    assert_eq!(v["position"]["line"], 0);

    let (out, v) = call(&["tower", &fixture_path("weyl-sigma"), "--elem", "u"]);
    assert_eq!(out.code, 1);
    assert_eq!(v["error"], "RequiresPureDerivation");
}

#[test]
fn output_is_deterministic() {
    for name in FIXTURES {
        let a = run(["skewfree", "classify", &fixture_path(name)]);
        let b = run(["skewfree", "classify", &fixture_path(name)]);
        assert_eq!(a.code, 0, "{name}: {}", a.stdout);
        assert_eq!(a.stdout, b.stdout, "{name}");
        let v: Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["meta"]["command"], "classify");
        assert_eq!(v["meta"]["input_sha256"].as_str().unwrap().len(), 64);
    }
    // the payload outside `meta` does not depend on where the file lives
    let text = std::fs::read_to_string(fixture_path("reflection")).unwrap();
    let copy = scratch("determinism_copy", &text);
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v.as_object_mut().unwrap().remove("meta");
        v
    };
    let a = run(["skewfree", "classify", &fixture_path("reflection")]);
    let b = run(["skewfree", "classify", &copy]);
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn summary_goes_to_stderr() {
    let out = run(["skewfree", "classify", &fixture_path("reflection")]);
    assert!(out.stderr.starts_with("classify: PI"), "{}", out.stderr);
    let out = run(["skewfree", "--quiet", "classify", &fixture_path("reflection")]);
    assert!(out.stderr.is_empty());
}

#[test]
fn binary_reports_through_exit_status() {
    let bin = env!("CARGO_BIN_EXE_skewfree");
    let out = Command::new(bin).args(["classify", &fixture_path("reflection")]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["kind"], "PI");
    assert_eq!(v["central_power"], 2);

    let bad = scratch("binary_bad", "field: Fp 9\nvars: t\n");
    let out = Command::new(bin).args(["classify", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"], "BadCharacteristic");
    assert!(!out.stderr.is_empty());
}
