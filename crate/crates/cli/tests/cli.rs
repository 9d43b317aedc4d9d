use std::process::Command;

use houghton::{HoughtonElement, SubgroupDescriptor};
use houghton_cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn ok(args: &[&str]) -> String {
    let mut argv = vec!["houghton"];
    argv.extend_from_slice(args);
    let out = run(argv);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    let mut argv = vec!["houghton"];
    argv.extend_from_slice(args);
    run(argv).code
}

#[test]
fn eval_commutator_anchor() {
    assert_eq!(ok(&["eval", "--n", "3", "--word", "g2^-1 g3^-1 g2 g3", "--point", "1:1"]), "1:2\n");
    assert_eq!(ok(&["eval", "--n", "3", "--word", "g2", "--point", "1:5"]), "1:6\n");
}

#[test]
fn eval_line_mode() {
    // t sends z to z+1 on the line
    assert_eq!(ok(&["eval", "--line", "--word", "g2", "--point", "-3"]), "-2\n");
    assert_eq!(ok(&["eval", "--line", "--word", "g2^-2", "--point", "1"]), "-1\n");
}

#[test]
fn classify_block() {
    let out = ok(&["classify", "--n", "3", "--lattice", "2,0;0,2", "--type", "fsym"]);
    assert!(out.contains("d=3\n"));
    assert!(out.contains("index=4\n"));
    assert!(out.contains("ab=Z^2 x C2\n"));
    let out = ok(&["classify", "--n", "2", "--lattice", "1", "--type", "alt", "--eps", "swap"]);
    assert!(out.contains("[exceptional]"));
    assert!(out.contains("note="));
}

#[test]
fn enumerate_counts_and_round_trip() {
    let out = ok(&["enumerate", "--n", "3", "--c", "2,4"]);
    assert!(out.ends_with("count=5\n"));
    for line in out.lines().filter(|l| !l.starts_with("count=")) {
        let d = SubgroupDescriptor::parse(line).unwrap();
        assert_eq!(d.to_string(), line);
    }
    assert!(ok(&["enumerate", "--n", "4", "--c", "2,2,2"]).ends_with("count=9\n"));
}

#[test]
fn mul_output_reparses() {
    let out = ok(&["mul", "--n", "3", "--word", "g2 g3^-1", "--word", "p((1,1),(2,2))"]);
    let g = HoughtonElement::parse(out.trim()).unwrap();
    assert_eq!(g.to_string(), out.trim());
}

#[test]
fn member_and_decompose() {
    let base = ["member", "--n", "3", "--lattice", "2,0;0,2", "--type", "alt"];
    let mut a = base.to_vec();
    a.extend(["--word", "p((1,1),(1,2))"]);
    assert_eq!(ok(&a), "member=false\n");
    let mut a = base.to_vec();
    a.extend(["--word", "g2^2 g3^-2"]);
    assert_eq!(ok(&a), "member=true\n");
    let out = ok(&["decompose", "--n", "3", "--word", "g2 g3"]);
    assert!(out.contains("pi=(1,1)"));
}

#[test]
fn orbits_report() {
    let out = ok(&["orbits", "--n", "3", "--word", "g2^2"]);
    assert!(out.starts_with("infinite_orbits=2\n"));
}

#[test]
fn gen_sizes() {
    let out = ok(&["gen", "--n", "3", "--lattice", "2,0;0,2", "--type", "fsym"]);
    assert!(out.contains("size=3\n"));
    let out = ok(&["gen", "--n", "2", "--lattice", "3", "--type", "alt"]);
    assert!(out.contains("size=2\n"));
}

#[test]
fn verify_exit_codes() {
    let out = ok(&["verify", "--claim", "pcycle", "--params", "p=2,k=8"]);
    assert!(out.starts_with("CLAIM pcycle p=2 k=8\n"));
    assert!(out.ends_with("RESULT PASS\n"));
    let out = run(["houghton", "verify", "--claim", "pcycle", "--params", "p=2,k=8,corrupt=5"]);
    assert_eq!(out.code, EXIT_FAIL);
    assert!(out.stdout.ends_with("RESULT FAIL\n"));
    assert_eq!(code(&["verify", "--claim", "window_lemma", "--params", "k=3,sabotage=1"]), EXIT_FAIL);
}

#[test]
fn reports_are_deterministic() {
    let a = ok(&["verify", "--claim", "decomposition", "--params", "n=3,samples=40", "--seed", "5"]);
    let b = ok(&["verify", "--claim", "decomposition", "--params", "n=3,samples=40", "--seed", "5"]);
    assert_eq!(a, b);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["bogus"]), EXIT_USAGE);
    assert_eq!(code(&["eval", "--n", "3", "--word", "g2"]), EXIT_USAGE);
    assert_eq!(code(&["eval", "--n", "3", "--word", "g9", "--point", "1:1"]), EXIT_USAGE);
    assert_eq!(code(&["classify", "--n", "3", "--lattice", "1,0;0,1", "--type", "alt"]), EXIT_USAGE);
    assert_eq!(code(&["enumerate", "--n", "3", "--c", "2,x"]), EXIT_USAGE);
    assert_eq!(code(&["eval", "--n", "3", "--word", "g2", "--point", "1:1", "--frobnicate"]), EXIT_USAGE);
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_houghton")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let out = binary(&["eval", "--n", "3", "--word", "g2^-1 g3^-1 g2 g3", "--point", "1:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1:2\n");
    assert_eq!(binary(&["nope"]).status.code(), Some(2));
    assert_eq!(binary(&["verify", "--claim", "pcycle", "--params", "p=2,k=8,corrupt=5"]).status.code(), Some(1));
}
