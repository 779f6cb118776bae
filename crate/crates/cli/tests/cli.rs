use std::path::PathBuf;
use std::process::Command;

use posfo_cli::run_args;

fn posfo(args: &[&str]) -> (String, String, i32) {
    let (outcome, stderr) = run_args(std::iter::once("posfo").chain(args.iter().copied()));
    (outcome.stdout, stderr, outcome.code)
}

fn ok(args: &[&str]) -> String {
    let (out, err, code) = posfo(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn she_listings() {
    let out = ok(&["she", "fixture:clique:3", "--members"]);
    assert!(out.contains("shE size: 6\n"));
    assert!(out.contains("generators: (0|2|1) (1|0|2)\n"));
    assert!(out.contains("permutation subgroup: yes\n"));
    let listing: Vec<&str> = out.split("members:\n").nth(1).unwrap().lines().collect();
    assert_eq!(listing.len(), 6);
    let mut sorted = listing.clone();
    sorted.sort();
    assert_eq!(listing, sorted);

    let out = ok(&["she", "fixture:nae:2", "--members"]);
    assert!(out.ends_with("members:\n(0|1)\n(1|0)\n"));

    let one = temp_file("one.txt", "domain 1\n");
    let out = ok(&["she", one.to_str().unwrap()]);
    assert!(out.contains("shE size: 1\ngenerators: (identity only)\n"));
}

#[test]
fn classify_reports() {
    let out = ok(&["classify", "fixture:k2_plus_k1"]);
    assert!(out.starts_with("NP-complete (theorem)\n"));
    let out = ok(&["classify", "fixture:clique:3", "--equality"]);
    assert!(out.starts_with("PSPACE-complete (theorem)\n"));
    let out = ok(&["classify", "fixture:k2_plus_k1:complement", "--format", "kv"]);
    assert!(out.starts_with("verdict=coNP-complete\ncertainty=theorem\n"));

    let empty = temp_file("empty4.txt", "domain 4\nrel E 2\nend\n");
    let out = ok(&["classify", empty.to_str().unwrap()]);
    assert!(out.starts_with("Logspace (theorem)\n"));

    let out = ok(&["classify", "fixture:multipartite:2,2"]);
    assert!(out.starts_with("PSPACE-complete (theorem)\n"));
    assert!(out.contains("block permutation"));
}

#[test]
fn eval_and_verify() {
    let out = ok(&["eval", "fixture:clique:3", "forall u exists v E(u,v)", "--verify"]);
    assert!(out.starts_with("value: true\n"));
    assert!(out.contains("brute force: true (agrees)"));

    let out = ok(&["eval", "fixture:k2_plus_k1", "forall u exists v E(u,v)"]);
    assert!(out.starts_with("value: false\nengine: A_reduce"));

    let formula = temp_file("phi.txt", "forall u exists v E(u,v) | E(v,u)\n");
    let out = ok(&["eval", "fixture:clique:2", "--file", formula.to_str().unwrap()]);
    assert!(out.starts_with("value: true\n"));

    let (_, err, code) = posfo(&["eval", "fixture:clique:3", "exists v E(u,v)"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a sentence"));
    let (_, err, code) = posfo(&["eval", "fixture:clique:3", "exists v F(v)"]);
    assert_eq!(code, 2, "{err}");
    let (_, _, code) = posfo(&["eval", "fixture:clique:3", "exists u E(u,"]);
    assert_eq!(code, 2);
    // (012|1|2) is not a she of K3
    let (_, err, code) = posfo(&["eval", "fixture:clique:3", "exists u E(u,u)", "--engine", "a-reduce:(012|1|2)"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a she"), "{err}");
}

#[test]
fn brute_and_auto_engines_agree() {
    let sentences = [
        "forall u exists v E(u,v)",
        "exists u forall v E(u,v) | E(v,u)",
        "forall u forall v exists w E(u,w) & E(w,v)",
        "exists u exists v E(u,v) & E(v,u)",
        "forall u (exists v E(u,v)) | (forall w E(w,u))",
    ];
    for structure in [
        "fixture:clique:3",
        "fixture:k2_plus_k1",
        "fixture:k2_plus_k1:complement",
        "fixture:multipartite:2,1",
        "fixture:clique:1",
    ] {
        for phi in sentences {
            let value = |engine: &str| {
                let out = ok(&["eval", structure, phi, "--engine", engine, "--verify"]);
                assert!(out.contains("(agrees)"), "{structure} {phi} {engine}");
                out.lines().next().unwrap().to_string()
            };
            assert_eq!(value("brute"), value("auto"), "{structure} {phi}");
        }
    }
}

#[test]
fn lattices() {
    let out = ok(&["lattice", "2"]);
    assert!(out.starts_with("DSMs on 2 elements: 5\n"));
    assert!(out.contains("Hasse covers: 6\n"));
    let dot = ok(&["lattice", "2", "--dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 6);
    assert_eq!(dot.matches("Logspace").count(), 3);
    assert_eq!(dot.matches("PSPACE-complete").count(), 2);
    assert_eq!(ok(&["lattice", "2", "--dot"]), dot);

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("lattice2.dot");
    ok(&["lattice", "2", "--dot", "-o", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), dot);

    assert!(ok(&["lattice", "3"]).starts_with("DSMs on 3 elements: 115\n"));
    assert!(ok(&["lattice", "1"]).starts_with("DSMs on 1 elements: 1\n"));
    assert_eq!(posfo(&["lattice", "4"]).2, 2);
    assert_eq!(posfo(&["lattice", "0"]).2, 2);
}

#[test]
fn galois_checks() {
    let out = ok(&["galois", "fixture:clique:3"]);
    assert!(out.ends_with("result: pass\n"), "{out}");
    assert_eq!(ok(&["galois", "fixture:clique:3", "--seed", "9"]), ok(&["galois", "fixture:clique:3", "--seed", "9"]));
    assert!(ok(&["galois", "fixture:k2_plus_k1", "--samples", "50"]).ends_with("result: pass\n"));
    let (_, err, code) = posfo(&["galois", "fixture:clique:3", "--max-arity", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("--max-arity"));
    assert_eq!(posfo(&["galois", "fixture:clique:5"]).2, 2);
}

#[test]
fn quotients() {
    let out = ok(&["quotient", "fixture:multipartite:2,1", "--shop", "(01|01|2)"]);
    assert_eq!(out, "domain 2\nrel E 2\n0 1\n1 0\nend\n");
    let k3 = ok(&["fixtures", "clique", "3"]);
    assert_eq!(ok(&["quotient", "fixture:clique:3", "--shop", "(0|1|2)"]), k3);
    let (_, err, code) = posfo(&["quotient", "fixture:clique:3", "--shop", "(1|2|0)"]);
    assert_eq!(code, 2);
    assert!(err.contains("equivalence"));
    assert_eq!(posfo(&["quotient", "fixture:clique:3", "--shop", "(0|1)"]).2, 2);
}

#[test]
fn fixture_listing() {
    let out = ok(&["fixtures"]);
    for name in ["clique", "nae", "k2_plus_k1", "multipartite"] {
        assert!(out.contains(name));
    }
    assert!(ok(&["fixtures", "nae", "2"]).starts_with("domain 2\nrel R_NAE 3\n"));
    assert_eq!(posfo(&["fixtures", "clique"]).2, 2);
    assert_eq!(posfo(&["fixtures", "petersen"]).2, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(posfo(&[]).2, 2);
    assert_eq!(posfo(&["she"]).2, 2);
    assert_eq!(posfo(&["she", "fixture:clique:3", "--bogus"]).2, 2);
    assert_eq!(posfo(&["she", "/no/such/file"]).2, 2);
    assert_eq!(posfo(&["she", "fixture:clique:3", "--cap", "9"]).2, 2);
    assert_eq!(posfo(&["she", "fixture:clique:5"]).2, 2);
    let bad = temp_file("bad.txt", "domain 2\nrel E 2\n0 5\nend\n");
    let (_, err, code) = posfo(&["classify", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (out, _, code) = posfo(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("galois"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_posfo");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let out = run(&["classify", "fixture:nae:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PSPACE-complete (theorem)"));
    let out = run(&["eval", "fixture:clique:3", "E(u,u)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error: "));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
