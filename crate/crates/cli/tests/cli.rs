use std::io::Write;
use std::process::{Command, Output, Stdio};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

// x = 2^{-x}, from crates/core/tests/oracles/oracle.py.
const OMEGA: f64 = 0.641_185_744_504_986;

const FOUR_UNKNOWNS: &str = "s1 = {s2, s3}\ns2 = {}\ns3 = {s3}\ns4 = {s2}\n";

fn hfcode(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hfcode"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = hfcode(args, stdin);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], stdin: &str) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full, stdin)).unwrap()
}

fn bounds(v: &Value) -> (f64, f64) {
    let lo = v["lo"].as_str().unwrap().parse().unwrap();
    let hi = v["hi"].as_str().unwrap().parse().unwrap();
    (lo, hi)
}

#[test]
fn encode_examples() {
    assert_eq!(stdout(&["encode", "{}"], ""), "0\n");
    assert_eq!(stdout(&["encode", "{{{}},{}}"], ""), "3\n");
    assert_eq!(stdout(&["encode", "{{},{{}}}"], ""), "3\n");
    assert_eq!(stdout(&["encode", "{{},{{{}}}}"], ""), "5\n");
    assert_eq!(stdout(&["encode"], "{{{}}}\n"), "2\n");
    assert_eq!(stdout(&["encode", "{{{{}}}}"], ""), "4\n");
}

#[test]
fn decode_encode_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let i: u32 = rng.gen_range(0..1 << 16);
        let set = stdout(&["decode", &i.to_string()], "");
        let back = stdout(&["encode", set.trim()], "");
        assert_eq!(back.trim(), i.to_string());
        let again = stdout(&["decode", back.trim()], "");
        assert_eq!(again, set);
    }
}

#[test]
fn compare_and_successor() {
    assert_eq!(stdout(&["compare", "{{}}", "{}"], ""), "{{}} > {}\n");
    assert_eq!(
        stdout(&["compare", "--input", "ackermann-index", "6", "6"], ""),
        "{{{}},{{{}}}} = {{{}},{{{}}}}\n"
    );
    let v = json(&["succ", "{{},{{}}}"], "");
    assert_eq!(v["successor"], "{{{{}}}}");
    assert_eq!(v["code"], "4");
}

#[test]
fn solve_self_singleton() {
    let v = json(&["solve", "--eps", "1e-25"], "s = {s}\n");
    let (lo, hi) = bounds(&v["unknowns"][0]);
    assert!(0.5 < lo && hi < 1.0);
    assert!(lo <= OMEGA && OMEGA <= hi + 1e-16);
    assert_eq!(v["normalized"], false);
}

#[test]
fn solve_empty_equation() {
    let v = json(&["solve"], "a = {}\n");
    let u = &v["unknowns"][0];
    assert_eq!(u["exact"]["lo"]["significand"], "0");
    assert_eq!(u["exact"]["hi"]["significand"], "0");
    assert_eq!(v["status"]["kind"], "exact_stabilized");
}

#[test]
fn solve_four_unknowns() {
    let v = json(&["solve", "--eps", "1e-15"], FOUR_UNKNOWNS);
    let expected = [1.0 + OMEGA, 0.0, OMEGA, 1.0];
    let names = ["s1", "s2", "s3", "s4"];
    for (k, (x, name)) in expected.iter().zip(names).enumerate() {
        let u = &v["unknowns"][k];
        assert_eq!(u["name"], name);
        let (lo, hi) = bounds(u);
        assert!(lo - 1e-15 <= *x && *x <= hi + 1e-15, "{name}: [{lo}, {hi}]");
        assert!(hi - lo <= 1e-15);
    }
}

#[test]
fn solve_warns_on_non_normal_input() {
    let out = hfcode(&["--format", "json", "solve"], "a = {a}\nb = {b}\n");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: input is not normal"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["normalized"], true);
    assert_eq!(v["unknowns"].as_array().unwrap().len(), 2);
    assert_eq!(v["unknowns"][0]["exact"], v["unknowns"][1]["exact"]);
}

#[test]
fn solve_graph_input() {
    let v = json(&["solve", "--input", "graph"], "point p\np -> q\nq -> q\n");
    let (lo, hi) = bounds(&v["unknowns"][0]);
    assert!(lo <= 2f64.powf(-OMEGA) + 1e-12 && 2f64.powf(-OMEGA) - 1e-12 <= hi);
    assert_eq!(v["point"], "p");
}

#[test]
fn approx_four_unknowns_tables() {
    let text = stdout(&["approx", "-j", "3"], FOUR_UNKNOWNS);
    let expected = "\
set
0: ⟨∅, ∅, ∅, ∅⟩
1: ⟨{∅}, ∅, {∅}, {∅}⟩
2: ⟨{∅, {∅}}, ∅, {{∅}}, {∅}⟩
3: ⟨{∅, {{∅}}}, ∅, {{{∅}}}, {∅}⟩

multiset
0: ⟨∅, ∅, ∅, ∅⟩
1: ⟨[∅, ∅], ∅, [∅], [∅]⟩
2: ⟨[∅, [∅]], ∅, [[∅]], [∅]⟩
3: ⟨[∅, [[∅]]], ∅, [[[∅]]], [∅]⟩
";
    assert_eq!(text, expected);
}

#[test]
fn approx_towers_for_self_singleton() {
    let v = json(&["approx", "-j", "4", "--kind", "set"], "s = {s}\n");
    let rows = v["set"].as_array().unwrap();
    let mut tower = String::from("{}");
    for row in rows {
        assert_eq!(row["values"][0], tower.as_str());
        tower = format!("{{{tower}}}");
    }
    assert!(v["multiset"].is_null());
}

#[test]
fn omega_and_ra() {
    let (lo, hi) = bounds(&json(&["omega", "--eps", "1e-30", "--digits", "40"], ""));
    assert!(lo <= OMEGA && OMEGA <= hi);
    let (lo, hi) = bounds(&json(&["ra", "{{{}}}"], ""));
    assert!(lo <= 0.5 && 0.5 <= hi);
    let (lo, hi) = bounds(&json(
        &["ra", "--input", "system", "--point", "s1"],
        FOUR_UNKNOWNS,
    ));
    assert!(lo <= 1.0 + OMEGA + 1e-15 && 1.0 + OMEGA - 1e-15 <= hi);
}

#[test]
fn minimize_merges_bisimilar_unknowns() {
    let v = json(&["minimize"], "a = {a}\nb = {b}\nc = {}\n");
    assert_eq!(v["was_normal"], false);
    assert_eq!(v["classes"], 2);
    assert_eq!(v["system"], "a = { a }\nc = {}\n");
}

#[test]
fn lab_commands() {
    let v = json(&["deltagap", "-j", "1"], "");
    assert_eq!(bounds(&v["delta"]), (-0.5, -0.5));
    assert_eq!(v["not_minus_one"], true);
    let v = json(&["witness", "-n", "2"], "");
    assert_eq!(v["cardinality"], 9);
    assert_eq!(v["certified"], true);
    let v = json(&["duecasi", "-n", "32"], "");
    assert_eq!(v["all_certified"], true);
    let csv = stdout(&["scan", "-n", "4", "--csv", "--digits", "3"], "");
    assert_eq!(
        csv,
        "index,midpoint,width,refined,unresolved\n0,0.000,0,false,false\n1,1.000,0,false,false\n\
         2,0.500,0,false,false\n3,1.500,0,false,false\n"
    );
}

#[test]
fn json_is_byte_deterministic() {
    let a = stdout(&["--format", "json", "solve", "--trace"], FOUR_UNKNOWNS);
    let b = stdout(&["--format", "json", "solve", "--trace"], FOUR_UNKNOWNS);
    assert_eq!(a, b);
    let a = stdout(
        &["--format", "json", "--jobs", "1", "scan", "-n", "300"],
        "",
    );
    let b = stdout(
        &["--format", "json", "--jobs", "4", "scan", "-n", "300"],
        "",
    );
    assert_eq!(a, b);
}

#[test]
fn gen_is_seeded() {
    let a = stdout(&["--seed", "11", "gen", "--unknowns", "6"], "");
    let b = stdout(&["--seed", "11", "gen", "--unknowns", "6"], "");
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 6);
    let v = json(&["solve"], &a);
    assert!(v["unknowns"].as_array().is_some());
}

#[test]
fn exit_codes() {
    assert_eq!(hfcode(&["encode", "{{}"], "").status.code(), Some(1));
    assert_eq!(hfcode(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(hfcode(&["--eps", "0", "omega"], "").status.code(), Some(1));
    assert_eq!(
        hfcode(&["--max-precision", "32", "omega"], "")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hfcode(&["solve", "--input", "graph"], "x -> x\ny\n")
            .status
            .code(),
        Some(1)
    );
    assert_eq!(hfcode(&["solve"], "a = {b}\n").status.code(), Some(1));
    assert_eq!(
        hfcode(&["--eps", "2^-200", "--max-precision", "64", "omega"], "")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(hfcode(&["witness", "-n", "9"], "").status.code(), Some(2));
    assert_eq!(hfcode(&["--help"], "").status.code(), Some(0));
}
