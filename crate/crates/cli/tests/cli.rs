use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn act(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_act")).args(args).output().expect("run act")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const RAINBOW: &str = "act 1\ncolours 3\nvertices 3\narc 0 1 1\narc 1 2 2\narc 2 0 3\n";

#[test]
fn gen_small_instance() {
    let out = act(&["gen", "--n", "3", "--m", "1", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let t = text(&out);
    assert!(t.starts_with("act 1\ncolours 3\nvertices 2\n"));
    assert_eq!(t.lines().filter(|l| l.starts_with("arc ")).count(), 1);
}

#[test]
fn gen_validate_solve_grid() {
    let dir = tempfile::tempdir().unwrap();
    for n in 1..=5 {
        for m in 1..=5 {
            let path = dir.path().join(format!("{n}-{m}.act"));
            let (ns, ms) = (n.to_string(), m.to_string());
            assert_eq!(code(&act(&["gen", "--n", &ns, "--m", &ms, "--seed", "3", "-o", s(&path)])), 0);
            let v = act(&["validate", s(&path)]);
            assert_eq!(code(&v), 0, "validate n={n} m={m}");
            assert!(text(&v).contains("construction-rule   pass"));
            let solved = act(&["solve", s(&path)]);
            assert_eq!(code(&solved), 0, "solve n={n} m={m}");
            assert!(text(&solved).contains("status              proved-optimal"));
        }
    }
}

#[test]
fn validate_reports_rule_violation() {
    let dir = tempfile::tempdir().unwrap();
    let good = text(&act(&["gen", "--n", "3", "--m", "1", "--seed", "1"]));
    // seed 1 orients the single arc 1 -> 0 with colour 1; colour 3 is intra-bag only
    let bad = write(dir.path(), "bad.act", &good.replace("arc 1 0 1", "arc 1 0 3"));
    let out = act(&["validate", s(&bad)]);
    assert_eq!(code(&out), 4);
    assert!(text(&out).contains("inter-bag arc 1->0 has colour 3"));
}

#[test]
fn validate_plain_tournament() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.act", RAINBOW);
    let out = act(&["validate", s(&path)]);
    assert_eq!(code(&out), 0);
    assert!(text(&out).contains("construction-rule   not-applicable"));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "short.act", "act 1\ncolours 1\nvertices 3\narc 0 1 1\narc 1 2 1\n");
    let out = act(&["solve", s(&path)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 3 arcs"));
    assert_eq!(code(&act(&["validate", "/nonexistent/file.act"])), 2);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&act(&["frobnicate"])), 1);
    assert_eq!(code(&act(&["gen", "--n", "3"])), 1);
    assert_eq!(code(&act(&["bounds"])), 1);
    assert_eq!(code(&act(&["bounds", "--n", "0"])), 1);
}

#[test]
fn check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.act", RAINBOW);
    let yes = act(&["check", s(&path), "-S", "1,2"]);
    assert_eq!(code(&yes), 0);
    assert!(text(&yes).contains("absorbing          yes"));
    let no = act(&["check", s(&path), "-S", "2"]);
    assert_eq!(code(&no), 4);
    assert!(text(&no).contains("unabsorbed         0"));
    assert_eq!(code(&act(&["check", s(&path), "-S", "7"])), 1);
}

#[test]
fn absorb_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.act", RAINBOW);
    let out = text(&act(&["absorb", s(&path), "--stats"]));
    assert!(out.contains("absorbed-pairs      3"));
    assert!(out.contains("2                   3"));
    let out = text(&act(&["absorb", s(&path), "--colour", "1"]));
    assert!(out.contains("reachable-pairs     1"));
}

#[test]
fn solve_reports_and_budget_stop() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "r.act", RAINBOW);
    let out = act(&["solve", s(&path)]);
    assert_eq!(code(&out), 0);
    assert!(text(&out).contains("optimum             2"));
    let brute = act(&["solve", s(&path), "--brute"]);
    assert!(text(&brute).contains("witness             0,1"));
    let stopped = act(&["solve", s(&path), "--budget", "0"]);
    assert_eq!(code(&stopped), 3);
    assert!(text(&stopped).contains("budget-exhausted"));
}

#[test]
fn bounds_tables() {
    let out = text(&act(&["bounds", "--n", "3", "--m", "2"]));
    assert!(out.contains("certified-by-bound m (union)     3"));
    let row = out.lines().last().unwrap();
    assert_eq!(row.split_whitespace().collect::<Vec<_>>(), ["2", "0", "1.38629", "no"]);
    let sweep = text(&act(&["bounds", "--sweep", "5", "6"]));
    assert!(sweep.contains("   5                     6      0.419263"));
    assert_eq!(code(&act(&["bounds", "--sweep", "6", "5"])), 1);
}

#[test]
fn hunt_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.cert");
    let hunt = act(&["hunt", "--n", "3", "--m", "10", "--trials", "10", "-o", s(&cert)]);
    assert_eq!(code(&hunt), 0);
    assert!(String::from_utf8_lossy(&hunt.stderr).contains("certified"));
    assert_eq!(code(&act(&["verify-cert", s(&cert)])), 0);

    let instance = dir.path().join("i.act");
    let body = std::fs::read_to_string(&cert).unwrap();
    let seed = body.lines().find_map(|l| l.strip_prefix("seed ")).unwrap().to_string();
    act(&["gen", "--n", "3", "--m", "10", "--seed", &seed, "-o", s(&instance)]);
    assert_eq!(code(&act(&["verify-cert", s(&cert), "--instance", s(&instance)])), 0);

    // Flipping one arc changes the digest.
    let original = std::fs::read_to_string(&instance).unwrap();
    let line = original.lines().find(|l| l.starts_with("arc ")).unwrap();
    let f: Vec<&str> = line.split_whitespace().collect();
    let flipped = format!("arc {} {} {}", f[2], f[1], f[3]);
    let tampered = write(dir.path(), "t.act", &original.replacen(line, &flipped, 1));
    assert_eq!(code(&act(&["verify-cert", s(&cert), "--instance", s(&tampered)])), 2);

    let wrong_seed = write(dir.path(), "w.cert", &body.replace(&format!("seed {seed}\n"), "seed 999\n"));
    let out = act(&["verify-cert", s(&wrong_seed)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("digest mismatch"));
}

#[test]
fn refuted_claim_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.cert");
    assert_eq!(code(&act(&["hunt", "--n", "2", "--m", "3", "-o", s(&cert)])), 0);
    let inflated = std::fs::read_to_string(&cert).unwrap().replace("optimum-at-least 1", "optimum-at-least 2");
    let path = write(dir.path(), "x.cert", &inflated);
    let out = act(&["verify-cert", s(&path)]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("claim refuted"));
}

#[test]
fn hunt_guard_and_failures() {
    assert_eq!(code(&act(&["hunt", "--n", "5", "--m", "200"])), 3);
    // m = 1 with p = 2: two vertices, one always absorbs the other.
    assert_eq!(code(&act(&["hunt", "--n", "3", "--m", "1", "--trials", "3"])), 4);
}
