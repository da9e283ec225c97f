use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn fields(&self) -> BTreeMap<String, String> {
        self.stdout.lines().filter_map(|l| l.split_once(": ")).map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn get(&self, key: &str) -> String {
        self.fields().remove(key).unwrap_or_else(|| panic!("no `{key}` in\n{}", self.stdout))
    }
}

fn twintour(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_twintour")).current_dir(dir).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn paley(p: usize) -> String {
    let q: Vec<usize> = (1..p).map(|x| x * x % p).collect();
    let mut s = format!("tournament {p}\n");
    for i in 0..p {
        s.extend((0..p).map(|j| if q.contains(&((j + p - i) % p)) { '1' } else { '0' }));
        s.push('\n');
    }
    s
}

const CYCLE: &str = "tournament 3\n010\n001\n100\n";

#[test]
fn three_cycle_is_self_isomorphic() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    let r = twintour(d.path(), &["iso", "a.trn", "a.trn", "--k", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.get("aut_order"), "3");
    assert_eq!(r.get("isomorphic"), "yes");
    let o = twintour(d.path(), &["iso", "a.trn", "a.trn", "--k", "2", "--oracle"]);
    assert_eq!(o.get("aut_order"), "3");
}

#[test]
fn cycle_against_chain_is_not_isomorphic() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    file(&d, "b.trn", "tournament 3\n011\n001\n000\n");
    let r = twintour(d.path(), &["iso", "a.trn", "b.trn", "--k", "3"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.get("isomorphic"), "no");
}

#[test]
fn homogeneous_tournament_beyond_bound_exits_two() {
    let d = TempDir::new().unwrap();
    file(&d, "p.trn", &paley(11));
    let r = twintour(d.path(), &["iso", "p.trn", "p.trn", "--k", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.fields().contains_key("twin_width_exceeded_level"));
    let r = twintour(d.path(), &["iso", "p.trn", "p.trn", "--k", "11"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.get("aut_order"), "55");
}

#[test]
fn torus_certificate_verifies() {
    let d = TempDir::new().unwrap();
    let g = twintour(d.path(), &["gen", "grid", "--n", "4", "--m", "4", "--out", "grid"]);
    assert_eq!(g.code, 0, "{}", g.stderr);
    let r = twintour(d.path(), &["tww-verify", "grid.red", "grid.seq", "--bound", "6"]);
    assert_eq!(r.code, 0);
    assert!(r.get("width").parse::<usize>().unwrap() <= 6);
    let s = twintour(d.path(), &["gen", "grid", "--n", "4", "--m", "4", "--out", "gs", "--shuffle", "--seed", "9"]);
    assert_eq!(s.get("contraction_width"), g.get("contraction_width"));
}

#[test]
fn wall_hard_pair_is_not_isomorphic() {
    let d = TempDir::new().unwrap();
    for (twist, out) in [("0", "t2"), ("1", "t2p")] {
        let g = twintour(d.path(), &["gen", "cfi", "--base", "wall", "--k", "2", "--twist", twist, "--out", out]);
        assert_eq!(g.code, 0, "{}", g.stderr);
        assert_eq!(g.get("n"), "324");
        assert!(g.get("contraction_width").parse::<usize>().unwrap() <= 35);
    }
    let r = twintour(d.path(), &["iso", "t2.trn", "t2p.trn", "--k", "35"]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
    let w = twintour(d.path(), &["wl", "t2.trn", "--pair", "t2p.trn", "--k", "2"]);
    assert_eq!(w.get("distinguished"), "no");
}

#[test]
fn k4_pair_with_relabelling() {
    let d = TempDir::new().unwrap();
    twintour(d.path(), &["gen", "cfi", "--base", "k4", "--twist", "1", "--out", "a"]);
    twintour(d.path(), &["gen", "cfi", "--base", "k4", "--twist", "1", "--out", "b", "--shuffle", "--seed", "4"]);
    twintour(d.path(), &["gen", "cfi", "--base", "k4", "--twist", "2", "--out", "c"]);
    let r = twintour(d.path(), &["iso", "a.trn", "b.trn", "--k", "35"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.get("aut_order"), "27");
    assert_eq!(twintour(d.path(), &["iso", "a.trn", "c.trn", "--k", "35"]).code, 1);
    assert_eq!(twintour(d.path(), &["iso", "a.trn", "c.trn", "--k", "35", "--oracle"]).code, 1);
    twintour(d.path(), &["gen", "cfi", "--base", "k4", "--out", "z"]);
    assert_eq!(twintour(d.path(), &["iso", "a.trn", "z.trn", "--k", "35"]).code, 1);
    assert_eq!(twintour(d.path(), &["iso", "a.trn", "z.trn", "--k", "35", "--oracle"]).code, 1);
}

#[test]
fn generation_is_seed_deterministic() {
    let d = TempDir::new().unwrap();
    let a = twintour(d.path(), &["gen", "random", "--n", "12", "--seed", "7", "--out", "x"]);
    let b = twintour(d.path(), &["gen", "random", "--n", "12", "--seed", "7", "--out", "y"]);
    let c = twintour(d.path(), &["gen", "random", "--n", "12", "--seed", "8", "--out", "z"]);
    assert_eq!(a.get("tournament_sha256"), b.get("tournament_sha256"));
    assert_ne!(a.get("tournament_sha256"), c.get("tournament_sha256"));
    let r = twintour(d.path(), &["iso", "x.trn", "y.trn", "--k", "12"]);
    assert_eq!(r.get("a_sha256"), a.get("tournament_sha256"));
}

#[test]
fn width_chain_through_files() {
    let d = TempDir::new().unwrap();
    twintour(d.path(), &["gen", "random", "--n", "8", "--seed", "1", "--out", "r"]);
    file(&d, "o", "order 8\n0 1 2 3 4 5 6 7\n");
    let a = twintour(d.path(), &["width", "convert", "r.trn", "o", "--from", "order", "--to", "dpd", "--out", "r.dpd"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let b = twintour(
        d.path(),
        &["width", "convert", "r.trn", "r.dpd", "--from", "dpd", "--to", "contraction", "--out", "r.seq"],
    );
    let (cut, dpw, tww): (usize, usize, usize) = (
        a.get("cut_width").parse().unwrap(),
        b.get("dpd_width").parse().unwrap(),
        b.get("contraction_width").parse().unwrap(),
    );
    assert!(tww <= dpw && dpw <= cut);
    let v = twintour(d.path(), &["tww-verify", "r.trn", "r.seq"]);
    assert_eq!(v.get("width"), tww.to_string());
    twintour(d.path(), &["width", "convert", "r.trn", "r.dpd", "--from", "dpd", "--to", "dtd", "--out", "r.dtd"]);
    let t = twintour(d.path(), &["width", "convert", "r.trn", "r.dtd", "--from", "dtd", "--to", "contraction"]);
    assert_eq!(t.code, 0, "{}", t.stderr);
    let k: u32 = t.get("dtd_width").parse().unwrap();
    assert!(t.get("contraction_width").parse::<usize>().unwrap() < 1 << (k + 2));
    let bad = twintour(d.path(), &["width", "convert", "r.trn", "r.dtd", "--from", "dtd", "--to", "dpd"]);
    assert_eq!(bad.code, 64);
}

#[test]
fn invalid_decomposition_exits_one() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    file(&d, "bad.dpd", "dpd 2\n0\n1\n");
    let r = twintour(d.path(), &["width", "convert", "a.trn", "bad.dpd", "--from", "dpd", "--to", "dtd"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.get("valid"), "no");
}

#[test]
fn malformed_input_reports_position() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    file(&d, "bad.trn", "tournament 3\n010\n011\n100\n");
    let r = twintour(d.path(), &["iso", "bad.trn", "a.trn", "--k", "2"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 3, column 2"), "{}", r.stderr);
    file(&d, "bad.seq", "contractions 3\n0 1\n0 7\n");
    let r = twintour(d.path(), &["tww-verify", "a.trn", "bad.seq"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("line 3, column 3"), "{}", r.stderr);
}

#[test]
fn usage_errors_exit_64() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    assert_eq!(twintour(d.path(), &["frobnicate"]).code, 64);
    assert_eq!(twintour(d.path(), &["iso", "a.trn"]).code, 64);
    assert_eq!(twintour(d.path(), &["iso", "a.trn", "a.trn", "--k", "0"]).code, 64);
    assert_eq!(twintour(d.path(), &["iso", "missing.trn", "a.trn", "--k", "2"]).code, 64);
}

#[test]
fn json_carries_the_same_keys() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    let text = twintour(d.path(), &["wl", "a.trn", "--pair", "a.trn"]);
    let json = twintour(d.path(), &["--json", "wl", "a.trn", "--pair", "a.trn"]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let fields = text.fields();
    assert_eq!(keys, fields.keys().collect::<Vec<_>>());
    assert_eq!(v["distinguished"], "no");
}

#[test]
fn partition_sequence_and_exact_width() {
    let d = TempDir::new().unwrap();
    twintour(d.path(), &["gen", "circular", "--m", "3", "--out", "c"]);
    let r = twintour(d.path(), &["partition-seq", "c.trn", "--k", "1", "--out", "c.ps"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let l: usize = r.get("length").parse().unwrap();
    assert_eq!(r.get(&format!("q_{l}")), "0 1 2 3 4 5 6");
    let text = std::fs::read_to_string(d.path().join("c.ps")).unwrap();
    assert!(text.starts_with(&format!("partitions {l}\n")));
    let e = twintour(d.path(), &["tww-exact", "c.trn", "--out", "c.opt"]);
    assert_eq!(e.get("twin_width"), "1");
    assert_eq!(twintour(d.path(), &["tww-verify", "c.trn", "c.opt"]).get("width"), "1");
}

#[test]
fn thread_cap_is_honoured() {
    let d = TempDir::new().unwrap();
    file(&d, "a.trn", CYCLE);
    let out = Command::new(env!("CARGO_BIN_EXE_twintour"))
        .current_dir(d.path())
        .env("TWINTOUR_THREADS", "1")
        .args(["wl", "a.trn"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_twintour"))
        .current_dir(d.path())
        .env("TWINTOUR_THREADS", "many")
        .args(["wl", "a.trn"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}
