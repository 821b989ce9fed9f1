use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("pamat-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn pamat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pamat")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = pamat(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let v: Value = serde_json::from_str(&stdout(&full)).unwrap();
    assert_eq!(v["schema"], 1);
    v
}

fn code(args: &[&str]) -> i32 {
    pamat(args).status.code().unwrap()
}

fn count_ones(text: &str) -> usize {
    text.chars().filter(|&c| c == '1').count()
}

#[test]
fn check_reports_containment() {
    let s = Scratch::new("check");
    let i3 = s.file("i3", "100\n010\n001\n");
    assert_eq!(stdout(&["check", "123", &i3]), "contains");
    assert_eq!(stdout(&["check", "312", &i3]), "avoids");
    for (i, body) in ["11000\n11000\n11000\n11111\n11111\n", "11111\n00011\n00011\n00011\n11111\n", "11111\n11111\n10001\n10001\n10001\n"]
        .iter()
        .enumerate()
    {
        let three = s.file(&format!("three{i}"), body);
        assert_eq!(stdout(&["check", "312", &three]), "avoids");
    }
    let built = s.file("built", &stdout(&["construct", "1234", "6", "8"]));
    assert_eq!(stdout(&["check", "1234", &built]), "avoids");
    assert_eq!(json(&["check", "123", &i3])["contains"], true);
}

#[test]
fn max_ones_closed_forms() {
    assert_eq!(stdout(&["max-ones", "123", "6", "6"]), "20");
    assert_eq!(stdout(&["max-ones", "312", "8", "10"]), "32");
    assert_eq!(stdout(&["max-ones", "51234", "8", "8"]), "48 (conjectured)");
    let v = json(&["max-ones", "1234", "5", "7"]);
    assert_eq!(v["value"], 3 * 12 - 9);
    assert_eq!(v["status"], "proven");
}

#[test]
fn unsupported_pattern_exits_one() {
    assert_eq!(code(&["max-ones", "2413", "5", "5"]), 1);
    assert_eq!(code(&["construct", "2413", "5", "5"]), 1);
}

#[test]
fn saturate_reaches_the_extremal_count_from_zero() {
    let s = Scratch::new("saturate");
    let z = s.file("z", &"000000\n".repeat(6));
    for seed in ["0", "7", "123"] {
        let out = stdout(&["saturate", "123", &z, "--seed", seed]);
        assert_eq!(count_ones(&out), 20);
        let back = s.file("back", &out);
        assert_eq!(stdout(&["check", "123", &back]), "avoids");
    }
}

#[test]
fn permanents() {
    let s = Scratch::new("perm");
    let j4 = s.file("j4", &"1111\n".repeat(4));
    assert_eq!(stdout(&["permanent", &j4]), "24");
    assert_eq!(json(&["permanent", &j4])["value"], 24);
    assert_eq!(stdout(&["permanent", &j4, "--avoid", "312"]), "14");
    let v = json(&["permanent", &j4, "--avoid", "312", "--witnesses"]);
    assert_eq!(v["report"]["witnesses"].as_array().unwrap().len(), 14);
}

#[test]
fn decompose_peels_four_paths() {
    let s = Scratch::new("decompose");
    let a = s.file("xyzu", "11111111\n10001111\n10111111\n10101101\n11111011\n11110110\n11101100\n11111000\n");
    let v = json(&["decompose", &a, "-k", "5"]);
    assert_eq!(v["lengths"], serde_json::json!([15, 13, 11, 9]));
}

#[test]
fn construct_identity_and_312() {
    let out = stdout(&["construct", "1234", "6", "8"]);
    assert_eq!(count_ones(&out), 3 * 14 - 9);
    let s = Scratch::new("construct");
    let path = s.file(
        "p",
        "LR\n1,1\n1,2\n1,3\n1,4\n2,4\n3,4\n3,5\n3,6\n3,7\n4,7\n5,7\n6,7\n6,8\n7,8\n8,8\n8,9\n8,10\n9,10\n10,10\n",
    );
    let out = stdout(&["construct", "312", "10", "10", "--path", &path, "--seed", "3889"]);
    assert_eq!(count_ones(&out), 36);
    let shadow = stdout(&["construct", "312", "10", "10", "--path", &path, "--method", "shadow"]);
    assert_eq!(count_ones(&shadow), 36);
    for seed in ["1", "2"] {
        let out = stdout(&["construct", "312", "7", "9", "--seed", seed]);
        assert_eq!(count_ones(&out), 2 * 14);
    }
}

#[test]
fn small_enumerations() {
    assert_eq!(stdout(&["enumerate", "5", "312", "--count"]), "42");
    assert_eq!(stdout(&["extend", "312", "6", "4,6,1"]), "2,3,4,5,6,1");
    assert_eq!(stdout(&["decompose-jn", "3"]).lines().count(), 3);
}

#[test]
fn oracle_commands() {
    let v = json(&["oracle", "max-ones", "312", "4", "4"]);
    assert_eq!(v["report"]["exhaustive_max"], 12);
    assert_eq!(v["report"]["agreement"], true);
    let v = json(&["oracle", "conjecture", "4", "4", "4"]);
    assert_eq!(v["report"]["bound_exact"], true);
    let v = json(&["oracle", "permanent", "312", "3"]);
    assert_eq!(v["report"]["maximum"], 5);
    let v = json(&["oracle", "enumerate-maximal", "312", "3", "3", "--count"]);
    assert!(v["count"].as_u64().unwrap() >= 3);
}

#[test]
fn exit_codes() {
    let s = Scratch::new("codes");
    let bad = s.file("bad", "10x\n010\n");
    assert_eq!(code(&["check", "12", &bad]), 2);
    let ragged = s.file("ragged", "10\n010\n");
    assert_eq!(code(&["check", "12", &ragged]), 2);
    assert_eq!(code(&["check", "12", "/nonexistent/file"]), 2);
    assert_eq!(code(&["check", "122", &bad]), 2);
    assert_eq!(code(&["bogus"]), 2);
    let i3 = s.file("i3", "100\n010\n001\n");
    assert_eq!(code(&["saturate", "12", &i3]), 1);
    assert_eq!(code(&["oracle", "permanent", "312", "7"]), 3);
    assert_eq!(code(&["oracle", "max-ones", "312", "6", "6"]), 3);
    for body in ["", "\n\n", "102\n", "1 1\n0 1 1\n", "abc\n", "11\n1\n"] {
        let f = s.file("fuzz", body);
        assert_eq!(code(&["check", "12", &f]), 2, "{body:?}");
        assert_eq!(code(&["saturate", "12", &f]), 2, "{body:?}");
    }
    for word in ["", "0", "11", "13", "1a2", "4,1,2"] {
        assert_eq!(code(&["check", word, &i3]), 2, "{word:?}");
    }
    let path = s.file("path", "XY\n1,1\n");
    assert_eq!(code(&["crucial", &path]), 2);
    let v: Value = serde_json::from_slice(&pamat(&["--format", "json", "oracle", "permanent", "312", "7"]).stdout).unwrap();
    assert_eq!(v["exit_code"], 3);
}
