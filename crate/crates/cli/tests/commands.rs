use std::process::{Command, Output};

fn arf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arf"))
        .args(args)
        .output()
        .expect("run arf")
}

fn stdout(args: &[&str]) -> String {
    let out = arf(args);
    assert!(
        out.status.success(),
        "arf {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    arf(args).status.code().expect("exit code")
}

#[test]
fn numerical_listing() {
    assert_eq!(stdout(&["numerical", "4"]), "[2,2]\n[4]\n");
    assert_eq!(stdout(&["numerical", "0"]), "[1]\n");
    assert_eq!(stdout(&["numerical", "1", "--count"]), "0\n");
    assert_eq!(stdout(&["numerical", "10", "--count"]), "10\n");
    assert_eq!(code(&["numerical", "-3"]), 2);
}

#[test]
fn good_counts() {
    assert_eq!(stdout(&["good", "4,5", "--count"]), "9\n");
    assert_eq!(stdout(&["good", "3,2,4", "--twisted", "--count"]), "10\n");
    assert_eq!(stdout(&["good", "3,2,4", "--count"]), "8\n");
    assert_eq!(stdout(&["good", "1,1,1"]).lines().count(), 1);
}

#[test]
fn good_formats() {
    let text = stdout(&["good", "4,5"]);
    assert!(
        text.lines().any(|l| l == "E={[2,2],[3,2]} p=(2) c=(4,5)"),
        "{text}"
    );

    let json = stdout(&["good", "4,5", "--format", "json"]);
    let golden = include_str!("../../core/tests/golden/cond_4_5.jsonl");
    let mut got: Vec<&str> = json.lines().collect();
    let mut want: Vec<&str> = golden.lines().collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);

    let twisted = stdout(&["good", "3,2,4", "--twisted", "--format", "json"]);
    assert_eq!(twisted.lines().count(), 10);
    assert!(twisted.lines().all(|l| l.contains("\"matrix\"")));

    let dot = stdout(&["good", "2,3", "--format", "dot"]);
    assert_eq!(dot.matches("digraph ").count(), 2);
    assert!(dot.contains("n0 [label=\"(1,2)\"];"));
}

#[test]
fn good_rejects_bad_conductors() {
    for c in ["5", "0,3", "3,,2", "3, 2", "x"] {
        assert_eq!(code(&["good", c]), 2, "{c}");
    }
}

#[test]
fn tables() {
    let table = stdout(&["table", "--dim", "2", "--max", "20", "--csv"]);
    let golden = include_str!("../../core/tests/golden/counts_2d_20.csv");
    assert_eq!(table, golden);
    let plain = stdout(&["table", "--dim", "2", "--max", "6"]);
    assert!(plain.lines().last().unwrap().ends_with(" 41"), "{plain}");

    assert_eq!(stdout(&["table", "--dim", "3", "--list", "3,3,3"]), "9\n");
    assert_eq!(
        stdout(&["table", "--dim", "3", "--list", "2,2,2", "--twisted"]),
        "5\n"
    );
    assert_eq!(
        stdout(&["table", "--dim", "3", "--list", "1,1,1", "4,4,4", "--csv"]),
        "conductor,count\n1;1;1,1\n4;4;4,50\n"
    );
    assert_eq!(code(&["table", "--dim", "4", "--max", "3"]), 2);
    assert_eq!(code(&["table", "--dim", "3", "--list", "3,3"]), 2);
}

#[test]
fn verify_reports() {
    let out = stdout(&["verify", "--numerical-max", "30"]);
    assert!(out.starts_with("PASS"), "{out}");
    let out = stdout(&["verify", "3,2,4"]);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    assert!(out.contains("8 untwisted"), "{out}");
    let out = stdout(&["verify", "4,5"]);
    assert!(out.contains("9 trees checked"), "{out}");
    let out = stdout(&["verify", "12"]);
    assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["verify", "0,1"]), 2);
}

#[test]
fn bench_runs() {
    let out = stdout(&["bench", "--max-n", "2"]);
    assert!(out.lines().last().unwrap().starts_with("total"), "{out}");
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["good", "3,3,3", "--twisted", "--format", "json"][..],
        &["good", "4,5", "--format", "dot"],
        &["table", "--dim", "2", "--max", "8"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}
