use std::path::Path;
use std::process::{Command, Output};

fn rosbid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rosbid")).args(args).output().expect("spawn rosbid")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn simulate_writes_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = rosbid(&[
        "simulate", "--input", "example1", "--algo", "ac", "--T", "100000", "--trials", "200", "--seed", "42", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), rosbid::CSV_HEADER.join(","));
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(&r[0][..5], ["example1", "ac", "100000", "200", "42"]);
    let regret: f64 = r[0][7].parse().unwrap();
    assert!(regret > 0.0 && regret / 1e5 < 0.02, "regret {regret}");
    assert_eq!(r[0][10], "0.0");
}

#[test]
fn opt_prints_theta_star_block() {
    let o = rosbid(&["opt", "--input", "example1"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("theta_star=0.6 pi_star=1.0 opt_rate=0.333333"), "{text}");
}

#[test]
fn scaling_has_eleven_rows_and_a_footer() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = rosbid(&[
        "scaling", "--input", "lemma4", "--algo", "apd", "--t-grid", "1024:1048576:x2", "--trials", "100", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&out);
    assert_eq!(r.len(), 12);
    assert_eq!(r[0][2], "1024");
    assert_eq!(r[10][2], "1048576");
    let footer = &r[11];
    assert_eq!(footer[2], "fit");
    assert_eq!(footer[8], "fit:regret");
    // APD on lemma4 loses each slot at value 1/2, so regret is half the
    // lost count and has the same exponent.
    let beta: f64 = footer[5].parse().unwrap();
    let r2: f64 = footer[6].parse().unwrap();
    assert!((0.4..=0.6).contains(&beta) && r2 >= 0.95, "beta {beta} r2 {r2}");
}

#[test]
fn same_flags_same_bytes() {
    let args = ["simulate", "--input", "thm2", "--variant", "2", "--algo", "ac,apd", "--T", "3000", "--trials", "20"];
    let a = rosbid(&args);
    let b = rosbid(&[&args[..], &["--workers", "5"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("thm2/input2,ac,3000,20,42,"));
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mine.txt");
    std::fs::write(&path, "label: mine\n0.5 0.4 1/2\n0.5 0.8 1/2\n").unwrap();
    let o = rosbid(&["opt", "--input", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("input=mine"));
    assert!(text.contains("theta_star=0.8 pi_star=0.3333333333333"), "{text}");
    let o = rosbid(&["simulate", "--input", path.to_str().unwrap(), "--algo", "as", "--T", "50", "--trials", "2"]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("mine,as,50,2,42,"));
}

#[test]
fn usage_errors_exit_two_and_name_the_token() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0.5 0.4 0.5\n0.5 oops 0.5\n").unwrap();
    let cases: [(&[&str], &str); 5] = [
        (&["opt", "--input", "example9"], "'example9'"),
        (&["opt", "--input", bad.to_str().unwrap()], "'oops'"),
        (&["scaling", "--input", "lemma4", "--algo", "apd", "--t-grid", "1024:4096:y2"], "'y2'"),
        (&["simulate", "--input", "lemma4", "--algo", "as", "--T", "100", "--feedback", "partial"], "'partial'"),
        (&["simulate", "--input", "lemma4", "--algo", "learn", "--T", "100", "--feedback", "bandit"], "feedback"),
    ];
    for (args, token) in cases {
        let o = rosbid(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(token), "{args:?}: {}", stderr(&o));
    }
    let o = rosbid(&["simulate", "--input", "lemma4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("r.csv");
    let o = rosbid(&["simulate", "--input", "lemma4", "--algo", "as", "--T", "10", "--trials", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert!(rosbid(&["--help"]).status.success());
    assert!(rosbid(&["simulate", "--help"]).status.success());
}
