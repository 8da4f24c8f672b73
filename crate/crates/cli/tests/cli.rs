use std::io::Write;
use std::process::{Command, Output};

use conical_cli::FIXTURE20;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conical"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_with(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eval_matches_fixture_value() {
    let out = run(&["eval", "--x", "1.5", "--m", "0", "--tau", "1", "--function", "r"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("R = ")).unwrap();
    let v: f64 = line[4..].split_whitespace().next().unwrap().parse().unwrap();
    let want = -2.9488097676731037e-2;
    assert!(((v - want) / want).abs() < 5e-12, "{v}");
    assert!(text.contains("status = 0"));
}

#[test]
fn eval_prints_seventeen_digits() {
    let out = run(&["eval", "--x", "2", "--m", "1", "--tau", "5", "--deriv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut longest = 0;
    for name in ["P", "dP", "R", "dR"] {
        let line = text.lines().find(|l| l.starts_with(&format!("{name} = "))).unwrap();
        let v = line.split(" = ").nth(1).unwrap();
        assert!(v.parse::<f64>().unwrap().is_finite(), "{line}");
        let digits = v
            .trim_start_matches(['-', '0', '.'])
            .chars()
            .filter(|c| c.is_ascii_digit())
            .count();
        // trailing zeros are dropped as with printf %.17g
        assert!(digits <= 17, "{line}");
        longest = longest.max(digits);
    }
    assert_eq!(longest, 17);
}

#[test]
fn eval_status_codes() {
    assert_eq!(
        code(&run(&[
            "eval",
            "--x",
            "0.5",
            "--m",
            "0",
            "--tau",
            "1",
            "--function",
            "r"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "eval",
            "--x",
            "1.001",
            "--m",
            "900",
            "--tau",
            "1",
            "--function",
            "r"
        ])),
        1
    );
    assert_eq!(
        code(&run(&[
            "eval",
            "--x",
            "0.5",
            "--m",
            "3",
            "--tau",
            "4",
            "--function",
            "p"
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "eval",
            "--x",
            "2",
            "--m",
            "-1",
            "--tau",
            "1",
            "--function",
            "r"
        ])),
        2
    );
    // the combined routine reports every failure as status 1
    assert_eq!(code(&run(&["eval", "--x", "2", "--m", "-1", "--tau", "1"])), 1);
}

#[test]
fn unparsable_flags_exit_2() {
    assert_eq!(code(&run(&["eval", "--x", "abc", "--m", "0", "--tau", "1"])), 2);
    assert_eq!(code(&run(&["eval", "--x", "1.5", "--tau", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn verify_passes_and_fails_on_budget() {
    let ok = run(&["verify", "--suite", "wronskian", "--samples", "500"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("max error"));
    let tight = run(&[
        "verify",
        "--suite",
        "wronskian",
        "--samples",
        "500",
        "--threshold",
        "1e-16",
        "--budget",
        "0",
    ]);
    assert_eq!(code(&tight), 1);
    let m5 = run(&[
        "verify",
        "--suite",
        "recurrence",
        "--method",
        "kummer",
        "--mmin",
        "5",
        "--mmax",
        "5",
        "--samples",
        "2000",
    ]);
    assert_eq!(code(&m5), 1);
}

#[test]
fn verify_rejects_bad_box() {
    assert_eq!(code(&run(&["verify", "--xmin", "0.5", "--samples", "10"])), 2);
    assert_eq!(
        code(&run(&["verify", "--xmin", "5", "--xmax", "2", "--samples", "10"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "verify",
            "--suite",
            "recurrence",
            "--mmin",
            "0",
            "--samples",
            "10"
        ])),
        2
    );
}

#[test]
fn oracle_suite_on_builtin_and_custom_grid() {
    assert_eq!(code(&run(&["verify", "--suite", "oracle"])), 0);
    let f = temp_with(FIXTURE20);
    assert_eq!(
        code(&run(&[
            "verify",
            "--suite",
            "oracle",
            "--grid",
            f.path().to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "verify",
            "--suite",
            "oracle",
            "--grid",
            "/nonexistent/grid.txt"
        ])),
        3
    );
}

#[test]
fn map_writes_deterministic_csv() {
    let args = [
        "map",
        "--suite",
        "wronskian",
        "--samples",
        "2000",
        "--seed",
        "7",
        "--threshold",
        "1e-14",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(
        comment.starts_with("# suite=wronskian seed=7 samples=2000"),
        "{comment}"
    );
    assert_eq!(lines.next(), Some("x,tau,m,err,region,status"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        assert!(cols[3].parse::<f64>().unwrap() > 1e-14);
    }
    let other = run(&[
        "map",
        "--suite",
        "wronskian",
        "--samples",
        "2000",
        "--seed",
        "8",
        "--threshold",
        "1e-14",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn map_writes_to_file_and_exits_0_even_over_budget() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m5.csv");
    let out = run(&[
        "map",
        "--suite",
        "recurrence",
        "--method",
        "kummer",
        "--mmin",
        "5",
        "--mmax",
        "5",
        "--samples",
        "2000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() > 2);
    assert!(text.lines().skip(2).all(|l| l.ends_with(",kummer,0")));
}

#[test]
fn fixture_command_exit_codes() {
    let good = temp_with(FIXTURE20);
    let out = run(&["fixture", good.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("20 of 20 lines pass"));
    assert_eq!(code(&run(&["fixture", "--path", good.path().to_str().unwrap()])), 0);

    assert_eq!(code(&run(&["fixture", temp_with("").path().to_str().unwrap()])), 3);
    assert_eq!(
        code(&run(&["fixture", temp_with("# nothing\n").path().to_str().unwrap()])),
        3
    );
    assert_eq!(
        code(&run(&["fixture", temp_with("1.5 0 1 2 3\n").path().to_str().unwrap()])),
        3
    );
    assert_eq!(code(&run(&["fixture", "/nonexistent/fixture.txt"])), 3);
    assert_eq!(code(&run(&["fixture"])), 2);
}

#[test]
fn fixture_command_flags_perturbed_line() {
    let lines: Vec<String> = FIXTURE20.lines().map(String::from).collect();
    let idx = lines
        .iter()
        .position(|l| !l.starts_with('#') && !l.trim().is_empty())
        .unwrap();
    let mut cols: Vec<String> = lines[idx].split_whitespace().map(String::from).collect();
    let v: f64 = cols[3].parse().unwrap();
    cols[3] = format!("{:.16e}", v * (1.0 + 1e-10));
    let mut perturbed = lines.clone();
    perturbed[idx] = cols.join(" ");
    let f = temp_with(&perturbed.join("\n"));
    let out = run(&["fixture", f.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let fails: Vec<&str> = text.lines().filter(|l| l.ends_with("FAIL")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with(&format!("line {:>3}", idx + 1)), "{}", fails[0]);
}
