use std::path::Path;
use std::process::{Command, Output};

use vandiver_core::cache::ScanRecord;
use vandiver_core::residue_symbols::SymbolReport;

fn vandiver(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vandiver"))
        .args(args)
        .env_remove("VANDIVER_JOBS")
        .env_remove("VANDIVER_EXACT_JOBS")
        .env_remove("VANDIVER_CACHE_DIR")
        .env_remove("VANDIVER_FORMAT")
        .env_remove("VANDIVER_MEMORY_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn expp_golden_lines() {
    let o = vandiver(&["expp", "--p", "53"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "p=53 el=107 c=2 g=2 expp:10,34\n");

    let o = vandiver(&["expp", "--p", "13"]);
    assert_eq!(stdout(&o), "p=13 el=53 c=2 g=2\n");

    let o = vandiver(&["expp", "--p", "197"]);
    assert_eq!(stdout(&o), "p=197 el=3547 c=2 g=2 expp:62\n");
}

#[test]
fn expp_range_keeps_input_order() {
    let o = vandiver(&["--jobs", "2", "expp", "--p", "3", "--p-max", "30"]);
    let ps: Vec<u32> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap()[2..].parse().unwrap())
        .collect();
    assert_eq!(ps, vec![3, 5, 7, 11, 13, 17, 19, 23, 29]);
}

#[test]
fn rank_trace_symbol_golden_lines() {
    let o = vandiver(&["rank", "--p", "7"]);
    assert_eq!(stdout(&o), "p=7 r=3 elp=113\n");

    let o = vandiver(&["trace", "--p", "7", "--l", "29"]);
    assert_eq!(stdout(&o), "el=29 f=7 R=x^7 + x^6 + 2*x^5 + 5*x + 1\n");

    let o = vandiver(&["symbol", "--p", "37", "--n", "32", "--l", "149"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "p=37 el=149 v=259 u=102\nSn NON local pth power at L\n"
    );
}

#[test]
fn criterion_exit_codes() {
    let o = vandiver(&["vandiver", "--p", "37", "--mode", "b"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("p=37 mode=b N=1 el=149 "));

    let o = vandiver(&["vandiver", "--p", "11"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("N=2 el=67"));

    let o = vandiver(&["vandiver", "--p", "13", "--mode", "a"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(regular prime)"));

    // 157 needs five witnesses; one is not enough.
    let o = vandiver(&["vandiver", "--p", "157", "--count", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("not established"));

    let o = vandiver(&["vandiver", "--p", "157", "--mode", "min", "--l-max", "3000"]);
    assert_eq!(code(&o), 3);
    assert_eq!(stdout(&o), "157 none\n");
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&vandiver(&["expp", "--p", "9"])), 2);
    assert_eq!(code(&vandiver(&["expp", "--p", "7", "--l", "11"])), 2);
    assert_eq!(code(&vandiver(&["--jobs", "0", "expp", "--p", "7"])), 2);
    assert_eq!(code(&vandiver(&["expp", "--p", "7", "--c", "2"])), 2);
    assert_eq!(
        code(&vandiver(&[
            "expp", "--p", "7", "--l", "29", "--count", "3"
        ])),
        2
    );
}

#[test]
fn unusable_cache_dir_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let o = vandiver(&["--cache-dir", file.to_str().unwrap(), "expp", "--p", "7"]);
    assert_eq!(code(&o), 4);
}

fn jsonl_lines(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn warm_cache_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for fmt in ["text", "json", "csv"] {
        let args = [
            "--cache-dir",
            d,
            "--format",
            fmt,
            "expp",
            "--p",
            "37",
            "--count",
            "25",
        ];
        let cold = vandiver(&args);
        let mut warm_args = vec!["--resume"];
        warm_args.extend_from_slice(&args);
        let warm = vandiver(&warm_args);
        assert_eq!(code(&cold), 0);
        assert_eq!(cold.stdout, warm.stdout, "format {fmt}");
    }
    // Reruns append nothing new.
    assert_eq!(jsonl_lines(&dir.path().join("expp-p37.jsonl")), 25);

    let args = [
        "--cache-dir",
        d,
        "--resume",
        "trace",
        "--p",
        "7",
        "--count",
        "6",
    ];
    let cold = vandiver(&args);
    let warm = vandiver(&args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(jsonl_lines(&dir.path().join("traces-p7.jsonl")), 6);
}

#[test]
fn flag_beats_env_beats_default() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_vandiver"));
        c.env_remove("VANDIVER_FORMAT");
        if let Some(f) = env {
            c.env("VANDIVER_FORMAT", f);
        }
        String::from_utf8(c.args(args).output().unwrap().stdout).unwrap()
    };
    let text = "p=53 el=107 c=2 g=2 expp:10,34\n";
    assert_eq!(run(None, &["expp", "--p", "53"]), text);
    assert!(run(Some("csv"), &["expp", "--p", "53"]).starts_with("p,l,c,g,expp\n"));
    assert_eq!(
        run(Some("csv"), &["--format", "text", "expp", "--p", "53"]),
        text
    );

    let o = Command::new(env!("CARGO_BIN_EXE_vandiver"))
        .env("VANDIVER_JOBS", "0")
        .args(["expp", "--p", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_vandiver"))
        .env("VANDIVER_JOBS", "0")
        .args(["--jobs", "1", "expp", "--p", "5"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_outputs_round_trip() {
    let o = vandiver(&["--format", "json", "expp", "--p", "53"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["l"], 107);
    assert_eq!(v["expp"], serde_json::json!([10, 34]));
    let rec: ScanRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(serde_json::to_string(&rec).unwrap(), stdout(&o).trim());

    let o = vandiver(&["--format", "json", "vandiver", "--p", "11"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["mode"], "b");
    assert_eq!(v["holds"], true);
    assert_eq!(v["witnesses"], serde_json::json!([23, 67]));

    let o = vandiver(&[
        "--format", "json", "symbol", "--p", "37", "--n", "32", "--l", "149",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["v"], 259);
    assert_eq!(v["u"], 102);
    assert_eq!(v["classification"], "non_local_at_L");
    let report: SymbolReport = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(serde_json::to_string(&report).unwrap(), stdout(&o).trim());

    let o = vandiver(&["--format", "json", "trace", "--p", "7", "--l", "29"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["f"], 7);
    assert_eq!(v["l"], 29);
}

#[test]
fn memory_cap_is_enforced() {
    let o = vandiver(&[
        "--memory-cap",
        "64",
        "symbol",
        "--p",
        "37",
        "--n",
        "32",
        "--l",
        "149",
    ]);
    assert_eq!(code(&o), 1);
}
