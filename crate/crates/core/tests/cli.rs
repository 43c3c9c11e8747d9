use std::path::Path;
use std::process::Command;

use markov_lis::cli::output::{parse_records, Cell, Row};
use markov_lis::cli::{self, EXIT_DOMAIN, EXIT_FAIL, EXIT_OK, EXIT_OUTPUT, EXIT_USAGE};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["markov-lis"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn num(row: &Row, key: &str) -> f64 {
    match &row[key] {
        Cell::Num(x) => *x,
        other => panic!("{key}: {other:?}"),
    }
}

fn letters(stdout: &str) -> Vec<u8> {
    parse_records(stdout)
        .unwrap()
        .iter()
        .map(|r| num(r, "letter") as u8)
        .collect()
}

#[test]
fn simulate_degenerate_chains() {
    let frozen = run(&[
        "simulate", "--a", "0", "--b", "0", "--n", "3", "--seed", "1", "--init", "point1",
    ]);
    assert_eq!(frozen.code, EXIT_OK, "{}", frozen.stderr);
    assert_eq!(letters(&frozen.stdout), vec![1, 1, 1]);

    let alternating = run(&[
        "simulate", "--a", "1", "--b", "1", "--n", "4", "--seed", "1", "--init", "point1",
    ]);
    assert_eq!(letters(&alternating.stdout), vec![2, 1, 2, 1]);
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--a", "0.3", "--b", "0.6", "--n", "200", "--seed", "9", "--walk", "--shape",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.code, EXIT_OK);
    assert_eq!(first.stdout, second.stdout);
    let rows = parse_records(&first.stdout).unwrap();
    assert_eq!(rows.len(), 200);
    let last = rows.last().unwrap();
    assert_eq!(num(last, "count1") + num(last, "count2"), 200.0);
    assert_eq!(num(last, "r1") + num(last, "r2"), 200.0);
    assert_eq!(num(last, "s"), num(last, "count1") - num(last, "count2"));
}

#[test]
fn simulate_json_and_csv_carry_the_same_payload() {
    let base = [
        "simulate", "--a", "0.8", "--b", "0.1", "--n", "50", "--seed", "4", "--walk",
    ];
    let json = run(&[&base[..], &["--format", "json"]].concat());
    let csv = run(&[&base[..], &["--format", "csv"]].concat());
    assert_eq!(
        parse_records(&json.stdout).unwrap(),
        parse_records(&csv.stdout).unwrap()
    );
    assert!(csv
        .stdout
        .starts_with("schema_version,kind,a,b,n,seed,init,index,letter,count1,count2,s"));
}

#[test]
fn laws_text_output() {
    let sym = run(&["laws", "--a", "0.5", "--b", "0.5"]);
    assert_eq!(sym.code, EXIT_OK);
    assert!(sym.stdout.contains("kind=brownian-functional"));
    assert!(sym.stdout.contains("scale=1\n"));
    assert!(sym.stdout.contains("centering=n/2"));

    let normal = run(&["laws", "--a", "0.3", "--b", "0.6"]);
    assert!(normal.stdout.contains("kind=normal"));
    assert!(normal.stdout.contains("variance=0.271605\n"));

    let degenerate = run(&["laws", "--a", "1", "--b", "1"]);
    assert!(degenerate.stdout.contains("kind=degenerate"));
}

#[test]
fn laws_grid_table() {
    let out = run(&[
        "laws", "--a", "0.5", "--b", "0.5", "--grid", "0:3:0.5", "--format", "json",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let rows = parse_records(&out.stdout).unwrap();
    assert_eq!(rows.len(), 7);
    let at_one = rows.iter().find(|r| num(r, "y") == 1.0).unwrap();
    assert!((num(at_one, "density") - 0.863855).abs() < 1e-6);
    let cdfs: Vec<f64> = rows.iter().map(|r| num(r, "cdf")).collect();
    assert!(cdfs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["simulate", "--a", "0.5"]).code, EXIT_USAGE);
    assert_eq!(
        run(&["simulate", "--a", "x", "--b", "0.5", "--n", "3", "--seed", "1"]).code,
        EXIT_USAGE
    );
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    let domain = run(&["simulate", "--a", "1.5", "--b", "0.5", "--n", "3", "--seed", "1"]);
    assert_eq!(domain.code, EXIT_DOMAIN);
    assert!(domain.stderr.contains("error"));
    assert_eq!(run(&["laws", "--a", "-0.1", "--b", "0.5"]).code, EXIT_DOMAIN);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("drift.json");
    let drift = run(&[
        "experiment",
        "--kind",
        "drift-vanish",
        "--a",
        "0.5",
        "--b",
        "0.5",
        "--n",
        "100",
        "--trials",
        "10",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(drift.code, EXIT_DOMAIN);

    let unwritable = dir.path().join("missing").join("x.json");
    let io = run(&[
        "experiment",
        "--kind",
        "li-law",
        "--a",
        "0.5",
        "--b",
        "0.5",
        "--n",
        "10",
        "--trials",
        "10",
        "--seed",
        "1",
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(io.code, EXIT_OUTPUT);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_markov-lis");
    let ok = Command::new(bin)
        .args(["laws", "--a", "0.3", "--b", "0.6"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("kind=normal"));
    let bad = Command::new(bin)
        .args(["laws", "--a", "2", "--b", "0.6"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_DOMAIN));
}

fn experiment(dir: &Path, name: &str, args: &[&str]) -> (Run, String) {
    let path = dir.join(name);
    let mut full = vec!["experiment"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let r = run(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (r, text)
}

#[test]
fn moment_check_table_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--kind",
        "moment-check",
        "--a",
        "0.3",
        "--b",
        "0.6",
        "--n",
        "10",
        "--trials",
        "20000",
        "--seed",
        "3",
        "--k-list",
        "1,2,10",
    ];
    let (json_run, json) = experiment(dir.path(), "m.json", &[&args[..], &["--format", "json"]].concat());
    assert_eq!(json_run.code, EXIT_OK, "{}{}", json_run.stdout, json_run.stderr);
    assert!(json_run.stdout.contains("result=PASS"));
    let rows = parse_records(&json).unwrap();
    let k2 = rows.iter().find(|r| num(r, "k") == 2.0).unwrap();
    assert!((num(k2, "exact_var") - 1.955556).abs() < 1e-6);

    let (_, csv) = experiment(dir.path(), "m.csv", &[&args[..], &["--format", "csv"]].concat());
    assert_eq!(parse_records(&csv).unwrap(), rows);

    for name in ["m.json", "m.csv"] {
        let p = dir.path().join(name);
        let top = run(&["--validate", p.to_str().unwrap()]);
        assert_eq!(top.code, EXIT_OK, "{}", top.stdout);
        assert!(top.stdout.contains("valid: 3 records"));
        assert_eq!(run(&["validate", p.to_str().unwrap()]).code, EXIT_OK);
    }
}

#[test]
fn experiments_round_trip_and_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &[
            "--kind", "li-law", "--a", "0.5", "--b", "0.5", "--n", "400", "--trials", "300", "--seed", "5",
        ],
        &[
            "--kind",
            "shape-joint",
            "--a",
            "0.3",
            "--b",
            "0.6",
            "--n",
            "400",
            "--trials",
            "300",
            "--seed",
            "5",
        ],
        &[
            "--kind",
            "drift-vanish",
            "--a",
            "0.3",
            "--b",
            "0.6",
            "--n",
            "1000",
            "--trials",
            "300",
            "--seed",
            "5",
        ],
        &[
            "--kind", "li-law", "--a", "1", "--b", "1", "--n", "101", "--trials", "5", "--seed", "5",
        ],
    ];
    for (i, args) in cases.iter().enumerate() {
        let (first, text) = experiment(dir.path(), &format!("{i}.json"), args);
        assert!(first.code == EXIT_OK || first.code == EXIT_FAIL, "{}", first.stderr);
        assert!(first.stdout.contains("result="));
        let (second, again) = experiment(dir.path(), &format!("{i}.json"), args);
        assert_eq!(first.stdout, second.stdout);
        assert_eq!(text, again);
        let (_, csv) = experiment(
            dir.path(),
            &format!("{i}.csv"),
            &[&args[..], &["--format", "csv"]].concat(),
        );
        assert_eq!(parse_records(&csv).unwrap(), parse_records(&text).unwrap());
        let p = dir.path().join(format!("{i}.json"));
        assert_eq!(run(&["--validate", p.to_str().unwrap()]).code, EXIT_OK);
    }
}

#[test]
fn validate_rejects_tampered_files() {
    let dir = tempfile::tempdir().unwrap();
    let (_, text) = experiment(
        dir.path(),
        "li.json",
        &[
            "--kind", "li-law", "--a", "0.5", "--b", "0.5", "--n", "50", "--trials", "4", "--seed", "1",
        ],
    );
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        text.replace("\"schema_version\": \"1\"", "\"schema_version\": \"7\""),
    )
    .unwrap();
    let r = run(&["--validate", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FAIL);
    assert!(r.stdout.starts_with("invalid"));
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = run(&["laws", "--a", "0.3", "--b", "0.6", "--format", "csv"]);
    let line = out.stdout.lines().nth(1).unwrap();
    let variance = line.split(',').nth(8).unwrap();
    let (mantissa, _) = variance.split_once('e').unwrap();
    assert_eq!(mantissa.len(), 18, "{variance}");
    assert!((variance.parse::<f64>().unwrap() - 22.0 / 81.0).abs() < 1e-15);
}

#[test]
fn full_size_li_law_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (r, text) = experiment(
        dir.path(),
        "li.csv",
        &[
            "--kind", "li-law", "--a", "0.5", "--b", "0.5", "--n", "10000", "--trials", "20000", "--seed", "1",
            "--format", "csv",
        ],
    );
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    let d: f64 = r
        .stdout
        .split("D=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(d <= 0.02);
    assert_eq!(text.lines().count(), 20_001);
}
