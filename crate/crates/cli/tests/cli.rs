use std::path::PathBuf;

use num_complex::Complex64;
use qfhsp::dft::dft_naive;
use qfhsp_cli::{run, Outcome, EXIT_FAILURE, EXIT_INVALID, EXIT_OK, EXIT_ORACLE};
use serde_json::Value;

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("qfhsp").chain(args.iter().copied()))
}

fn lines(out: &Outcome) -> Vec<Value> {
    out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qfhsp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn simon_from_oracle_file() {
    let f = temp_file("simon.txt", "kind=simon\nn=4\nsecret=11\nseed=3\n");
    let out = cli(&["simon", "--n", "4", "--seed", "7", "--oracle", f.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = &lines(&out)[0];
    assert_eq!(v["result"]["secret"], 11);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["params"]["oracle"], "file");
    assert!(v["result"]["queries"].as_u64().unwrap() > 0);
}

#[test]
fn simon_bit_count_must_match_file() {
    let f = temp_file("simon3.txt", "kind=simon\nn=3\nsecret=5\nseed=1\n");
    let out = cli(&["simon", "--n", "4", "--oracle", f.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID);
}

#[test]
fn verify_ftts_emits_one_bound_report() {
    let out = cli(&["verify", "ftts", "--N", "30", "--R", "4096"]);
    assert_eq!(out.code, EXIT_OK);
    let ls = lines(&out);
    assert_eq!(ls.len(), 1);
    let r = &ls[0]["result"];
    assert_eq!(r["theorem"], "ftts");
    assert_eq!(r["pass"], true);
    assert!(r["measured"].as_f64().unwrap() <= r["bound"].as_f64().unwrap());
    assert_eq!(ls[0]["params"]["M"], 30 * 4096);
    assert_eq!(ls[0]["params"]["M_policy"], "rn");
}

#[test]
fn emitted_matrix_matches_dft() {
    let out = cli(&["qft-exact", "--n", "3", "--emit-matrix", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_bytes());
    let head = rdr.headers().unwrap().clone();
    let col = |name: &str| head.iter().position(|h| h == name).unwrap();
    let (ri, ci, re, im) = (col("result.row"), col("result.col"), col("result.re"), col("result.im"));
    let mut m = vec![vec![Complex64::new(0.0, 0.0); 8]; 8];
    let mut count = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let (r, c): (usize, usize) = (rec[ri].parse().unwrap(), rec[ci].parse().unwrap());
        m[r][c] = Complex64::new(rec[re].parse().unwrap(), rec[im].parse().unwrap());
        count += 1;
    }
    assert_eq!(count, 64);
    for c in 0..8 {
        let mut e = vec![Complex64::new(0.0, 0.0); 8];
        e[c] = Complex64::new(1.0, 0.0);
        let want = dft_naive(&e);
        for r in 0..8 {
            assert!((m[r][c] - want[r]).norm() <= 1e-10);
        }
    }
}

#[test]
fn emit_matrix_refuses_large_n() {
    assert_eq!(cli(&["qft-exact", "--n", "9", "--emit-matrix"]).code, EXIT_INVALID);
}

#[test]
fn invalid_parameters_exit_two_with_one_json_line() {
    for args in [
        &["qft-modn", "--N", "12", "--R", "3", "--M", "100"][..],
        &["qft-modn", "--N", "12", "--R", "4"],
        &["qft-modn", "--N", "12", "--R", "4", "--M", "10"],
        &["qft-chirpz", "--N", "12", "--eps", "1.5"],
        &["qft-parallel", "--n", "6", "--k", "2"],
        &["qft-aqft", "--n", "4", "--kmax", "1"],
        &["sample-unknown", "--N", "9", "--M", "8", "--T", "4", "--samples", "1"],
        &["verify", "fsl", "--N", "8"],
        &["verify", "circulant", "--N", "8", "--M", "40"],
        &["hsp", "--orders", "3,5"],
        &["period-z", "--period", "80", "--T", "64"],
        &["no-such-command"],
        &["qft-exact"],
    ] {
        let out = cli(args);
        assert_eq!(out.code, EXIT_INVALID, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
        assert_eq!(out.stderr.lines().count(), 1, "{args:?}");
        let v: Value = serde_json::from_str(out.stderr.trim()).unwrap();
        assert_eq!(v["error"], "invalid_input");
        assert_eq!(v["exit_code"], 2);
    }
}

#[test]
fn oracle_file_errors_exit_three() {
    let missing = std::env::temp_dir().join("qfhsp-cli-does-not-exist.txt");
    let malformed = temp_file("bad.txt", "kind=simon\nn=four\n");
    let inconsistent = temp_file("incons.txt", "kind=simon\nn=2\ntable=0,1,0,2\n");
    let wrong = temp_file("wrong.txt", "kind=periodic_z\nperiod=5\nseed=1\n");
    for (cmd, p) in [("simon", &missing), ("simon", &malformed), ("simon", &inconsistent), ("simon", &wrong), ("hsp", &wrong)] {
        let out = cli(&[cmd, "--oracle", p.to_str().unwrap()]);
        assert_eq!(out.code, EXIT_ORACLE, "{cmd} {}: {}", p.display(), out.stderr);
        let v: Value = serde_json::from_str(out.stderr.trim()).unwrap();
        assert_eq!(v["error"], "oracle_file");
    }
}

#[test]
fn algorithm_failure_exits_one() {
    // A constant function has all its mass at 0, so every sample is discarded.
    let f = temp_file("const.txt", "kind=step_r\nperiod=1\nbreakpoints=0\nvalues=3\nbits=2\n");
    let out = cli(&[
        "period-r", "--oracle", f.to_str().unwrap(), "--n", "2", "--m", "2", "--M", "64", "--N", "1024", "--J", "16",
        "--threshold", "1", "--range", "64", "--samples", "8",
    ]);
    assert_eq!(out.code, EXIT_FAILURE, "{}", out.stderr);
    let v: Value = serde_json::from_str(out.stderr.trim()).unwrap();
    assert_eq!(v["error"], "algorithm_failure");
}

#[test]
fn every_subcommand_documents_its_parameters() {
    let subs = [
        "qft-exact", "qft-aqft", "qft-parallel", "qft-modn", "qft-chirpz", "qft-smooth", "eig-est", "sample-known",
        "sample-unknown", "simon", "hsp", "hsp-relaxed", "period-z", "period-r", "verify",
    ];
    for s in subs {
        let out = cli(&[s, "--help"]);
        assert_eq!(out.code, EXIT_OK, "{s}");
        let mut documented = 0;
        let all: Vec<&str> = out.stdout.lines().map(str::trim_start).collect();
        for (i, line) in all.iter().enumerate().filter(|(_, l)| l.starts_with("--")) {
            let flag = line.split_whitespace().next().unwrap();
            if ["--help", "--seed", "--format", "--output", "--version"].contains(&flag) {
                continue;
            }
            // Long descriptions wrap onto the next line.
            let next = all.get(i + 1).copied().unwrap_or("");
            let described = line.split_whitespace().count() > 2 || (!next.is_empty() && !next.starts_with('-'));
            assert!(described, "{s} {flag} has no description: {line:?}");
            documented += 1;
        }
        assert!(documented > 0, "{s}");
    }
}

#[test]
fn csv_has_header_then_rows() {
    let out = cli(&["eig-est", "--N", "12", "--k", "6", "--i", "5", "--samples", "4", "--format", "csv", "--seed", "3"]);
    let ls: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(ls.len(), 5);
    assert!(ls[0].starts_with("command,version,seed,params."));
    assert!(ls[1..].iter().all(|l| l.starts_with("eig-est,")));
}

#[test]
fn output_flag_writes_the_artifact() {
    let path = std::env::temp_dir().join(format!("qfhsp-cli-out-{}.jsonl", std::process::id()));
    let args = ["qft-smooth", "--N", "60", "--seed", "2", "--output", path.to_str().unwrap()];
    let out = cli(&args);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    cli(&args);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert!(v["result"]["max_dev_vs_dft"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["params"]["factors"], serde_json::json!([4, 3, 5]));
}

#[test]
fn seeds_change_results_and_are_echoed() {
    let a = cli(&["sample-known", "--N", "30", "--R", "64", "--auto-m", "pow2", "--samples", "20", "--seed", "1"]);
    let b = cli(&["sample-known", "--N", "30", "--R", "64", "--auto-m", "pow2", "--samples", "20", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
    let la = lines(&a);
    assert!(la.iter().all(|l| l["seed"] == 1 && l["params"]["M_policy"] == "pow2" && l["params"]["M"] == 16384));
    assert!(la.iter().all(|l| l["version"] == env!("CARGO_PKG_VERSION")));
}

#[test]
fn hsp_relaxed_from_file_and_flags() {
    let f = temp_file("ab.txt", "kind=abelian\norders=4,9\nsubgroup=2,3\nseed=5\nrelaxed_d=3\n");
    let out = cli(&["hsp-relaxed", "--oracle", f.to_str().unwrap(), "--d", "3", "--seed", "1"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(lines(&out)[0]["result"]["correct"], true);
    let out = cli(&["hsp", "--orders", "2,2,2", "--subgroup", "1,1,0", "--seed", "4"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(lines(&out)[0]["result"]["correct"], true);
}

#[test]
fn period_r_tuned_recovers_leading_bits() {
    let out = cli(&["period-r", "--p", "4", "--n", "3", "--m", "2", "--M", "64", "--N", "1024", "--J", "16", "--threshold", "4", "--range", "64", "--samples", "24", "--seed", "2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let r = &lines(&out)[0]["result"];
    assert_eq!(r["leading"], "10");
    assert_eq!(r["exponent"], 2);
}

#[test]
fn verify_real_and_suites_run() {
    let out = cli(&["verify", "real", "--p", "2", "--M", "64", "--N", "1024", "--k", "4", "--t", "1", "--d", "2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let ls = lines(&out);
    let ids: Vec<&str> = ls.iter().map(|l| l["result"]["theorem"].as_str().unwrap()).collect();
    assert!(ids.contains(&"falloff-r") && ids.contains(&"intcl") && ids.contains(&"cdn"), "{ids:?}");
    let out = cli(&["verify", "suite-circulant", "--trials", "5"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(lines(&out).len() >= 5);
}
