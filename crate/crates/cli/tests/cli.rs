//! End-to-end tests of the bph binary: rendering, exit codes, the p = 2
//! gate, and the disk cache.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bph(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bph"))
        .args(args)
        .env("BPH_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn verify_main_passes_and_serializes() {
    let dir = TempDir::new().unwrap();
    let out = bph(
        dir.path(),
        &["verify", "main", "--p", "3", "--n", "2", "--max-degree", "20", "--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["name"], "theorem-main");
    assert_eq!(doc["verdict"], "PASS");
    assert_eq!(doc["window"][1], 19);
    assert!(doc["cells"].as_array().unwrap().len() >= 19);
}

#[test]
fn pseries_table_shows_the_leading_coefficients() {
    let dir = TempDir::new().unwrap();
    let out = bph(dir.path(), &["pseries", "--p", "3", "--max-degree", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("0 | 0 | 3\n"), "a_0 = p: {text}");
    assert!(text.contains("1 | 2 | 0\n"), "a_1 vanishes: {text}");
    assert!(text.contains("2 | 4 | -8*v1\n"), "a_2 is v_1 mod 3: {text}");
    assert!(text.contains("8 | 16 | -6560*v2"), "a_8 reaches v_2: {text}");
    assert!(text.ends_with("verdict: PASS\n"));
}

#[test]
fn homology_renders_known_rows_and_empty_degrees() {
    let dir = TempDir::new().unwrap();
    let out = bph(dir.path(), &["homology", "--p", "3", "--n", "1", "--max-degree", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("valid degrees 1..=7"));
    assert!(text.contains("1 | 1 | 3\n"));
    assert!(text.contains("2 | - | 0\n"));
    assert!(text.contains("5 | 1 | 9\n"));
}

#[test]
fn singular_model_gives_classical_homology() {
    let dir = TempDir::new().unwrap();
    let out = bph(
        dir.path(),
        &["homology", "--p", "3", "--n", "1", "--max-degree", "8", "--singular-model"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("scheme = singular"));
    assert!(text.contains("5 | 1 | 3\n"), "no higher torsion without generators: {text}");
    assert!(text.contains("7 | 1 | 3\n"));
}

#[test]
fn bigraded_flag_splits_degrees_by_stratum() {
    let dir = TempDir::new().unwrap();
    let merged =
        bph(dir.path(), &["homology", "--p", "3", "--n", "2", "--max-degree", "8"]);
    let split = bph(
        dir.path(),
        &["homology", "--p", "3", "--n", "2", "--max-degree", "8", "--bigraded"],
    );
    assert_eq!(merged.status.code(), Some(0));
    assert_eq!(split.status.code(), Some(0));
    assert!(stdout(&merged).contains("4 | 2 | 3 3\n"));
    assert!(stdout(&split).contains("4 | 2 | 3 3\n"));
    assert!(stdout(&split).lines().count() >= stdout(&merged).lines().count());
}

#[test]
fn p2_example_prints_both_evaluations_and_passes() {
    let dir = TempDir::new().unwrap();
    let out = bph(dir.path(), &["p2-example"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 4, "three cells and the verdict: {text}");
    assert!(text.contains("s^3"));
    assert!(text.contains("verdict: PASS\n"));
}

#[test]
fn p2_requires_the_probe_flag() {
    let dir = TempDir::new().unwrap();
    let refused =
        bph(dir.path(), &["verify", "main", "--p", "2", "--n", "1", "--max-degree", "6"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(stderr(&refused).contains("conjectural at p = 2"));
    assert!(stdout(&refused).is_empty());

    let probed = bph(
        dir.path(),
        &[
            "verify",
            "main",
            "--p",
            "2",
            "--n",
            "1",
            "--max-degree",
            "6",
            "--conjecture-probe",
        ],
    );
    assert_eq!(probed.status.code(), Some(0));
    let text = stdout(&probed);
    assert!(text.starts_with("# conjecture probe"), "banner precedes output: {text}");
    assert!(text.contains("theorem-main (conjecture probe)"));
}

#[test]
fn second_identical_run_hits_the_cache() {
    let dir = TempDir::new().unwrap();
    let args = ["homology", "--p", "3", "--n", "1", "--max-degree", "6"];
    let first = bph(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 2, "p-series and homology entries");

    let second = bph(dir.path(), &args);
    assert_eq!(stdout(&first), stdout(&second), "byte-identical rerun");

    // Tampering with the stored rows changes the output, proving the second
    // run was served from the cache.
    let table_entry = entries
        .iter()
        .map(|e| e.as_ref().unwrap().path())
        .find(|path| fs::read_to_string(path).unwrap().contains("\"rows\""))
        .expect("homology entry exists");
    let tampered =
        fs::read_to_string(&table_entry).unwrap().replacen("\"exponents\":[1]", "\"exponents\":[5]", 1);
    fs::write(&table_entry, tampered).unwrap();
    let third = bph(dir.path(), &args);
    assert!(stdout(&third).contains("1 | 1 | 243\n"), "tampered exponent read back");

    // The determinism audit recomputes and must reject the tampered bytes.
    let audited = bph(
        dir.path(),
        &["homology", "--p", "3", "--n", "1", "--max-degree", "6", "--audit-cache"],
    );
    assert_eq!(audited.status.code(), Some(1));
    assert!(stderr(&audited).contains("determinism audit failed"));
}

#[test]
fn corrupt_cache_entries_are_recomputed() {
    let dir = TempDir::new().unwrap();
    let args = ["homology", "--p", "3", "--n", "1", "--max-degree", "6"];
    let first = bph(dir.path(), &args);
    for entry in fs::read_dir(dir.path()).unwrap() {
        fs::write(entry.unwrap().path(), "not json").unwrap();
    }
    let second = bph(dir.path(), &args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&second).contains("discarding corrupt cache entry"));

    let audited = bph(dir.path(), &[&args[..], &["--audit-cache"]].concat());
    assert_eq!(audited.status.code(), Some(0), "healthy entries satisfy the audit");
    assert!(stderr(&audited).contains("cached bytes match"));
}

#[test]
fn changing_the_degree_bound_misses_the_cache() {
    let dir = TempDir::new().unwrap();
    bph(dir.path(), &["homology", "--p", "3", "--n", "1", "--max-degree", "6"]);
    let before = fs::read_dir(dir.path()).unwrap().count();
    bph(dir.path(), &["homology", "--p", "3", "--n", "1", "--max-degree", "8"]);
    let after = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(before, 2);
    assert_eq!(after, 4, "new degree bound stores fresh entries");
}

#[test]
fn cache_dir_flag_overrides_the_environment() {
    let env_dir = TempDir::new().unwrap();
    let flag_dir = TempDir::new().unwrap();
    let flag_path = flag_dir.path().join("nested");
    let out = bph(
        env_dir.path(),
        &[
            "pseries",
            "--p",
            "3",
            "--max-degree",
            "6",
            "--cache-dir",
            flag_path.to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 0);
    assert_eq!(fs::read_dir(&flag_path).unwrap().count(), 1);
}

#[test]
fn no_cache_writes_nothing_and_output_matches_cached_runs() {
    let dir = TempDir::new().unwrap();
    let cached = bph(dir.path(), &["homology", "--p", "3", "--n", "1", "--max-degree", "6"]);
    let uncached = bph(
        dir.path(),
        &["homology", "--p", "3", "--n", "1", "--max-degree", "6", "--no-cache"],
    );
    assert_eq!(stdout(&cached), stdout(&uncached));
}

#[test]
fn exit_codes_reflect_verdicts() {
    let dir = TempDir::new().unwrap();
    let fail = bph(dir.path(), &["stretch", "--p", "3", "--k", "2", "--n", "2"]);
    assert_eq!(fail.status.code(), Some(1), "n <= k is the negative control");

    let pass = bph(dir.path(), &["stretch", "--p", "3", "--k", "2", "--n", "3"]);
    assert_eq!(pass.status.code(), Some(0));

    let vacuous = bph(dir.path(), &["vandermonde", "--p", "3", "--k", "1", "--window", "3"]);
    assert_eq!(vacuous.status.code(), Some(0), "vacuous warns, never fails");
    assert!(stderr(&vacuous).contains("warning"));
    assert!(stdout(&vacuous).contains("verdict: VACUOUS"));

    let inconclusive = bph(
        dir.path(),
        &["verify", "squeeze", "--p", "3", "--k", "2", "--level", "1", "--max-degree", "20"],
    );
    assert_eq!(inconclusive.status.code(), Some(0));
    assert!(stdout(&inconclusive).contains("INCONCLUSIVE"));
    assert!(stderr(&inconclusive).contains("warning"));
}

#[test]
fn vandermonde_defaults_to_the_doubled_truncation_window() {
    let dir = TempDir::new().unwrap();
    let out = bph(dir.path(), &["vandermonde", "--p", "3", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("window = 6"), "2 * 3^1: {text}");
    assert!(text.ends_with("verdict: PASS\n"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let nonprime = bph(dir.path(), &["pseries", "--p", "6", "--max-degree", "8"]);
    assert_eq!(nonprime.status.code(), Some(2));
    assert!(stderr(&nonprime).contains("not prime"));

    let missing = bph(dir.path(), &["homology", "--p", "3"]);
    assert_eq!(missing.status.code(), Some(2));

    let odd_only = bph(dir.path(), &["stretch", "--p", "2", "--k", "1", "--n", "2"]);
    assert_eq!(odd_only.status.code(), Some(2));
    assert!(stderr(&odd_only).contains("odd prime"));
}

#[test]
fn csv_rows_flatten_the_report_with_its_window() {
    let dir = TempDir::new().unwrap();
    let out = bph(
        dir.path(),
        &["verify", "tor", "--p", "3", "--k", "1", "--max-degree", "8", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,degree,bucket,lhs,rhs,verdict,window_lo,window_hi"));
    assert_eq!(lines.next(), Some("tor-identification,3,,1,1,PASS,1,8"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1,8")));
}

#[test]
fn json_homology_round_trips_through_the_schema() {
    let dir = TempDir::new().unwrap();
    let out = bph(
        dir.path(),
        &["homology", "--p", "3", "--n", "2", "--max-degree", "8", "--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["p"], 3);
    assert_eq!(doc["n"], 2);
    assert_eq!(doc["degree_bound"], 8);
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| {
        r["degree"].is_number() && r["odd_count"].is_number() && r["exponents"].is_array()
    }));
}
