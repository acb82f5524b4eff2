//! End-to-end runs of the installed binary. Census renderings are pinned
//! byte-for-byte against golden files; the golden verdicts themselves are
//! re-derived from the library by the acceptance suite, so a wrong freeze
//! cannot survive.

use std::path::Path;
use std::process::{Command, Output};

fn ccalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccalab"))
        .args(args)
        .env_remove("CCALAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = ccalab(args);
    assert!(
        out.status.success(),
        "`ccalab {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn census_markdown_matches_golden() {
    let got = stdout_ok(&["census", "--max-order", "8", "--format", "markdown"]);
    let want = include_str!("golden/census8.md");
    assert_eq!(got, want);
}

#[test]
fn census_csv_matches_golden() {
    let got = stdout_ok(&["census", "--max-order", "8", "--format", "csv"]);
    let want = include_str!("golden/census8.csv");
    assert_eq!(got, want);
}

#[test]
fn census_verdicts_small_orders() {
    let csv = stdout_ok(&["census", "--max-order", "8", "--format", "csv"]);
    let mut failing = Vec::new();
    for line in csv.lines().skip(1) {
        // The quoted recipe column may contain commas; the two leading and
        // four trailing columns never do.
        let head: Vec<&str> = line.splitn(3, ',').collect();
        let tail: Vec<&str> = line.rsplitn(5, ',').collect();
        let (order, id, cca, strongly) = (head[0], head[1], tail[3], tail[2]);
        if cca == "false" {
            failing.push(format!("{order},{id}"));
        }
        // At these orders CCA and strongly CCA agree on every group.
        assert_eq!(cca, strongly, "order {order} id {id}: cca != strongly_cca");
    }
    failing.sort();
    assert_eq!(failing, ["8,2", "8,4"], "only Z4xZ2 and Q8 fail below order 9");
}

#[test]
fn census_reduction_flags_show_in_header() {
    let md = stdout_ok(&[
        "census",
        "--max-order",
        "4",
        "--no-dedup",
        "--no-prime-power",
        "--format",
        "markdown",
    ]);
    assert!(md.contains("prime-power classes = off, orbit dedup = off"), "{md}");
}

#[test]
fn cache_replays_documents_byte_for_byte() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().join("verdicts.json");
    let cache_str = cache.to_str().unwrap();
    let args = ["census", "--max-order", "8", "--format", "json", "--cache", cache_str];
    let cold = stdout_ok(&args);
    assert!(cache.exists(), "census writes the cache file");
    let warm = stdout_ok(&args);
    assert_eq!(cold, warm, "warm run must replay timing from the cache");

    // Flip one verdict byte inside the file: the checksum no longer matches,
    // so the whole cache is discarded and everything is recomputed.
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("\"cca\": false"));
    std::fs::write(&cache, text.replacen("\"cca\": false", "\"cca\": true", 1)).unwrap();
    let recomputed = stdout_ok(&args);
    verdict_columns_match(&cold, &recomputed);

    // The recompute rewrote a valid cache; a further run replays it.
    let warm2 = stdout_ok(&args);
    assert_eq!(recomputed, warm2);
}

/// Same rows, ignoring `timing_ms` (a recompute cannot reproduce it).
fn verdict_columns_match(a: &str, b: &str) {
    let strip = |s: &str| -> Vec<String> {
        s.lines().filter(|l| !l.contains("timing_ms")).map(str::to_string).collect()
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn cache_path_comes_from_environment_too() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache = dir.path().join("verdicts.json");
    let out = Command::new(env!("CARGO_BIN_EXE_ccalab"))
        .args(["census", "--max-order", "4", "--format", "csv"])
        .env("CCALAB_CACHE", &cache)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert!(cache.exists(), "CCALAB_CACHE names the cache file when --cache is absent");
}

#[test]
fn check_named_catalogue_group() {
    let out = stdout_ok(&["check", "GAP(16,6)", "--strong"]);
    assert!(out.contains("order 16"), "{out}");
    assert!(out.contains("property: strongly CCA"), "{out}");
    assert!(out.contains("verdict: holds"), "{out}");
}

#[test]
fn check_reports_witness_on_failure() {
    let out = stdout_ok(&["check", "Dic(Cyc(4),2)"]);
    assert!(out.contains("verdict: does not hold"), "{out}");
    assert!(out.contains("witness set"), "{out}");
    assert!(out.contains("witness map"), "{out}");
}

#[test]
fn check_single_set_past_census_bound() {
    let out = stdout_ok(&[
        "check",
        "SDP(Cyc(7),Cyc(9),[x->x^2])",
        "--cca",
        "--set",
        "a,x",
    ]);
    assert!(out.contains("order 63"), "{out}");
    assert!(out.contains("verdict: holds"), "{out}");
    assert!(out.contains("complete"), "{out}");
}

#[test]
fn check_whole_group_past_bound_is_refused() {
    let out = ccalab(&["check", "Wr(3,3)"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("order"), "names the violated bound: {err}");
}

#[test]
fn check_witness_flag_emits_wreath_package() {
    let out = stdout_ok(&["check", "Wr(3,3)", "--witness"]);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("json witness");
    assert_eq!(doc["order"], 81);
    assert_eq!(doc["source"], "wreath");
    assert_eq!(doc["mode"], "preserving");
    assert_eq!(doc["recipe"], "Wr(3,3)");
}

#[test]
fn check_witness_flag_falls_back_to_engine_search() {
    let out = stdout_ok(&["check", "Dic(Cyc(4),2)", "--witness"]);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("json witness");
    assert_eq!(doc["order"], 8);
    assert_eq!(doc["source"], "engine");
}

#[test]
fn check_witness_flag_errors_when_property_holds() {
    let out = ccalab(&["check", "Cyc(8)", "--witness"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no non-affine witness"), "{err}");
}

#[test]
fn witness_order21_is_a_permutation_fixing_identity() {
    let out = stdout_ok(&["witness", "order21"]);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("json witness");
    assert_eq!(doc["order"], 21);
    let map: Vec<usize> =
        doc["map"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize).collect();
    assert_eq!(map[0], 0);
    let mut sorted = map.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..21).collect::<Vec<_>>());
}

#[test]
fn witness_structure_accepts_symmetric_group_parameters() {
    let out = stdout_ok(&[
        "witness", "structure", "--gap", "24,12", "--set", "a,b", "--t", "a", "--tau", "a^2",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&out).expect("json witness");
    assert_eq!(doc["order"], 24);
    assert_eq!(doc["source"], "structure");
}

#[test]
fn witness_structure_names_the_failed_hypothesis() {
    let out = ccalab(&[
        "witness", "structure", "--gap", "24,12", "--set", "a,b", "--t", "b", "--tau", "a^2",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("square"), "says which hypothesis broke: {err}");
}

#[test]
fn catalogue_covers_all_orders() {
    let md = stdout_ok(&["catalogue"]);
    let rows = md.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| order")).count();
    assert_eq!(rows, 93, "group count for orders 1..=31");
    assert!(md.contains("| 31 | 1 |"), "{md}");
}

#[test]
fn golden_files_exist_in_repo() {
    // `include_str!` already guarantees this at compile time; the test keeps
    // the paths visible in failure output if the files move.
    for name in ["census8.md", "census8.csv"] {
        assert!(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name).exists());
    }
}
