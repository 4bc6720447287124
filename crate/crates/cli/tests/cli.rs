//! End-to-end tests of the binary: report shape, cache behavior, error
//! handling, and the registry plumbing.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_vinberg")
}

fn run_args(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn report_carries_the_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = run_args(&["--form", "diag:-1,1,1", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));

    let v = read_json(&out);
    assert_eq!(v["schema"], "vinberg-report/1");
    assert_eq!(v["form"]["dim"], 3);
    assert_eq!(v["form"]["det"], "-1");
    assert_eq!(v["form"]["signature"], serde_json::json!([2, 1]));
    assert_eq!(v["form"]["digest"].as_str().unwrap().len(), 64);
    assert_eq!(v["control"]["vector"], serde_json::json!(["1", "0", "0"]));
    assert_eq!(v["admissible_norms"], serde_json::json!(["1", "2"]));

    assert_eq!(v["run"]["verdict"], "finite_volume");
    assert_eq!(v["run"]["exit_code"], 0);
    assert_eq!(v["run"]["facet_cap"]["mode"], "explicit");
    assert_eq!(v["run"]["facet_cap"]["value"], 10000);
    assert_eq!(v["run"]["distance_log"], serde_json::json!(["1/2", "1"]));

    let roots = v["accepted"].as_array().unwrap();
    assert_eq!(roots.len(), 3);
    assert_eq!(roots[0]["distance"], "0");
    assert_eq!(roots[1]["distance"], "0");
    assert_eq!(roots[2]["e"], serde_json::json!(["1", "-1", "-1"]));
    assert_eq!(roots[2]["norm"], "1");
    assert_eq!(roots[2]["level"], "1");
    assert_eq!(roots[2]["distance"], "1");

    // Pairwise inner products, diagonal = the norms.
    assert_eq!(v["gram_roots"][0][0], "1");
    assert_eq!(v["gram_roots"][1][1], "2");
    assert_eq!(v["gram_roots"][0][1], "-1");

    assert_eq!(v["diagram"]["F"], 3);
    assert_eq!(
        v["diagram"]["edges"],
        serde_json::json!([[0, 1, "4"], [0, 2, "inf"]])
    );

    assert_eq!(v["polyhedron"]["finite_volume"], true);
    assert_eq!(v["polyhedron"]["area"], "1/4");
    assert_eq!(v["polyhedron"]["essential_facets"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["polyhedron"]["lineality_dim"], 0);
    assert_eq!(v["polyhedron"]["vertex_counts"]["proper"], 2);
    assert_eq!(v["polyhedron"]["vertex_counts"]["ideal"], 1);

    assert_eq!(v["bounds"]["n"], 2);
    assert_eq!(v["bounds"]["consistent"], true);
    assert_eq!(v["timing"]["threads"], 1);
}

/// Frozen report for the classical form, timing removed. Any byte drift
/// in the canonical serialization or in the run itself shows up here.
#[test]
fn classical_report_matches_the_golden_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = run_args(&["--form", "diag:-1,1,1", "--out", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));

    let mut v = read_json(&out);
    v.as_object_mut().unwrap().remove("timing").unwrap();
    let got = vinberg_cli::report::canonical_bytes(&v);
    let want: &[u8] = include_bytes!("golden/classical.json");
    assert_eq!(
        String::from_utf8_lossy(&got),
        String::from_utf8_lossy(want)
    );
}

#[test]
fn dot_output_is_the_expected_graph() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("diagram.dot");
    let res = run_args(&["--form", "diag:-1,1,1", "--dot", dot.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    let expected = "graph coxeter {\n  node [shape=circle];\n  v0 [label=\"0\"];\n  v1 [label=\"1\"];\n  v2 [label=\"2\"];\n  v0 -- v1 [label=\"4\"];\n  v0 -- v2 [style=bold,label=\"inf\"];\n}\n";
    assert_eq!(text, expected);
}

#[test]
fn cache_resume_reproduces_the_uninterrupted_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("session.json");
    let partial = dir.path().join("partial.json");
    let resumed = dir.path().join("resumed.json");
    let fresh = dir.path().join("fresh.json");

    // Exhaust immediately; the cache keeps the untouched frontier.
    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--budget", "0",
        "--cache", cache.to_str().unwrap(),
        "--out", partial.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(11));
    assert_eq!(read_json(&partial)["run"]["verdict"], "budget_exhausted");
    assert_eq!(read_json(&cache)["schema"], "vinberg-cache/1");

    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--cache", cache.to_str().unwrap(),
        "--out", resumed.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).contains("resumed from cache"));

    let res = run_args(&["--form", "diag:-1,1,1", "--out", fresh.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));

    let mut a = read_json(&resumed);
    let mut b = read_json(&fresh);
    a.as_object_mut().unwrap().remove("timing");
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(a, b, "resumed report differs from the uninterrupted one");
}

#[test]
fn cache_is_rejected_for_a_different_form_or_control() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("session.json");
    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--budget", "0",
        "--cache", cache.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(11));

    let res = run_args(&["--form", "diag:-1,1,2", "--cache", cache.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cache"));

    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--control", "2,1,0",
        "--cache", cache.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("cache"));
}

#[test]
fn tampered_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("session.json");
    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--facet-cap", "2",
        "--cache", cache.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(10));

    // A root whose cached coordinates no longer form a valid root.
    let mut v = read_json(&cache);
    v["accepted"][0]["e"] = serde_json::json!(["0", "0", "5"]);
    std::fs::write(&cache, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    let res = run_args(&["--form", "diag:-1,1,1", "--cache", cache.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));

    // Unknown schema string.
    let mut v = read_json(&cache);
    v["schema"] = serde_json::json!("vinberg-cache/9");
    std::fs::write(&cache, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    let res = run_args(&["--form", "diag:-1,1,1", "--cache", cache.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn list_constants_prints_the_builtin_registry() {
    let res = run_args(&["--list-constants", "2"]);
    assert_eq!(res.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(v["schema"], "vinberg-constants/1");
    assert_eq!(v["n"], 2);
    assert!(v["constants"]["margulis"]["value"].is_string());
    assert!(v["constants"]["covolume_cap"].is_null(), "no default covolume cap");

    let res = run_args(&["--list-constants", "9"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn auto_cap_needs_a_covolume_cap() {
    let res = run_args(&["--form", "diag:-1,1,1", "--facet-cap", "auto"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("covolume_cap"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--facet-cap", "auto",
        "--constant", "covolume_cap=10",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let v = read_json(&out);
    assert_eq!(v["run"]["facet_cap"]["mode"], "auto");
    assert!(v["run"]["facet_cap"]["value"].as_u64().unwrap() >= 3);
}

#[test]
fn registry_file_feeds_the_auto_cap() {
    // A registry whose constants are pinned to round values; the derived
    // cap is exactly 13.
    let toy = serde_json::json!({
        "schema": "vinberg-constants/1",
        "n": 2,
        "constants": {
            "margulis": { "value": "1.76274717403908605046521864996", "provenance": "toy" },
            "dobrowolski": { "value": "10", "provenance": "toy" },
            "finite_subgroup_order": { "value": "1", "provenance": "toy" },
            "bieberbach_index": { "value": "1", "provenance": "toy" },
            "lattice_density": { "value": "1", "provenance": "toy" },
            "max_simplex_volume": { "value": "3.14159265358979323846264338328", "provenance": "toy" },
            "barycentric_count": { "value": "1", "provenance": "toy" },
            "covolume_cap": { "value": "10", "provenance": "toy" }
        }
    });
    let dir = tempfile::tempdir().unwrap();
    let reg = dir.path().join("toy.json");
    std::fs::write(&reg, serde_json::to_vec_pretty(&toy).unwrap()).unwrap();
    let out = dir.path().join("report.json");
    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--registry", reg.to_str().unwrap(),
        "--facet-cap", "auto",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let v = read_json(&out);
    assert_eq!(v["run"]["facet_cap"]["mode"], "auto");
    assert_eq!(v["run"]["facet_cap"]["value"], 13);
}

#[test]
fn bad_inputs_exit_two() {
    let cases: &[&[&str]] = &[
        &[],
        &["--form", "diag:0,1"],
        &["--form", "diag:-1,-1,1"],
        &["--form", "diag:1,1"],
        &["--form", "diag:-1,1,1", "--control", "0,1,0"],
        &["--form", "diag:-1,1,1", "--facet-cap", "-3"],
        &["--form", "diag:-1,1,1", "--threads", "0"],
        &["--form", "/nonexistent/form.json"],
        &["--form", "diag:-1,1,1", "--registry", "/nonexistent/reg.json"],
    ];
    for args in cases {
        let res = run_args(args);
        assert_eq!(res.status.code(), Some(2), "args {args:?}: {res:?}");
        assert!(!res.stderr.is_empty(), "args {args:?} gave no error message");
    }

    // The prefix-free inline spelling, with the exact signature message.
    let res = run_args(&["--form", "1,1,1"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&res.stderr)
            .contains("signature (2,1) required, found (3,0)"),
        "stderr: {}",
        String::from_utf8_lossy(&res.stderr)
    );
}

#[test]
fn inline_form_without_prefix_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let res = run_args(&[
        "--form", "-1,1,1",
        "--facet-cap", "50",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(0));
    let v = read_json(&out);
    assert_eq!(v["accepted"].as_array().unwrap().len(), 3);
    assert_eq!(v["run"]["facet_cap"]["value"], 50);
}

#[test]
fn registry_dimension_must_match_the_form() {
    let dir = tempfile::tempdir().unwrap();
    let reg = dir.path().join("n3.json");
    let res = run_args(&["--list-constants", "3"]);
    assert_eq!(res.status.code(), Some(0));
    std::fs::write(&reg, &res.stdout).unwrap();

    let res = run_args(&[
        "--form", "diag:-1,1,1",
        "--registry", reg.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("registry is for n = 3"));
}
