//! End-to-end tests of the command-line interface: exit codes, witness
//! output, dualization round trips and fuzzer determinism.

use fidl_lab::doc::{frame_payload, lattice_payload, module_payload, DocKind, InstanceDocument};
use fidl_lab::fixtures;
use std::path::Path;
use std::process::{Command, Output};

fn fidl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fidl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fidl_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fidl"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn write_doc(dir: &Path, name: &str, doc: &InstanceDocument) -> String {
    let path = dir.join(name);
    std::fs::write(&path, doc.to_canonical_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn check_valid_module_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "mod2"),
    );
    let out = fidl(&["check", &path]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["valid"], true);
}

#[test]
fn check_broken_module_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let mut payload = module_payload(&m);
    payload["i"][1][1] = serde_json::json!(0);
    let path = write_doc(
        dir.path(),
        "broken.json",
        &InstanceDocument::new(DocKind::Module, payload, "broken"),
    );
    let out = fidl(&["check", &path]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    let v = stdout_json(&out);
    let witnesses = v["witnesses"].as_array().unwrap();
    assert!(
        witnesses.iter().any(|w| w["axiom"] == "I3" && w["b"] == 1),
        "{v}"
    );
}

#[test]
fn check_truncated_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trunc.json");
    std::fs::write(&path, "{\"kind\": \"module\", \"payl").unwrap();
    let out = fidl(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn check_missing_file_exits_two() {
    let out = fidl(&["check", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_lattice_with_derived_emission() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_doc(
        dir.path(),
        "bool4.json",
        &InstanceDocument::new(
            DocKind::Lattice,
            lattice_payload(&fixtures::bool4()),
            "bool4",
        ),
    );
    let out = fidl(&["check", &path, "--derived"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["payload"]["bottom"], 0);
    assert_eq!(v["payload"]["top"], 3);
    assert_eq!(v["payload"]["meet"][1][2], 0);
    // The emitted document reparses as valid.
    let reparse_path = dir.path().join("derived.json");
    std::fs::write(&reparse_path, &out.stdout).unwrap();
    let out2 = fidl(&["check", reparse_path.to_str().unwrap()]);
    assert_eq!(out2.status.code(), Some(0));
}

#[test]
fn dualize_roundtrips_between_module_and_frame() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let module_path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "mod2"),
    );
    let out = fidl(&["dualize", &module_path, "--to", "frame", "--roundtrip"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let frame_doc = stdout_json(&out);
    assert_eq!(frame_doc["kind"], "frame");
    assert_eq!(frame_doc["payload"]["R"], serde_json::json!([[0, 0, 0]]));

    let frame_path = dir.path().join("dual.json");
    std::fs::write(&frame_path, &out.stdout).unwrap();
    let out = fidl(&[
        "dualize",
        frame_path.to_str().unwrap(),
        "--to",
        "module",
        "--roundtrip",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let module_doc = stdout_json(&out);
    assert_eq!(module_doc["kind"], "module");
    // The doubly dualized module has the same two-element shape: f is meet,
    // i is the Boolean implication, up to the increasing-set labels.
    assert_eq!(
        module_doc["payload"]["f"],
        serde_json::json!([[0, 0], [0, 1]])
    );
    assert_eq!(
        module_doc["payload"]["i"],
        serde_json::json!([[1, 1], [0, 1]])
    );
}

#[test]
fn dualize_wrong_direction_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "mod2"),
    );
    let out = fidl(&["dualize", &path, "--to", "module"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn congruences_of_mod2() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "mod2"),
    );
    let out = fidl(&["congruences", &path]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["congruences"].as_array().unwrap().len(), 3);
    assert_eq!(v["stronglyClosed"].as_array().unwrap().len(), 3);
    assert_eq!(
        v["classification"]["verdict"],
        "subdirectly_irreducible_not_simple"
    );
    assert_eq!(v["classification"]["conLatticeSize"], 3);
    assert_eq!(v["classification"]["stronglyClosedCount"], 3);
    assert_eq!(
        v["classification"]["discrepancies"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
    // Every closed pair maps to a congruence in the list.
    for row in v["bijection"].as_array().unwrap() {
        assert!(row["congruenceIndex"].is_number(), "{row}");
    }
}

#[test]
fn classify_trivial_module() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::trivial_module();
    let path = write_doc(
        dir.path(),
        "trivial.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "trivial"),
    );
    let out = fidl(&["classify", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "trivial");
}

#[test]
fn budget_guard_and_override() {
    // An eight-element A sort exceeds the default partition-oracle budget.
    let dir = tempfile::tempdir().unwrap();
    let big = fidl_lab::module::heyting_power_module(&fixtures::chain(2), 3, 4096).unwrap();
    let path = write_doc(
        dir.path(),
        "big.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&big), "big"),
    );
    let out = fidl(&["congruences", &path]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
    let out = fidl_with_env(&["congruences", &path], "FIDL_BUDGET_OVERRIDE", "8");
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn subalg_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::modal_bool4();
    let module_path = write_doc(
        dir.path(),
        "modal.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "modal"),
    );
    let carriers = InstanceDocument::new(
        DocKind::Subalgebra,
        fidl_lab::doc::subalgebra_payload(&[0, 3], &[0, 1]),
        "bounds",
    );
    let carrier_path = write_doc(dir.path(), "carriers.json", &carriers);
    let out = fidl(&["subalg", &module_path, &carrier_path]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["isSubalgebra"], true);
    assert_eq!(v["checkersAgree"], true);
}

#[test]
fn hom_validation() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mod2();
    let module_path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&m), "mod2"),
    );
    let maps = InstanceDocument::new(
        DocKind::Hom,
        fidl_lab::doc::hom_payload(&[0, 1], &[0, 1]),
        "identity",
    );
    let maps_path = write_doc(dir.path(), "id.json", &maps);
    let out = fidl(&["hom", &module_path, &module_path, &maps_path]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["iso"], true);

    let bad = InstanceDocument::new(
        DocKind::Hom,
        fidl_lab::doc::hom_payload(&[1, 0], &[0, 1]),
        "swap",
    );
    let bad_path = write_doc(dir.path(), "swap.json", &bad);
    let out = fidl(&["hom", &module_path, &module_path, &bad_path]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fuzz_is_deterministic_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let run_a = fidl(&[
        "fuzz",
        "--seed",
        "7",
        "--count",
        "6",
        "--strategy",
        "heyting-power",
        "--max-a",
        "8",
        "--max-b",
        "6",
        "--out",
        out_a.to_str().unwrap(),
    ]);
    assert_eq!(run_a.status.code(), Some(0), "{run_a:?}");
    let run_b = fidl(&[
        "fuzz",
        "--seed",
        "7",
        "--count",
        "6",
        "--strategy",
        "heyting-power",
        "--max-a",
        "8",
        "--max-b",
        "6",
        "--out",
        out_b.to_str().unwrap(),
    ]);
    assert_eq!(run_b.status.code(), Some(0));
    assert_eq!(
        run_a.stdout, run_b.stdout,
        "summaries must be byte-identical"
    );

    let mut names: Vec<String> = std::fs::read_dir(&out_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for name in &names {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }

    // Every generated document passes check with exit 0.
    for name in &names {
        let out = fidl(&["check", out_a.join(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }

    let summary = stdout_json(&run_a);
    assert_eq!(summary["acceptanceRate"], "6/6");
}

#[test]
fn fuzz_random_tables_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = fidl(&[
        "fuzz",
        "--seed",
        "3",
        "--count",
        "5",
        "--strategy",
        "random-tables",
        "--max-a",
        "6",
        "--max-b",
        "4",
        "--out",
        dir.path().join("c").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let summary = stdout_json(&out);
    assert_eq!(summary["acceptanceRate"], "5/5");
    for prop in summary["properties"].as_array().unwrap() {
        assert_eq!(prop["fail"], 0, "{prop}");
    }
}

#[test]
fn export_dot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let lattice_path = write_doc(
        dir.path(),
        "bool4.json",
        &InstanceDocument::new(
            DocKind::Lattice,
            lattice_payload(&fixtures::bool4()),
            "bool4",
        ),
    );
    let out = fidl(&["export-dot", &lattice_path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("label=").count(), 4, "{text}");
    assert_eq!(text.matches(" -> ").count(), 4, "four covering edges");

    let frame_path = write_doc(
        dir.path(),
        "pt.json",
        &InstanceDocument::new(DocKind::Frame, frame_payload(&fixtures::ptframe()), "pt"),
    );
    let out = fidl(&["export-dot", &frame_path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("r0 [shape=point"));
    assert!(text.contains("t0 [shape=point"));
    assert_eq!(text.matches("shape=point").count(), 2, "{text}");

    // Two runs emit identical bytes.
    let again = fidl(&["export-dot", &frame_path]);
    assert_eq!(again.stdout.len(), text.len());

    let module_path = write_doc(
        dir.path(),
        "mod2.json",
        &InstanceDocument::new(DocKind::Module, module_payload(&fixtures::mod2()), "mod2"),
    );
    let out = fidl(&["export-dot", &module_path]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("subgraph").count(), 2, "one cluster per sort");
}
