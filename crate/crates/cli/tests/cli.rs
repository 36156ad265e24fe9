use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn grpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpd")).args(args).output().expect("binary runs")
}

fn grpd_data(args: &[&str]) -> Output {
    let owned: Vec<String> =
        args.iter().map(|a| if a.ends_with(".json") { data(a).display().to_string() } else { a.to_string() }).collect();
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    grpd(&refs)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = grpd_data(&["validate", "bz2.json"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = grpd_data(&["validate", "bz2-corrupted.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("violation: inverse"), "{}", stdout(&bad));
    let malformed = grpd_data(&["validate", "malformed.json"]);
    assert_eq!(malformed.status.code(), Some(2));
    assert_eq!(grpd(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn every_sample_document_is_valid() {
    let dir = data("");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name == "malformed.json" || name == "bz2-corrupted.json" {
            continue;
        }
        let o = grpd(&["validate", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn hfp_summaries() {
    let o = grpd_data(&["hfp", "bz2.json", "bz2-trivial.json"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("objects: 2\n") && s.contains("classes: 2\n"), "{s}");
    let v: serde_json::Value = serde_json::from_slice(&grpd_data(&["--json", "hfp", "bz2.json", "bz2-trivial.json"]).stdout).unwrap();
    let auts: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["automorphisms"].as_u64().unwrap()).collect();
    assert_eq!(auts, [2, 2]);

    let s = stdout(&grpd_data(&["hfp", "ab.json", "ab-swap.json"]));
    assert!(s.contains("objects: 0\n"), "{s}");

    let v: serde_json::Value = serde_json::from_slice(&grpd_data(&["--json", "hfp", "bz4.json", "bz4-neg.json"]).stdout).unwrap();
    assert_eq!(v["objects"], 4);
    let auts: Vec<u64> = v["classes"].as_array().unwrap().iter().map(|c| c["automorphisms"].as_u64().unwrap()).collect();
    assert_eq!(auts, [2, 2]);
}

#[test]
fn hfp_out_is_a_loadable_groupoid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hfp.json");
    let o = grpd_data(&["hfp", "bz4.json", "bz4-neg.json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = grpd(&["validate", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).starts_with("groupoid: 4 objects, 16 morphisms"), "{}", stdout(&v));
}

#[test]
fn h1_table() {
    let v: serde_json::Value = serde_json::from_slice(&grpd_data(&["--json", "h1", "z4.json", "neg.json"]).stdout).unwrap();
    assert_eq!((v["z1"].as_u64(), v["h1"].as_u64()), (Some(4), Some(2)));
    assert_eq!(v["mass"], "1");
    let s = stdout(&grpd_data(&["h1", "z4.json", "neg.json"]));
    assert!(s.contains("representative  orbit size  |K|"), "{s}");
    assert!(s.ends_with("total sum 1/|K| = 1\n"), "{s}");
}

#[test]
fn twisted_table_for_s3() {
    let o = grpd_data(&["--json", "twisted", "s3.json", "id.json", "transposition.json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [1, 1, 2]);
    assert_eq!(v["cardinality"], "2");
    assert_eq!((v["fibration"].as_bool(), v["weak_equivalence"].as_bool()), (Some(true), Some(true)));
}

#[test]
fn colimit_and_stalk_commands() {
    let s = stdout(&grpd_data(&["colimit", "chain.json"]));
    assert!(s.contains("filtered: yes") && s.contains("commute with the colimit: yes"), "{s}");
    let o = grpd_data(&["stalk", "reduction.json", "--point", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("morphisms: 4\n"));
    assert_eq!(grpd_data(&["stalk", "reduction.json", "--point", "zz"]).status.code(), Some(2));
}

#[test]
fn export_dot_of_point() {
    let s = stdout(&grpd_data(&["export-dot", "point.json"]));
    assert_eq!(s.matches("[label=").count(), 1);
    assert!(!s.contains("->"));
}

#[test]
fn check_passes_and_is_byte_identical() {
    let run = || grpd(&["check", "iota-fibration", "--seed", "1", "--size", "50"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("1.json"), dir.path().join("2.json")];
    for p in &paths {
        let o = grpd(&["--json", "check", "colimit", "--seed", "9", "--size", "20", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(grpd(&["check", "no-such-suite"]).status.code(), Some(2));
}
