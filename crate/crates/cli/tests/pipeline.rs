use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn smallcovers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallcovers"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn dir_str(dir: &TempDir) -> &str {
    dir.path().to_str().unwrap()
}

fn summary_field(summary: &str, key: &str) -> String {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {summary}"))
        .to_string()
}

fn polygon_file(dir: &Path, k: usize) -> String {
    let facets: Vec<String> = (0..k).map(|i| format!("{{\"id\": {i}}}")).collect();
    let adjacency: Vec<String> = (0..k)
        .map(|i| {
            let (a, b) = (i.min((i + 1) % k), i.max((i + 1) % k));
            format!("[{a}, {b}]")
        })
        .collect();
    let text = format!(
        "{{\"name\": \"{k}-gon\", \"dimension\": 2, \"facets\": [{}], \"adjacency\": [{}], \"vertices\": [{}]}}",
        facets.join(", "),
        adjacency.join(", "),
        adjacency.join(", "),
    );
    let path = dir.join(format!("{k}-gon.json"));
    fs::write(&path, text).unwrap();
    format!("file:{}", path.display())
}

#[test]
fn dodecahedron_run_is_cached_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = smallcovers(&["run", "--out", dir_str(&dir)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = stdout(&out);
    assert_eq!(summary_field(&summary, "labelings"), "2165");
    assert_eq!(summary_field(&summary, "classes"), "25");
    assert_eq!(
        summary_field(&summary, "stabilizer orders"),
        "1x14 2x7 4x1 6x1 12x1 24x1"
    );

    let names = [
        "dodecahedron.polytope.json",
        "dodecahedron.labelings.csv",
        "dodecahedron.classes.json",
        "dodecahedron.classes.md",
        "dodecahedron.summary.txt",
    ];
    let first: Vec<Vec<u8>> = names
        .iter()
        .map(|n| fs::read(dir.path().join(n)).unwrap())
        .collect();
    let labelings = String::from_utf8(first[1].clone()).unwrap();
    assert!(labelings.starts_with("# smallcovers labelings polytope="));
    assert_eq!(labelings.lines().count(), 2166);

    let again = smallcovers(&["run", "--out", dir_str(&dir)]);
    assert_eq!(code(&again), 0);
    assert!(stderr(&again).contains("enumerate: reusing"));
    assert!(stderr(&again).contains("classify: reusing"));
    for (name, bytes) in names.iter().zip(&first) {
        assert_eq!(
            &fs::read(dir.path().join(name)).unwrap(),
            bytes,
            "{name} changed"
        );
    }

    let other = TempDir::new().unwrap();
    let sequential = smallcovers(&["run", "--out", dir_str(&other), "--split-depth", "0"]);
    assert_eq!(code(&sequential), 0);
    for (name, bytes) in names.iter().zip(&first) {
        assert_eq!(
            &fs::read(other.path().join(name)).unwrap(),
            bytes,
            "{name} depends on split depth"
        );
    }
}

#[test]
fn dodecahedron_report() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&smallcovers(&["run", "--out", dir_str(&dir)])), 0);
    let report = smallcovers(&["report", "--out", dir_str(&dir), "--format", "csv"]);
    assert_eq!(code(&report), 0);
    let text = stdout(&report);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().clone();
    let column = |name: &str| header.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 25);
    let numbers = |name: &str| -> Vec<u32> {
        rows.iter()
            .map(|r| r[column(name)].parse().unwrap())
            .collect()
    };
    let mut stabilizers = numbers("stabilizer_order");
    stabilizers.sort_unstable();
    let mut expected = vec![1; 14];
    expected.extend([2; 7]);
    expected.extend([4, 6, 12, 24]);
    assert_eq!(stabilizers, expected);
    assert_eq!(numbers("orbit_size").iter().sum::<u32>(), 2165);
    let largest = rows
        .iter()
        .find(|r| &r[column("stabilizer_order")] == "24")
        .unwrap();
    assert_eq!(&largest[column("group")], "(Z_2×Z_2)⋉Z_6");
    assert_eq!(&largest[column("isometry_order")], "192");
    let names: Vec<&str> = rows.iter().map(|r| &r[column("group")]).collect();
    assert_eq!(names.iter().filter(|&&g| g == "1").count(), 14);
    assert!(names.contains(&"Z_2×Z_2"));
    assert!(names.contains(&"S_3"));
    assert!(names.contains(&"(Z_2×Z_2)⋉Z_3"));
    assert_eq!(
        stdout(&smallcovers(&[
            "report",
            "--out",
            dir_str(&dir),
            "--format",
            "csv"
        ])),
        text
    );

    let md = stdout(&smallcovers(&["report", "--out", dir_str(&dir)]));
    assert_eq!(md.lines().count(), 27);

    let reordered = TempDir::new().unwrap();
    let out = smallcovers(&[
        "run",
        "--alphabet",
        "7,6,5,4,3,2,1",
        "--out",
        dir_str(&reordered),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(reordered.path().join("dodecahedron.labelings.csv")).unwrap(),
        fs::read(dir.path().join("dodecahedron.labelings.csv")).unwrap()
    );
}

#[test]
fn report_without_artifacts_fails() {
    let dir = TempDir::new().unwrap();
    let out = smallcovers(&["report", "--out", dir_str(&dir)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("missing artifact"));
}

#[test]
fn polygon_files() {
    let dir = TempDir::new().unwrap();
    let square = polygon_file(dir.path(), 4);
    let out = smallcovers(&["run", "--polytope", &square, "--out", dir_str(&dir)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = stdout(&out);
    assert_eq!(summary_field(&summary, "alphabet"), "1,2,3");
    assert_eq!(summary_field(&summary, "symmetry group order"), "8");
    assert_eq!(summary_field(&summary, "labelings"), "3");
    assert!(dir.path().join("4-gon.classes.md").exists());

    let pentagon = polygon_file(dir.path(), 5);
    let out = smallcovers(&[
        "run",
        "--polytope",
        &pentagon,
        "--alphabet",
        "1,2",
        "--out",
        dir_str(&dir),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(summary_field(&stdout(&out), "classes"), "0");
    let report = fs::read_to_string(dir.path().join("5-gon.classes.csv")).unwrap();
    assert_eq!(report.lines().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir_str(&dir);

    let bad_alphabet = smallcovers(&["run", "--alphabet", "1,2,8", "--out", d]);
    assert_eq!(code(&bad_alphabet), 3);
    assert!(stderr(&bad_alphabet).contains("alphabet"));
    assert_eq!(
        code(&smallcovers(&["run", "--alphabet", "1,1,2,4", "--out", d])),
        3
    );
    assert_eq!(
        code(&smallcovers(&["run", "--alphabet", "0,1,2,4", "--out", d])),
        3
    );
    assert_eq!(
        code(&smallcovers(&["run", "--polytope", "cube", "--out", d])),
        3
    );
    assert_eq!(code(&smallcovers(&["frobnicate"])), 3);
    assert_eq!(code(&smallcovers(&["--help"])), 0);

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    let out = smallcovers(&[
        "run",
        "--polytope",
        &format!("file:{}", garbage.display()),
        "--out",
        d,
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("build"));

    let missing = smallcovers(&[
        "run",
        "--polytope",
        "file:/definitely/not/here.json",
        "--out",
        d,
    ]);
    assert_eq!(code(&missing), 3);

    // a square whose vertex list skips one corner
    let broken = dir.path().join("broken.json");
    fs::write(
        &broken,
        r#"{"name": "broken", "dimension": 2, "facets": [{"id": 0}, {"id": 1}, {"id": 2}, {"id": 3}],
            "adjacency": [[0, 1], [1, 2], [2, 3], [0, 3]], "vertices": [[0, 1], [1, 2], [2, 3]]}"#,
    )
    .unwrap();
    let out = smallcovers(&[
        "run",
        "--polytope",
        &format!("file:{}", broken.display()),
        "--out",
        d,
    ]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stderr(&out).contains("validation"));
}

#[test]
fn tampered_labelings_are_rejected_on_reload() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&smallcovers(&["run", "--out", dir_str(&dir)])), 0);
    let path = dir.path().join("dodecahedron.labelings.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[1] = "1,2,4,1,1,1,1,1,1,1,1,1".into();
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = smallcovers(&["run", "--out", dir_str(&dir)]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2 is not a characteristic labeling"));
}

#[test]
fn cell120_pipeline_and_restrictions() {
    let dir = TempDir::new().unwrap();
    let d = dir_str(&dir);

    let refused = smallcovers(&[
        "run",
        "--polytope",
        "120cell",
        "--alphabet",
        "1,2,3,4,5,6,7,8,9,10,11,12,13,14,15",
        "--out",
        d,
    ]);
    assert_eq!(code(&refused), 2);
    assert!(stderr(&refused).contains("--force-infeasible"));

    let four = smallcovers(&[
        "run",
        "--polytope",
        "120cell",
        "--alphabet",
        "1,2,4,8",
        "--out",
        d,
    ]);
    assert_eq!(code(&four), 0, "{}", stderr(&four));
    assert_eq!(summary_field(&stdout(&four), "labelings"), "0");

    let out = smallcovers(&["run", "--polytope", "120cell", "--out", d]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = stdout(&out);
    assert_eq!(summary_field(&summary, "alphabet"), "1,2,4,8,15");
    assert_eq!(summary_field(&summary, "symmetry group order"), "14400");
    assert_eq!(summary_field(&summary, "labelings"), "10");
    assert_eq!(summary_field(&summary, "classes"), "1");
    assert_eq!(summary_field(&summary, "stabilizer orders"), "1440x1");
    assert_eq!(summary_field(&summary, "isometry orders"), "23040");

    let labelings = dir.path().join("120cell.labelings.csv");
    let labelings = labelings.to_str().unwrap();

    let unclassified = smallcovers(&["restrict", "--labelings", labelings, "--facet", "1"]);
    assert_eq!(code(&unclassified), 0, "{}", stderr(&unclassified));
    assert!(stderr(&unclassified).contains("skipping class lookup"));
    assert!(stdout(&unclassified).starts_with("facet 1: dodecahedron 1,2,4,"));
    assert!(stdout(&unclassified).trim_end().ends_with("class -"));

    assert_eq!(code(&smallcovers(&["run", "--out", d])), 0);
    let all = smallcovers(&["restrict", "--labelings", labelings, "--facet", "all"]);
    assert_eq!(code(&all), 0, "{}", stderr(&all));
    let text = stdout(&all);
    assert_eq!(text.lines().count(), 120);
    for (k, line) in text.lines().enumerate() {
        assert!(
            line.starts_with(&format!("facet {}: dodecahedron ", k + 1)),
            "{line}"
        );
        assert!(!line.ends_with("class -"), "{line}");
    }

    let past_end = smallcovers(&["restrict", "--labelings", labelings, "--facet", "121"]);
    assert_eq!(code(&past_end), 3);
    assert!(stderr(&past_end).contains("out of range"));
    assert_eq!(
        code(&smallcovers(&[
            "restrict",
            "--labelings",
            labelings,
            "--facet",
            "1",
            "--record",
            "11"
        ])),
        3
    );

    let dodeca = dir.path().join("dodecahedron.labelings.csv");
    let wrong = smallcovers(&[
        "restrict",
        "--labelings",
        dodeca.to_str().unwrap(),
        "--facet",
        "1",
    ]);
    assert_ne!(code(&wrong), 0);
}
