use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gms"))
        .args(args)
        .output()
        .expect("run gms")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_fixture_with_each_algorithm() {
    for algo in ["oracle", "backward", "forward"] {
        let out = gms(&["solve", &fixture("two_disjoint_edges.gms"), "--algo", algo]);
        assert_eq!(out.status.code(), Some(0), "{algo}");
        assert!(
            stdout(&out).starts_with("YES insertions=1 "),
            "{algo}: {}",
            stdout(&out)
        );
    }
}

#[test]
fn solve_no_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("tight.gms");
    fs::write(&inst, "p gms vc 4 2 1 0\nl 1\ne 0 1\nl 2\ne 2 3\n").unwrap();
    let out = gms(&["solve", path_str(&inst), "--algo", "oracle"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("NO "));

    let out = gms(&[
        "solve",
        &fixture("two_disjoint_edges.gms"),
        "--algo",
        "backward",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["answer"], "yes");
    assert_eq!(report["algorithm"], "backward");
    assert_eq!(report["problem"], "vc");
    assert_eq!(report["insertions"], 1);
    assert_eq!(report["solution"].as_array().unwrap().len(), 2);

    // a local budget of 1 still admits the single move
    let out = gms(&[
        "solve",
        &fixture("two_disjoint_edges.gms"),
        "--algo",
        "oracle",
        "--q",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = gms(&[
        "solve",
        &fixture("two_disjoint_edges.gms"),
        "--algo",
        "backward",
        "--q",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "frameworks refuse a local budget"
    );
}

#[test]
fn witness_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("w.sol");
    let out = gms(&[
        "solve",
        &fixture("two_disjoint_edges.gms"),
        "--algo",
        "oracle",
        "--witness",
        path_str(&sol),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let ok = gms(&["verify", &fixture("two_disjoint_edges.gms"), path_str(&sol)]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("ACCEPTED insertions=1 ell=1"));

    // drop the vertex chosen for layer 2
    let text = fs::read_to_string(&sol).unwrap();
    let tampered: String = text
        .lines()
        .map(|l| {
            if l.starts_with("S 2") {
                "S 2".to_string()
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let bad = dir.path().join("bad.sol");
    fs::write(&bad, tampered + "\n").unwrap();
    let out = gms(&["verify", &fixture("two_disjoint_edges.gms"), path_str(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.starts_with("REJECTED"), "{report}");
    assert!(
        report.contains("layer 2: property not satisfied"),
        "{report}"
    );

    let fixed = gms(&[
        "verify",
        &fixture("two_disjoint_edges.gms"),
        &fixture("two_disjoint_edges.sol"),
        "--json",
    ]);
    assert_eq!(fixed.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&fixed.stdout).unwrap();
    assert_eq!(json["accepted"], true);
    assert_eq!(json["insertion_total"], 1);
}

#[test]
fn errors_exit_two() {
    assert_eq!(gms(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gms(&["solve"]).status.code(), Some(2));
    assert_eq!(gms(&["solve", "/nonexistent.gms"]).status.code(), Some(2));
    assert_eq!(
        gms(&["solve", &fixture("two_disjoint_edges.gms"), "--bogus"])
            .status
            .code(),
        Some(2)
    );
    let out = gms(&[
        "solve",
        &fixture("two_disjoint_edges.gms"),
        "--algo",
        "magic",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernelize_writes_instance_and_map() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("k.gms");
    let out = gms(&[
        "kernelize",
        &fixture("two_disjoint_edges.gms"),
        "--out",
        path_str(&kernel),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let map: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("k.gms.map.json")).unwrap())
            .unwrap();
    assert_eq!(map["problem"], "vc");
    assert_eq!(map["vertex_map"], serde_json::json!([0, 1, 2, 3]));
    let solved = gms(&["solve", path_str(&kernel), "--algo", "oracle"]);
    assert_eq!(solved.status.code(), Some(0));

    let star = dir.path().join("star.gms");
    fs::write(&star, "p gms vc 5 1 1 0\nl 1\ne 0 1\ne 0 2\ne 3 4\ne 1 2\n").unwrap();
    let out = gms(&[
        "kernelize",
        path_str(&star),
        "--out",
        path_str(&dir.path().join("s.gms")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("NO layer 1:"), "{}", stdout(&out));
}

#[test]
fn generate_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("vc.gms");
    let out = gms(&[
        "generate",
        "--reduction",
        "clique-vc",
        "--source",
        &fixture("k4.src"),
        "--param",
        "3",
        "--out",
        path_str(&target),
        "--witness-from",
        &fixture("k4_triangle.cert"),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta = stdout(&out);
    for expected in ["k=37", "ell=471", "tau=1735"] {
        assert!(
            meta.split_whitespace().any(|t| t == expected),
            "{expected} missing from {meta}"
        );
    }
    let verified = gms(&[
        "verify",
        path_str(&target),
        path_str(&dir.path().join("vc.gms.sol")),
    ]);
    assert_eq!(verified.status.code(), Some(0));
    assert!(stdout(&verified).starts_with("ACCEPTED insertions=471 ell=471"));

    let to_stdout = gms(&[
        "generate",
        "--reduction",
        "setcover-eds",
        "--source",
        &fixture("cover_family.src"),
        "--param",
        "2",
    ]);
    assert_eq!(to_stdout.status.code(), Some(0));
    assert!(stdout(&to_stdout)
        .lines()
        .any(|l| l.starts_with("p gms eds ")));

    let wrong = gms(&[
        "generate",
        "--reduction",
        "clique-vc",
        "--source",
        &fixture("cover_family.src"),
        "--param",
        "2",
    ]);
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn enumerate_lists_minimal_sets() {
    let out = gms(&[
        "enumerate",
        &fixture("two_disjoint_edges.gms"),
        "--layer",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{0}\n{1}\n# 2 sets\n");
    let forced = gms(&[
        "enumerate",
        &fixture("two_disjoint_edges.gms"),
        "--layer",
        "2",
        "--forced",
        "0",
    ]);
    assert_eq!(forced.status.code(), Some(0));
    assert_eq!(stdout(&forced), "# 0 sets\n");
    let p3 = gms(&["enumerate", &fixture("p3_twice.gms"), "--layer", "1"]);
    assert_eq!(stdout(&p3).lines().last(), Some("# 2 sets"));
    assert_eq!(
        gms(&["enumerate", &fixture("p3_twice.gms"), "--layer", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bench_over_generated_suite_agrees() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, seed) in [("vc", "3"), ("pc", "4")] {
        let out = gms(&[
            "suite",
            "--out",
            path_str(dir.path()),
            "--kind",
            kind,
            "--count",
            "12",
            "--seed",
            seed,
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let csv = dir.path().join("bench.csv");
    let out = gms(&[
        "bench",
        "--suite",
        path_str(dir.path()),
        "--csv",
        path_str(&csv),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let cols = [
        col("backward_verdict"),
        col("forward_verdict"),
        col("oracle_verdict"),
    ];
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let verdicts: Vec<&str> = cols.iter().map(|&c| cells[c]).collect();
        assert!(verdicts.iter().all(|v| *v == verdicts[0]), "{line}");
        assert!(["yes", "no"].contains(&verdicts[0]), "{line}");
        assert_eq!(cells[col("agree")], "yes");
        rows += 1;
    }
    assert_eq!(rows, 24);
}

#[test]
fn deterministic_output() {
    let run = || {
        let out = gms(&[
            "solve",
            &fixture("p3_twice.gms"),
            "--algo",
            "backward",
            "--json",
            "--threads",
            "1",
        ]);
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    assert_eq!(run(), run());
}
