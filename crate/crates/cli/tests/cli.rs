use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellentuck")).args(args).output().unwrap()
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellentuck")).args(args).env(key, value).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir: PathBuf = [env!("CARGO_TARGET_TMPDIR"), "cli"].iter().collect();
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn enum_full_length() {
    let o = run(&["enum", "--k", "2", "--count", "6", "--full-length-only"]);
    assert_eq!(stdout(&o), "(0,0)≺(0,1)≺(1,1)≺(0,2)≺(1,2)≺(2,2)");
}

#[test]
fn dot_round_trip() {
    for k in ["2", "3", "4"] {
        let dot = stdout(&run(&["build-w", "--k", k, "--nodes", "40", "--format", "dot"]));
        let path = scratch(&format!("w{k}.dot"), &dot);
        let o = run(&["validate", "--file", &path]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "valid: 40 nodes");
    }
}

#[test]
fn byte_identical_reruns() {
    let args =
        ["pigeonhole", "--a", "[]", "--member", "W3:200", "--coloring", "random:3", "--seed", "11", "--len", "7"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, run(&args).stdout);
}

#[test]
fn small_operations() {
    assert_eq!(stdout(&run(&["classify-n", "--k", "2", "--n", "2"])), r#"{"n":2,"l":0}"#);
    assert_eq!(stdout(&run(&["project", "--node", "[6,14,25]", "--level", "2", "--k", "3"])), "{6,14}");
    assert_eq!(stdout(&run(&["project", "--node", "[3,6]", "--level", "0"])), "∅");
    assert_eq!(
        stdout(&run(&["extensions", "--approx", "[[0,1],[0,2]]", "--member", "W2:15"])),
        "[[3,4],[3,6],[7,8],[3,10],[7,11],[12,13],[3,15],[7,16],[12,17],[18,19]]"
    );
    assert_eq!(
        stdout(&run(&["construct", "--a", "[[3,6]]", "--member", "W2:40", "--len", "3"])),
        r#"{"k":2,"nodes":[[3,6],[3,10],[12,13]]}"#
    );
}

#[test]
fn embed_from_oracle_file() {
    let even: Vec<String> = ellentuck::build_w(2, 120)
        .nodes()
        .iter()
        .filter(|n| n.max_index().unwrap() % 2 == 0)
        .map(|n| format!("{:?}", n.indices()))
        .collect();
    let path = scratch("even.json", &format!("[{}]", even.join(",")));
    let o = run(&["embed", "--k", "2", "--oracle", &path, "--len", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a: ellentuck::FiniteApprox = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(a.len(), 6);
    assert!(a.is_valid() && a.nodes().iter().all(|n| n.max_index().unwrap() % 2 == 0));
}

#[test]
fn fuse_and_canonize() {
    let o = run(&["fuse", "--a", "[[0,1]]", "--A", "W2:60", "--B", "W2:60", "--len", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "canonize-ext",
        "--s",
        "[[0,1],[0,2]]",
        "--member",
        "W2:300",
        "--coloring",
        "random:40",
        "--seed",
        "3",
        "--len",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o =
        run(&["canonize-arn", "--k", "3", "--n", "1", "--relation", "vector:2", "--member", "W3:100", "--len", "10"]);
    assert!(stdout(&o).starts_with(r#"{"vector":[2]"#));
}

#[test]
fn fronts_and_maps() {
    let ar1: Vec<String> = ellentuck::build_w(2, 15).nodes().iter().map(|n| format!("[{:?}]", n.indices())).collect();
    let family = format!("[{}]", ar1.join(","));
    let o = run(&["check-front", "--family", &family, "--member", "W2:15"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), r#"{"cover":"Covered","nash_williams":true}"#);
    let o = run(&["check-front", "--family", "[[[0,1]],[[0,1],[0,2]]]", "--member", "W2:15"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["check-irreducible", "--map", r#"{"uniform":[1]}"#, "--family", &family]);
    assert_eq!(stdout(&o), r#"{"inner":true,"irreducible":true}"#);
    let o = run(&["check-irreducible", "--map", r#"{"uniform":[3]}"#, "--family", &family]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let o = run(&["validate", "--file", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--file"));
    let o = run(&["project", "--node", "[99,100]", "--level", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--node"));
    let o = run(&["construct", "--a", "[[0,1]]", "--member", "W2:3", "--len", "9"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run_env(
        &["canonize-arn", "--k", "2", "--n", "1", "--relation", "vector:1", "--member", "W2:100", "--len", "12"],
        "ELLENTUCK_BUDGET",
        "3",
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
    let o = run_env(&["enum", "--k", "2", "--count", "3"], "ELLENTUCK_BUDGET", "lots");
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "pigeonhole",
        "--a",
        "[[0,1],[3,4]]",
        "--member",
        "W2:30",
        "--coloring",
        "random:2",
        "--seed",
        "1",
        "--len",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}
