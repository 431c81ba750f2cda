//! End-to-end runs of the `anfsat` binary.

use std::fs;
use std::process::{Command, Output};

use anfsat_cli::document::ResultDocument;
use serde_json::Value;
use tempfile::TempDir;

const SYSTEM: &str = r#"{"format":"anfsat-instance/1","num_vars":4,
 "factors":[[[1],[2],[2,3]],[[2],[3],[3,4]],[[3],[4],[4,1]],[[4],[1],[1,2]]]}"#;

const EXAMPLE_A: &str = r#"{"format":"anfsat-function/1","num_vars":4,
 "function":[1,[1],[2],[4],[1,3],[1,4],[2,4],[1,2,3],[2,3,4],[1,3,4]]}"#;

fn anfsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anfsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_four_factor_system() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sys.json", SYSTEM);
    let out = anfsat(&["solve", &input, "--emit", "implicants", "--emit", "count"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "sat");
    assert_eq!(
        v["implicants"],
        serde_json::json!([[-1, 2, -3, 4], [1, -2, 3, -4], [1, 2, 3, 4]])
    );
    assert_eq!(v["model_count"], "3");
    assert!(stdout(&out).contains("[-1,2,-3,4]"));
}

#[test]
fn count_command() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sys.json", SYSTEM);
    let out = anfsat(&["count", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["model_count"], "3");
    assert!(v.get("implicants").is_none());
}

#[test]
fn constant_zero_factor_is_unsat() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "unsat.json",
        r#"{"format":"anfsat-instance/1","num_vars":3,"factors":[[[1],[2]],[]]}"#,
    );
    let out = anfsat(&["solve", &input, "--emit", "implicants,count"]);
    assert_eq!(out.status.code(), Some(20));
    let v = json(&out);
    assert_eq!(v["status"], "unsat");
    assert_eq!(v["implicants"], serde_json::json!([]));
    assert_eq!(v["model_count"], "0");
}

#[test]
fn text_format_and_stdin() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "sys.txt",
        "# four factors\nx1 + x2 + x2*x3\nx2 + x3 + x3*x4\nx3 + x4 + x4*x1\nx4 + x1 + x1*x2\n",
    );
    let out = anfsat(&["solve", "--format", "text", &input, "--emit", "solutions"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["solutions"], serde_json::json!(["0101", "1010", "1111"]));

    let mut child = Command::new(env!("CARGO_BIN_EXE_anfsat"))
        .args(["solve", "-", "--emit", "count"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(SYSTEM.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["model_count"], "3");
}

#[test]
fn example_function_implicants() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "f.json", EXAMPLE_A);
    let out = anfsat(&["implicants", &input, "--emit", "implicants,count"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["implicants"],
        serde_json::json!([
            [-1, -2, -3, -4],
            [-1, -2, 3, -4],
            [-1, 2, 3, 4],
            [1, -2, 3, -4],
            [1, 2, -4]
        ])
    );
    assert_eq!(v["model_count"], "6");
}

#[test]
fn implicants_of_constants() {
    let dir = TempDir::new().unwrap();
    let one = write(&dir, "one.json", r#"{"format":"anfsat-function/1","num_vars":5,"function":[1]}"#);
    let out = anfsat(&["implicants", &one, "--emit", "implicants,count"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["implicants"], serde_json::json!([[]]));
    assert_eq!(v["model_count"], "32");

    let zero = write(&dir, "zero.json", r#"{"format":"anfsat-function/1","num_vars":5,"function":[]}"#);
    let out = anfsat(&["implicants", &zero]);
    assert_eq!(out.status.code(), Some(20));
    assert_eq!(json(&out)["status"], "unsat");
}

#[test]
fn verify_solver_output_and_tampered_result() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sys.json", SYSTEM);
    let result = dir.path().join("result.json");
    let out = anfsat(&["solve", &input, "-o", result.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = anfsat(&["verify", &input, result.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).starts_with("equivalent"));

    let mut doc = ResultDocument::parse(&fs::read_to_string(&result).unwrap()).unwrap();
    doc.implicants = Some(Vec::new());
    let tampered = write(&dir, "tampered.json", &doc.to_json());
    let out = anfsat(&["verify", &input, &tampered]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.starts_with("not equivalent"), "{text}");
    assert!(text.contains("1010"), "{text}");
}

#[test]
fn verify_refuses_past_limit() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sys.json", SYSTEM);
    let out = anfsat(&["verify", &input, "--limit", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn expansion_guard_needs_force() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "wide.json", r#"{"format":"anfsat-instance/1","num_vars":12,"factors":[[[1]]]}"#);
    let out = anfsat(&["solve", &input, "--emit", "solutions", "--max-solutions", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let out = anfsat(&["solve", &input, "--emit", "solutions", "--max-solutions", "100", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["solutions"].as_array().unwrap().len(), 2048);
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", r#"{"format":"anfsat-instance/1","factors":[[[0]]]}"#);
    assert_eq!(anfsat(&["solve", &bad]).status.code(), Some(1));
    assert_eq!(anfsat(&["solve"]).status.code(), Some(1));
    assert_eq!(anfsat(&["solve", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(anfsat(&["gen", "--n", "3", "--m", "1", "--k", "5"]).status.code(), Some(1));
    assert_eq!(anfsat(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = anfsat(&["gen", "--n", "4", "--m", "4", "--k", "3", "--seed", "7", "-o", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let first = fs::read(&a).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, fs::read(&b).unwrap());

    let other = anfsat(&["gen", "--n", "4", "--m", "4", "--k", "3", "--seed", "8"]);
    assert_ne!(other.stdout, first);
}

#[test]
fn gen_planted_output_is_solvable() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p.txt");
    let out = anfsat(&[
        "gen", "--n", "10", "--m", "12", "--k", "3", "--seed", "3", "--planted", "1011001110",
        "--format", "text", "-o", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = anfsat(&["solve", "--format", "text", path.to_str().unwrap(), "--emit", "solutions"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["solutions"].as_array().unwrap().iter().any(|s| s == "1011001110"));
}

#[test]
fn analyze_from_counts() {
    let out = anfsat(&["analyze", "--segments", "100", "--longest", "10", "--procs", "1,10", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["table"][0]["speedup"]["exact"], "1");
    assert_eq!(v["table"][1]["speedup"]["exact"], "100/19");
    assert_eq!(v["parallel_fraction"]["exact"], "9/10");
    assert_eq!(v["critical_speedup"]["exact"], "100/19");

    let text = stdout(&anfsat(&["analyze", "--segments", "100", "--longest", "10", "--procs", "10"]));
    assert!(text.contains("100/19"), "{text}");
    assert_eq!(anfsat(&["analyze", "--segments", "5", "--longest", "10"]).status.code(), Some(1));
}

#[test]
fn analyze_from_result_document() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sys.json", SYSTEM);
    let result = dir.path().join("r.json");
    anfsat(&["solve", &input, "--stats", "-o", result.to_str().unwrap()]);
    let out = anfsat(&["analyze", result.to_str().unwrap(), "--procs", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["segments_total"].as_u64(), v["longest_chain"].as_u64()), (Some(4), Some(2)));
    assert_eq!(v["table"][0]["speedup"]["exact"], "4/3");
}

#[test]
fn threads_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.json");
    anfsat(&["gen", "--n", "14", "--m", "16", "--k", "4", "--seed", "11", "--plant-random", "-o", path.to_str().unwrap()]);
    let run = |threads: &str| {
        let out = anfsat(&[
            "solve", path.to_str().unwrap(), "--threads", threads, "--emit", "implicants,count,minwt,maxwt", "--stats",
        ]);
        ResultDocument::parse(&stdout(&out)).unwrap().without_timing().to_json()
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("0"));
}

#[test]
fn seeded_random_instances_verify() {
    let dir = TempDir::new().unwrap();
    for seed in 0..100u64 {
        let n = 2 + seed % 11;
        let m = 1 + seed % 9;
        let k = (1 + seed % 4).min(n);
        let path = dir.path().join(format!("r{seed}.json"));
        let p = path.to_str().unwrap();
        let mut args = vec![
            "gen".to_string(), "--n".into(), n.to_string(), "--m".into(), m.to_string(),
            "--k".into(), k.to_string(), "--seed".into(), seed.to_string(), "-o".into(), p.to_string(),
        ];
        if seed % 2 == 0 {
            args.push("--plant-random".into());
        }
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(anfsat(&args).status.code(), Some(0));
        let out = anfsat(&["verify", p]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {}", stdout(&out));
    }
}
