use std::path::Path;
use std::process::{Command, Output};

use everett_cli::{parse_report_json, Payload};

fn everett(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_everett"));
    cmd.args(args);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n.to_string());
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn run_to(dir: &Path, name: &str, args: &[&str], threads: usize) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--out", &p]);
    let out = everett(&full, Some(threads));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}

const RUNS: &[&[&str]] = &[
    &["overlap", "--dim", "16", "--trials", "20000", "--seed", "11"],
    &["zeno-random", "--dim", "8", "--k", "3", "--trials", "5000", "--seed", "2"],
    &["evolve", "--depth", "10", "--mode", "single-history", "--trials", "20000", "--seed", "4"],
    &["evolve", "--depth", "12", "--mode", "full-branching"],
    &["chain", "--dim", "2", "--devices", "4", "--reprep", "haar", "--seed", "8"],
    &["schmidt", "--dim-i", "4", "--dim-ii", "6", "--seed", "1", "--format", "csv"],
];

#[test]
fn reruns_and_worker_counts_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in RUNS.iter().enumerate() {
        let a = run_to(dir.path(), &format!("{i}a"), args, 1);
        let b = run_to(dir.path(), &format!("{i}b"), args, 1);
        let c = run_to(dir.path(), &format!("{i}c"), args, 4);
        assert_eq!(a, b, "rerun differs: {args:?}");
        assert_eq!(a, c, "thread count changes output: {args:?}");
        assert!(!a.contains(&b'\r'));
    }
}

#[test]
fn stdout_matches_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["zeno", "--k", "2"];
    let file = run_to(dir.path(), "z.json", &args, 2);
    let out = everett(&args, None);
    assert_eq!(code(&out), 0);
    assert_eq!(out.stdout, file);
    let rep = parse_report_json(std::str::from_utf8(&file).unwrap()).unwrap();
    let Payload::Zeno(z) = rep.result else { panic!("wrong payload") };
    assert!((z.transmission_probability - 27.0 / 64.0).abs() < 1e-12);
}

#[test]
fn golden_polarizer_csv() {
    let out = everett(&["zeno", "--k", "1", "--format", "csv"], None);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,probability\n1,0.25\n");
}

#[test]
fn golden_worlds_json() {
    let out = everett(&["worlds"], None);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let expected = format!(
        r#"{{
  "config": {{
    "experiment": "worlds",
    "format": "json",
    "parameters": {{}},
    "seed": 0
  }},
  "result": {{
    "kind": "worlds",
    "log10_log10_worlds": null,
    "log10_ratio": {r},
    "log10_worlds": {r},
    "model": "linear",
    "planck_time_s": 5.3899999999999995e-44,
    "universe_age_s": 4.35e+17
  }},
  "tool": "everett",
  "version": "{v}"
}}
"#,
        r = everett_cli::report::format_float((4.35e17f64 / 5.39e-44).log10()),
        v = env!("CARGO_PKG_VERSION")
    );
    // exact ratio computation may differ in the last bit; compare structure first
    let got = parse_report_json(&text).unwrap();
    let Payload::Worlds(w) = &got.result else { panic!() };
    assert!((w.log10_ratio - 60.9069).abs() < 1e-3);
    assert_eq!(text.lines().count(), expected.lines().count());
    for (g, e) in text.lines().zip(expected.lines()) {
        if !e.contains("log10_") {
            assert_eq!(g, e);
        }
    }
}

#[test]
fn exit_codes() {
    // config errors
    assert_eq!(code(&everett(&["zeno", "--k", "-1"], None)), 2);
    assert_eq!(code(&everett(&["overlap", "--dim", "4"], None)), 2);
    assert_eq!(code(&everett(&["overlap", "--dim", "4", "--trials", "9", "--bogus", "1"], None)), 2);
    assert_eq!(code(&everett(&["nonsense"], None)), 2);
    assert_eq!(code(&everett(&[], None)), 2);
    // I/O
    assert_eq!(code(&everett(&["zeno", "--k", "1", "--config", "/no/such/file"], None)), 3);
    assert_eq!(code(&everett(&["zeno", "--k", "1", "--out", "/no/such/dir/out.json"], None)), 3);
    // resource cap
    let cap = everett(&["schmidt", "--dim-i", "200", "--dim-ii", "200"], None);
    assert_eq!(code(&cap), 4);
    assert!(cap.stdout.is_empty());
    // help and version succeed
    assert_eq!(code(&everett(&["--help"], None)), 0);
    assert_eq!(code(&everett(&["--version"], None)), 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("overlap.cfg");
    std::fs::write(&cfg, "# dims\nexperiment = overlap\ndim = 4\ntrials = 500\nseed = 6\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = everett(&["overlap", "--config", c], None);
    let explicit = everett(&["overlap", "--dim", "4", "--trials", "500", "--seed", "6"], None);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, explicit.stdout);
    let overridden = everett(&["overlap", "--config", c, "--dim", "8"], None);
    let rep = parse_report_json(std::str::from_utf8(&overridden.stdout).unwrap()).unwrap();
    let Payload::Overlap(o) = rep.result else { panic!() };
    assert_eq!((o.hilbert_dim, o.trials, o.seed), (8, 500, 6));
}
