use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sporlock"))
}

fn s27() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks/iscas89/s27.bench")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Encrypts s27 into `dir` and returns (locked netlist, keys file).
fn locked(dir: &Path) -> (PathBuf, PathBuf) {
    let out = dir.join("s27_enc.bench");
    let keys = dir.join("keys.json");
    let o = run(&["encrypt", p(&s27()), "--out", p(&out), "--keys", p(&keys)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (out, keys)
}

#[test]
fn stats_prints_counts() {
    let o = run(&["stats", p(&s27())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "s27 4/1/3/10\n");
}

#[test]
fn brute_force_model() {
    let o = run(&["model", "brute-force", "--i", "32", "--c", "8", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("2^265 ~ 5.93e79"));
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("5928554968950589205686834432"));
}

#[test]
fn cycle_delay_model() {
    let o = run(&["model", "cycle-delay", "--ta", "128", "--n", "5"]);
    assert_eq!(stdout(&o), "8 = 8.000000000 (800.0000%)\n");
    let o = run(&["model", "cycle-delay", "--ta", "8", "--n", "11", "--sweep"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 4 * 11);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["stats", "--bogus", "x"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["simulate", p(&s27()), "--cycles", "3", "--case", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["stats", "/nonexistent/x.bench"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bench");
    std::fs::write(&bad, "INPUT(a)\nOUTPUT(y)\ny = AND(y, a)\n").unwrap();
    let o = run(&["stats", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty() && !o.stderr.is_empty());
}

#[test]
fn help_documents_every_flag() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["stats"], &[]),
        (&["encrypt"], &["--config", "--out", "--keys", "--seed"]),
        (
            &["simulate"],
            &["--keys", "--case", "--cycles", "--seed", "--vcd"],
        ),
        (
            &["eval-hd"],
            &[
                "--keys",
                "--cases",
                "--vectors",
                "--cycles",
                "--seed",
                "--csv",
            ],
        ),
        (
            &["attack"],
            &[
                "--oracle",
                "--keys-timing",
                "--max-seq",
                "--budget",
                "--config",
            ],
        ),
        (&["model", "brute-force"], &["--i", "--c", "--n"]),
        (&["model", "cycle-delay"], &["--ta", "--n", "--sweep"]),
    ];
    for (cmd, flags) in cases {
        let mut args = cmd.to_vec();
        args.push("--help");
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}");
        let text = stdout(&o);
        for f in *flags {
            assert!(text.contains(f), "{cmd:?} help lacks {f}");
        }
    }
}

#[test]
fn encrypt_and_eval_hd_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ea, ka) = locked(a.path());
    let (eb, kb) = locked(b.path());
    assert_eq!(std::fs::read(&ea).unwrap(), std::fs::read(&eb).unwrap());
    assert_eq!(std::fs::read(&ka).unwrap(), std::fs::read(&kb).unwrap());
    let hd = |dir: &Path, e: &Path, k: &Path| {
        let csv = dir.join("hd.csv");
        let o = run(&[
            "eval-hd",
            p(&s27()),
            p(e),
            "--keys",
            p(k),
            "--vectors",
            "200",
            "--cycles",
            "300",
            "--seed",
            "9",
            "--csv",
            p(&csv),
        ]);
        assert!(o.status.success());
        assert_eq!(std::fs::read(&csv).unwrap(), o.stdout);
        o.stdout
    };
    let x = hd(a.path(), &ea, &ka);
    assert_eq!(x, hd(b.path(), &eb, &kb));
    let text = String::from_utf8(x).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "circuit,coverage,case,n_vectors,cycles,mean_hd");
    assert_eq!(lines[1], "s27,0.2,1,200,300,0.000000");
    assert_eq!(lines.len(), 4);
}

#[test]
fn simulate_writes_trace_and_vcd() {
    let dir = tempfile::tempdir().unwrap();
    let (e, k) = locked(dir.path());
    let vcd = dir.path().join("t.vcd");
    let o = run(&[
        "simulate",
        p(&e),
        "--keys",
        p(&k),
        "--case",
        "1",
        "--cycles",
        "20",
        "--vcd",
        p(&vcd),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 21);
    assert!(std::fs::read_to_string(&vcd)
        .unwrap()
        .contains("$enddefinitions"));
    let again = run(&[
        "simulate",
        p(&e),
        "--keys",
        p(&k),
        "--case",
        "1",
        "--cycles",
        "20",
    ]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn attack_derives_timing_from_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let (e, k) = locked(dir.path());
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"lfsr_width":5,"enc_out_width":3,"key_len":8,"sbj_bits":2,"coverage":0.2,"master_seed":0}"#).unwrap();
    let from_keys = run(&[
        "attack",
        p(&e),
        "--oracle",
        p(&s27()),
        "--keys-timing",
        p(&k),
        "--max-seq",
        "1",
    ]);
    let derived = run(&[
        "attack",
        p(&e),
        "--oracle",
        p(&s27()),
        "--keys-timing",
        "derive",
        "--config",
        p(&cfg),
        "--max-seq",
        "1",
    ]);
    assert_eq!(from_keys.status.code(), Some(0));
    assert_eq!(derived.status.code(), Some(0));
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for w in v["windows"].as_array_mut().unwrap() {
            w["wall_ms"] = 0.into();
        }
        v
    };
    assert_eq!(strip(&from_keys), strip(&derived));
    assert!(String::from_utf8_lossy(&from_keys.stderr).contains("window 0: recovered key matches"));
}

#[test]
fn attack_budget_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let (e, k) = locked(dir.path());
    let o = run(&[
        "attack",
        p(&e),
        "--oracle",
        p(&s27()),
        "--keys-timing",
        p(&k),
        "--budget",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["budget_exhausted"], true);
}
