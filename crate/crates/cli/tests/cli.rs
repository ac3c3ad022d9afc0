use std::path::Path;
use std::process::{Command, Output};

fn cdsma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdsma"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn same_seed_gives_byte_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = cdsma(&[
            "run", "--nodes", "80", "--demand-s", "1", "--alpha", "0.1", "--runs", "8", "--seed", "5",
            "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "run,seed,start,final_host,c_alg,c_opt,beta,h_m,iterations");
    assert_eq!(lines.len(), 1 + 8 + 1);
    assert!(lines[9].starts_with("# mean_beta="));
}

#[test]
fn full_alpha_run_is_exact() {
    let text = stdout(&cdsma(&["run", "--topology", "grid", "--rows", "5", "--cols", "6", "--alpha", "1", "--runs", "4"]));
    for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        assert_eq!(line.split(',').nth(6), Some("1.0"), "{line}");
    }
}

#[test]
fn generated_files_feed_back_into_run_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let w = dir.path().join("w.txt");
    let out = cdsma(&[
        "generate", "--topology", "ba", "--nodes", "60", "--demand-s", "1",
        "--out", g.to_str().unwrap(), "--demand-out", w.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(Path::new(&g).exists() && Path::new(&w).exists());
    let topo = format!("file:{}", g.display());
    let oracle = stdout(&cdsma(&["oracle", "--topology", &topo, "--demand-file", w.to_str().unwrap()]));
    let row: Vec<&str> = oracle.lines().nth(1).unwrap().split(',').collect();
    let c_opt = row[1];

    let run = stdout(&cdsma(&[
        "run", "--topology", &topo, "--demand-file", w.to_str().unwrap(), "--runs", "5", "--algo", "lom",
    ]));
    for line in run.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[5], c_opt);
        assert!(fields[6].parse::<f64>().unwrap() >= 1.0);
    }
}

#[test]
fn sweep_reports_alpha_epsilon() {
    let text = stdout(&cdsma(&[
        "sweep", "--nodes", "60", "--demand-s", "2", "--alphas", "0.05,0.5,1", "--epsilon", "10", "--runs", "3",
    ]));
    assert_eq!(text.lines().next(), Some("alpha,subgraph_size,mean_beta,ci_beta,mean_h_m,ci_h_m"));
    assert!(text.lines().last().unwrap().contains("alpha_eps=0.05"));
}

#[test]
fn compare_marks_unreachable_distances_void() {
    let text = stdout(&cdsma(&["compare", "--nodes", "60", "--dgen", "0,40", "--runs", "3"]));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("0,3,0,1,0,1"), "{}", lines[1]);
    assert_eq!(lines[2], "40,0,--,--,--,--,--,--");
}

#[test]
fn input_errors_exit_with_one() {
    for args in [
        &["run", "--topology", "torus"][..],
        &["run", "--alpha", "0"],
        &["run", "--topology", "file:/nonexistent/edges.txt"],
        &["compare", "--nodes", "50"],
        &["frobnicate"],
    ] {
        let out = cdsma(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_cleanly() {
    let out = cdsma(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("compare"));
}
