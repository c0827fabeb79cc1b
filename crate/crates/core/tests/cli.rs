use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use fraq::bench::ConvergenceReport;

fn fraq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraq"))
        .args(args)
        .env("FRAQ_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fraq-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn weights_csv() {
    let o = fraq(&["weights", "--scheme", "be", "--alpha", "0.5", "--tau", "1", "--n", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap(), vec!["i", "d_i"]);
    let vals: Vec<f64> = rd.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert_eq!(vals, vec![1.0, -0.5, -0.125, -0.0625]);
}

#[test]
fn kernel_error_csv() {
    let o = fraq(&[
        "kernel-error", "--scheme", "sbd", "--alpha", "0.3", "--tau", "1/1000", "--n", "200", "--np1", "2",
        "--np2", "60", "--head", "15",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("i,eps_abs\n"));
    assert_eq!(text.lines().count(), 202);
    let eps: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(eps[..15].iter().all(|&e| e == 0.0));
    assert!(eps[15..].iter().all(|&e| e < 1e-8));
}

#[test]
fn zero_data_gives_zero_snapshot() {
    let o = fraq(&["solve", "--init", "zero", "--grid-m", "31", "--tau", "1/50", "--scheme", "fastsbd"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("x,g1,g2\n"));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 31);
    for r in rows {
        let f: Vec<f64> = r.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!((f[1], f[2]), (0.0, 0.0));
    }
}

#[test]
fn snapshots_per_requested_time() {
    let dir = scratch_dir("solve");
    let o = fraq(&[
        "solve", "--grid-m", "15", "--tau", "1/20", "--at", "0.5,1", "--out", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["snapshot_t0.5.csv", "snapshot_t1.csv", "meta.txt"] {
        assert!(dir.join(name).exists(), "{name}");
    }
    let early = fs::read_to_string(dir.join("snapshot_t0.5.csv")).unwrap();
    let late = fs::read_to_string(dir.join("snapshot_t1.csv")).unwrap();
    assert_ne!(early, late);
    assert_eq!(fraq(&["solve", "--tau", "1/20", "--at", "0.5,1"]).status.code(), Some(2));
    assert_eq!(fraq(&["solve", "--tau", "1/20", "--at", "0.33"]).status.code(), Some(2));
}

#[test]
fn convergence_tables_share_the_reference() {
    let dir = scratch_dir("conv");
    let o = fraq(&[
        "convergence", "--alpha1", "0.3", "--alpha2", "0.6", "--a", "2", "--scheme", "be,fastbe", "--grid-m",
        "31", "--taus", "1/10,1/20,1/40", "--ref-tau", "1/80", "--init", "poly_sin", "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert!(table.contains("reference: be at tau = 0.0125"));
    let read = |name: &str| ConvergenceReport::read_rows(fs::File::open(dir.join(name)).unwrap()).unwrap();
    let be = read("convergence_be_0.3_0.6.csv");
    let fast = read("convergence_fastbe_0.3_0.6.csv");
    assert_eq!(be.len(), 3);
    assert!(be[0].rate1.is_none() && be[1].rate1.is_some());
    // 40 steps sit inside the exact window of the 64-node kernel
    for (c, f) in be.iter().zip(&fast) {
        assert!((c.e1 - f.e1).abs() <= 1e-10 * c.e1);
        assert!((c.e2 - f.e2).abs() <= 1e-10 * c.e2);
    }
    let meta = fs::read_to_string(dir.join("meta.txt")).unwrap();
    assert!(meta.contains("ref-tau = 0.0125"));
    assert!(meta.contains("scheme = be,fastbe"));
}

#[test]
fn config_file_then_flags() {
    let dir = scratch_dir("cfg");
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, "# weights dump\nscheme = sbd\nalpha = 0.5\ntau = 1/4\nn = 2\n").unwrap();
    let from_file = stdout(&fraq(&["weights", "--config", cfg.to_str().unwrap()]));
    let d0: f64 = from_file.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((d0 - (1.5f64 * 4.0).sqrt()).abs() < 1e-14);
    assert_eq!(from_file.lines().count(), 4);

    let overridden = stdout(&fraq(&["weights", "--config", cfg.to_str().unwrap(), "--n", "5", "--scheme", "be"]));
    assert_eq!(overridden.lines().count(), 7);
    let d0: f64 = overridden.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(d0, 2.0);
}

#[test]
fn exit_codes() {
    let dir = scratch_dir("bad");
    let cfg = dir.join("bad.cfg");
    fs::write(&cfg, "alpha 0.5\n").unwrap();
    let o = fraq(&["weights", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    assert_eq!(fraq(&["weights", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(fraq(&[]).status.code(), Some(2));
    assert_eq!(fraq(&["convergence", "--taus", "1/20,1/40", "--ref-tau", "1/20"]).status.code(), Some(2));

    let o = fraq(&["kernel-error", "--scheme", "sbd", "--alpha", "0.5", "--np1", "2", "--np2", "4", "--auto-head", "--n", "400"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bench_rows() {
    let o = fraq(&["bench", "--scheme", "be,fastsbd", "--grid-m", "15", "--n-list", "1,8"]);
    assert!(o.status.success());
    let rows = fraq::bench::read_bench_csv(&o.stdout[..]).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.seconds_loop > 0.0));
    assert_eq!(rows[2].scheme, fraq::SchemeKind::FastSbd);
}
