use std::fs;
use std::process::{Command, Output};

fn ecoop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecoop")).args(args).output().expect("binary runs")
}

#[test]
fn rate_region_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("region.csv");
    let res = ecoop(&["rate-region", "--preset", "fig6", "--scheme", "ideal", "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scheme,r_p,r_s_max"));
    assert_eq!(lines.count(), 21);
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    fs::write(&cfg, "# small sweep\nexperiment = su-sweep\ntrials = 5\nsweep = p_s0_db:0:10:2\n").unwrap();
    let res = ecoop(&["su-sweep", "--config", cfg.to_str().unwrap(), "--eta", "1", "--eta", "0.1", "--scheme", "power-split"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.starts_with("p_s0_db,eta,scheme,mean_rate_su\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
}

#[test]
fn same_seed_gives_same_bytes_for_any_worker_count() {
    let run = |workers: &str| ecoop(&["outage", "--trials", "40", "--seed", "5", "--workers", workers]).stdout;
    assert_eq!(run("1"), run("3"));
}

#[test]
fn param_curve_switches_to_alpha_for_time_splitting() {
    let res = ecoop(&["param-curve", "--preset", "fig6", "--scheme", "time-split"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.starts_with("param_value,scheme,rate_su,feasible\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",time-split,")));
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "trials = 10\nwidth = 3\n").unwrap();
    let res = ecoop(&["outage", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("width"));
}

#[test]
fn nothing_feasible_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hard.cfg");
    fs::write(&cfg, "experiment = rho-curve\npreset = fig6\nr_p = 40\nsweep = rho:0:1:5\n").unwrap();
    let res = ecoop(&["param-curve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3));
}
