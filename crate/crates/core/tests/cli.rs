//! End-to-end checks of the command-line binary: report determinism, the
//! documented exit-code contract, and a few known whole-pipeline values.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("monodromic-cli-test-{name}.toml"));
    let mut f = std::fs::File::create(&path).expect("create config");
    f.write_all(body.as_bytes()).expect("write config");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monodromic"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn analyze_is_deterministic_and_reports_endoscopy() {
    let cfg = write_config(
        "sp4",
        "cartan_type = \"C2\"\nisogeny = \"sc\"\nchi = [\"0\", \"1/2\"]\n",
    );
    let cfg = cfg.to_str().unwrap();
    let first = run(&["analyze", "--config", cfg]);
    assert!(first.status.success(), "analyze failed: {first:?}");
    let text = stdout(&first);
    assert!(text.contains("endoscopic_type = A1xA1"), "got:\n{text}");
    assert!(text.contains("# config-sha256: "), "got:\n{text}");
    // Byte-identical output on a repeated run of the same configuration.
    let second = run(&["analyze", "--config", cfg]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn count_split_sl3() {
    let cfg = write_config(
        "sl3-split",
        concat!(
            "cartan_type = \"A2\"\nisogeny = \"sc\"\nchi = [\"2/3\", \"2/3\"]\n",
            "[twist]\nkind = \"split\"\nq = 4\n",
        ),
    );
    let out = run(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "count failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("count = 9"), "got:\n{text}");
}

#[test]
fn count_unitary_su3() {
    let cfg = write_config(
        "su3",
        concat!(
            "cartan_type = \"A2\"\nisogeny = \"sc\"\nchi = [\"2/3\", \"2/3\"]\n",
            "[twist]\nkind = \"unitary\"\nq = 2\n",
        ),
    );
    let out = run(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "count failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("count = 9"), "got:\n{text}");
}

#[test]
fn count_skips_weyl_enumeration_for_large_type_a() {
    let cfg = write_config(
        "sl12",
        concat!(
            "cartan_type = \"A11\"\nisogeny = \"sc\"\n",
            "chi = [\"11/12\", \"11/12\", \"11/12\", \"11/12\", \"11/12\", \"11/12\", ",
            "\"11/12\", \"11/12\", \"11/12\", \"11/12\", \"11/12\"]\n",
            "[twist]\nkind = \"split\"\nq = 7\n",
        ),
    );
    let out = run(&["count", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "count failed: {out:?}");
    // gcd(12, 7 - 1)^2 = 36.
    let text = stdout(&out);
    assert!(text.contains("count = 36"), "got:\n{text}");
}

#[test]
fn count_refuses_nontrivial_small_group_with_exit_one() {
    let cfg = write_config(
        "refusal",
        concat!(
            "cartan_type = \"A2\"\nisogeny = \"sc\"\nchi = [\"0\", \"0\"]\n",
            "[twist]\nkind = \"split\"\nq = 4\n",
        ),
    );
    let out = run(&["count", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "expected refusal: {out:?}");
}

#[test]
fn malformed_config_exits_two() {
    let bad_toml = write_config("bad-toml", "cartan_type = [unbalanced\n");
    let out = run(&["analyze", "--config", bad_toml.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "expected input error: {out:?}");

    let bad_frac = write_config(
        "bad-frac",
        "cartan_type = \"A1\"\nisogeny = \"sc\"\nchi = [\"1/0\"]\n",
    );
    let out = run(&["analyze", "--config", bad_frac.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "expected input error: {out:?}");

    let out = run(&["analyze", "--config", "/nonexistent/nowhere.toml"]);
    assert_eq!(out.status.code(), Some(2), "expected input error: {out:?}");
}

#[test]
fn kl_cells_cocycle_bsl_smoke() {
    let cfg = write_config(
        "smoke-c2",
        "cartan_type = \"C2\"\nisogeny = \"sc\"\nchi = [\"0\", \"1/2\"]\n",
    );
    let cfg = cfg.to_str().unwrap();

    let out = run(&["kl", "--config", cfg, "--depth", "2"]);
    assert!(out.status.success(), "kl failed: {out:?}");
    assert!(stdout(&out).contains("c["), "got:\n{}", stdout(&out));

    let out = run(&["cells", "--config", cfg]);
    assert!(out.status.success(), "cells failed: {out:?}");
    assert!(
        stdout(&out).contains("cell_count = "),
        "got:\n{}",
        stdout(&out)
    );

    let out = run(&["bsl", "--config", cfg, "--word", "s1,s2,s1"]);
    assert!(out.status.success(), "bsl failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("product = "), "got:\n{text}");
    assert!(text.contains("w_min = "), "got:\n{text}");

    let sl2 = write_config(
        "smoke-sl2",
        "cartan_type = \"A1\"\nisogeny = \"sc\"\nchi = [\"1/2\"]\n",
    );
    let out = run(&["cocycle", "--config", sl2.to_str().unwrap(), "--q", "3"]);
    assert!(out.status.success(), "cocycle failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("trivialized = true"), "got:\n{text}");
}

#[test]
fn out_flag_writes_the_same_report_to_a_file() {
    let cfg = write_config(
        "outfile",
        "cartan_type = \"A2\"\nisogeny = \"sc\"\nchi = [\"1/3\", \"0\"]\n",
    );
    let dest = std::env::temp_dir().join("monodromic-cli-test-report.txt");
    let _ = std::fs::remove_file(&dest);
    let piped = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert!(piped.status.success());
    let filed = run(&[
        "analyze",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert!(filed.status.success());
    let on_disk = std::fs::read(&dest).expect("report file");
    assert_eq!(on_disk, piped.stdout);
}
