use std::path::Path;
use std::process::Command;

use cduality::output::read_manifest;
use sha2::{Digest, Sha256};

fn cduality(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cduality")).args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    let mut all = vec!["--out", dir.to_str().unwrap()];
    all.extend_from_slice(args);
    cduality(&all)
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["duality", "--c", "0.5", "--omega", "2", "--levels", "4"];
    assert!(run_in(a.path(), &args).status.success());
    assert!(run_in(b.path(), &args).status.success());
    for name in ["duality.csv", "duality.svg", "duality.txt"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
    // The resolved config records its own output directory; everything else
    // in the manifest, including the config hash, matches.
    let strip = |d: &Path| -> Vec<_> {
        read_manifest(d).unwrap().into_iter().filter(|e| e.0 != "run_config.toml").collect()
    };
    assert_eq!(strip(a.path()), strip(b.path()));
}

#[test]
fn manifest_lists_every_artifact_with_its_hash() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["converge"]).status.success());
    let entries = read_manifest(dir.path()).unwrap();
    let mut on_disk: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.txt")
        .collect();
    on_disk.sort();
    let listed: Vec<String> = entries.iter().map(|e| e.0.clone()).collect();
    assert_eq!(listed, on_disk);
    let stamp = &entries[0].2;
    for (path, sha, hash) in &entries {
        let bytes = std::fs::read(dir.path().join(path)).unwrap();
        assert_eq!(sha, &hex::encode(Sha256::digest(&bytes)));
        assert_eq!(hash, stamp);
    }
    let svg = std::fs::read_to_string(dir.path().join("converge.svg")).unwrap();
    assert!(svg.contains(stamp.as_str()));
}

#[test]
fn format_selection_limits_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in(dir.path(), &["--format", "csv", "bethe", "--particles", "3", "--hard-core"]).status.success());
    assert!(dir.path().join("bethe.csv").exists());
    assert!(!dir.path().join("bethe.txt").exists());
    let csv = std::fs::read_to_string(dir.path().join("bethe.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("summary,"));
}

#[test]
fn config_file_drives_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "command = \"spectrum\"\nformats = [\"text\"]\n[spectrum]\ninteraction = \"delta\"\nstrength = 0.0\nsector = \"even\"\nlevels = 3\n").unwrap();
    let out = dir.path().join("out");
    let o = cduality(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("spectrum.txt")).unwrap();
    let levels: Vec<f64> = text
        .lines()
        .filter_map(|l| l.split(" = ").nth(1)?.trim().parse().ok())
        .collect();
    assert_eq!(levels.len(), 3, "{text}");
    for (e, exact) in levels.iter().zip([1.0, 5.0, 9.0]) {
        assert!((e - exact).abs() < 1e-6, "{text}");
    }
    // The resolved configuration reproduces the run.
    let resolved = std::fs::read_to_string(out.join("run_config.toml")).unwrap();
    assert!(resolved.contains("interaction = \"delta\""));
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["converge", "--a", "0.1,0.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("a_values"));
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "command = \"bethe\"\n[bethe]\nparticle = 3\n").unwrap();
    assert_eq!(cduality(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cduality(&["--out", dir.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(cduality(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn failed_check_sets_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["fig2", "--couplings", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    assert!(dir.path().join("fig2_comparison.csv").exists());
}
