use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use weylkit::io::{read_json, read_matrix_table};
use weylkit::linalg::{c64, fro};
use weylkit::{GbdtParams, Realization};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn weylkit(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylkit"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("WEYLKIT_OUT")
        .output()
        .expect("binary runs")
}

fn table(path: &Path, lead: usize) -> (Vec<Vec<f64>>, Vec<weylkit::CMat>) {
    let (labels, mats, _) = read_matrix_table(File::open(path).unwrap(), lead).unwrap();
    (labels, mats)
}

#[test]
fn free_system_has_constant_weyl_function() {
    let dir = tempfile::tempdir().unwrap();
    let free = fixture("free.json");
    let out = weylkit(dir.path(), &["direct", "--params", free.to_str().unwrap(), "--xmax", "2", "--z", "0+1i"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, phi) = table(&dir.path().join("phi.csv"), 2);
    assert_eq!(phi.len(), 1);
    assert!((phi[0][(0, 0)] - c64(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn inverse_then_direct_reproduces_samples() {
    let dir = tempfile::tempdir().unwrap();
    let inv = dir.path().join("inv");
    let dir_out = dir.path().join("dir");
    let real = fixture("realization.json");
    let out = weylkit(&inv, &["inverse", "--realization", real.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let params = inv.join("params.json");
    let out = weylkit(&dir_out, &["direct", "--params", params.to_str().unwrap(), "--zgrid", "-2:2:5x0.3:3:4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Realization = read_json(&real).unwrap();
    let (zs, phi) = table(&dir_out.join("phi.csv"), 2);
    assert_eq!(phi.len(), 20);
    for (z, p) in zs.iter().zip(&phi) {
        let want = r.eval(c64(z[0], z[1])).unwrap();
        assert!(fro(&(p - want)) < 1e-8, "z = {z:?}");
    }
}

fn tree_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_are_byte_identical() {
    let pair = fixture("pair.json");
    let lattice = fixture("free_dirac_lattice.csv");
    let kernel = fixture("gaussian_kernel.csv");
    let jobs: Vec<Vec<&str>> = vec![
        vec!["direct", "--params", pair.to_str().unwrap(), "--zgrid", "-1:1:3x0.5:2:3"],
        vec!["interpolate", "--samples", lattice.to_str().unwrap(), "--n", "30"],
        vec!["fundamental", "--kernel", kernel.to_str().unwrap(), "--d=-1,-2", "--z", "0.5+0.8i"],
        vec!["check"],
    ];
    for job in jobs {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        assert!(weylkit(a.path(), &job).status.success(), "{job:?}");
        assert!(weylkit(b.path(), &job).status.success(), "{job:?}");
        let (ta, tb) = (tree_bytes(a.path()), tree_bytes(b.path()));
        assert!(ta.len() >= 2);
        assert_eq!(ta, tb, "{job:?}");
        for (_, bytes) in &ta {
            assert!(!bytes.contains(&b'\r'));
        }
    }
}

#[test]
fn check_passes_on_bundled_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = weylkit(dir.path(), &["check"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("0 failed"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(weylkit(dir.path(), &["direct", "--bogus"]).status.code(), Some(2));
    assert_eq!(weylkit(dir.path(), &["direct", "--params", "/does/not/exist.json"]).status.code(), Some(2));
    assert_eq!(weylkit(dir.path(), &["direct", "--params", fixture("free.json").to_str().unwrap(), "--z", "1+2j"]).status.code(), Some(2));

    // A broken departure identity is a validation failure.
    let mut params: GbdtParams = read_json(&fixture("pair.json")).unwrap();
    params.alpha[(0, 1)] += c64(0.5, 0.0);
    let bad = dir.path().join("bad.json");
    weylkit::io::write_json(&bad, &params).unwrap();
    let out = weylkit(dir.path(), &["direct", "--params", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));

    // Outside the half-plane of the series.
    let lattice = fixture("free_dirac_lattice.csv");
    let out = weylkit(dir.path(), &["interpolate", "--samples", lattice.to_str().unwrap(), "--z", "0+0.5i"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_weylkit"))
        .args(["direct", "--params", fixture("free.json").to_str().unwrap()])
        .env("WEYLKIT_OUT", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("run-manifest.json").exists());
    let manifest: serde_json::Value = read_json(&target.join("run-manifest.json")).unwrap();
    assert_eq!(manifest["subcommand"], "direct");
    assert_eq!(manifest["parameters"]["nx"], 21);
}

#[test]
fn recover_constant_potential_from_tabulated_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = fixture("constant_potential_phi.csv");
    let out = weylkit(dir.path(), &["recover", "--samples", samples.to_str().unwrap(), "--l", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (xs, v) = table(&dir.path().join("v.csv"), 1);
    let worst = xs.iter().zip(&v).filter(|(x, _)| x[0] < 1.0).map(|(_, v)| (v[(0, 0)] - c64(0.5, 0.0)).norm()).fold(0.0, f64::max);
    assert!(worst < 2e-2, "{worst}");
}

#[test]
fn interpolate_free_dirac_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let lattice = fixture("free_dirac_lattice.csv");
    let out = weylkit(dir.path(), &["interpolate", "--samples", lattice.to_str().unwrap()]);
    assert!(out.status.success());
    let (_, vals) = table(&dir.path().join("value.csv"), 2);
    assert!(fro(&(&vals[0] - weylkit::linalg::identity(2) * c64(0.0, 1.0))) < 1e-3);
    let (rows, _) = table(&dir.path().join("series.csv"), 4);
    assert_eq!(rows.len(), 61);
}
