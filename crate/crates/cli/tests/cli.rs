use std::fs;
use std::process::{Command, Output};

fn septimic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_septimic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dim_prints_the_dimension() {
    let o = septimic(&["dim", "--d", "7", "--i", "20"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "35");
}

#[test]
fn zbasis_lists_cayley_forms() {
    let o = septimic(&["zbasis", "--d", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.starts_with("z2 = "), "{out}");
}

#[test]
fn st_then_verify_then_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = dir.path().join("small.recipe");
    fs::write(&recipe, "dv_1 = [t,t]^4\ndv_2 = [t,t]^6\ntr_1 = [t,dv_1]^4\nch_8 = [t,tr_1]^4\n").unwrap();
    let out = dir.path().join("out");
    let (r, o) = (recipe.to_str().unwrap(), out.to_str().unwrap());

    let st = septimic(&["st", "--recipe", r, "--target", "ch_8", "--out", o, "--no-cache"]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(stdout(&st).contains("ch_8: "));

    let v = septimic(&["verify", "--manifest", o]);
    assert!(v.status.success(), "{}", stdout(&v));
    assert!(stdout(&v).contains(" 0 failed"));

    let poly = out.join("polys/dv_1.poly");
    fs::write(&poly, fs::read_to_string(&poly).unwrap() + "+ z7\n").unwrap();
    let v = septimic(&["verify", "--manifest", o, "--checks", "grading"]);
    assert!(!v.status.success());
}

#[test]
fn discover_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    let d = septimic(&["discover", "--d", "4", "--max-degree", "6", "--out", o, "--screen-prime"]);
    assert!(d.status.success(), "{}", String::from_utf8_lossy(&d.stderr));
    assert!(stdout(&d).contains("total delta 2"));
    assert!(dir.path().join("manifest.toml").exists());
}

#[test]
fn bad_arguments_fail() {
    assert!(!septimic(&["dim", "--d", "0", "--i", "4"]).status.success());
    assert!(!septimic(&["dim", "--d", "seven"]).status.success());
    assert!(!septimic(&["verify", "--manifest", "/nonexistent", "--checks", "nope"]).status.success());
    let p = septimic(&["discover", "--d", "4", "--max-degree", "4", "--out", "/tmp/x", "--screen-prime", "7"]);
    assert!(!p.status.success());
}
