use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn msd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msd")).args(args).env_remove("MSD_BUDGET").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn emit(dir: &TempDir, entry: &str, name: &str) -> PathBuf {
    let path = dir.path().join(name);
    let o = msd(&["catalog", "emit", entry, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = emit(&dir, "s2_x_s3()", "s.msd");
    let o = msd(&["validate", p(&good)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("OK"));

    let text = fs::read_to_string(&good).unwrap().replace("x1-1", "x9-1");
    let bad = dir.path().join("bad.msd");
    fs::write(&bad, text).unwrap();
    let o = msd(&["validate", p(&bad)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let garbled = dir.path().join("garbled.msd");
    fs::write(&garbled, fs::read_to_string(&good).unwrap().replace("y2+1", "y2?1")).unwrap();
    assert_eq!(code(&msd(&["validate", p(&garbled)])), 3);

    let lens = dir.path().join("lens.msd");
    fs::write(
        &lens,
        "msd 1\nmode nsection\ngenus 1\nfamilies 3\ncurve 1 : x1+0\ncurve 2 : y1+0 x1+1 y1+1\ncurve 3 : x1+2\n",
    )
    .unwrap();
    let o = msd(&["validate", p(&lens), "--json"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], false);
    let fail = v["subcollections"].as_array().unwrap().iter().find(|s| s["verdict"] == "fail").unwrap();
    assert_eq!(fail["families"], serde_json::json!([1, 2]));
    assert_eq!(fail["witness"]["kind"], "intersection_factors");
    assert_eq!(fail["witness"]["factors"], serde_json::json!([2]));

    assert_eq!(code(&msd(&["validate", p(&dir.path().join("missing.msd"))])), 1);
}

#[test]
fn usage_help_and_version() {
    assert_eq!(code(&msd(&["--help"])), 0);
    assert_eq!(code(&msd(&["--version"])), 0);
    assert_eq!(code(&msd(&["frobnicate"])), 1);
    assert_eq!(code(&msd(&["validate"])), 1);
}

#[test]
fn invariants_reports() {
    let dir = TempDir::new().unwrap();
    let s = emit(&dir, "s2_x_s3()", "s.msd");
    let v: Value = serde_json::from_str(&stdout(&msd(&["invariants", p(&s), "--json"]))).unwrap();
    let pieces = v["pieces"].as_object().unwrap();
    for (k, g) in pieces {
        let size = k.split(',').count();
        let expected = match size {
            1 => 0,
            2 => 1,
            _ => 3,
        };
        assert_eq!(g, expected, "{k}");
    }
    assert_eq!(v["euler"], 0);
    assert_eq!(v["pi1"]["certification"], "trivial-certified");

    let g0 = emit(&dir, "genus0(4)", "g0.msd");
    let v: Value = serde_json::from_str(&stdout(&msd(&["invariants", p(&g0), "--json"]))).unwrap();
    assert_eq!(v["h1"], serde_json::json!({"factors": [], "free_rank": 0}));
    assert_eq!(v["pi1"]["certification"], "trivial-certified");

    let o = emit(&dir, "order_p(4,6)", "o.msd");
    let v: Value = serde_json::from_str(&stdout(&msd(&["invariants", p(&o), "--json"]))).unwrap();
    assert_eq!(v["h1"]["factors"], serde_json::json!([6]));
    assert!(stdout(&msd(&["invariants", p(&o)])).contains("H1 = Z/6"));
}

#[test]
fn move_scripts() {
    let dir = TempDir::new().unwrap();
    let s = emit(&dir, "s2_x_s3()", "s.msd");
    let script = dir.path().join("stab.txt");
    fs::write(&script, "stab {1,2}\n").unwrap();
    let out = dir.path().join("out.msd");
    assert_eq!(code(&msd(&["move", p(&s), "--script", p(&script), "--out", p(&out)])), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("genus 4"));

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing\n").unwrap();
    let o = msd(&["move", p(&s), "--script", p(&empty)]);
    assert_eq!(stdout(&o), fs::read_to_string(&s).unwrap());

    let middle = dir.path().join("middle.txt");
    fs::write(&middle, "middle\n").unwrap();
    assert_eq!(code(&msd(&["move", p(&s), "--script", p(&middle), "--out", p(&out)])), 0);
    let v: Value = serde_json::from_str(&stdout(&msd(&["invariants", p(&out), "--json"]))).unwrap();
    assert_eq!(v["mode"], "cyclic");
    assert_eq!(v["euler"], 4);

    let summand = emit(&dir, "sphere_genus1(4,1)", "sphere.msd");
    let csum = dir.path().join("csum.txt");
    fs::write(&csum, format!("csum {}\n", summand.file_name().unwrap().to_str().unwrap())).unwrap();
    assert_eq!(code(&msd(&["move", p(&s), "--script", p(&csum), "--out", p(&out)])), 0);
    assert!(fs::read_to_string(&out).unwrap().contains("genus 4"));

    let broken = dir.path().join("broken.txt");
    fs::write(&broken, "stab {1,2,3,4}\n").unwrap();
    let o = msd(&["move", p(&s), "--script", p(&broken)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn catalog_list_names_every_generator() {
    let o = stdout(&msd(&["catalog", "list"]));
    for name in ["genus0", "sphere_genus1", "s1_x_sn", "s2_x_s3", "order_p", "in_s4_genus1", "fig8_rightmost"] {
        assert!(o.contains(name), "{name}");
    }
}

#[test]
fn census_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(code(&msd(&["census", "genus1", "--n", "4", "--bound", "10", "--out", p(&out)])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let kinds: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["classification"]["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.len(), 3);
    assert_eq!(kinds.iter().filter(|k| **k == "sphere").count(), 2);
    assert_eq!(code(&msd(&["census", "genus1", "--n", "4", "--allow-lens"])), 1);
}

#[test]
fn render_svg() {
    let dir = TempDir::new().unwrap();
    let count = |entry: &str| {
        let d = emit(&dir, entry, "d.msd");
        let svg = dir.path().join("d.svg");
        assert_eq!(code(&msd(&["render", p(&d), "--svg", p(&svg)])), 0);
        fs::read_to_string(&svg).unwrap()
    };
    let a = count("s1_x_sn(4)");
    assert_eq!(a.matches("class=\"curve\"").count(), 4);
    let b = count("s2_x_s3()");
    assert_eq!(b.matches("class=\"curve\"").count(), 12);
    assert_eq!(b, count("s2_x_s3()"));
    let c = count("genus0(4)");
    assert!(c.contains("<circle") && !c.contains("class=\"curve\""));
}

#[test]
fn budget_from_environment_and_flag() {
    let dir = TempDir::new().unwrap();
    let s = emit(&dir, "s2_x_s3()", "s.msd");
    let run = |env: Option<&str>, extra: &[&str]| -> Value {
        let mut c = Command::new(env!("CARGO_BIN_EXE_msd"));
        c.args(["validate", p(&s), "--json"]).args(extra).env_remove("MSD_BUDGET");
        if let Some(b) = env {
            c.env("MSD_BUDGET", b);
        }
        serde_json::from_str(&String::from_utf8(c.output().unwrap().stdout).unwrap()).unwrap()
    };
    let certified = |v: &Value| {
        v["subcollections"].as_array().unwrap().iter().filter(|s| s["verdict"] == "free-certified").count()
    };
    assert_eq!(certified(&run(None, &[])), 10);
    assert_eq!(certified(&run(Some("0"), &[])), 0);
    assert_eq!(certified(&run(Some("0"), &["--budget", "10000"])), 10);
}

#[test]
fn json_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let s = emit(&dir, "order_p(5,3)", "o.msd");
    let a = stdout(&msd(&["validate", p(&s), "--json"]));
    assert_eq!(a, stdout(&msd(&["validate", p(&s), "--json"])));
    let a = stdout(&msd(&["invariants", p(&s), "--json"]));
    assert_eq!(a, stdout(&msd(&["invariants", p(&s), "--json"])));
}
