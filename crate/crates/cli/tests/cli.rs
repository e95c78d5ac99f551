use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gbsknot"));
    c.env_remove("GBSKNOT_STEP_BUDGET");
    c
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn classify_trefoil_is_a_knot_group() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.gbs", "edge e1 a 2 b 3\n");
    let o = run(&["classify", f.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["one_knot"]["verdict"], "yes");
    assert_eq!(v["one_knot"]["p"], 2);
    assert_eq!(v["one_knot"]["q"], 3);
    assert_eq!(v["n_knot_ge3"]["verdict"], "yes");
    assert_eq!(v["witnesses"][0]["verified"], true);
}

#[test]
fn classify_loop_2_4_is_not_a_knot_group() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "l.gbs", "edge t a 2 a 4\n");
    let o = run(&["classify", f.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(10));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["one_knot"]["verdict"], "no");
    assert_eq!(v["n_knot_ge3"]["verdict"], "no");
    assert!(v["n_knot_ge3"]["reason"].as_str().unwrap().contains("gcd"));
}

#[test]
fn word_normal_form_in_bs_1_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.gbs", "edge t a 1 a 2\n");
    let o = run(&["word", f.to_str().unwrap(), "t^-1 a t"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "a^2");
}

#[test]
fn word_equality_and_ellipticity() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.gbs", "edge t a 2 a 3\n");
    let f = f.to_str().unwrap();
    assert_eq!(stdout(&run(&["word", f, "t^-1 a^2 t", "--equal", "a^3"])).trim(), "true");
    assert_eq!(stdout(&run(&["word", f, "t^-1 a t", "--equal", "a"])).trim(), "false");
    assert_eq!(stdout(&run(&["word", f, "t a^5 t^-1", "--elliptic"])).trim(), "true");
    assert_eq!(stdout(&run(&["word", f, "t a", "--elliptic"])).trim(), "false");
}

#[test]
fn budget_exhaustion_is_an_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.gbs", "edge t a 2 a 3\n");
    let o = bin()
        .args(["word", f.to_str().unwrap(), "t a t a t a t a"])
        .env("GBSKNOT_STEP_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn malformed_input_reports_position_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("zero.gbs", "edge e1 a 0 b 3\n", ":1:11:"),
        ("junk.gbs", "vertex a\nnode b\n", ":2:1:"),
        ("dup.gbs", "edge e a 2 b 3\nedge e b 2 c 3\n", ":2:6:"),
        ("split.gbs", "vertex a\nvertex b\n", ":2:8:"),
        ("empty.gbs", "# nothing\n", ":1:1:"),
        ("label.gbs", "edge e a 2.5 b 3\n", ":1:10:"),
    ];
    for (name, text, pos) in cases {
        let f = write(dir.path(), name, text);
        for cmd in ["validate", "classify", "reduce", "present", "modular", "witness"] {
            let o = run(&[cmd, f.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {name}");
            assert!(stderr(&o).contains(pos), "{cmd} {name}: {}", stderr(&o));
            assert!(!stderr(&o).contains("panicked"));
        }
    }
    let bin_file = dir.path().join("bin.gbs");
    fs::write(&bin_file, [0xffu8, 0xfe, 0x00]).unwrap();
    let o = run(&["classify", bin_file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["classify", dir.path().join("missing.gbs").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_words_exit_2() {
    let f = corpus().join("bs_2_3.gbs");
    let f = f.to_str().unwrap();
    for w in ["t^x", "^2", "q", "a^"] {
        let o = run(&["word", f, w]);
        assert_eq!(o.status.code(), Some(2), "{w}");
    }
    let o = run(&["abelianize", f, "--kill", "zz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn abelianize_with_kill_reproduces_quotients() {
    let trident = corpus().join("trident.gbs");
    let o = run(&["abelianize", trident.to_str().unwrap(), "--kill", "c", "--json"]);
    assert_eq!(stdout(&o).trim(), r#"{"rank":0,"torsion":[30]}"#);
    let lollipop = corpus().join("lollipop.gbs");
    let o = run(&["abelianize", lollipop.to_str().unwrap(), "--kill", "a"]);
    assert_eq!(stdout(&o).trim(), "Z + Z/3");
}

#[test]
fn reduce_present_modular() {
    let f = corpus().join("nonreduced.gbs");
    let o = run(&["reduce", f.to_str().unwrap()]);
    assert_eq!(stdout(&o), "vertex a\nvertex c\nedge e2 a 2 c 3\n");
    let f = corpus().join("segment_10_21.gbs");
    let o = run(&["present", f.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "< a1, a2, a3 | a1^2 a2^-3, a2^5 a3^-7 >");
    let f = corpus().join("cycle_9_8.gbs");
    let o = run(&["modular", f.to_str().unwrap(), "--json"]);
    assert_eq!(stdout(&o).trim(), r#"{"generators":["9/8"],"tag":"general"}"#);
}

#[test]
fn reduced_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(corpus()).unwrap() {
        let p = entry.unwrap().path();
        let o = run(&["reduce", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let back = write(dir.path(), "r.gbs", &stdout(&o));
        let again = run(&["reduce", back.to_str().unwrap()]);
        assert_eq!(stdout(&again), stdout(&o));
    }
}

#[test]
fn corpus_exit_codes() {
    let expect = [
        ("bs_1_2.gbs", 0),
        ("bs_2_3.gbs", 0),
        ("cinquefoil.gbs", 0),
        ("cycle_9_8.gbs", 0),
        ("edge_2_4.gbs", 10),
        ("klein.gbs", 10),
        ("lollipop.gbs", 10),
        ("loop_2_4.gbs", 10),
        ("nonreduced.gbs", 0),
        ("segment_10_21.gbs", 0),
        ("segment_shared.gbs", 10),
        ("torus.gbs", 10),
        ("trefoil.gbs", 0),
        ("trident.gbs", 10),
        ("unknot.gbs", 0),
    ];
    let files = fs::read_dir(corpus()).unwrap().count();
    assert_eq!(files, expect.len());
    for (name, code) in expect {
        let o = run(&["classify", corpus().join(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stdout(&o));
    }
}

#[test]
fn batch_mode_is_sorted_and_deterministic() {
    let dir = corpus();
    let a = run(&["classify", dir.to_str().unwrap()]);
    let b = run(&["classify", dir.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 15);
    let names: Vec<&str> = lines.iter().map(|v| v["input"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn batch_mode_reports_bad_files_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.gbs", "edge e1 a 2 b 3\n");
    write(dir.path(), "b.gbs", "edge e1 a 0 b 3\n");
    write(dir.path(), "notes.txt", "ignored\n");
    let o = run(&["classify", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with(r#"{"input":"#));
    assert!(lines[1].contains(r#""error":"#));
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for name in ["trefoil.gbs", "cycle_9_8.gbs", "segment_10_21.gbs", "trident.gbs"] {
        let f = corpus().join(name);
        let a = run(&["classify", f.to_str().unwrap(), "--json"]);
        let b = run(&["classify", f.to_str().unwrap(), "--json"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn big_labels_survive_json() {
    let dir = tempfile::tempdir().unwrap();
    let big = "340282366920938463463374607431768211507";
    let f = write(dir.path(), "big.gbs", &format!("edge e1 a 2 b {big}\n"));
    let o = run(&["classify", f.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(&format!("\"q\":{big}")), "{}", stdout(&o));
}
