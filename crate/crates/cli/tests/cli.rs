use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use twirlc_core::compiler::{check_term_set, DDGroup};
use twirlc_core::sequencer::Schedule;
use twirlc_core::{kitaev, Mode};

fn twirlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twirlc")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel).display().to_string()
}

fn group(dir: &Path) -> DDGroup {
    serde_json::from_str(&fs::read_to_string(dir.join("group.json")).unwrap()).unwrap()
}

fn schedule(dir: &Path) -> Schedule {
    Schedule::from_json(&fs::read_to_string(dir.join("schedule.json")).unwrap()).unwrap()
}

fn compile(dir: &Path, args: &[&str]) -> Output {
    let out = dir.display().to_string();
    let mut all = vec!["compile", "--out", out.as_str()];
    all.extend_from_slice(args);
    twirlc(&all)
}

#[test]
fn color_bilinear_uses_three_colours() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("c.json");
    let o = twirlc(&["color", "--device", "bilinear7", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let c = twirlc_core::io::parse_coloring(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(c.num_colors(), 3);
}

#[test]
fn color_validates_supplied_colourings() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    fs::write(&bad, r#"{"assignment":{"0":1,"1":1,"2":1,"3":1,"4":1,"5":1,"6":1}}"#).unwrap();
    let o = twirlc(&["color", "--device", "bilinear7", "--coloring", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let good = data("colorings/heavy_hex.json");
    assert_eq!(code(&twirlc(&["color", "--device", "heavy_hex", "--coloring", &good])), 0);
}

#[test]
fn empty_device_has_no_colours() {
    let tmp = tempfile::tempdir().unwrap();
    let dev = tmp.path().join("empty.json");
    fs::write(&dev, r#"{"vertices":[],"hyperedges":[]}"#).unwrap();
    let o = twirlc(&["color", "--device", dev.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains(r#""assignment": {}"#));
}

#[test]
fn trilinear_chirality_gives_sixteen_slots() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compile(tmp.path(), &["--device", "trilinear", "--target", "chirality"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(group(tmp.path()).rank(), 4);
    let s = schedule(tmp.path());
    assert_eq!(s.cycle_length, 16);
    assert_eq!(s.lifted.as_ref().unwrap().len(), 12);
    let csv = fs::read_to_string(tmp.path().join("schedule.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn square_zz_gives_punctured_rm() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compile(tmp.path(), &["--device", "square", "--target", "zz"]);
    assert_eq!(code(&o), 0);
    assert_eq!(schedule(tmp.path()).cycle_length, 8);
    let g = group(tmp.path());
    assert!(g.same_group(&DDGroup::from_code(&twirlc_core::codes::rm::rm_punctured_for(6).unwrap())));
}

#[test]
fn kitaev_selective_gives_twelve_slots() {
    let tmp = tempfile::tempdir().unwrap();
    let comb = data("hamiltonians/kitaev_comb.json");
    let o = compile(tmp.path(), &["--device", "kitaev_folded", "--target", "selective", "--preserve", &comb]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let g = group(tmp.path());
    assert_eq!(g.rank(), 2);
    assert_eq!(schedule(tmp.path()).cycle_length, 12);

    let inst = kitaev::instance().unwrap();
    let pair = DDGroup::new(6, inst.w[..2].to_vec()).unwrap();
    let ts = inst.selective_terms();
    let a = check_term_set(&g, &ts).unwrap();
    let b = check_term_set(&pair, &ts).unwrap();
    assert!(a.passes() && b.passes());
    let statuses = |v: &twirlc_core::Verdict| v.terms.iter().map(|t| t.status).collect::<Vec<_>>();
    assert_eq!(statuses(&a), statuses(&b));

    let report = tmp.path().join("sim.json");
    let analog = data("hamiltonians/kitaev_analog.json");
    let sched = tmp.path().join("schedule.json");
    let o = twirlc(&[
        "simulate",
        "--schedule",
        sched.to_str().unwrap(),
        "--hamiltonian",
        &analog,
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    let coeffs = r["coefficients"].as_object().unwrap();
    assert_eq!(coeffs.len(), 9);
    for (term, c) in coeffs {
        assert!((c.as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-12, "{term}: {c}");
    }
}

#[test]
fn kitaev_bounded_needs_all_four_kernel_operators() {
    let tmp = tempfile::tempdir().unwrap();
    let comb = data("hamiltonians/kitaev_comb.json");
    let o = compile(
        tmp.path(),
        &["--device", "kitaev_folded", "--target", "selective", "--preserve", &comb, "--mode", "bounded"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let g = group(tmp.path());
    assert_eq!(g.rank(), 4);
    let s = schedule(tmp.path());
    assert_eq!(s.mode, Mode::Bounded);
    assert_eq!(s.cycle_length, 64);
}

#[test]
fn selective_without_preserve_file_is_an_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compile(tmp.path(), &["--device", "kitaev_folded", "--target", "selective"]);
    assert_eq!(code(&o), 4);
}

fn fig4b_group(dir: &Path) -> PathBuf {
    let p = dir.join("fig.json");
    fs::write(&p, r#"{"chi":3,"generators":["XIX","XYZ","YIY","YZX"]}"#).unwrap();
    p
}

#[test]
fn verify_fig4b_group() {
    let tmp = tempfile::tempdir().unwrap();
    let g = fig4b_group(tmp.path());
    let g = g.to_str().unwrap();
    assert_eq!(code(&twirlc(&["verify", "--group", g, "--device", "bilinear7", "--k", "2"])), 0);
    let out = tmp.path().join("v3.json");
    let o = twirlc(&["verify", "--group", g, "--device", "bilinear7", "--model", "all", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v: twirlc_core::Verdict = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v.counterexample().unwrap().term.weight(), 3);
}

#[test]
fn verify_expanded_spread_code_on_exchange_terms() {
    let tmp = tempfile::tempdir().unwrap();
    let code15 = twirlc_core::codes::pg::heisenberg_expand(
        &twirlc_core::codes::pg::line_code(4, &twirlc_core::codes::pg::spread_pg32()).unwrap(),
    );
    let p = tmp.path().join("g.json");
    fs::write(&p, serde_json::to_string(&DDGroup::from_code(&code15)).unwrap()).unwrap();
    let o = twirlc(&["verify", "--group", p.to_str().unwrap(), "--device", "complete:15", "--model", "heisenberg"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn compile_output_passes_verify() {
    let cases: [(&[&str], &[&str]); 6] = [
        (&["--device", "bilinear7", "--target", "universal2"], &["--model", "all", "--k", "2"]),
        (&["--device", "heavy_hex", "--target", "zz"], &["--model", "Z", "--k", "2"]),
        (&["--device", "heavy_hex", "--target", "zzz"], &["--model", "Z", "--k", "3"]),
        (&["--device", "heavy_hex", "--target", "zz", "--mode", "bounded"], &["--model", "Z", "--k", "2", "--mode", "bounded"]),
        (&["--device", "trilinear", "--target", "chirality"], &["--k", "3"]),
        (&["--device", "complete:5", "--target", "heisenberg"], &["--model", "heisenberg", "--k", "2"]),
    ];
    for (compile_args, verify_args) in cases {
        let tmp = tempfile::tempdir().unwrap();
        let o = compile(tmp.path(), compile_args);
        assert_eq!(code(&o), 0, "{compile_args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let g = tmp.path().join("group.json");
        let mut args = vec!["verify", "--group", g.to_str().unwrap(), "--device", compile_args[1]];
        args.extend_from_slice(verify_args);
        let o = twirlc(&args);
        assert_eq!(code(&o), 0, "{compile_args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn compile_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert_eq!(code(&compile(d.path(), &["--device", "trilinear", "--target", "chirality"])), 0);
    }
    for f in ["group.json", "verdict.json", "schedule.json", "schedule.csv", "lifted.csv"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn unsupported_colour_count_is_infeasible() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compile(tmp.path(), &["--device", "complete:9", "--target", "chirality"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bounded_tailored_expansion_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let o = compile(tmp.path(), &["--device", "complete:15", "--target", "heisenberg", "--mode", "bounded"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("bounded.json").exists());
}

#[test]
fn missing_device_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&compile(tmp.path(), &["--device", "/no/such/device.json", "--target", "zz"])), 4);
    assert_eq!(code(&twirlc(&["compile", "--device", "square"])), 4);
}

#[test]
fn scaling_csv_and_cross_check() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("s.csv");
    let svg = tmp.path().join("s.svg");
    let o = twirlc(&[
        "scaling",
        "--chi-max",
        "64",
        "--check-upto",
        "8",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.contains("mod-rm,7,3,8,"));
    assert!(text.contains("rm,6,4,16,160,24"));
    assert!(text.contains("lin-pg-d4,6,6,64,384,24"));
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn scaling_single_colour_rows() {
    let o = twirlc(&["scaling", "--families", "mod-rm,rm", "--chi-min", "1", "--chi-max", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    assert!(text.contains("mod-rm,1,1,2,"), "{text}");
    assert!(text.contains("rm,1,2,4,"), "{text}");
}

#[test]
fn simulate_xy4_and_zero_hamiltonian() {
    let tmp = tempfile::tempdir().unwrap();
    let xy4 = tmp.path().join("xy4");
    fs::create_dir_all(&xy4).unwrap();
    let g = xy4.join("g.json");
    fs::write(&g, r#"{"chi":1,"generators":["X","Y"]}"#).unwrap();
    let s = Schedule::from_json(&serde_json::to_string(&serde_json::json!({
        "mode": "bang-bang", "colors": 1, "L": 4,
        "frames": ["I", "X", "Z", "Y"], "interpulse": ["X", "Y", "X", "Y"]
    })).unwrap()).unwrap();
    let sp = xy4.join("schedule.json");
    fs::write(&sp, s.to_json().unwrap()).unwrap();
    let h = xy4.join("h.json");
    fs::write(&h, r#"{"n":1,"terms":[{"pauli":"X","coeff":0.3,"role":"suppress"},{"pauli":"Y","coeff":-0.5,"role":"suppress"},{"pauli":"Z","coeff":0.7,"role":"suppress"}]}"#).unwrap();
    let o = twirlc(&["simulate", "--schedule", sp.to_str().unwrap(), "--hamiltonian", h.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let slope = r["slope"].as_f64().unwrap();
    assert!((1.8..=2.2).contains(&slope), "{slope}");

    fs::write(&h, r#"{"n":1,"terms":[]}"#).unwrap();
    let o = twirlc(&["simulate", "--schedule", sp.to_str().unwrap(), "--hamiltonian", h.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r["residuals"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() < 1e-14));
}

#[test]
fn simulate_kitaev_check() {
    let o = twirlc(&["simulate", "--kitaev"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["cycle_length"], 12);
}

#[test]
fn thread_cap_is_honoured() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().display().to_string();
    let o = Command::new(env!("CARGO_BIN_EXE_twirlc"))
        .env("TWIRLC_THREADS", "1")
        .args(["compile", "--device", "square", "--target", "zz", "--out", &out])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_twirlc")).env("TWIRLC_THREADS", "many").args(["scaling"]).output().unwrap();
    assert_eq!(code(&o), 4);
}
