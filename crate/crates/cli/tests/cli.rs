use std::path::PathBuf;
use std::process::{Command, Output};

use vftk_cli::{main_with_args, Basis, Report};
use vftk_core::frame::e8_table_frames;
use vftk_core::io::{format_frame, format_gram};
use vftk_core::lattice::e8_code_lattice;
use vftk_core::Budget;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn vftk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vftk")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> (i32, Report) {
    let out = vftk(args);
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    (out.status.code().unwrap(), r)
}

fn result<'a>(r: &'a Report, key: &str) -> &'a serde_json::Value {
    &r.results[key]
}

#[test]
fn report_roundtrips_through_json() {
    let (code, r) = report(&["stabilizer-orders", "--k", "3"]);
    assert_eq!(code, 0);
    let text = serde_json::to_string(&r).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.schema, 1);
    assert_eq!(back.command, "stabilizer-orders");
}

#[test]
fn stabilizer_orders_k1() {
    let (code, r) = report(&["stabilizer-orders", "--k", "1"]);
    assert_eq!(code, 0);
    // 2^15 * 16!
    assert_eq!(result(&r, "g_order"), "685597979049984000");
    assert!(r.all_pass());
}

#[test]
fn stabilizer_orders_k5_has_published_checks() {
    let (code, r) = report(&["stabilizer-orders", "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "g_order"), "10321920");
    assert!(r.checks.iter().any(|c| c.basis == Basis::Published));
}

#[test]
fn f2quad_n2_exhaustive() {
    let (code, r) = report(&["f2quad", "--n", "2", "--exhaustive"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "orbits").as_array().unwrap().len(), 2);
    assert_eq!(result(&r, "sigma_size"), "9");
}

#[test]
fn f2quad_n5_closed_form() {
    let (code, r) = report(&["f2quad", "--n", "5", "--compact"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "sigma_size"), "71145");
    let u: Vec<&str> = result(&r, "orbits")
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["u_order"].as_str().unwrap())
        .collect();
    assert_eq!(u, ["16", "2048", "32768", "65536", "16384"]);
}

#[test]
fn markings_h8() {
    let (code, r) = report(&["markings", "--code", "h8"]);
    assert_eq!(code, 0);
    let sizes: Vec<&str> = result(&r, "orbits")
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["size"].as_str().unwrap())
        .collect();
    assert_eq!(sizes, ["7", "42", "56"]);
}

#[test]
fn markings_from_code_file() {
    let (code, r) = report(&["markings", "--code", &data("h8.code")]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "aut_order"), "1344");
}

#[test]
fn miyamoto_k5() {
    let (code, r) = report(&["miyamoto", "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "distinct").as_array().unwrap().len(), 16);
    assert_eq!(result(&r, "characters").as_array().unwrap().len(), 31);
}

#[test]
fn unimodularize_modes() {
    for (mode, rank, det) in [("definite", 8, "1"), ("hyperbolic", 6, "1"), ("prime-power", 4, "529")] {
        let (code, r) = report(&["unimodularize", "--gram", &data("a2.gram"), "--mode", mode, "--min-prime", "20"]);
        assert_eq!(code, 0, "{mode}");
        assert_eq!(result(&r, "rank"), rank);
        assert_eq!(result(&r, "determinant"), det);
    }
}

#[test]
fn unimodularize_odd_determinant() {
    let (code, r) = report(&["unimodularize", "--gram", &data("a1.gram")]);
    assert_eq!(code, 0);
    assert_eq!(result(&r, "rank"), 8);
}

#[test]
fn hat_verify_a2() {
    let (code, r) = report(&["hat-verify", "--gram", &data("a2.gram")]);
    assert_eq!(code, 0);
    assert!(r.all_pass());
}

#[test]
fn frame_invariants_on_e8() {
    let dir = std::env::temp_dir().join(format!("vftk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let e8 = e8_code_lattice().lattice;
    let gram = dir.join("e8.gram");
    std::fs::write(&gram, format_gram(&e8)).unwrap();
    let expected = [("K8", "2^6 x 4^1"), ("K8'", "2^4 x 4^2"), ("L8", "2^2 x 4^3"), ("O8", "4^4")];
    for ((name, x), (want_name, want_type)) in e8_table_frames(&Budget::unlimited()).unwrap().into_iter().zip(expected) {
        assert_eq!(name, want_name);
        let frame = dir.join(format!("{}.frame", name.replace('\'', "p")));
        std::fs::write(&frame, format_frame(x.vectors())).unwrap();
        let (code, r) = report(&["frame-invariants", "--gram", gram.to_str().unwrap(), "--frame", frame.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(result(&r, "delta_type"), want_type);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn e8_frames_table() {
    let (code, r) = report(&["e8-frames", "--samples", "1", "--compact"]);
    assert_eq!(code, 0, "{:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    assert_eq!(result(&r, "census")["total"], "382185");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(vftk(&["bogus"]).status.code(), Some(2));
    assert_eq!(vftk(&["f2quad"]).status.code(), Some(2));
    assert_eq!(vftk(&["f2quad", "--n", "x"]).status.code(), Some(2));
    assert_eq!(vftk(&["unimodularize", "--gram", "g", "--mode", "other"]).status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    let (code, out, _) = main_with_args(["vftk", "--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("unimodularize"));
}

#[test]
fn input_errors_exit_3() {
    let out = vftk(&["unimodularize", "--gram", "/nonexistent/x.gram"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert_eq!(vftk(&["hat-verify", "--gram", &data("z2.gram")]).status.code(), Some(3));
    assert_eq!(vftk(&["hat-verify", "--gram", &data("bad.gram")]).status.code(), Some(3));
    assert_eq!(vftk(&["miyamoto", "--k", "0"]).status.code(), Some(3));
    assert_eq!(vftk(&["f2quad", "--n", "0"]).status.code(), Some(3));
}

#[test]
fn budget_exceeded_exits_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_vftk"))
        .args(["e8-frames"])
        .env(vftk_core::budget::BUDGET_ENV, "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}
