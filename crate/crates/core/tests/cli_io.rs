//! Field files, configs, reports and the command-line pipeline end to end.

use num_complex::Complex64;
use std::process::Command as Proc;
use vortex_solitons::cli::{exit_code, run, Command};
use vortex_solitons::fields::{Field, GridSpec, Symmetry};
use vortex_solitons::io::{decode_field, encode_field, load_field, save_field, AnyField, Report, RunConfig};
use vortex_solitons::Error;

fn sample_field() -> AnyField {
    let spec = GridSpec::new(3.0, 2.0, 0.25, 0.5, Symmetry::Ring).unwrap();
    AnyField::Complex(Field::from_fn(spec, |x1, x2| Complex64::new((x1 * 1.3).sin() + 1e-300, x2.powi(3) / 7.0)))
}

fn config(dir: &std::path::Path, extra: &[(&str, &str)]) -> RunConfig {
    let mut c = RunConfig::default();
    c.set("output_dir", dir.to_str().unwrap()).unwrap();
    for (k, v) in extra {
        c.set(k, v).unwrap();
    }
    c
}

#[test]
fn field_files_roundtrip_bitwise() {
    let f = sample_field();
    let bytes = encode_field(&f);
    let back = decode_field(&bytes).unwrap();
    assert_eq!(encode_field(&back), bytes);
    match (&f, &back) {
        (AnyField::Complex(a), AnyField::Complex(b)) => {
            assert!(a.data.iter().zip(&b.data).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
            assert_eq!(a.spec, b.spec);
        }
        _ => panic!("kind changed"),
    }
    let s = AnyField::Scalar(Field::from_fn(GridSpec::square(2.0, 0.5, Symmetry::Pair).unwrap(), |x1, x2| x1 - x2));
    assert_eq!(decode_field(&encode_field(&s)).unwrap(), s);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/f.vsf");
    save_field(&f, &path).unwrap();
    assert_eq!(load_field(&path).unwrap(), f);
}

#[test]
fn malformed_field_files_are_rejected() {
    let bytes = encode_field(&sample_field());
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(matches!(decode_field(&bad), Err(Error::Format(_))));
    assert!(matches!(decode_field(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
    assert!(matches!(decode_field(&bytes[..30]), Err(Error::Format(_))));
    let mut long = bytes.clone();
    long.push(0);
    assert!(matches!(decode_field(&long), Err(Error::Format(_))));
    let mut huge = bytes.clone();
    huge[12..16].copy_from_slice(&u32::MAX.to_le_bytes());
    huge[16..20].copy_from_slice(&u32::MAX.to_le_bytes());
    assert!(matches!(decode_field(&huge), Err(Error::Format(_))));
    let mut kind = bytes;
    kind[4] = 9;
    assert!(matches!(decode_field(&kind), Err(Error::Format(_))));
    assert!(matches!(load_field(std::path::Path::new("/nonexistent/x.vsf")), Err(Error::Io(_))));
}

#[test]
fn configs_parse_and_validate() {
    let c = RunConfig::parse("# run\nregime = PAIR_SCH\neps = 0.1 # small\nkappa=0.25\n\n").unwrap();
    assert_eq!(c.raw("regime"), "PAIR_SCH");
    assert_eq!(c.f64("eps").unwrap(), 0.1);
    assert_eq!(c.f64("h1").unwrap(), 0.25);
    assert_eq!(c.list("eps_list").unwrap(), vec![0.1, 0.05, 0.025]);
    assert!(matches!(RunConfig::parse("colour = red"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("eps 0.1"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("eps = 0.5"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("regime = PAIR_XX"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("regime = PAIR_SCH\nkappa = 0.6"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("h1 = -1"), Err(Error::Config(_))));
    assert!(matches!(RunConfig::parse("ansatz_only = maybe"), Err(Error::Config(_))));
    assert!(RunConfig::parse("eps_list = 0.1, 0.3").is_err());
}

#[test]
fn reports_render_and_read_back() {
    let mut r = Report::default();
    r.section("a").text("k", "v").number("x", 0.1).int("n", 3);
    assert_eq!(r.get("a", "x").unwrap().parse::<f64>().unwrap(), 0.1);
    assert_eq!(r.get("a", "n"), Some("3"));
    assert_eq!(r.get("b", "x"), None);
    assert!(r.render().contains("k"));
}

#[test]
fn exit_codes_by_error_class() {
    assert_eq!(exit_code(&Error::Config("x".into())), 2);
    assert_eq!(exit_code(&Error::Format("x".into())), 4);
    assert_eq!(exit_code(&Error::NewtonDivergence { iters: 50, residual: 1.0 }), 3);
    assert_eq!(exit_code(&Error::NoRoot("x".into())), 3);
}

#[test]
fn profile_command_writes_csv_with_integrals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(Command::Profile, &config(dir.path(), &[])).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').map(|t| t.trim().parse().unwrap()).collect();
    assert!((last[3] - 0.25).abs() <= 1e-4 && (last[4] - 0.125).abs() <= 1e-6, "{last:?}");
    assert!(out.report.get("profile", "ode_residual_max").unwrap().parse::<f64>().unwrap() <= 1e-8);
    assert!(out.files.iter().all(|f| f.exists()));
    let first = std::fs::read(dir.path().join("profile_report.txt")).unwrap();
    run(Command::Profile, &config(dir.path(), &[])).unwrap();
    assert_eq!(std::fs::read(dir.path().join("profile_report.txt")).unwrap(), first);
}

#[test]
fn ansatz_then_verify_reports_opposite_windings() {
    let dir = tempfile::tempdir().unwrap();
    let base = [("eps", "0.1"), ("ansatz_only", "true")];
    let out = run(Command::Pair, &config(dir.path(), &base)).unwrap();
    for key in ["eps", "kappa", "d", "c", "omega"] {
        assert!(out.report.get("parameters", key).is_some(), "{key}");
    }
    let field = dir.path().join("ansatz.vsf");
    let v = run(Command::Verify, &config(dir.path(), &[("eps", "0.1"), ("field", field.to_str().unwrap())])).unwrap();
    assert_eq!(v.report.get("vortices_full", "windings"), Some("-1 +1"));
    assert_eq!(v.report.get("diagnostics", "norm_star").unwrap().parse::<f64>().unwrap(), 0.0);
    let again = run(Command::Verify, &config(dir.path(), &[("eps", "0.1"), ("field", field.to_str().unwrap())])).unwrap();
    assert_eq!(again.report.render(), v.report.render());
    let ring = run(Command::Verify, &config(dir.path(), &[("regime", "RING_WM"), ("eps", "0.1"), ("field", field.to_str().unwrap())]));
    assert!(matches!(ring, Err(Error::Config(_))));
    assert!(matches!(run(Command::Ring, &config(dir.path(), &base)), Err(Error::Config(_))));
}

#[test]
fn reduce_finds_the_balanced_separation() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(Command::Reduce, &config(dir.path(), &[("d_points", "4")])).unwrap();
    let d: f64 = out.report.get("balance", "d_star").unwrap().parse().unwrap();
    assert!((15.0..=25.0).contains(&d), "d* = {d}");
    assert!(dir.path().join("c_curve.csv").exists() && dir.path().join("balanced.vsf").exists());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vortex");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let st = Proc::new(bin).args(["pair", "--eps", "0.7", "--out", out]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Proc::new(bin).args(["verify", "--field", "/nonexistent/f.vsf", "--out", out]).output().unwrap();
    assert_eq!(st.status.code(), Some(4));
    let st = Proc::new(bin)
        .args(["pair", "--eps", "0.2", "--ansatz-only", "--h", "0.5", "--out", out])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    assert!(String::from_utf8_lossy(&st.stdout).contains("error_total"));
    let st = Proc::new(bin).args(["reduce", "--regime", "RING_SCH", "--eps", "0.2", "--out", out]).output().unwrap();
    assert_eq!(st.status.code(), Some(3));
}
