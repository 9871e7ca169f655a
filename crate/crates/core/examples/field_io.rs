//! Writes a field file and a config, reads both back and runs the verifier on the field.
//!
//! `cargo run --release --example field_io`

use vortex_solitons::ansatz::{build_ansatz, ModelParams, Regime};
use vortex_solitons::cli::{run, Command};
use vortex_solitons::fields::GridSpec;
use vortex_solitons::io::{encode_field, load_field, save_field, AnyField, RunConfig};
use vortex_solitons::profile::solve_profile;

fn main() -> vortex_solitons::Result<()> {
    let dir = std::env::temp_dir().join("vortex_field_io");
    let prof = solve_profile(40.0, 0.01, 1e-10)?;
    let p = ModelParams::new(Regime::PairWm, 0.1, 0.0, 1.0)?;
    let v = build_ansatz(&p, GridSpec::square(2.0 * p.d, 0.25, p.regime.symmetry())?, &prof)?;
    let path = dir.join("pair.vsf");
    let any = AnyField::Complex(v);
    save_field(&any, &path)?;
    let back = load_field(&path)?;
    println!("{} bytes, bitwise roundtrip {}", encode_field(&any).len(), encode_field(&back) == encode_field(&any));
    let text = format!(
        "# verify the stored ansatz\nregime = PAIR_WM\neps = 0.1\nfield = {}\noutput_dir = {}\n",
        path.display(),
        dir.display()
    );
    let cfg = RunConfig::parse(&text)?;
    let out = run(Command::Verify, &cfg)?;
    print!("{}", out.report.render());
    Ok(())
}
