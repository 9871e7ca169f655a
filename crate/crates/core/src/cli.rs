//! The command-line pipeline: every subcommand reads a [`RunConfig`], writes its artifacts
//! under `output_dir` and returns a deterministic report.

use crate::ansatz::{build_ansatz, error_field, kernel_zd, ModelParams, Regime};
use crate::diagnostics::{detect_vortices, detect_vortices_lattice, diagnose};
use crate::error::{Error, Result};
use crate::fields::{ComplexField, GridSpec, Symmetry};
use crate::io::{csv_string, load_field, num, save_field, write_text, AnyField, Report, RunConfig};
use crate::profile::{profile_integrals, profile_integrals_upto, solve_profile, VortexProfile};
use crate::reconstruct::{pde_residual, refinement_order, spacetime_field, unscale, SampleBlock};
use crate::reduction::{leading_c, numeric_c_curve, predict_d};
use crate::solver::{solve_balanced, solve_projected, SolveOptions};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Profile,
    Pair,
    Ring,
    Reduce,
    Verify,
    Reconstruct,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Pair => "pair",
            Command::Ring => "ring",
            Command::Reduce => "reduce",
            Command::Verify => "verify",
            Command::Reconstruct => "reconstruct",
            Command::Sweep => "sweep",
        }
    }
}

/// Process exit status for an error: 2 configuration, 3 solver, 4 input/output.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::RegimeMismatch { .. } => 2,
        Error::Io(_) | Error::Format(_) => 4,
        _ => 3,
    }
}

/// Result of one subcommand: the report (also written to `report.txt`) and every file
/// produced, report included.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let out_dir = PathBuf::from(cfg.raw("output_dir"));
    let mut report = Report::default();
    report.section("run").text("command", cmd.name());
    report.section("input");
    for (k, v) in cfg.entries() {
        report.text(k, v);
    }
    report
        .section("tolerances")
        .text("profile_tol", cfg.raw("tol"))
        .text("newton_tol", cfg.raw("newton_tol"))
        .text("krylov_tol", cfg.raw("krylov_tol"))
        .text("newton_max", cfg.raw("newton_max"))
        .text("shooting", "bisection to machine precision")
        .text("balance_tol", "1e-10 * max |c| on the bracket");
    let mut files = Vec::new();
    match cmd {
        Command::Profile => cmd_profile(cfg, &out_dir, &mut report, &mut files)?,
        Command::Pair | Command::Ring => cmd_solve(cmd, cfg, &out_dir, &mut report, &mut files)?,
        Command::Reduce => cmd_reduce(cfg, &out_dir, &mut report, &mut files)?,
        Command::Verify => cmd_verify(cfg, &mut report)?,
        Command::Reconstruct => cmd_reconstruct(cfg, &out_dir, &mut report, &mut files)?,
        Command::Sweep => cmd_sweep(cfg, &out_dir, &mut report, &mut files)?,
    }
    let path = out_dir.join(format!("{}_report.txt", cmd.name()));
    write_text(&path, &report.render())?;
    files.push(path);
    Ok(Outcome { report, files })
}

fn profile_of(cfg: &RunConfig) -> Result<VortexProfile> {
    solve_profile(cfg.f64("ell_max")?, cfg.f64("step")?, cfg.f64("tol")?)
}

fn params_of(cfg: &RunConfig) -> Result<ModelParams> {
    let regime = Regime::parse(cfg.raw("regime")).map_err(|e| Error::Config(e.to_string()))?;
    ModelParams::new(regime, cfg.f64("eps")?, cfg.f64("kappa")?, cfg.f64("d_hat")?)
        .map_err(|e| Error::Config(e.to_string()))
}

fn options_of(cfg: &RunConfig) -> Result<SolveOptions> {
    Ok(SolveOptions {
        newton_max: cfg.usize("newton_max")?,
        newton_tol: cfg.f64("newton_tol")?,
        krylov_tol: cfg.f64("krylov_tol")?,
        ..Default::default()
    })
}

/// Grid from `l1, l2, h1, h2`, with unset extents defaulting to `2 d`.
fn grid_of(cfg: &RunConfig, d: f64, symmetry: Symmetry) -> Result<GridSpec> {
    let l1 = cfg.opt_f64("l1")?.unwrap_or(2.0 * d);
    let l2 = cfg.opt_f64("l2")?.unwrap_or(2.0 * d);
    GridSpec::new(l1, l2, cfg.f64("h1")?, cfg.f64("h2")?, symmetry).map_err(|e| Error::Config(e.to_string()))
}

fn derived(report: &mut Report, p: &ModelParams) {
    report
        .section("parameters")
        .text("regime", p.regime.name())
        .number("eps", p.eps)
        .number("kappa", p.kappa)
        .number("d_hat", p.d_hat)
        .number("d", p.d)
        .number("eps_eff", p.eps_eff())
        .number("c", p.c)
        .number("omega", p.omega);
}

fn cmd_profile(cfg: &RunConfig, out: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<()> {
    let p = profile_of(cfg)?;
    let mut rows = Vec::with_capacity(p.knots.len() + 1);
    // cumulative integrals by Simpson panels, recomputed on even knots only to stay linear
    let mut last = (0.0, 0.0);
    for (k, &l) in p.knots.iter().enumerate() {
        if k % 2 == 0 {
            last = profile_integrals_upto(&p, l);
        }
        rows.push(vec![l, p.rho[k], p.drho[k], last.0, last.1]);
    }
    let (i1, i2) = profile_integrals(&p);
    rows.push(vec![f64::INFINITY, 1.0, 0.0, i1, i2]);
    let path = out.join("profile.csv");
    write_text(&path, &csv_string(&["ell", "rho", "drho", "i1", "i2"], &rows))?;
    files.push(path);
    let res = p.ode_residuals().iter().fold(0.0f64, |a, r| a.max(r.1.abs()));
    let (slope, _) = p.tail_regression(8.0, 14.0);
    report
        .section("profile")
        .number("slope_a", p.slope_a)
        .number("tail_c0", p.tail_c0)
        .number("ode_residual_max", res)
        .number("tail_slope", slope)
        .number("i1", i1)
        .number("i2", i2)
        .int("knots", p.knots.len() as i64);
    Ok(())
}

fn cmd_solve(cmd: Command, cfg: &RunConfig, out: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<()> {
    let p = params_of(cfg)?;
    let want = if cmd == Command::Pair { Symmetry::Pair } else { Symmetry::Ring };
    if p.regime.symmetry() != want {
        return Err(Error::Config(format!("{} regime given to the {} command", p.regime.name(), cmd.name())));
    }
    derived(report, &p);
    let prof = profile_of(cfg)?;
    let spec = grid_of(cfg, p.d, want)?;
    grid_report(report, &spec);
    let v = build_ansatz(&p, spec, &prof)?;
    let (_, norms) = error_field(&v, p.regime.tag(), &p)?;
    report
        .section("ansatz")
        .number("error_inner", norms.inner)
        .number("error_outer_re", norms.outer_re)
        .number("error_outer_im", norms.outer_im)
        .number("error_total", norms.total);
    let path = out.join("ansatz.vsf");
    save_field(&AnyField::Complex(v.clone()), &path)?;
    files.push(path);
    if cfg.bool("ansatz_only")? {
        return Ok(());
    }
    let z = kernel_zd(&p, spec, &prof, &v)?;
    let r = solve_projected(&p, &v, &z, p.regime.tag(), &options_of(cfg)?)?;
    report
        .section("solve")
        .number("c_mult", r.c_mult)
        .int("newton_iters", r.newton_iters as i64)
        .int("krylov_iters", r.krylov_iters as i64)
        .number("final_residual", r.final_residual)
        .number("corrector_norm_star", r.corrector_norm_star)
        .number("d_used", r.d_used);
    let path = out.join("solution.vsf");
    save_field(&AnyField::Complex(r.u), &path)?;
    files.push(path);
    Ok(())
}

fn grid_report(report: &mut Report, s: &GridSpec) {
    report
        .section("grid")
        .text("symmetry", s.symmetry.name())
        .number("l1", s.l1)
        .number("l2", s.l2)
        .number("h1", s.h1)
        .number("h2", s.h2)
        .int("n1", s.n1 as i64)
        .int("n2", s.n2 as i64);
}

fn cmd_reduce(cfg: &RunConfig, out: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<()> {
    let p = params_of(cfg)?;
    derived(report, &p);
    let prof = profile_of(cfg)?;
    let opts = options_of(cfg)?;
    let h = cfg.f64("h1")?;
    let pd = predict_d(&p)?;
    let n = cfg.usize("d_points")?.max(2);
    let d_list: Vec<f64> = (0..n).map(|k| 0.5 * pd * 4f64.powf(k as f64 / (n - 1) as f64)).collect();
    let curve = numeric_c_curve(&p, &d_list, h, &prof, &opts)?;
    let rows: Vec<Vec<f64>> = (0..curve.c_values.len())
        .map(|k| vec![curve.d_values[k], curve.c_values[k], curve.c_leading[k]])
        .collect();
    let path = out.join("c_curve.csv");
    write_text(&path, &csv_string(&["d", "c_numeric", "c_leading"], &rows))?;
    files.push(path);
    report
        .section("curve")
        .number("predict_d", pd)
        .number("leading_c_at_predict", leading_c(pd, &p))
        .int("points", curve.c_values.len() as i64)
        .text("complete", curve.complete.to_string())
        .text("crossings", curve.crossings().iter().map(|d| num(*d)).collect::<Vec<_>>().join(" "));
    let lo = cfg.opt_f64("d_lo")?.unwrap_or(0.75 * pd);
    let hi = cfg.opt_f64("d_hi")?.unwrap_or(1.3 * pd);
    let b = solve_balanced(&p, (lo, hi), h, &prof, &opts)?;
    report
        .section("balance")
        .number("d_lo", lo)
        .number("d_hi", hi)
        .number("d_star", b.d_star)
        .number("c_at_d_star", b.result.c_mult)
        .int("evaluations", b.samples.len() as i64)
        .number("final_residual", b.result.final_residual)
        .number("corrector_norm_star", b.result.corrector_norm_star);
    let path = out.join("balanced.vsf");
    save_field(&AnyField::Complex(b.result.u), &path)?;
    files.push(path);
    Ok(())
}

fn field_of(cfg: &RunConfig) -> Result<ComplexField> {
    let f = cfg.raw("field");
    if f.is_empty() {
        return Err(Error::Config("no field file given".into()));
    }
    load_field(Path::new(f))?.into_complex()
}

/// Parameters of a stored field, with `d` taken from the config.
fn field_params(cfg: &RunConfig, f: &ComplexField) -> Result<ModelParams> {
    let p = params_of(cfg)?;
    if p.regime.symmetry() != f.spec.symmetry {
        return Err(Error::Config(format!(
            "{} regime for a {} field",
            p.regime.name(),
            f.spec.symmetry.name()
        )));
    }
    Ok(p)
}

fn cmd_verify(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let u = field_of(cfg)?;
    let p = field_params(cfg, &u)?;
    derived(report, &p);
    let prof = profile_of(cfg)?;
    let v = build_ansatz(&p, u.spec, &prof)?;
    let d = diagnose(&u, &v, &p)?;
    report
        .section("diagnostics")
        .number("energy", d.energy)
        .number("charge", d.charge)
        .number("bogomolny_margin", d.bogomolny_margin);
    for (k, v) in &d.weighted_norms {
        report.number(&format!("norm_{k}"), *v);
    }
    for (k, v) in &d.residuals {
        report.number(&format!("residual_{k}"), *v);
    }
    report.section("vortices_quarter");
    for (k, vx) in detect_vortices(&u).iter().enumerate() {
        report.text(&format!("vortex_{k}"), format!("{} {} {}", num(vx.position[0]), num(vx.position[1]), vx.charge));
    }
    let (full, m1, m2) = u.expand_full();
    let s = u.spec;
    let all = detect_vortices_lattice(&full, m1, m2, [-s.l1, -s.l2], [s.h1, s.h2]);
    report.section("vortices_full");
    for (k, vx) in all.iter().enumerate() {
        report.text(&format!("vortex_{k}"), format!("{} {} {}", num(vx.position[0]), num(vx.position[1]), vx.charge));
    }
    let windings: Vec<String> = all.iter().map(|v| format!("{:+}", v.charge)).collect();
    report.text("windings", windings.join(" "));
    Ok(())
}

fn cmd_reconstruct(cfg: &RunConfig, out: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<()> {
    let u = field_of(cfg)?;
    let p = field_params(cfg, &u)?;
    derived(report, &p);
    let ev = unscale(&u, &p)?;
    let h = ev.h;
    let ring = p.regime.is_ring();
    let times = if p.regime.is_schrodinger() { vec![0.0, 1.0, 2.0] } else { vec![0.0] };
    let taus = vec![0.0, 0.37];
    let half = 4.0f64.min(0.5 * p.d);
    let planar = SampleBlock::window([p.d, 0.0], half, 9, times.clone(), taus.clone(), h);
    let block = if ring { planar.clone().rotated_3d(0.3) } else { planar.clone() };
    let mut rows = Vec::new();
    for &t in &times {
        for &tau in &taus {
            for s in &block.points {
                let smp = spacetime_field(&ev, &p, t, tau, s)?;
                let mut row = vec![t, tau];
                row.extend_from_slice(&smp.s);
                row.extend_from_slice(&smp.m.as_array());
                rows.push(row);
            }
        }
    }
    let header: Vec<&str> = if ring {
        vec!["t", "tau", "s1", "s2", "s3", "m1", "m2", "m3"]
    } else {
        vec!["t", "tau", "s1", "s2", "m1", "m2", "m3"]
    };
    let path = out.join("spacetime.csv");
    write_text(&path, &csv_string(&header, &rows))?;
    files.push(path);
    report.section("residual");
    for (k, f) in [1.0, 0.5, 0.25].iter().enumerate() {
        let b = SampleBlock {
            delta: h * f,
            ..block.clone()
        };
        let r = pde_residual(&ev, &p, &b)?;
        report
            .number(&format!("delta_{k}"), b.delta)
            .number(&format!("l2_{k}"), r.l2)
            .number(&format!("sup_{k}"), r.sup)
            .int(&format!("count_{k}"), r.count as i64);
    }
    report.number("order", refinement_order(&ev, &p, &block)?);
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, out: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<()> {
    let base = params_of(cfg)?;
    let prof = profile_of(cfg)?;
    let opts = options_of(cfg)?;
    let mut rows = Vec::new();
    report.section("sweep").text("regime", base.regime.name()).number("kappa", base.kappa);
    for (k, &eps) in cfg.list("eps_list")?.iter().enumerate() {
        let p0 = ModelParams::new(base.regime, eps, base.kappa, 1.0)?;
        let d = predict_d(&p0)?;
        let p = p0.with_d(d)?;
        let spec = GridSpec::square(2.0 * d, cfg.f64("h1")?, p.regime.symmetry())?;
        let v = build_ansatz(&p, spec, &prof)?;
        let (_, norms) = error_field(&v, p.regime.tag(), &p)?;
        let z = kernel_zd(&p, spec, &prof, &v)?;
        let r = solve_projected(&p, &v, &z, p.regime.tag(), &opts)?;
        rows.push(vec![
            eps,
            d,
            norms.inner,
            norms.total,
            r.corrector_norm_star,
            r.c_mult,
            r.newton_iters as f64,
            r.final_residual,
        ]);
        report
            .number(&format!("eps_{k}"), eps)
            .number(&format!("d_{k}"), d)
            .number(&format!("error_total_{k}"), norms.total)
            .number(&format!("corrector_norm_star_{k}"), r.corrector_norm_star)
            .int(&format!("newton_iters_{k}"), r.newton_iters as i64);
    }
    let path = out.join("sweep.csv");
    write_text(
        &path,
        &csv_string(
            &["eps", "d", "error_inner", "error_total", "corrector_norm_star", "c_mult", "newton_iters", "final_residual"],
            &rows,
        ),
    )?;
    files.push(path);
    Ok(())
}
