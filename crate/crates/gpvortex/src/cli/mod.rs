//! Command-line front end: configuration, solvers orchestration, parameter
//! sweeps, binary field dumps, CSV/JSON reports and PPM heatmaps.
//!
//! Subcommands: `tf`, `radial`, `gp2d`, `vortex`, `sweep`, `render`; every
//! solver command takes `--config <file>` plus repeatable `--set key=value`
//! overrides. The worker pool for sweeps is capped by `GPVORTEX_THREADS`.

pub mod config;
pub mod dump;
pub mod render;
pub mod sweep;

use crate::analytic::{big_omega_c, omega_c, tf_energy, tf_profile};
use crate::error::{GpError, Result};
use crate::params::Frame;
use crate::radial::{
    check_gaussian_closeness, minimize_radial, symmetric_vortex_profile, RadialProblem,
};
use crate::vortex::{build_region, RegionKind, HOLE_THRESHOLD};
use clap::{Args, Parser, Subcommand};
use config::Config;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(name = "gpvortex", version, about = "Rotating 2D condensate laboratory")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Flat key-value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. --set speed=20.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl CommonArgs {
    fn load(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(p) => Config::from_file(p)?,
            None => Config::default(),
        };
        cfg.apply_overrides(&self.set)?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Thomas-Fermi profile, critical speeds and energy for the parameters.
    Tf {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the report as JSON here instead of stdout-only.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radial minimization of one profile kind.
    Radial {
        #[command(flatten)]
        common: CommonArgs,
        /// ground | gv | gv-annulus | sym | vortex:<n>
        #[arg(long, default_value = "ground")]
        kind: String,
        /// CSV output path for the profile (x, f, weight).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full 2D minimization; writes a field dump.
    Gp2d {
        #[command(flatten)]
        common: CommonArgs,
        /// Field dump output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Energy-trace CSV path (iteration, energy).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Basin selection: auto | ground | lattice | giant.
        #[arg(long, default_value = "auto")]
        init: String,
    },
    /// Phase-singularity report of a dumped field.
    Vortex {
        /// Field dump to analyze.
        #[arg(long)]
        field: PathBuf,
        /// Circle radii for degree measurements (repeatable).
        #[arg(long = "circle")]
        circles: Vec<f64>,
        /// JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameter sweep over one axis.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// omega | Omega | Omega0 | eps
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values (strictly monotone).
        #[arg(long, value_delimiter = ',', conflicts_with = "log_range")]
        values: Vec<f64>,
        /// Log-spaced range lo:hi:count (alternative to --values).
        #[arg(long, value_name = "LO:HI:N")]
        log_range: Option<String>,
        /// Comma-separated tasks: tf,radial,gp2d,vortex-report.
        #[arg(long, value_delimiter = ',', default_value = "tf")]
        tasks: Vec<String>,
        /// Output directory for sweep.csv and summary.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a dumped field as a PPM heatmap.
    Render {
        /// Field dump to render.
        #[arg(long)]
        field: PathBuf,
        /// density | phase
        #[arg(long, default_value = "density")]
        quantity: String,
        /// Output image path.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Entry point used by the binary; parses `std::env::args`.
pub fn run() -> Result<()> {
    run_from(std::env::args())
}

/// Entry point with explicit arguments (used by tests).
pub fn run_from<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)
        .map_err(|e| GpError::Config(e.to_string()))?;
    dispatch(cli)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Tf { common, out } => cmd_tf(&common.load()?, out.as_deref()),
        Command::Radial { common, kind, out } => {
            cmd_radial(&common.load()?, &kind, out.as_deref())
        }
        Command::Gp2d { common, out, trace, init } => {
            cmd_gp2d(&common.load()?, out.as_deref(), trace.as_deref(), &init)
        }
        Command::Vortex { field, circles, out } => cmd_vortex(&field, &circles, out.as_deref()),
        Command::Sweep { common, axis, values, log_range, tasks, out } => {
            let values = match log_range {
                Some(spec) => log_spaced(&spec)?,
                None => values,
            };
            cmd_sweep(&common.load()?, &axis, &values, &tasks, out.as_deref())
        }
        Command::Render { field, quantity, out } => cmd_render(&field, &quantity, &out),
    }
}

#[derive(serde::Serialize)]
struct TfReport {
    eps: f64,
    s: f64,
    gamma: f64,
    frame: &'static str,
    speed: f64,
    mu_tf: f64,
    x_in: f64,
    x_out: f64,
    e_tf: f64,
    omega_c: f64,
    big_omega_c: f64,
}

fn cmd_tf(cfg: &Config, out: Option<&std::path::Path>) -> Result<()> {
    let rp = cfg.reduced_params()?;
    let tf = tf_profile(&rp)?;
    let report = TfReport {
        eps: rp.eps,
        s: rp.s,
        gamma: rp.gamma,
        frame: rp.frame.label(),
        speed: rp.speed,
        mu_tf: tf.mu,
        x_in: tf.x_in,
        x_out: tf.x_out,
        e_tf: tf_energy(&tf),
        omega_c: omega_c(rp.eps, rp.s, rp.gamma),
        big_omega_c: big_omega_c(rp.eps, rp.s, rp.gamma),
    };
    println!("mu_tf   = {:.16e}", report.mu_tf);
    println!("x_in    = {:.16e}", report.x_in);
    println!("x_out   = {:.16e}", report.x_out);
    println!("E_tf    = {:.16e}", report.e_tf);
    println!("omega_c = {:.16e}", report.omega_c);
    println!("Omega_c = {:.16e}", report.big_omega_c);
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

fn cmd_radial(cfg: &Config, kind: &str, out: Option<&std::path::Path>) -> Result<()> {
    let rp = cfg.reduced_params()?;
    let profile = match kind {
        "ground" => {
            let problem = RadialProblem::ground(rp);
            minimize_radial(&problem, &problem.default_grid()?, None)?
        }
        "gv" => {
            let problem = RadialProblem::giant_vortex(rp)?;
            minimize_radial(&problem, &problem.default_grid()?, None)?
        }
        "gv-annulus" => {
            let problem = RadialProblem::giant_vortex_annulus(rp)?;
            minimize_radial(&problem, &problem.default_grid()?, None)?
        }
        "sym" => {
            let problem = RadialProblem::symmetric(rp)?;
            minimize_radial(&problem, &problem.default_grid()?, None)?
        }
        other => match other.strip_prefix("vortex:") {
            Some(n) => {
                let n: i64 = n
                    .parse()
                    .map_err(|_| GpError::Config(format!("bad winding in kind {other:?}")))?;
                symmetric_vortex_profile(n, &rp, None)?
            }
            None => {
                return Err(GpError::Config(format!(
                    "kind must be ground|gv|gv-annulus|sym|vortex:<n>, got {other:?}"
                )))
            }
        },
    };
    println!("energy   = {:.16e}", profile.energy);
    println!("mu       = {:.16e}", profile.mu);
    println!("max_pos  = {:.16e}", profile.max_position);
    println!("residual = {:.3e}", profile.residual);
    if kind == "gv" || kind == "gv-annulus" {
        println!("gaussian_dev = {:.16e}", check_gaussian_closeness(&profile, &rp));
    }
    if let Some(path) = out {
        std::fs::write(path, profile.to_csv())?;
    }
    Ok(())
}

fn cmd_gp2d(
    cfg: &Config,
    out: Option<&std::path::Path>,
    trace: Option<&std::path::Path>,
    init: &str,
) -> Result<()> {
    let rp = cfg.reduced_params()?;
    let mut knobs = sweep::SolverKnobs { init: sweep::InitKind::from_str(init)?, ..Default::default() };
    if let Some(v) = cfg.get_f64("tol_residual")? {
        knobs.tol_residual = v;
    }
    if let Some(v) = cfg.get_usize("max_iters")? {
        knobs.max_iters = v;
    }
    if let Some(v) = cfg.get_f64("points_per_scale")? {
        knobs.points_per_scale = v;
    }
    let (seed, mut run_cfg) = sweep::prepare_2d(&rp, &knobs)?;
    if trace.is_some() {
        run_cfg.trace_every = 10;
    }
    let outcome = crate::gp2d::minimize(&seed, &run_cfg)?;
    println!("energy     = {:.16e}", outcome.energy);
    println!("mu         = {:.16e}", outcome.mu);
    println!("residual   = {:.3e}", outcome.residual);
    println!("iterations = {}", outcome.iterations);
    println!("hole       = {:.16e}", crate::vortex::detect_hole(&outcome.psi, HOLE_THRESHOLD));
    if let Some(path) = trace {
        let mut csv = String::from("iteration,energy\n");
        for (it, e) in &outcome.trace {
            csv.push_str(&format!("{it},{e:.16e}\n"));
        }
        std::fs::write(path, csv)?;
    }
    if let Some(path) = out {
        dump::write_field(path, &outcome.psi, &rp)?;
    }
    Ok(())
}

fn cmd_vortex(field: &std::path::Path, circles: &[f64], out: Option<&std::path::Path>) -> Result<()> {
    let (psi, rp) = dump::read_field(field)?;
    let tf = tf_profile(&rp).ok();
    let mut regions = Vec::new();
    if let Some(tf) = &tf {
        if let Ok(r) = build_region(RegionKind::RBulk, &rp, Some(tf)) {
            regions.push(r);
        }
        if let Ok(r) = build_region(RegionKind::AOmega, &rp, Some(tf)) {
            regions.push(r);
        }
    }
    if rp.frame == Frame::BigOmega {
        if let Ok(r) = build_region(RegionKind::ABulk, &rp, tf.as_ref()) {
            regions.push(r);
        }
        if let Ok(r) = build_region(RegionKind::AEps, &rp, tf.as_ref()) {
            regions.push(r);
        }
    }
    let envelope = tf.as_ref().map(|t| {
        let t = *t;
        move |r: f64| t.density(r)
    });
    let report = match &envelope {
        Some(env) => crate::vortex::analyze(&psi, Some(env), &regions, circles, HOLE_THRESHOLD),
        None => crate::vortex::analyze(&psi, None, &regions, circles, HOLE_THRESHOLD),
    };
    let json = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => std::fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_sweep(
    cfg: &Config,
    axis: &str,
    values: &[f64],
    tasks: &[String],
    out: Option<&std::path::Path>,
) -> Result<()> {
    let base = cfg.reduced_params()?;
    let axis = sweep::SweepAxis::from_str(axis)?;
    let tasks: Result<Vec<sweep::Task>> =
        tasks.iter().map(|t| sweep::Task::from_str(t)).collect();
    let mut knobs = sweep::SolverKnobs::default();
    if let Some(v) = cfg.get_f64("tol_residual")? {
        knobs.tol_residual = v;
    }
    if let Some(v) = cfg.get_usize("max_iters")? {
        knobs.max_iters = v;
    }
    if let Some(init) = cfg.get("init") {
        knobs.init = sweep::InitKind::from_str(init)?;
    }
    let spec = sweep::SweepSpec { base, axis, values: values.to_vec(), tasks: tasks?, knobs };
    let summary = sweep::run_sweep(&spec)?;
    let csv = sweep::summary_to_csv(&summary);
    print!("{csv}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("sweep.csv"), &csv)?;
        std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(())
}

fn cmd_render(field: &std::path::Path, quantity: &str, out: &std::path::Path) -> Result<()> {
    let (psi, _) = dump::read_field(field)?;
    let q = render::Quantity::from_str(quantity)?;
    render::write_heatmap(out, &psi, q)?;
    Ok(())
}

/// Parses `lo:hi:n` into n log-spaced values.
fn log_spaced(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(GpError::Config(format!("--log-range expects LO:HI:N, got {spec:?}")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| GpError::Config(format!("bad LO in {spec:?}")))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| GpError::Config(format!("bad HI in {spec:?}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| GpError::Config(format!("bad N in {spec:?}")))?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(GpError::Config(format!(
            "--log-range needs 0 < LO < HI and N >= 2, got {spec:?}"
        )));
    }
    let ratio = (hi / lo).ln();
    Ok((0..n).map(|k| lo * (ratio * k as f64 / (n - 1) as f64).exp()).collect())
}
