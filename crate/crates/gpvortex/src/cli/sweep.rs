//! Parameter sweeps: one solver pipeline per axis value, dispatched to a
//! worker pool, gathered in input order, summarized as CSV rows plus a JSON
//! summary with detected transition points.

use crate::analytic::{tf_energy, tf_profile};
use crate::error::{GpError, Result};
use crate::gp2d::{
    self, field_from_radial, trial_giant_vortex, trial_vortex_lattice, GPConfig, LatticeRule,
};
use crate::params::{Frame, ReducedParams};
use crate::radial::{default_eta, minimize_radial, RadialProblem};
use crate::vortex::{self, build_region, RegionKind, HOLE_THRESHOLD};
use serde::Serialize;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    Omega,
    BigOmega,
    Omega0,
    Eps,
}

impl FromStr for SweepAxis {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(SweepAxis::Omega),
            "Omega" => Ok(SweepAxis::BigOmega),
            "Omega0" => Ok(SweepAxis::Omega0),
            "eps" => Ok(SweepAxis::Eps),
            other => Err(GpError::Config(format!(
                "axis must be one of omega|Omega|Omega0|eps, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Task {
    Tf,
    Radial,
    Gp2d,
    VortexReport,
}

impl FromStr for Task {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(Task::Tf),
            "radial" => Ok(Task::Radial),
            "gp2d" => Ok(Task::Gp2d),
            "vortex-report" => Ok(Task::VortexReport),
            other => Err(GpError::Config(format!(
                "task must be tf|radial|gp2d|vortex-report, got {other:?}"
            ))),
        }
    }
}

/// Basin selection for the 2D flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InitKind {
    /// Giant vortex above `Omega0 ~ 1`, lattice in the rotating regime,
    /// plain ground profile otherwise.
    Auto,
    Ground,
    Lattice,
    Giant,
}

impl FromStr for InitKind {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(InitKind::Auto),
            "ground" => Ok(InitKind::Ground),
            "lattice" => Ok(InitKind::Lattice),
            "giant" => Ok(InitKind::Giant),
            other => Err(GpError::Config(format!("unknown init kind {other:?}"))),
        }
    }
}

/// 2D solver knobs carried through a sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolverKnobs {
    pub points_per_scale: f64,
    pub tol_residual: f64,
    pub max_iters: usize,
    pub init: InitKind,
}

impl Default for SolverKnobs {
    fn default() -> Self {
        SolverKnobs {
            points_per_scale: 4.0,
            tol_residual: 2e-4,
            max_iters: 12_000,
            init: InitKind::Auto,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub base: ReducedParams,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub tasks: Vec<Task>,
    pub knobs: SolverKnobs,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.tasks.is_empty() {
            return Err(GpError::Config("sweep task list must not be empty".to_string()));
        }
        if self.values.is_empty() {
            return Err(GpError::Config("sweep needs at least one axis value".to_string()));
        }
        let increasing = self.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(GpError::Config("sweep values must be strictly monotone".to_string()));
        }
        Ok(())
    }

    fn params_at(&self, v: f64) -> Result<ReducedParams> {
        let b = &self.base;
        match self.axis {
            SweepAxis::Omega => ReducedParams::omega_frame(b.eps, b.s, b.gamma, v),
            SweepAxis::BigOmega => ReducedParams::big_omega_frame(b.eps, b.s, b.gamma, v),
            SweepAxis::Omega0 => ReducedParams::from_omega0(b.eps, b.s, b.gamma, v),
            SweepAxis::Eps => match b.frame {
                Frame::Omega => ReducedParams::omega_frame(v, b.s, b.gamma, b.speed),
                Frame::BigOmega => ReducedParams::big_omega_frame(v, b.s, b.gamma, b.speed),
            },
        }
    }
}

/// One CSV row; every row carries the full parameter tuple.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub eps: f64,
    pub s: f64,
    pub gamma: f64,
    pub frame: &'static str,
    pub speed: f64,
    pub e_tf: Option<f64>,
    pub tf_x_in: Option<f64>,
    pub e_hat: Option<f64>,
    pub e_gv: Option<f64>,
    pub e_gp: Option<f64>,
    pub mu: Option<f64>,
    pub vortex_count_bulk: Option<usize>,
    pub hole_radius: Option<f64>,
    pub bulk_degree: Option<i64>,
    pub uniformity_ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Transitions {
    /// First axis value whose 2D minimizer carries at least one bulk vortex.
    pub first_with_vortex: Option<f64>,
    /// First axis value with a nonzero detected hole radius.
    pub first_with_hole: Option<f64>,
    /// First axis value whose bulk annulus is vortex-free (scanning upward).
    pub first_vortex_free_bulk: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    pub transitions: Transitions,
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("GPVORTEX_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| GpError::Config(format!("GPVORTEX_THREADS must be an integer, got {v}")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| GpError::Internal(format!("failed to build worker pool: {e}")))
}

/// Runs the sweep; per-point failures are recorded in the row and the sweep
/// continues. Rows are returned in input order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepSummary> {
    spec.validate()?;
    let pool = worker_pool()?;
    let rows: Vec<SweepRow> = pool.install(|| {
        use rayon::prelude::*;
        spec.values
            .par_iter()
            .map(|&v| run_point(spec, v))
            .collect()
    });
    let mut transitions = Transitions::default();
    for row in &rows {
        if transitions.first_with_vortex.is_none() {
            if let Some(c) = row.vortex_count_bulk {
                if c > 0 {
                    transitions.first_with_vortex = Some(row.axis_value);
                }
            }
        }
        if transitions.first_with_hole.is_none() {
            if let Some(h) = row.hole_radius {
                if h > 0.0 {
                    transitions.first_with_hole = Some(row.axis_value);
                }
            }
        }
        if transitions.first_vortex_free_bulk.is_none() {
            if let Some(c) = row.vortex_count_bulk {
                if c == 0 {
                    transitions.first_vortex_free_bulk = Some(row.axis_value);
                }
            }
        }
    }
    Ok(SweepSummary { spec: spec.clone(), rows, transitions })
}

fn run_point(spec: &SweepSpec, v: f64) -> SweepRow {
    let rp = match spec.params_at(v) {
        Ok(rp) => rp,
        Err(e) => {
            return SweepRow {
                axis_value: v,
                eps: spec.base.eps,
                s: spec.base.s,
                gamma: spec.base.gamma,
                frame: spec.base.frame.label(),
                speed: f64::NAN,
                e_tf: None,
                tf_x_in: None,
                e_hat: None,
                e_gv: None,
                e_gp: None,
                mu: None,
                vortex_count_bulk: None,
                hole_radius: None,
                bulk_degree: None,
                uniformity_ratio: None,
                error: Some(e.to_string()),
            }
        }
    };
    let mut row = SweepRow {
        axis_value: v,
        eps: rp.eps,
        s: rp.s,
        gamma: rp.gamma,
        frame: rp.frame.label(),
        speed: rp.speed,
        e_tf: None,
        tf_x_in: None,
        e_hat: None,
        e_gv: None,
        e_gp: None,
        mu: None,
        vortex_count_bulk: None,
        hole_radius: None,
        bulk_degree: None,
        uniformity_ratio: None,
        error: None,
    };
    let record_err = |row: &mut SweepRow, e: GpError| {
        let msg = e.to_string();
        row.error = Some(match row.error.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    };
    if spec.tasks.contains(&Task::Tf) {
        match tf_profile(&rp) {
            Ok(tf) => {
                row.e_tf = Some(tf_energy(&tf));
                row.tf_x_in = Some(tf.x_in);
            }
            Err(e) => record_err(&mut row, e),
        }
    }
    if spec.tasks.contains(&Task::Radial) {
        let problem = RadialProblem::ground(rp);
        match problem.default_grid().and_then(|g| minimize_radial(&problem, &g, None)) {
            Ok(p) => row.e_hat = Some(p.energy),
            Err(e) => record_err(&mut row, e),
        }
        if rp.frame == Frame::BigOmega {
            if let Ok(problem) = RadialProblem::giant_vortex(rp) {
                match problem.default_grid().and_then(|g| minimize_radial(&problem, &g, None)) {
                    Ok(p) => row.e_gv = Some(p.energy),
                    Err(e) => record_err(&mut row, e),
                }
            }
        }
    }
    if spec.tasks.contains(&Task::Gp2d) || spec.tasks.contains(&Task::VortexReport) {
        match run_point_2d(spec, &rp, &mut row) {
            Ok(()) => {}
            Err(e) => record_err(&mut row, e),
        }
    }
    row
}

/// Solver setup for one 2D point: basin-selected initial state plus the
/// matching domain configuration.
pub fn prepare_2d(
    rp: &ReducedParams,
    knobs: &SolverKnobs,
) -> Result<(gp2d::ComplexField2D, GPConfig)> {
    let mut cfg = GPConfig::default_for(rp)?;
    cfg.points_per_scale = knobs.points_per_scale;
    cfg.tol_residual = knobs.tol_residual;
    cfg.max_iters = knobs.max_iters;
    let omega0 = rp.omega0().unwrap_or(0.0);
    let init = match knobs.init {
        InitKind::Auto => {
            if omega0 >= 0.75 {
                InitKind::Giant
            } else if big_equiv(rp) >= rp.eps.ln().abs() {
                InitKind::Lattice
            } else {
                InitKind::Ground
            }
        }
        other => other,
    };
    let field = match init {
        InitKind::Giant => {
            let big = rp.speed;
            let half = (rp.eps * rp.eps * default_eta(rp.eps))
                .max(16.0 * big.powf(-0.5))
                .min(0.45);
            cfg.annulus = (1.0 - half, 1.0 + half);
            cfg.truncation_radius = 1.0 + half + 4.0 * cfg.spacing();
            let mut f = trial_giant_vortex(rp, &cfg)?;
            // Three probe vortices in the bulk so the flow can keep them when
            // a vortex-carrying state is favorable; an axisymmetric seed alone
            // could never leave the symmetric basin.
            let core = 0.5 * big.powf(-0.5);
            let sites: Vec<(f64, f64, i32)> = [0.3f64, 2.3, 4.1]
                .iter()
                .map(|&th| (th.cos(), th.sin(), 1))
                .collect();
            gp2d::plant_vortices(&mut f, &sites, core)?;
            f
        }
        InitKind::Lattice => {
            mask_to_support(&mut cfg, rp)?;
            let big = big_equiv(rp);
            let t = rp.eps.powf(2.0 / 3.0) * big.powf(-1.0 / 3.0);
            trial_vortex_lattice(rp, &cfg, LatticeRule::Triangular, t.min(0.4 * big.powf(-0.5)))?
        }
        InitKind::Ground | InitKind::Auto => {
            mask_to_support(&mut cfg, rp)?;
            let problem = RadialProblem::ground(*rp);
            let g0 = minimize_radial(&problem, &problem.default_grid()?, None)?;
            field_from_radial(&g0, &cfg, 0)?
        }
    };
    Ok((field, cfg))
}

fn big_equiv(rp: &ReducedParams) -> f64 {
    match rp.frame {
        Frame::BigOmega => rp.speed,
        Frame::Omega => {
            if rp.speed == 0.0 {
                0.0
            } else {
                rp.to_big_omega().speed
            }
        }
    }
}

/// Restricts the active region to a disk that comfortably contains the TF
/// support plus its decay tail. The excluded outskirts carry no mass but a
/// huge trap potential that would otherwise throttle the flow's step size.
fn mask_to_support(cfg: &mut GPConfig, rp: &ReducedParams) -> Result<()> {
    let tf = tf_profile(rp)?;
    let r_cap = (1.35 * tf.x_out).max(tf.x_out + 0.6);
    if r_cap < cfg.truncation_radius {
        cfg.annulus = (0.0, r_cap);
    }
    Ok(())
}

fn run_point_2d(spec: &SweepSpec, rp: &ReducedParams, row: &mut SweepRow) -> Result<()> {
    let (seed, cfg) = prepare_2d(rp, &spec.knobs)?;
    let out = gp2d::minimize(&seed, &cfg)?;
    row.e_gp = Some(out.energy);
    row.mu = Some(out.mu);
    let tf = tf_profile(rp).ok();
    row.hole_radius = Some(vortex::detect_hole(&out.psi, HOLE_THRESHOLD));
    // bulk region: gaussian-regime annulus when it applies, TF bulk otherwise
    let omega0 = rp.omega0().unwrap_or(0.0);
    let region = if omega0 >= 0.75 {
        build_region(RegionKind::ABulk, rp, tf.as_ref())
    } else {
        build_region(RegionKind::RBulk, rp, tf.as_ref())
    };
    if let Ok(region) = region {
        let envelope = tf.as_ref().map(|t| {
            let t = *t;
            move |r: f64| t.density(r)
        });
        let zeros = match &envelope {
            Some(env) => vortex::find_vortex_cells(&out.psi, Some(env)),
            None => vortex::find_vortex_cells(&out.psi, None),
        };
        let sector = region.sector();
        let inside = zeros.iter().filter(|z| sector.contains(z.x, z.y)).count();
        row.vortex_count_bulk = Some(inside);
        let uni = vortex::uniformity_ratio(&zeros, &sector, rp);
        row.uniformity_ratio = Some(uni.ratio);
    }
    if omega0 >= 0.75 {
        row.bulk_degree = vortex::degree_on_circle(&out.psi, 1.0).ok();
    }
    Ok(())
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

/// CSV serialization with a header row; 17 significant digits throughout.
pub fn summary_to_csv(summary: &SweepSummary) -> String {
    let mut out = String::from(
        "axis_value,eps,s,gamma,frame,speed,e_tf,tf_x_in,e_hat,e_gv,e_gp,mu,vortex_count_bulk,hole_radius,bulk_degree,uniformity_ratio,error\n",
    );
    for r in &summary.rows {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.axis_value,
            r.eps,
            r.s,
            r.gamma,
            r.frame,
            r.speed,
            fmt_opt_f64(r.e_tf),
            fmt_opt_f64(r.tf_x_in),
            fmt_opt_f64(r.e_hat),
            fmt_opt_f64(r.e_gv),
            fmt_opt_f64(r.e_gp),
            fmt_opt_f64(r.mu),
            r.vortex_count_bulk.map(|c| c.to_string()).unwrap_or_default(),
            fmt_opt_f64(r.hole_radius),
            r.bulk_degree.map(|d| d.to_string()).unwrap_or_default(),
            fmt_opt_f64(r.uniformity_ratio),
            r.error.clone().map(|e| format!("{e:?}")).unwrap_or_default(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        let base = ReducedParams::big_omega_frame(0.1, 4.0, 1.0, 10.0).unwrap();
        let mut spec = SweepSpec {
            base,
            axis: SweepAxis::BigOmega,
            values: vec![5.0, 10.0],
            tasks: vec![],
            knobs: SolverKnobs::default(),
        };
        assert!(spec.validate().is_err(), "empty task list must be rejected");
        spec.tasks = vec![Task::Tf];
        assert!(spec.validate().is_ok());
        spec.values = vec![5.0, 5.0];
        assert!(spec.validate().is_err(), "non-monotone values rejected");
    }

    #[test]
    fn tf_only_sweep_runs_and_serializes() {
        let base = ReducedParams::big_omega_frame(0.1, 4.0, 1.0, 10.0).unwrap();
        let spec = SweepSpec {
            base,
            axis: SweepAxis::BigOmega,
            values: vec![8.0, 12.0, 16.0, 20.0],
            tasks: vec![Task::Tf],
            knobs: SolverKnobs::default(),
        };
        let summary = run_sweep(&spec).unwrap();
        assert_eq!(summary.rows.len(), 4);
        assert!(summary.rows.iter().all(|r| r.error.is_none()));
        // hole appears in the TF density above Omega_c ~ 13.82
        let xins: Vec<f64> = summary.rows.iter().map(|r| r.tf_x_in.unwrap()).collect();
        assert_eq!(xins[0], 0.0);
        assert!(xins[3] > 0.0);
        let csv = summary_to_csv(&summary);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("axis_value,"));
        // deterministic repeat
        let summary2 = run_sweep(&spec).unwrap();
        assert_eq!(csv, summary_to_csv(&summary2));
        let json1 = serde_json::to_string(&summary).unwrap();
        let json2 = serde_json::to_string(&summary2).unwrap();
        assert_eq!(json1, json2);
    }
}
