//! One-dimensional constrained minimizers for every radial density profile in
//! the theory, plus the diagnostics built on them: the two potential functions
//! `F1`/`F2` on the sub-annulus, Gaussian/symmetric closeness measures, fixed
//! winding profiles and the second-variation quadratic form.
//!
//! All profiles minimize a functional of the shape
//! `E[f] = int m(x) { f'^2/2 + V(x) f^2 + eps^-2 f^4 } dx` under the unit-mass
//! constraint `int m(x) f^2 dx = 1`, where the measure `m` is `2 pi x dx`
//! (radial reduction of a planar integral) or `2 pi dx` (the symmetric
//! reference profile). Minimization is a normalized implicit gradient flow:
//! each step solves a tridiagonal backward-Euler system and renormalizes, with
//! the step size adapted so the discrete energy never increases.

use crate::analytic::{alpha, eval_u, eval_w, Gaussian};
use crate::error::{GpError, Result};
use crate::numerics::{thomas_solve, CubicSpline};
use crate::params::{Frame, ReducedParams};
use serde::Serialize;
use std::f64::consts::PI;

/// Quadrature measure of the 1D reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Measure {
    /// `2 pi x dx` — radial reduction of a planar functional.
    Disk,
    /// `2 pi dx` — flat line measure (symmetric reference profile).
    Line,
}

impl Measure {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Measure::Disk => 2.0 * PI * x,
            Measure::Line => 2.0 * PI,
        }
    }
}

/// Uniform 1D grid with quadrature weights for the chosen measure.
#[derive(Debug, Clone, Serialize)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub bounds: (f64, f64),
    pub measure: Measure,
}

impl RadialGrid {
    /// Uniform grid on `[lo, hi]` with the planar measure `2 pi x dx`.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::with_measure(lo, hi, n, Measure::Disk)
    }

    /// Uniform grid with the flat measure `2 pi dx`.
    pub fn uniform_line(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::with_measure(lo, hi, n, Measure::Line)
    }

    pub fn with_measure(lo: f64, hi: f64, n: usize, measure: Measure) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(GpError::domain(format!("bad grid bounds [{lo}, {hi}]")));
        }
        if n < 8 {
            return Err(GpError::domain(format!("grid needs >= 8 nodes, got {n}")));
        }
        if lo < 0.0 {
            return Err(GpError::domain(format!("radial grid cannot start below 0, got {lo}")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
        // Finite-volume weights: exact measure of the cell around each node.
        // Sums telescope to the exact domain measure, and the x = 0 node of a
        // disk grid keeps a positive weight.
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                let a = if i == 0 { lo } else { nodes[i] - 0.5 * h };
                let b = if i == n - 1 { hi } else { nodes[i] + 0.5 * h };
                match measure {
                    Measure::Disk => PI * (b * b - a * a),
                    Measure::Line => 2.0 * PI * (b - a),
                }
            })
            .collect();
        Ok(RadialGrid { nodes, weights, bounds: (lo, hi), measure })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        (self.bounds.1 - self.bounds.0) / (self.len() - 1) as f64
    }
}

/// Which functional is being minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProblemKind {
    /// Real ground profile `g0` of the phase-free functional (either frame).
    Ground,
    /// Fixed giant-vortex phase: radial potential `Omega^2 U(x)`, whole plane.
    GiantVortex,
    /// Same integrand restricted to the annulus `[1 - eps^2 eta, 1 + eps^2 eta]`
    /// with natural (Neumann) boundary conditions.
    GiantVortexAnnulus,
    /// Quadratic model potential `alpha^2 Omega^2 (1-x)^2 / 2` on the annulus,
    /// flat measure; exactly symmetric under `x -> 2 - x`.
    Symmetric,
    /// Radial reduction at fixed integer winding `n`.
    FixedWinding(i64),
}

/// Boundary handling on one side of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// Ghost value 0 just outside the grid (decay truncation).
    Dirichlet,
    /// No boundary flux (natural condition of the discrete energy).
    Neumann,
}

/// A radial minimization problem: kind, parameters and annulus width.
#[derive(Debug, Clone, Serialize)]
pub struct RadialProblem {
    pub kind: ProblemKind,
    pub rp: ReducedParams,
    /// Annulus half-width parameter `eta` (annulus kinds only); the domain is
    /// `[1 - eps^2 eta, 1 + eps^2 eta]`.
    pub eta: f64,
    pub inner: Boundary,
    pub outer: Boundary,
}

/// Default annulus parameter `eta = |log eps|^{3/2}`.
pub fn default_eta(eps: f64) -> f64 {
    eps.ln().abs().powf(1.5)
}

impl RadialProblem {
    pub fn ground(rp: ReducedParams) -> Self {
        RadialProblem {
            kind: ProblemKind::Ground,
            rp,
            eta: default_eta(rp.eps),
            inner: Boundary::Neumann,
            outer: Boundary::Dirichlet,
        }
    }

    pub fn giant_vortex(rp: ReducedParams) -> Result<Self> {
        require_big_omega(&rp)?;
        Ok(RadialProblem {
            kind: ProblemKind::GiantVortex,
            rp,
            eta: default_eta(rp.eps),
            inner: Boundary::Dirichlet,
            outer: Boundary::Dirichlet,
        })
    }

    pub fn giant_vortex_annulus(rp: ReducedParams) -> Result<Self> {
        require_big_omega(&rp)?;
        Ok(RadialProblem {
            kind: ProblemKind::GiantVortexAnnulus,
            rp,
            eta: default_eta(rp.eps),
            inner: Boundary::Neumann,
            outer: Boundary::Neumann,
        })
    }

    pub fn symmetric(rp: ReducedParams) -> Result<Self> {
        require_big_omega(&rp)?;
        Ok(RadialProblem {
            kind: ProblemKind::Symmetric,
            rp,
            eta: default_eta(rp.eps),
            inner: Boundary::Neumann,
            outer: Boundary::Neumann,
        })
    }

    pub fn fixed_winding(rp: ReducedParams, n: i64) -> Result<Self> {
        if n < 0 {
            return Err(GpError::domain(format!("winding must be >= 0, got {n}")));
        }
        Ok(RadialProblem {
            kind: ProblemKind::FixedWinding(n),
            rp,
            eta: default_eta(rp.eps),
            inner: if n == 0 { Boundary::Neumann } else { Boundary::Dirichlet },
            outer: Boundary::Dirichlet,
        })
    }

    pub fn measure(&self) -> Measure {
        match self.kind {
            ProblemKind::Symmetric => Measure::Line,
            _ => Measure::Disk,
        }
    }

    /// Pointwise potential of the radial functional.
    pub fn potential(&self, x: f64) -> f64 {
        let rp = &self.rp;
        let e2inv = 1.0 / (rp.eps * rp.eps);
        match (self.kind, rp.frame) {
            (ProblemKind::Ground, Frame::Omega) => {
                e2inv * x.powf(rp.s) - 0.5 * rp.gamma * rp.speed * rp.speed * x * x
            }
            (ProblemKind::Ground, Frame::BigOmega) => {
                rp.gamma * rp.speed * rp.speed * eval_w(x, rp.s).unwrap_or(f64::INFINITY)
            }
            (ProblemKind::GiantVortex | ProblemKind::GiantVortexAnnulus, _) => {
                rp.speed * rp.speed * eval_u(x, rp.speed, rp.s, rp.gamma).unwrap_or(f64::INFINITY)
            }
            (ProblemKind::Symmetric, _) => {
                let a = alpha(rp.s, rp.gamma);
                0.5 * a * a * rp.speed * rp.speed * (1.0 - x) * (1.0 - x)
            }
            (ProblemKind::FixedWinding(n), frame) => {
                let b = if n == 0 { -rp.speed * x } else { n as f64 / x - rp.speed * x };
                let centrifugal = 0.5 * b * b;
                match frame {
                    Frame::Omega => {
                        // covariant angular term + trap, matching the planar
                        // functional at fixed winding
                        centrifugal + e2inv * x.powf(rp.s)
                            - 0.5 * rp.gamma * rp.speed * rp.speed * x * x
                    }
                    Frame::BigOmega => {
                        centrifugal
                            + rp.gamma
                                * rp.speed
                                * rp.speed
                                * eval_w(x, rp.s).unwrap_or(f64::INFINITY)
                    }
                }
            }
        }
    }

    /// Quartic coefficient (`eps^{-2}` throughout).
    pub fn quartic_coefficient(&self) -> f64 {
        1.0 / (self.rp.eps * self.rp.eps)
    }

    /// The speed in Omega-frame units (used for resolution rules).
    fn big_omega_equivalent(&self) -> f64 {
        match self.rp.frame {
            Frame::BigOmega => self.rp.speed,
            Frame::Omega => {
                if self.rp.speed == 0.0 {
                    0.0
                } else {
                    self.rp.to_big_omega().speed
                }
            }
        }
    }

    /// A grid resolving the healing length and the transverse oscillator scale.
    pub fn default_grid(&self) -> Result<RadialGrid> {
        let rp = &self.rp;
        let big = self.big_omega_equivalent();
        match self.kind {
            ProblemKind::Ground => {
                let tf = crate::analytic::tf_profile(rp)?;
                let margin = match rp.frame {
                    Frame::Omega => 34.0 * rp.eps.sqrt(),
                    Frame::BigOmega => (34.0 / big.sqrt()).min(0.5 * tf.x_out),
                };
                let hi = tf.x_out + margin;
                let h = bulk_spacing(rp.eps, big, 16.0);
                let n = (hi / h).ceil() as usize + 1;
                RadialGrid::uniform(0.0, hi, n.max(200))
            }
            ProblemKind::GiantVortex | ProblemKind::FixedWinding(_) => {
                let a = alpha(rp.s, rp.gamma);
                let w = (48.0 / (a * big)).sqrt().max(8.0 * bulk_spacing(rp.eps, big, 64.0));
                let lo = (1.0 - w).max(1e-3);
                let hi = 1.0 + w;
                let h = bulk_spacing(rp.eps, big, 64.0);
                let n = ((hi - lo) / h).ceil() as usize + 1;
                RadialGrid::uniform(lo, hi, n.max(200))
            }
            ProblemKind::GiantVortexAnnulus | ProblemKind::Symmetric => {
                let half = rp.eps * rp.eps * self.eta;
                let h = bulk_spacing(rp.eps, big, 64.0);
                let n = (2.0 * half / h).ceil() as usize + 1;
                let measure = self.measure();
                RadialGrid::with_measure(1.0 - half, 1.0 + half, n.max(200), measure)
            }
        }
    }
}

fn require_big_omega(rp: &ReducedParams) -> Result<()> {
    if rp.frame != Frame::BigOmega {
        return Err(GpError::domain(
            "giant-vortex and symmetric kinds are defined in the Omega frame".to_string(),
        ));
    }
    Ok(())
}

/// Node spacing `min(eps, Omega^{-1/2}) / divisor` (divisor >= 8).
fn bulk_spacing(eps: f64, big_omega: f64, divisor: f64) -> f64 {
    let osc = if big_omega > 0.0 { big_omega.powf(-0.5) } else { f64::INFINITY };
    eps.min(osc) / divisor
}

/// A converged nonnegative radial profile with its energy data.
#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
    pub energy: f64,
    pub mu: f64,
    pub max_position: f64,
    /// Weighted norm of the variational-equation residual, relative to `|mu| ||f||`.
    pub residual: f64,
}

impl RadialProfile {
    /// Discrete unit-mass check `sum w f^2`.
    pub fn mass(&self) -> f64 {
        self.grid.weights.iter().zip(&self.values).map(|(w, f)| w * f * f).sum()
    }

    /// Natural cubic spline through the profile values.
    pub fn spline(&self) -> Result<CubicSpline> {
        CubicSpline::new(&self.grid.nodes, &self.values)
    }

    /// Value by linear interpolation; clamps to the end values outside.
    pub fn interp(&self, x: f64) -> f64 {
        let g = &self.grid;
        let (lo, hi) = g.bounds;
        if x <= lo {
            return self.values[0];
        }
        if x >= hi {
            return *self.values.last().unwrap();
        }
        let h = g.spacing();
        let t = (x - lo) / h;
        let i = (t.floor() as usize).min(g.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// CSV serialization: `x,f,weight` rows with round-trip float precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,f,weight\n");
        for i in 0..self.grid.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                self.grid.nodes[i], self.values[i], self.grid.weights[i]
            ));
        }
        out
    }
}

/// Discretization of one radial problem: measures at nodes and edge midpoints,
/// potential samples and the quartic coefficient. The edge kinetic sum and the
/// operator application are exact adjoints under the node weights.
struct Stepper {
    h: f64,
    /// Measure at edge midpoints, length n+1; index i is the edge between
    /// nodes i-1 and i (boundary edges get weight 0 under Neumann).
    edge_m: Vec<f64>,
    potential: Vec<f64>,
    quartic: f64,
    weights: Vec<f64>,
}

impl Stepper {
    fn new(problem: &RadialProblem, grid: &RadialGrid) -> Result<Self> {
        let n = grid.len();
        let h = grid.spacing();
        let measure = problem.measure();
        let mut edge_m = vec![0.0; n + 1];
        for i in 1..n {
            edge_m[i] = measure.eval(0.5 * (grid.nodes[i - 1] + grid.nodes[i]));
        }
        if problem.inner == Boundary::Dirichlet {
            let mid = grid.nodes[0] - 0.5 * h;
            edge_m[0] = measure.eval(mid.max(0.0));
        }
        if problem.outer == Boundary::Dirichlet {
            edge_m[n] = measure.eval(grid.nodes[n - 1] + 0.5 * h);
        }
        let potential: Vec<f64> = grid.nodes.iter().map(|&x| problem.potential(x)).collect();
        for (i, v) in potential.iter().enumerate() {
            if !v.is_finite() {
                return Err(GpError::domain(format!(
                    "potential not finite at node {} (x = {})",
                    i, grid.nodes[i]
                )));
            }
        }
        Ok(Stepper {
            h,
            edge_m,
            potential,
            quartic: problem.quartic_coefficient(),
            weights: grid.weights.clone(),
        })
    }

    /// Discrete energy `K + sum w (V f^2 + eps^-2 f^4)`.
    fn energy(&self, f: &[f64]) -> f64 {
        let n = f.len();
        let mut kin = 0.0;
        for i in 1..n {
            let d = (f[i] - f[i - 1]) / self.h;
            kin += 0.5 * self.edge_m[i] * self.h * d * d;
        }
        // boundary edges toward ghost zeros (zero weight under Neumann)
        let d0 = f[0] / self.h;
        kin += 0.5 * self.edge_m[0] * self.h * d0 * d0;
        let dn = f[n - 1] / self.h;
        kin += 0.5 * self.edge_m[n] * self.h * dn * dn;
        let mut pot = 0.0;
        for i in 0..n {
            let f2 = f[i] * f[i];
            pot += self.weights[i] * (self.potential[i] * f2 + self.quartic * f2 * f2);
        }
        kin + pot
    }

    /// `A f = -(1/2) L f + V f + 2 eps^-2 g^2 f` with `L` the conservative
    /// Laplacian of the weighted Dirichlet form, so `<f, A f>_w` reproduces
    /// `2 K + ...` exactly.
    fn apply(&self, f: &[f64], g_sq: &[f64], out: &mut [f64]) {
        let n = f.len();
        let h2 = self.h * self.h;
        for i in 0..n {
            let left = if i == 0 { 0.0 } else { f[i - 1] };
            let right = if i == n - 1 { 0.0 } else { f[i + 1] };
            let flux = self.edge_m[i + 1] * (right - f[i]) - self.edge_m[i] * (f[i] - left);
            let lap = flux / h2 * self.h / self.weights[i];
            out[i] = -0.5 * lap + (self.potential[i] + 2.0 * self.quartic * g_sq[i]) * f[i];
        }
    }

    /// One backward-Euler step with spectral shift, then normalization.
    /// Returns false if the linear solve produced a non-finite value.
    fn step(&self, f: &mut [f64], dt: f64) -> bool {
        let n = f.len();
        let sigma = self.potential.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
        let h2 = self.h * self.h;
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = f.to_vec();
        for i in 0..n {
            let c = 0.5 * dt * self.h / (h2 * self.weights[i]);
            let cl = c * self.edge_m[i];
            let cr = c * self.edge_m[i + 1];
            if i > 0 {
                lower[i] = -cl;
            }
            if i < n - 1 {
                upper[i] = -cr;
            }
            diag[i] = 1.0
                + cl
                + cr
                + dt * (self.potential[i] - sigma + 2.0 * self.quartic * f[i] * f[i]);
        }
        thomas_solve(&lower, &diag, &upper, &mut rhs);
        let mut norm2 = 0.0;
        for i in 0..n {
            if !rhs[i].is_finite() {
                return false;
            }
            norm2 += self.weights[i] * rhs[i] * rhs[i];
        }
        if norm2 <= 0.0 {
            return false;
        }
        let scale = norm2.sqrt().recip();
        for i in 0..n {
            f[i] = rhs[i] * scale;
        }
        true
    }

    /// Rayleigh quotient and relative residual of the variational equation.
    fn residual(&self, f: &[f64]) -> (f64, f64) {
        let n = f.len();
        let g_sq: Vec<f64> = f.iter().map(|v| v * v).collect();
        let mut af = vec![0.0; n];
        self.apply(f, &g_sq, &mut af);
        let mut mu = 0.0;
        for i in 0..n {
            mu += self.weights[i] * f[i] * af[i];
        }
        let mut r2 = 0.0;
        let mut mf2 = 0.0;
        for i in 0..n {
            let r = af[i] - mu * f[i];
            r2 += self.weights[i] * r * r;
            mf2 += self.weights[i] * mu * mu * f[i] * f[i];
        }
        (mu, (r2 / mf2.max(f64::MIN_POSITIVE)).sqrt())
    }
}

/// Solver tuning knobs; defaults match the documented tolerances.
#[derive(Debug, Clone, Copy)]
pub struct RadialSolve {
    pub max_iters: usize,
    pub tol_residual: f64,
    pub dt0: f64,
    pub dt_max: f64,
}

impl Default for RadialSolve {
    fn default() -> Self {
        RadialSolve { max_iters: 200_000, tol_residual: 1e-6, dt0: 1e-3, dt_max: 1e6 }
    }
}

fn default_init(problem: &RadialProblem, grid: &RadialGrid) -> Result<Vec<f64>> {
    let rp = &problem.rp;
    let vals: Vec<f64> = match problem.kind {
        ProblemKind::Ground => {
            // regularized square root of the TF density
            let tf = crate::analytic::tf_profile(rp)?;
            let floor = 1e-4 * tf.sup_density();
            grid.nodes.iter().map(|&x| (tf.density(x) + floor).sqrt()).collect()
        }
        _ => {
            // scaled transverse Gaussian centered at the potential minimum
            let big = problem.big_omega_equivalent().max(1.0);
            let a = alpha(rp.s, rp.gamma);
            let g = Gaussian { alpha: a };
            let x_center = grid
                .nodes
                .iter()
                .cloned()
                .min_by(|&p, &q| problem.potential(p).partial_cmp(&problem.potential(q)).unwrap())
                .unwrap_or(1.0);
            grid.nodes
                .iter()
                .map(|&x| big.powf(0.25) * g.eval(big.sqrt() * (x - x_center)))
                .collect()
        }
    };
    Ok(vals)
}

/// Minimizes the radial problem on the grid. `init` seeds the flow (defaults
/// to the regularized TF square root or a scaled Gaussian, depending on kind).
pub fn minimize_radial(
    problem: &RadialProblem,
    grid: &RadialGrid,
    init: Option<&RadialProfile>,
) -> Result<RadialProfile> {
    minimize_radial_with(problem, grid, init, RadialSolve::default())
}

pub fn minimize_radial_with(
    problem: &RadialProblem,
    grid: &RadialGrid,
    init: Option<&RadialProfile>,
    opts: RadialSolve,
) -> Result<RadialProfile> {
    if grid.measure != problem.measure() {
        return Err(GpError::GridMismatch(format!(
            "problem expects {:?} measure, grid has {:?}",
            problem.measure(),
            grid.measure
        )));
    }
    let required = bulk_spacing(problem.rp.eps, problem.big_omega_equivalent(), 8.0);
    if grid.spacing() > required * (1.0 + 1e-9) {
        return Err(GpError::domain(format!(
            "grid spacing {:.3e} too coarse; need <= {:.3e}",
            grid.spacing(),
            required
        )));
    }
    let stepper = Stepper::new(problem, grid)?;
    let mut f: Vec<f64> = match init {
        Some(p) => {
            if p.grid.len() == grid.len() && p.grid.bounds == grid.bounds {
                p.values.clone()
            } else {
                let sp = p.spline()?;
                grid.nodes.iter().map(|&x| sp.eval(x).max(0.0)).collect()
            }
        }
        None => default_init(problem, grid)?,
    };
    let norm2: f64 = grid.weights.iter().zip(&f).map(|(w, v)| w * v * v).sum();
    if norm2 <= 0.0 {
        return Err(GpError::domain("initial profile has zero mass".to_string()));
    }
    let s = norm2.sqrt().recip();
    f.iter_mut().for_each(|v| *v *= s);

    let mut dt = opts.dt0;
    let mut energy = stepper.energy(&f);
    let mut last_residual = f64::INFINITY;
    let mut flat_count = 0usize;
    let mut iterations = 0usize;
    while iterations < opts.max_iters {
        iterations += 1;
        let snapshot = f.clone();
        let ok = stepper.step(&mut f, dt);
        let new_energy = if ok { stepper.energy(&f) } else { f64::INFINITY };
        if !ok || new_energy > energy + 1e-13 * energy.abs().max(1.0) {
            f = snapshot;
            dt *= 0.5;
            if dt < 1e-18 {
                return Err(GpError::Solver {
                    context: format!("{:?}: step size collapsed", problem.kind),
                    residual: last_residual,
                    iterations,
                });
            }
            continue;
        }
        let delta = (energy - new_energy).abs() / energy.abs().max(1.0);
        energy = new_energy;
        dt = (dt * 1.1).min(opts.dt_max);
        if delta < 1e-12 {
            flat_count += 1;
        } else {
            flat_count = 0;
        }
        if iterations % 10 == 0 || flat_count >= 50 {
            let (_, res) = stepper.residual(&f);
            last_residual = res;
            if res <= opts.tol_residual && flat_count >= 50 {
                break;
            }
        }
    }
    let (mu_rayleigh, res) = stepper.residual(&f);
    if res > opts.tol_residual {
        return Err(GpError::Solver {
            context: format!("{:?}: residual above tolerance", problem.kind),
            residual: res,
            iterations,
        });
    }
    if f.iter().any(|&v| v < -1e-12) {
        return Err(GpError::Internal("negative density excursion beyond -1e-12".to_string()));
    }
    let energy = stepper.energy(&f);
    // mu via the normalization identity; agrees with the Rayleigh quotient
    // exactly for the converged discrete state.
    let p4: f64 = grid.weights.iter().zip(&f).map(|(w, v)| w * v.powi(4)).sum();
    let mu = energy + stepper.quartic * p4;
    debug_assert!((mu - mu_rayleigh).abs() <= 1e-8 * mu.abs().max(1.0));
    let imax = (0..f.len()).max_by(|&a, &b| f[a].partial_cmp(&f[b]).unwrap()).unwrap();
    Ok(RadialProfile {
        grid: grid.clone(),
        values: f,
        energy,
        mu,
        max_position: grid.nodes[imax],
        residual: res,
    })
}

/// Scaled Gaussian reference `(2 pi)^{-1/2} Omega^{1/4} g_osc(Omega^{1/2}(1-x))`.
pub fn gaussian_reference(rp: &ReducedParams, x: f64) -> f64 {
    let g = Gaussian { alpha: alpha(rp.s, rp.gamma) };
    (2.0 * PI).powf(-0.5) * rp.speed.powf(0.25) * g.eval(rp.speed.sqrt() * (1.0 - x))
}

/// Sup over the sub-annulus `A_sqrt(eta)` of
/// `|sqrt(2 pi) Omega^{-1/4} g(x) - g_osc(Omega^{1/2}(1-x))| * eps`;
/// decreasing in `Omega0` at fixed `eps`.
pub fn check_gaussian_closeness(profile: &RadialProfile, rp: &ReducedParams) -> f64 {
    let g = Gaussian { alpha: alpha(rp.s, rp.gamma) };
    let half = rp.eps * rp.eps * default_eta(rp.eps).sqrt();
    let mut sup: f64 = 0.0;
    for (i, &x) in profile.grid.nodes.iter().enumerate() {
        if (x - 1.0).abs() > half {
            continue;
        }
        let scaled = (2.0 * PI).sqrt() * rp.speed.powf(-0.25) * profile.values[i];
        let dev = (scaled - g.eval(rp.speed.sqrt() * (1.0 - x))).abs();
        sup = sup.max(dev);
    }
    sup * rp.eps
}

/// Sup of the raw amplitude deviation from the scaled Gaussian on the grid.
pub fn gaussian_sup_deviation(profile: &RadialProfile, rp: &ReducedParams) -> f64 {
    profile
        .grid
        .nodes
        .iter()
        .zip(&profile.values)
        .map(|(&x, &v)| (v - gaussian_reference(rp, x)).abs())
        .fold(0.0, f64::max)
}

/// Sup over the common grid of `|g_gv - g_sym|`.
pub fn check_symmetry_closeness(gv: &RadialProfile, sym: &RadialProfile) -> Result<f64> {
    if gv.grid.len() != sym.grid.len()
        || (gv.grid.bounds.0 - sym.grid.bounds.0).abs() > 1e-12
        || (gv.grid.bounds.1 - sym.grid.bounds.1).abs() > 1e-12
    {
        return Err(GpError::GridMismatch(
            "profiles must share a grid for the symmetry comparison".to_string(),
        ));
    }
    Ok(gv.values.iter().zip(&sym.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// The two potential functions on the sub-annulus `A_sqrt(eta)`:
/// `F1(x) = Om int_{1-eps^2 sqrt(eta)}^x (t - 1/t) g^2 dt` vanishes at the
/// inner edge, `F2(x) = -Om int_x^{1+eps^2 sqrt(eta)} (t - 1/t) g^2 dt` at the
/// outer edge. `F1 - F2` is constant in `x`; its value is the jump of the
/// discontinuous potential at the profile maximum.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialsF {
    pub nodes: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub jump_at_max: f64,
}

pub fn potentials_f(profile: &RadialProfile, rp: &ReducedParams) -> PotentialsF {
    let half = rp.eps * rp.eps * default_eta(rp.eps).sqrt();
    let lo = 1.0 - half;
    let hi = 1.0 + half;
    let mut nodes = Vec::new();
    let mut integrand = Vec::new();
    for (i, &x) in profile.grid.nodes.iter().enumerate() {
        if x < lo - 1e-15 || x > hi + 1e-15 {
            continue;
        }
        nodes.push(x);
        let g2 = profile.values[i] * profile.values[i];
        integrand.push(rp.speed * (x - 1.0 / x) * g2);
    }
    let n = nodes.len();
    let mut f1 = vec![0.0; n];
    for i in 1..n {
        let h = nodes[i] - nodes[i - 1];
        f1[i] = f1[i - 1] + 0.5 * h * (integrand[i] + integrand[i - 1]);
    }
    let total = f1[n - 1];
    let f2: Vec<f64> = f1.iter().map(|v| v - total).collect();
    PotentialsF { nodes, f1, f2, jump_at_max: total }
}

/// Minimizes the radial reduction of the GP functional over fields with a
/// fixed integer phase winding `n`.
pub fn symmetric_vortex_profile(
    n: i64,
    rp: &ReducedParams,
    grid: Option<&RadialGrid>,
) -> Result<RadialProfile> {
    let problem = RadialProblem::fixed_winding(*rp, n)?;
    let default_grid;
    let g = match grid {
        Some(g) => g,
        None => {
            default_grid = problem.default_grid()?;
            &default_grid
        }
    };
    minimize_radial(&problem, g, None)
}

/// Second-variation quadratic form of the energy around the symmetric vortex
/// `f_n e^{i n theta}`, evaluated on the two-sided test perturbation built
/// from `A(x) = x^{d+1} f_n'` and `B(x) = n x^d f_n` below the maximum point.
///
/// A negative value certifies instability of the symmetric state.
pub fn second_variation_q(profile: &RadialProfile, n: i64, d: i64, rp: &ReducedParams) -> f64 {
    let (c_plus, c_minus) = symmetry_test_functions(profile, n, d);
    q_form(profile, n, d, rp, &c_plus, &c_minus)
}

/// The radial factors `c_+ = A + B` (mode `n + d`) and `c_- = A - B`
/// (mode `n - d`) of the symmetry-breaking test perturbation.
pub fn symmetry_test_functions(profile: &RadialProfile, n: i64, d: i64) -> (Vec<f64>, Vec<f64>) {
    let g = &profile.grid;
    let m = g.len();
    let h = g.spacing();
    let xmax = profile.max_position;
    let nf = n as f64;
    let df = d as f64;
    let mut c_plus = vec![0.0; m];
    let mut c_minus = vec![0.0; m];
    for i in 0..m {
        let x = g.nodes[i];
        let fp = if i == 0 {
            (profile.values[1] - profile.values[0]) / h
        } else if i == m - 1 {
            (profile.values[m - 1] - profile.values[m - 2]) / h
        } else {
            (profile.values[i + 1] - profile.values[i - 1]) / (2.0 * h)
        };
        let a = if x <= xmax { x.powf(df + 1.0) * fp } else { 0.0 };
        let b = if x <= xmax {
            nf * x.powf(df) * profile.values[i]
        } else {
            nf * xmax.powf(df) * profile.values[i]
        };
        c_plus[i] = a + b;
        c_minus[i] = a - b;
    }
    (c_plus, c_minus)
}

/// Evaluates the quadratic form on radial factors of the two angular modes
/// `n + d` and `n - d` by node quadrature (edge differences for the kinetic
/// term, consistent with the solver's discretization).
pub fn q_form(
    profile: &RadialProfile,
    n: i64,
    d: i64,
    rp: &ReducedParams,
    c_plus: &[f64],
    c_minus: &[f64],
) -> f64 {
    let g = &profile.grid;
    let m = g.len();
    let h = g.spacing();
    let e2inv = 1.0 / (rp.eps * rp.eps);
    let nf = n as f64;
    let df = d as f64;
    let mut total = 0.0;
    for i in 1..m {
        let xm = 0.5 * (g.nodes[i - 1] + g.nodes[i]);
        let dp = (c_plus[i] - c_plus[i - 1]) / h;
        let dm = (c_minus[i] - c_minus[i - 1]) / h;
        total += 2.0 * PI * xm * h * 0.5 * (dp * dp + dm * dm);
    }
    for i in 0..m {
        let x = g.nodes[i];
        if x <= 0.0 {
            continue;
        }
        let w = g.weights[i];
        let f2 = profile.values[i] * profile.values[i];
        let wpot = eval_w(x, rp.s).unwrap();
        let bp = (nf + df) / x - rp.speed * x;
        let bm = (nf - df) / x - rp.speed * x;
        let common = rp.gamma * rp.speed * rp.speed * wpot + 4.0 * e2inv * f2 - profile.mu;
        total += w
            * (0.5 * (bp * bp * c_plus[i] * c_plus[i] + bm * bm * c_minus[i] * c_minus[i])
                + common * (c_plus[i] * c_plus[i] + c_minus[i] * c_minus[i]));
        // phase-locking term 2 eps^-2 Re int f^2 Xi^2 e^{-2 i n theta}
        total += w * 2.0 * e2inv * f2 * 2.0 * c_plus[i] * c_minus[i];
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{big_omega_c, tf_energy, tf_profile};
    use crate::params::ReducedParams;

    #[test]
    fn grid_weights_reproduce_area() {
        let g = RadialGrid::uniform(0.25, 1.75, 301).unwrap();
        let total: f64 = g.weights.iter().sum();
        let exact = PI * (1.75f64 * 1.75 - 0.25 * 0.25);
        assert!((total - exact).abs() < 1e-12 * exact);
        assert!(g.weights.iter().all(|&w| w > 0.0));
        let gl = RadialGrid::uniform_line(0.25, 1.75, 301).unwrap();
        let total: f64 = gl.weights.iter().sum();
        assert!((total - 2.0 * PI * 1.5).abs() < 1e-12 * total);
    }

    fn ground_profile(rp: &ReducedParams) -> RadialProfile {
        let problem = RadialProblem::ground(*rp);
        let grid = problem.default_grid().unwrap();
        minimize_radial(&problem, &grid, None).unwrap()
    }

    #[test]
    fn ground_profile_static_trap_matches_tf() {
        // omega = 0, s = 4, eps = 0.1: energy close to E^TF from above.
        let rp = ReducedParams::omega_frame(0.1, 4.0, 1.0, 0.0).unwrap();
        let p = ground_profile(&rp);
        assert!((p.mass() - 1.0).abs() < 1e-9);
        let tf = tf_profile(&rp).unwrap();
        let etf = tf_energy(&tf);
        assert!(p.energy >= etf - 1e-6 * etf.abs());
        // kinetic correction is O(|log eps|) against mu ~ 97
        assert!(p.energy - etf < 20.0, "Ehat - Etf = {}", p.energy - etf);
        assert!(p.residual < 1e-6);
        // profile close to sqrt(TF) in the bulk
        for &x in &[0.2, 0.5, 0.8] {
            let want = tf.density(x).sqrt();
            assert!((p.interp(x) - want).abs() < 0.05 * want);
        }
    }

    #[test]
    fn ground_profile_above_transition_has_low_central_mass() {
        // The central depletion sharpens with eps and Omega; at eps = 0.05 and
        // twice the critical speed the hole is already deep.
        let eps = 0.05;
        let big = 2.0 * big_omega_c(eps, 4.0, 1.0);
        let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, big).unwrap();
        let p = ground_profile(&rp);
        let tf = tf_profile(&rp).unwrap();
        assert!(tf.x_in > 0.0);
        let cut = 0.5 * tf.x_in;
        let mass_inside: f64 = p
            .grid
            .nodes
            .iter()
            .zip(p.grid.weights.iter().zip(&p.values))
            .filter(|(&x, _)| x < cut)
            .map(|(_, (w, f))| w * f * f)
            .sum();
        assert!(mass_inside < 1e-6, "central mass {mass_inside}");
    }

    fn gv_rp(eps: f64, omega0: f64) -> ReducedParams {
        ReducedParams::from_omega0(eps, 4.0, 1.0, omega0).unwrap()
    }

    #[test]
    fn giant_vortex_energy_matches_bracket() {
        // E^GV / Omega ~ alpha/2 + (1/2pi) sqrt(alpha/(2 pi Omega0))
        let rp = gv_rp(0.05, 100.0);
        let problem = RadialProblem::giant_vortex(rp).unwrap();
        let grid = problem.default_grid().unwrap();
        let p = minimize_radial(&problem, &grid, None).unwrap();
        let a = alpha(4.0, 1.0);
        let predicted = 0.5 * a + 0.009937291053346771;
        let got = p.energy / rp.speed;
        assert!(
            (got - predicted).abs() < 0.02 * predicted,
            "E/Omega = {got}, predicted {predicted}"
        );
        // unique interior maximum near x = 1
        assert!((p.max_position - 1.0).abs() < 0.01);
        let imax = p.values.iter().position(|&v| v == p.sup()).unwrap();
        assert!(imax > 0 && imax < p.values.len() - 1);
        let increasing = p.values[..imax].windows(2).all(|w| w[0] <= w[1] + 1e-12 * p.sup());
        let decreasing = p.values[imax..].windows(2).all(|w| w[0] >= w[1] - 1e-12 * p.sup());
        assert!(increasing && decreasing, "profile not unimodal");
    }

    #[test]
    fn symmetric_profile_is_symmetric_and_neumann() {
        let rp = gv_rp(0.05, 100.0);
        let problem = RadialProblem::symmetric(rp).unwrap();
        let grid = problem.default_grid().unwrap();
        let p = minimize_radial(&problem, &grid, None).unwrap();
        let n = p.values.len();
        let sup = p.sup();
        for i in 0..n {
            let dev = (p.values[i] - p.values[n - 1 - i]).abs();
            assert!(dev < 1e-9 * sup, "symmetry violated: {dev:.3e}");
        }
        // Neumann: one-sided slope at the ends small vs the interior scale
        let h = p.grid.spacing();
        let interior_slope = sup * rp.speed.sqrt();
        let d0 = (p.values[1] - p.values[0]).abs() / h;
        let dn = (p.values[n - 1] - p.values[n - 2]).abs() / h;
        assert!(d0 < 1e-3 * interior_slope, "inner slope {d0:.3e}");
        assert!(dn < 1e-3 * interior_slope, "outer slope {dn:.3e}");
        assert!((p.max_position - 1.0).abs() < 2.0 * h);
    }

    #[test]
    fn annulus_energy_matches_full_giant_vortex() {
        // E^GV_{eps,eta} = (1 + O(eps^inf)) E^GV; solve both on the same
        // nodes so that discretization error cancels in the comparison.
        let rp = gv_rp(0.1, 50.0);
        let ann = RadialProblem::giant_vortex_annulus(rp).unwrap();
        let grid = ann.default_grid().unwrap();
        let pa = minimize_radial(&ann, &grid, None).unwrap();
        let full = RadialProblem::giant_vortex(rp).unwrap();
        let pf = minimize_radial(&full, &grid, None).unwrap();
        let rel = (pf.energy - pa.energy).abs() / pf.energy;
        assert!(rel < 1e-8, "relative annulus/full gap {rel:.3e}");
    }

    #[test]
    fn gaussian_closeness_decreases_with_omega0() {
        let mut prev = f64::INFINITY;
        for &omega0 in &[10.0, 100.0, 1000.0] {
            let rp = gv_rp(0.05, omega0);
            let problem = RadialProblem::giant_vortex_annulus(rp).unwrap();
            let p = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
            let dev = check_gaussian_closeness(&p, &rp);
            assert!(dev.is_finite() && dev < 1.0);
            assert!(dev < prev, "deviation not decreasing at Omega0={omega0}: {dev} vs {prev}");
            prev = dev;
        }
    }

    #[test]
    fn symmetric_profile_closer_than_gaussian() {
        let rp = gv_rp(0.05, 100.0);
        let ann = RadialProblem::giant_vortex_annulus(rp).unwrap();
        let grid = ann.default_grid().unwrap();
        let gv = minimize_radial(&ann, &grid, None).unwrap();
        let symp = RadialProblem::symmetric(rp).unwrap();
        let sym_grid = RadialGrid::uniform_line(grid.bounds.0, grid.bounds.1, grid.len()).unwrap();
        let sym = minimize_radial(&symp, &sym_grid, None).unwrap();
        let sup_sym = check_symmetry_closeness(&gv, &sym).unwrap();
        let sup_gauss = gaussian_sup_deviation(&gv, &rp);
        assert!(
            sup_sym < sup_gauss,
            "sym deviation {sup_sym:.3e} not below gaussian {sup_gauss:.3e}"
        );
        assert_eq!(check_symmetry_closeness(&gv, &gv).unwrap(), 0.0);
        let other = RadialGrid::uniform_line(0.5, 1.5, grid.len()).unwrap();
        let fake = RadialProfile {
            grid: other,
            values: vec![0.0; grid.len()],
            energy: 0.0,
            mu: 0.0,
            max_position: 1.0,
            residual: 0.0,
        };
        assert!(check_symmetry_closeness(&gv, &fake).is_err());
    }

    #[test]
    fn gv_profile_pointwise_bounds_and_decay() {
        // sup bound, maximum position trend and Gaussian tail decay with a
        // fitted positive rate, stable across the Omega0 ladder
        let mut rates: Vec<f64> = Vec::new();
        for &omega0 in &[25.0, 100.0] {
            let rp = gv_rp(0.05, omega0);
            let big = rp.speed;
            let a = alpha(4.0, 1.0);
            let problem = RadialProblem::giant_vortex_annulus(rp).unwrap();
            let p = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
            // sup g^2 <= (1 + Omega0^-1/4) sqrt(alpha Omega) / (2 pi^(3/2))
            let sup_bound = 0.5 * PI.powf(-1.5) * (a * big).sqrt() * (1.0 + omega0.powf(-0.25));
            assert!(
                p.sup() * p.sup() <= sup_bound,
                "sup g^2 = {} above {sup_bound}",
                p.sup() * p.sup()
            );
            // |1 - x_max| <= C Omega0^(-5/8) eps^2 with C = 2
            assert!(
                (1.0 - p.max_position).abs() <= 2.0 * omega0.powf(-0.625) * rp.eps * rp.eps,
                "max at {} too far from 1",
                p.max_position
            );
            // Gaussian tail bound g^2 eps^2 <= C0 exp(-c Om (|1-x| - d0)^2) with
            // fixed fitted constants c = 1, C0 = sup g^2 eps^2, checked on every
            // grid node beyond the offset (underflowed nodes pass trivially)
            let d0 = rp.eps * rp.eps * default_eta(rp.eps).powf(0.25);
            let c0 = p.sup() * p.sup() * rp.eps * rp.eps * (1.0 + 1e-12);
            for (i, &x) in p.grid.nodes.iter().enumerate() {
                let d = (x - 1.0).abs() - d0;
                if d <= 0.0 {
                    continue;
                }
                let g2 = p.values[i] * p.values[i] * rp.eps * rp.eps;
                assert!(
                    g2 <= c0 * (-big * d * d).exp() + 1e-300,
                    "tail bound violated at x={x}, Omega0={omega0}"
                );
                // implied rate where the density is still representable
                if g2 > 1e-250 {
                    rates.push(-(g2 / c0).ln() / (big * d * d));
                }
            }
        }
        // every measurable implied rate is positive and at least the fixed c = 1
        assert!(!rates.is_empty());
        for r in &rates {
            assert!(*r >= 1.0, "implied tail rate {r} below the fitted constant");
        }
    }

    #[test]
    fn ground_energy_sits_between_tf_and_log_corrected_tf() {
        // E_tf <= E_hat, with (E_hat - E_tf) / ((eps Om)^(4/3) |log(eps^4 Om)|)
        // bounded across a ladder
        let eps = 0.05;
        let mut ratios = Vec::new();
        for &big in &[60.0, 120.0, 240.0] {
            let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, big).unwrap();
            let p = ground_profile(&rp);
            let etf = tf_energy(&tf_profile(&rp).unwrap());
            assert!(p.energy >= etf, "E_hat {} below E_tf {etf}", p.energy);
            let scale = (eps * big).powf(4.0 / 3.0) * (eps.powi(4) * big).ln().abs();
            ratios.push((p.energy - etf) / scale);
        }
        for r in &ratios {
            assert!(*r > 0.0 && *r < 2.0, "kinetic-correction ratio {r} out of bracket");
        }
    }

    #[test]
    fn potentials_vanish_at_edges_and_jump_is_small() {
        let rp = gv_rp(0.05, 100.0);
        let ann = RadialProblem::giant_vortex_annulus(rp).unwrap();
        let p = minimize_radial(&ann, &ann.default_grid().unwrap(), None).unwrap();
        let pots = potentials_f(&p, &rp);
        let n = pots.nodes.len();
        assert_eq!(pots.f1[0], 0.0);
        assert!(pots.f2[n - 1].abs() < 1e-12 * pots.f1[n - 1].abs().max(1.0));
        for i in 0..n {
            assert!((pots.f1[i] - pots.f2[i] - pots.jump_at_max).abs() < 1e-9);
        }
        // jump bounded by C Omega0 eta^{3/2}
        let eta = default_eta(rp.eps);
        let bound_scale = rp.omega0().unwrap() * eta.powf(1.5);
        assert!(
            pots.jump_at_max.abs() < 2.0 * bound_scale,
            "jump {} vs scale {}",
            pots.jump_at_max,
            bound_scale
        );
        // pointwise |F1| <= alpha^{-1}(1 + C Omega0^{-1/4}) g^2 on its half
        let a = alpha(4.0, 1.0);
        let factor = (1.0 + rp.omega0().unwrap().powf(-0.25)) / a;
        for (i, &x) in pots.nodes.iter().enumerate() {
            let g2 = p.interp(x).powi(2);
            if x <= p.max_position {
                assert!(pots.f1[i].abs() <= factor * g2 + 1e-9, "F1 bound at x={x}");
            } else {
                assert!(pots.f2[i].abs() <= factor * g2 + 1e-9, "F2 bound at x={x}");
            }
        }
    }

    #[test]
    fn fixed_winding_zero_with_zero_speed_matches_ground() {
        let rp = ReducedParams::omega_frame(0.1, 4.0, 1.0, 0.0).unwrap();
        let ground = ground_profile(&rp);
        let problem = RadialProblem::fixed_winding(rp, 0).unwrap();
        let grid = RadialProblem::ground(rp).default_grid().unwrap();
        let p = minimize_radial(&problem, &grid, None).unwrap();
        assert!((p.energy - ground.energy).abs() < 1e-8 * ground.energy.abs());
    }

    #[test]
    fn fixed_winding_positive_vanishes_at_origin() {
        let rp = ReducedParams::big_omega_frame(0.25, 4.0, 1.0, 300.0).unwrap();
        let p = symmetric_vortex_profile(280, &rp, None).unwrap();
        assert!(p.values[0] < 1e-8 * p.sup());
        assert!((p.mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn energy_minimum_over_winding_sits_near_speed() {
        // E_n has a minimum near n = Omega in the giant-vortex regime.
        let rp = gv_rp(0.25, 1.0); // Omega = 256
        let ns = [206, 236, 256, 276, 306];
        let energies: Vec<f64> =
            ns.iter().map(|&n| symmetric_vortex_profile(n, &rp, None).unwrap().energy).collect();
        let imin =
            (0..ns.len()).min_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap()).unwrap();
        assert!(
            (ns[imin] as f64 - rp.speed).abs() <= 20.0 + 1e-9,
            "minimizing winding {} vs Omega {}",
            ns[imin],
            rp.speed
        );
    }

    #[test]
    fn second_variation_zero_on_zero_test_function() {
        let rp = gv_rp(0.25, 1.0);
        let p = symmetric_vortex_profile(256, &rp, None).unwrap();
        let zeros = vec![0.0; p.grid.len()];
        let q = q_form(&p, 256, 2, &rp, &zeros, &zeros);
        assert_eq!(q, 0.0);
    }

    #[test]
    fn solver_rejects_coarse_grid() {
        let rp = gv_rp(0.05, 100.0);
        let problem = RadialProblem::giant_vortex(rp).unwrap();
        let coarse = RadialGrid::uniform(0.9, 1.1, 32).unwrap();
        assert!(matches!(minimize_radial(&problem, &coarse, None), Err(GpError::Domain(_))));
    }
}
