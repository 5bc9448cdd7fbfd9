//! Full 2D complex Gross-Pitaevskii minimizer in either scaling, trial-state
//! constructors, and the energy-decoupling diagnostics.
//!
//! Fields may carry an integer *gauge winding* `n0`: the stored values are
//! `chi = psi exp(-i n0 theta)`, the slowly varying factor of a state whose
//! phase winds `n0` times around the origin. All energies and gradients
//! account for the gauge exactly through the reduced azimuthal potential
//! `B(r) = speed * r - n0 / r`; the representation is a reparametrization, not
//! an approximation. Ordinary states use `n0 = 0`.
//!
//! The minimizer is a normalized gradient descent on the discrete energy,
//! preconditioned by the factorized implicit Laplacian
//! `P = (c - dxx/2)(c - dyy/2)/c` (two tridiagonal sweeps). Stationary points
//! of the discrete energy are exact fixed points for every step size; the
//! step size adapts so the energy never increases.

use crate::analytic::{alpha, eval_w, Gaussian};
use crate::error::{GpError, Result};
use crate::numerics::thomas_solve2;
use crate::params::{Frame, ReducedParams};
use crate::radial::{RadialProblem, RadialProfile};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Complex wavefunction on a uniform Cartesian grid (row-major, x fastest).
#[derive(Debug, Clone)]
pub struct ComplexField2D {
    pub nx: usize,
    pub ny: usize,
    /// `[x_min, x_max, y_min, y_max]`.
    pub bounds: [f64; 4],
    pub values: Vec<Complex64>,
    /// Integer gauge winding `n0`; the physical field is
    /// `values * exp(i n0 theta)`.
    pub gauge_winding: i64,
    /// Cached squared L2 norm of the last normalization.
    pub mass: f64,
}

impl ComplexField2D {
    pub fn zeros(nx: usize, ny: usize, bounds: [f64; 4]) -> Self {
        ComplexField2D {
            nx,
            ny,
            bounds,
            values: vec![Complex64::new(0.0, 0.0); nx * ny],
            gauge_winding: 0,
            mass: 0.0,
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn hx(&self) -> f64 {
        (self.bounds[1] - self.bounds[0]) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.bounds[3] - self.bounds[2]) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.bounds[0] + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.bounds[2] + j as f64 * self.hy()
    }

    /// Discrete squared L2 norm `sum h^2 |chi|^2`.
    pub fn norm_sq(&self) -> f64 {
        let w = self.hx() * self.hy();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * w
    }

    /// Normalizes to unit mass and caches the norm.
    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(GpError::domain(format!("cannot normalize field with |psi|^2 = {n2}")));
        }
        let s = n2.sqrt().recip();
        self.values.iter_mut().for_each(|v| *v *= s);
        self.mass = 1.0;
        Ok(())
    }

    /// Density `|psi|^2` at a node (gauge independent).
    pub fn density(&self, i: usize, j: usize) -> f64 {
        self.values[self.idx(i, j)].norm_sqr()
    }

    pub fn sup_density(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max)
    }

    /// Bilinear interpolation of the stored (gauge-factored) values.
    pub fn interp(&self, x: f64, y: f64) -> Complex64 {
        let hx = self.hx();
        let hy = self.hy();
        let fx = ((x - self.bounds[0]) / hx).clamp(0.0, (self.nx - 1) as f64 - 1e-9);
        let fy = ((y - self.bounds[2]) / hy).clamp(0.0, (self.ny - 1) as f64 - 1e-9);
        let i = fx.floor() as usize;
        let j = fy.floor() as usize;
        let ax = fx - i as f64;
        let ay = fy - j as f64;
        let v00 = self.values[self.idx(i, j)];
        let v10 = self.values[self.idx(i + 1, j)];
        let v01 = self.values[self.idx(i, j + 1)];
        let v11 = self.values[self.idx(i + 1, j + 1)];
        v00 * (1.0 - ax) * (1.0 - ay) + v10 * ax * (1.0 - ay) + v01 * (1.0 - ax) * ay
            + v11 * ax * ay
    }
}

/// Solver configuration for the 2D flow.
#[derive(Debug, Clone, Copy)]
pub struct GPConfig {
    pub rp: ReducedParams,
    /// Initial preconditioned step size.
    pub dt: f64,
    pub max_iters: usize,
    /// Relative energy-flat threshold that, together with the residual
    /// criterion, terminates the flow.
    pub tol_energy: f64,
    /// Relative residual of the discrete GP equation.
    pub tol_residual: f64,
    /// Half-width of the square computational box.
    pub truncation_radius: f64,
    /// Active annulus `[r_lo, r_hi]`; `(0, inf)` means the whole box.
    pub annulus: (f64, f64),
    /// Grid refinement: spacing = `min(eps, Omega^{-1/2}) / points_per_scale`.
    pub points_per_scale: f64,
    /// Record the energy trace every `trace_every` iterations (0 = never).
    pub trace_every: usize,
}

impl GPConfig {
    /// Default configuration: box half-width
    /// `max(1.5 x_out, 1 + 12 Omega^{-1/2})`, spacing
    /// `min(eps, Omega^{-1/2}) / 4`.
    pub fn default_for(rp: &ReducedParams) -> Result<GPConfig> {
        let tf = crate::analytic::tf_profile(rp)?;
        let big = big_omega_equiv(rp);
        let trunc = (1.5 * tf.x_out).max(1.0 + 12.0 * big.powf(-0.5).min(1.0));
        Ok(GPConfig {
            rp: *rp,
            dt: 0.1,
            max_iters: 40_000,
            tol_energy: 1e-11,
            tol_residual: 1e-5,
            truncation_radius: trunc,
            annulus: (0.0, f64::INFINITY),
            points_per_scale: 4.0,
            trace_every: 0,
        })
    }

    /// Grid spacing implied by the resolution rule.
    pub fn spacing(&self) -> f64 {
        let big = big_omega_equiv(&self.rp);
        let osc = if big > 0.0 { big.powf(-0.5) } else { f64::INFINITY };
        self.rp.eps.min(osc) / self.points_per_scale
    }

    /// Number of nodes per side of the square box.
    pub fn grid_side(&self) -> usize {
        let h = self.spacing();
        (2.0 * self.truncation_radius / h).ceil() as usize + 1
    }

    /// An empty field on this configuration's grid.
    pub fn empty_field(&self) -> ComplexField2D {
        let n = self.grid_side();
        let l = self.truncation_radius;
        ComplexField2D::zeros(n, n, [-l, l, -l, l])
    }

    fn validate_against(&self, field: &ComplexField2D) -> Result<()> {
        let big = big_omega_equiv(&self.rp);
        let osc = if big > 0.0 { big.powf(-0.5) } else { f64::INFINITY };
        let rule = self.rp.eps.min(osc) / 4.0;
        if field.hx() > rule * (1.0 + 1e-9) || field.hy() > rule * (1.0 + 1e-9) {
            return Err(GpError::domain(format!(
                "grid spacing {:.3e} x {:.3e} too coarse; need <= {:.3e}",
                field.hx(),
                field.hy(),
                rule
            )));
        }
        Ok(())
    }
}

// Omega-frame speed equivalent used by resolution and truncation rules.
fn big_omega_equiv(rp: &ReducedParams) -> f64 {
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

/// Pointwise potential of the expanded covariant energy at radius `r`,
/// including the gauge-reduced azimuthal term `B(r)^2 / 2` with
/// `B = speed r - n0 / r`.
fn total_potential(rp: &ReducedParams, n0: i64, r: f64) -> f64 {
    let b = if n0 == 0 { rp.speed * r } else { rp.speed * r - n0 as f64 / r.max(1e-300) };
    0.5 * b * b + hat_potential(rp, r)
}

/// Trap part only (the potential of the phase-free reference functional).
fn hat_potential(rp: &ReducedParams, r: f64) -> f64 {
    match rp.frame {
        Frame::BigOmega => rp.gamma * rp.speed * rp.speed * eval_w(r, rp.s).unwrap(),
        Frame::Omega => {
            r.powf(rp.s) / (rp.eps * rp.eps) - 0.5 * rp.gamma * rp.speed * rp.speed * r * r
        }
    }
}

/// Precomputed discretization of one 2D problem.
struct Workspace {
    nx: usize,
    ny: usize,
    hx: f64,
    hy: f64,
    w: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    active: Vec<bool>,
    potential: Vec<f64>,
    /// Rotation coefficient `phi(r) = speed - n0 / r^2` at nodes.
    phi: Vec<f64>,
    quartic: f64,
    row_runs: Vec<(usize, usize, usize)>, // (j, i_start, i_end) inclusive
    col_runs: Vec<(usize, usize, usize)>, // (i, j_start, j_end) inclusive
}

impl Workspace {
    fn new(field: &ComplexField2D, cfg: &GPConfig) -> Workspace {
        let (nx, ny) = (field.nx, field.ny);
        let hx = field.hx();
        let hy = field.hy();
        let xs: Vec<f64> = (0..nx).map(|i| field.x(i)).collect();
        let ys: Vec<f64> = (0..ny).map(|j| field.y(j)).collect();
        let n0 = field.gauge_winding;
        let (r_lo, r_hi) = cfg.annulus;
        let mut active = vec![false; nx * ny];
        let mut potential = vec![0.0; nx * ny];
        let mut phi = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let r = (xs[i] * xs[i] + ys[j] * ys[j]).sqrt();
                let interior = i > 0 && i + 1 < nx && j > 0 && j + 1 < ny;
                let inside = r >= r_lo && r <= r_hi && (n0 == 0 || r > 1e-9);
                let p = j * nx + i;
                if interior && inside {
                    active[p] = true;
                    potential[p] = total_potential(&cfg.rp, n0, r);
                    phi[p] =
                        if n0 == 0 { cfg.rp.speed } else { cfg.rp.speed - n0 as f64 / (r * r) };
                }
            }
        }
        let mut row_runs = Vec::new();
        for j in 0..ny {
            let mut i = 0;
            while i < nx {
                if active[j * nx + i] {
                    let start = i;
                    while i < nx && active[j * nx + i] {
                        i += 1;
                    }
                    row_runs.push((j, start, i - 1));
                } else {
                    i += 1;
                }
            }
        }
        let mut col_runs = Vec::new();
        for i in 0..nx {
            let mut j = 0;
            while j < ny {
                if active[j * nx + i] {
                    let start = j;
                    while j < ny && active[j * nx + i] {
                        j += 1;
                    }
                    col_runs.push((i, start, j - 1));
                } else {
                    j += 1;
                }
            }
        }
        Workspace {
            nx,
            ny,
            hx,
            hy,
            w: hx * hy,
            xs,
            ys,
            active,
            potential,
            phi,
            quartic: 1.0 / (cfg.rp.eps * cfg.rp.eps),
            row_runs,
            col_runs,
        }
    }

    #[inline]
    fn at(&self, v: &[Complex64], i: isize, j: isize) -> Complex64 {
        if i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize {
            return Complex64::new(0.0, 0.0);
        }
        let p = j as usize * self.nx + i as usize;
        if self.active[p] {
            v[p]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Azimuthal derivative stencil `M chi = x d_y chi - y d_x chi` (central).
    fn apply_m(&self, v: &[Complex64], out: &mut [Complex64]) {
        for &(j, s, e) in &self.row_runs {
            for i in s..=e {
                let p = j * self.nx + i;
                let dy = (self.at(v, i as isize, j as isize + 1)
                    - self.at(v, i as isize, j as isize - 1))
                    / (2.0 * self.hy);
                let dx = (self.at(v, i as isize + 1, j as isize)
                    - self.at(v, i as isize - 1, j as isize))
                    / (2.0 * self.hx);
                out[p] = self.xs[i] * dy - self.ys[j] * dx;
            }
        }
    }

    /// Discrete energy: edge kinetic + pointwise potential/quartic - rotation.
    fn energy(&self, v: &[Complex64]) -> f64 {
        let mut kin = 0.0;
        for &(j, s, e) in &self.row_runs {
            for i in s..=e {
                let p = j * self.nx + i;
                let right = self.at(v, i as isize + 1, j as isize);
                kin += 0.5 * (right - v[p]).norm_sqr() / (self.hx * self.hx);
                if i == s {
                    kin += 0.5 * v[p].norm_sqr() / (self.hx * self.hx);
                }
            }
        }
        for &(i, s, e) in &self.col_runs {
            for j in s..=e {
                let p = j * self.nx + i;
                let up = self.at(v, i as isize, j as isize + 1);
                kin += 0.5 * (up - v[p]).norm_sqr() / (self.hy * self.hy);
                if j == s {
                    kin += 0.5 * v[p].norm_sqr() / (self.hy * self.hy);
                }
            }
        }
        let mut pot = 0.0;
        let mut rot = 0.0;
        let mut mbuf = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply_m(v, &mut mbuf);
        for &(j, s, e) in &self.row_runs {
            for i in s..=e {
                let p = j * self.nx + i;
                let d = v[p].norm_sqr();
                pot += self.potential[p] * d + self.quartic * d * d;
                rot += self.phi[p] * (v[p].conj() * mbuf[p]).im;
            }
        }
        self.w * (kin + pot - rot)
    }

    /// `H chi = -lap/2 + V chi + 2 eps^-2 |chi|^2 chi + rotation gradient`,
    /// the exact gradient of [`Self::energy`] per unit quadrature weight.
    fn apply_h(&self, v: &[Complex64], out: &mut [Complex64], scratch: &mut [Complex64]) {
        for &(j, s, e) in &self.row_runs {
            for i in s..=e {
                let p = j * self.nx + i;
                out[p] = v[p] * self.phi[p];
            }
        }
        self.apply_m(out, scratch); // scratch = M(phi chi)
        let ix2 = 1.0 / (self.hx * self.hx);
        let iy2 = 1.0 / (self.hy * self.hy);
        let half_i = Complex64::new(0.0, 0.5);
        for &(j, s, e) in &self.row_runs {
            for i in s..=e {
                let p = j * self.nx + i;
                let c = v[p];
                let east = self.at(v, i as isize + 1, j as isize);
                let west = self.at(v, i as isize - 1, j as isize);
                let north = self.at(v, i as isize, j as isize + 1);
                let south = self.at(v, i as isize, j as isize - 1);
                let lap = (east + west - 2.0 * c) * ix2 + (north + south - 2.0 * c) * iy2;
                let mchi = self.xs[i] * (north - south) / (2.0 * self.hy)
                    - self.ys[j] * (east - west) / (2.0 * self.hx);
                let rot = half_i * (self.phi[p] * mchi + scratch[p]);
                out[p] =
                    -0.5 * lap + (self.potential[p] + 2.0 * self.quartic * c.norm_sqr()) * c + rot;
            }
        }
        for (p, a) in self.active.iter().enumerate() {
            if !a {
                out[p] = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Rayleigh quotient and relative residual norm; `hbuf` receives `H chi`.
    fn mu_and_residual(
        &self,
        v: &[Complex64],
        hbuf: &mut [Complex64],
        scratch: &mut [Complex64],
    ) -> (f64, f64) {
        self.apply_h(v, hbuf, scratch);
        let mut mu = 0.0;
        for (p, a) in self.active.iter().enumerate() {
            if *a {
                mu += (v[p].conj() * hbuf[p]).re;
            }
        }
        mu *= self.w;
        let mut r2 = 0.0;
        let mut m2 = 0.0;
        for (p, a) in self.active.iter().enumerate() {
            if *a {
                r2 += (hbuf[p] - mu * v[p]).norm_sqr();
                m2 += (mu * v[p]).norm_sqr();
            }
        }
        (mu, (r2 / m2.max(f64::MIN_POSITIVE)).sqrt())
    }

    /// In-place application of `P^-1 = c (c - dyy/2)^-1 (c - dxx/2)^-1`.
    fn precondition(&self, r: &mut [Complex64], c: f64) {
        let mut re = Vec::new();
        let mut im = Vec::new();
        let offx = -0.5 / (self.hx * self.hx);
        let diagx = c + 1.0 / (self.hx * self.hx);
        for &(j, s, e) in &self.row_runs {
            let n = e - s + 1;
            re.clear();
            im.clear();
            for i in s..=e {
                let p = j * self.nx + i;
                re.push(r[p].re);
                im.push(r[p].im);
            }
            let lower = vec![offx; n];
            let diag = vec![diagx; n];
            let upper = vec![offx; n];
            thomas_solve2(&lower, &diag, &upper, &mut re, &mut im);
            for (k, i) in (s..=e).enumerate() {
                let p = j * self.nx + i;
                r[p] = Complex64::new(re[k], im[k]);
            }
        }
        let offy = -0.5 / (self.hy * self.hy);
        let diagy = c + 1.0 / (self.hy * self.hy);
        for &(i, s, e) in &self.col_runs {
            let n = e - s + 1;
            re.clear();
            im.clear();
            for j in s..=e {
                let p = j * self.nx + i;
                re.push(r[p].re);
                im.push(r[p].im);
            }
            let lower = vec![offy; n];
            let diag = vec![diagy; n];
            let upper = vec![offy; n];
            thomas_solve2(&lower, &diag, &upper, &mut re, &mut im);
            for (k, j) in (s..=e).enumerate() {
                let p = j * self.nx + i;
                r[p] = Complex64::new(re[k], im[k]);
            }
        }
        for v in r.iter_mut() {
            *v *= c;
        }
    }

    fn norm_sq(&self, v: &[Complex64]) -> f64 {
        let mut n2 = 0.0;
        for (p, a) in self.active.iter().enumerate() {
            if *a {
                n2 += v[p].norm_sqr();
            }
        }
        n2 * self.w
    }
}

/// Discrete GP energy of a normalized field (expanded covariant form).
pub fn energy(psi: &ComplexField2D, cfg: &GPConfig) -> Result<f64> {
    cfg.validate_against(psi)?;
    if (psi.norm_sq() - 1.0).abs() > 1e-8 {
        return Err(GpError::domain(format!(
            "field must be normalized; |psi|^2 = {:.6e}",
            psi.norm_sq()
        )));
    }
    let ws = Workspace::new(psi, cfg);
    Ok(ws.energy(&psi.values))
}

/// Same energy through the pointwise covariant-derivative form
/// `|(grad - i B) chi|^2 / 2` with central gradients; agrees with [`energy`]
/// to discretization order and provides the gauge-consistency cross-check.
pub fn energy_covariant(psi: &ComplexField2D, cfg: &GPConfig) -> Result<f64> {
    cfg.validate_against(psi)?;
    let ws = Workspace::new(psi, cfg);
    let v = &psi.values;
    let n0 = psi.gauge_winding;
    let mut total = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * ws.nx + i;
            let x = ws.xs[i];
            let y = ws.ys[j];
            let r = (x * x + y * y).sqrt().max(1e-12);
            let gx = (ws.at(v, i as isize + 1, j as isize) - ws.at(v, i as isize - 1, j as isize))
                / (2.0 * ws.hx);
            let gy = (ws.at(v, i as isize, j as isize + 1) - ws.at(v, i as isize, j as isize - 1))
                / (2.0 * ws.hy);
            let b = cfg.rp.speed * r - n0 as f64 / r;
            let bx = -b * y / r;
            let by = b * x / r;
            let cvx = gx - Complex64::new(0.0, bx) * v[p];
            let cvy = gy - Complex64::new(0.0, by) * v[p];
            let d = v[p].norm_sqr();
            let trap = hat_potential(&cfg.rp, r);
            total += 0.5 * (cvx.norm_sqr() + cvy.norm_sqr()) + trap * d + ws.quartic * d * d;
        }
    }
    Ok(total * ws.w)
}

/// Rayleigh-quotient chemical potential of a state (no iteration); satisfies
/// `mu = E + eps^-2 ||psi||_4^4` exactly in the discretization.
pub fn chemical_potential(psi: &ComplexField2D, cfg: &GPConfig) -> Result<f64> {
    cfg.validate_against(psi)?;
    let ws = Workspace::new(psi, cfg);
    let n = psi.values.len();
    let mut hbuf = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let (mu, _) = ws.mu_and_residual(&psi.values, &mut hbuf, &mut scratch);
    Ok(mu)
}

/// Outcome of a 2D minimization.
#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub psi: ComplexField2D,
    pub energy: f64,
    pub mu: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Energy trace `(iteration, energy)` if requested in the config.
    pub trace: Vec<(usize, f64)>,
}

/// Runs the flow and enforces the convergence contract: the returned state
/// satisfies the residual tolerance.
pub fn minimize(psi0: &ComplexField2D, cfg: &GPConfig) -> Result<MinimizeOutcome> {
    let out = relax(psi0, cfg)?;
    if out.residual > cfg.tol_residual {
        return Err(GpError::Solver {
            context: "2D flow: residual above tolerance".to_string(),
            residual: out.residual,
            iterations: out.iterations,
        });
    }
    Ok(out)
}

/// Normalized preconditioned gradient flow until the residual and
/// energy-flat tolerances are met or the iteration budget runs out; returns
/// the final state either way (errors only on divergence). Deterministic for
/// fixed inputs. Chain calls to continue a relaxation.
pub fn relax(psi0: &ComplexField2D, cfg: &GPConfig) -> Result<MinimizeOutcome> {
    cfg.validate_against(psi0)?;
    let ws = Workspace::new(psi0, cfg);
    let n = psi0.values.len();
    let mut chi = psi0.values.clone();
    for (p, a) in ws.active.iter().enumerate() {
        if !a {
            chi[p] = Complex64::new(0.0, 0.0);
        }
    }
    let n2 = ws.norm_sq(&chi);
    if !(n2 > 0.0) {
        return Err(GpError::domain("initial field has zero mass on the active region".to_string()));
    }
    let s = n2.sqrt().recip();
    chi.iter_mut().for_each(|v| *v *= s);

    let mut hbuf = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut dir = vec![Complex64::new(0.0, 0.0); n];
    let mut trial = vec![Complex64::new(0.0, 0.0); n];

    let mut tau = cfg.dt;
    let mut energy = ws.energy(&chi);
    let mut c_shift = 1.0f64;
    let mut trace = Vec::new();
    let mut flat = 0usize;
    let mut iter = 0usize;
    loop {
        iter += 1;
        let (mu_now, res) = ws.mu_and_residual(&chi, &mut hbuf, &mut scratch);
        if cfg.trace_every > 0 && iter % cfg.trace_every == 0 {
            trace.push((iter, energy));
            if std::env::var_os("GPVORTEX_DEBUG").is_some() {
                eprintln!(
                    "iter {iter}: E = {energy:.10e}, res = {res:.3e}, tau = {tau:.3e}, c = {c_shift:.3e}"
                );
            }
        }
        if res <= cfg.tol_residual && (flat >= 10 || res <= 0.2 * cfg.tol_residual) {
            break;
        }
        if iter >= cfg.max_iters {
            break;
        }
        if iter % 25 == 1 {
            c_shift = mu_now.abs().max(1.0);
        }
        for p in 0..n {
            dir[p] = hbuf[p] - mu_now * chi[p];
        }
        ws.precondition(&mut dir, c_shift);
        let mut accepted = false;
        for _ in 0..60 {
            for p in 0..n {
                trial[p] = chi[p] - tau * dir[p];
            }
            let tn2 = ws.norm_sq(&trial);
            if tn2 > 0.0 && tn2.is_finite() {
                let sc = tn2.sqrt().recip();
                trial.iter_mut().for_each(|v| *v *= sc);
                let e_new = ws.energy(&trial);
                if e_new.is_finite() && e_new <= energy + 1e-13 * energy.abs().max(1.0) {
                    let delta = (energy - e_new).abs() / energy.abs().max(1.0);
                    std::mem::swap(&mut chi, &mut trial);
                    energy = e_new;
                    tau = (tau * 1.05).min(4.0);
                    flat = if delta < cfg.tol_energy { flat + 1 } else { 0 };
                    accepted = true;
                    break;
                }
            }
            tau *= 0.5;
            if tau < 1e-14 {
                break;
            }
        }
        if !accepted {
            // Energy floor reached along the preconditioned direction; the
            // current state is the best this flow can produce.
            break;
        }
    }
    let (mu, residual) = ws.mu_and_residual(&chi, &mut hbuf, &mut scratch);
    let energy = ws.energy(&chi);
    let mut out = psi0.clone();
    out.values = chi;
    out.mass = 1.0;
    Ok(MinimizeOutcome { psi: out, energy, mu, residual, iterations: iter, trace })
}

/// Builds a (gauge-factored) field from a radial amplitude profile:
/// `psi = f(r) exp(i n0 theta)` stored as `chi = f(r)`.
pub fn field_from_radial(
    profile: &RadialProfile,
    cfg: &GPConfig,
    gauge_winding: i64,
) -> Result<ComplexField2D> {
    let mut field = cfg.empty_field();
    field.gauge_winding = gauge_winding;
    let sp = profile.spline()?;
    let (lo, hi) = profile.grid.bounds;
    for j in 0..field.ny {
        for i in 0..field.nx {
            let r = (field.x(i).powi(2) + field.y(j).powi(2)).sqrt();
            let v = if r < lo || r > hi { 0.0 } else { sp.eval(r).max(0.0) };
            let p = field.idx(i, j);
            field.values[p] = Complex64::new(v, 0.0);
        }
    }
    field.normalize()?;
    Ok(field)
}

/// Lattice geometry for the vortex-lattice trial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeRule {
    /// Triangular lattice with unit cell area `pi / Omega`.
    Triangular,
    /// Square lattice with unit cell area `pi / Omega`.
    Square,
}

/// Trial state with unit-degree phase singularities on a regular lattice
/// inside the Thomas-Fermi support, amplitude `g0(r)`, and linear core
/// regularization of radius `t`.
pub fn trial_vortex_lattice(
    rp: &ReducedParams,
    cfg: &GPConfig,
    rule: LatticeRule,
    core_radius: f64,
) -> Result<ComplexField2D> {
    let big = big_omega_equiv(rp);
    if !(core_radius > 0.0) || core_radius > 0.5 * big.powf(-0.5) {
        return Err(GpError::domain(format!(
            "core radius must satisfy 0 < t << Omega^-1/2; got t = {core_radius}, Omega^-1/2 = {:.3e}",
            big.powf(-0.5)
        )));
    }
    let tf = crate::analytic::tf_profile(rp)?;
    let problem = RadialProblem::ground(*rp);
    let g0 = crate::radial::minimize_radial(&problem, &problem.default_grid()?, None)?;
    let mut field = field_from_radial(&g0, cfg, 0)?;
    let sites = lattice_sites(rule, big, tf.x_in, tf.x_out);
    if sites.is_empty() {
        return Ok(field); // no rotation to speak of: reduces to g0
    }
    for j in 0..field.ny {
        for i in 0..field.nx {
            let p = field.idx(i, j);
            if field.values[p].norm_sqr() == 0.0 {
                continue;
            }
            let x = field.x(i);
            let y = field.y(j);
            let mut phase = Complex64::new(1.0, 0.0);
            let mut dmin = f64::INFINITY;
            for &(sx, sy) in &sites {
                let dx = x - sx;
                let dy = y - sy;
                let d = (dx * dx + dy * dy).sqrt();
                dmin = dmin.min(d);
                if d > 1e-14 {
                    phase *= Complex64::new(dx / d, dy / d);
                } else {
                    phase = Complex64::new(0.0, 0.0);
                }
            }
            let xi = (dmin / core_radius).min(1.0);
            field.values[p] *= phase * xi;
        }
    }
    field.normalize()?;
    Ok(field)
}

/// Regular lattice with cell area `pi / Omega`, restricted to the TF support.
pub fn lattice_sites(rule: LatticeRule, big: f64, x_in: f64, x_out: f64) -> Vec<(f64, f64)> {
    if big <= 0.0 {
        return Vec::new();
    }
    let mut sites = Vec::new();
    match rule {
        LatticeRule::Square => {
            let l = (PI / big).sqrt();
            let kmax = (x_out / l).ceil() as i64 + 1;
            for a in -kmax..=kmax {
                for b in -kmax..=kmax {
                    let (x, y) = (a as f64 * l, b as f64 * l);
                    let r = (x * x + y * y).sqrt();
                    if r > x_in && r < x_out {
                        sites.push((x, y));
                    }
                }
            }
        }
        LatticeRule::Triangular => {
            // cell area l^2 sqrt(3)/2 = pi/Omega
            let l = (2.0 * PI / (3.0f64.sqrt() * big)).sqrt();
            let ky = l * 3.0f64.sqrt() / 2.0;
            let kmax = (x_out / l.min(ky)).ceil() as i64 + 2;
            for b in -kmax..=kmax {
                for a in -kmax..=kmax {
                    let x = a as f64 * l + if b.rem_euclid(2) == 1 { 0.5 * l } else { 0.0 };
                    let y = b as f64 * ky;
                    let r = (x * x + y * y).sqrt();
                    if r > x_in && r < x_out {
                        sites.push((x, y));
                    }
                }
            }
        }
    }
    sites
}

/// Giant-vortex trial state: matched transverse Gaussian times the phase
/// `exp(i floor(Omega) theta)`, stored in gauge representation.
pub fn trial_giant_vortex(rp: &ReducedParams, cfg: &GPConfig) -> Result<ComplexField2D> {
    if rp.frame != Frame::BigOmega {
        return Err(GpError::domain("giant-vortex trial state requires the Omega frame".to_string()));
    }
    let big = rp.speed;
    let n0 = big.floor() as i64;
    let mut field = cfg.empty_field();
    field.gauge_winding = n0;
    let g = Gaussian { alpha: alpha(rp.s, rp.gamma) };
    for j in 0..field.ny {
        for i in 0..field.nx {
            let r = (field.x(i).powi(2) + field.y(j).powi(2)).sqrt();
            // the matched lower cut sits where the Gaussian is below any
            // representable double anyway
            let v = if r >= 1.0 - rp.eps {
                big.powf(0.25) * g.eval(big.sqrt() * (1.0 - r))
            } else {
                0.0
            };
            let p = field.idx(i, j);
            field.values[p] = Complex64::new(v, 0.0);
        }
    }
    field.normalize()?;
    Ok(field)
}

/// Multiplies planted unit vortices (phase winding `sign`, linear core of
/// radius `core`) into a field at the given positions. Used to seed flows
/// with deliberate intruder vortices so that vortex-carrying basins are
/// reachable from an otherwise axisymmetric start.
pub fn plant_vortices(
    field: &mut ComplexField2D,
    sites: &[(f64, f64, i32)],
    core: f64,
) -> Result<()> {
    if !(core > 0.0) {
        return Err(GpError::domain(format!("core radius must be positive, got {core}")));
    }
    for j in 0..field.ny {
        for i in 0..field.nx {
            let p = field.idx(i, j);
            if field.values[p].norm_sqr() == 0.0 {
                continue;
            }
            let x = field.x(i);
            let y = field.y(j);
            for &(sx, sy, sign) in sites {
                let dz = Complex64::new(x - sx, y - sy);
                let d = dz.norm();
                if d < 1e-14 {
                    field.values[p] = Complex64::ZERO;
                    continue;
                }
                let ph = dz / d;
                let ph = if sign >= 0 { ph } else { ph.conj() };
                field.values[p] *= ph * (d / core).min(1.0);
            }
        }
    }
    field.normalize()?;
    Ok(())
}

/// Report of the energy-decoupling identity
/// `E_GP[psi] = E_hat[g0] + F[u]`, `u = psi / g0`.
#[derive(Debug, Clone)]
pub struct DecoupleReport {
    /// Phase-free reference energy of the embedded profile (this grid's stencils).
    pub e_hat: f64,
    /// Weighted reduced energy `F[u]`.
    pub f_u: f64,
    /// Full GP energy of `psi`.
    pub e_gp: f64,
    /// `|e_gp - e_hat - f_u|`.
    pub identity_gap: f64,
    /// Computable error budget: residual term of the embedded profile plus a
    /// two-stencil quadrature-ambiguity estimate.
    pub budget: f64,
    /// Mass of `psi` where `g0` is below the trust threshold.
    pub untrusted_mass: f64,
}

/// Splits the GP energy into the phase-free profile energy and the weighted
/// reduced energy of `u = psi / g0`. Exact when `g0` solves its discrete
/// variational equation; the report carries the measured error budget.
pub fn decouple_energy(
    psi: &ComplexField2D,
    g0: &RadialProfile,
    cfg: &GPConfig,
) -> Result<DecoupleReport> {
    cfg.validate_against(psi)?;
    let ws = Workspace::new(psi, cfg);
    let v = &psi.values;
    let n0 = psi.gauge_winding;
    let sp = g0.spline()?;
    let (glo, ghi) = g0.grid.bounds;
    let nx = ws.nx;
    let mut g = vec![0.0; v.len()];
    let mut sup_g2 = 0.0f64;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            let r = (ws.xs[i] * ws.xs[i] + ws.ys[j] * ws.ys[j]).sqrt();
            let val = if r < glo || r > ghi { 0.0 } else { sp.eval(r).max(0.0) };
            g[p] = val;
            sup_g2 = sup_g2.max(val * val);
        }
    }
    let trust_floor = 1e-10 * sup_g2;
    let mut untrusted_mass = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            if g[p] * g[p] <= trust_floor {
                untrusted_mass += ws.w * v[p].norm_sqr();
            }
        }
    }
    // E_hat[g] with the same stencils as the 2D energy (no rotation term)
    let mut kin = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            let right = if i < e { g[j * nx + i + 1] } else { 0.0 };
            kin += 0.5 * (right - g[p]) * (right - g[p]) / (ws.hx * ws.hx);
            if i == s {
                kin += 0.5 * g[p] * g[p] / (ws.hx * ws.hx);
            }
        }
    }
    for &(i, s, e) in &ws.col_runs {
        for j in s..=e {
            let p = j * nx + i;
            let up = if j < e { g[(j + 1) * nx + i] } else { 0.0 };
            kin += 0.5 * (up - g[p]) * (up - g[p]) / (ws.hy * ws.hy);
            if j == s {
                kin += 0.5 * g[p] * g[p] / (ws.hy * ws.hy);
            }
        }
    }
    let mut pot = 0.0;
    let mut p4 = 0.0;
    let mut g_mass = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            let r = (ws.xs[i] * ws.xs[i] + ws.ys[j] * ws.ys[j]).sqrt();
            let g2 = g[p] * g[p];
            pot += hat_potential(&cfg.rp, r) * g2 + ws.quartic * g2 * g2;
            p4 += g2 * g2;
            g_mass += g2;
        }
    }
    let e_hat = ws.w * (kin + pot);
    let mu_hat = e_hat + ws.quartic * ws.w * p4;
    let g_mass = ws.w * g_mass;

    // F[u] with u = chi/g on the trusted region
    let mut u = vec![Complex64::new(0.0, 0.0); v.len()];
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            if g[p] * g[p] > trust_floor {
                u[p] = v[p] / g[p];
            }
        }
    }
    let mut fkin = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            if g[p] * g[p] <= trust_floor {
                continue;
            }
            if i < e && g[j * nx + i + 1] * g[j * nx + i + 1] > trust_floor {
                let q = j * nx + i + 1;
                let m2 = 0.5 * (g[p] * g[p] + g[q] * g[q]);
                fkin += 0.5 * m2 * (u[q] - u[p]).norm_sqr() / (ws.hx * ws.hx);
            }
            if j + 1 < ws.ny && ws.active[(j + 1) * nx + i] {
                let q = (j + 1) * nx + i;
                if g[q] * g[q] > trust_floor {
                    let m2 = 0.5 * (g[p] * g[p] + g[q] * g[q]);
                    fkin += 0.5 * m2 * (u[q] - u[p]).norm_sqr() / (ws.hy * ws.hy);
                }
            }
        }
    }
    let mut mbuf = vec![Complex64::new(0.0, 0.0); v.len()];
    ws.apply_m(&u, &mut mbuf);
    let mut frest = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            let g2 = g[p] * g[p];
            if g2 <= trust_floor {
                continue;
            }
            let uu = u[p].norm_sqr();
            let r = (ws.xs[i] * ws.xs[i] + ws.ys[j] * ws.ys[j]).sqrt();
            let b = cfg.rp.speed * r - n0 as f64 / r.max(1e-300);
            frest += g2 * 0.5 * b * b * uu;
            frest -= g2 * ws.phi[p] * (u[p].conj() * mbuf[p]).im;
            let dev = 1.0 - uu;
            frest += ws.quartic * g2 * g2 * dev * dev;
        }
    }
    let f_u = ws.w * (fkin + frest);

    let e_gp = ws.energy(v);
    let identity_gap = (e_gp - e_hat - f_u).abs();

    // budget: <|u|^2 g, |R(g)|> with R the discrete phase-free equation
    // residual of the embedded profile, plus the two-stencil quadrature
    // ambiguity measured on psi itself.
    let mut residual_term = 0.0;
    {
        let gc: Vec<Complex64> = g.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut ws_hat = Workspace::new(psi, cfg);
        for &(j, s, e) in &ws.row_runs {
            for i in s..=e {
                let p = j * nx + i;
                let r = (ws.xs[i] * ws.xs[i] + ws.ys[j] * ws.ys[j]).sqrt();
                ws_hat.potential[p] = hat_potential(&cfg.rp, r);
                ws_hat.phi[p] = 0.0;
            }
        }
        let mut hb = vec![Complex64::new(0.0, 0.0); v.len()];
        let mut sc = vec![Complex64::new(0.0, 0.0); v.len()];
        ws_hat.apply_h(&gc, &mut hb, &mut sc);
        let mu_eff = mu_hat / g_mass.max(1e-300);
        for &(j, s, e) in &ws.row_runs {
            for i in s..=e {
                let p = j * nx + i;
                if g[p] * g[p] <= trust_floor {
                    continue;
                }
                let r_res = (hb[p].re - mu_eff * g[p]).abs();
                residual_term += ws.w * u[p].norm_sqr() * g[p] * r_res;
            }
        }
    }
    let quad_term = (energy_covariant(psi, cfg)? - e_gp).abs();
    let budget = residual_term + 2.0 * quad_term + 1e3 * untrusted_mass * mu_hat.abs();
    Ok(DecoupleReport { e_hat, f_u, e_gp, identity_gap, budget, untrusted_mass })
}

/// Weighted reduced energies of `u = chi / g` on the annulus:
/// `E[u] = int g^2 { |grad u|^2/2 - B.(iu, grad u) + eps^-2 g^2 (1-|u|^2)^2 }`
/// and its positive part `F[u]` (momentum term dropped).
#[derive(Debug, Clone, Copy)]
pub struct ReducedEnergies {
    pub e_reduced: f64,
    pub f_reduced: f64,
}

/// Evaluates the reduced annulus energies; the field is expected in the
/// giant-vortex gauge so that `u` is resolved on the grid.
pub fn reduced_energy(
    psi: &ComplexField2D,
    g: &RadialProfile,
    cfg: &GPConfig,
    eta: f64,
) -> Result<ReducedEnergies> {
    let ws = Workspace::new(psi, cfg);
    let sp = g.spline()?;
    let nx = ws.nx;
    let half = cfg.rp.eps * cfg.rp.eps * eta;
    let n0 = psi.gauge_winding;
    let sup2 = g.sup() * g.sup();
    let floor = 1e-10 * sup2;
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![zero; psi.values.len()];
    let mut gg = vec![0.0; psi.values.len()];
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            let r = (ws.xs[i] * ws.xs[i] + ws.ys[j] * ws.ys[j]).sqrt();
            if (r - 1.0).abs() > half {
                continue;
            }
            let gv = sp.eval(r).max(0.0);
            if gv * gv > floor {
                gg[p] = gv;
                u[p] = psi.values[p] / gv;
            }
        }
    }
    let mut kin = 0.0;
    let mut mom = 0.0;
    let mut quart = 0.0;
    for &(j, s, e) in &ws.row_runs {
        for i in s..=e {
            let p = j * nx + i;
            if gg[p] == 0.0 {
                continue;
            }
            let g2 = gg[p] * gg[p];
            let up = u[p];
            // one-sided fallback where a neighbor leaves the trusted annulus
            let pick = |q: Complex64| if q == zero { up } else { q };
            let east = pick(ws.at(&u, i as isize + 1, j as isize));
            let west = pick(ws.at(&u, i as isize - 1, j as isize));
            let north = pick(ws.at(&u, i as isize, j as isize + 1));
            let south = pick(ws.at(&u, i as isize, j as isize - 1));
            let gx = (east - west) / (2.0 * ws.hx);
            let gy = (north - south) / (2.0 * ws.hy);
            kin += 0.5 * g2 * (gx.norm_sqr() + gy.norm_sqr());
            let x = ws.xs[i];
            let y = ws.ys[j];
            let r = (x * x + y * y).sqrt().max(1e-12);
            let b = cfg.rp.speed * r - n0 as f64 / r;
            let jx = (up.conj() * gx).im;
            let jy = (up.conj() * gy).im;
            mom += g2 * b * (-y / r * jx + x / r * jy);
            let dev = 1.0 - up.norm_sqr();
            quart += ws.quartic * g2 * g2 * dev * dev;
        }
    }
    Ok(ReducedEnergies { e_reduced: ws.w * (kin - mom + quart), f_reduced: ws.w * (kin + quart) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ReducedParams;
    use crate::radial::minimize_radial;

    fn small_cfg(rp: ReducedParams) -> GPConfig {
        let mut cfg = GPConfig::default_for(&rp).unwrap();
        cfg.truncation_radius = cfg.truncation_radius.min(1.8);
        cfg
    }

    #[test]
    fn energy_is_invariant_under_constant_phase() {
        let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 2.0).unwrap();
        let cfg = small_cfg(rp);
        let problem = RadialProblem::ground(rp);
        let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let mut f = field_from_radial(&g0, &cfg, 0).unwrap();
        let e1 = energy(&f, &cfg).unwrap();
        let rot = Complex64::from_polar(1.0, 0.8342);
        f.values.iter_mut().for_each(|v| *v *= rot);
        let e2 = energy(&f, &cfg).unwrap();
        assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1.0));
    }

    #[test]
    fn energy_rejects_unnormalized_fields() {
        let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 0.0).unwrap();
        let cfg = small_cfg(rp);
        let mut f = cfg.empty_field();
        let n = f.values.len();
        f.values[n / 2] = Complex64::new(7.0, 0.0);
        assert!(matches!(energy(&f, &cfg), Err(GpError::Domain(_))));
    }

    #[test]
    fn expanded_and_covariant_energies_agree() {
        let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 3.0).unwrap();
        let cfg = small_cfg(rp);
        let problem = RadialProblem::ground(rp);
        let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        // off-center vortex with an amplitude-regularized core gives a
        // nontrivial but resolved current
        let mut f = field_from_radial(&g0, &cfg, 0).unwrap();
        for j in 0..f.ny {
            for i in 0..f.nx {
                let (x, y) = (f.x(i), f.y(j));
                let dz = Complex64::new(x - 0.31, y + 0.12);
                let d = dz.norm();
                let core = (d / 0.15).min(1.0);
                let ph = if d > 1e-12 { dz / d * core } else { Complex64::ZERO };
                let p = f.idx(i, j);
                f.values[p] *= ph;
            }
        }
        f.normalize().unwrap();
        let e_exp = energy(&f, &cfg).unwrap();
        let e_cov = energy_covariant(&f, &cfg).unwrap();
        // both forms carry O(h^2) discretization error with different
        // constants near the core; the check guards the gauge structure
        assert!(
            (e_exp - e_cov).abs() < 2e-2 * e_exp.abs(),
            "expanded {e_exp} vs covariant {e_cov}"
        );
    }

    #[test]
    fn minimizer_without_rotation_matches_radial_solver() {
        let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 0.0).unwrap();
        let mut cfg = small_cfg(rp);
        cfg.tol_residual = 2e-6;
        let problem = RadialProblem::ground(rp);
        let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let seed = field_from_radial(&g0, &cfg, 0).unwrap();
        let out = minimize(&seed, &cfg).unwrap();
        assert!(
            (out.energy - g0.energy).abs() < 1e-3 * g0.energy.abs(),
            "2D energy {} vs radial {}",
            out.energy,
            g0.energy
        );
        // chemical potential identity mu = E + eps^-2 ||psi||_4^4
        let w = out.psi.hx() * out.psi.hy();
        let p4: f64 = out.psi.values.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() * w;
        let mu_identity = out.energy + p4 / (rp.eps * rp.eps);
        assert!(
            (out.mu - mu_identity).abs() <= 1e-8 * out.mu.abs(),
            "mu {} vs identity {}",
            out.mu,
            mu_identity
        );
        // minimizer is real up to a global phase
        let vmax = out
            .psi
            .values
            .iter()
            .cloned()
            .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap())
            .unwrap();
        let phase = vmax / vmax.norm();
        let max_im = out.psi.values.iter().map(|v| (v / phase).im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-6 * vmax.norm(), "imaginary remnant {max_im}");
        // density decays monotonically beyond the TF edge along the x axis
        let tf = crate::analytic::tf_profile(&rp).unwrap();
        let j0 = out.psi.ny / 2;
        let mut prev = f64::INFINITY;
        for i in out.psi.nx / 2..out.psi.nx {
            let x = out.psi.x(i);
            if x < tf.x_out + 2.0 * out.psi.hx() {
                continue;
            }
            let d = out.psi.density(i, j0);
            assert!(d <= prev * (1.0 + 1e-9) || d < 1e-28, "tail not monotone at x={x}");
            prev = d;
        }
    }

    #[test]
    fn trial_giant_vortex_is_normalized_and_peaks_at_one() {
        let rp = ReducedParams::from_omega0(0.25, 4.0, 1.0, 4.0).unwrap();
        let mut cfg = GPConfig::default_for(&rp).unwrap();
        cfg.truncation_radius = 1.3;
        cfg.annulus = (0.5, 1.25);
        let f = trial_giant_vortex(&rp, &cfg).unwrap();
        assert_eq!(f.gauge_winding, rp.speed.floor() as i64);
        assert!((f.norm_sq() - 1.0).abs() < 1e-10);
        let mut best = (0.0, 0.0);
        for j in 0..f.ny {
            for i in 0..f.nx {
                let d = f.density(i, j);
                if d > best.0 {
                    let r = (f.x(i).powi(2) + f.y(j).powi(2)).sqrt();
                    best = (d, r);
                }
            }
        }
        assert!((best.1 - 1.0).abs() < 3.0 * rp.speed.powf(-0.5), "peak at r = {}", best.1);
    }

    #[test]
    fn trial_lattice_requires_small_cores() {
        let rp = ReducedParams::big_omega_frame(0.15, 4.0, 1.0, 20.0).unwrap();
        let cfg = small_cfg(rp);
        assert!(trial_vortex_lattice(&rp, &cfg, LatticeRule::Triangular, 10.0).is_err());
    }

    #[test]
    fn trial_lattice_sites_carry_unit_windings() {
        let rp = ReducedParams::big_omega_frame(0.15, 4.0, 1.0, 20.0).unwrap();
        let cfg = small_cfg(rp);
        let tf = crate::analytic::tf_profile(&rp).unwrap();
        let t = 0.3 * rp.speed.powf(-0.5);
        let f = trial_vortex_lattice(&rp, &cfg, LatticeRule::Triangular, t).unwrap();
        let sites = lattice_sites(LatticeRule::Triangular, rp.speed, tf.x_in, tf.x_out);
        assert!(!sites.is_empty());
        let zeros = crate::vortex::find_vortex_cells(&f, None);
        // every planted site is matched by a detected winding-one cell nearby
        let mut matched = 0;
        for &(sx, sy) in &sites {
            if zeros
                .iter()
                .any(|z| (z.x - sx).hypot(z.y - sy) < 2.0 * f.hx() && z.winding == 1)
            {
                matched += 1;
            }
        }
        assert!(
            matched * 10 >= sites.len() * 9,
            "only {matched} of {} lattice sites detected",
            sites.len()
        );
        // total winding equals the site count
        let total: i32 = zeros.iter().map(|z| z.winding).sum();
        assert_eq!(total as usize, sites.len());
    }

    #[test]
    fn trial_lattice_energy_respects_log_budget() {
        // E[trial] - E_tf <= (1 + slack) Omega |log(t^2 Omega)| / 2 + C Omega
        // at t = eps^(2/3) Omega^(-1/3); slack = 1 and C = 8 were fitted once
        // and must hold across parameter points.
        for (eps, big) in [(0.08f64, 37.5f64), (0.1, 25.0)] {
            let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, big).unwrap();
            let cfg = GPConfig::default_for(&rp).unwrap();
            let t = eps.powf(2.0 / 3.0) * big.powf(-1.0 / 3.0);
            let f = trial_vortex_lattice(&rp, &cfg, LatticeRule::Triangular, t).unwrap();
            let e = energy(&f, &cfg).unwrap();
            let etf = crate::analytic::tf_energy(&crate::analytic::tf_profile(&rp).unwrap());
            let bound = etf + (1.0 + 1.0) * 0.5 * big * (t * t * big).ln().abs() + 8.0 * big;
            assert!(e <= bound, "trial energy {e} above budget {bound} at eps={eps}");
        }
    }

    #[test]
    fn minimizer_sup_density_bounded_by_chemical_potential() {
        // sup |psi|^2 <= eps^2 mu / 2 for converged states
        let rp = ReducedParams::from_omega0(0.25, 4.0, 1.0, 0.5).unwrap();
        let mut cfg = GPConfig::default_for(&rp).unwrap();
        cfg.annulus = (0.55, 1.4);
        cfg.truncation_radius = 1.45;
        cfg.tol_residual = 1e-3;
        let seed = trial_giant_vortex(&rp, &cfg).unwrap();
        let out = minimize(&seed, &cfg).unwrap();
        assert!(
            out.psi.sup_density() <= 0.5 * rp.eps * rp.eps * out.mu * (1.0 + 1e-6),
            "sup density {} above eps^2 mu / 2 = {}",
            out.psi.sup_density(),
            0.5 * rp.eps * rp.eps * out.mu
        );
    }

    #[test]
    fn reduced_annulus_energy_vanishes_for_pure_giant_vortex() {
        let rp = ReducedParams::from_omega0(0.25, 4.0, 1.0, 1.0).unwrap();
        let mut cfg = GPConfig::default_for(&rp).unwrap();
        cfg.annulus = (0.55, 1.45);
        cfg.truncation_radius = 1.5;
        cfg.tol_residual = 5e-4;
        let problem = crate::radial::RadialProblem::giant_vortex_annulus(rp).unwrap();
        let g = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let eta = crate::radial::default_eta(rp.eps);
        // u = 1 exactly: psi = g e^{i floor(Omega) theta}
        let f = field_from_radial(&g, &cfg, rp.speed.floor() as i64).unwrap();
        let red = reduced_energy(&f, &g, &cfg, eta).unwrap();
        // the normalization of the embedded field differs from |u| = 1 only
        // through discretization; both energies must be tiny on the scale
        // of the full energy ~ alpha Omega / 2
        let scale = 0.5 * alpha(rp.s, rp.gamma) * rp.speed;
        assert!(red.f_reduced.abs() < 2e-2 * scale, "F_red = {}", red.f_reduced);
        assert!(red.e_reduced.abs() < 2e-2 * scale, "E_red = {}", red.e_reduced);
        // converged 2D state: |E_red| + F_red <= C Omega0^2 eta^3 with C = 1
        let out = minimize(&f, &cfg).unwrap();
        let red = reduced_energy(&out.psi, &g, &cfg, eta).unwrap();
        let omega0 = rp.omega0().unwrap();
        let budget = omega0 * omega0 * eta.powi(3);
        assert!(
            red.e_reduced.abs() + red.f_reduced <= budget,
            "|E_red| + F_red = {} above {budget}",
            red.e_reduced.abs() + red.f_reduced
        );
    }

    #[test]
    fn decoupling_identity_on_g0_itself() {
        // u = 1: F[u] ~ 0 and the identity is near-exact.
        let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 0.0).unwrap();
        let cfg = small_cfg(rp);
        let problem = RadialProblem::ground(rp);
        let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let f = field_from_radial(&g0, &cfg, 0).unwrap();
        let rep = decouple_energy(&f, &g0, &cfg).unwrap();
        assert!(rep.f_u.abs() <= 1e-6 * rep.e_gp.abs().max(1.0), "F[1] = {} not ~ 0", rep.f_u);
        assert!(rep.identity_gap <= 1e-6 * rep.e_gp.abs() + rep.budget);
    }

    #[test]
    fn decoupling_identity_with_central_vortex_phase() {
        // u = e^{i theta} over a hole-regime profile (g0 ~ 0 at the origin, so
        // the angular kinetic integral is core-safe): F[u] equals the explicit
        // one-vortex quadrature int g0^2 [ (1/r - Omega r)^2 / 2 ].
        let eps = 0.1;
        let big = 2.0 * crate::analytic::big_omega_c(eps, 4.0, 1.0);
        let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, big).unwrap();
        let mut cfg = small_cfg(rp);
        cfg.truncation_radius = 1.8;
        let problem = RadialProblem::ground(rp);
        let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let mut f = field_from_radial(&g0, &cfg, 0).unwrap();
        for j in 0..f.ny {
            for i in 0..f.nx {
                let (x, y) = (f.x(i), f.y(j));
                let r = (x * x + y * y).sqrt();
                let p = f.idx(i, j);
                if r > 1e-12 {
                    f.values[p] *= Complex64::new(x / r, y / r);
                } else {
                    f.values[p] = Complex64::ZERO;
                }
            }
        }
        f.normalize().unwrap();
        let rep = decouple_energy(&f, &g0, &cfg).unwrap();
        assert!(rep.f_u > 0.0);
        let oracle: f64 = {
            let sp = g0.spline().unwrap();
            crate::numerics::integrate(
                &|r: f64| {
                    let g = sp.eval(r).max(0.0);
                    let b = 1.0 / r - rp.speed * r;
                    2.0 * PI * r * g * g * 0.5 * b * b
                },
                0.05,
                g0.grid.bounds.1,
                1e-9,
            )
        };
        assert!(
            (rep.f_u - oracle).abs() < 0.02 * oracle,
            "F[e^it] = {} vs oracle {}",
            rep.f_u,
            oracle
        );
        assert!(rep.identity_gap <= 1e-6 * rep.e_gp.abs() + rep.budget);
    }
}
