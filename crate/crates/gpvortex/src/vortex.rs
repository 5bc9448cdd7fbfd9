//! Phase-singularity analysis of 2D fields: plaquette windings, circle
//! degrees, vorticity statistics over regions, hole detection, and the
//! parameter-dependent bulk regions the statements are formulated on.
//!
//! All phase arithmetic acts on the stored (gauge-factored) values. A gauge
//! winding `n0` contributes zero winding to any plaquette not enclosing the
//! origin and exactly `n0` to any circle around the origin, so plaquette
//! windings are used as-is and circle degrees add `n0` analytically.

use crate::analytic::{alpha, TFProfile};
use crate::error::{GpError, Result};
use crate::gp2d::ComplexField2D;
use crate::params::{Frame, ReducedParams};
use crate::radial::default_eta;
use serde::Serialize;
use std::f64::consts::PI;

/// Outcome of a plaquette-winding evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winding {
    /// All four corner amplitudes are nonzero; the winding is this integer.
    Integer(i32),
    /// Some corner amplitude is (numerically) zero; merged by the caller.
    Indeterminate,
}

fn wrap(d: f64) -> f64 {
    // wraps to (-pi, pi]
    let mut d = d % (2.0 * PI);
    if d <= -PI {
        d += 2.0 * PI;
    } else if d > PI {
        d -= 2.0 * PI;
    }
    d
}

/// Winding of the stored phase around the plaquette with lower-left corner
/// `(i, j)`: the sum of corner-to-corner wrapped phase differences over 2 pi.
///
/// `amp_floor` is the squared-amplitude threshold below which a corner counts
/// as a zero (making the winding indeterminate).
pub fn plaquette_winding(psi: &ComplexField2D, i: usize, j: usize, amp_floor: f64) -> Winding {
    let corners = [
        psi.values[psi.idx(i, j)],
        psi.values[psi.idx(i + 1, j)],
        psi.values[psi.idx(i + 1, j + 1)],
        psi.values[psi.idx(i, j + 1)],
    ];
    if corners.iter().any(|c| c.norm_sqr() <= amp_floor) {
        return Winding::Indeterminate;
    }
    let mut total = 0.0;
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        total += wrap(b.arg() - a.arg());
    }
    let w = total / (2.0 * PI);
    Winding::Integer(w.round() as i32)
}

/// A detected zero with its winding; positions are plaquette centers (or the
/// centroid of a merged cluster).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VortexZero {
    pub x: f64,
    pub y: f64,
    pub winding: i32,
}

/// Locates vortex cells: plaquettes with nonzero winding whose minimum corner
/// density is below half the local envelope (when an envelope is supplied).
/// Clusters of indeterminate plaquettes are merged and measured by a loop
/// around the cluster; clusters touching the grid edge are dropped.
pub fn find_vortex_cells(
    psi: &ComplexField2D,
    envelope: Option<&dyn Fn(f64) -> f64>,
) -> Vec<VortexZero> {
    let nx = psi.nx;
    let ny = psi.ny;
    let sup = psi.sup_density();
    let floor = 1e-12 * sup;
    let mut zeros = Vec::new();
    let mut indeterminate = vec![false; (nx - 1) * (ny - 1)];
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            match plaquette_winding(psi, i, j, floor) {
                Winding::Integer(w) if w != 0 => {
                    let cx = 0.5 * (psi.x(i) + psi.x(i + 1));
                    let cy = 0.5 * (psi.y(j) + psi.y(j + 1));
                    let keep = match envelope {
                        Some(env) => {
                            let r = (cx * cx + cy * cy).sqrt();
                            let min_d = [
                                psi.density(i, j),
                                psi.density(i + 1, j),
                                psi.density(i, j + 1),
                                psi.density(i + 1, j + 1),
                            ]
                            .into_iter()
                            .fold(f64::INFINITY, f64::min);
                            min_d < 0.5 * env(r)
                        }
                        None => true,
                    };
                    if keep {
                        zeros.push(VortexZero { x: cx, y: cy, winding: w });
                    }
                }
                Winding::Indeterminate => indeterminate[j * (nx - 1) + i] = true,
                _ => {}
            }
        }
    }
    // merge indeterminate clusters and measure the loop around each
    let mut seen = vec![false; (nx - 1) * (ny - 1)];
    for j0 in 0..ny - 1 {
        for i0 in 0..nx - 1 {
            let c0 = j0 * (nx - 1) + i0;
            if !indeterminate[c0] || seen[c0] {
                continue;
            }
            // flood fill
            let mut stack = vec![(i0, j0)];
            let mut cluster = Vec::new();
            seen[c0] = true;
            while let Some((i, j)) = stack.pop() {
                cluster.push((i, j));
                let neighbors = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for (a, b) in neighbors {
                    if a < nx - 1 && b < ny - 1 {
                        let c = b * (nx - 1) + a;
                        if indeterminate[c] && !seen[c] {
                            seen[c] = true;
                            stack.push((a, b));
                        }
                    }
                }
            }
            // expand the bounding box until its boundary avoids zeros
            let (mut ilo, mut ihi) = (usize::MAX, 0usize);
            let (mut jlo, mut jhi) = (usize::MAX, 0usize);
            for &(i, j) in &cluster {
                ilo = ilo.min(i);
                ihi = ihi.max(i + 1);
                jlo = jlo.min(j);
                jhi = jhi.max(j + 1);
            }
            let mut ok = false;
            for _ in 0..8 {
                if ilo == 0 || jlo == 0 || ihi >= nx - 1 || jhi >= ny - 1 {
                    break;
                }
                let clean = boundary_nodes(ilo, ihi, jlo, jhi)
                    .into_iter()
                    .all(|(i, j)| psi.density(i, j) > floor);
                if clean {
                    ok = true;
                    break;
                }
                ilo -= 1;
                jlo -= 1;
                ihi += 1;
                jhi += 1;
            }
            if !ok {
                continue; // cluster reaches the boundary; cannot be measured
            }
            let mut total = 0.0;
            let path = boundary_nodes(ilo, ihi, jlo, jhi);
            for k in 0..path.len() {
                let (i1, j1) = path[k];
                let (i2, j2) = path[(k + 1) % path.len()];
                let a = psi.values[psi.idx(i1, j1)];
                let b = psi.values[psi.idx(i2, j2)];
                total += wrap(b.arg() - a.arg());
            }
            let w = (total / (2.0 * PI)).round() as i32;
            if w != 0 {
                let cx = 0.5 * (psi.x(ilo) + psi.x(ihi));
                let cy = 0.5 * (psi.y(jlo) + psi.y(jhi));
                zeros.push(VortexZero { x: cx, y: cy, winding: w });
            }
        }
    }
    zeros
}

/// Counterclockwise node path around the rectangle `[ilo, ihi] x [jlo, jhi]`.
fn boundary_nodes(ilo: usize, ihi: usize, jlo: usize, jhi: usize) -> Vec<(usize, usize)> {
    let mut path = Vec::new();
    for i in ilo..ihi {
        path.push((i, jlo));
    }
    for j in jlo..jhi {
        path.push((ihi, j));
    }
    for i in (ilo + 1..=ihi).rev() {
        path.push((i, jhi));
    }
    for j in (jlo + 1..=jhi).rev() {
        path.push((ilo, j));
    }
    path
}

/// Accumulated phase degree along the circle of radius `r` (gauge winding
/// added analytically). Fails if the interpolated amplitude drops below
/// `1e-6 sqrt(sup density)` anywhere on the contour.
pub fn degree_on_circle(psi: &ComplexField2D, r: f64) -> Result<i64> {
    let samples = (8 * psi.nx).max(512);
    let floor = 1e-12 * psi.sup_density();
    let mut total = 0.0;
    let mut prev = psi.interp(r, 0.0);
    if prev.norm_sqr() <= floor {
        return Err(GpError::DegreeUndefined { radius: r, amplitude: prev.norm() });
    }
    for k in 1..=samples {
        let th = 2.0 * PI * k as f64 / samples as f64;
        let v = psi.interp(r * th.cos(), r * th.sin());
        if v.norm_sqr() <= floor {
            return Err(GpError::DegreeUndefined { radius: r, amplitude: v.norm() });
        }
        total += wrap(v.arg() - prev.arg());
        prev = v;
    }
    let stored = (total / (2.0 * PI)).round() as i64;
    Ok(stored + psi.gauge_winding)
}

/// Annular sector `x_lo <= r <= x_hi`, `theta0 <= theta < theta1`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AnnularSector {
    pub x_lo: f64,
    pub x_hi: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl AnnularSector {
    pub fn full(x_lo: f64, x_hi: f64) -> Self {
        AnnularSector { x_lo, x_hi, theta0: 0.0, theta1: 2.0 * PI }
    }

    /// Exact area from the annulus-sector formula.
    pub fn area(&self) -> f64 {
        0.5 * (self.theta1 - self.theta0) * (self.x_hi * self.x_hi - self.x_lo * self.x_lo)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let r = (x * x + y * y).sqrt();
        if r < self.x_lo || r > self.x_hi {
            return false;
        }
        let mut th = y.atan2(x);
        if th < 0.0 {
            th += 2.0 * PI;
        }
        let (mut a, mut b) = (self.theta0, self.theta1);
        // normalize the sector to [0, 2 pi)
        a = a.rem_euclid(2.0 * PI);
        b = b.rem_euclid(2.0 * PI);
        if (self.theta1 - self.theta0) >= 2.0 * PI {
            return true;
        }
        if a <= b {
            th >= a && th < b
        } else {
            th >= a || th < b
        }
    }
}

/// Result of a vorticity-uniformity measurement over a region.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UniformityResult {
    /// `nu(S) / (Omega |S|)`.
    pub ratio: f64,
    /// `nu(S) = 2 pi sum of windings` inside the region.
    pub nu: f64,
    pub area: f64,
    /// Set when the region is too small for the uniformity statement
    /// (`|S| <= Omega^{-1} log(eps^4 Omega)^2`).
    pub too_small: bool,
}

/// Vorticity ratio `nu(S) / (Omega |S|)` with `nu` summed over the detected
/// zeros falling in the sector.
pub fn uniformity_ratio(
    zeros: &[VortexZero],
    sector: &AnnularSector,
    rp: &ReducedParams,
) -> UniformityResult {
    let big = match rp.frame {
        Frame::BigOmega => rp.speed,
        Frame::Omega => rp.to_big_omega().speed,
    };
    let nu: f64 = zeros
        .iter()
        .filter(|z| sector.contains(z.x, z.y))
        .map(|z| 2.0 * PI * z.winding as f64)
        .sum();
    let area = sector.area();
    let threshold = big.recip() * (rp.eps.powi(4) * big).ln().abs().powi(2);
    UniformityResult { ratio: nu / (big * area), nu, area, too_small: area <= threshold }
}

/// Largest radius below which the density stays under
/// `threshold * sup density`; 0 if the density at the center already exceeds it.
pub fn detect_hole(psi: &ComplexField2D, threshold: f64) -> f64 {
    let sup = psi.sup_density();
    if sup <= 0.0 {
        return 0.0;
    }
    let cut = threshold * sup;
    let h = psi.hx().min(psi.hy());
    let rmax = psi.bounds[1].min(psi.bounds[3]);
    let nbins = (rmax / h).ceil() as usize;
    let mut bin_max = vec![0.0f64; nbins + 1];
    for j in 0..psi.ny {
        for i in 0..psi.nx {
            let r = (psi.x(i).powi(2) + psi.y(j).powi(2)).sqrt();
            if r >= rmax {
                continue;
            }
            let b = (r / h) as usize;
            let d = psi.density(i, j);
            if d > bin_max[b] {
                bin_max[b] = d;
            }
        }
    }
    let mut hole = 0.0;
    for (b, &m) in bin_max.iter().enumerate() {
        if m > cut {
            break;
        }
        hole = (b + 1) as f64 * h;
    }
    hole
}

/// Named bulk regions of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    /// TF support shrunk by `beta (eps Omega)^{-2/3}` on each side.
    RBulk,
    /// Gaussian-regime annulus `|1 - x| <= c sqrt(|log eps|) Omega^{-1/2}`.
    ABulk,
    /// Annulus `|1 - x| <= eps^2 eta`, `eta = |log eps|^{3/2}`.
    AEps,
    /// TF support shrunk by `(eps Omega)^{-2/3} / |log(eps^4 Omega)|`.
    AOmega,
}

/// A concrete annulus with the parameters used to build it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BulkRegion {
    pub kind: RegionKind,
    pub x_lo: f64,
    pub x_hi: f64,
    /// Shrink parameter `beta` (RBulk) or `1/|log(eps^4 Om)|` (AOmega); 0 otherwise.
    pub beta: f64,
    /// Width constant `c` (ABulk only; must stay below `sqrt(2/alpha)`).
    pub c: f64,
}

impl BulkRegion {
    pub fn sector(&self) -> AnnularSector {
        AnnularSector::full(self.x_lo, self.x_hi)
    }
}

/// Builds one of the named regions. `tf` is required for the TF-support-based
/// kinds; `ABulk` requires the giant-vortex regime (`Omega0` of order one).
pub fn build_region(
    kind: RegionKind,
    rp: &ReducedParams,
    tf: Option<&TFProfile>,
) -> Result<BulkRegion> {
    let big = match rp.frame {
        Frame::BigOmega => rp.speed,
        Frame::Omega => rp.to_big_omega().speed,
    };
    match kind {
        RegionKind::AEps => {
            let half = rp.eps * rp.eps * default_eta(rp.eps);
            Ok(BulkRegion { kind, x_lo: 1.0 - half, x_hi: 1.0 + half, beta: 0.0, c: 0.0 })
        }
        RegionKind::ABulk => {
            let omega0 = big * rp.eps.powi(4);
            if omega0 < 0.25 {
                return Err(GpError::domain(format!(
                    "A_bulk is a giant-vortex-regime region; Omega0 = {omega0:.3e} is too small"
                )));
            }
            let a = alpha(rp.s, rp.gamma);
            let c = 0.8 * (2.0 / a).sqrt();
            let half = c * rp.eps.ln().abs().sqrt() * big.powf(-0.5);
            Ok(BulkRegion { kind, x_lo: 1.0 - half, x_hi: 1.0 + half, beta: 0.0, c })
        }
        RegionKind::RBulk | RegionKind::AOmega => {
            let tf = tf.ok_or_else(|| {
                GpError::domain("this region requires the TF profile".to_string())
            })?;
            let l = (rp.eps.powi(4) * big).ln().abs();
            let beta = 1.0 / l;
            let shrink = beta * (rp.eps * big).powf(-2.0 / 3.0);
            let x_lo = if tf.x_in > 0.0 { tf.x_in + shrink } else { 0.0 };
            let x_hi = tf.x_out - shrink;
            if x_hi <= x_lo {
                return Err(GpError::domain(format!(
                    "region degenerate: [{x_lo}, {x_hi}] at eps={}, Omega={big}",
                    rp.eps
                )));
            }
            Ok(BulkRegion { kind, x_lo, x_hi, beta, c: 0.0 })
        }
    }
}

/// Pointwise vorticity density of `u`: `mu_v = -2 Im(d_x u (d_y u)*)`,
/// together with `|grad u|^2`, sampled with central differences.
/// The bound `|mu_v| <= |grad u|^2` holds pointwise.
pub fn vorticity_and_gradient(u: &[num_complex::Complex64], nx: usize, ny: usize, hx: f64, hy: f64) -> (Vec<f64>, Vec<f64>) {
    let mut muv = vec![0.0; nx * ny];
    let mut grad = vec![0.0; nx * ny];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let p = j * nx + i;
            let dx = (u[p + 1] - u[p - 1]) / (2.0 * hx);
            let dy = (u[p + nx] - u[p - nx]) / (2.0 * hy);
            muv[p] = -2.0 * (dx * dy.conj()).im;
            grad[p] = dx.norm_sqr() + dy.norm_sqr();
        }
    }
    (muv, grad)
}

/// Full singularity report for a field.
#[derive(Debug, Clone, Serialize)]
pub struct VortexReport {
    pub zeros: Vec<VortexZero>,
    /// `2 pi sum d_i` over all detected zeros.
    pub nu_total: f64,
    /// Evaluated `nu(S)` for each requested named region.
    pub regions: Vec<RegionNu>,
    /// Requested circle degrees.
    pub degrees: Vec<CircleDegree>,
    pub hole_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionNu {
    pub kind: RegionKind,
    pub x_lo: f64,
    pub x_hi: f64,
    pub nu: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CircleDegree {
    pub radius: f64,
    pub degree: Option<i64>,
}

/// Convenience analysis bundling zeros, region vorticity, circle degrees and
/// hole detection.
pub fn analyze(
    psi: &ComplexField2D,
    envelope: Option<&dyn Fn(f64) -> f64>,
    regions: &[BulkRegion],
    circle_radii: &[f64],
    hole_threshold: f64,
) -> VortexReport {
    let zeros = find_vortex_cells(psi, envelope);
    let nu_total = 2.0 * PI * zeros.iter().map(|z| z.winding as f64).sum::<f64>();
    let regions = regions
        .iter()
        .map(|reg| {
            let sector = reg.sector();
            let inside: Vec<&VortexZero> =
                zeros.iter().filter(|z| sector.contains(z.x, z.y)).collect();
            RegionNu {
                kind: reg.kind,
                x_lo: reg.x_lo,
                x_hi: reg.x_hi,
                nu: 2.0 * PI * inside.iter().map(|z| z.winding as f64).sum::<f64>(),
                count: inside.len(),
            }
        })
        .collect();
    let degrees = circle_radii
        .iter()
        .map(|&r| CircleDegree { radius: r, degree: degree_on_circle(psi, r).ok() })
        .collect();
    let hole_radius = detect_hole(psi, hole_threshold);
    VortexReport { zeros, nu_total, regions, degrees, hole_radius }
}

/// Default relative hole threshold standing in for the unquantifiable
/// "smaller than any power" statement.
pub const HOLE_THRESHOLD: f64 = 1e-8;
