//! Closed-form Thomas-Fermi theory, effective potentials, critical speeds and
//! the Gaussian reference profile. Everything here has an explicit formula or
//! reduces to a 1D root find, which makes this module the oracle layer the
//! iterative solvers are checked against.

use crate::error::{ensure_positive, GpError, Result};
use crate::numerics::{bisect, integrate};
use crate::params::{Frame, ReducedParams};
use serde::Serialize;
use std::f64::consts::PI;

/// Effective trap profile `W(x) = (x^s - 1)/s - (x^2 - 1)/2`.
///
/// Nonnegative with its minimum `W(1) = 0`; independent of `gamma`.
pub fn eval_w(x: f64, s: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(GpError::domain(format!("W is defined for x >= 0, got {x}")));
    }
    Ok((x.powf(s) - 1.0) / s - (x * x - 1.0) / 2.0)
}

/// Radial potential of the fixed-phase (giant-vortex) functional:
/// `U(x) = floor(Om)^2 Om^-2 x^-2 / 2 + x^2/2 + gamma (x^s - 1)/s - gamma (x^2 - 1)/2 - floor(Om)/Om`.
pub fn eval_u(x: f64, big_omega: f64, s: f64, gamma: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(GpError::domain(format!("U is singular at x = 0, got x = {x}")));
    }
    let n = big_omega.floor();
    let ratio = n / big_omega;
    Ok(0.5 * ratio * ratio / (x * x) + 0.5 * x * x + gamma * (x.powf(s) - 1.0) / s
        - 0.5 * gamma * (x * x - 1.0)
        - ratio)
}

/// Curvature parameter of the bulk annulus: `alpha = sqrt(4 + gamma (s - 2))`.
pub fn alpha(s: f64, gamma: f64) -> f64 {
    (4.0 + gamma * (s - 2.0)).sqrt()
}

/// Bundles `W`, `U` and the Taylor data around the potential minimum `x = 1`.
#[derive(Debug, Clone, Copy)]
pub struct EffectivePotentials {
    pub s: f64,
    pub gamma: f64,
    pub big_omega: f64,
}

impl EffectivePotentials {
    pub fn new(s: f64, gamma: f64, big_omega: f64) -> Self {
        EffectivePotentials { s, gamma, big_omega }
    }

    pub fn w(&self, x: f64) -> Result<f64> {
        eval_w(x, self.s)
    }

    pub fn u(&self, x: f64) -> Result<f64> {
        eval_u(x, self.big_omega, self.s, self.gamma)
    }

    pub fn alpha(&self) -> f64 {
        alpha(self.s, self.gamma)
    }

    /// Quadratic Taylor coefficient of `U` at `x = 1`, exact in `floor(Om)/Om`:
    /// `[1 + 3 (floor(Om)/Om)^2 + gamma (s - 2)] / 2` -> `alpha^2 / 2` as `Om -> inf`.
    pub fn u_quadratic_coefficient(&self) -> f64 {
        let ratio = self.big_omega.floor() / self.big_omega;
        0.5 * (1.0 + 3.0 * ratio * ratio + self.gamma * (self.s - 2.0))
    }
}

/// Critical reduced speed (omega frame) at which the Thomas-Fermi density
/// first vanishes at the origin:
/// `omega_c = sqrt(2) gamma^{-1/2} [4 (s + 2) / (pi (s - 2))]^{(s-2)/(2(s+2))} / eps`.
pub fn omega_c(eps: f64, s: f64, gamma: f64) -> f64 {
    (2.0f64).sqrt() / gamma.sqrt() / eps
        * (4.0 * (s + 2.0) / (PI * (s - 2.0))).powf((s - 2.0) / (2.0 * (s + 2.0)))
}

/// Critical reduced speed (Omega frame) for the same transition:
/// `Omega_c = 2 sqrt(2 (s + 2) / (pi gamma (s - 2))) (2/s)^{2/(s-2)} / eps`.
pub fn big_omega_c(eps: f64, s: f64, gamma: f64) -> f64 {
    2.0 * (2.0 * (s + 2.0) / (PI * gamma * (s - 2.0))).sqrt() * (2.0f64 / s).powf(2.0 / (s - 2.0))
        / eps
}

/// Order-of-magnitude scale of the third transition (vortex-free annulus).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThirdSpeedScale {
    /// Exponent `-4 (s - 2) / (s + 2)` of `eps` in physical `Omega_rot` units.
    pub exponent: f64,
    /// The scale `eps^exponent` itself.
    pub omega_rot_scale: f64,
    /// Equivalent statement in the Omega frame: `Omega ~ eps^{-4}`, i.e.
    /// `Omega0 = Omega eps^4` stays finite.
    pub big_omega_exponent: f64,
}

/// Scale (not a sharp constant) of the third critical speed.
pub fn third_speed_scale(eps: f64, s: f64) -> ThirdSpeedScale {
    let exponent = -4.0 * (s - 2.0) / (s + 2.0);
    ThirdSpeedScale { exponent, omega_rot_scale: eps.powf(exponent), big_omega_exponent: -4.0 }
}

/// Normalized harmonic-oscillator ground state
/// `g(y) = pi^{-1/4} alpha^{1/4} exp(-alpha y^2 / 2)` with energy `alpha / 2`.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub alpha: f64,
}

pub fn gaussian_profile(alpha: f64) -> Result<Gaussian> {
    ensure_positive("alpha", alpha)?;
    Ok(Gaussian { alpha })
}

impl Gaussian {
    pub fn eval(&self, y: f64) -> f64 {
        PI.powf(-0.25) * self.alpha.powf(0.25) * (-0.5 * self.alpha * y * y).exp()
    }

    /// Exact oscillator ground-state energy `<g| -d^2/2 + alpha^2 y^2/2 |g> = alpha/2`.
    pub fn oscillator_energy(&self) -> f64 {
        0.5 * self.alpha
    }
}

/// Closed-form Thomas-Fermi minimizer: chemical potential, support radii and
/// pointwise density for either frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TFProfile {
    pub frame: Frame,
    pub mu: f64,
    /// Inner support radius; 0 when the density has no hole.
    pub x_in: f64,
    pub x_out: f64,
    pub params: ReducedParams,
}

impl TFProfile {
    /// Pointwise density (the positive part of the closed form).
    pub fn density(&self, x: f64) -> f64 {
        let p = &self.params;
        let e2 = p.eps * p.eps;
        let q = match self.frame {
            Frame::Omega => {
                let a = 0.5 * p.gamma * e2 * p.speed * p.speed;
                e2 * self.mu - x.powf(p.s) + a * x * x
            }
            Frame::BigOmega => {
                let w = (x.powf(p.s) - 1.0) / p.s - (x * x - 1.0) / 2.0;
                e2 * (self.mu - p.gamma * p.speed * p.speed * w)
            }
        };
        (0.5 * q).max(0.0)
    }

    /// Peak density over the support.
    pub fn sup_density(&self) -> f64 {
        match self.frame {
            Frame::Omega => {
                let p = &self.params;
                let a = 0.5 * p.gamma * p.eps * p.eps * p.speed * p.speed;
                // stationary point of a x^2 - x^s
                let xs = if a > 0.0 { (2.0 * a / p.s).powf(1.0 / (p.s - 2.0)) } else { 0.0 };
                self.density(xs.clamp(self.x_in, self.x_out)).max(self.density(self.x_in.max(0.0)))
            }
            Frame::BigOmega => self.density(1.0),
        }
    }

    /// Mass `2 pi int x rho dx` on `[lo, hi]` by closed-form antiderivatives.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.x_in);
        let hi = hi.min(self.x_out);
        if hi <= lo {
            return 0.0;
        }
        let p = &self.params;
        let e2 = p.eps * p.eps;
        match self.frame {
            Frame::Omega => {
                let a = 0.5 * p.gamma * e2 * p.speed * p.speed;
                let f = |x: f64| {
                    e2 * self.mu * x * x / 2.0 + a * x.powi(4) / 4.0
                        - x.powf(p.s + 2.0) / (p.s + 2.0)
                };
                PI * (f(hi) - f(lo))
            }
            Frame::BigOmega => {
                let g2 = p.gamma * p.speed * p.speed;
                // antiderivative of W(x) x
                let gw = |x: f64| {
                    x.powf(p.s + 2.0) / (p.s * (p.s + 2.0)) - x * x / (2.0 * p.s)
                        - x.powi(4) / 8.0
                        + x * x / 4.0
                };
                PI * e2 * (self.mu * (hi * hi - lo * lo) / 2.0 - g2 * (gw(hi) - gw(lo)))
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass_between(self.x_in, self.x_out)
    }
}

fn support_roots_omega(rp: &ReducedParams, mu: f64) -> Result<(f64, f64)> {
    // q(x) = eps^2 mu + a x^2 - x^s
    let e2 = rp.eps * rp.eps;
    let a = 0.5 * rp.gamma * e2 * rp.speed * rp.speed;
    let q = |x: f64| e2 * mu + a * x * x - x.powf(rp.s);
    // q grows until x* then decreases to -inf
    let xstar = if a > 0.0 { (2.0 * a / rp.s).powf(1.0 / (rp.s - 2.0)) } else { 0.0 };
    let mut hi = (xstar + 1.0).max(1.0);
    while q(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(GpError::Bracket("TF outer radius bracket ran away".into()));
        }
    }
    let x_out = bisect(xstar.max(0.0), hi, 1e-14, q)?;
    let x_in = if q(0.0) >= 0.0 {
        0.0
    } else {
        if xstar <= 0.0 || q(xstar) <= 0.0 {
            return Err(GpError::Bracket("TF support is empty".into()));
        }
        bisect(0.0, xstar, 1e-14, |x| -q(x))?
    };
    Ok((x_in, x_out))
}

fn support_roots_big_omega(rp: &ReducedParams, mu: f64) -> Result<(f64, f64)> {
    // support is {W(x) < c}, c = mu / (gamma Omega^2); W decreases on [0,1], increases after
    let c = mu / (rp.gamma * rp.speed * rp.speed);
    let w = |x: f64| (x.powf(rp.s) - 1.0) / rp.s - (x * x - 1.0) / 2.0;
    if c <= 0.0 {
        return Err(GpError::Bracket("TF support is empty".into()));
    }
    let w0 = (rp.s - 2.0) / (2.0 * rp.s); // W(0)
    let x_in = if c >= w0 { 0.0 } else { bisect(0.0, 1.0, 1e-14, |x| w(x) - c)? };
    let mut hi = 2.0;
    while w(hi) < c {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(GpError::Bracket("TF outer radius bracket ran away".into()));
        }
    }
    let x_out = bisect(1.0, hi, 1e-14, |x| w(x) - c)?;
    Ok((x_in, x_out))
}

fn tf_mass_at(rp: &ReducedParams, mu: f64) -> f64 {
    let roots = match rp.frame {
        Frame::Omega => support_roots_omega(rp, mu),
        Frame::BigOmega => support_roots_big_omega(rp, mu),
    };
    match roots {
        Ok((x_in, x_out)) => {
            let prof = TFProfile { frame: rp.frame, mu, x_in, x_out, params: *rp };
            prof.total_mass()
        }
        Err(_) => 0.0, // empty support carries no mass
    }
}

/// Computes the Thomas-Fermi minimizer for the given reduced parameters.
///
/// The chemical potential is found by bisecting the unit-mass condition
/// (monotone in `mu`), then the support radii are solved from `rho = 0`.
/// Whether the density has a central hole is auto-detected.
pub fn tf_profile(rp: &ReducedParams) -> Result<TFProfile> {
    if rp.frame == Frame::BigOmega {
        ensure_positive("Omega", rp.speed)?;
    }
    // Bracket the chemical potential: double outward until mass crosses 1.
    let mut mu_hi = 1.0;
    let mut guard = 0;
    while tf_mass_at(rp, mu_hi) < 1.0 {
        mu_hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(GpError::Bracket("TF chemical potential upper bracket".into()));
        }
    }
    let mut mu_lo = -1.0;
    guard = 0;
    while tf_mass_at(rp, mu_lo) >= 1.0 {
        mu_lo *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(GpError::Bracket("TF chemical potential lower bracket".into()));
        }
    }
    // Bisect mass(mu) = 1 down to a 1e-12 residual.
    let mut lo = mu_lo;
    let mut hi = mu_hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = tf_mass_at(rp, mid);
        if (m - 1.0).abs() <= 1e-13 {
            lo = mid;
            hi = mid;
            break;
        }
        if m < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    let (x_in, x_out) = match rp.frame {
        Frame::Omega => support_roots_omega(rp, mu)?,
        Frame::BigOmega => support_roots_big_omega(rp, mu)?,
    };
    Ok(TFProfile { frame: rp.frame, mu, x_in, x_out, params: *rp })
}

/// Evaluates the TF functional at the minimizer by adaptive quadrature.
pub fn tf_energy(profile: &TFProfile) -> f64 {
    let p = &profile.params;
    let e2inv = 1.0 / (p.eps * p.eps);
    let integrand = |x: f64| {
        let rho = profile.density(x);
        let per_area = match profile.frame {
            Frame::Omega => {
                e2inv * (x.powf(p.s) + rho) * rho - 0.5 * p.gamma * p.speed * p.speed * x * x * rho
            }
            Frame::BigOmega => {
                let w = (x.powf(p.s) - 1.0) / p.s - (x * x - 1.0) / 2.0;
                e2inv * rho * rho + p.gamma * p.speed * p.speed * w * rho
            }
        };
        2.0 * PI * x * per_area
    };
    let scale = 1.0 + profile.mu.abs();
    integrate(&integrand, profile.x_in, profile.x_out, 1e-12 * scale)
}
