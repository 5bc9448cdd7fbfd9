//! Physical and reduced parameters for the rotating 2D condensate, and the two
//! rescalings of the energy functional together with the maps between them.
//!
//! Lengths are measured either in units of `R_eps = (k eps^2)^{-1/(s+2)}`
//! (moderate rotation, speed written `omega`) or in units of the minimum
//! `r_m = (gamma Omega_rot^2 / (s k))^{1/(s-2)}` of the effective potential
//! (fast rotation, speed written `Omega`). Conversions are explicit; nothing
//! converts implicitly.

use crate::error::{ensure_finite, ensure_positive, GpError, Result};
use serde::{Deserialize, Serialize};

/// Which rescaling the reduced speed refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    /// Lengths in units of `R_eps`; reduced speed `omega`.
    Omega,
    /// Lengths in units of `r_m`; reduced speed `Omega`.
    BigOmega,
}

impl Frame {
    pub fn label(&self) -> &'static str {
        match self {
            Frame::Omega => "omega",
            Frame::BigOmega => "Omega",
        }
    }
}

impl std::str::FromStr for Frame {
    type Err = GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(Frame::Omega),
            "Omega" => Ok(Frame::BigOmega),
            other => Err(GpError::Config(format!(
                "frame must be \"omega\" or \"Omega\", got {other:?}"
            ))),
        }
    }
}

/// Parameters of the physical (unscaled) functional.
///
/// The effective centrifugal-corrected trap is `k r^s - (gamma/2) Omega_rot^2 r^2`;
/// the constructor derives the oscillator frequency from `gamma` so that
/// `Omega_rot^2 - Omega_osc^2 = gamma Omega_rot^2` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    pub eps: f64,
    pub s: f64,
    pub k: f64,
    pub gamma: f64,
    pub omega_osc: f64,
    pub omega_rot: f64,
}

fn validate_common(eps: f64, s: f64, gamma: f64) -> Result<()> {
    ensure_positive("eps", eps)?;
    ensure_finite("s", s)?;
    if s <= 2.0 {
        return Err(GpError::domain(format!(
            "trap exponent s must satisfy 2 < s < inf, got {s}"
        )));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(GpError::domain(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

impl TrapParams {
    /// Builds physical parameters, deriving `omega_osc = omega_rot sqrt(1 - gamma)`.
    pub fn new(eps: f64, s: f64, k: f64, gamma: f64, omega_rot: f64) -> Result<Self> {
        validate_common(eps, s, gamma)?;
        ensure_positive("k", k)?;
        ensure_positive("omega_rot", omega_rot)?;
        let omega_osc = omega_rot * (1.0 - gamma).sqrt();
        Ok(TrapParams { eps, s, k, gamma, omega_osc, omega_rot })
    }

    /// Builds physical parameters from the oscillator frequency, deriving
    /// `gamma = 1 - (omega_osc / omega_rot)^2`.
    pub fn from_oscillator(eps: f64, s: f64, k: f64, omega_osc: f64, omega_rot: f64) -> Result<Self> {
        ensure_positive("omega_rot", omega_rot)?;
        if omega_osc < 0.0 || omega_osc >= omega_rot {
            return Err(GpError::domain(format!(
                "need 0 <= omega_osc < omega_rot, got {omega_osc} vs {omega_rot}"
            )));
        }
        let gamma = 1.0 - (omega_osc / omega_rot).powi(2);
        validate_common(eps, s, gamma)?;
        ensure_positive("k", k)?;
        Ok(TrapParams { eps, s, k, gamma, omega_osc, omega_rot })
    }

    /// Length unit of the moderate-rotation scaling: `(k eps^2)^{-1/(s+2)}`.
    pub fn r_eps(&self) -> f64 {
        (self.k * self.eps * self.eps).powf(-1.0 / (self.s + 2.0))
    }

    /// Radius of the minimum of the effective potential:
    /// `(gamma Omega_rot^2 / (s k))^{1/(s-2)}`.
    pub fn r_m(&self) -> f64 {
        (self.gamma * self.omega_rot * self.omega_rot / (self.s * self.k))
            .powf(1.0 / (self.s - 2.0))
    }

    /// Reduced parameters in the `omega` frame (`omega = R_eps^2 Omega_rot`).
    pub fn to_omega_frame(&self) -> ReducedParams {
        let r = self.r_eps();
        ReducedParams {
            eps: self.eps,
            s: self.s,
            gamma: self.gamma,
            frame: Frame::Omega,
            speed: r * r * self.omega_rot,
        }
    }

    /// Reduced parameters in the `Omega` frame (`Omega = r_m^2 Omega_rot`).
    pub fn to_big_omega_frame(&self) -> ReducedParams {
        let r = self.r_m();
        ReducedParams {
            eps: self.eps,
            s: self.s,
            gamma: self.gamma,
            frame: Frame::BigOmega,
            speed: r * r * self.omega_rot,
        }
    }
}

/// Parameters of one of the two rescaled functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub eps: f64,
    pub s: f64,
    pub gamma: f64,
    pub frame: Frame,
    /// `omega` or `Omega` depending on `frame`.
    pub speed: f64,
}

/// `omega` as a function of `Omega`:
/// `(s/gamma)^{2/(s+2)} eps^{-4/(s+2)} Omega^{(s-2)/(s+2)}`.
pub fn omega_from_big_omega(eps: f64, s: f64, gamma: f64, big_omega: f64) -> f64 {
    (s / gamma).powf(2.0 / (s + 2.0))
        * eps.powf(-4.0 / (s + 2.0))
        * big_omega.powf((s - 2.0) / (s + 2.0))
}

/// Inverse of [`omega_from_big_omega`]:
/// `Omega = (gamma/s)^{2/(s-2)} eps^{4/(s-2)} omega^{(s+2)/(s-2)}`.
pub fn big_omega_from_omega(eps: f64, s: f64, gamma: f64, omega: f64) -> f64 {
    (gamma / s).powf(2.0 / (s - 2.0)) * eps.powf(4.0 / (s - 2.0)) * omega.powf((s + 2.0) / (s - 2.0))
}

impl ReducedParams {
    pub fn omega_frame(eps: f64, s: f64, gamma: f64, omega: f64) -> Result<Self> {
        validate_common(eps, s, gamma)?;
        if !omega.is_finite() || omega < 0.0 {
            return Err(GpError::domain(format!("omega must be >= 0, got {omega}")));
        }
        Ok(ReducedParams { eps, s, gamma, frame: Frame::Omega, speed: omega })
    }

    pub fn big_omega_frame(eps: f64, s: f64, gamma: f64, big_omega: f64) -> Result<Self> {
        validate_common(eps, s, gamma)?;
        ensure_positive("Omega", big_omega)?;
        Ok(ReducedParams { eps, s, gamma, frame: Frame::BigOmega, speed: big_omega })
    }

    /// Convenience constructor for the giant-vortex regime: `Omega = Omega0 eps^{-4}`.
    pub fn from_omega0(eps: f64, s: f64, gamma: f64, omega0: f64) -> Result<Self> {
        ensure_positive("Omega0", omega0)?;
        Self::big_omega_frame(eps, s, gamma, omega0 * eps.powi(-4))
    }

    /// `Omega0 = Omega eps^4`; defined only in the `Omega` frame.
    pub fn omega0(&self) -> Option<f64> {
        match self.frame {
            Frame::BigOmega => Some(self.speed * self.eps.powi(4)),
            Frame::Omega => None,
        }
    }

    /// The speed expressed in the other frame's units.
    pub fn convert(&self, target: Frame) -> Self {
        if self.frame == target {
            return *self;
        }
        let speed = match target {
            Frame::Omega => omega_from_big_omega(self.eps, self.s, self.gamma, self.speed),
            Frame::BigOmega => big_omega_from_omega(self.eps, self.s, self.gamma, self.speed),
        };
        ReducedParams { frame: target, speed, ..*self }
    }

    pub fn to_omega(&self) -> Self {
        self.convert(Frame::Omega)
    }

    pub fn to_big_omega(&self) -> Self {
        self.convert(Frame::BigOmega)
    }
}
