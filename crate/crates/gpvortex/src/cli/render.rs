//! Heatmap rendering to binary PPM (P6): a linear three-stop ramp for
//! densities and a cyclic hue map for phases. Byte-deterministic for
//! identical inputs.

use crate::error::Result;
use crate::gp2d::ComplexField2D;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Phase,
}

impl std::str::FromStr for Quantity {
    type Err = crate::error::GpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Quantity::Density),
            "phase" => Ok(Quantity::Phase),
            other => Err(crate::error::GpError::Config(format!(
                "quantity must be density or phase, got {other:?}"
            ))),
        }
    }
}

/// Renders the field to PPM bytes (one pixel per grid node, y flipped so the
/// image is oriented like the plane).
pub fn render_heatmap(field: &ComplexField2D, quantity: Quantity) -> Vec<u8> {
    let (nx, ny) = (field.nx, field.ny);
    let mut out = Vec::with_capacity(32 + 3 * nx * ny);
    out.extend_from_slice(format!("P6\n{nx} {ny}\n255\n").as_bytes());
    match quantity {
        Quantity::Density => {
            let max = field.sup_density();
            for j in (0..ny).rev() {
                for i in 0..nx {
                    let t = if max > 0.0 { field.density(i, j) / max } else { 0.0 };
                    out.extend_from_slice(&ramp(t));
                }
            }
        }
        Quantity::Phase => {
            for j in (0..ny).rev() {
                for i in 0..nx {
                    let v = field.values[field.idx(i, j)];
                    let hue = (v.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI);
                    out.extend_from_slice(&hsv_to_rgb(hue));
                }
            }
        }
    }
    out
}

pub fn write_heatmap(path: &Path, field: &ComplexField2D, quantity: Quantity) -> Result<()> {
    std::fs::write(path, render_heatmap(field, quantity))?;
    Ok(())
}

/// Black -> amber -> white linear ramp.
fn ramp(t: f64) -> [u8; 3] {
    let t = t.clamp(0.0, 1.0);
    let (r, g, b) = if t < 0.5 {
        let u = 2.0 * t;
        (u, 0.55 * u, 0.15 * u)
    } else {
        let u = 2.0 * (t - 0.5);
        (1.0, 0.55 + 0.45 * u, 0.15 + 0.85 * u)
    };
    [(r * 255.0).round() as u8, (g * 255.0).round() as u8, (b * 255.0).round() as u8]
}

/// Full-saturation hue wheel (cyclic for phases).
fn hsv_to_rgb(h: f64) -> [u8; 3] {
    let h = (h.rem_euclid(1.0)) * 6.0;
    let i = h.floor() as i32 % 6;
    let f = h - h.floor();
    let q = 1.0 - f;
    let (r, g, b) = match i {
        0 => (1.0, f, 0.0),
        1 => (q, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, q, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, q),
    };
    [(r * 255.0).round() as u8, (g * 255.0).round() as u8, (b * 255.0).round() as u8]
}
