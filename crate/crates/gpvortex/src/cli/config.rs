//! Flat key-value configuration: `key = value` lines, `#` comments, plus
//! `--set key=value` overrides applied on top.

use crate::error::{GpError, Result};
use crate::params::{Frame, ReducedParams, TrapParams};
use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

/// Parsed configuration; keys are kept sorted for deterministic output.
#[derive(Debug, Clone, Default)]
pub struct Config {
    map: BTreeMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Config::default();
        cfg.merge_text(&text)?;
        Ok(cfg)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                GpError::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1))
            })?;
            self.map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(())
    }

    /// Applies `key=value` override strings.
    pub fn apply_overrides(&mut self, sets: &[String]) -> Result<()> {
        for s in sets {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| GpError::Config(format!("--set expects key=value, got {s:?}")))?;
            self.map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| GpError::Config(format!("{key} must be a number, got {v:?}"))),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| GpError::Config(format!("{key} must be an integer, got {v:?}"))),
        }
    }

    fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?
            .ok_or_else(|| GpError::Config(format!("missing required key {key:?}")))
    }

    /// Reduced parameters from keys `eps`, `s`, `gamma`, `frame`, `speed`
    /// (or `omega0` in the Omega frame).
    pub fn reduced_params(&self) -> Result<ReducedParams> {
        let eps = self.require_f64("eps")?;
        let s = self.require_f64("s")?;
        let gamma = self.get_f64("gamma")?.unwrap_or(1.0);
        let frame = match self.get("frame") {
            Some(f) => Frame::from_str(f)?,
            None => Frame::BigOmega,
        };
        match frame {
            Frame::Omega => {
                let speed = self.require_f64("speed")?;
                ReducedParams::omega_frame(eps, s, gamma, speed)
            }
            Frame::BigOmega => {
                if let Some(omega0) = self.get_f64("omega0")? {
                    if let Some(speed) = self.get_f64("speed")? {
                        let expected = omega0 * eps.powi(-4);
                        if (speed - expected).abs() > 1e-9 * expected.abs() {
                            return Err(GpError::Config(format!(
                                "speed = {speed} inconsistent with omega0 = {omega0} (expected {expected})"
                            )));
                        }
                    }
                    ReducedParams::from_omega0(eps, s, gamma, omega0)
                } else {
                    let speed = self.require_f64("speed")?;
                    ReducedParams::big_omega_frame(eps, s, gamma, speed)
                }
            }
        }
    }

    /// Physical trap parameters when `k` and a physical rotation speed are given.
    pub fn trap_params(&self) -> Result<TrapParams> {
        let eps = self.require_f64("eps")?;
        let s = self.require_f64("s")?;
        let k = self.require_f64("k")?;
        let gamma = self.get_f64("gamma")?.unwrap_or(1.0);
        let omega_rot = self.require_f64("omega_rot")?;
        TrapParams::new(eps, s, k, gamma, omega_rot)
    }

    /// Deterministic serialization (sorted keys).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}
