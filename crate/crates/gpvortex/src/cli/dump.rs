//! Binary field dumps (`GPF1`): little-endian, bit-exact round trips.
//!
//! Layout: magic `GPF1`, version u16, nx u32, ny u32, bounds 4 x f64,
//! frame tag u8 (0 = omega, 1 = Omega), parameter block eps/s/gamma/speed as
//! f64, then nx*ny complex values as interleaved f64 pairs, row-major.
//! Version 1 covers ordinary fields; version 2 inserts the gauge winding as
//! one extra f64 after the parameter block (written only when nonzero).

use crate::error::{GpError, Result};
use crate::gp2d::ComplexField2D;
use crate::params::{Frame, ReducedParams};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"GPF1";

pub fn write_field(path: &Path, field: &ComplexField2D, rp: &ReducedParams) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_field_to(&mut f, field, rp)
}

pub fn write_field_to(out: &mut impl Write, field: &ComplexField2D, rp: &ReducedParams) -> Result<()> {
    out.write_all(MAGIC)?;
    let version: u16 = if field.gauge_winding == 0 { 1 } else { 2 };
    out.write_all(&version.to_le_bytes())?;
    out.write_all(&(field.nx as u32).to_le_bytes())?;
    out.write_all(&(field.ny as u32).to_le_bytes())?;
    for b in field.bounds {
        out.write_all(&b.to_le_bytes())?;
    }
    let tag: u8 = match rp.frame {
        Frame::Omega => 0,
        Frame::BigOmega => 1,
    };
    out.write_all(&[tag])?;
    for v in [rp.eps, rp.s, rp.gamma, rp.speed] {
        out.write_all(&v.to_le_bytes())?;
    }
    if version == 2 {
        out.write_all(&(field.gauge_winding as f64).to_le_bytes())?;
    }
    for v in &field.values {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field(path: &Path) -> Result<(ComplexField2D, ReducedParams)> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    read_field_from(&mut f)
}

pub fn read_field_from(input: &mut impl Read) -> Result<(ComplexField2D, ReducedParams)> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(GpError::Config(format!("bad magic {magic:?}; not a GPF1 dump")));
    }
    let version = read_u16(input)?;
    if version != 1 && version != 2 {
        return Err(GpError::Config(format!("unsupported GPF1 version {version}")));
    }
    let nx = read_u32(input)? as usize;
    let ny = read_u32(input)? as usize;
    let mut bounds = [0.0; 4];
    for b in &mut bounds {
        *b = read_f64(input)?;
    }
    let mut tag = [0u8; 1];
    input.read_exact(&mut tag)?;
    let frame = match tag[0] {
        0 => Frame::Omega,
        1 => Frame::BigOmega,
        other => return Err(GpError::Config(format!("bad frame tag {other}"))),
    };
    let eps = read_f64(input)?;
    let s = read_f64(input)?;
    let gamma = read_f64(input)?;
    let speed = read_f64(input)?;
    let gauge = if version == 2 { read_f64(input)? as i64 } else { 0 };
    let rp = ReducedParams { eps, s, gamma, frame, speed };
    let mut field = ComplexField2D::zeros(nx, ny, bounds);
    field.gauge_winding = gauge;
    for v in &mut field.values {
        let re = read_f64(input)?;
        let im = read_f64(input)?;
        *v = Complex64::new(re, im);
    }
    field.mass = field.norm_sq();
    Ok((field, rp))
}

fn read_u16(input: &mut impl Read) -> Result<u16> {
    let mut b = [0u8; 2];
    input.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32(input: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(input: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
