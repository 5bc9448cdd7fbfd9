//! Field dumps and heatmaps: write a state to the binary GPF1 format, read it
//! back bit-exactly, and render both density and phase images.
//!
//!     cargo run --release -p gpvortex --example field_io

use gpvortex::cli::dump::{read_field, write_field};
use gpvortex::cli::render::{write_heatmap, Quantity};
use gpvortex::gp2d::{trial_giant_vortex, GPConfig};
use gpvortex::params::ReducedParams;
use std::path::Path;

fn main() {
    let rp = ReducedParams::from_omega0(0.25, 4.0, 1.0, 1.0).unwrap();
    let mut cfg = GPConfig::default_for(&rp).unwrap();
    cfg.annulus = (0.55, 1.4);
    cfg.truncation_radius = 1.45;
    let field = trial_giant_vortex(&rp, &cfg).unwrap();
    println!(
        "trial field: {} x {}, gauge winding {}, |psi|^2 integrates to {:.12}",
        field.nx,
        field.ny,
        field.gauge_winding,
        field.norm_sq()
    );
    let path = Path::new("giant_trial.gpf");
    write_field(path, &field, &rp).unwrap();
    let bytes = std::fs::metadata(path).unwrap().len();
    let (back, rp2) = read_field(path).unwrap();
    assert_eq!(back.values, field.values);
    assert_eq!(back.gauge_winding, field.gauge_winding);
    assert_eq!(rp2, rp);
    println!("wrote and re-read {bytes} bytes bit-exactly (GPF1 version 2: gauged field)");
    write_heatmap(Path::new("giant_trial_density.ppm"), &field, Quantity::Density).unwrap();
    write_heatmap(Path::new("giant_trial_phase.ppm"), &field, Quantity::Phase).unwrap();
    println!("wrote giant_trial_density.ppm and giant_trial_phase.ppm");
}
