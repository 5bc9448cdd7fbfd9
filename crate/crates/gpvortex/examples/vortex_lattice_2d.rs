//! Vortex lattice in the rotating bulk: relax a lattice-seeded state, report
//! the zeros, the vorticity-uniformity ratios over quarter annuli, and the
//! energy split against the Thomas-Fermi baseline. Writes density and phase
//! heatmaps next to the working directory. A few minutes of runtime.
//!
//!     cargo run --release -p gpvortex --example vortex_lattice_2d

use gpvortex::analytic::{tf_energy, tf_profile};
use gpvortex::cli::render::{write_heatmap, Quantity};
use gpvortex::cli::sweep::{prepare_2d, InitKind, SolverKnobs};
use gpvortex::gp2d;
use gpvortex::params::ReducedParams;
use gpvortex::vortex::{build_region, find_vortex_cells, uniformity_ratio, AnnularSector, RegionKind};
use std::f64::consts::PI;

fn main() {
    let eps = 0.1;
    let big = 2.5 / eps;
    let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, big).unwrap();
    let knobs = SolverKnobs {
        init: InitKind::Lattice,
        tol_residual: 1e-3,
        max_iters: 25_000,
        ..Default::default()
    };
    let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
    println!("Omega = {big}, grid {0} x {0}", cfg.grid_side());
    let out = gp2d::minimize(&seed, &cfg).unwrap();
    let tf = tf_profile(&rp).unwrap();
    println!(
        "E = {:.4} after {} iterations; E - E_tf = {:.4}",
        out.energy,
        out.iterations,
        out.energy - tf_energy(&tf)
    );
    let envelope = |r: f64| tf.density(r);
    let zeros = find_vortex_cells(&out.psi, Some(&envelope));
    println!("{} vortex cells, total winding {}", zeros.len(), zeros.iter().map(|z| z.winding).sum::<i32>());
    let region = build_region(RegionKind::RBulk, &rp, Some(&tf)).unwrap();
    for (name, t0) in [("Q1", 0.0), ("Q2", 0.5 * PI), ("Q3", PI), ("Q4", 1.5 * PI)] {
        let sector = AnnularSector {
            x_lo: region.x_lo,
            x_hi: region.x_hi,
            theta0: t0,
            theta1: t0 + 0.5 * PI,
        };
        let u = uniformity_ratio(&zeros, &sector, &rp);
        println!("  {name}: nu/(Omega |S|) = {:.3} ({} windings)", u.ratio, (u.nu / (2.0 * PI)).round());
    }
    write_heatmap(std::path::Path::new("lattice_density.ppm"), &out.psi, Quantity::Density)
        .unwrap();
    write_heatmap(std::path::Path::new("lattice_phase.ppm"), &out.psi, Quantity::Phase).unwrap();
    println!("wrote lattice_density.ppm and lattice_phase.ppm");
}
