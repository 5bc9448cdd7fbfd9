//! Small 2D sweep across the hole threshold: the detected depleted-core
//! radius flips from zero to macroscopic as the speed crosses Omega_c.
//! Takes a couple of minutes.
//!
//!     cargo run --release -p gpvortex --example hole_transition_2d

use gpvortex::analytic::big_omega_c;
use gpvortex::cli::sweep::{prepare_2d, InitKind, SolverKnobs};
use gpvortex::gp2d;
use gpvortex::params::ReducedParams;
use gpvortex::vortex::detect_hole;

fn main() {
    let eps = 0.1;
    let oc = big_omega_c(eps, 4.0, 1.0);
    println!("eps = {eps}; Omega_c = {oc:.4}; hole threshold 2e-3 of peak density");
    println!();
    for factor in [0.7f64, 1.6] {
        let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, factor * oc).unwrap();
        let knobs = SolverKnobs {
            init: InitKind::Lattice,
            tol_residual: 2e-3,
            max_iters: 15_000,
            ..Default::default()
        };
        let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
        let out = gp2d::minimize(&seed, &cfg).unwrap();
        let hole = detect_hole(&out.psi, 2e-3);
        println!(
            "Omega = {:.3} ({factor} Omega_c): E = {:.4}, {} iterations, hole radius {hole:.3}",
            rp.speed, out.energy, out.iterations
        );
    }
}
