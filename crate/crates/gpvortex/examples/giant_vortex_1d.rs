//! Radial giant-vortex profiles over an Omega0 ladder: energy against the
//! transverse-oscillator bracket and the shrinking deviation from the
//! Gaussian reference.
//!
//!     cargo run --release -p gpvortex --example giant_vortex_1d

use gpvortex::analytic::alpha;
use gpvortex::params::ReducedParams;
use gpvortex::radial::{check_gaussian_closeness, minimize_radial, RadialProblem};
use std::f64::consts::PI;

fn main() {
    let eps = 0.05;
    let a = alpha(4.0, 1.0);
    println!("eps = {eps}, alpha = sqrt(6) = {a:.6}; bracket: E/Omega ~ alpha/2 + (1/2pi) sqrt(alpha/(2 pi Omega0))");
    println!();
    println!(
        "{:>8} {:>14} {:>14} {:>12} {:>14}",
        "Omega0", "E/Omega", "bracket", "rel err", "gauss dev"
    );
    for omega0 in [10.0, 25.0, 100.0, 400.0, 1000.0] {
        let rp = ReducedParams::from_omega0(eps, 4.0, 1.0, omega0).unwrap();
        let problem = RadialProblem::giant_vortex(rp).unwrap();
        let p = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let ratio = p.energy / rp.speed;
        let bracket = 0.5 * a + (0.5 / PI) * (a / (2.0 * PI * omega0)).sqrt();
        let dev = check_gaussian_closeness(&p, &rp);
        println!(
            "{omega0:>8} {ratio:>14.8} {bracket:>14.8} {:>12.2e} {dev:>14.6e}",
            (ratio - bracket).abs() / bracket
        );
    }
    println!();
    println!("the deviation from alpha/2 falls like Omega0^-1/2 and the profile approaches");
    println!("the oscillator Gaussian (last column, decreasing).");
}
