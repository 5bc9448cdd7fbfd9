//! Thomas-Fermi minimizers across rotation speeds: chemical potential,
//! support radii, energy, and the opening of the central hole at Omega_c.
//!
//!     cargo run --release -p gpvortex --example tf_profiles

use gpvortex::analytic::{big_omega_c, tf_energy, tf_profile};
use gpvortex::params::ReducedParams;

fn main() {
    let eps = 0.1;
    let oc = big_omega_c(eps, 4.0, 1.0);
    println!("eps = {eps}, s = 4, gamma = 1; Omega_c = {oc:.6}");
    println!();
    println!(
        "{:>10} {:>12} {:>10} {:>10} {:>12} {:>10}",
        "Omega", "mu_tf", "x_in", "x_out", "E_tf", "mass"
    );
    for factor in [0.3, 0.6, 0.9, 1.0, 1.2, 1.6, 2.5, 4.0] {
        let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, factor * oc).unwrap();
        let tf = tf_profile(&rp).unwrap();
        println!(
            "{:>10.4} {:>12.4} {:>10.6} {:>10.6} {:>12.4} {:>10.8}",
            rp.speed,
            tf.mu,
            tf.x_in,
            tf.x_out,
            tf_energy(&tf),
            tf.total_mass()
        );
    }
    println!();
    println!("x_in stays 0 up to Omega_c and grows beyond it: the density develops a hole.");
    println!("In these units (lengths scaled to the potential minimum) the support tightens");
    println!("around the unit ring as the speed grows, and the chemical potential rises.");
}
