//! Closed-form critical speeds across coupling strengths, the consistency of
//! the two rescalings, and the third-transition scale.
//!
//!     cargo run --release -p gpvortex --example critical_speeds

use gpvortex::analytic::{big_omega_c, omega_c, third_speed_scale};
use gpvortex::params::big_omega_from_omega;

fn main() {
    let (s, gamma) = (4.0, 1.0);
    println!("trap exponent s = {s}, effective-rotation fraction gamma = {gamma}");
    println!();
    println!("{:>8} {:>16} {:>16} {:>16}", "eps", "omega_c", "Omega_c", "map(omega_c)");
    for eps in [0.25, 0.1, 0.05, 0.02, 0.01] {
        let wc = omega_c(eps, s, gamma);
        let oc = big_omega_c(eps, s, gamma);
        let mapped = big_omega_from_omega(eps, s, gamma, wc);
        println!("{eps:>8} {wc:>16.8} {oc:>16.8} {mapped:>16.8}");
        assert!((mapped - oc).abs() < 1e-10 * oc);
    }
    println!();
    println!("the hole threshold maps consistently between the two speed scalings");
    println!();
    let t = third_speed_scale(0.1, s);
    println!(
        "third-transition scale: Omega_rot ~ eps^{:.4} (physical units); Omega0 = Omega eps^4 finite",
        t.exponent
    );
    for s_large in [4.0, 8.0, 16.0, 64.0] {
        println!(
            "  s = {s_large:>4}: exponent {:.4} (tends to -4 for very hard traps)",
            third_speed_scale(0.1, s_large).exponent
        );
    }
}
