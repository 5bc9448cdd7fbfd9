use gpvortex::numerics::{bisect, integrate};
use std::f64::consts::PI;
use std::time::Instant;
fn main() {
    let (eps, s, gamma) = (0.1f64, 4.0f64, 1.0f64);
    let t0 = Instant::now();
    let mass_at = |w: f64| {
        let a = 0.5 * gamma * eps * eps * w * w;
        let x_out = a.powf(1.0 / (s - 2.0));
        let scale = 1.0 + 2.0 * PI * a * x_out.powf(s + 2.0);
        integrate(&|x: f64| 2.0 * PI * x * 0.5 * (a * x * x - x.powf(s)), 0.0, x_out, 1e-13 * scale)
    };
    println!("mass(10) = {} ({:?})", mass_at(10.0), t0.elapsed());
    println!("mass(17.68) = {} ({:?})", mass_at(17.681545654119405), t0.elapsed());
    println!("mass(1000) = {} ({:?})", mass_at(1000.0), t0.elapsed());
    let wc = bisect(1.0, 1e3, 1e-13, |w| mass_at(w) - 1.0).unwrap();
    println!("omega_c oracle = {wc} ({:?})", t0.elapsed());
}
