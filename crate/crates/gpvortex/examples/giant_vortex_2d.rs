//! Giant-vortex state in 2D: seed the flow with the matched Gaussian ring
//! carrying the full circulation plus three planted intruder vortices, relax,
//! and check that the intruders are expelled, the circle degree equals the
//! speed, and the bulk density follows the radial profile. About a minute.
//!
//!     cargo run --release -p gpvortex --example giant_vortex_2d

use gpvortex::cli::sweep::{prepare_2d, InitKind, SolverKnobs};
use gpvortex::gp2d;
use gpvortex::params::ReducedParams;
use gpvortex::radial::{minimize_radial, RadialProblem};
use gpvortex::vortex::{build_region, degree_on_circle, find_vortex_cells, RegionKind};

fn main() {
    let rp = ReducedParams::from_omega0(0.25, 4.0, 1.0, 0.5).unwrap();
    println!("eps = 0.25, Omega0 = 0.5, Omega = {}", rp.speed);
    let knobs = SolverKnobs {
        init: InitKind::Giant,
        tol_residual: 5e-4,
        max_iters: 25_000,
        ..Default::default()
    };
    let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
    let seed_zeros = find_vortex_cells(&seed, None).len();
    println!("seed carries {seed_zeros} planted vortex cells in the bulk ring");
    let out = gp2d::minimize(&seed, &cfg).unwrap();
    let zeros = find_vortex_cells(&out.psi, None);
    let region = build_region(RegionKind::ABulk, &rp, None).unwrap();
    let inside = zeros
        .iter()
        .filter(|z| region.sector().contains(z.x, z.y))
        .count();
    println!(
        "after {} iterations: {} vortex cells total, {} inside the bulk annulus",
        out.iterations,
        zeros.len(),
        inside
    );
    let degree = degree_on_circle(&out.psi, 1.0).unwrap();
    println!("degree on the unit circle = {degree} (speed {})", rp.speed);
    let problem = RadialProblem::giant_vortex(rp).unwrap();
    let gv = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
    let mut min_ratio = f64::INFINITY;
    for j in 0..out.psi.ny {
        for i in 0..out.psi.nx {
            let r = (out.psi.x(i).powi(2) + out.psi.y(j).powi(2)).sqrt();
            if r >= region.x_lo && r <= region.x_hi {
                let g = gv.interp(r);
                if g > 1e-6 * gv.sup() {
                    min_ratio = min_ratio.min(out.psi.values[out.psi.idx(i, j)].norm() / g);
                }
            }
        }
    }
    println!("min |psi| / g_gv over the bulk annulus = {min_ratio:.4}");
}
