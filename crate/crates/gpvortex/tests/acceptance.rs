//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured numbers. Expensive solver states are shared between the
//! criteria that reuse them.

use gpvortex::analytic::{alpha, big_omega_c, eval_w, omega_c, tf_energy, tf_profile};
use gpvortex::cli::sweep::{prepare_2d, InitKind, SolverKnobs};
use gpvortex::gp2d::{self, decouple_energy, field_from_radial, GPConfig};
use gpvortex::numerics::{bisect, integrate};
use gpvortex::params::{big_omega_from_omega, ReducedParams};
use gpvortex::radial::{
    check_gaussian_closeness, check_symmetry_closeness, gaussian_sup_deviation, minimize_radial,
    q_form, symmetric_vortex_profile, symmetry_test_functions, RadialGrid, RadialProblem,
    RadialProfile,
};
use gpvortex::vortex::{
    build_region, degree_on_circle, detect_hole, find_vortex_cells, plaquette_winding,
    uniformity_ratio, vorticity_and_gradient, AnnularSector, RegionKind, Winding,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const EPS_LATTICE: f64 = 0.08;
const EPS_GV: f64 = 0.25;

// ---------------------------------------------------------------------------
// criterion 1: closed-form critical-speed oracles
// ---------------------------------------------------------------------------

/// Independent oracle: the critical speed is where the unit-mass condition
/// holds with the chemical potential exactly at the hole threshold. Solved
/// here by quadrature of the density (adaptive Simpson) plus bisection in the
/// speed — no shared code path with the closed forms under test.
fn omega_c_oracle(eps: f64, s: f64, gamma: f64) -> f64 {
    let mass_at = |w: f64| {
        let a = 0.5 * gamma * eps * eps * w * w;
        let x_out = a.powf(1.0 / (s - 2.0));
        // quadrature tolerance scaled to the integrand magnitude
        let scale = 1.0 + 2.0 * PI * a * x_out.powf(s + 2.0);
        integrate(&|x: f64| 2.0 * PI * x * 0.5 * (a * x * x - x.powf(s)), 0.0, x_out, 1e-13 * scale)
    };
    bisect(1.0, 1e3, 1e-13, |w| mass_at(w) - 1.0).expect("omega_c bracket")
}

fn big_omega_c_oracle(eps: f64, s: f64, gamma: f64) -> f64 {
    let mass_at = |big: f64| {
        let mu = gamma * big * big * (s - 2.0) / (2.0 * s); // density touches zero at x = 0
        let x_out = (s / 2.0f64).powf(1.0 / (s - 2.0));
        let scale = 1.0 + eps * eps * mu * x_out * x_out;
        integrate(
            &|x: f64| {
                let w = eval_w(x, s).unwrap();
                2.0 * PI * x * 0.5 * eps * eps * (mu - gamma * big * big * w)
            },
            0.0,
            x_out,
            1e-13 * scale,
        )
    };
    bisect(1.0, 1e3, 1e-13, |b| mass_at(b) - 1.0).expect("Omega_c bracket")
}

#[test]
fn criterion_01_critical_speed_oracles() {
    // frozen from an independent high-precision evaluation of the unit-mass
    // condition at the hole threshold
    const OMEGA_C: f64 = 17.681545654119405;
    const BIG_OMEGA_C: f64 = 13.819765978853419;
    let wc = omega_c(0.1, 4.0, 1.0);
    let oc = big_omega_c(0.1, 4.0, 1.0);
    assert!((wc - OMEGA_C).abs() <= 1e-9 * OMEGA_C, "omega_c {wc} vs frozen {OMEGA_C}");
    assert!((oc - BIG_OMEGA_C).abs() <= 1e-9 * BIG_OMEGA_C, "Omega_c {oc} vs frozen {BIG_OMEGA_C}");
    // quadrature + bisection oracle, independent of the closed forms
    let wc_q = omega_c_oracle(0.1, 4.0, 1.0);
    let oc_q = big_omega_c_oracle(0.1, 4.0, 1.0);
    assert!((wc - wc_q).abs() <= 1e-9 * wc, "omega_c {wc} vs oracle {wc_q}");
    assert!((oc - oc_q).abs() <= 1e-9 * oc, "Omega_c {oc} vs oracle {oc_q}");
    // the two speeds are images of each other under the scaling map
    let mapped = big_omega_from_omega(0.1, 4.0, 1.0, wc);
    assert!((mapped - oc).abs() <= 1e-10 * oc, "map identity {mapped} vs {oc}");
    println!("criterion 1: PASS - omega_c = {wc:.12}, Omega_c = {oc:.12}, map identity to 1e-10");
}

// ---------------------------------------------------------------------------
// criterion 2: TF exactness at omega = 0, s = 4
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_tf_exactness() {
    let rp = ReducedParams::omega_frame(0.1, 4.0, 1.0, 0.0).unwrap();
    let tf = tf_profile(&rp).unwrap();
    // (3/pi)^(1/6) and (3/pi)^(2/3)/eps^2, frozen at full precision
    const X_OUT: f64 = 0.99234319760992796;
    const MU: f64 = 96.972275804397289;
    assert!((tf.x_out - X_OUT).abs() <= 1e-8 * X_OUT, "x_out {} vs {X_OUT}", tf.x_out);
    assert!((tf.mu - MU).abs() <= 1e-8 * MU, "mu {} vs {MU}", tf.mu);
    println!("criterion 2: PASS - x_out = {:.12}, mu = {:.10}", tf.x_out, tf.mu);
}

// ---------------------------------------------------------------------------
// criterion 3: giant-vortex energy bracket and deviation exponent
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_giant_vortex_energy_bracket() {
    let a = alpha(4.0, 1.0);
    // (1/2pi) sqrt(alpha/(2 pi Omega0)), frozen by direct evaluation
    let predicted_dev = [
        (25.0, 0.019874582106693543),
        (100.0, 0.0099372910533467714),
        (400.0, 0.0049686455266733857),
    ];
    let mut lnx = Vec::new();
    let mut lny = Vec::new();
    for &(omega0, dev) in &predicted_dev {
        let rp = ReducedParams::from_omega0(0.05, 4.0, 1.0, omega0).unwrap();
        let problem = RadialProblem::giant_vortex(rp).unwrap();
        let p = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
        let ratio = p.energy / rp.speed;
        let target = 0.5 * a + dev;
        assert!(
            (ratio - target).abs() <= 0.02 * target,
            "Omega0 = {omega0}: E/Omega = {ratio} vs {target}"
        );
        let measured_dev = ratio - 0.5 * a;
        assert!(measured_dev > 0.0);
        lnx.push(omega0.ln());
        lny.push(measured_dev.ln());
    }
    // least-squares slope of log(dev) vs log(Omega0)
    let n = lnx.len() as f64;
    let sx: f64 = lnx.iter().sum();
    let sy: f64 = lny.iter().sum();
    let sxx: f64 = lnx.iter().map(|v| v * v).sum();
    let sxy: f64 = lnx.iter().zip(&lny).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(
        (-0.6..=-0.4).contains(&slope),
        "fitted deviation exponent {slope} outside [-0.6, -0.4]"
    );
    println!("criterion 3: PASS - E/Omega within 2% of the bracket; exponent = {slope:.4}");
}

// ---------------------------------------------------------------------------
// criterion 4: Gaussian and symmetric-profile closeness trends
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_gaussian_and_symmetry_trends() {
    let mut prev = f64::INFINITY;
    let mut lines = Vec::new();
    for &omega0 in &[10.0, 100.0, 1000.0] {
        let rp = ReducedParams::from_omega0(0.05, 4.0, 1.0, omega0).unwrap();
        let ann = RadialProblem::giant_vortex_annulus(rp).unwrap();
        let grid = ann.default_grid().unwrap();
        let gv = minimize_radial(&ann, &grid, None).unwrap();
        let dev = check_gaussian_closeness(&gv, &rp);
        assert!(dev < prev, "Gaussian deviation not strictly decreasing at Omega0 = {omega0}");
        prev = dev;
        // symmetric reference on the same nodes (flat measure)
        let symp = RadialProblem::symmetric(rp).unwrap();
        let sgrid = RadialGrid::uniform_line(grid.bounds.0, grid.bounds.1, grid.len()).unwrap();
        let sym = minimize_radial(&symp, &sgrid, None).unwrap();
        let sup_sym = check_symmetry_closeness(&gv, &sym).unwrap();
        let sup_gauss = gaussian_sup_deviation(&gv, &rp);
        assert!(
            sup_sym < sup_gauss,
            "Omega0 = {omega0}: sym dev {sup_sym} not below Gaussian dev {sup_gauss}"
        );
        lines.push(format!(
            "Omega0={omega0}: gauss-closeness {dev:.3e}, sup|g-gsym| {sup_sym:.3e} < gauss sup {sup_gauss:.3e}"
        ));
    }
    println!("criterion 4: PASS - {}", lines.join("; "));
}

// ---------------------------------------------------------------------------
// criterion 5: energy-decoupling identity on random fields
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_energy_decoupling_identity() {
    let rp = ReducedParams::omega_frame(0.2, 4.0, 1.0, 2.0).unwrap();
    let mut cfg = GPConfig::default_for(&rp).unwrap();
    cfg.truncation_radius = 1.6;
    cfg.points_per_scale = 8.0; // 129 x 129
    assert!(cfg.grid_side() >= 128, "grid {} below 128^2", cfg.grid_side());
    let problem = RadialProblem::ground(rp);
    let g0 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
    let base = field_from_radial(&g0, &cfg, 0).unwrap();
    // deterministic LCG for mode parameters
    let mut state = 0x5bd1e995u64;
    let mut rand = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let mut f = base.clone();
        let modes: Vec<(f64, f64, f64, f64)> = (0..5)
            .map(|_| {
                (rand() * 6.0 - 3.0, rand() * 6.0 - 3.0, rand(), rand() * 2.0 * PI)
            })
            .collect();
        for j in 0..f.ny {
            for i in 0..f.nx {
                let (x, y) = (f.x(i), f.y(j));
                let mut m = Complex64::new(1.0, 0.0);
                for &(kx, ky, amp, ph) in &modes {
                    m += Complex64::from_polar(0.5 * amp, kx * x + ky * y + ph);
                }
                let p = f.idx(i, j);
                f.values[p] *= m;
            }
        }
        f.normalize().unwrap();
        let rep = decouple_energy(&f, &g0, &cfg).unwrap();
        let tol = 1e-6 * rep.e_gp.abs() + rep.budget;
        assert!(
            rep.identity_gap <= tol,
            "trial {trial}: gap {:.3e} above tolerance {:.3e}",
            rep.identity_gap,
            tol
        );
        worst = worst.max(rep.identity_gap / tol);
    }
    println!("criterion 5: PASS - 20 random fields, worst gap/tolerance = {worst:.3}");
}

// ---------------------------------------------------------------------------
// criterion 6: hole transition across Omega_c
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_hole_transition() {
    // The unquantifiable "smaller than any power" depletion is proxied at desk
    // scale by a strongly-depleted threshold: 2e-3 of the peak density.
    const HOLE_THR: f64 = 2e-3;
    let eps = 0.1;
    let oc = big_omega_c(eps, 4.0, 1.0);
    let mut lines = Vec::new();
    for &(factor, expect_hole) in &[(0.6, false), (0.85, false), (1.6, true), (2.0, true)] {
        let rp = ReducedParams::big_omega_frame(eps, 4.0, 1.0, factor * oc).unwrap();
        let knobs = SolverKnobs {
            init: InitKind::Lattice,
            tol_residual: 1e-3,
            max_iters: 30_000,
            ..Default::default()
        };
        let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
        let out = gp2d::minimize(&seed, &cfg).unwrap();
        let hole = detect_hole(&out.psi, HOLE_THR);
        if expect_hole {
            assert!(hole > 0.1, "Omega = {factor} Omega_c: hole {hole} not > 0.1");
        } else {
            assert!(hole == 0.0, "Omega = {factor} Omega_c: spurious hole {hole}");
        }
        lines.push(format!("{factor} Omega_c -> hole {hole:.3}"));
    }
    println!("criterion 6: PASS - {}", lines.join(", "));
}

// ---------------------------------------------------------------------------
// criteria 7 + 8: lattice-regime uniformity and energy (shared solve)
// ---------------------------------------------------------------------------

struct LatticeRun {
    out: gp2d::MinimizeOutcome,
    rp: ReducedParams,
    e_tf: f64,
}

fn lattice_run() -> &'static LatticeRun {
    static RUN: OnceLock<LatticeRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let big = 3.0 / EPS_LATTICE; // eps * Omega = 3
        let rp = ReducedParams::big_omega_frame(EPS_LATTICE, 4.0, 1.0, big).unwrap();
        let knobs = SolverKnobs {
            init: InitKind::Lattice,
            tol_residual: 5e-4,
            max_iters: 40_000,
            points_per_scale: 6.0,
            ..Default::default()
        };
        let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
        assert!(cfg.grid_side() >= 384, "criterion 7 requires a grid of at least 384^2");
        let out = gp2d::minimize(&seed, &cfg).unwrap();
        let e_tf = tf_energy(&tf_profile(&rp).unwrap());
        LatticeRun { out, rp, e_tf }
    })
}

#[test]
fn criterion_07_vortex_lattice_uniformity() {
    let run = lattice_run();
    let tf = tf_profile(&run.rp).unwrap();
    let region = build_region(RegionKind::RBulk, &run.rp, Some(&tf)).unwrap();
    let envelope = |r: f64| tf.density(r);
    let zeros = find_vortex_cells(&run.out.psi, Some(&envelope));
    // quarter sectors offset by an angle incommensurate with the seed
    // lattice's mirror axes, so the two counts are genuinely independent
    let a0 = 0.35;
    let q1 = AnnularSector {
        x_lo: region.x_lo,
        x_hi: region.x_hi,
        theta0: a0,
        theta1: a0 + 0.5 * PI,
    };
    let q2 = AnnularSector {
        x_lo: region.x_lo,
        x_hi: region.x_hi,
        theta0: a0 + 0.5 * PI,
        theta1: a0 + PI,
    };
    let u1 = uniformity_ratio(&zeros, &q1, &run.rp);
    let u2 = uniformity_ratio(&zeros, &q2, &run.rp);
    for (name, u) in [("Q1", &u1), ("Q2", &u2)] {
        assert!(
            (0.7..=1.3).contains(&u.ratio),
            "{name} uniformity ratio {} outside [0.7, 1.3]",
            u.ratio
        );
    }
    let mutual = (u1.ratio - u2.ratio).abs() / u1.ratio.max(u2.ratio);
    assert!(mutual <= 0.25, "quarter ratios differ by {:.0}%", 100.0 * mutual);
    println!(
        "criterion 7: PASS - quarter ratios {:.3} / {:.3} (mutual {:.1}%)",
        u1.ratio,
        u2.ratio,
        100.0 * mutual
    );
}

#[test]
fn criterion_08_lattice_regime_energy() {
    let run = lattice_run();
    let big = run.rp.speed;
    let predicted = big * (run.rp.eps.powi(4) * big).ln().abs() / 6.0;
    let measured = run.out.energy - run.e_tf;
    let factor = measured / predicted;
    assert!(
        (0.5..=2.0).contains(&factor),
        "E_gp - E_tf = {measured:.3} vs (1/6) Omega |log(eps^4 Omega)| = {predicted:.3}: factor {factor:.3}"
    );
    println!(
        "criterion 8: PASS - E_gp - E_tf = {measured:.2}, leading-order {predicted:.2}, factor {factor:.3}"
    );
}

// ---------------------------------------------------------------------------
// criteria 9 + 10: giant-vortex regime (shared ladder)
// ---------------------------------------------------------------------------

struct GiantVortexRun {
    omega0: f64,
    rp: ReducedParams,
    psi: gp2d::ComplexField2D,
    bulk_vortices: usize,
    gv: RadialProfile,
}

/// Relaxes the intruder-seeded giant-vortex flow in chunks until the bulk
/// annulus is vortex-free (or the budget runs out) and returns the ladder's
/// first vortex-free point.
fn giant_vortex_run() -> &'static GiantVortexRun {
    static RUN: OnceLock<GiantVortexRun> = OnceLock::new();
    RUN.get_or_init(|| {
        for &omega0 in &[1.0, 4.0] {
            let rp = ReducedParams::from_omega0(EPS_GV, 4.0, 1.0, omega0).unwrap();
            let knobs = SolverKnobs {
                init: InitKind::Giant,
                tol_residual: 5e-4,
                max_iters: 8_000,
                ..Default::default()
            };
            let (seed, cfg) = prepare_2d(&rp, &knobs).unwrap();
            let region = build_region(RegionKind::ABulk, &rp, None).unwrap();
            let mut state = seed;
            let mut result = None;
            for _chunk in 0..6 {
                let out = gp2d::relax(&state, &cfg).unwrap();
                state = out.psi.clone();
                let zeros = find_vortex_cells(&state, None);
                let sector = region.sector();
                let inside = zeros.iter().filter(|z| sector.contains(z.x, z.y)).count();
                if inside == 0 && out.residual <= 2e-3 {
                    // intruders expelled; one polishing pass on the clean state
                    let polished = gp2d::relax(&state, &cfg).unwrap();
                    result = Some((polished, 0usize));
                    break;
                }
                if out.residual <= cfg.tol_residual {
                    result = Some((out, inside));
                    break;
                }
            }
            if let Some((out, inside)) = result {
                if inside == 0 {
                    let problem = RadialProblem::giant_vortex(rp).unwrap();
                    let gv =
                        minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
                    return GiantVortexRun {
                        omega0,
                        rp,
                        psi: out.psi,
                        bulk_vortices: 0,
                        gv,
                    };
                }
            }
        }
        panic!("no vortex-free bulk found on the Omega0 ladder");
    })
}

#[test]
fn criterion_09_giant_vortex_regime() {
    let run = giant_vortex_run();
    assert_eq!(run.bulk_vortices, 0);
    let big = run.rp.speed;
    let degree = degree_on_circle(&run.psi, 1.0).unwrap();
    assert!(
        (degree as f64 - big).abs() <= 0.05 * big,
        "degree {degree} vs Omega {big}"
    );
    // min |psi| / g_gv over the bulk annulus
    let region = build_region(RegionKind::ABulk, &run.rp, None).unwrap();
    let mut min_ratio = f64::INFINITY;
    for j in 0..run.psi.ny {
        for i in 0..run.psi.nx {
            let r = (run.psi.x(i).powi(2) + run.psi.y(j).powi(2)).sqrt();
            if r >= region.x_lo && r <= region.x_hi {
                let g = run.gv.interp(r);
                if g > 1e-6 * run.gv.sup() {
                    min_ratio = min_ratio.min(run.psi.values[run.psi.idx(i, j)].norm() / g);
                }
            }
        }
    }
    assert!(min_ratio >= 0.9, "min |psi|/g_gv = {min_ratio} below 0.9");
    println!(
        "criterion 9: PASS - vortex-free bulk at Omega0 = {}, degree(R=1) = {degree} (Omega = {big}), min |psi|/g_gv = {min_ratio:.3}",
        run.omega0
    );
}

/// Independent energy oracle for the finite-difference check: the energy of a
/// three-mode state `f e^{in t} + t(c+ e^{i(n+d)t} + c- e^{i(n-d)t})`,
/// normalized, with the angular integrals done exactly (the quartic term's
/// angular average is `P^2 + Q1^2/2 + Q2^2/2`).
#[allow(clippy::too_many_arguments)]
fn energy_of_modes(
    p: &RadialProfile,
    rp: &ReducedParams,
    n: i64,
    d: i64,
    t: f64,
    cp: &[f64],
    cm: &[f64],
) -> f64 {
    let g = &p.grid;
    let m = g.len();
    let h = g.spacing();
    let e2inv = 1.0 / (rp.eps * rp.eps);
    let norm2: f64 = (0..m)
        .map(|i| g.weights[i] * (p.values[i].powi(2) + t * t * (cp[i].powi(2) + cm[i].powi(2))))
        .sum();
    let mut quad = 0.0;
    for (k_mode, vals) in [(n, None), (n + d, Some(cp)), (n - d, Some(cm))] {
        let arr: Vec<f64> = match vals {
            None => p.values.clone(),
            Some(c) => c.iter().map(|v| v * t).collect(),
        };
        for i in 1..m {
            let xm = 0.5 * (g.nodes[i - 1] + g.nodes[i]);
            let dv = (arr[i] - arr[i - 1]) / h;
            quad += 2.0 * PI * xm * h * 0.5 * dv * dv;
        }
        for i in 0..m {
            let x = g.nodes[i];
            if x <= 0.0 {
                continue;
            }
            let b = k_mode as f64 / x - rp.speed * x;
            let w = eval_w(x, rp.s).unwrap();
            quad += g.weights[i]
                * (0.5 * b * b + rp.gamma * rp.speed * rp.speed * w)
                * arr[i]
                * arr[i];
        }
    }
    let mut quart = 0.0;
    for i in 0..m {
        let f = p.values[i];
        let ap = t * cp[i];
        let am = t * cm[i];
        let pp = f * f + ap * ap + am * am;
        let q1 = 2.0 * f * (ap + am);
        let q2 = 2.0 * ap * am;
        quart += g.weights[i] * e2inv * (pp * pp + 0.5 * q1 * q1 + 0.5 * q2 * q2);
    }
    quad / norm2 + quart / (norm2 * norm2)
}

#[test]
fn criterion_10_symmetry_breaking_second_variation() {
    let run = giant_vortex_run();
    let rp = run.rp;
    let omega = rp.speed;
    // locate the minimizing winding near Omega
    let base = omega.round() as i64;
    let mut nbar = base;
    let mut best = f64::INFINITY;
    for offset in [-8i64, -4, 0, 4, 8] {
        let p = symmetric_vortex_profile(base + offset, &rp, None).unwrap();
        if p.energy < best {
            best = p.energy;
            nbar = base + offset;
        }
    }
    let p = symmetric_vortex_profile(nbar, &rp, None).unwrap();
    // FD-oracle match at t = 1e-4 (unit-normalized test function; the
    // symmetric second difference equals twice the quadratic form)
    let t = 1e-4;
    let mut worst_match = 0.0f64;
    for d in [1i64, 2] {
        let (cp, cm) = symmetry_test_functions(&p, nbar, d);
        let xi_norm2: f64 = (0..p.grid.len())
            .map(|i| p.grid.weights[i] * (cp[i].powi(2) + cm[i].powi(2)))
            .sum();
        let s = xi_norm2.sqrt();
        let cpn: Vec<f64> = cp.iter().map(|v| v / s).collect();
        let cmn: Vec<f64> = cm.iter().map(|v| v / s).collect();
        let q_normalized = q_form(&p, nbar, d, &rp, &cpn, &cmn);
        let e0 = energy_of_modes(&p, &rp, nbar, d, 0.0, &cpn, &cmn);
        assert!(
            (e0 - p.energy).abs() <= 1e-9 * p.energy.abs(),
            "oracle base energy {e0} vs solver {}",
            p.energy
        );
        let fd = 0.5 * (energy_of_modes(&p, &rp, nbar, d, t, &cpn, &cmn)
            + energy_of_modes(&p, &rp, nbar, d, -t, &cpn, &cmn)
            - 2.0 * e0)
            / (t * t);
        let rel = (q_normalized - fd).abs() / fd.abs().max(1e-300);
        assert!(rel <= 0.05, "d = {d}: Q {q_normalized} vs FD oracle {fd} ({rel:.2e})");
        worst_match = worst_match.max(rel);
    }
    // sign scan over d = 1..8
    let qs: Vec<f64> =
        (1..=8).map(|d| gpvortex::radial::second_variation_q(&p, nbar, d, &rp)).collect();
    let min_q = qs.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "criterion 10: FD-oracle match PASS (worst rel err {worst_match:.2e}); sign clause: min Q over d=1..8 is {min_q:+.3e} at nbar = {nbar}"
    );
    assert!(
        min_q < 0.0,
        "Q_nbar[Xi] is positive for every d in 1..8 (min {min_q:+.3e}); the finite-difference \
         oracle confirms these values, so the negativity expected from the asymptotic theory \
         is not attained at these desk-scale parameters (see the build's decision notes)"
    );
}

// ---------------------------------------------------------------------------
// criterion 11: invariant suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_invariant_suites() {
    // (a) winding integrality on 1e4 random smooth phase fields
    let mut state = 0xfeed5eedu64;
    let mut rand = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let n = 16;
    let mut checked = 0usize;
    for _ in 0..10_000 {
        let (k1, k2, a1, a2, ph) =
            (rand() * 4.0 - 2.0, rand() * 4.0 - 2.0, rand() * 3.0, rand() * 3.0, rand() * 2.0 * PI);
        let mut f = gp2d::ComplexField2D::zeros(n, n, [-1.0, 1.0, -1.0, 1.0]);
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (f.x(i), f.y(j));
                let phase = a1 * (k1 * x + k2 * y).sin() + a2 * (k2 * x - k1 * y).cos() + ph;
                let p = f.idx(i, j);
                f.values[p] = Complex64::from_polar(1.0, phase);
            }
        }
        // raw wrapped sums must be integers to fp accuracy; the API rounds,
        // so verify a plaquette's unrounded accumulation directly
        let i = (rand() * (n - 2) as f64) as usize;
        let j = (rand() * (n - 2) as f64) as usize;
        let corners = [
            f.values[f.idx(i, j)],
            f.values[f.idx(i + 1, j)],
            f.values[f.idx(i + 1, j + 1)],
            f.values[f.idx(i, j + 1)],
        ];
        let mut total = 0.0;
        for k in 0..4 {
            let mut dphi = corners[(k + 1) % 4].arg() - corners[k].arg();
            while dphi > PI {
                dphi -= 2.0 * PI;
            }
            while dphi <= -PI {
                dphi += 2.0 * PI;
            }
            total += dphi;
        }
        let w = total / (2.0 * PI);
        assert!(
            (w - w.round()).abs() < 1e-9,
            "plaquette winding {w} not an integer"
        );
        match plaquette_winding(&f, i, j, 0.0) {
            Winding::Integer(v) => assert_eq!(v, w.round() as i32),
            Winding::Indeterminate => panic!("unit-amplitude field marked indeterminate"),
        }
        checked += 1;
    }
    assert_eq!(checked, 10_000);

    // (b) chemical-potential identity on converged states
    let rp = ReducedParams::from_omega0(EPS_GV, 4.0, 1.0, 1.0).unwrap();
    let problem = RadialProblem::giant_vortex(rp).unwrap();
    let p1 = minimize_radial(&problem, &problem.default_grid().unwrap(), None).unwrap();
    let quartic: f64 = p1
        .grid
        .weights
        .iter()
        .zip(&p1.values)
        .map(|(w, f)| w * f.powi(4))
        .sum::<f64>()
        / (rp.eps * rp.eps);
    assert!(
        (p1.mu - p1.energy - quartic).abs() <= 1e-8 * p1.mu.abs(),
        "radial mu identity violated"
    );
    let run = giant_vortex_run();
    let w = run.psi.hx() * run.psi.hy();
    let p4: f64 = run.psi.values.iter().map(|v| v.norm_sqr().powi(2)).sum::<f64>() * w;
    let knobs = SolverKnobs { init: InitKind::Giant, tol_residual: 5e-4, ..Default::default() };
    let (_, cfg) = prepare_2d(&run.rp, &knobs).unwrap();
    let e2d = gp2d::energy(&run.psi, &cfg).unwrap();
    let mu = gp2d::chemical_potential(&run.psi, &cfg).unwrap();
    let mu_identity = e2d + p4 / (run.rp.eps * run.rp.eps);
    assert!(
        (mu - mu_identity).abs() <= 1e-8 * mu.abs(),
        "2D mu identity: {mu} vs {mu_identity}"
    );

    // (c) |mu_v| <= |grad u|^2 pointwise on the minimizer-derived u
    let sp = run.gv.spline().unwrap();
    let (nx, ny) = (run.psi.nx, run.psi.ny);
    let mut u = vec![Complex64::ZERO; nx * ny];
    let floor = 1e-8 * run.gv.sup() * run.gv.sup();
    for j in 0..ny {
        for i in 0..nx {
            let r = (run.psi.x(i).powi(2) + run.psi.y(j).powi(2)).sqrt();
            let g = sp.eval(r).max(0.0);
            if g * g > floor {
                u[j * nx + i] = run.psi.values[run.psi.idx(i, j)] / g;
            }
        }
    }
    let (muv, grad) = vorticity_and_gradient(&u, nx, ny, run.psi.hx(), run.psi.hy());
    let mut violations = 0usize;
    for p in 0..nx * ny {
        if muv[p].abs() > grad[p] + 1e-12 {
            violations += 1;
        }
    }
    assert_eq!(violations, 0, "pointwise vorticity bound violated at {violations} plaquettes");
    println!(
        "criterion 11: PASS - 1e4 winding integrality checks, mu identities to 1e-8, vorticity bound pointwise"
    );
}
