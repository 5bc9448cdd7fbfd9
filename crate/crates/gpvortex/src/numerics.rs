//! Small shared numerical kernels: tridiagonal solves, bisection, adaptive
//! Simpson quadrature and a natural cubic spline.

use crate::error::{GpError, Result};

/// Solves a tridiagonal system in place with the Thomas algorithm.
///
/// `lower[i]` multiplies x[i-1] in row i (lower[0] unused), `diag[i]` x[i],
/// `upper[i]` x[i+1] (upper[n-1] unused). `rhs` is overwritten with the solution.
pub fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
    if n == 0 {
        return;
    }
    let mut cp = vec![0.0; n];
    let mut dp = diag[0];
    cp[0] = upper[0] / dp;
    rhs[0] /= dp;
    for i in 1..n {
        dp = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / dp;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / dp;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= cp[i] * rhs[i + 1];
    }
}

/// Same elimination applied independently to two right-hand sides
/// (used for the real and imaginary parts of complex fields).
pub fn thomas_solve2(lower: &[f64], diag: &[f64], upper: &[f64], re: &mut [f64], im: &mut [f64]) {
    let n = diag.len();
    if n == 0 {
        return;
    }
    let mut cp = vec![0.0; n];
    let mut dp = diag[0];
    cp[0] = upper[0] / dp;
    re[0] /= dp;
    im[0] /= dp;
    for i in 1..n {
        dp = diag[i] - lower[i] * cp[i - 1];
        cp[i] = upper[i] / dp;
        let l = lower[i];
        re[i] = (re[i] - l * re[i - 1]) / dp;
        im[i] = (im[i] - l * im[i - 1]) / dp;
    }
    for i in (0..n - 1).rev() {
        re[i] -= cp[i] * re[i + 1];
        im[i] -= cp[i] * im[i + 1];
    }
}

/// Bisection on a monotone sign change. `f(lo)` and `f(hi)` must bracket a root.
pub fn bisect(mut lo: f64, mut hi: f64, tol_x: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(GpError::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo:.6e}, f(hi)={fhi:.6e}"
        )));
    }
    let mut fl = flo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fl.signum() {
            lo = mid;
            fl = fm;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= tol_x * (1.0 + mid.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    // Fixed pre-split so localized integrands are not missed by the initial
    // three-point estimate.
    let panels = 16;
    let mut total = 0.0;
    for p in 0..panels {
        let pa = a + (b - a) * p as f64 / panels as f64;
        let pb = a + (b - a) * (p + 1) as f64 / panels as f64;
        let fa = f(pa);
        let fb = f(pb);
        let fm = f(0.5 * (pa + pb));
        let whole = simpson(pa, fa, pb, fb, fm);
        total += recurse(f, pa, fa, pb, fb, fm, whole, tol / panels as f64, 36);
    }
    total
}

/// Natural cubic spline through (x_i, y_i) with strictly increasing nodes.
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>, // second derivatives at nodes
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(GpError::domain("spline needs >= 3 matching nodes".to_string()));
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![1.0; n];
        let mut upper = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            lower[i] = h0 / 6.0;
            diag[i] = (h0 + h1) / 3.0;
            upper[i] = h1 / 6.0;
            rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        }
        thomas_solve(&lower, &diag, &upper, &mut rhs);
        rhs[0] = 0.0;
        rhs[n - 1] = 0.0;
        Ok(CubicSpline { x: x.to_vec(), y: y.to_vec(), m: rhs })
    }

    fn segment(&self, xv: f64) -> usize {
        match self.x.binary_search_by(|p| p.partial_cmp(&xv).unwrap()) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.clamp(1, self.x.len() - 1) - 1,
        }
    }

    /// Evaluates the spline; clamps to the boundary values outside the range.
    pub fn eval(&self, xv: f64) -> f64 {
        let n = self.x.len();
        if xv <= self.x[0] {
            return self.y[0];
        }
        if xv >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.segment(xv);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - xv) / h;
        let b = (xv - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    /// Derivative of the spline; zero outside the range.
    pub fn eval_deriv(&self, xv: f64) -> f64 {
        let n = self.x.len();
        if xv <= self.x[0] || xv >= self.x[n - 1] {
            return 0.0;
        }
        let i = self.segment(xv);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - xv) / h;
        let b = (xv - self.x[i]) / h;
        (self.y[i + 1] - self.y[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_reproduces_dense_solution() {
        // -u'' = 1 on [0,1], u(0)=u(1)=0 -> u = x(1-x)/2
        let n = 64;
        let h = 1.0 / (n as f64 + 1.0);
        let lower = vec![-1.0; n];
        let diag = vec![2.0; n];
        let upper = vec![-1.0; n];
        let mut rhs = vec![h * h; n];
        thomas_solve(&lower, &diag, &upper, &mut rhs);
        for i in 0..n {
            let x = (i as f64 + 1.0) * h;
            assert!((rhs[i] - 0.5 * x * (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn simpson_matches_closed_forms() {
        let v = integrate(&|x: f64| x.powi(4), 0.0, 2.0, 1e-12);
        assert!((v - 32.0 / 5.0).abs() < 1e-10);
        let v = integrate(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(0.0, 2.0, 1e-14, |x| x * x - 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spline_interpolates_smooth_function() {
        let n = 200;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 3.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| (x * 1.7).sin()).collect();
        let sp = CubicSpline::new(&xs, &ys).unwrap();
        for k in 0..50 {
            let x = 0.05 + k as f64 * 0.058;
            assert!((sp.eval(x) - (x * 1.7).sin()).abs() < 5e-7);
            assert!((sp.eval_deriv(x) - 1.7 * (x * 1.7).cos()).abs() < 5e-5);
        }
    }
}
