//! Gauss-Legendre quadrature with the sine substitution used for densities
//! carrying a square-root factor at the endpoints of their support.

use std::f64::consts::FRAC_PI_2;

const PANEL_NODES: usize = 50;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrates `f` over the interval `[lo, hi]` with the substitution
/// `x = c + r sin(u)`: the weight `r cos(u)` absorbs a square-root endpoint
/// singularity of the integrand. `nodes` is the total node budget, split
/// into composite panels.
pub fn integrate_arc(lo: f64, hi: f64, nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let c = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let panels = (nodes / PANEL_NODES).max(1);
    let rule = gauss_legendre(PANEL_NODES.min(nodes.max(8)));
    let width = 2.0 * FRAC_PI_2 / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = -FRAC_PI_2 + p as f64 * width;
        let mid = a + 0.5 * width;
        let half = 0.5 * width;
        for &(t, w) in &rule {
            let u = mid + half * t;
            let x = c + r * u.sin();
            total += w * half * f(x) * r * u.cos();
        }
    }
    total
}
