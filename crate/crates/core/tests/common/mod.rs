//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use gauss_quad::GaussLegendre;
use std::num::NonZeroUsize;

/// Composite Gauss–Legendre rule: `panels` equal panels of `nodes` points.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, nodes: usize) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes > 0"));
    let h = (b - a) / panels as f64;
    (0..panels).map(|k| rule.integrate(a + k as f64 * h, a + (k + 1) as f64 * h, &f)).sum()
}

/// ∫ over [a, b] with extra panel boundaries at every integer, so piecewise
/// functions with integer breakpoints are integrated piece by piece.
pub fn integrate_integer_pieces(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes > 0"));
    let mut cuts = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        if k > a {
            cuts.push(k);
        }
        k += 1.0;
    }
    cuts.push(b);
    cuts.windows(2).map(|w| rule.integrate(w[0], w[1], &f)).sum()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_slope(&lx, &ly)
}

pub fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

/// Centered finite difference.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
