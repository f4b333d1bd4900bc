//! Spectral symbols h_p, g_p, f_p of the mass, advection and diffusion
//! collocation matrices.

mod bounds;
mod closed_form;

pub use bounds::{bounds_report, BoundReport, BoundStatus, ZeroStructure};
pub use closed_form::symbol_closed_form;

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

use crate::cardinal::{cardinal_spline, phi1_amplitude, sinc};
use crate::error::{Error, Result};
use crate::section::SectionFamily;

/// Default number of θ samples on [−π, π].
pub const DEFAULT_GRID: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SymbolKind {
    H,
    G,
    F,
}

impl SymbolKind {
    pub fn parse(s: &str) -> Result<SymbolKind> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(SymbolKind::H),
            "g" => Ok(SymbolKind::G),
            "f" => Ok(SymbolKind::F),
            other => Err(Error::Usage(format!("unknown symbol kind '{other}'"))),
        }
    }

    fn min_degree(self) -> usize {
        match self {
            SymbolKind::H => 1,
            SymbolKind::G | SymbolKind::F => 2,
        }
    }

    fn min_series_degree(self) -> usize {
        match self {
            SymbolKind::H => 3,
            SymbolKind::G => 4,
            SymbolKind::F => 5,
        }
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::H => "h",
            SymbolKind::G => "g",
            SymbolKind::F => "f",
        })
    }
}

/// A symbol as a finite trigonometric sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFn {
    pub kind: SymbolKind,
    pub p: usize,
    pub family: SectionFamily,
    /// Samples of φ_p, φ_p' or φ_p'' at (p+1)/2 − k, k = 0..=⌊p/2⌋.
    samples: Vec<f64>,
}

pub fn symbol_fn(kind: SymbolKind, p: usize, family: SectionFamily) -> Result<SymbolFn> {
    if p < kind.min_degree() {
        return Err(Error::Usage(format!(
            "symbol {kind} needs degree at least {}, got {p}",
            kind.min_degree()
        )));
    }
    let cs = cardinal_spline(family, p)?;
    let f = match kind {
        SymbolKind::H => cs.pw().clone(),
        SymbolKind::G => cs.pw().derivative(),
        SymbolKind::F => cs.pw().nth_derivative(2),
    };
    let c = (p + 1) as f64 / 2.0;
    let samples = (0..=p / 2).map(|k| f.eval(c - k as f64)).collect();
    Ok(SymbolFn { kind, p, family, samples })
}

impl SymbolFn {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Largest |k| with a non-zero Fourier coefficient.
    pub fn bandwidth(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let s = &self.samples;
        match self.kind {
            SymbolKind::H => {
                s[0] + 2.0 * (1..s.len()).map(|k| s[k] * (k as f64 * theta).cos()).sum::<f64>()
            }
            SymbolKind::G => -2.0 * (1..s.len()).map(|k| s[k] * (k as f64 * theta).sin()).sum::<f64>(),
            SymbolKind::F => {
                -s[0] - 2.0 * (1..s.len()).map(|k| s[k] * (k as f64 * theta).cos()).sum::<f64>()
            }
        }
    }

    /// Fourier coefficients ĉ_k, k = −b..=b, of the symbol, so that
    /// symbol(θ) = Σ ĉ_k e^{ikθ}. Index `k + b` holds ĉ_k.
    pub fn fourier_coefficients(&self) -> Vec<Complex64> {
        let b = self.bandwidth() as isize;
        (-b..=b)
            .map(|k| {
                let s = self.samples[k.unsigned_abs()];
                match self.kind {
                    SymbolKind::H => Complex64::new(s, 0.0),
                    SymbolKind::F => Complex64::new(-s, 0.0),
                    SymbolKind::G if k == 0 => Complex64::new(0.0, 0.0),
                    SymbolKind::G => Complex64::new(0.0, s * (k.signum() as f64)),
                }
            })
            .collect()
    }

    /// Values on `n` equispaced points of [−π, π], endpoints included.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        theta_grid(n).into_iter().map(|t| (t, self.eval(t))).collect()
    }
}

/// `n` equispaced points on [−π, π], endpoints included.
pub fn theta_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / (n - 1) as f64).collect()
}

/// Partial sum over |k| ≤ `trunc` of the Fourier-series representation.
pub fn symbol_series(
    kind: SymbolKind,
    p: usize,
    family: SectionFamily,
    theta: f64,
    trunc: usize,
) -> Result<f64> {
    if p < kind.min_series_degree() {
        return Err(Error::Usage(format!(
            "series form of {kind} needs degree at least {}; use the finite sum",
            kind.min_series_degree()
        )));
    }
    if trunc == 0 {
        return Err(Error::Usage("series truncation must be at least 1".into()));
    }
    family.check_width(1.0)?;
    let k = trunc as i64;
    let mut sum = 0.0;
    // Smallest terms first.
    for j in (0..=k).rev() {
        for kk in if j == 0 { vec![0] } else { vec![j, -j] } {
            let d = theta / 2.0 + kk as f64 * PI;
            let amp = phi1_amplitude(family, theta + 2.0 * kk as f64 * PI);
            let r = sinc(d);
            let s = d.sin();
            sum += match kind {
                SymbolKind::H => amp * r.powi(p as i32 - 1),
                SymbolKind::G => -2.0 * amp * r.powi(p as i32 - 2) * s,
                SymbolKind::F => 4.0 * amp * r.powi(p as i32 - 3) * s * s,
            };
        }
    }
    Ok(sum)
}

/// max over [−π, π]: a grid scan followed by golden-section refinement of
/// the best bracket.
pub fn symbol_max(s: &SymbolFn) -> f64 {
    let n = DEFAULT_GRID;
    let grid = theta_grid(n);
    let (best, _) = grid
        .iter()
        .enumerate()
        .map(|(j, &t)| (j, s.eval(t)))
        .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(n - 1)];
    let refined = golden_max(|t| s.eval(t), lo, hi);
    s.eval(grid[best]).max(refined)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

/// f_p(π) / max f_p.
pub fn decay_ratio(p: usize, family: SectionFamily) -> Result<f64> {
    let f = symbol_fn(SymbolKind::F, p, family)?;
    Ok(f.eval(PI) / symbol_max(&f))
}
