use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::section::{Family, SectionFamily};

use super::{symbol_fn, symbol_max, theta_grid, SymbolKind};

/// Rounding slack when counting bound violations.
pub const VIOLATION_SLACK: f64 = 1e-12;

/// Step of the centered differences reported at θ = 0.
const ZERO_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoundStatus {
    Proved,
    Conjectured,
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundCheck {
    pub symbol: String,
    pub status: BoundStatus,
    /// Bound for h; for f the bound is this constant times 2 − 2cos θ.
    pub constant: f64,
    pub violations: usize,
}

/// f at θ = 0 together with its first and second centered differences.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZeroStructure {
    pub value: f64,
    pub first_difference: f64,
    pub second_difference: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub p: usize,
    pub family: Family,
    pub phase: f64,
    pub grid_size: usize,
    pub max_h: f64,
    pub min_h: f64,
    pub max_f: Option<f64>,
    pub min_f: Option<f64>,
    pub upper_violations: usize,
    pub lower_violations: usize,
    pub lower_status: BoundStatus,
    pub lower_checks: Vec<LowerBoundCheck>,
    pub decay_ratio: Option<f64>,
    pub zero_structure: Option<ZeroStructure>,
}

/// Family constant C in h_p ≥ C (2/π)^{p−1}.
fn lower_constant(family: SectionFamily) -> f64 {
    let a = family.phase;
    match family.kind {
        Family::Polynomial => (2.0 / PI).powi(2),
        Family::Hyperbolic => a * a / (a.cosh() - 1.0) * (a.cosh() + 1.0) / (a * a + PI * PI),
        Family::Trigonometric => a * a / (1.0 - a.cos()) * (a.cos() + 1.0) / (PI * PI - a * a),
    }
}

pub fn bounds_report(p: usize, family: SectionFamily, grid_size: usize) -> Result<BoundReport> {
    if grid_size < 64 {
        return Err(Error::Usage(format!("grid size must be at least 64, got {grid_size}")));
    }
    let grid = theta_grid(grid_size);
    let h = symbol_fn(SymbolKind::H, p, family)?;
    let f = if p >= 2 { Some(symbol_fn(SymbolKind::F, p, family)?) } else { None };
    let hv: Vec<f64> = grid.iter().map(|&t| h.eval(t)).collect();
    let fv: Option<Vec<f64>> = f.as_ref().map(|f| grid.iter().map(|&t| f.eval(t)).collect());
    let two_minus = |t: f64| 2.0 - 2.0 * t.cos();

    let mut upper_violations = 0;
    if p >= 2 {
        upper_violations += hv.iter().filter(|&&v| v > 1.0 + VIOLATION_SLACK).count();
    }
    if let (true, Some(fv)) = (p >= 4, &fv) {
        upper_violations += grid
            .iter()
            .zip(fv)
            .filter(|(&t, &v)| v > two_minus(t) + VIOLATION_SLACK)
            .count();
    }

    let status = match family.kind {
        Family::Polynomial => BoundStatus::Proved,
        Family::Hyperbolic if p % 2 == 1 => BoundStatus::Proved,
        _ => BoundStatus::Conjectured,
    };
    let c = lower_constant(family);
    let mut lower_checks = Vec::new();
    let h_bound = c * (2.0 / PI).powi(p as i32 - 1);
    lower_checks.push(LowerBoundCheck {
        symbol: "h".into(),
        status,
        constant: h_bound,
        violations: hv.iter().filter(|&&v| v < h_bound - VIOLATION_SLACK).count(),
    });
    if let (true, Some(fv)) = (p >= 3, &fv) {
        let f_const = c * (2.0 / PI).powi(p as i32 - 3);
        lower_checks.push(LowerBoundCheck {
            symbol: "f".into(),
            status,
            constant: f_const,
            violations: grid
                .iter()
                .zip(fv)
                .filter(|(&t, &v)| v < f_const * two_minus(t) - VIOLATION_SLACK)
                .count(),
        });
    }
    let lower_violations = lower_checks.iter().map(|c| c.violations).sum();

    let zero_structure = f.as_ref().map(|f| {
        let (m, z, pl) = (f.eval(-ZERO_STEP), f.eval(0.0), f.eval(ZERO_STEP));
        ZeroStructure {
            value: z,
            first_difference: (pl - m) / (2.0 * ZERO_STEP),
            second_difference: (pl - 2.0 * z + m) / (ZERO_STEP * ZERO_STEP),
            step: ZERO_STEP,
        }
    });
    let max_f = f.as_ref().map(symbol_max);
    let fold_min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BoundReport {
        p,
        family: family.kind,
        phase: family.phase,
        grid_size,
        max_h: symbol_max(&h),
        min_h: fold_min(&hv),
        max_f,
        min_f: fv.as_deref().map(fold_min),
        upper_violations,
        lower_violations,
        lower_status: status,
        lower_checks,
        decay_ratio: match (&f, max_f) {
            (Some(f), Some(m)) => Some(f.eval(PI) / m),
            _ => None,
        },
        zero_structure,
    })
}
