use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Lattice points generated per requested sample before quantile thinning.
pub const OVERSAMPLE: usize = 16;

/// Sample count used for the reference moments and the symbol range.
pub fn reference_count(d_n: usize) -> usize {
    (64 * d_n).clamp(1 << 16, 1 << 20)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OutlierCount {
    pub eps: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionReport {
    pub d_n: usize,
    pub mean_abs_discrepancy: f64,
    /// r = 1..4.
    pub moment_errors: [f64; 4],
    pub max_imag: f64,
    pub symbol_min: f64,
    pub symbol_max: f64,
    pub outliers: Vec<OutlierCount>,
}

/// Compares eigenvalues with a distribution function. `sampler(count)`
/// must return `count` sorted samples; it is called once with the matrix
/// order and once with [`reference_count`] for moments and range.
pub fn weyl_report<S>(eigs: &[Complex64], sampler: S, eps_list: &[f64]) -> Result<DistributionReport>
where
    S: Fn(usize) -> Result<Vec<f64>>,
{
    let d_n = eigs.len();
    if d_n == 0 {
        return Err(Error::Usage("no eigenvalues".into()));
    }
    let samples = sampler(d_n)?;
    let reference = sampler(reference_count(d_n))?;
    weyl_report_from(eigs, &samples, &reference, eps_list)
}

/// [`weyl_report`] with the samples supplied directly.
pub fn weyl_report_from(
    eigs: &[Complex64],
    samples: &[f64],
    reference: &[f64],
    eps_list: &[f64],
) -> Result<DistributionReport> {
    let d_n = eigs.len();
    if samples.len() != d_n {
        return Err(Error::Usage(format!("{} eigenvalues but {} symbol samples", d_n, samples.len())));
    }
    if reference.is_empty() {
        return Err(Error::Usage("empty reference sample".into()));
    }
    let mut re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean_abs_discrepancy = re.iter().zip(&sorted).map(|(a, b)| (a - b).abs()).sum::<f64>() / d_n as f64;

    let mut moment_errors = [0.0; 4];
    for (r, slot) in moment_errors.iter_mut().enumerate() {
        let pow = r as i32 + 1;
        let eig_mean = eigs.iter().map(|z| z.powi(pow)).sum::<Complex64>() / d_n as f64;
        let ref_mean = reference.iter().map(|v| v.powi(pow)).sum::<f64>() / reference.len() as f64;
        *slot = (eig_mean - ref_mean).norm();
    }
    let max_imag = eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let lo = reference.iter().chain(samples).copied().fold(f64::INFINITY, f64::min);
    let hi = reference.iter().chain(samples).copied().fold(f64::NEG_INFINITY, f64::max);
    let outliers = eps_list
        .iter()
        .map(|&eps| OutlierCount {
            eps,
            count: eigs
                .iter()
                .filter(|z| z.re < lo - eps || z.re > hi + eps || z.im.abs() > eps)
                .count(),
        })
        .collect();
    let report = DistributionReport {
        d_n,
        mean_abs_discrepancy,
        moment_errors,
        max_imag,
        symbol_min: lo,
        symbol_max: hi,
        outliers,
    };
    if !(report.mean_abs_discrepancy.is_finite() && report.moment_errors.iter().all(|v| v.is_finite())) {
        return Err(Error::Numerical("distribution report has non-finite entries".into()));
    }
    Ok(report)
}

/// `count` evenly spaced quantiles of an ascending list.
pub fn quantiles(sorted: &[f64], count: usize) -> Vec<f64> {
    let m = sorted.len();
    (0..count)
        .map(|j| sorted[(((j as f64 + 0.5) * m as f64 / count as f64) as usize).min(m - 1)])
        .collect()
}

/// Sorted samples of F(x, θ) for `count` quantiles of the uniform
/// distribution on [0,1]×[0,π]. The lattice is a midpoint grid with about
/// `OVERSAMPLE·count` nodes, near-square in (x, θ).
pub fn lattice_samples_1d<F>(f: F, count: usize) -> Result<Vec<f64>>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    if count == 0 {
        return Ok(Vec::new());
    }
    let total = if count >= 1 << 16 { count } else { count * OVERSAMPLE };
    let nx = (total as f64).sqrt().ceil() as usize;
    let nt = total.div_ceil(nx);
    let mut values = (0..nx * nt)
        .into_par_iter()
        .map(|k| {
            let x = ((k / nt) as f64 + 0.5) / nx as f64;
            let t = ((k % nt) as f64 + 0.5) * std::f64::consts::PI / nt as f64;
            f(x, t)
        })
        .collect::<Result<Vec<f64>>>()?;
    values.sort_by(f64::total_cmp);
    Ok(if values.len() == count { values } else { quantiles(&values, count) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs() {
        let s = vec![0.5, 1.0, 2.0];
        let eigs: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let r = weyl_report_from(&eigs, &s, &s, &[0.1]).unwrap();
        assert_eq!(r.mean_abs_discrepancy, 0.0);
        assert!(r.moment_errors.iter().all(|&e| e < 1e-15));
        assert_eq!(r.outliers[0].count, 0);
    }

    #[test]
    fn size_mismatch_is_usage_error() {
        let eigs = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(weyl_report_from(&eigs, &[1.0], &[1.0], &[]), Err(Error::Usage(_))));
    }

    #[test]
    fn outliers_are_monotone_in_eps() {
        let eigs = vec![Complex64::new(-0.5, 0.0), Complex64::new(1.0, 0.3), Complex64::new(4.5, 0.0)];
        let s = [0.0, 1.0, 4.0];
        let r = weyl_report_from(&eigs, &s, &s, &[0.0, 0.2, 0.4, 1.0]).unwrap();
        let c: Vec<usize> = r.outliers.iter().map(|o| o.count).collect();
        assert_eq!(c, vec![3, 3, 2, 0]);
    }

    #[test]
    fn lattice_has_requested_size() {
        let v = lattice_samples_1d(|x, t| Ok(x * (2.0 - 2.0 * t.cos())), 100).unwrap();
        assert_eq!(v.len(), 100);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert!(v[0] >= 0.0 && v[99] <= 4.0);
    }
}
