use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbols::SymbolFn;

/// Fourier coefficients c_k, |k| ≤ b, generating Toeplitz matrices
/// (T)_{jk} = c_{j−k}.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    coeffs: Vec<Complex64>,
}

impl ToeplitzSpec {
    /// `coeffs[k + b]` holds c_k; the length must be odd.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::Usage("coefficient list must have odd length 2b+1".into()));
        }
        Ok(ToeplitzSpec { coeffs })
    }

    /// Real symmetric spec from c_0, c_1, …, c_b.
    pub fn symmetric(half: &[f64]) -> Self {
        let b = half.len() - 1;
        let coeffs = (0..=2 * b)
            .map(|i| Complex64::new(half[(i as isize - b as isize).unsigned_abs()], 0.0))
            .collect();
        ToeplitzSpec { coeffs }
    }

    pub fn from_symbol(s: &SymbolFn) -> Self {
        ToeplitzSpec { coeffs: s.fourier_coefficients() }
    }

    pub fn bandwidth(&self) -> usize {
        self.coeffs.len() / 2
    }

    /// c_k, zero outside the band.
    pub fn coeff(&self, k: isize) -> Complex64 {
        let b = self.bandwidth() as isize;
        if k.abs() > b {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + b) as usize]
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        ToeplitzSpec { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn is_hermitian(&self) -> bool {
        let b = self.bandwidth() as isize;
        (0..=b).all(|k| (self.coeff(-k) - self.coeff(k).conj()).norm() <= 1e-15 * (1.0 + self.coeff(k).norm()))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }
}

pub fn toeplitz(spec: &ToeplitzSpec, m: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(m, m, |j, k| spec.coeff(j as isize - k as isize))
}

/// Real Toeplitz matrix; fails when a coefficient has an imaginary part.
pub fn toeplitz_real(spec: &ToeplitzSpec, m: usize) -> Result<DMatrix<f64>> {
    if !spec.is_real() {
        return Err(Error::Usage("Toeplitz spec has complex coefficients".into()));
    }
    Ok(DMatrix::from_fn(m, m, |j, k| spec.coeff(j as isize - k as isize).re))
}

/// Two-level Toeplitz matrix T_{m1,m2}(f⊗h) built entrywise from the
/// bivariate coefficients c_{k1}(f)·c_{k2}(h), last index fastest.
pub fn toeplitz_tensor(cf: &ToeplitzSpec, ch: &ToeplitzSpec, m1: usize, m2: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(m1 * m2, m1 * m2, |r, c| {
        let (i1, i2) = (r / m2, r % m2);
        let (j1, j2) = (c / m2, c % m2);
        cf.coeff(i1 as isize - j1 as isize) * ch.coeff(i2 as isize - j2 as isize)
    })
}
