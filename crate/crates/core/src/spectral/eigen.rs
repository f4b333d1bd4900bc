//! Dense eigenvalues. Symmetric input goes to nalgebra's tridiagonal QL
//! solver; general input is balanced, reduced to Hessenberg form with
//! Householder reflections and finished with Francis double-shift QR.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 4096;

/// Iterations allowed per eigenvalue before giving up.
const MAX_ITS: usize = 60;

/// All eigenvalues of `a`. Matrices with max |a_ij − a_ji| ≤ tol·max |a_ij|
/// are treated as symmetric; real eigenvalues come back in ascending order,
/// complex ones sorted by real then imaginary part.
pub fn eigenvalues_dense(a: &DMatrix<f64>, tol: f64) -> Result<Vec<Complex64>> {
    eigenvalues_capped(a, tol, DEFAULT_ORDER_CAP)
}

pub fn eigenvalues_capped(a: &DMatrix<f64>, tol: f64, cap: usize) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Usage(format!("matrix is {}x{}, not square", a.nrows(), a.ncols())));
    }
    if a.nrows() > cap {
        return Err(Error::Usage(format!("order {} exceeds the cap {cap}", a.nrows())));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    if is_symmetric(a, tol) {
        Ok(eigenvalues_symmetric(a)?.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    } else {
        eigenvalues_general(a)
    }
}

pub fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    let scale = a.amax();
    let n = a.nrows();
    (0..n).all(|i| (0..i).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol * scale))
}

pub fn eigenvalues_symmetric(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 100 * n.max(10))
        .ok_or_else(|| Error::NoConvergence { order: n, found: Vec::new() })?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Row-major square matrix with 1-based accessors, local to the QR code.
struct Work {
    n: usize,
    a: Vec<f64>,
}

impl Work {
    fn from(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let a = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        Work { n, a }
    }

    #[inline]
    fn g(&self, i: usize, j: usize) -> f64 {
        self.a[(i - 1) * self.n + j - 1]
    }

    #[inline]
    fn s(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[(i - 1) * self.n + j - 1]
    }

    /// Diagonal similarity scaling by powers of two.
    fn balance(&mut self) {
        const RADIX: f64 = 2.0;
        let n = self.n;
        let sqrdx = RADIX * RADIX;
        let mut done = false;
        while !done {
            done = true;
            for i in 1..=n {
                let (mut r, mut c) = (0.0, 0.0);
                for j in 1..=n {
                    if j != i {
                        c += self.g(j, i).abs();
                        r += self.g(i, j).abs();
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let gi = 1.0 / f;
                    for j in 1..=n {
                        *self.s(i, j) *= gi;
                    }
                    for j in 1..=n {
                        *self.s(j, i) *= f;
                    }
                }
            }
        }
    }

    /// Householder reduction to upper Hessenberg form.
    fn hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        let mut v = vec![0.0; n + 1];
        for k in 1..=n - 2 {
            let norm = ((k + 1)..=n).map(|i| self.g(i, k).powi(2)).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let alpha = if self.g(k + 1, k) > 0.0 { -norm } else { norm };
            for i in (k + 1)..=n {
                v[i] = self.g(i, k);
            }
            v[k + 1] -= alpha;
            let vv: f64 = ((k + 1)..=n).map(|i| v[i] * v[i]).sum();
            if vv == 0.0 {
                continue;
            }
            for j in k..=n {
                let s: f64 = ((k + 1)..=n).map(|i| v[i] * self.g(i, j)).sum();
                let f = 2.0 * s / vv;
                for i in (k + 1)..=n {
                    *self.s(i, j) -= f * v[i];
                }
            }
            for i in 1..=n {
                let s: f64 = ((k + 1)..=n).map(|j| v[j] * self.g(i, j)).sum();
                let f = 2.0 * s / vv;
                for j in (k + 1)..=n {
                    *self.s(i, j) -= f * v[j];
                }
            }
            *self.s(k + 1, k) = alpha;
            for i in (k + 2)..=n {
                *self.s(i, k) = 0.0;
            }
        }
    }
}

/// Eigenvalues of a general real matrix.
pub fn eigenvalues_general(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut w = Work::from(m);
    w.balance();
    w.hessenberg();
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];
    if let Err(nn) = hqr(&mut w, &mut wr, &mut wi) {
        let found = ((nn + 1)..=n).map(|i| Complex64::new(wr[i], wi[i])).collect();
        return Err(Error::NoConvergence { order: n, found });
    }
    let mut out: Vec<Complex64> = (1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. On failure returns
/// the active block size; eigenvalues above it are already in `wr`/`wi`.
#[allow(unused_assignments)]
fn hqr(h: &mut Work, wr: &mut [f64], wi: &mut [f64]) -> std::result::Result<(), usize> {
    let n = h.n;
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += h.g(i, j).abs();
        }
    }
    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = h.g(l - 1, l - 1).abs() + h.g(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if h.g(l, l - 1).abs() <= f64::EPSILON * s {
                    *h.s(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = h.g(nn, nn);
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = h.g(nn - 1, nn - 1);
            let mut w = h.g(nn, nn - 1) * h.g(nn - 1, nn);
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITS {
                return Err(nn);
            }
            if its > 0 && its % 10 == 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    *h.s(i, i) -= x;
                }
                let s = h.g(nn, nn - 1).abs() + h.g(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let mut m = nn - 2;
            let mut z;
            loop {
                z = h.g(m, m);
                r = x - z;
                let s0 = y - z;
                p = (r * s0 - w) / h.g(m + 1, m) + h.g(m, m + 1);
                q = h.g(m + 1, m + 1) - z - r - s0;
                r = h.g(m + 2, m + 1);
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h.g(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (h.g(m - 1, m - 1).abs() + z.abs() + h.g(m + 1, m + 1).abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                *h.s(i, i - 2) = 0.0;
                if i != m + 2 {
                    *h.s(i, i - 3) = 0.0;
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = h.g(k, k - 1);
                    q = h.g(k + 1, k - 1);
                    r = 0.0;
                    if k != nn - 1 {
                        r = h.g(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            *h.s(k, k - 1) = -h.g(k, k - 1);
                        }
                    } else {
                        *h.s(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = h.g(k, j) + q * h.g(k + 1, j);
                        if k != nn - 1 {
                            p += r * h.g(k + 2, j);
                            *h.s(k + 2, j) -= p * z;
                        }
                        *h.s(k + 1, j) -= p * y;
                        *h.s(k, j) -= p * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        p = x * h.g(i, k) + y * h.g(i, k + 1);
                        if k != nn - 1 {
                            p += z * h.g(i, k + 2);
                            *h.s(i, k + 2) -= p * r;
                        }
                        *h.s(i, k + 1) -= p * q;
                        *h.s(i, k) -= p;
                    }
                }
                k += 1;
            }
            if l + 1 >= nn {
                break;
            }
        }
    }
    Ok(())
}

/// Eigenvector for an approximate real eigenvalue by shifted inverse
/// iteration.
pub fn inverse_iteration(a: &DMatrix<f64>, lambda: f64) -> Result<DVector<f64>> {
    let n = a.nrows();
    let shift = lambda + 1e-10 * a.amax().max(1.0);
    let lu = (a - DMatrix::identity(n, n) * shift).lu();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    for _ in 0..3 {
        let w = lu.solve(&v).ok_or_else(|| Error::Numerical("singular shifted matrix".into()))?;
        let norm = w.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Numerical("inverse iteration broke down".into()));
        }
        v = w / norm;
    }
    Ok(v)
}
