//! Exact piecewise functions whose pieces live in the section space
//! ⟨1, τ, …, τ^{p−2}, u(τ), v(τ)⟩.
//!
//! Pieces are stored in a rescaled tail basis that spans the same space as
//! the canonical {…, u, v} pair but stays well conditioned as the phase
//! goes to zero: for `m ≥ 0` and σ = +1 (hyperbolic), −1 (trigonometric),
//! 0 (polynomial)
//!
//! ```text
//! R_m(τ) = Σ_j σ^j m!/(m+2j)! ε^{2j} τ^{m+2j}
//! ```
//!
//! so `R_m → τ^m` as ε → 0, `R_m' = m R_{m−1}` and `R_0' = σ ε² R_1`.
//! A degree-p piece is `Σ_{k<p−1} a_k s^k + b_u R_{p−1}(s) + b_v R_p(s)`
//! with `s = τ − 1/2`, i.e. the coefficients are the leading Taylor
//! coefficients about the interval midpoint. Expanding about the midpoint
//! rather than an endpoint keeps the terms near `cosh(ε/2)` instead of
//! `cosh ε`, which matters for large hyperbolic phases.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

const TAIL_MAX_TERMS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Polynomial,
    Hyperbolic,
    Trigonometric,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "polynomial" | "p" => Ok(Family::Polynomial),
            "hyperbolic" | "h" => Ok(Family::Hyperbolic),
            "trigonometric" | "t" => Ok(Family::Trigonometric),
            other => Err(Error::Usage(format!("unknown family '{other}'"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Polynomial => "polynomial",
            Family::Hyperbolic => "hyperbolic",
            Family::Trigonometric => "trigonometric",
        };
        f.write_str(s)
    }
}

/// A section family together with its phase. The phase is per unit of the
/// global coordinate; on an interval of width `w` the effective phase is
/// `phase * w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionFamily {
    pub kind: Family,
    pub phase: f64,
}

impl SectionFamily {
    pub fn polynomial() -> Self {
        SectionFamily { kind: Family::Polynomial, phase: 0.0 }
    }

    pub fn hyperbolic(alpha: f64) -> Result<Self> {
        Self::new(Family::Hyperbolic, alpha)
    }

    pub fn trigonometric(alpha: f64) -> Result<Self> {
        Self::new(Family::Trigonometric, alpha)
    }

    /// Builds a family; the phase is ignored for `Polynomial`.
    pub fn new(kind: Family, alpha: f64) -> Result<Self> {
        match kind {
            Family::Polynomial => Ok(Self::polynomial()),
            _ if !(alpha.is_finite() && alpha > 0.0) => Err(Error::Constraint(format!(
                "{kind} phase must be a positive finite number, got {alpha}"
            ))),
            _ => Ok(SectionFamily { kind, phase: alpha }),
        }
    }

    /// Same family with a different phase.
    pub fn with_phase(&self, alpha: f64) -> Result<Self> {
        Self::new(self.kind, alpha)
    }

    /// σ in the tail-basis definition.
    pub fn sigma(&self) -> f64 {
        match self.kind {
            Family::Polynomial => 0.0,
            Family::Hyperbolic => 1.0,
            Family::Trigonometric => -1.0,
        }
    }

    /// Checks that an interval of the given width is usable.
    pub fn check_width(&self, width: f64) -> Result<()> {
        if self.kind == Family::Trigonometric && self.phase * width >= std::f64::consts::PI {
            return Err(Error::Constraint(format!(
                "trigonometric effective phase {} must be below pi",
                self.phase * width
            )));
        }
        Ok(())
    }

    pub fn local(&self, degree: usize, width: f64) -> LocalBasis {
        LocalBasis { family: *self, degree, eps: self.phase * width }
    }
}

impl fmt::Display for SectionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Family::Polynomial => write!(f, "polynomial"),
            k => write!(f, "{k}(alpha={})", self.phase),
        }
    }
}

/// The section space of one interval in its local coordinate τ ∈ [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalBasis {
    pub family: SectionFamily,
    pub degree: usize,
    /// Effective phase on the unit local coordinate.
    pub eps: f64,
}

impl LocalBasis {
    pub fn len(&self) -> usize {
        self.degree + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The j-th canonical basis function {τ⁰,…,τ^{p−2}, u, v} at τ.
    pub fn eval(&self, j: usize, tau: f64) -> Result<f64> {
        let p = self.degree;
        if p == 0 || j > p {
            return Err(Error::Usage(format!("basis index {j} out of range for degree {p}")));
        }
        if j + 1 < p {
            return Ok(tau.powi(j as i32));
        }
        let x = self.eps * tau;
        let is_u = j + 1 == p;
        Ok(match (self.family.kind, is_u) {
            (Family::Polynomial, _) => tau.powi(j as i32),
            (Family::Hyperbolic, true) => x.cosh(),
            (Family::Hyperbolic, false) => x.sinh(),
            (Family::Trigonometric, true) => x.cos(),
            (Family::Trigonometric, false) => x.sin(),
        })
    }

    /// Tail function R_m at offset `s` from its expansion point.
    pub fn tail(&self, m: usize, s: f64) -> f64 {
        tail_eval(self.family.sigma(), self.eps, m, s)
    }

    /// Value of a tail-basis coefficient vector at τ ∈ [0, 1].
    pub fn eval_coeffs(&self, c: &[f64], tau: f64) -> f64 {
        self.eval_offset(c, tau - 0.5)
    }

    fn eval_offset(&self, c: &[f64], s: f64) -> f64 {
        let p = self.degree;
        let mut acc = 0.0;
        for k in (0..p - 1).rev() {
            acc = acc * s + c[k];
        }
        acc + c[p - 1] * self.tail(p - 1, s) + c[p] * self.tail(p, s)
    }

    /// Coefficients of the same function expanded about offset `shift`:
    /// its Taylor coefficients there, obtained by exact differentiation.
    fn reexpand(&self, c: &[f64], shift: f64) -> Vec<f64> {
        let sigma = self.family.sigma();
        let mut out = Vec::with_capacity(c.len());
        let mut cur = c.to_vec();
        let mut basis = *self;
        let mut factorial = 1.0;
        for k in 0..c.len() {
            if k > 0 {
                factorial *= k as f64;
            }
            out.push(basis.eval_offset(&cur, shift) / factorial);
            cur = derivative_coeffs(&cur, basis.degree, sigma, self.eps, 1.0);
            basis.degree = if basis.degree == 1 { 1 } else { basis.degree - 1 };
        }
        out
    }

    /// Converts canonical coefficients (monomials, u, v) to the tail basis.
    pub fn canonical_to_tail(&self, canon: &[f64]) -> Result<Vec<f64>> {
        let p = self.degree;
        if canon.len() != p + 1 {
            return Err(Error::Usage(format!(
                "expected {} coefficients, got {}",
                p + 1,
                canon.len()
            )));
        }
        if self.family.kind == Family::Polynomial {
            return Ok(self.reexpand(canon, 0.5));
        }
        if self.eps == 0.0 {
            return Err(Error::Constraint("canonical basis is degenerate at zero phase".into()));
        }
        let sigma = self.family.sigma();
        let mut out = vec![0.0; p + 1];
        out[..p - 1].copy_from_slice(&canon[..p - 1]);
        // u is the even series (cosh/cos), v the odd one (sinh/sin).
        for (parity, weight) in [(0usize, canon[p - 1]), (1usize, canon[p])] {
            if weight == 0.0 {
                continue;
            }
            let tail_m = if (p - 1) % 2 == parity { p - 1 } else { p };
            let mut k = parity;
            let mut coef = 1.0;
            let mut sign = 1.0;
            // coef = ε^k / k!, sign = σ^{(k-parity)/2}
            if parity == 1 {
                coef = self.eps;
            }
            while k < tail_m {
                out[k] += weight * sign * coef;
                coef *= self.eps * self.eps / ((k + 1) * (k + 2)) as f64;
                sign *= sigma;
                k += 2;
            }
            let slot = if tail_m == p - 1 { p - 1 } else { p };
            out[slot] += weight * sign * coef;
        }
        // `out` is expanded about τ = 0; move it to the midpoint.
        Ok(self.reexpand(&out, 0.5))
    }
}

/// Derivative of a tail-basis vector on an interval of width `w`. Degree-1
/// vectors stay degree 1 because span{u, v} is closed under differentiation.
fn derivative_coeffs(c: &[f64], p: usize, sigma: f64, eps: f64, w: f64) -> Vec<f64> {
    if p == 1 {
        return vec![c[1] / w, sigma * eps * eps * c[0] / w];
    }
    let mut out = vec![0.0; p];
    for j in 1..p - 1 {
        out[j - 1] = j as f64 * c[j] / w;
    }
    out[p - 2] += (p - 1) as f64 * c[p - 1] / w;
    out[p - 1] += p as f64 * c[p] / w;
    out
}

/// R_m(τ) by its power series. For the hyperbolic case every term is
/// positive; for the trigonometric case |ετ| < π keeps cancellation mild.
pub(crate) fn tail_eval(sigma: f64, eps: f64, m: usize, tau: f64) -> f64 {
    let lead = tau.powi(m as i32);
    if sigma == 0.0 || eps == 0.0 || tau == 0.0 {
        return lead;
    }
    let z = sigma * eps * eps * tau * tau;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut j = 0usize;
    while j < TAIL_MAX_TERMS {
        let a = (m + 2 * j + 1) as f64;
        term *= z / (a * (a + 1.0));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
        j += 1;
    }
    lead * sum
}

/// A function that is piecewise in the section space over `breakpoints`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFn {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    degree: usize,
    family: SectionFamily,
}

impl PiecewiseFn {
    /// Builds from tail-basis coefficients. Zero-width intervals must carry
    /// an empty piece; the others exactly `degree + 1` coefficients.
    pub fn new(
        breakpoints: Vec<f64>,
        pieces: Vec<Vec<f64>>,
        degree: usize,
        family: SectionFamily,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Usage("degree must be at least 1".into()));
        }
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Usage(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        for (k, piece) in pieces.iter().enumerate() {
            let w = breakpoints[k + 1] - breakpoints[k];
            if !(w >= 0.0) {
                return Err(Error::Usage("breakpoints must be non-decreasing".into()));
            }
            let want = if w == 0.0 { 0 } else { degree + 1 };
            if piece.len() != want {
                return Err(Error::Usage(format!(
                    "piece {k} has {} coefficients, expected {want}",
                    piece.len()
                )));
            }
        }
        Ok(PiecewiseFn { breakpoints, pieces, degree, family })
    }

    /// Builds from canonical-basis coefficients (monomials, u, v).
    pub fn from_canonical(
        breakpoints: Vec<f64>,
        pieces: Vec<Vec<f64>>,
        degree: usize,
        family: SectionFamily,
    ) -> Result<Self> {
        let mut converted = Vec::with_capacity(pieces.len());
        for (k, piece) in pieces.iter().enumerate() {
            let w = breakpoints.get(k + 1).copied().unwrap_or(f64::NAN) - breakpoints[k];
            if piece.is_empty() {
                converted.push(Vec::new());
            } else {
                converted.push(family.local(degree, w).canonical_to_tail(piece)?);
            }
        }
        Self::new(breakpoints, converted, degree, family)
    }

    /// The zero function on the given breakpoints.
    pub fn zero(breakpoints: Vec<f64>, degree: usize, family: SectionFamily) -> Result<Self> {
        let pieces = breakpoints
            .windows(2)
            .map(|w| if w[1] > w[0] { vec![0.0; degree + 1] } else { Vec::new() })
            .collect();
        Self::new(breakpoints, pieces, degree, family)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn family(&self) -> SectionFamily {
        self.family
    }

    pub fn width(&self, k: usize) -> f64 {
        self.breakpoints[k + 1] - self.breakpoints[k]
    }

    pub fn local_basis(&self, k: usize) -> LocalBasis {
        self.family.local(self.degree, self.width(k))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    /// Index of the piece used to evaluate at `x`, with its local coordinate.
    fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let (lo, hi) = self.support();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let k = if x == hi {
            self.pieces.iter().rposition(|p| !p.is_empty())?
        } else {
            self.breakpoints.partition_point(|&b| b <= x) - 1
        };
        let w = self.width(k);
        if w == 0.0 {
            return None;
        }
        Some((k, ((x - self.breakpoints[k]) / w).clamp(0.0, 1.0)))
    }

    /// Right-continuous value; the last breakpoint takes the left limit and
    /// anything outside the breakpoints is zero.
    pub fn eval(&self, x: f64) -> f64 {
        match self.locate(x) {
            Some((k, tau)) => self.local_basis(k).eval_coeffs(&self.pieces[k], tau),
            None => 0.0,
        }
    }

    /// Exact derivative. Degree-1 pieces stay degree 1 because span{u, v}
    /// is closed under differentiation.
    pub fn derivative(&self) -> PiecewiseFn {
        let p = self.degree;
        let sigma = self.family.sigma();
        let new_degree = if p == 1 { 1 } else { p - 1 };
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_empty() {
                    return Vec::new();
                }
                let w = self.width(k);
                derivative_coeffs(c, p, sigma, self.family.phase * w, w)
            })
            .collect();
        PiecewiseFn { breakpoints: self.breakpoints.clone(), pieces, degree: new_degree, family: self.family }
    }

    /// `n`-fold derivative.
    pub fn nth_derivative(&self, n: usize) -> PiecewiseFn {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    /// F(x) = ∫_{first breakpoint}^x f, continuous, of degree p + 1.
    pub fn antiderivative(&self) -> Result<PiecewiseFn> {
        let p = self.degree;
        let mut acc = 0.0;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (k, c) in self.pieces.iter().enumerate() {
            if c.is_empty() {
                pieces.push(Vec::new());
                continue;
            }
            let w = self.width(k);
            self.family.check_width(w)?;
            let mut out = vec![0.0; p + 2];
            for j in 0..p - 1 {
                out[j + 1] = w * c[j] / (j + 1) as f64;
            }
            out[p] = w * c[p - 1] / p as f64;
            out[p + 1] = w * c[p] / (p + 1) as f64;
            let basis = self.family.local(p + 1, w);
            out[0] = acc - basis.eval_coeffs(&out, 0.0);
            acc = basis.eval_coeffs(&out, 1.0);
            pieces.push(out);
        }
        Ok(PiecewiseFn { breakpoints: self.breakpoints.clone(), pieces, degree: p + 1, family: self.family })
    }

    /// ∫ f over the whole breakpoint range.
    pub fn integral(&self) -> Result<f64> {
        let (_, hi) = self.support();
        Ok(self.antiderivative()?.eval(hi))
    }

    /// g(x) = f(x − s).
    pub fn shifted(&self, s: f64) -> PiecewiseFn {
        PiecewiseFn {
            breakpoints: self.breakpoints.iter().map(|b| b + s).collect(),
            ..self.clone()
        }
    }

    /// Appends `left` and `right` zero pieces of width `w` on either side.
    pub fn padded(&self, left: usize, right: usize, w: f64) -> PiecewiseFn {
        let (lo, hi) = self.support();
        let mut breakpoints: Vec<f64> = (0..left).map(|j| lo - (left - j) as f64 * w).collect();
        breakpoints.extend_from_slice(&self.breakpoints);
        breakpoints.extend((1..=right).map(|j| hi + j as f64 * w));
        let zero = vec![0.0; self.degree + 1];
        let mut pieces = vec![zero.clone(); left];
        pieces.extend(self.pieces.iter().cloned());
        pieces.extend(std::iter::repeat(zero).take(right));
        PiecewiseFn { breakpoints, pieces, degree: self.degree, family: self.family }
    }

    /// Σ c_j f_j over identical breakpoints, degree and family.
    pub fn linear_combination(terms: &[(f64, &PiecewiseFn)]) -> Result<PiecewiseFn> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::Usage("empty linear combination".into()))?;
        let mut out = (*first).clone();
        for piece in out.pieces.iter_mut() {
            piece.iter_mut().for_each(|v| *v = 0.0);
        }
        for (c, f) in terms {
            if f.degree != out.degree || f.family != out.family || f.breakpoints.len() != out.breakpoints.len() {
                return Err(Error::Usage("incompatible piecewise functions".into()));
            }
            if f.breakpoints.iter().zip(&out.breakpoints).any(|(a, b)| (a - b).abs() > 1e-12) {
                return Err(Error::Usage("breakpoints differ".into()));
            }
            for (dst, src) in out.pieces.iter_mut().zip(&f.pieces) {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += c * s;
                }
            }
        }
        Ok(out)
    }

    /// Replaces every piece outside `[lo, hi]` with zeros.
    pub fn restrict_support(&mut self, lo: f64, hi: f64) {
        for k in 0..self.pieces.len() {
            if self.breakpoints[k + 1] <= lo || self.breakpoints[k] >= hi {
                self.pieces[k].iter_mut().for_each(|v| *v = 0.0);
            }
        }
    }
}
