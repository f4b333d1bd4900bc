//! Cardinal GB-splines on the integer knots {0, 1, …, p+1}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::section::{Family, PiecewiseFn, SectionFamily};

/// Phases below this are treated as polynomial in the Fourier transform,
/// where `cosh α − 1` would otherwise lose every digit.
pub const SMALL_PHASE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CardinalSpline {
    p: usize,
    family: SectionFamily,
    delta1: f64,
    /// φ_1, …, φ_p; φ_q lives on {0, …, q+1}.
    chain: Vec<PiecewiseFn>,
}

/// g ↦ g − g(· − 1), extending the support by one unit interval.
fn unit_difference(g: &PiecewiseFn) -> Result<PiecewiseFn> {
    let a = g.padded(0, 1, 1.0);
    let b = g.shifted(1.0).padded(1, 0, 1.0);
    PiecewiseFn::linear_combination(&[(1.0, &a), (-1.0, &b)])
}

/// Degree-1 seeds Ũ (1 → 0) and Ṽ (0 → 1) across one interval, in the
/// tail basis about its midpoint, where R_0 is even and R_1 odd.
pub(crate) fn seed_pieces(family: SectionFamily, width: f64) -> (Vec<f64>, Vec<f64>) {
    let b = family.local(1, width);
    let e = 0.5 / b.tail(0, 0.5);
    let o = 0.5 / b.tail(1, 0.5);
    (vec![e, -o], vec![e, o])
}

pub fn cardinal_spline(family: SectionFamily, p: usize) -> Result<CardinalSpline> {
    if p == 0 {
        return Err(Error::Usage("cardinal spline degree must be at least 1".into()));
    }
    family.check_width(1.0)?;
    let (u_tilde, v_tilde) = seed_pieces(family, 1.0);
    let raw = PiecewiseFn::new(vec![0.0, 1.0, 2.0], vec![v_tilde, u_tilde], 1, family)?;
    let delta1 = 1.0 / raw.integral()?;
    let mut chain = vec![PiecewiseFn::linear_combination(&[(delta1, &raw)])?];
    for _ in 2..=p {
        let prev = chain.last().expect("chain is non-empty");
        chain.push(unit_difference(prev)?.antiderivative()?);
    }
    Ok(CardinalSpline { p, family, delta1, chain })
}

impl CardinalSpline {
    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn family(&self) -> SectionFamily {
        self.family
    }

    /// Normalization of the degree-1 seed.
    pub fn delta1(&self) -> f64 {
        self.delta1
    }

    pub fn pw(&self) -> &PiecewiseFn {
        &self.chain[self.p - 1]
    }

    /// The lower-degree spline φ_q, 1 ≤ q ≤ p.
    pub fn lower(&self, q: usize) -> Option<&PiecewiseFn> {
        q.checked_sub(1).and_then(|i| self.chain.get(i))
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pw().eval(t)
    }

    /// r-th derivative via φ_p^{(r)}(t) = φ_{p−1}^{(r−1)}(t) − φ_{p−1}^{(r−1)}(t−1).
    pub fn derivative(&self, r: usize) -> Result<PiecewiseFn> {
        if r == 0 || r >= self.p {
            return Err(Error::Usage(format!(
                "derivative order {r} outside 1..{} for degree {}",
                self.p.saturating_sub(1),
                self.p
            )));
        }
        let mut g = self.chain[self.p - r - 1].clone();
        for _ in 0..r {
            g = unit_difference(&g)?;
        }
        Ok(g)
    }
}

/// sin(x)/x with the removable point filled in.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// φ̂₁(η)·e^{iη}, which is real for all three families.
pub fn phi1_amplitude(family: SectionFamily, eta: f64) -> f64 {
    let alpha = family.phase;
    if family.kind == Family::Polynomial || alpha < SMALL_PHASE {
        return sinc(eta / 2.0).powi(2);
    }
    if family.kind == Family::Hyperbolic {
        let sh = (alpha / 2.0).sinh().powi(2);
        let s = (eta / 2.0).sin().powi(2);
        alpha * alpha * (sh + s) / (sh * (eta * eta + alpha * alpha))
    } else {
        // cos α − cos η = 2 sin((η−α)/2) sin((η+α)/2) removes the pole at η = ±α.
        let s = (alpha / 2.0).sin().powi(2);
        alpha * alpha / (4.0 * s) * sinc((eta - alpha) / 2.0) * sinc((eta + alpha) / 2.0)
    }
}

/// Fourier transform ∫ φ_p(t) e^{−iθt} dt.
pub fn fourier_phi(family: SectionFamily, p: usize, theta: f64) -> Complex64 {
    let base = Complex64::from_polar(phi1_amplitude(family, theta), -theta);
    let factor = Complex64::from_polar(sinc(theta / 2.0), -theta / 2.0);
    base * factor.powu(p.saturating_sub(1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_examples() {
        let c1 = cardinal_spline(SectionFamily::polynomial(), 1).unwrap();
        assert!((c1.eval(1.0) - 1.0).abs() < 1e-15);
        assert!((c1.eval(0.5) - 0.5).abs() < 1e-15);
        assert!((c1.delta1() - 1.0).abs() < 1e-15);
        let c2 = cardinal_spline(SectionFamily::polynomial(), 2).unwrap();
        assert!((c2.eval(0.5) - 0.125).abs() < 1e-15);
        assert!((c2.eval(1.5) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_seed_peak() {
        let c = cardinal_spline(SectionFamily::hyperbolic(2.0).unwrap(), 1).unwrap();
        let coth1 = 1.0 / 1.0f64.tanh();
        assert!((c.eval(1.0) - coth1).abs() < 1e-14);
        assert!((c.delta1() - coth1).abs() < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let c2 = cardinal_spline(SectionFamily::polynomial(), 2).unwrap();
        assert!(c2.derivative(1).unwrap().eval(1.5).abs() < 1e-15);
        let c3 = cardinal_spline(SectionFamily::polynomial(), 3).unwrap();
        let d2 = c3.derivative(2).unwrap().eval(2.0);
        let h = 1e-5;
        let fd = (c3.eval(2.0 + h) - 2.0 * c3.eval(2.0) + c3.eval(2.0 - h)) / (h * h);
        assert!((d2 + 2.0).abs() < 1e-14 && (fd - d2).abs() < 1e-4);
        assert!(matches!(c3.derivative(3), Err(Error::Usage(_))));
        let c = cardinal_spline(SectionFamily::trigonometric(1.0).unwrap(), 4).unwrap();
        assert!(c.derivative(1).unwrap().integral().unwrap().abs() < 1e-14);
    }

    #[test]
    fn infeasible_trigonometric_phase() {
        let fam = SectionFamily::trigonometric(PI).unwrap();
        assert!(matches!(cardinal_spline(fam, 2), Err(Error::Constraint(_))));
    }

    #[test]
    fn fourier_at_zero() {
        for p in 1..6 {
            assert!((fourier_phi(SectionFamily::polynomial(), p, 0.0) - 1.0).norm() < 1e-15);
        }
        let z = fourier_phi(SectionFamily::hyperbolic(2.0).unwrap(), 1, 0.0);
        assert!((z - 1.0).norm() < 1e-15);
        let t = SectionFamily::trigonometric(1.0).unwrap();
        let near = phi1_amplitude(t, 1.0 + 1e-9);
        let at = phi1_amplitude(t, 1.0);
        let limit = 1.0f64.sin() / (2.0 * (1.0 - 1.0f64.cos()));
        assert!((at - limit).abs() < 1e-14 && (near - at).abs() < 1e-8);
    }
}
