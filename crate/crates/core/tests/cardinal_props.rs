mod common;

use gbspec::cardinal::{cardinal_spline, fourier_phi};
use gbspec::section::SectionFamily;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn family(kind: u8, alpha: f64) -> SectionFamily {
    match kind % 3 {
        0 => SectionFamily::polynomial(),
        1 => SectionFamily::hyperbolic(alpha).unwrap(),
        _ => SectionFamily::trigonometric(alpha.min(3.0)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_integral_symmetry(kind in 0u8..3, alpha in 0.05f64..12.0, p in 2usize..8) {
        let cs = cardinal_spline(family(kind, alpha), p).unwrap();
        let sum: f64 = (1..=p).map(|k| cs.eval(k as f64)).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!((cs.pw().integral().unwrap() - 1.0).abs() <= 1e-12);
        let c = (p + 1) as f64 / 2.0;
        for k in 0..100 {
            let t = c * k as f64 / 99.0;
            prop_assert!((cs.eval(c + t) - cs.eval(c - t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn smooth_across_integer_knots(kind in 0u8..3, alpha in 0.05f64..12.0, p in 2usize..7) {
        let cs = cardinal_spline(family(kind, alpha), p).unwrap();
        for r in 0..p {
            let d = cs.pw().nth_derivative(r);
            for k in 1..=p {
                let x = k as f64;
                let left = d.eval(x - 1e-13);
                let right = d.eval(x);
                prop_assert!((left - right).abs() <= 1e-10, "r={} k={}", r, k);
            }
        }
    }

    #[test]
    fn fourier_transform_matches_quadrature(kind in 0u8..3, alpha in 0.05f64..6.0, p in 1usize..6, theta in -6.0f64..6.0) {
        let fam = family(kind, alpha);
        let cs = cardinal_spline(fam, p).unwrap();
        let re = common::integrate_integer_pieces(|t| cs.eval(t) * (theta * t).cos(), 0.0, (p + 1) as f64, 32);
        let im = common::integrate_integer_pieces(|t| -cs.eval(t) * (theta * t).sin(), 0.0, (p + 1) as f64, 32);
        let z = fourier_phi(fam, p, theta);
        prop_assert!((z - Complex64::new(re, im)).norm() <= 1e-10);
    }
}

#[test]
fn phase_limit() {
    let poly = cardinal_spline(SectionFamily::polynomial(), 5).unwrap();
    for fam in [SectionFamily::hyperbolic(1e-3).unwrap(), SectionFamily::trigonometric(1e-3).unwrap()] {
        let cs = cardinal_spline(fam, 5).unwrap();
        for p in 1..=5 {
            let (a, b) = (cs.lower(p).unwrap(), poly.lower(p).unwrap());
            let gap = (0..=600).map(|k| (a.eval(k as f64 / 100.0) - b.eval(k as f64 / 100.0)).abs()).fold(0.0, f64::max);
            assert!(gap <= 1e-4, "p={p} gap {gap}");
        }
    }
}

#[test]
fn trigonometric_fourier_at_pi() {
    let fam = SectionFamily::trigonometric(PI / 2.0).unwrap();
    let cs = cardinal_spline(fam, 1).unwrap();
    let re = common::integrate_integer_pieces(|t| cs.eval(t) * (PI * t).cos(), 0.0, 2.0, 64);
    let im = common::integrate_integer_pieces(|t| -cs.eval(t) * (PI * t).sin(), 0.0, 2.0, 64);
    assert!((fourier_phi(fam, 1, PI).norm() - re.hypot(im)).abs() < 1e-8);
}

#[test]
fn inner_products() {
    for fam in [SectionFamily::hyperbolic(3.0).unwrap(), SectionFamily::trigonometric(2.0).unwrap()] {
        let cs = cardinal_spline(fam, 6).unwrap();
        let poly = cardinal_spline(SectionFamily::polynomial(), 2).unwrap();
        for (p1, p2) in [(2usize, 2usize), (3, 2)] {
            for k in -2i32..=2 {
                let a = cs.lower(p1).unwrap();
                let ip = common::integrate_integer_pieces(|t| a.eval(t) * poly.eval(t + k as f64), 0.0, (p1 + 1) as f64, 16);
                let want = cs.lower(p1 + p2 + 1).unwrap().eval((p2 as i32 + 1 - k) as f64);
                assert!((ip - want).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn second_derivative_by_finite_differences() {
    let cs = cardinal_spline(SectionFamily::polynomial(), 3).unwrap();
    let h = 1e-5;
    let fd = (cs.eval(2.0 + h) - 2.0 * cs.eval(2.0) + cs.eval(2.0 - h)) / (h * h);
    assert!((fd + 2.0).abs() < 1e-4);
    assert!((cs.derivative(2).unwrap().eval(2.0) + 2.0).abs() < 1e-12);
}
