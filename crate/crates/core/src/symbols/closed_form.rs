use crate::error::{Error, Result};
use crate::section::{Family, SectionFamily};

use super::SymbolKind;

/// Explicit low-degree symbols: h₁, h₂, g₂, f₂, g₃, f₃, f₄.
pub fn symbol_closed_form(kind: SymbolKind, p: usize, family: SectionFamily, theta: f64) -> Result<f64> {
    let a = family.phase;
    let (c, s) = (theta.cos(), theta.sin());
    // h₂ written as A cos θ − B with family-dependent A, B.
    let h2 = || match family.kind {
        Family::Polynomial => 0.25 * c + 0.75,
        Family::Hyperbolic => {
            let d = a.cosh() - 1.0;
            ((a / 2.0).cosh() - 1.0) / d * c - ((a / 2.0).cosh() - a.cosh()) / d
        }
        Family::Trigonometric => {
            let d = a.cos() - 1.0;
            ((a / 2.0).cos() - 1.0) / d * c - ((a / 2.0).cos() - a.cos()) / d
        }
    };
    let v = match (kind, p, family.kind) {
        (SymbolKind::H, 1, Family::Polynomial) => 1.0,
        (SymbolKind::H, 1, Family::Hyperbolic) => a / 2.0 / (a / 2.0).tanh(),
        (SymbolKind::H, 1, Family::Trigonometric) => a / 2.0 / (a / 2.0).tan(),
        (SymbolKind::H, 2, _) => h2(),
        (SymbolKind::G, 2, Family::Polynomial) => -s,
        (SymbolKind::G, 2, Family::Hyperbolic) => -a * (a / 2.0).sinh() / (a.cosh() - 1.0) * s,
        (SymbolKind::G, 2, Family::Trigonometric) => a * (a / 2.0).sin() / (a.cos() - 1.0) * s,
        (SymbolKind::F, 2, Family::Polynomial) => 2.0 - 2.0 * c,
        (SymbolKind::F, 2, Family::Hyperbolic) => a * a * (a / 2.0).cosh() / (a.cosh() - 1.0) * (1.0 - c),
        (SymbolKind::F, 2, Family::Trigonometric) => a * a * (a / 2.0).cos() / (1.0 - a.cos()) * (1.0 - c),
        (SymbolKind::G, 3, _) => -s,
        (SymbolKind::F, 3, Family::Polynomial) => 2.0 - 2.0 * c,
        (SymbolKind::F, 3, Family::Hyperbolic) => a / (a / 2.0).tanh() * (1.0 - c),
        (SymbolKind::F, 3, Family::Trigonometric) => a / (a / 2.0).tan() * (1.0 - c),
        (SymbolKind::F, 4, _) => (2.0 - 2.0 * c) * h2(),
        _ => {
            return Err(Error::Unsupported(format!(
                "no explicit form for {kind}_{p} ({})",
                family.kind
            )))
        }
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn examples() {
        let v = symbol_closed_form(SymbolKind::F, 4, SectionFamily::polynomial(), PI).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        let t = SectionFamily::trigonometric(PI / 2.0).unwrap();
        assert!((symbol_closed_form(SymbolKind::F, 3, t, PI).unwrap() - PI).abs() < 1e-14);
        let h = SectionFamily::hyperbolic(3.0).unwrap();
        assert!((symbol_closed_form(SymbolKind::H, 2, h, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            symbol_closed_form(SymbolKind::F, 5, h, 0.0),
            Err(Error::Unsupported(_))
        ));
    }
}
