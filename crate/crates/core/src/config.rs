//! JSON problem files for the command-line tool.
//!
//! One-dimensional:
//!
//! ```json
//! {"d": 1, "kappa": "1+x", "beta": "0", "gamma": "0",
//!  "family": "hyperbolic", "alpha": 10, "mode": "nonnested", "p": 3,
//!  "geometry": {"G": "x", "G1": null, "G2": null}}
//! ```
//!
//! Two-dimensional files use `K` (2×2 expressions), `beta` (2 expressions),
//! `nu`, and per-direction `p`, `family`, `alpha` given either as a single
//! value or a two-element list; the geometry is `{"G": [expr, expr]}`.

use serde::Deserialize;
use serde_json::Value;
use std::path::Path;

use crate::collocation::{GeometryMap1D, PhaseMode, ProblemCoefficients};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::multidim::{GeometryMapMD, ProblemMD};
use crate::section::{Family, SectionFamily};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Geometry1DFile {
    #[serde(rename = "G")]
    g: String,
    #[serde(rename = "G1", default)]
    g1: Option<String>,
    #[serde(rename = "G2", default)]
    g2: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Problem1DFile {
    #[serde(rename = "d")]
    _d: usize,
    kappa: String,
    #[serde(default = "zero")]
    beta: String,
    #[serde(default = "zero")]
    gamma: String,
    #[serde(default = "zero")]
    f: String,
    family: Family,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default = "default_mode")]
    mode: PhaseMode,
    p: usize,
    #[serde(default)]
    geometry: Option<Geometry1DFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrTwo<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrTwo<T> {
    fn expand(&self, d: usize, what: &str) -> Result<Vec<T>> {
        match self {
            OneOrTwo::One(v) => Ok(vec![v.clone(); d]),
            OneOrTwo::Many(v) if v.len() == d => Ok(v.clone()),
            OneOrTwo::Many(v) => Err(Error::Validation(format!("'{what}' needs {d} entries, got {}", v.len()))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryMDFile {
    #[serde(rename = "G")]
    g: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemMDFile {
    d: usize,
    #[serde(rename = "K")]
    k: Vec<Vec<String>>,
    #[serde(default)]
    beta: Option<Vec<String>>,
    #[serde(default = "zero")]
    gamma: String,
    #[serde(default)]
    nu: Option<Vec<usize>>,
    p: OneOrTwo<usize>,
    family: OneOrTwo<Family>,
    #[serde(default)]
    alpha: Option<OneOrTwo<f64>>,
    #[serde(default = "default_mode")]
    mode: PhaseMode,
    #[serde(default)]
    geometry: Option<GeometryMDFile>,
}

fn zero() -> String {
    "0".into()
}

fn default_mode() -> PhaseMode {
    PhaseMode::NonNested
}

fn family_with(kind: Family, alpha: Option<f64>) -> Result<SectionFamily> {
    match (kind, alpha) {
        (Family::Polynomial, _) => Ok(SectionFamily::polynomial()),
        (_, Some(a)) => SectionFamily::new(kind, a),
        (_, None) => Err(Error::Validation(format!("family '{kind}' needs 'alpha'"))),
    }
}

fn expr(src: &str, field: &str) -> Result<Expr> {
    Expr::parse(src).map_err(|e| Error::Validation(format!("field '{field}': {e}")))
}

/// A validated one-dimensional problem.
#[derive(Debug, Clone)]
pub struct Config1D {
    pub problem: ProblemCoefficients,
    pub geometry: GeometryMap1D,
    pub family: SectionFamily,
    pub mode: PhaseMode,
    pub p: usize,
}

impl Config1D {
    /// p = 3, hyperbolic α = 10, non-nested, κ = 1, β = γ = 0, identity map.
    pub fn default_problem() -> Self {
        Config1D {
            problem: ProblemCoefficients::from_strs("1", "0", "0").expect("constant coefficients are valid"),
            geometry: GeometryMap1D::identity(),
            family: SectionFamily::hyperbolic(10.0).expect("positive phase"),
            mode: PhaseMode::NonNested,
            p: 3,
        }
    }
}

/// A validated two- or three-dimensional problem.
#[derive(Debug, Clone)]
pub struct ConfigMD {
    pub problem: ProblemMD,
    pub geometry: GeometryMapMD,
}

#[derive(Debug, Clone)]
pub enum Config {
    OneD(Config1D),
    MultiD(ConfigMD),
}

fn schema_error(e: serde_json::Error) -> Error {
    Error::Validation(format!("config does not match the schema: {e}"))
}

pub fn parse_config(text: &str) -> Result<Config> {
    let value: Value = serde_json::from_str(text).map_err(schema_error)?;
    let d = value
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Validation("config needs an integer field 'd'".into()))?;
    if d == 1 {
        let file: Problem1DFile = serde_json::from_value(value).map_err(schema_error)?;
        let family = family_with(file.family, file.alpha)?;
        if file.p < 2 {
            return Err(Error::Validation(format!("'p' must be at least 2, got {}", file.p)));
        }
        let problem = ProblemCoefficients::new(
            expr(&file.kappa, "kappa")?,
            expr(&file.beta, "beta")?,
            expr(&file.gamma, "gamma")?,
            expr(&file.f, "f")?,
        )?;
        let geometry = match file.geometry {
            None => GeometryMap1D::identity(),
            Some(g) => GeometryMap1D::new(
                expr(&g.g, "G")?,
                g.g1.as_deref().map(|s| expr(s, "G1")).transpose()?,
                g.g2.as_deref().map(|s| expr(s, "G2")).transpose()?,
            )?,
        };
        return Ok(Config::OneD(Config1D { problem, geometry, family, mode: file.mode, p: file.p }));
    }
    let file: ProblemMDFile = serde_json::from_value(value).map_err(schema_error)?;
    let d = file.d;
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!("dimension {d}")));
    }
    let kinds = file.family.expand(d, "family")?;
    let alphas: Vec<Option<f64>> = match &file.alpha {
        None => vec![None; d],
        Some(a) => a.expand(d, "alpha")?.into_iter().map(Some).collect(),
    };
    let families =
        kinds.into_iter().zip(alphas).map(|(k, a)| family_with(k, a)).collect::<Result<Vec<_>>>()?;
    if file.k.len() != d || file.k.iter().any(|r| r.len() != d) {
        return Err(Error::Validation(format!("'K' must be {d}x{d}")));
    }
    let k = file
        .k
        .iter()
        .map(|row| row.iter().map(|s| expr(s, "K")).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let beta = match file.beta {
        None => vec![Expr::Num(0.0); d],
        Some(b) => b.iter().map(|s| expr(s, "beta")).collect::<Result<_>>()?,
    };
    let problem = ProblemMD::new(
        k,
        beta,
        expr(&file.gamma, "gamma")?,
        families,
        file.p.expand(d, "p")?,
        file.nu.unwrap_or_else(|| vec![1; d]),
        file.mode,
    )?;
    let geometry = match file.geometry {
        None => GeometryMapMD::identity(d),
        Some(g) => GeometryMapMD::new(g.g.iter().map(|s| expr(s, "G")).collect::<Result<_>>()?)?,
    };
    Ok(Config::MultiD(ConfigMD { problem, geometry }))
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional() {
        let c = parse_config(
            r#"{"d":1,"kappa":"1+x","beta":"0","gamma":"0","family":"hyperbolic","alpha":10,
               "mode":"nested","p":3,"geometry":{"G":"(x+x^2)/2","G1":null,"G2":null}}"#,
        )
        .unwrap();
        let Config::OneD(c) = c else { panic!("expected 1D") };
        assert_eq!(c.mode, PhaseMode::Nested);
        assert_eq!(c.geometry.g1.eval_x(1.0).unwrap(), 1.5);
        assert_eq!(c.geometry.g2.eval_x(0.3).unwrap(), 1.0);
    }

    #[test]
    fn two_dimensional() {
        let c = parse_config(
            r#"{"d":2,"K":[["1","0"],["0","1"]],"beta":["0","0"],"gamma":"0","nu":[1,2],
               "p":2,"family":["polynomial","hyperbolic"],"alpha":[0,5],"mode":"nested"}"#,
        )
        .unwrap();
        let Config::MultiD(c) = c else { panic!("expected 2D") };
        assert_eq!(c.problem.nu, vec![1, 2]);
        assert_eq!(c.problem.families[1], SectionFamily::hyperbolic(5.0).unwrap());
    }

    #[test]
    fn schema_violations() {
        let bad = [
            r#"{"kappa":"1","family":"polynomial","p":3}"#,
            r#"{"d":1,"kappa":"1","family":"polynomial","p":3,"extra":1}"#,
            r#"{"d":1,"kappa":"1","family":"hyperbolic","p":3}"#,
            r#"{"d":1,"kappa":"x-1","family":"polynomial","p":3}"#,
            r#"{"d":1,"kappa":"1**2","family":"polynomial","p":3}"#,
            r#"{"d":2,"K":[["1","0"]],"family":"polynomial","p":2}"#,
            r#"not json"#,
        ];
        for b in bad {
            assert!(matches!(parse_config(b), Err(Error::Validation(_))), "{b}");
        }
    }
}
