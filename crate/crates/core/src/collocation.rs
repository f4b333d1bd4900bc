//! Open-knot GB-spline bases on [0,1] and the 1D collocation matrices for
//! −κu″ + βu′ + γu = f at the Greville abscissae.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use crate::cardinal::{cardinal_spline, seed_pieces};
use crate::error::{Error, Result};
use crate::expr::{Env, Expr};
use crate::section::{Family, PiecewiseFn, SectionFamily};
use crate::symbols::{symbol_fn, SymbolKind};

/// Number of points used to validate coefficients and geometry maps.
pub const VALIDATION_POINTS: usize = 1000;

/// Relative singular-value cut-off for numerical rank.
pub const RANK_TOL: f64 = 1e-8;

/// Knots t₁..t_{n+2p+1} with p+1 fold end knots and t_{p+i+1} = i/n.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    n: usize,
    p: usize,
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n < 2 || p < 2 {
            return Err(Error::Usage(format!("need n >= 2 and p >= 2, got n={n}, p={p}")));
        }
        let mut knots = vec![0.0; p + 1];
        knots.extend((1..n).map(|i| i as f64 / n as f64));
        knots.extend(std::iter::repeat_n(1.0, p + 1));
        Ok(KnotVector { n, p, knots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// All knots; `knots()[k]` is t_{k+1}.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// t_i, 1-based.
    pub fn t(&self, i: usize) -> f64 {
        self.knots[i - 1]
    }

    /// ξ_{i,p} = (t_{i+1} + … + t_{i+p})/p, 1-based, i = 1..n+p.
    pub fn greville(&self, i: usize) -> f64 {
        (i + 1..=i + self.p).map(|k| self.t(k)).sum::<f64>() / self.p as f64
    }
}

/// Interior Greville abscissae ξ_{2,p}, …, ξ_{n+p−1,p}.
pub fn greville_abscissae(knots: &KnotVector) -> Vec<f64> {
    (2..knots.n + knots.p).map(|i| knots.greville(i)).collect()
}

/// How the phase scales with the number of intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    /// μ = α: effective phase α/n per interval, spaces nest under refinement.
    Nested,
    /// μ = nα: effective phase α per interval at every n.
    #[serde(rename = "nonnested")]
    NonNested,
}

impl PhaseMode {
    pub fn parse(s: &str) -> Result<PhaseMode> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "nested" => Ok(PhaseMode::Nested),
            "nonnested" => Ok(PhaseMode::NonNested),
            other => Err(Error::Usage(format!("unknown mode '{other}'"))),
        }
    }

    /// Phase μ in the global coordinate.
    pub fn global_phase(self, alpha: f64, n: usize) -> f64 {
        match self {
            PhaseMode::Nested => alpha,
            PhaseMode::NonNested => alpha * n as f64,
        }
    }

    /// Family of the symbol the normalized matrices distribute like.
    pub fn symbol_family(self, family: SectionFamily) -> SectionFamily {
        match self {
            PhaseMode::Nested => SectionFamily::polynomial(),
            PhaseMode::NonNested => family,
        }
    }
}

impl fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseMode::Nested => "nested",
            PhaseMode::NonNested => "nonnested",
        })
    }
}

/// Smallest n for which the trigonometric effective phase α/n is below π.
pub fn min_feasible_n(alpha: f64) -> usize {
    ((alpha / PI).floor() as usize + 1).max(2)
}

fn check_feasible(n: usize, family: SectionFamily, mode: PhaseMode) -> Result<()> {
    if family.kind != Family::Trigonometric {
        return Ok(());
    }
    let alpha = family.phase;
    match mode {
        PhaseMode::NonNested if alpha >= PI => Err(Error::Constraint(format!(
            "non-nested trigonometric splines need alpha < pi, got {alpha}"
        ))),
        PhaseMode::Nested if alpha / n as f64 >= PI => Err(Error::Constraint(format!(
            "nested trigonometric splines with alpha={alpha} need n >= {}, got {n}",
            min_feasible_n(alpha)
        ))),
        _ => Ok(()),
    }
}

/// The n+p GB-splines N_{1,p}, …, N_{n+p,p}; each is stored over its own
/// knot span [t_i, t_{i+p+1}].
#[derive(Debug, Clone)]
pub struct GBBasis {
    knots: KnotVector,
    family: SectionFamily,
    mode: PhaseMode,
    /// Family with the global phase μ.
    scaled: SectionFamily,
    splines: Vec<PiecewiseFn>,
    first: Vec<PiecewiseFn>,
    second: Vec<PiecewiseFn>,
    deltas: Vec<f64>,
}

pub fn gb_basis(n: usize, p: usize, family: SectionFamily, mode: PhaseMode) -> Result<GBBasis> {
    let knots = KnotVector::new(n, p)?;
    check_feasible(n, family, mode)?;
    let scaled = match family.kind {
        Family::Polynomial => family,
        _ => family.with_phase(mode.global_phase(family.phase, n))?,
    };
    let t = knots.knots();
    // Degree 1: Ṽ on [t_i, t_{i+1}), Ũ on [t_{i+1}, t_{i+2}).
    let mut level: Vec<PiecewiseFn> = (0..n + 2 * p - 1)
        .map(|k| {
            let bp = t[k..k + 3].to_vec();
            let piece = |j: usize, left: bool| {
                let w = bp[j + 1] - bp[j];
                if w == 0.0 {
                    Vec::new()
                } else {
                    let (u, v) = seed_pieces(scaled, w);
                    if left {
                        v
                    } else {
                        u
                    }
                }
            };
            PiecewiseFn::new(bp.clone(), vec![piece(0, true), piece(1, false)], 1, scaled)
        })
        .collect::<Result<_>>()?;
    for q in 1..p {
        let integrals: Vec<PiecewiseFn> = level.iter().map(normalized_integral).collect::<Result<_>>()?;
        // N_{i,q+1} = I_i − I_{i+1} over [t_i, t_{i+q+2}].
        level = integrals
            .windows(2)
            .map(|w| {
                let hi = w[1].breakpoints()[w[1].breakpoints().len() - 1];
                let left = append_one(&w[0], hi)?;
                let right = prepend_zero(&w[1], w[0].breakpoints()[0])?;
                PiecewiseFn::linear_combination(&[(1.0, &left), (-1.0, &right)])
            })
            .collect::<Result<_>>()?;
        debug_assert_eq!(level.len(), n + 2 * p - 1 - q);
    }
    let deltas = level
        .iter()
        .map(|f| {
            let (lo, hi) = f.support();
            if hi > lo {
                Ok(1.0 / f.integral()?)
            } else {
                Ok(0.0)
            }
        })
        .collect::<Result<_>>()?;
    let first: Vec<PiecewiseFn> = level.iter().map(|f| f.derivative()).collect();
    let second = first.iter().map(|f| f.derivative()).collect();
    Ok(GBBasis { knots, family, mode, scaled, splines: level, first, second, deltas })
}

/// δ∫_{t_i}^x f over the span of f. A function with degenerate support
/// contributes the unit step at t_i, the limit of the normalized integral.
fn normalized_integral(f: &PiecewiseFn) -> Result<PiecewiseFn> {
    let (lo, hi) = f.support();
    let degree = f.degree() + 1;
    if hi > lo {
        let a = f.antiderivative()?;
        let total = a.eval(hi);
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Numerical(format!("spline integral {total} is not positive")));
        }
        let pieces = a.pieces().iter().map(|c| c.iter().map(|v| v / total).collect()).collect();
        PiecewiseFn::new(f.breakpoints().to_vec(), pieces, degree, f.family())
    } else {
        PiecewiseFn::zero(f.breakpoints().to_vec(), degree, f.family())
    }
}

fn constant_one(degree: usize) -> Vec<f64> {
    let mut c = vec![0.0; degree + 1];
    c[0] = 1.0;
    c
}

/// Continues a normalized integral by the constant 1 up to `hi`.
fn append_one(f: &PiecewiseFn, hi: f64) -> Result<PiecewiseFn> {
    let mut bp = f.breakpoints().to_vec();
    let last = bp[bp.len() - 1];
    bp.push(hi);
    let mut pieces = f.pieces().to_vec();
    pieces.push(if hi > last { constant_one(f.degree()) } else { Vec::new() });
    PiecewiseFn::new(bp, pieces, f.degree(), f.family())
}

/// Extends `f` to the left down to `lo` with one zero piece.
fn prepend_zero(f: &PiecewiseFn, lo: f64) -> Result<PiecewiseFn> {
    let mut bp = vec![lo];
    bp.extend_from_slice(f.breakpoints());
    let mut pieces = vec![if bp[1] > lo { vec![0.0; f.degree() + 1] } else { Vec::new() }];
    pieces.extend(f.pieces().iter().cloned());
    PiecewiseFn::new(bp, pieces, f.degree(), f.family())
}

impl GBBasis {
    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn n(&self) -> usize {
        self.knots.n
    }

    pub fn p(&self) -> usize {
        self.knots.p
    }

    pub fn family(&self) -> SectionFamily {
        self.family
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    /// Per-interval phase μ/n of the sections.
    pub fn effective_phase(&self) -> f64 {
        self.scaled.phase / self.n() as f64
    }

    /// Family of the cardinal spline that interior splines are copies of.
    pub fn cardinal_family(&self) -> SectionFamily {
        match self.family.kind {
            Family::Polynomial => self.family,
            k => SectionFamily { kind: k, phase: self.effective_phase() },
        }
    }

    pub fn len(&self) -> usize {
        self.splines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.splines.is_empty()
    }

    /// N_{i,p}, 1-based.
    pub fn spline(&self, i: usize) -> &PiecewiseFn {
        &self.splines[i - 1]
    }

    /// δ_{i,p} = 1/∫N_{i,p}, 1-based.
    pub fn delta(&self, i: usize) -> f64 {
        self.deltas[i - 1]
    }

    /// r-th derivative (r ≤ 2) of N_{i,p} at x.
    pub fn eval(&self, i: usize, r: usize, x: f64) -> f64 {
        match r {
            0 => self.splines[i - 1].eval(x),
            1 => self.first[i - 1].eval(x),
            2 => self.second[i - 1].eval(x),
            _ => self.splines[i - 1].nth_derivative(r).eval(x),
        }
    }

    /// Indices i with x inside [t_i, t_{i+p+1}].
    fn active(&self, x: f64) -> std::ops::RangeInclusive<usize> {
        let p = self.p();
        let n = self.n();
        let lo = (1..=n + p).find(|&i| self.knots.t(i + p + 1) >= x).unwrap_or(n + p);
        let hi = (1..=n + p).rev().find(|&i| self.knots.t(i) <= x).unwrap_or(1);
        lo..=hi
    }
}

/// κ, β, γ on the physical domain and the right-hand side f.
#[derive(Debug, Clone)]
pub struct ProblemCoefficients {
    pub kappa: Expr,
    pub beta: Expr,
    pub gamma: Expr,
    pub f: Expr,
}

fn validation_grid() -> impl Iterator<Item = f64> {
    (0..VALIDATION_POINTS).map(|k| k as f64 / (VALIDATION_POINTS - 1) as f64)
}

impl ProblemCoefficients {
    /// Checks κ > 0 and γ ≥ 0 on the validation grid.
    pub fn new(kappa: Expr, beta: Expr, gamma: Expr, f: Expr) -> Result<Self> {
        for x in validation_grid() {
            let k = kappa.eval_x(x)?;
            if k <= 0.0 {
                return Err(Error::Validation(format!("kappa({x}) = {k} is not positive")));
            }
            let g = gamma.eval_x(x)?;
            if g < 0.0 {
                return Err(Error::Validation(format!("gamma({x}) = {g} is negative")));
            }
            beta.eval_x(x)?;
        }
        Ok(ProblemCoefficients { kappa, beta, gamma, f })
    }

    pub fn from_strs(kappa: &str, beta: &str, gamma: &str) -> Result<Self> {
        Self::new(Expr::parse(kappa)?, Expr::parse(beta)?, Expr::parse(gamma)?, Expr::Num(0.0))
    }
}

/// x = G(x̂) with its first two derivatives.
#[derive(Debug, Clone)]
pub struct GeometryMap1D {
    pub g: Expr,
    pub g1: Expr,
    pub g2: Expr,
}

impl GeometryMap1D {
    /// Missing derivatives are obtained symbolically from G.
    pub fn new(g: Expr, g1: Option<Expr>, g2: Option<Expr>) -> Result<Self> {
        let g1 = g1.unwrap_or_else(|| g.differentiate(crate::expr::Var::X));
        let g2 = g2.unwrap_or_else(|| g1.differentiate(crate::expr::Var::X));
        for (x, want) in [(0.0, 0.0), (1.0, 1.0)] {
            let v = g.eval_x(x)?;
            if (v - want).abs() > 1e-10 {
                return Err(Error::Validation(format!("G({x}) = {v}, expected {want}")));
            }
        }
        for x in validation_grid() {
            let d = g1.eval_x(x)?;
            if d <= 0.0 {
                return Err(Error::Validation(format!("G'({x}) = {d} is not positive")));
            }
            g2.eval_x(x)?;
        }
        Ok(GeometryMap1D { g, g1, g2 })
    }

    pub fn identity() -> Self {
        use crate::expr::Var;
        GeometryMap1D { g: Expr::Var(Var::X), g1: Expr::Num(1.0), g2: Expr::Num(0.0) }
    }

    /// (κ̂, β̂, γ̂) at the parametric point x̂.
    pub fn transformed(&self, problem: &ProblemCoefficients, xh: f64) -> Result<(f64, f64, f64)> {
        let env = Env::x(xh);
        let x = self.g.evaluate(&env)?;
        let (d1, d2) = (self.g1.evaluate(&env)?, self.g2.evaluate(&env)?);
        if d1 <= 0.0 {
            return Err(Error::Validation(format!("G'({xh}) = {d1} is not positive")));
        }
        let phys = Env::x(x);
        let k = problem.kappa.evaluate(&phys)?;
        let b = problem.beta.evaluate(&phys)?;
        let g = problem.gamma.evaluate(&phys)?;
        Ok((k / (d1 * d1), k * d2 / (d1 * d1 * d1) + b / d1, g))
    }

    /// κ̂ = κ(G)/(G′)² at x̂.
    pub fn kappa_hat(&self, problem: &ProblemCoefficients, xh: f64) -> Result<f64> {
        Ok(self.transformed(problem, xh)?.0)
    }
}

#[derive(Debug, Clone)]
pub struct CollocationSystem {
    pub n: usize,
    pub p: usize,
    pub family: SectionFamily,
    pub mode: PhaseMode,
    /// Per-interval phase of the basis.
    pub effective_phase: f64,
    /// n²K = [−N″_{j+1}(ξ_{i+1})].
    pub k: DMatrix<f64>,
    /// nH = [N′_{j+1}(ξ_{i+1})].
    pub h: DMatrix<f64>,
    /// M = [N_{j+1}(ξ_{i+1})].
    pub m: DMatrix<f64>,
    pub d_kappa: Vec<f64>,
    pub d_beta: Vec<f64>,
    pub d_gamma: Vec<f64>,
    /// n²D(κ̂)K + nD(β̂)H + D(γ̂)M.
    pub a: DMatrix<f64>,
    pub a_normalized: DMatrix<f64>,
    pub xi: Vec<f64>,
}

impl CollocationSystem {
    pub fn order(&self) -> usize {
        self.xi.len()
    }
}

/// Value, first and second derivative tables of N_{j+1}(ξ_{i+1}), i, j = 1..n+p−2,
/// scaled to K, H, M.
pub fn basis_tables(basis: &GBBasis) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let xi = greville_abscissae(basis.knots());
    let n = basis.n() as f64;
    let dim = xi.len();
    let rows: Vec<Vec<(usize, f64, f64, f64)>> = xi
        .par_iter()
        .map(|&x| {
            basis
                .active(x)
                .filter(|&i| i >= 2 && i < basis.len())
                .map(|i| {
                    let v = basis.eval(i, 0, x);
                    let d1 = basis.eval(i, 1, x);
                    let d2 = basis.eval(i, 2, x);
                    (i - 2, -d2 / (n * n), d1 / n, v)
                })
                .collect()
        })
        .collect();
    let mut k = DMatrix::zeros(dim, dim);
    let mut h = DMatrix::zeros(dim, dim);
    let mut m = DMatrix::zeros(dim, dim);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, kv, hv, mv) in row {
            k[(r, c)] = kv;
            h[(r, c)] = hv;
            m[(r, c)] = mv;
        }
    }
    (xi, k, h, m)
}

pub fn assemble(problem: &ProblemCoefficients, geometry: &GeometryMap1D, basis: &GBBasis) -> Result<CollocationSystem> {
    let (xi, k, h, m) = basis_tables(basis);
    let coeffs: Vec<(f64, f64, f64)> =
        xi.par_iter().map(|&x| geometry.transformed(problem, x)).collect::<Result<_>>()?;
    let n = basis.n() as f64;
    let dim = xi.len();
    let a = DMatrix::from_fn(dim, dim, |i, j| {
        let (kh, bh, gh) = coeffs[i];
        n * n * kh * k[(i, j)] + n * bh * h[(i, j)] + gh * m[(i, j)]
    });
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("collocation matrix has non-finite entries".into()));
    }
    let a_normalized = &a / (n * n);
    Ok(CollocationSystem {
        n: basis.n(),
        p: basis.p(),
        family: basis.family(),
        mode: basis.mode(),
        effective_phase: basis.effective_phase(),
        k,
        h,
        m,
        d_kappa: coeffs.iter().map(|c| c.0).collect(),
        d_beta: coeffs.iter().map(|c| c.1).collect(),
        d_gamma: coeffs.iter().map(|c| c.2).collect(),
        a,
        a_normalized,
        xi,
    })
}

/// Structure of the central block and the low-rank corrections.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub p: usize,
    pub order: usize,
    /// 1-based first and last central row, if any.
    pub central_rows: Option<(usize, usize)>,
    pub note: Option<String>,
    pub k_central_toeplitz: Option<bool>,
    pub h_central_toeplitz: Option<bool>,
    pub m_central_toeplitz: Option<bool>,
    pub k_central_symmetric: Option<bool>,
    pub m_central_symmetric: Option<bool>,
    pub h_central_skew: Option<bool>,
    /// Largest deviation of the central rows from the cardinal-spline samples.
    pub central_row_error: Option<f64>,
    pub rank_r: Option<usize>,
    pub rank_q: Option<usize>,
    pub rank_s: Option<usize>,
    pub rank_bound: usize,
    pub rank_bound_ok: Option<bool>,
}

impl StructureReport {
    pub fn is_central_toeplitz(&self) -> bool {
        [self.k_central_toeplitz, self.h_central_toeplitz, self.m_central_toeplitz]
            .iter()
            .all(|f| *f == Some(true))
    }
}

/// Tolerance for Toeplitz and symmetry flags.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// True when n is large enough for the matrices to have a central row.
pub fn has_central_rows(n: usize, p: usize) -> bool {
    n + (p % 2) > 2 * p
}

pub fn numerical_rank(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * max).count()
}

fn block_is_toeplitz(a: &DMatrix<f64>, lo: usize, hi: usize) -> bool {
    (lo + 1..=hi).all(|i| (lo + 1..=hi).all(|j| (a[(i, j)] - a[(i - 1, j - 1)]).abs() <= STRUCTURE_TOL))
}

fn block_symmetry(a: &DMatrix<f64>, lo: usize, hi: usize, sign: f64) -> bool {
    (lo..=hi).all(|i| (lo..=hi).all(|j| (a[(i, j)] - sign * a[(j, i)]).abs() <= STRUCTURE_TOL))
}

pub fn structure_report(sys: &CollocationSystem) -> Result<StructureReport> {
    let (n, p) = (sys.n, sys.p);
    let order = sys.order();
    let rank_bound = 2 * (3 * p / 2) - 2;
    if !has_central_rows(n, p) {
        return Ok(StructureReport {
            n,
            p,
            order,
            central_rows: None,
            note: Some(format!("no central rows: n = {n} < 2p + 1 - (p mod 2) = {}", 2 * p + 1 - p % 2)),
            k_central_toeplitz: None,
            h_central_toeplitz: None,
            m_central_toeplitz: None,
            k_central_symmetric: None,
            m_central_symmetric: None,
            h_central_skew: None,
            central_row_error: None,
            rank_r: None,
            rank_q: None,
            rank_s: None,
            rank_bound,
            rank_bound_ok: None,
        });
    }
    let cfam = match sys.family.kind {
        Family::Polynomial => sys.family,
        k => SectionFamily { kind: k, phase: sys.effective_phase },
    };
    let phi = cardinal_spline(cfam, p)?;
    let d1 = phi.derivative(1)?;
    let d2 = phi.pw().nth_derivative(2);
    let c = (p + 1) as f64 / 2.0;
    let at = |i: usize, j: usize| c + i as f64 - j as f64;
    let tk = DMatrix::from_fn(order, order, |i, j| -d2.eval(at(i, j)));
    let th = DMatrix::from_fn(order, order, |i, j| d1.eval(at(i, j)));
    let tm = DMatrix::from_fn(order, order, |i, j| phi.eval(at(i, j)));
    // T(f) from the symbol must agree with the sampled cardinal spline.
    let tf = crate::spectral::toeplitz_real(
        &crate::spectral::ToeplitzSpec::from_symbol(&symbol_fn(SymbolKind::F, p, cfam)?),
        order,
    )?;
    let r = &sys.k - &tf;
    let q = &sys.h - &th;
    let s = &sys.m - &tm;

    let (first, last) = (3 * p / 2, n + p - 1 - 3 * p / 2);
    let mut central_row_error: f64 = 0.0;
    for i in first - 1..last {
        for j in 0..order {
            central_row_error = central_row_error
                .max((sys.k[(i, j)] - tk[(i, j)]).abs())
                .max((sys.h[(i, j)] - th[(i, j)]).abs())
                .max((sys.m[(i, j)] - tm[(i, j)]).abs());
        }
    }
    // Central block: 1-based rows/cols p..n−1.
    let (lo, hi) = (p - 1, n - 2);
    let rank_r = numerical_rank(&r);
    Ok(StructureReport {
        n,
        p,
        order,
        central_rows: Some((first, last)),
        note: None,
        k_central_toeplitz: Some(block_is_toeplitz(&sys.k, lo, hi)),
        h_central_toeplitz: Some(block_is_toeplitz(&sys.h, lo, hi)),
        m_central_toeplitz: Some(block_is_toeplitz(&sys.m, lo, hi)),
        k_central_symmetric: Some(block_symmetry(&sys.k, lo, hi, 1.0)),
        m_central_symmetric: Some(block_symmetry(&sys.m, lo, hi, 1.0)),
        h_central_skew: Some(block_symmetry(&sys.h, lo, hi, -1.0)),
        central_row_error: Some(central_row_error),
        rank_r: Some(rank_r),
        rank_q: Some(numerical_rank(&q)),
        rank_s: Some(numerical_rank(&s)),
        rank_bound,
        rank_bound_ok: Some(rank_r <= rank_bound),
    })
}

/// Sorted samples of κ̂(x)·f_p(θ) for comparison with the spectrum of A/n².
pub fn distribution_samples(
    problem: &ProblemCoefficients,
    geometry: &GeometryMap1D,
    p: usize,
    family: SectionFamily,
    mode: PhaseMode,
    count: usize,
) -> Result<Vec<f64>> {
    let f = symbol_fn(SymbolKind::F, p, mode.symbol_family(family))?;
    crate::spectral::lattice_samples_1d(|x, t| Ok(geometry.kappa_hat(problem, x)? * f.eval(t)), count)
}
