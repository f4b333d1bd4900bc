//! Tensor-product GB-spline collocation on [0,1]^d, d ∈ {2, 3}, and the
//! matrix-valued symbol of the normalized collocation matrices.

use nalgebra::{Cholesky, DMatrix, DVector};
use rayon::prelude::*;

use crate::collocation::{basis_tables, gb_basis, PhaseMode};
use crate::error::{Error, Result};
use crate::expr::{Env, Expr, Var};
use crate::section::SectionFamily;
use crate::spectral::{quantiles, DEFAULT_ORDER_CAP, OVERSAMPLE};
use crate::symbols::{symbol_fn, SymbolFn, SymbolKind};

const COORDS: [Var; 3] = [Var::X1, Var::X2, Var::X3];

/// Points per direction of the validation grid.
fn validation_side(d: usize) -> usize {
    if d == 2 {
        32
    } else {
        10
    }
}

/// Rank of `idx` in the range lo..=hi under lexicographic order with the
/// last index varying fastest.
pub fn linearize(idx: &[i64], lo: &[i64], hi: &[i64]) -> Result<usize> {
    if idx.len() != lo.len() || lo.len() != hi.len() {
        return Err(Error::Usage("multi-index dimensions differ".into()));
    }
    let mut rank = 0usize;
    for ((&i, &l), &h) in idx.iter().zip(lo).zip(hi) {
        if i < l || i > h {
            return Err(Error::Usage(format!("index {idx:?} outside {lo:?}..{hi:?}")));
        }
        rank = rank * (h - l + 1) as usize + (i - l) as usize;
    }
    Ok(rank)
}

/// Inverse of [`linearize`].
pub fn delinearize(rank: usize, lo: &[i64], hi: &[i64]) -> Result<Vec<i64>> {
    if lo.len() != hi.len() || lo.iter().zip(hi).any(|(l, h)| h < l) {
        return Err(Error::Usage(format!("empty multi-index range {lo:?}..{hi:?}")));
    }
    let total: usize = lo.iter().zip(hi).map(|(l, h)| (h - l + 1) as usize).product();
    if rank >= total {
        return Err(Error::Usage(format!("rank {rank} outside 0..{total}")));
    }
    let mut out = vec![0; lo.len()];
    let mut r = rank;
    for k in (0..lo.len()).rev() {
        let m = (hi[k] - lo[k] + 1) as usize;
        out[k] = lo[k] + (r % m) as i64;
        r /= m;
    }
    Ok(out)
}

/// −e(K∘Hu)eᵀ + β·∇u + γu = f on G([0,1]^d), in the variables x1..xd.
#[derive(Debug, Clone)]
pub struct ProblemMD {
    pub d: usize,
    pub k: Vec<Vec<Expr>>,
    pub beta: Vec<Expr>,
    pub gamma: Expr,
    pub families: Vec<SectionFamily>,
    pub degrees: Vec<usize>,
    pub nu: Vec<usize>,
    pub mode: PhaseMode,
}

fn env_at(x: &[f64]) -> Env {
    let mut env = Env::new();
    for (v, &val) in COORDS.iter().zip(x) {
        env.set(*v, val);
    }
    env
}

/// Tensor grid of `side` points per direction on [0,1]^d.
fn grid(d: usize, side: usize) -> Vec<Vec<f64>> {
    (0..side.pow(d as u32))
        .map(|k| {
            let mut r = k;
            let mut x = vec![0.0; d];
            for c in (0..d).rev() {
                x[c] = (r % side) as f64 / (side - 1) as f64;
                r /= side;
            }
            x
        })
        .collect()
}

fn eval_matrix(m: &[Vec<Expr>], env: &Env) -> Result<DMatrix<f64>> {
    let d = m.len();
    let mut out = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(i, j)] = m[i][j].evaluate(env)?;
        }
    }
    Ok(out)
}

impl ProblemMD {
    /// Checks shapes, symmetry of K, K SPD and γ ≥ 0 on a validation grid.
    pub fn new(
        k: Vec<Vec<Expr>>,
        beta: Vec<Expr>,
        gamma: Expr,
        families: Vec<SectionFamily>,
        degrees: Vec<usize>,
        nu: Vec<usize>,
        mode: PhaseMode,
    ) -> Result<Self> {
        let d = k.len();
        if !(2..=3).contains(&d) {
            return Err(Error::Unsupported(format!("dimension {d}; only d = 2 and d = 3 are supported")));
        }
        let shapes_ok = k.iter().all(|row| row.len() == d)
            && beta.len() == d
            && families.len() == d
            && degrees.len() == d
            && nu.len() == d;
        if !shapes_ok {
            return Err(Error::Validation(format!("per-direction inputs must all have length {d}")));
        }
        if degrees.iter().any(|&p| p < 2) || nu.iter().any(|&v| v == 0) {
            return Err(Error::Validation("degrees must be >= 2 and nu entries >= 1".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if k[i][j] != k[j][i] {
                    return Err(Error::Validation(format!("K is not symmetric: K[{i}][{j}] != K[{j}][{i}]")));
                }
            }
        }
        for x in grid(d, validation_side(d)) {
            let env = env_at(&x);
            let km = eval_matrix(&k, &env)?;
            if Cholesky::new(km).is_none() {
                return Err(Error::Validation(format!("K is not positive definite at {x:?}")));
            }
            let g = gamma.evaluate(&env)?;
            if g < 0.0 {
                return Err(Error::Validation(format!("gamma = {g} is negative at {x:?}")));
            }
            for b in &beta {
                b.evaluate(&env)?;
            }
        }
        Ok(ProblemMD { d, k, beta, gamma, families, degrees, nu, mode })
    }

    /// K = I, β = 0, γ = `gamma`, the same family and degree in every direction.
    pub fn laplacian(d: usize, p: usize, family: SectionFamily, mode: PhaseMode, gamma: f64) -> Result<Self> {
        let k = (0..d)
            .map(|i| (0..d).map(|j| Expr::Num(if i == j { 1.0 } else { 0.0 })).collect())
            .collect();
        Self::new(k, vec![Expr::Num(0.0); d], Expr::Num(gamma), vec![family; d], vec![p; d], vec![1; d], mode)
    }

    /// Family used by the symbol in direction `r`.
    fn symbol_family(&self, r: usize) -> SectionFamily {
        self.mode.symbol_family(self.families[r])
    }
}

/// G with its Jacobian J_ab = ∂G_a/∂x_b and second derivatives ∂²G_a/∂x_b∂x_c.
#[derive(Debug, Clone)]
pub struct GeometryMapMD {
    pub g: Vec<Expr>,
    pub jacobian: Vec<Vec<Expr>>,
    pub hessians: Vec<Vec<Vec<Expr>>>,
}

impl GeometryMapMD {
    pub fn identity(d: usize) -> Self {
        Self::from_components((0..d).map(|a| Expr::Var(COORDS[a])).collect())
    }

    fn from_components(g: Vec<Expr>) -> Self {
        let d = g.len();
        let jacobian: Vec<Vec<Expr>> =
            g.iter().map(|ga| (0..d).map(|b| ga.differentiate(COORDS[b])).collect()).collect();
        let hessians = jacobian
            .iter()
            .map(|row| (0..d).map(|b| (0..d).map(|c| row[b].differentiate(COORDS[c])).collect()).collect())
            .collect();
        GeometryMapMD { g, jacobian, hessians }
    }

    /// Builds from component expressions; derivatives are symbolic. The
    /// Jacobian must be nonsingular with a constant sign of its determinant
    /// on the validation grid.
    pub fn new(g: Vec<Expr>) -> Result<Self> {
        let d = g.len();
        if !(2..=3).contains(&d) {
            return Err(Error::Unsupported(format!("geometry of dimension {d}")));
        }
        let map = Self::from_components(g);
        if d == 3 && !map.is_identity() {
            return Err(Error::Unsupported("only the identity geometry is supported for d = 3".into()));
        }
        let mut sign = 0.0;
        for x in grid(d, validation_side(d)) {
            let env = env_at(&x);
            for ga in &map.g {
                ga.evaluate(&env)?;
            }
            let det = eval_matrix(&map.jacobian, &env)?.determinant();
            if det == 0.0 || (sign != 0.0 && det.signum() != sign) {
                return Err(Error::Validation(format!("Jacobian is singular or changes sign at {x:?}")));
            }
            sign = det.signum();
        }
        Ok(map)
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn is_identity(&self) -> bool {
        self.g.iter().enumerate().all(|(a, e)| *e == Expr::Var(COORDS[a]))
    }

    /// Parametric coefficients at x̂: Ĉ = J⁻¹K(G)J⁻ᵀ multiplying the
    /// Hessian, b̂ multiplying the gradient, and γ(G).
    fn transformed(&self, problem: &ProblemMD, xh: &[f64]) -> Result<(DMatrix<f64>, DVector<f64>, f64)> {
        let d = self.dim();
        let env = env_at(xh);
        let j = eval_matrix(&self.jacobian, &env)?;
        let jinv = j
            .try_inverse()
            .ok_or_else(|| Error::Validation(format!("singular Jacobian at {xh:?}")))?;
        let x: Vec<f64> = self.g.iter().map(|e| e.evaluate(&env)).collect::<Result<_>>()?;
        let phys = env_at(&x);
        let k = eval_matrix(&problem.k, &phys)?;
        let c = &jinv * k * jinv.transpose();
        let mut w = DVector::zeros(d);
        for a in 0..d {
            let hg = eval_matrix(&self.hessians[a], &env)?;
            w[a] = (&c * hg).trace() + problem.beta[a].evaluate(&phys)?;
        }
        let b = jinv * w;
        Ok((c, b, problem.gamma.evaluate(&phys)?))
    }
}

/// The assembled d-dimensional collocation matrix.
#[derive(Debug, Clone)]
pub struct MdSystem {
    pub n: usize,
    /// Number of basis functions per direction, n_r + p_r − 2.
    pub dims: Vec<usize>,
    pub a: DMatrix<f64>,
    pub a_normalized: DMatrix<f64>,
}

/// 1D tables N, N′, N″ at the Greville points for one direction.
struct Tables {
    xi: Vec<f64>,
    d: [DMatrix<f64>; 3],
}

pub fn assemble_md(problem: &ProblemMD, geometry: &GeometryMapMD, n: usize) -> Result<MdSystem> {
    assemble_md_capped(problem, geometry, n, DEFAULT_ORDER_CAP)
}

pub fn assemble_md_capped(problem: &ProblemMD, geometry: &GeometryMapMD, n: usize, cap: usize) -> Result<MdSystem> {
    let d = problem.d;
    if geometry.dim() != d {
        return Err(Error::Usage(format!("geometry has dimension {}, problem {d}", geometry.dim())));
    }
    let mut tables = Vec::with_capacity(d);
    for r in 0..d {
        let nr = problem.nu[r] * n;
        let basis = gb_basis(nr, problem.degrees[r], problem.families[r], problem.mode)?;
        let (xi, k, h, m) = basis_tables(&basis);
        let s = nr as f64;
        tables.push(Tables { xi, d: [m, h * s, k * (-s * s)] });
    }
    let dims: Vec<usize> = tables.iter().map(|t| t.xi.len()).collect();
    let order: usize = dims.iter().product();
    if order > cap {
        return Err(Error::Usage(format!("matrix order {order} exceeds the cap {cap}")));
    }
    let lo = vec![0i64; d];
    let hi: Vec<i64> = dims.iter().map(|&m| m as i64 - 1).collect();
    let rows: Vec<Vec<f64>> = (0..order)
        .into_par_iter()
        .map(|row| {
            let ii = delinearize(row, &lo, &hi)?;
            let xh: Vec<f64> = (0..d).map(|r| tables[r].xi[ii[r] as usize]).collect();
            let (c, b, g) = geometry.transformed(problem, &xh)?;
            // Factor in direction r, derivative order k, for function index j.
            let f = |r: usize, k: usize, j: usize| tables[r].d[k][(ii[r] as usize, j)];
            let mut out = vec![0.0; order];
            for (col, slot) in out.iter_mut().enumerate() {
                let jj = delinearize(col, &lo, &hi)?;
                let prod = |orders: &[usize]| (0..d).map(|r| f(r, orders[r], jj[r] as usize)).product::<f64>();
                if (0..d).any(|r| (0..3).all(|k| f(r, k, jj[r] as usize) == 0.0)) {
                    continue;
                }
                let mut acc = g * prod(&vec![0; d]);
                for a in 0..d {
                    let mut ord = vec![0; d];
                    ord[a] = 1;
                    acc += b[a] * prod(&ord);
                    for bb in 0..d {
                        let mut ord = vec![0; d];
                        ord[a] += 1;
                        ord[bb] += 1;
                        acc -= c[(a, bb)] * prod(&ord);
                    }
                }
                *slot = acc;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let a = DMatrix::from_fn(order, order, |i, j| rows[i][j]);
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("collocation matrix has non-finite entries".into()));
    }
    let a_normalized = &a / (n * n) as f64;
    Ok(MdSystem { n, dims, a, a_normalized })
}

/// Per-direction f, g, h used to form the matrix symbol.
#[derive(Debug, Clone)]
pub struct MdSymbol {
    f: Vec<SymbolFn>,
    g: Vec<SymbolFn>,
    h: Vec<SymbolFn>,
}

impl MdSymbol {
    pub fn new(degrees: &[usize], families: &[SectionFamily]) -> Result<Self> {
        if degrees.len() != families.len() {
            return Err(Error::Usage("degrees and families differ in length".into()));
        }
        let build = |kind| {
            degrees
                .iter()
                .zip(families)
                .map(|(&p, &fam)| symbol_fn(kind, p, fam))
                .collect::<Result<Vec<_>>>()
        };
        Ok(MdSymbol { f: build(SymbolKind::F)?, g: build(SymbolKind::G)?, h: build(SymbolKind::H)? })
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    /// H(θ): f in direction i and h elsewhere on the diagonal; g in
    /// directions i and j and h elsewhere off the diagonal.
    pub fn matrix(&self, theta: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let hv: Vec<f64> = (0..d).map(|r| self.h[r].eval(theta[r])).collect();
        let gv: Vec<f64> = (0..d).map(|r| self.g[r].eval(theta[r])).collect();
        let fv: Vec<f64> = (0..d).map(|r| self.f[r].eval(theta[r])).collect();
        DMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|r| match (r == i, r == j) {
                    (true, true) => fv[r],
                    (true, false) | (false, true) => gv[r],
                    (false, false) => hv[r],
                })
                .product()
        })
    }
}

pub fn symbol_matrix_h(degrees: &[usize], families: &[SectionFamily], theta: &[f64]) -> Result<DMatrix<f64>> {
    if theta.len() != degrees.len() {
        return Err(Error::Usage("theta has the wrong dimension".into()));
    }
    Ok(MdSymbol::new(degrees, families)?.matrix(theta))
}

/// Sorted samples of ν(J⁻¹K(G)J⁻ᵀ ∘ H)νᵀ over a midpoint lattice of
/// [0,1]^d × [−π,π]^d, thinned to `count` quantiles.
pub fn md_symbol_samples(problem: &ProblemMD, geometry: &GeometryMapMD, count: usize) -> Result<Vec<f64>> {
    let d = problem.d;
    if count == 0 {
        return Ok(Vec::new());
    }
    let fams: Vec<SectionFamily> = (0..d).map(|r| problem.symbol_family(r)).collect();
    let sym = MdSymbol::new(&problem.degrees, &fams)?;
    let total = if count >= 1 << 16 { count } else { count * OVERSAMPLE };
    let side = (total as f64).powf(1.0 / (2 * d) as f64).ceil() as usize;
    let cells = side.pow(d as u32);
    let point = |k: usize, lo: f64, width: f64| -> Vec<f64> {
        let mut r = k;
        let mut x = vec![0.0; d];
        for c in (0..d).rev() {
            x[c] = lo + width * ((r % side) as f64 + 0.5) / side as f64;
            r /= side;
        }
        x
    };
    let nu: Vec<f64> = problem.nu.iter().map(|&v| v as f64).collect();
    let weights: Vec<DMatrix<f64>> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let x = point(k, 0.0, 1.0);
            let (c, _, _) = geometry.transformed(problem, &x)?;
            Ok(DMatrix::from_fn(d, d, |i, j| nu[i] * nu[j] * c[(i, j)]))
        })
        .collect::<Result<_>>()?;
    let symbols: Vec<DMatrix<f64>> = (0..cells)
        .into_par_iter()
        .map(|k| sym.matrix(&point(k, -std::f64::consts::PI, 2.0 * std::f64::consts::PI)))
        .collect();
    let mut values: Vec<f64> = weights
        .par_iter()
        .flat_map_iter(|w| symbols.iter().map(move |h| w.component_mul(h).sum()))
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(if values.len() == count { values } else { quantiles(&values, count) })
}
