//! Command-line front end. [`dispatch`] is the whole program; `main` only
//! forwards the process arguments and exit code.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::cardinal::cardinal_spline;
use crate::collocation::{assemble, distribution_samples, gb_basis, PhaseMode};
use crate::config::{load_config, Config, Config1D, ConfigMD};
use crate::error::{Error, Result};
use crate::multidim::{assemble_md, md_symbol_samples};
use crate::section::{Family, SectionFamily};
use crate::spectral::{eigenvalues_dense, toeplitz_real, weyl_report, DistributionReport, ToeplitzSpec};
use crate::symbols::{bounds_report, decay_ratio, symbol_fn, symbol_max, theta_grid, SymbolKind, DEFAULT_GRID};

/// Symmetry tolerance handed to the eigensolver.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "gbspec", version, about = "GB-spline symbols, collocation matrices and spectral checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    /// polynomial, hyperbolic or trigonometric
    #[arg(long, default_value = "polynomial")]
    family: String,
    /// Phase α (ignored for polynomial)
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

impl FamilyArgs {
    fn family(&self) -> Result<SectionFamily> {
        SectionFamily::new(Family::parse(&self.family)?, self.alpha)
    }
}

#[derive(Debug, Clone, Args)]
struct OutputArgs {
    /// Write to this file instead of standard output
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Bin,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    A,
    Normalized,
    K,
    H,
    M,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Values of a cardinal GB-spline (or a derivative) on [0, p+1]
    Cardinal {
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        derivative: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Symbol h, g or f on an equispaced grid of [-π, π]
    Symbol {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Upper and lower bound scan of h_p and f_p
    Bounds {
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// f_p(π)/max f_p over a range of degrees
    Decay {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = 2)]
        pmin: usize,
        #[arg(long, default_value_t = 14)]
        pmax: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Collocation matrix of a problem file
    Assemble {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "a")]
        which: Which,
        #[arg(long, value_enum, default_value = "csv")]
        format: MatrixFormat,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalues of an assembled (normalized) matrix or of a matrix file
    Eig {
        #[arg(long, conflicts_with = "matrix", requires = "n")]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Matrix in the CSV or binary layout written by `assemble`
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalue distribution report for a 1D problem
    Distribution {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated list of n
        #[arg(long, value_delimiter = ',', default_value = "64,128")]
        n: Vec<usize>,
        /// Outlier thresholds as fractions of max f
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalue distribution report for a 2D or 3D problem
    DistributionMd {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "12,20")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Toeplitz matrix generated by a symbol, or its eigenvalues
    Toeplitz {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        p: usize,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eig: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Runs the tool on `args` (program name first). Returns the exit code:
/// 0 on success, 1 for bad input, 2 for numerical failure.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    configure_threads();
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Sizes the global thread pool from GBSPEC_THREADS, once per process.
fn configure_threads() {
    if let Some(n) = std::env::var("GBSPEC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cmd: Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Cardinal { p, fam, derivative, points, out } => {
            let cs = cardinal_spline(fam.family()?, p)?;
            let f = if derivative == 0 { cs.pw().clone() } else { cs.derivative(derivative)? };
            if points < 2 {
                return Err(Error::Usage("need at least 2 points".into()));
            }
            let rows = (0..points).map(|k| {
                let t = (p + 1) as f64 * k as f64 / (points - 1) as f64;
                vec![t, f.eval(t)]
            });
            emit(&out, stdout, |w| write_csv(w, &["t", "value"], rows))
        }
        Command::Symbol { kind, p, fam, grid, out } => {
            let s = symbol_fn(SymbolKind::parse(&kind)?, p, fam.family()?)?;
            if grid < 2 {
                return Err(Error::Usage("grid needs at least 2 points".into()));
            }
            let rows = theta_grid(grid).into_iter().map(|t| vec![t, s.eval(t)]);
            emit(&out, stdout, |w| write_csv(w, &["theta", "value"], rows))
        }
        Command::Bounds { p, fam, grid, out } => {
            let r = bounds_report(p, fam.family()?, grid)?;
            emit(&out, stdout, |w| write_json(w, &r))
        }
        Command::Decay { fam, pmin, pmax, out } => {
            let family = fam.family()?;
            if pmin < 2 || pmax < pmin {
                return Err(Error::Usage(format!("need 2 <= pmin <= pmax, got {pmin}..{pmax}")));
            }
            let rows = (pmin..=pmax)
                .map(|p| Ok(vec![p as f64, decay_ratio(p, family)?, 2f64.powf((5.0 - p as f64) / 2.0)]))
                .collect::<Result<Vec<_>>>()?;
            emit(&out, stdout, |w| write_csv(w, &["p", "ratio", "polynomial_bound"], rows.into_iter()))
        }
        Command::Assemble { config, n, which, format, out } => {
            let a = assembled_matrix(&config, n, which)?;
            emit(&out, stdout, |w| match format {
                MatrixFormat::Csv => write_matrix_csv(w, &a),
                MatrixFormat::Bin => write_matrix_bin(w, &a),
            })
        }
        Command::Eig { config, n, matrix, out } => {
            let a = match (config, matrix) {
                (Some(c), None) => assembled_matrix(&c, n.unwrap_or_default(), Which::Normalized)?,
                (None, Some(m)) => read_matrix(&m)?,
                _ => return Err(Error::Usage("give either --config with --n, or --matrix".into())),
            };
            let eigs = eigenvalues_dense(&a, SYMMETRY_TOL)?;
            emit(&out, stdout, |w| write_eigs(w, &eigs))
        }
        Command::Distribution { config, n, eps, out } => {
            let cfg = match config {
                None => Config1D::default_problem(),
                Some(path) => match load_config(&path)? {
                    Config::OneD(c) => c,
                    Config::MultiD(_) => return Err(Error::Usage("use distribution-md for d > 1".into())),
                },
            };
            let report = distribution_1d(&cfg, &n, &eps)?;
            emit(&out, stdout, |w| write_json(w, &report))
        }
        Command::DistributionMd { config, n, eps, out } => {
            let cfg = match load_config(&config)? {
                Config::MultiD(c) => c,
                Config::OneD(_) => return Err(Error::Usage("use distribution for d = 1".into())),
            };
            let report = distribution_md(&cfg, &n, &eps)?;
            emit(&out, stdout, |w| write_json(w, &report))
        }
        Command::Toeplitz { symbol, p, fam, m, eig, out } => {
            let kind = SymbolKind::parse(&symbol)?;
            let s = symbol_fn(kind, p, fam.family()?)?;
            let spec = ToeplitzSpec::from_symbol(&s);
            if m == 0 {
                return Err(Error::Usage("order m must be at least 1".into()));
            }
            // T(g) is imaginary; print the real matrix iT(g)·(−i) = the sine coefficients.
            let t = if kind == SymbolKind::G {
                toeplitz_real(&spec.scaled(Complex64::new(0.0, -1.0)), m)?
            } else {
                toeplitz_real(&spec, m)?
            };
            if eig {
                let eigs = if kind == SymbolKind::G {
                    // T(g) = i·(real skew matrix): eigenvalues are i times its eigenvalues.
                    eigenvalues_dense(&t, SYMMETRY_TOL)?.into_iter().map(|z| z * Complex64::new(0.0, 1.0)).collect()
                } else {
                    eigenvalues_dense(&t, SYMMETRY_TOL)?
                };
                let mut eigs = eigs;
                eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                emit(&out, stdout, |w| write_eigs(w, &eigs))
            } else {
                emit(&out, stdout, |w| write_matrix_csv(w, &t))
            }
        }
    }
}

fn assembled_matrix(config: &Path, n: usize, which: Which) -> Result<DMatrix<f64>> {
    match load_config(config)? {
        Config::OneD(c) => {
            let basis = gb_basis(n, c.p, c.family, c.mode)?;
            let sys = assemble(&c.problem, &c.geometry, &basis)?;
            Ok(match which {
                Which::A => sys.a,
                Which::Normalized => sys.a_normalized,
                Which::K => sys.k,
                Which::H => sys.h,
                Which::M => sys.m,
            })
        }
        Config::MultiD(c) => {
            let sys = assemble_md(&c.problem, &c.geometry, n)?;
            match which {
                Which::A => Ok(sys.a),
                Which::Normalized => Ok(sys.a_normalized),
                _ => Err(Error::Usage("K, H and M parts exist only for d = 1".into())),
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct RunSummary {
    d: usize,
    p: Vec<usize>,
    families: Vec<SectionFamily>,
    mode: PhaseMode,
    symbol_max: f64,
}

#[derive(Debug, Serialize)]
struct SizedReport {
    n: usize,
    #[serde(flatten)]
    report: DistributionReport,
}

#[derive(Debug, Serialize)]
pub struct DistributionRun {
    problem: RunSummary,
    reports: Vec<SizedReport>,
    discrepancy_decreasing: bool,
}

fn decreasing(reports: &[SizedReport]) -> bool {
    reports.windows(2).all(|w| w[1].report.mean_abs_discrepancy < w[0].report.mean_abs_discrepancy)
}

fn distribution_1d(cfg: &Config1D, ns: &[usize], eps: &[f64]) -> Result<DistributionRun> {
    let fmax = symbol_max(&symbol_fn(SymbolKind::F, cfg.p, cfg.mode.symbol_family(cfg.family))?);
    let eps_abs: Vec<f64> = eps.iter().map(|e| e * fmax).collect();
    let mut reports = Vec::new();
    for &n in ns {
        let basis = gb_basis(n, cfg.p, cfg.family, cfg.mode)?;
        let sys = assemble(&cfg.problem, &cfg.geometry, &basis)?;
        let eigs = eigenvalues_dense(&sys.a_normalized, SYMMETRY_TOL)?;
        let sampler = |c| distribution_samples(&cfg.problem, &cfg.geometry, cfg.p, cfg.family, cfg.mode, c);
        reports.push(SizedReport { n, report: weyl_report(&eigs, sampler, &eps_abs)? });
    }
    Ok(DistributionRun {
        problem: RunSummary {
            d: 1,
            p: vec![cfg.p],
            families: vec![cfg.family],
            mode: cfg.mode,
            symbol_max: fmax,
        },
        discrepancy_decreasing: decreasing(&reports),
        reports,
    })
}

fn distribution_md(cfg: &ConfigMD, ns: &[usize], eps: &[f64]) -> Result<DistributionRun> {
    let prob = &cfg.problem;
    let reference = md_symbol_samples(prob, &cfg.geometry, 1 << 16)?;
    let smax = reference.last().copied().unwrap_or(0.0);
    let eps_abs: Vec<f64> = eps.iter().map(|e| e * smax).collect();
    let mut reports = Vec::new();
    for &n in ns {
        let sys = assemble_md(prob, &cfg.geometry, n)?;
        let eigs = eigenvalues_dense(&sys.a_normalized, SYMMETRY_TOL)?;
        let report = weyl_report(&eigs, |c| md_symbol_samples(prob, &cfg.geometry, c), &eps_abs)?;
        reports.push(SizedReport { n, report });
    }
    Ok(DistributionRun {
        problem: RunSummary {
            d: prob.d,
            p: prob.degrees.clone(),
            families: prob.families.clone(),
            mode: prob.mode,
            symbol_max: smax,
        },
        discrepancy_decreasing: decreasing(&reports),
        reports,
    })
}

/// Writes to the `--output` file if given, otherwise to `stdout`.
fn emit(out: &OutputArgs, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &out.output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(w: &mut dyn Write, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_eigs(w: &mut dyn Write, eigs: &[Complex64]) -> Result<()> {
    writeln!(w, "index,re,im")?;
    for (k, z) in eigs.iter().enumerate() {
        writeln!(w, "{k},{},{}", num(z.re), num(z.im))?;
    }
    Ok(())
}

fn write_json<T: Serialize>(w: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

fn write_matrix_csv(w: &mut dyn Write, a: &DMatrix<f64>) -> Result<()> {
    let header: Vec<String> = (0..a.ncols()).map(|j| format!("c{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for i in 0..a.nrows() {
        let cells: Vec<String> = (0..a.ncols()).map(|j| num(a[(i, j)])).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// u64 rows, u64 cols, then f64 entries in row-major order, all little-endian.
fn write_matrix_bin(w: &mut dyn Write, a: &DMatrix<f64>) -> Result<()> {
    w.write_all(&(a.nrows() as u64).to_le_bytes())?;
    w.write_all(&(a.ncols() as u64).to_le_bytes())?;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            w.write_all(&a[(i, j)].to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads a matrix written by `assemble`: binary if the extension is `.bin`,
/// CSV (with optional header row) otherwise.
pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let bytes = std::fs::read(path)?;
    if path.extension().is_some_and(|e| e == "bin") {
        return parse_matrix_bin(&bytes);
    }
    let text = String::from_utf8(bytes).map_err(|_| Error::Validation("matrix file is not UTF-8".into()))?;
    parse_matrix_csv(&text)
}

pub fn parse_matrix_bin(bytes: &[u8]) -> Result<DMatrix<f64>> {
    let word = |k: usize| -> Result<[u8; 8]> {
        bytes
            .get(8 * k..8 * k + 8)
            .and_then(|s| s.try_into().ok())
            .ok_or_else(|| Error::Validation("binary matrix file is truncated".into()))
    };
    let rows = u64::from_le_bytes(word(0)?) as usize;
    let cols = u64::from_le_bytes(word(1)?) as usize;
    if bytes.len() != 16 + 8 * rows * cols {
        return Err(Error::Validation(format!("binary matrix file has the wrong size for {rows}x{cols}")));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        data.push(f64::from_le_bytes(word(2 + k)?));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

pub fn parse_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if k == 0 => continue,
            Err(_) => return Err(Error::Validation(format!("line {}: not a row of numbers", k + 1))),
        }
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Validation("matrix rows have different lengths".into()));
    }
    let flat: Vec<f64> = rows.concat();
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &flat))
}
