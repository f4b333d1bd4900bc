//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gbspec::cardinal::cardinal_spline;
use gbspec::collocation::{
    assemble, distribution_samples, gb_basis, structure_report, GeometryMap1D, PhaseMode, ProblemCoefficients,
};
use gbspec::expr::Expr;
use gbspec::multidim::{assemble_md, md_symbol_samples, GeometryMapMD, ProblemMD};
use gbspec::section::SectionFamily;
use gbspec::spectral::{eigenvalues_dense, toeplitz, toeplitz_real, toeplitz_tensor, weyl_report, DistributionReport, ToeplitzSpec};
use gbspec::symbols::{bounds_report, decay_ratio, symbol_closed_form, symbol_fn, symbol_max, theta_grid, BoundStatus, SymbolKind};

use common::{integrate, integrate_integer_pieces, linear_slope, loglog_slope};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn poly() -> SectionFamily {
    SectionFamily::polynomial()
}

fn hyp(a: f64) -> SectionFamily {
    SectionFamily::hyperbolic(a).unwrap()
}

fn trig(a: f64) -> SectionFamily {
    SectionFamily::trigonometric(a).unwrap()
}

fn all_families() -> Vec<SectionFamily> {
    vec![poly(), hyp(1.0), hyp(10.0), trig(PI / 4.0), trig(PI / 2.0)]
}

fn closed_form_suite() -> Outcome {
    let cases = [
        (SymbolKind::H, 1),
        (SymbolKind::H, 2),
        (SymbolKind::G, 2),
        (SymbolKind::F, 2),
        (SymbolKind::G, 3),
        (SymbolKind::F, 3),
        (SymbolKind::F, 4),
    ];
    let grid = theta_grid(512);
    let mut worst = 0.0f64;
    for fam in all_families() {
        for (kind, p) in cases {
            let s = symbol_fn(kind, p, fam).map_err(err)?;
            for &t in &grid {
                let want = symbol_closed_form(kind, p, fam, t).map_err(err)?;
                worst = worst.max((s.eval(t) - want).abs());
            }
        }
    }
    check(worst <= 1e-11, format!("max error {worst:.2e}"))?;
    Ok(format!("max error {worst:.2e}"))
}

fn relation_identity() -> Outcome {
    let grid = theta_grid(512);
    let mut worst = 0.0f64;
    for fam in all_families() {
        for p in 3..=8 {
            let f = symbol_fn(SymbolKind::F, p, fam).map_err(err)?;
            let h = symbol_fn(SymbolKind::H, p - 2, fam).map_err(err)?;
            for &t in &grid {
                worst = worst.max((f.eval(t) - (2.0 - 2.0 * t.cos()) * h.eval(t)).abs());
            }
        }
    }
    check(worst <= 1e-11, format!("max error {worst:.2e}"))?;
    Ok(format!("max error {worst:.2e}"))
}

fn cardinal_suite() -> Outcome {
    let mut stats = [0.0f64; 6];
    for fam in all_families() {
        let poly_chain = cardinal_spline(poly(), 6).map_err(err)?;
        let cs = cardinal_spline(fam, 6).map_err(err)?;
        for p in 1..=6 {
            let phi = cs.lower(p).unwrap();
            if p >= 2 {
                let sum: f64 = (1..=p).map(|k| phi.eval(k as f64)).sum();
                stats[0] = stats[0].max((sum - 1.0).abs());
            }
            let integral = integrate_integer_pieces(|t| phi.eval(t), 0.0, (p + 1) as f64, 16);
            stats[1] = stats[1].max((integral - 1.0).abs());
            let c = (p + 1) as f64 / 2.0;
            for k in 0..100 {
                let t = c * k as f64 / 99.0;
                stats[2] = stats[2].max((phi.eval(c + t) - phi.eval(c - t)).abs());
            }
            if p >= 2 {
                let prev = cs.lower(p - 1).unwrap();
                for k in 0..50 {
                    let t = (p + 1) as f64 * (k as f64 + 0.5) / 50.0;
                    let conv = integrate_integer_pieces(|u| prev.eval(u), t - 1.0, t, 16);
                    stats[3] = stats[3].max((conv - phi.eval(t)).abs());
                }
            }
            if p == 6 {
                for r in 1..p {
                    let rec = cs.derivative(r).map_err(err)?;
                    let direct = phi.nth_derivative(r);
                    for k in 0..=140 {
                        let t = 7.0 * k as f64 / 140.0 + 1e-3;
                        let scale = direct.eval(t).abs().max(1.0);
                        stats[4] = stats[4].max((rec.eval(t) - direct.eval(t)).abs() / scale);
                    }
                }
            }
        }
        for (p1, p2) in [(2usize, 2usize), (3, 2)] {
            let a = cs.lower(p1).unwrap();
            let b = poly_chain.lower(p2).unwrap();
            let big = cs.lower(p1 + p2 + 1).unwrap();
            for k in -2i32..=2 {
                let ip = integrate_integer_pieces(|t| a.eval(t) * b.eval(t + k as f64), 0.0, (p1 + 1) as f64, 16);
                let want = big.eval((p2 as i32 + 1 - k) as f64);
                stats[5] = stats[5].max((ip - want).abs());
            }
        }
    }
    let tol = [1e-12, 1e-10, 1e-12, 1e-10, 1e-10, 1e-8];
    let names = ["partition", "integral", "symmetry", "convolution", "derivative", "inner product"];
    let summary: Vec<String> = names.iter().zip(&stats).map(|(n, s)| format!("{n} {s:.1e}")).collect();
    for ((n, s), t) in names.iter().zip(&stats).zip(&tol) {
        check(s <= t, format!("{n} error {s:.2e} > {t:.0e}"))?;
    }
    Ok(summary.join(", "))
}

/// ‖f_p^{Q_{α/n}} − f_p‖_{L¹} on [−π, π].
fn l1_gap(p: usize, fam: SectionFamily, n: usize) -> gbspec::Result<f64> {
    let scaled = fam.with_phase(fam.phase / n as f64)?;
    let a = symbol_fn(SymbolKind::F, p, scaled)?;
    let b = symbol_fn(SymbolKind::F, p, poly())?;
    Ok(integrate(|t| (a.eval(t) - b.eval(t)).abs(), -PI, PI, 64, 16))
}

fn l1_rate() -> Outcome {
    let ns = [8.0, 16.0, 32.0, 64.0];
    let mut slopes = Vec::new();
    for fam in [hyp(10.0), trig(PI / 2.0)] {
        for p in 3..=5 {
            let gaps = ns.iter().map(|&n| l1_gap(p, fam, n as usize)).collect::<gbspec::Result<Vec<_>>>().map_err(err)?;
            let s = loglog_slope(&ns, &gaps);
            check((s + 2.0).abs() <= 0.3, format!("p={p} {}: slope {s:.3}", fam.kind))?;
            slopes.push(s);
        }
    }
    let lo = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("slopes in [{lo:.3}, {hi:.3}]"))
}

fn decay() -> Outcome {
    for p in 2..=14 {
        let r = decay_ratio(p, poly()).map_err(err)?;
        let bound = 2f64.powf((5.0 - p as f64) / 2.0);
        check(r <= bound, format!("polynomial p={p}: ratio {r} > {bound}"))?;
    }
    let ps: Vec<f64> = (5..=13).step_by(2).map(|p| p as f64).collect();
    let ratios = ps.iter().map(|&p| decay_ratio(p as usize, hyp(10.0))).collect::<gbspec::Result<Vec<_>>>().map_err(err)?;
    check(ratios.windows(2).all(|w| w[1] < w[0]), format!("hyperbolic ratios not decreasing: {ratios:?}"))?;
    let logs: Vec<f64> = ratios.iter().map(|r| r.log2()).collect();
    let slope = linear_slope(&ps, &logs);
    check(slope <= -0.3, format!("hyperbolic log2 slope {slope:.3}"))?;
    Ok(format!("hyperbolic log2 slope {slope:.3} per degree"))
}

fn toeplitz_oracle() -> Outcome {
    let f2 = symbol_fn(SymbolKind::F, 2, poly()).map_err(err)?;
    let spec = ToeplitzSpec::from_symbol(&f2);
    let mut worst = 0.0f64;
    for m in [3usize, 10, 100] {
        let t = toeplitz_real(&spec, m).map_err(err)?;
        let mut eigs: Vec<f64> = eigenvalues_dense(&t, 1e-12).map_err(err)?.iter().map(|z| z.re).collect();
        eigs.sort_by(f64::total_cmp);
        for (k, e) in eigs.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * PI / (m + 1) as f64).cos();
            worst = worst.max((e - want).abs());
        }
    }
    check(worst <= 1e-9, format!("eigenvalue error {worst:.2e}"))?;
    let h3 = ToeplitzSpec::from_symbol(&symbol_fn(SymbolKind::H, 3, hyp(2.0)).map_err(err)?);
    let tensor = toeplitz_tensor(&spec, &h3, 5, 7);
    let kron = toeplitz(&spec, 5).kronecker(&toeplitz(&h3, 7));
    check(tensor == kron, "tensor Toeplitz differs from the Kronecker product")?;
    Ok(format!("eigenvalue error {worst:.2e}, tensor = Kronecker"))
}

fn structure() -> Outcome {
    let problem = ProblemCoefficients::from_strs("1", "0", "0").map_err(err)?;
    let geometry = GeometryMap1D::identity();
    let mut max_rank = 0;
    for p in 2..=4 {
        for mode in [PhaseMode::Nested, PhaseMode::NonNested] {
            for fam in [hyp(10.0), trig(PI / 2.0)] {
                let basis = gb_basis(64, p, fam, mode).map_err(err)?;
                let sys = assemble(&problem, &geometry, &basis).map_err(err)?;
                let r = structure_report(&sys).map_err(err)?;
                let tag = format!("p={p} {mode} {}", fam.kind);
                check(r.is_central_toeplitz(), format!("{tag}: central block not Toeplitz"))?;
                let sym = [r.k_central_symmetric, r.m_central_symmetric, r.h_central_skew];
                check(sym.iter().all(|f| *f == Some(true)), format!("{tag}: symmetry flags {sym:?}"))?;
                check(r.rank_bound_ok == Some(true), format!("{tag}: rank(R)={:?} > {}", r.rank_r, r.rank_bound))?;
                max_rank = max_rank.max(r.rank_r.unwrap_or(0));
            }
        }
    }
    Ok(format!("all central blocks structured, max rank(R) {max_rank}"))
}

struct Pair {
    coarse: DistributionReport,
    fine: DistributionReport,
}

fn run_1d(kappa: &str, geometry: &GeometryMap1D, mode: PhaseMode, ns: [usize; 2]) -> Result<Pair, String> {
    let p = 3;
    let fam = hyp(10.0);
    let problem = ProblemCoefficients::from_strs(kappa, "0", "0").map_err(err)?;
    let fmax = symbol_max(&symbol_fn(SymbolKind::F, p, mode.symbol_family(fam)).map_err(err)?);
    let mut reports = Vec::new();
    for n in ns {
        let basis = gb_basis(n, p, fam, mode).map_err(err)?;
        let sys = assemble(&problem, geometry, &basis).map_err(err)?;
        let eigs = eigenvalues_dense(&sys.a_normalized, 1e-12).map_err(err)?;
        let sampler = |c| distribution_samples(&problem, geometry, p, fam, mode, c);
        reports.push(weyl_report(&eigs, sampler, &[0.1 * fmax]).map_err(err)?);
    }
    let fine = reports.pop().unwrap();
    let coarse = reports.pop().unwrap();
    Ok(Pair { coarse, fine })
}

fn discrepancy_line(pair: &Pair) -> String {
    format!("{:.3} -> {:.3}", pair.coarse.mean_abs_discrepancy, pair.fine.mean_abs_discrepancy)
}

fn weyl_nonnested(runs: &[Pair]) -> Outcome {
    let mut lines = Vec::new();
    for (pair, kappa) in runs.iter().zip(["1", "1+x"]) {
        check(
            pair.fine.mean_abs_discrepancy < pair.coarse.mean_abs_discrepancy,
            format!("kappa={kappa}: discrepancy {}", discrepancy_line(pair)),
        )?;
        for r in 0..2 {
            let (a, b) = (pair.coarse.moment_errors[r], pair.fine.moment_errors[r]);
            check(b <= 0.75 * a, format!("kappa={kappa}: moment r={} error {a:.3e} -> {b:.3e}", r + 1))?;
        }
        lines.push(format!("kappa={kappa} {}", discrepancy_line(pair)));
    }
    Ok(lines.join("; "))
}

fn weyl_decreasing(pairs: &[(&str, Pair)]) -> Outcome {
    let mut lines = Vec::new();
    for (label, pair) in pairs {
        check(
            pair.fine.mean_abs_discrepancy < pair.coarse.mean_abs_discrepancy,
            format!("{label}: discrepancy {}", discrepancy_line(pair)),
        )?;
        lines.push(format!("{label} {}", discrepancy_line(pair)));
    }
    Ok(lines.join("; "))
}

fn clustering(runs: &[Pair]) -> Outcome {
    let mut lines = Vec::new();
    for (pair, kappa) in runs.iter().zip(["1", "1+x"]) {
        let (a, b) = (pair.coarse.outliers[0].count, pair.fine.outliers[0].count);
        check(b <= a, format!("kappa={kappa}: outliers {a} -> {b}"))?;
        lines.push(format!("kappa={kappa} outliers {a} -> {b}"));
    }
    Ok(lines.join("; "))
}

fn two_dimensional() -> Outcome {
    let k = vec![vec![Expr::Num(1.0), Expr::Num(0.0)], vec![Expr::Num(0.0), Expr::Num(1.0)]];
    let problem = ProblemMD::new(
        k,
        vec![Expr::Num(0.0); 2],
        Expr::Num(0.0),
        vec![poly(); 2],
        vec![2, 2],
        vec![1, 1],
        PhaseMode::Nested,
    )
    .map_err(err)?;
    let geometry = GeometryMapMD::identity(2);
    let mut disc = Vec::new();
    for n in [12, 20] {
        let sys = assemble_md(&problem, &geometry, n).map_err(err)?;
        let eigs = eigenvalues_dense(&sys.a_normalized, 1e-12).map_err(err)?;
        let report = weyl_report(&eigs, |c| md_symbol_samples(&problem, &geometry, c), &[]).map_err(err)?;
        disc.push(report.mean_abs_discrepancy);
    }
    check(disc[1] < disc[0], format!("discrepancy {:.3} -> {:.3}", disc[0], disc[1]))?;
    Ok(format!("discrepancy {:.3} -> {:.3}", disc[0], disc[1]))
}

fn bounds_scan() -> Outcome {
    let mut conjectured = 0;
    for fam in all_families() {
        for p in 2..=8 {
            let r = bounds_report(p, fam, 4096).map_err(err)?;
            check(r.upper_violations == 0, format!("p={p} {}: {} upper violations", fam.kind, r.upper_violations))?;
            for c in &r.lower_checks {
                match c.status {
                    BoundStatus::Proved => {
                        check(c.violations == 0, format!("p={p} {}: proved lower bound violated", fam.kind))?
                    }
                    BoundStatus::Conjectured => conjectured += c.violations,
                }
            }
        }
    }
    Ok(format!("no upper or proved-lower violations; {conjectured} conjectured-bound violations observed"))
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; took {elapsed:.1?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {id:>2} {name}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                self.failures += 1;
                println!("FAIL {id:>2} {name}: {msg} [{elapsed:.2?}]");
            }
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() {
    let mut runner = Runner { failures: 0 };
    runner.run(1, "closed-form symbols", secs(1), closed_form_suite);
    runner.run(2, "relation f_p = (2-2cos)h_(p-2)", secs(5), relation_identity);
    runner.run(3, "cardinal properties", secs(30), cardinal_suite);
    runner.run(4, "L1 convergence rate", secs(20), l1_rate);
    runner.run(5, "symbol decay", secs(10), decay);
    runner.run(6, "Toeplitz oracle", secs(5), toeplitz_oracle);
    runner.run(7, "collocation structure", secs(30), structure);

    let identity = GeometryMap1D::identity();
    let ns = [64, 128];
    let mut nonnested = None;
    runner.run(8, "1D distribution, non-nested", secs(120), || {
        let runs = ["1", "1+x"]
            .iter()
            .map(|k| run_1d(k, &identity, PhaseMode::NonNested, ns))
            .collect::<Result<Vec<_>, _>>()?;
        let msg = weyl_nonnested(&runs);
        nonnested = Some(runs);
        msg
    });
    runner.run(9, "1D distribution, nested", secs(120), || {
        let a = run_1d("1", &identity, PhaseMode::Nested, ns)?;
        let b = run_1d("1+x", &identity, PhaseMode::Nested, ns)?;
        weyl_decreasing(&[("kappa=1", a), ("kappa=1+x", b)])
    });
    runner.run(10, "geometry map", secs(120), || {
        let g = GeometryMap1D::new(Expr::parse("(x+x^2)/2").map_err(err)?, None, None).map_err(err)?;
        let pair = run_1d("1", &g, PhaseMode::Nested, ns)?;
        weyl_decreasing(&[("G=(x+x^2)/2", pair)])
    });
    runner.run(11, "clustering", secs(1), || match &nonnested {
        Some(runs) => clustering(runs),
        None => Err("non-nested runs did not complete".into()),
    });
    runner.run(12, "2D distribution", secs(180), two_dimensional);
    runner.run(13, "bounds scan", secs(10), bounds_scan);

    if runner.failures > 0 {
        println!("{} acceptance criteria failed", runner.failures);
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
