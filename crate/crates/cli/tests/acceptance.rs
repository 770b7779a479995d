//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use sha2::{Digest, Sha256};

use nhp_cli::commands::{sweep, Prepared};
use nhp_cli::RunConfig;
use nhp_core::diagnostics::{exterior_audits, form_sign_changes, AuditStatus};
use nhp_core::hermite_pade::{
    linear_form, proportional, remainder_integral, remainder_series, solve_type1_with, SolveOptions, SolverPath,
};
use nhp_core::measures::moments::{collect_terms, evaluate_expansion, omega_expansion};
use nhp_core::measures::{d_from_omega, hessenberg_omega, inverse_moments, ratio_identity_residual, uniform_moments};
use nhp_core::{solve_type1, Complex, InterpolationScheme, MultiIndex, NikishinSystem, Rational, Scalar};

type Outcome = Result<String, String>;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn prepared(name: &str) -> Prepared {
    Prepared::new(RunConfig::load(&configs().join(name)).expect("config")).expect("prepare")
}

fn q(s: &str) -> Rational {
    nhp_core::numerics::parse_rational(s).unwrap()
}

fn diagonal(k: usize) -> MultiIndex {
    MultiIndex::diagonal(2, k).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn order_of_contact(s: &NikishinSystem<Rational>) -> Outcome {
    for k in 1..=6 {
        let n = diagonal(k);
        let sol = solve_type1(s, &n, &InterpolationScheme::trivial()).map_err(|e| e.to_string())?;
        let c = remainder_series(&sol, s, n.total() - 1).map_err(|e| e.to_string())?;
        if let Some(i) = c.iter().position(|v| !v.is_zero()) {
            return Err(format!("n = {n}: coefficient {} is {}", i + 1, c[i]));
        }
    }
    Ok("remainder coefficients 1..|n|-1 vanish for n = (1,1)..(6,6)".into())
}

fn structure(s: &NikishinSystem<Rational>) -> Outcome {
    let full = SolveOptions { path: SolverPath::Full, ..SolveOptions::default() };
    let mut counts = Vec::new();
    for k in 1..=6 {
        let n = diagonal(k);
        let w = InterpolationScheme::trivial();
        let sol = solve_type1(s, &n, &w).map_err(|e| e.to_string())?;
        ensure(sol.nullspace_dimension == 1, format!("n = {n}: nullspace dimension {}", sol.nullspace_dimension))?;
        for j in 0..=2 {
            let d = sol.a[j].degree();
            ensure(d == n.get(j) as i64 - 1, format!("n = {n}: deg a_{j} = {d}"))?;
        }
        let sc = form_sign_changes(&sol, s, 1, 1000)
            .and_then(|sc| sc.require_resolved())
            .map_err(|e| format!("n = {n}: {e}"))?;
        ensure(sc.count == n.total() - 1, format!("n = {n}: {} sign changes of A_1", sc.count))?;
        let other = solve_type1_with(s, &n, &w, full).map_err(|e| e.to_string())?;
        ensure(proportional(&sol, &other), format!("n = {n}: reduced and full paths differ"))?;
        counts.push(sc.count);
    }
    Ok(format!("dim 1, exact degrees, sign changes {counts:?}, paths agree"))
}

fn resto(s: &NikishinSystem<Rational>) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut points = Vec::new();
    while points.len() < 20 {
        let re = Rational::new(rng.random_range(-500..=800).into(), 100.into());
        let im = Rational::new(rng.random_range(-300..=300).into(), 100.into());
        let on_support = im.is_zero() && s.generators().iter().any(|g| g.support().contains_rational(&re));
        if !on_support {
            points.push(Complex::new(re, im));
        }
    }
    let cases = [(diagonal(2), vec![]), (diagonal(4), vec![]), (diagonal(3), vec!["-1/2", "4+1i"])];
    for (n, roots) in cases {
        let w = InterpolationScheme::parse(&roots).map_err(|e| e.to_string())?;
        let sol = solve_type1(s, &n, &w).map_err(|e| e.to_string())?;
        let wp = w.polynomial::<Rational>(s.precision());
        for z in &points {
            let lhs = linear_form(&sol, s, 0, z).map_err(|e| e.to_string())? / wp.eval_complex(z);
            let rhs = remainder_integral(&sol, s, z).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, format!("n = {n}, w = {w}: mismatch at {}+{}i", z.re, z.im))?;
        }
    }
    Ok("exact equality at 20 random points for 3 (n, w) pairs".into())
}

fn inverse_moment_machinery() -> Outcome {
    let table = uniform_moments(12);
    let inv = inverse_moments(&table, 8).map_err(|e| e.to_string())?;
    for n in 0..=8 {
        let closed = d_from_omega(&table, n).map_err(|e| e.to_string())?;
        ensure(inv.d[n] == closed, format!("d_{n}: {} vs {}", inv.d[n], closed))?;
        let c = &table.c;
        let bound = Rational::from_integer((1i64 << (n + 1)).into()) * &c[n + 2] / (&c[0] * &c[0]);
        ensure(inv.d[n].abs_val() <= bound, format!("|d_{n}| exceeds 2^(n+1) c_(n+2)/c_0^2"))?;
    }
    ensure(inv.d[0] == q("-1/12"), format!("d_0 = {}", inv.d[0]))?;
    let mut terms = Vec::new();
    for n in 0..=4 {
        let t = omega_expansion(n);
        ensure(t.len() == 1 << (n + 1), format!("Omega_{n} has {} terms", t.len()))?;
        let direct = hessenberg_omega(&table, n).map_err(|e| e.to_string())?;
        ensure(evaluate_expansion(&t, &table.c) == direct, format!("Omega_{n} expansion disagrees"))?;
        terms.push(format!("{}/{}", t.len(), collect_terms(&t).len()));
    }
    Ok(format!("d_0..d_8 agree, d_0 = -1/12, bound holds, terms (raw/collected) {}", terms.join(" ")))
}

fn convergence(p: &Prepared, out: &Path) -> Outcome {
    let (r, code) = sweep(p, out).map_err(|e| e.to_string())?;
    ensure(code == 0, format!("sweep exit code {code}"))?;
    let grid: Vec<String> = r.grid.iter().map(|g| g.to_string()).collect();
    ensure(grid == ["-2", "4", "5/2+2i", "-1-1i"], format!("grid {grid:?}"))?;
    ensure(r.delta_k >= 1.0, format!("grid distance {}", r.delta_k))?;
    let mut fits = Vec::new();
    for j in 0..2 {
        ensure(r.e_decreasing_from(j, 6), format!("e_{j} not strictly decreasing for n >= 3"))?;
        ensure(r.f_decreasing_from(j, 0), format!("f_{j} not decreasing"))?;
        let fit = r.fit(j).ok_or(format!("no rate fit for j = {j}"))?;
        ensure(fit.delta_hat <= 0.9, format!("delta_{j} = {}", fit.delta_hat))?;
        fits.push(format!("delta_{j} = {:.4} (R^2 {:.6})", fit.delta_hat, fit.r2));
    }
    Ok(fits.join(", "))
}

fn exterior_counts(p: &Prepared) -> Outcome {
    let s = &p.system;
    let contour = nhp_core::diagnostics::default_contour(s.sigma(2).support(), Some(s.sigma(1).support()))
        .map_err(|e| e.to_string())?;
    let mut matches = Vec::new();
    let mut report = Vec::new();
    for k in 2..=4 {
        let n = MultiIndex::new(vec![k, k + 2]).unwrap();
        ensure(n.jbar() == 1, format!("n = {n}: jbar = {}", n.jbar()))?;
        let sol = solve_type1(s, &n, &InterpolationScheme::trivial()).map_err(|e| e.to_string())?;
        let audits = exterior_audits(&sol, &contour);
        let observed: Vec<String> =
            audits.iter().map(|a| a.observed.map_or("?".into(), |v| v.to_string())).collect();
        report.push(format!("{n}: [{}]", observed.join(",")));
        matches.push(audits.iter().all(|a| a.status == AuditStatus::Match));
    }
    let stable = matches.windows(2).any(|w| w[0] && w[1]);
    ensure(stable, format!("no two consecutive matches: {}", report.join(" ")))?;
    Ok(format!("kappa = (1, 0, 1) observed {}", report.join(" ")))
}

fn series_identity(s: &NikishinSystem<Rational>) -> Outcome {
    let r = ratio_identity_residual(s, 2, 10).map_err(|e| e.to_string())?;
    match r.iter().position(|c| !c.is_zero()) {
        Some(i) => Err(format!("coefficient of z^-{i} is {}", r[i])),
        None => Ok(format!("{} coefficients exactly zero", r.len())),
    }
}

fn markov(out: &Path) -> Outcome {
    let p = prepared("markov_m1.json");
    let (r, _) = sweep(&p, out).map_err(|e| e.to_string())?;
    let e: Vec<f64> = r.rows_for(0).map(|row| row.e).collect();
    ensure(e.len() == 8, format!("{} rows", e.len()))?;
    ensure(e.windows(2).all(|w| w[1] < w[0]), format!("e_0 not decreasing: {e:?}"))?;
    // σ̂(2) = ln 2 for Lebesgue measure on [0, 1]; a_0/a_1 = −1/(z − 1/2) at n = (2)
    let closed = (2f64.ln() - 2.0 / 3.0).abs();
    ensure((e[1] - 0.0265).abs() <= 1e-3, format!("e_0(2) = {}", e[1]))?;
    ensure((e[1] - closed).abs() <= 1e-12, format!("e_0(2) = {} vs closed form {closed}", e[1]))?;
    Ok(format!("e_0 decreasing on n = 1..8, e_0(2) = {:.6} (closed form {closed:.6})", e[1]))
}

fn determinism(p: &Prepared, out: &Path) -> Outcome {
    let digest = |dir: &Path| -> Result<Vec<u8>, String> {
        sweep(p, dir).map_err(|e| e.to_string())?;
        let bytes = std::fs::read(dir.join("convergence.csv")).map_err(|e| e.to_string())?;
        Ok(Sha256::digest(&bytes).to_vec())
    };
    let a = digest(&out.join("run1"))?;
    let b = digest(&out.join("run2"))?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let c = pool.install(|| digest(&out.join("single_thread")))?;
    ensure(a == b && b == c, "CSV digests differ")?;
    let hex: String = a.iter().take(8).map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256 {hex}... identical across 2 runs and a single-thread pool"))
}

fn main() {
    let bench = prepared("benchmark.json");
    let shapes = prepared("kappa_shapes.json");
    let tmp = tempfile::tempdir().expect("tempdir");
    let s = &bench.system;
    let criteria: Vec<(&str, Option<u64>, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 order of contact", Some(60), Box::new(|| order_of_contact(s))),
        ("2 structure", Some(120), Box::new(|| structure(s))),
        ("3 remainder consistency", None, Box::new(|| resto(s))),
        ("4 inverse moments", Some(10), Box::new(inverse_moment_machinery)),
        ("5 convergence", Some(300), Box::new(|| convergence(&bench, &tmp.path().join("c5")))),
        ("6 exterior zeros", None, Box::new(|| exterior_counts(&shapes))),
        ("7 series identity", None, Box::new(|| series_identity(s))),
        ("8 markov m = 1", None, Box::new(|| markov(&tmp.path().join("c8")))),
        ("9 determinism", None, Box::new(|| determinism(&bench, &tmp.path().join("c9")))),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(secs)) if elapsed > Duration::from_secs(secs) => {
                Err(format!("runtime {:.1}s exceeds {secs}s", elapsed.as_secs_f64()))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2}s]", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
