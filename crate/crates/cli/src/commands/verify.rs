use std::fs::File;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use nhp_core::diagnostics::{
    chain_contact, default_contour, exterior_audits, identity_check, reduction_chain, AuditStatus, Circle,
};
use nhp_core::hermite_pade::{
    linear_form, proportional, remainder_integral, remainder_series, solve_type1_with, Normalization, SolveOptions,
    SolverPath,
};
use nhp_core::measures::{d_from_omega, inverse_moments, ratio_identity_residual};
use nhp_core::numerics::scalar::complex_abs_f64;
use nhp_core::{solve_type1, Complex, HPSolution, MomentTable, MultiIndex, NikishinSystem, Precision, Rational, Scalar};

use super::{ensure_dir, negligible, tolerance, write_json, Prepared};
use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
}

impl CheckResult {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: CheckStatus::Pass, detail: detail.into(), counterexample: None }
    }

    fn fail(name: &str, detail: impl Into<String>, counterexample: serde_json::Value) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Fail,
            detail: detail.into(),
            counterexample: Some(counterexample),
        }
    }

    fn skipped(name: &str, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: CheckStatus::Skipped, detail: detail.into(), counterexample: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub precision: Precision,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs the invariant suite; prints one line per check and writes verify.json when `out` is set.
pub fn verify(p: &Prepared, out: Option<&Path>) -> CliResult<VerifyReport> {
    let checks = match p.precision {
        Precision::Exact => run(p, &p.system),
        _ => run(p, &p.float_system()?),
    };
    let report = VerifyReport { precision: p.precision, checks };
    for c in &report.checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        println!("{tag} {}: {}", c.name, c.detail);
        if let Some(ce) = &c.counterexample {
            println!("     counterexample: {ce}");
        }
    }
    if let Some(dir) = out {
        ensure_dir(dir)?;
        write_json(&dir.join("verify.json"), &report)?;
    }
    Ok(report)
}

fn close<T: Scalar>(a: &T, b: &T, prec: Precision) -> bool {
    match prec {
        Precision::Exact => a == b,
        _ => (a.clone() - b.clone()).to_f64().abs() <= tolerance(prec) * b.to_f64().abs().max(1.0),
    }
}

fn complex_close<T: Scalar>(a: &Complex<T>, b: &Complex<T>, prec: Precision) -> bool {
    let d = a.clone() - b.clone();
    match prec {
        Precision::Exact => d.re.is_zero() && d.im.is_zero(),
        _ => complex_abs_f64(&d) <= tolerance(prec) * complex_abs_f64(b).max(1.0),
    }
}

fn run<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> Vec<CheckResult> {
    let mut out = vec![dn_oracle(p, system), dn_bound(p, system), identity(p, system)];
    if system.m() >= 2 {
        out.push(ratio_series(system));
    }
    out.extend(per_index(p, system));
    out
}

/// Triangular inversion of the (possibly overridden) moment table against the
/// Hessenberg closed form computed from σ_1's own atoms.
fn dn_oracle<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> CheckResult {
    const NAME: &str = "moments.dn_oracle";
    let prec = system.precision();
    let order = p.cfg.dn_order;
    let reference = match MomentTable::from_measure(system.sigma(1), order + 3, "sigma_1") {
        Ok(t) => t,
        Err(e) => return CheckResult::fail(NAME, e.to_string(), json!(null)),
    };
    let table = match &p.cfg.moment_override {
        None => reference.clone(),
        Some(path) => {
            let loaded = File::open(path)
                .map_err(|e| e.to_string())
                .and_then(|f| MomentTable::<T>::read_csv(f, path.display().to_string(), prec).map_err(|e| e.to_string()));
            match loaded {
                Ok(t) => t,
                Err(e) => return CheckResult::fail(NAME, format!("moment table {}: {e}", path.display()), json!(null)),
            }
        }
    };
    let inv = match inverse_moments(&table, order) {
        Ok(v) => v,
        Err(e) => return CheckResult::fail(NAME, e.to_string(), json!(null)),
    };
    for n in 0..=order {
        let oracle = match d_from_omega(&reference, n) {
            Ok(v) => v,
            Err(e) => return CheckResult::fail(NAME, e.to_string(), json!({ "n": n })),
        };
        if !close(&inv.d[n], &oracle, prec) {
            return CheckResult::fail(
                NAME,
                format!("d_{n} from the moment table disagrees with (−1)^n Ω_n / c_0^(n+3)"),
                json!({ "n": n, "triangular": inv.d[n].to_exact_string(), "hessenberg": oracle.to_exact_string() }),
            );
        }
    }
    CheckResult::pass(NAME, format!("d_0..d_{order} agree"))
}

/// |d_n| ≤ 2^{n+1} c_{n+2} / c_0² for measures on [0, ∞).
fn dn_bound<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> CheckResult {
    const NAME: &str = "moments.dn_bound";
    let s = system.sigma(1);
    if !s.support().a().finite().is_some_and(|a| *a >= Rational::from_integer(0.into())) {
        return CheckResult::skipped(NAME, "bound is stated for measures on [0, ∞)");
    }
    let order = p.cfg.dn_order;
    let c = match s.moments(order + 3, None) {
        Ok(c) => c,
        Err(e) => return CheckResult::fail(NAME, e.to_string(), json!(null)),
    };
    let table = MomentTable::new(c.clone(), "sigma_1", system.precision());
    let inv = match inverse_moments(&table, order) {
        Ok(v) => v,
        Err(e) => return CheckResult::fail(NAME, e.to_string(), json!(null)),
    };
    let mut sign = T::from_i64(1, system.precision());
    if s.sign() == nhp_core::measures::MeasureSign::Negative {
        sign = -sign;
    }
    for n in 0..=order {
        let lhs = inv.d[n].abs_val() * c[0].clone() * c[0].clone();
        let rhs = T::from_i64(1 << (n + 1), system.precision()) * c[n + 2].clone() * sign.clone();
        if lhs.to_f64() > rhs.to_f64() * (1.0 + tolerance(system.precision())) && lhs > rhs {
            return CheckResult::fail(NAME, format!("bound violated at n = {n}"), json!({ "n": n }));
        }
    }
    CheckResult::pass(NAME, format!("n = 0..{order}"))
}

fn grid_points<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> Vec<Complex<T>> {
    let supports: Vec<_> = system.generators().iter().map(|g| g.support().clone()).collect();
    p.cfg
        .grid
        .iter()
        .filter(|z| supports.iter().all(|s| !z.on(s)))
        .map(|z| z.to_complex(system.precision()))
        .collect()
}

fn identity<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> CheckResult {
    const NAME: &str = "products.identity";
    let points = grid_points(p, system);
    if points.is_empty() {
        return CheckResult::skipped(NAME, "no grid points off the supports");
    }
    let tol = tolerance(system.precision());
    for j in 0..system.m() {
        match identity_check(system, j, &points) {
            Ok(r) if r <= tol => {}
            Ok(r) => return CheckResult::fail(NAME, format!("residual {r:e} for j = {j}"), json!({ "j": j })),
            Err(e) => return CheckResult::fail(NAME, e.to_string(), json!({ "j": j })),
        }
    }
    CheckResult::pass(NAME, format!("j = 0..{} at {} points", system.m() - 1, points.len()))
}

fn ratio_series<T: Scalar>(system: &NikishinSystem<T>) -> CheckResult {
    const NAME: &str = "products.ratio_series";
    const ORDER: usize = 10;
    for k in 2..=system.m() {
        match ratio_identity_residual(system, k, ORDER) {
            Ok(r) => {
                if let Some(e) = r.iter().position(|c| !negligible(c, system.precision())) {
                    return CheckResult::fail(
                        NAME,
                        format!("coefficient of z^-{e} does not vanish for k = {k}"),
                        json!({ "k": k, "order": e, "value": r[e].to_exact_string() }),
                    );
                }
            }
            Err(e) => return CheckResult::fail(NAME, e.to_string(), json!({ "k": k })),
        }
    }
    CheckResult::pass(NAME, format!("through order {ORDER}"))
}

/// First failure per check across the index sequence.
struct Collector {
    name: &'static str,
    checked: usize,
    failure: Option<(String, serde_json::Value)>,
}

impl Collector {
    fn new(name: &'static str) -> Self {
        Collector { name, checked: 0, failure: None }
    }

    fn record(&mut self, n: &MultiIndex, outcome: Result<(), String>) {
        self.checked += 1;
        if let (Err(msg), None) = (outcome, &self.failure) {
            self.failure = Some((msg, json!({ "n": n.parts() })));
        }
    }

    fn finish(self) -> CheckResult {
        match self.failure {
            Some((msg, ce)) => CheckResult::fail(self.name, msg, ce),
            None if self.checked == 0 => CheckResult::skipped(self.name, "no applicable index"),
            None => CheckResult::pass(self.name, format!("{} indices", self.checked)),
        }
    }
}

fn per_index<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> Vec<CheckResult> {
    let prec = system.precision();
    let m = system.m();
    let mut structure = Collector::new("solve.structure");
    let mut paths = Collector::new("solve.paths_agree");
    let mut contact = Collector::new("contact.remainder_series");
    let mut resto = Collector::new("remainder.integral");
    let mut chain = Collector::new("sign_changes.chain");
    let mut chain_contact_c = Collector::new("contact.chain");
    let contour: Result<Circle, String> = match p.cfg.contour {
        Some(c) => Ok(c),
        None => default_contour(system.sigma(m).support(), (m > 1).then(|| system.sigma(m - 1).support()))
            .map_err(|e| e.to_string()),
    };
    let mut kappa: Vec<(MultiIndex, Option<bool>)> = Vec::new();
    let points = grid_points(p, system);

    for (n, scheme) in p.indices.iter().zip(&p.schemes) {
        let sol = match solve_type1(system, n, scheme) {
            Ok(s) => s,
            Err(e) => {
                structure.record(n, Err(format!("n = {n}: {e}")));
                continue;
            }
        };
        let degrees_ok = (0..=m).all(|j| sol.a[j].degree() == n.get(j) as i64 - 1);
        structure.record(
            n,
            if sol.nullspace_dimension == 1 && degrees_ok {
                Ok(())
            } else {
                Err(format!("n = {n}: nullspace {} or degrees off", sol.nullspace_dimension))
            },
        );
        paths.record(n, compare_paths(system, &sol, scheme));
        contact.record(
            n,
            remainder_series(&sol, system, n.total() - 1).map_err(|e| e.to_string()).and_then(|c| {
                match c.iter().position(|v| !negligible(v, prec)) {
                    Some(i) => Err(format!("n = {n}: coefficient of z^-{} is nonzero", i + 1)),
                    None => Ok(()),
                }
            }),
        );
        resto.record(n, check_resto(system, &sol, &points));
        chain.record(
            n,
            reduction_chain(&sol, system, p.cfg.sign_grid).map_err(|e| e.to_string()).and_then(|steps| {
                match steps.iter().find(|s| !s.holds()) {
                    Some(s) => Err(format!("n = {n}: A_{} has {} sign changes, bound {}", s.j, s.observed, s.bound)),
                    None => Ok(()),
                }
            }),
        );
        if m >= 2 {
            chain_contact_c.record(
                n,
                chain_contact(&sol, system, p.cfg.sign_grid).map_err(|e| e.to_string()).and_then(|c| {
                    if c.holds() {
                        Ok(())
                    } else {
                        Err(format!("n = {n}: contact order {} below {}", c.order, c.bound))
                    }
                }),
            );
        }
        if let Ok(c) = &contour {
            let audits = exterior_audits(&sol, c);
            let verdict = if audits.iter().any(|a| a.status == AuditStatus::SkippedOpenQuestion) {
                None
            } else {
                Some(audits.iter().all(|a| a.status == AuditStatus::Match))
            };
            kappa.push((n.clone(), verdict));
        }
    }

    let mut out = vec![
        structure.finish(),
        paths.finish(),
        contact.finish(),
        resto.finish(),
        chain.finish(),
    ];
    if m >= 2 {
        out.push(chain_contact_c.finish());
    }
    match contour {
        Ok(_) => out.extend(kappa_results(&kappa)),
        Err(e) => out.push(CheckResult::skipped("kappa.exterior", format!("no contour: {e}"))),
    }
    out
}

fn compare_paths<T: Scalar>(
    system: &NikishinSystem<T>,
    sol: &HPSolution<T>,
    scheme: &nhp_core::InterpolationScheme,
) -> Result<(), String> {
    let opts = SolveOptions { normalization: Normalization::MonicLast, path: SolverPath::Full };
    let full = solve_type1_with(system, &sol.n, scheme, opts).map_err(|e| format!("n = {}: full path: {e}", sol.n))?;
    let agree = match system.precision() {
        Precision::Exact => proportional(sol, &full),
        prec => sol
            .coefficient_vector()
            .iter()
            .zip(full.coefficient_vector())
            .all(|(a, b)| close(a, &b, prec)),
    };
    if agree {
        Ok(())
    } else {
        Err(format!("n = {}: reduced and full solutions differ", sol.n))
    }
}

fn check_resto<T: Scalar>(system: &NikishinSystem<T>, sol: &HPSolution<T>, points: &[Complex<T>]) -> Result<(), String> {
    let prec = system.precision();
    let w = sol.scheme.polynomial::<T>(prec);
    for z in points {
        let wz = w.eval_complex(z);
        if wz.re.is_zero() && wz.im.is_zero() {
            continue;
        }
        let lhs = linear_form(sol, system, 0, z).map_err(|e| e.to_string())? / wz;
        let rhs = remainder_integral(sol, system, z).map_err(|e| e.to_string())?;
        if !complex_close(&lhs, &rhs, prec) {
            return Err(format!("n = {}: A_0/w and the remainder integral differ at z = {}+{}i", sol.n, z.re, z.im));
        }
    }
    Ok(())
}

/// κ audits pass when the last two consecutive assessable indices both match.
fn kappa_results(kappa: &[(MultiIndex, Option<bool>)]) -> Vec<CheckResult> {
    const NAME: &str = "kappa.exterior";
    let mut out: Vec<CheckResult> = kappa
        .iter()
        .filter(|(_, v)| v.is_none())
        .map(|(n, _)| CheckResult::skipped(&format!("{NAME} n = {n}"), "skipped (open question)"))
        .collect();
    let assessable: Vec<&(MultiIndex, Option<bool>)> = kappa.iter().filter(|(_, v)| v.is_some()).collect();
    let mismatched: Vec<String> =
        assessable.iter().filter(|(_, v)| *v == Some(false)).map(|(n, _)| n.to_string()).collect();
    let result = match assessable.as_slice() {
        [] => CheckResult::skipped(NAME, "no index with j̄ < m"),
        [_] => CheckResult::skipped(NAME, "stability needs two consecutive indices"),
        [.., a, b] if a.1 == Some(true) && b.1 == Some(true) => CheckResult::pass(
            NAME,
            if mismatched.is_empty() {
                format!("all {} indices match", assessable.len())
            } else {
                format!("stable from {}; earlier mismatches at {}", a.0, mismatched.join(" "))
            },
        ),
        [.., a, b] => CheckResult::fail(
            NAME,
            format!("exterior zero counts not stable at {} and {}", a.0, b.0),
            json!({ "mismatched": mismatched }),
        ),
    };
    out.insert(0, result);
    out
}
