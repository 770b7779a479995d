use std::fmt::Write as _;
use std::path::Path;

use log::info;
use serde::Serialize;

use nhp_core::diagnostics::{default_contour, exterior_zero_count, form_sign_changes};
use nhp_core::hermite_pade::{remainder_series, SolutionRecord};
use nhp_core::{solve_type1, MultiIndex, NikishinSystem, Precision, Scalar};

use super::{ensure_dir, negligible, write_json, Prepared};
use crate::{exit, CliError, CliResult};

#[derive(Clone, Debug, Serialize)]
pub struct IndexSummary {
    pub n: MultiIndex,
    pub degrees: Vec<i64>,
    /// Leading coefficients of A_0/w at infinity that vanish (|n| − 1 expected).
    pub vanishing_remainder_terms: usize,
    pub sign_changes_a1: Option<usize>,
    /// Zeros of a_j outside the contour, when it can be certified.
    pub exterior_zeros: Vec<Option<usize>>,
    pub residual: f64,
}

/// Solves every index of the config; writes solutions.json and summary.txt into `out`.
pub fn solve(p: &Prepared, out: &Path) -> CliResult<Vec<IndexSummary>> {
    let (records, summaries) = match p.precision {
        Precision::Exact => run(p, &p.system)?,
        _ => run(p, &p.float_system()?)?,
    };
    ensure_dir(out)?;
    write_json(&out.join("solutions.json"), &records)?;
    let text = render(&summaries);
    std::fs::write(out.join("summary.txt"), &text).map_err(|e| CliError::new(exit::FAILURE, e))?;
    print!("{text}");
    Ok(summaries)
}

fn run<T: Scalar>(p: &Prepared, system: &NikishinSystem<T>) -> CliResult<(Vec<SolutionRecord>, Vec<IndexSummary>)> {
    let m = system.m();
    let contour = p.cfg.contour.map(Ok).unwrap_or_else(|| {
        default_contour(system.sigma(m).support(), (m > 1).then(|| system.sigma(m - 1).support()))
    });
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (n, scheme) in p.indices.iter().zip(&p.schemes) {
        info!("solving n = {n}");
        let sol = solve_type1(system, n, scheme).map_err(CliError::solve)?;
        let series = remainder_series(&sol, system, n.total() + 2).map_err(CliError::solve)?;
        let vanishing = series.iter().take_while(|c| negligible(*c, system.precision())).count();
        let sign_changes_a1 = form_sign_changes(&sol, system, 1, p.cfg.sign_grid).ok().map(|s| s.count);
        let exterior_zeros = sol
            .a
            .iter()
            .map(|a| contour.as_ref().ok().and_then(|c| exterior_zero_count(a, c).ok()))
            .collect();
        summaries.push(IndexSummary {
            n: n.clone(),
            degrees: sol.a.iter().map(|a| a.degree()).collect(),
            vanishing_remainder_terms: vanishing,
            sign_changes_a1,
            exterior_zeros,
            residual: sol.residual.system.max(sol.residual.a0_tail),
        });
        records.push(SolutionRecord::from_solution(&sol));
    }
    Ok((records, summaries))
}

fn render(summaries: &[IndexSummary]) -> String {
    let mut s = String::new();
    for r in summaries {
        let opt = |v: &Option<usize>| v.map_or("?".to_string(), |k| k.to_string());
        let ext: Vec<String> = r.exterior_zeros.iter().map(opt).collect();
        let _ = writeln!(
            s,
            "n = {}: deg a = {:?}, A_0/w = O(z^-{}), sign changes of A_1 on Δ_1 = {}, zeros outside Γ = [{}], residual = {:e}",
            r.n,
            r.degrees,
            r.vanishing_remainder_terms + 1,
            opt(&r.sign_changes_a1),
            ext.join(", "),
            r.residual
        );
    }
    s
}
