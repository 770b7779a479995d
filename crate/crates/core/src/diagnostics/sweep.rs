//! Convergence of a_{n,j}/a_{n,m} along a sequence of multi-indices.

use std::fmt;
use std::io::Write;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::least_squares;
use super::winding::{default_contour, exterior_zero_count, Circle};
use crate::error::DiagnosticsError;
use crate::hermite_pade::{linear_form, solve_type1, HPSolution, InterpolationScheme, MultiIndex};
use crate::measures::{Interval, NikishinSystem};
use crate::numerics::scalar::{complex_abs_f64, parse_complex_rational, Complex, Precision, Rational, Scalar};

/// Complex evaluation point with rational parts, written as "2.5+2i".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridPoint {
    pub re: Rational,
    pub im: Rational,
}

impl GridPoint {
    pub fn new(re: Rational, im: Rational) -> Self {
        GridPoint { re, im }
    }

    pub fn to_complex<T: Scalar>(&self, prec: Precision) -> Complex<T> {
        Complex::new(T::from_rational(&self.re, prec), T::from_rational(&self.im, prec))
    }

    pub fn on(&self, interval: &Interval) -> bool {
        self.im.is_zero() && interval.contains_rational(&self.re)
    }

    pub fn distance_to(&self, interval: &Interval) -> f64 {
        interval.distance_to_point(self.re.to_f64(), self.im.to_f64())
    }
}

impl TryFrom<String> for GridPoint {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl std::str::FromStr for GridPoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (re, im) = parse_complex_rational(s).map_err(|e| e.to_string())?;
        Ok(GridPoint { re, im })
    }
}

impl From<GridPoint> for String {
    fn from(p: GridPoint) -> Self {
        p.to_string()
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im < Rational::zero() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub indices: Vec<MultiIndex>,
    /// One scheme per index, or empty for w ≡ 1 throughout.
    #[serde(default)]
    pub schemes: Vec<InterpolationScheme>,
    pub grid: Vec<GridPoint>,
    /// Ratio indices j to report; all of 0..m−1 when empty.
    #[serde(default)]
    pub targets: Vec<usize>,
    /// Γ for exterior zero counts; the default circle about Δ_m when absent.
    #[serde(default)]
    pub contour: Option<Circle>,
}

impl SweepSpec {
    pub fn new(indices: Vec<MultiIndex>, grid: Vec<GridPoint>) -> Self {
        SweepSpec { indices, schemes: Vec::new(), grid, targets: Vec::new(), contour: None }
    }

    /// Checks the spec against a system; returns δ_K = min distance from the grid to Δ_m.
    pub fn validate<T: Scalar>(&self, system: &NikishinSystem<T>) -> Result<f64, DiagnosticsError> {
        let m = system.m();
        let bad = |msg: String| Err(DiagnosticsError::InvalidSweep(msg));
        if self.indices.is_empty() {
            return bad("empty multi-index sequence".into());
        }
        if let Some(n) = self.indices.iter().find(|n| n.m() != m) {
            return bad(format!("{n} does not have m = {m} components"));
        }
        if self.indices.windows(2).any(|w| w[1].total() <= w[0].total()) {
            return bad("|n| must be strictly increasing along the sequence".into());
        }
        if !self.schemes.is_empty() && self.schemes.len() != self.indices.len() {
            return bad(format!("{} schemes for {} indices", self.schemes.len(), self.indices.len()));
        }
        if let Some(j) = self.targets.iter().find(|&&j| j >= m) {
            return bad(format!("target j = {j} is not below m = {m}"));
        }
        if self.grid.is_empty() {
            return bad("empty evaluation grid".into());
        }
        let delta_m = system.sigma(m).support();
        let delta_k = self.grid.iter().map(|p| p.distance_to(delta_m)).fold(f64::INFINITY, f64::min);
        if !(delta_k > 0.0) || self.grid.iter().any(|p| p.on(delta_m)) {
            return bad(format!("grid meets Δ_m = {delta_m}"));
        }
        Ok(delta_k)
    }

    fn scheme(&self, i: usize) -> InterpolationScheme {
        self.schemes.get(i).cloned().unwrap_or_default()
    }

    fn target_list(&self, m: usize) -> Vec<usize> {
        if self.targets.is_empty() {
            (0..m).collect()
        } else {
            self.targets.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: MultiIndex,
    pub total: usize,
    pub j: usize,
    /// max_K |a_j/a_m − (−1)^{m−j} ŝ_{m,j+1}|.
    pub e: f64,
    /// max over K∖Δ_{j+1} of |A_j/a_m|.
    pub f: Option<f64>,
    /// Σ_{k=j}^{m−1} e_k max|ŝ_{j+1,k}| (the k = j factor is 1).
    pub f_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub j: usize,
    /// exp of the slope of ln e_j against |n|.
    pub delta_hat: f64,
    pub r2: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Match,
    Mismatch,
    /// j̄ = m: no prediction is asserted.
    SkippedOpenQuestion,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExteriorAudit {
    pub n: MultiIndex,
    pub j: usize,
    pub jbar: usize,
    pub observed: Option<usize>,
    pub predicted: Option<i64>,
    /// Zeros inside Γ.
    pub inside: Option<usize>,
    pub status: AuditStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub n: MultiIndex,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetFlags {
    pub j: usize,
    pub e_strictly_decreasing: bool,
    pub f_decreasing: bool,
    pub delta_below_one: bool,
    pub f_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub m: usize,
    pub precision: Precision,
    pub grid: Vec<GridPoint>,
    pub delta_k: f64,
    pub contour: Circle,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<RateFit>,
    pub flags: Vec<TargetFlags>,
    pub exterior: Vec<ExteriorAudit>,
    pub failures: Vec<SweepFailure>,
    pub attempted: usize,
    pub solved: usize,
}

/// Relative slack for the f_j bound, which holds with equality up to f64 rounding.
const BOUND_SLACK: f64 = 1e-9;

impl ConvergenceReport {
    pub fn rows_for(&self, j: usize) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.j == j)
    }

    /// e_j strictly decreasing over indices with |n| ≥ min_total.
    pub fn e_decreasing_from(&self, j: usize, min_total: usize) -> bool {
        let e: Vec<f64> = self.rows_for(j).filter(|r| r.total >= min_total).map(|r| r.e).collect();
        e.windows(2).all(|w| w[1] < w[0])
    }

    pub fn f_decreasing_from(&self, j: usize, min_total: usize) -> bool {
        let f: Vec<f64> = self.rows_for(j).filter(|r| r.total >= min_total).filter_map(|r| r.f).collect();
        f.windows(2).all(|w| w[1] < w[0])
    }

    pub fn fit(&self, j: usize) -> Option<&RateFit> {
        self.fits.iter().find(|f| f.j == j)
    }

    pub fn success_ratio(&self) -> f64 {
        if self.attempted == 0 {
            return 0.0;
        }
        self.solved as f64 / self.attempted as f64
    }

    /// Tidy CSV with columns n_total, j, e_j, f_j.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), DiagnosticsError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n_total", "j", "e_j", "f_j"]).map_err(io_err)?;
        for r in &self.rows {
            let f = r.f.map(|v| format!("{v:e}")).unwrap_or_default();
            out.write_record([r.total.to_string(), r.j.to_string(), format!("{:e}", r.e), f]).map_err(io_err)?;
        }
        out.flush().map_err(|e| DiagnosticsError::Io(e.to_string()))
    }
}

fn io_err(e: csv::Error) -> DiagnosticsError {
    DiagnosticsError::Io(e.to_string())
}

struct IndexOutcome {
    rows: Vec<SweepRow>,
    exterior: Vec<ExteriorAudit>,
}

/// Solves every index in the spec (in parallel) and tabulates e_j, f_j, rate fits and
/// exterior zero counts. Needs forward and reversed products.
pub fn convergence_sweep<T: Scalar>(
    system: &NikishinSystem<T>,
    spec: &SweepSpec,
) -> Result<ConvergenceReport, DiagnosticsError> {
    let delta_k = spec.validate(system)?;
    let m = system.m();
    let contour = match spec.contour {
        Some(c) => c,
        None => default_contour(system.sigma(m).support(), (m > 1).then(|| system.sigma(m - 1).support()))?,
    };
    let outcomes: Vec<Result<IndexOutcome, String>> = spec
        .indices
        .par_iter()
        .enumerate()
        .map(|(i, n)| {
            let sol = solve_type1(system, n, &spec.scheme(i)).map_err(|e| e.to_string())?;
            let rows = index_rows(system, &sol, &spec.grid, &spec.target_list(m)).map_err(|e| e.to_string())?;
            Ok(IndexOutcome { rows, exterior: exterior_audits(&sol, &contour) })
        })
        .collect();

    let mut rows = Vec::new();
    let mut exterior = Vec::new();
    let mut failures = Vec::new();
    for (n, out) in spec.indices.iter().zip(outcomes) {
        match out {
            Ok(o) => {
                rows.extend(o.rows);
                exterior.extend(o.exterior);
            }
            Err(error) => failures.push(SweepFailure { n: n.clone(), error }),
        }
    }
    rows.sort_by_key(|r| (r.total, r.j));

    let targets = spec.target_list(m);
    let mut fits = Vec::new();
    let mut flags = Vec::new();
    for &j in &targets {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.j == j && r.e > 0.0 && r.e.is_finite())
            .map(|r| (r.total as f64, r.e.ln()))
            .collect();
        let tail = &pts[pts.len() / 2..];
        let fit = least_squares(tail).map(|f| RateFit { j, delta_hat: f.slope.exp(), r2: f.r2, points: tail.len() });
        let e: Vec<f64> = rows.iter().filter(|r| r.j == j).map(|r| r.e).collect();
        let f: Vec<f64> = rows.iter().filter(|r| r.j == j).filter_map(|r| r.f).collect();
        flags.push(TargetFlags {
            j,
            e_strictly_decreasing: e.windows(2).all(|w| w[1] < w[0]),
            f_decreasing: f.windows(2).all(|w| w[1] < w[0]),
            delta_below_one: fit.as_ref().is_some_and(|f| f.delta_hat < 1.0),
            f_bound_holds: rows.iter().filter(|r| r.j == j).all(|r| match (r.f, r.f_bound) {
                (Some(f), Some(b)) => f <= b * (1.0 + BOUND_SLACK) + f64::MIN_POSITIVE,
                _ => true,
            }),
        });
        fits.extend(fit);
    }
    Ok(ConvergenceReport {
        m,
        precision: system.precision(),
        grid: spec.grid.clone(),
        delta_k,
        contour,
        solved: spec.indices.len() - failures.len(),
        attempted: spec.indices.len(),
        rows,
        fits,
        flags,
        exterior,
        failures,
    })
}

fn sign<T: Scalar>(e: usize) -> T {
    if e % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn index_rows<T: Scalar>(
    system: &NikishinSystem<T>,
    sol: &HPSolution<T>,
    grid: &[GridPoint],
    targets: &[usize],
) -> Result<Vec<SweepRow>, DiagnosticsError> {
    let m = system.m();
    let prec = system.precision();
    let points: Vec<Complex<T>> = grid.iter().map(|p| p.to_complex(prec)).collect();
    let am: Vec<Complex<T>> = points.iter().map(|z| sol.a[m].eval_complex(z)).collect();
    if am.iter().any(|v| v.re.is_zero() && v.im.is_zero()) {
        return Err(DiagnosticsError::InvalidSweep(format!("a_m vanishes on the grid for n = {}", sol.n)));
    }

    // e_k for every k so the f_j bound can use all of them
    let mut e = vec![0.0f64; m];
    for (k, ek) in e.iter_mut().enumerate() {
        let truth = system.require(m, k + 1)?;
        for (z, a) in points.iter().zip(&am) {
            let ratio = sol.a[k].eval_complex(z) / a.clone();
            let diff = ratio - truth.cauchy_transform(z)? * sign::<T>(m - k);
            *ek = ek.max(complex_abs_f64(&diff));
        }
    }

    let mut rows = Vec::with_capacity(targets.len());
    for &j in targets {
        let support = system.sigma(j + 1).support();
        let mut f: Option<f64> = None;
        let mut b = vec![0.0f64; m];
        b[j] = 1.0;
        for ((z, p), a) in points.iter().zip(grid).zip(&am) {
            if p.on(support) {
                continue;
            }
            let form = linear_form(sol, system, j, z)? / a.clone();
            f = Some(f.unwrap_or(0.0).max(complex_abs_f64(&form)));
            for (k, bk) in b.iter_mut().enumerate().skip(j + 1) {
                *bk = bk.max(complex_abs_f64(&system.require(j + 1, k)?.cauchy_transform(z)?));
            }
        }
        let f_bound = f.map(|_| (j..m).map(|k| e[k] * b[k]).sum());
        rows.push(SweepRow { n: sol.n.clone(), total: sol.n.total(), j, e: e[j], f, f_bound });
    }
    Ok(rows)
}

/// κ predictions for j̄ < m: n_j − n_j̄ for j < m and n_m − n_j̄ − 1 for j = m.
pub fn predicted_kappa(n: &MultiIndex, j: usize) -> Option<i64> {
    let m = n.m();
    let jbar = n.jbar();
    if jbar == m {
        return None;
    }
    let base = n.get(j) as i64 - n.get(jbar) as i64;
    Some(if j == m { base - 1 } else { base })
}

pub fn exterior_audits<T: Scalar>(sol: &HPSolution<T>, contour: &Circle) -> Vec<ExteriorAudit> {
    let n = &sol.n;
    (0..=n.m())
        .map(|j| {
            let predicted = predicted_kappa(n, j);
            match exterior_zero_count(&sol.a[j], contour) {
                Ok(observed) => {
                    let status = match predicted {
                        None => AuditStatus::SkippedOpenQuestion,
                        Some(p) if p == observed as i64 => AuditStatus::Match,
                        Some(_) => AuditStatus::Mismatch,
                    };
                    ExteriorAudit {
                        n: n.clone(),
                        j,
                        jbar: n.jbar(),
                        observed: Some(observed),
                        predicted,
                        inside: Some(sol.a[j].degree().max(0) as usize - observed),
                        status,
                    }
                }
                Err(e) => ExteriorAudit {
                    n: n.clone(),
                    j,
                    jbar: n.jbar(),
                    observed: None,
                    predicted,
                    inside: None,
                    status: AuditStatus::Failed(e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_system, Measure, Orientation, Provenance};
    use crate::numerics::scalar::parse_rational;

    fn midpoint(n: usize, a: i64) -> Measure<Rational> {
        let atoms = (0..n)
            .map(|i| {
                let x = Rational::from_integer(a.into()) + Rational::new((2 * i + 1).into(), (2 * n).into());
                (x, Rational::new(1.into(), n.into()))
            })
            .collect();
        Measure::new(atoms, Interval::from_ints(a, a + 1).unwrap(), Provenance::Generator, Precision::Exact).unwrap()
    }

    fn grid(points: &[&str]) -> Vec<GridPoint> {
        points.iter().map(|p| p.parse().unwrap()).collect()
    }

    #[test]
    fn grid_point_literals() {
        let p: GridPoint = "-1-1i".parse().unwrap();
        assert_eq!(p.to_string(), "-1-1i");
        assert_eq!(serde_json::to_string(&p).unwrap(), "\"-1-1i\"");
        assert_eq!("5/2+2i".parse::<GridPoint>().unwrap().re, parse_rational("2.5").unwrap());
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let s = build_system(vec![midpoint(8, 0), midpoint(8, 2)], Orientation::Both).unwrap();
        let n = |k| MultiIndex::diagonal(2, k).unwrap();
        assert!(SweepSpec::new(vec![], grid(&["-2"])).validate(&s).is_err());
        assert!(SweepSpec::new(vec![n(2)], grid(&["5/2"])).validate(&s).is_err());
        assert!(SweepSpec::new(vec![n(3), n(2)], grid(&["-2"])).validate(&s).is_err());
        assert_eq!(SweepSpec::new(vec![n(2)], grid(&["-2", "4"])).validate(&s).unwrap(), 1.0);
    }

    #[test]
    fn m1_markov_sweep() {
        let s = build_system(vec![midpoint(24, 0)], Orientation::Both).unwrap();
        let indices = (1..=6).map(|k| MultiIndex::new(vec![k]).unwrap()).collect();
        let r = convergence_sweep(&s, &SweepSpec::new(indices, grid(&["2"]))).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.flags[0].e_strictly_decreasing);
        // n = (2): a_0/a_1 = −1/(z − 1/2), e = |σ̂(2) − 2/3|
        let shat = s.sigma(1).cauchy_real(&parse_rational("2").unwrap()).unwrap();
        let expected = (shat - parse_rational("2/3").unwrap()).to_f64().abs();
        assert!((r.rows[1].e - expected).abs() < 1e-15);
        assert!(r.fit(0).unwrap().delta_hat < 1.0);
    }

    #[test]
    fn m2_sweep_rows_and_bound() {
        let s = build_system(vec![midpoint(16, 0), midpoint(16, 2)], Orientation::Both).unwrap();
        let indices = (2..=4).map(|k| MultiIndex::diagonal(2, k).unwrap()).collect();
        let r = convergence_sweep(&s, &SweepSpec::new(indices, grid(&["-2", "4", "5/2+2i", "-1-1i"]))).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.solved, 3);
        assert!(r.flags.iter().all(|f| f.f_bound_holds));
        assert_eq!(r.exterior.len(), 9);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n_total,j,e_j,f_j\n4,0,"));
    }

    #[test]
    fn kappa_predictions() {
        let n = MultiIndex::new(vec![2, 4]).unwrap();
        assert_eq!((0..=2).map(|j| predicted_kappa(&n, j)).collect::<Vec<_>>(), vec![Some(1), Some(0), Some(1)]);
        assert_eq!(predicted_kappa(&MultiIndex::new(vec![3, 3, 2]).unwrap(), 1), None);
    }

    #[test]
    fn failures_are_recorded() {
        let s = build_system(vec![midpoint(6, 0), midpoint(6, 2)], Orientation::Both).unwrap();
        let indices = (1..=3).map(|k| MultiIndex::diagonal(2, k).unwrap()).collect();
        let r = convergence_sweep(&s, &SweepSpec::new(indices, grid(&["-2"]))).unwrap();
        // (3,3) needs 8 atoms
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.solved, 2);
    }
}
