//! Moment tables, inverse-measure moments and the Hessenberg determinants Ω_n.

use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::measure::Measure;
use crate::error::MeasureError;
use crate::numerics::scalar::{Precision, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<T: Scalar> {
    pub c: Vec<T>,
    pub measure_id: String,
    pub prec: Precision,
}

impl<T: Scalar> MomentTable<T> {
    pub fn new(c: Vec<T>, measure_id: impl Into<String>, prec: Precision) -> Self {
        MomentTable { c, measure_id: measure_id.into(), prec }
    }

    /// c_0..c_N of an atomic measure.
    pub fn from_measure(s: &Measure<T>, n: usize, measure_id: impl Into<String>) -> Result<Self, MeasureError> {
        Ok(Self::new(s.moments(n + 1, None)?, measure_id, s.precision()))
    }

    /// Highest available order N.
    pub fn order(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn need(&self, len: usize) -> Result<(), MeasureError> {
        if self.c.len() < len {
            return Err(MeasureError::ShortTable { need: len, have: self.c.len() });
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), MeasureError> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| MeasureError::Discretization(e.to_string());
        wr.write_record(["nu", "c"]).map_err(io)?;
        for (nu, c) in self.c.iter().enumerate() {
            wr.write_record([nu.to_string(), c.to_exact_string()]).map_err(io)?;
        }
        wr.flush().map_err(|e| MeasureError::Discretization(e.to_string()))
    }

    /// Reads a `nu,c` table; rows may come in any order but must cover 0..N.
    pub fn read_csv<R: Read>(r: R, measure_id: impl Into<String>, prec: Precision) -> Result<Self, MeasureError> {
        let mut rd = csv::Reader::from_reader(r);
        let mut rows: Vec<(usize, T)> = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| MeasureError::Discretization(e.to_string()))?;
            let nu: usize = rec
                .get(0)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| MeasureError::Discretization("bad nu column".into()))?;
            let c = T::parse_scalar(rec.get(1).unwrap_or(""), prec)?;
            rows.push((nu, c));
        }
        rows.sort_by_key(|r| r.0);
        if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
            return Err(MeasureError::Discretization("moment rows must cover 0..N without gaps".into()));
        }
        Ok(Self::new(rows.into_iter().map(|r| r.1).collect(), measure_id, prec))
    }
}

/// c_ν = 1/(ν+1), the moments of Lebesgue measure on [0, 1].
pub fn uniform_moments(n: usize) -> MomentTable<Rational> {
    let c = (0..=n).map(|k| Rational::new(1.into(), ((k + 1) as i64).into())).collect();
    MomentTable::new(c, "uniform[0,1]", Precision::Exact)
}

/// Coefficients of 1/ŝ(z) = d_{−2} z + d_{−1} + Σ d_ν z^{−ν−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseMoments<T: Scalar> {
    pub d_m2: T,
    pub d_m1: T,
    pub d: Vec<T>,
}

/// Forward substitution on the triangular convolution system, d_0..d_N.
pub fn inverse_moments<T: Scalar>(table: &MomentTable<T>, n: usize) -> Result<InverseMoments<T>, MeasureError> {
    table.need(n + 3)?;
    let c = &table.c;
    if c[0].is_zero() {
        return Err(MeasureError::ZeroMoment);
    }
    let d_m2 = T::one() / c[0].clone();
    let d_m1 = -(d_m2.clone() * c[1].clone()) / c[0].clone();
    let mut d: Vec<T> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = d_m2.clone() * c[k + 2].clone() + d_m1.clone() * c[k + 1].clone();
        for (nu, dn) in d.iter().enumerate() {
            acc = acc + dn.clone() * c[k - nu].clone();
        }
        d.push(-acc / c[0].clone());
    }
    Ok(InverseMoments { d_m2, d_m1, d })
}

/// Ω_n: determinant of the (n+2)×(n+2) lower Hessenberg matrix with first
/// column (c_1..c_{n+2}), diagonal c_1 and superdiagonal c_0.
///
/// Uses first-row expansion D(k, s) = c_{1+s} D(k−1, 0) − c_0 D(k−1, s+1),
/// where D(k, s) has first column (c_{1+s}, ..., c_{k+s}).
pub fn hessenberg_omega<T: Scalar>(table: &MomentTable<T>, n: usize) -> Result<T, MeasureError> {
    table.need(n + 3)?;
    let c = &table.c;
    let size = n + 2;
    // row k holds D(k, s) for s = 0..=size-k
    let mut prev: Vec<T> = (0..size).map(|s| c[1 + s].clone()).collect();
    for k in 2..=size {
        let cur = (0..=size - k)
            .map(|s| c[1 + s].clone() * prev[0].clone() - c[0].clone() * prev[s + 1].clone())
            .collect();
        prev = cur;
    }
    Ok(prev[0].clone())
}

/// d_n from the closed form (−1)^n Ω_n / c_0^{n+3}.
pub fn d_from_omega<T: Scalar>(table: &MomentTable<T>, n: usize) -> Result<T, MeasureError> {
    let omega = hessenberg_omega(table, n)?;
    let c0 = table.c[0].clone();
    if c0.is_zero() {
        return Err(MeasureError::ZeroMoment);
    }
    let mut den = T::one();
    for _ in 0..n + 3 {
        den = den * c0.clone();
    }
    let v = omega / den;
    Ok(if n % 2 == 0 { v } else { -v })
}

/// One term of the Leibniz expansion of Ω_n: sign · Π c_{indices}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeibnizTerm {
    pub sign: i8,
    /// Sorted moment indices, one per factor.
    pub indices: Vec<usize>,
}

/// All structurally nonzero permutation terms of Ω_n (uncollected).
pub fn omega_expansion(n: usize) -> Vec<LeibnizTerm> {
    let size = n + 2;
    let mut out = Vec::new();
    let mut used = vec![false; size];
    let mut picks = Vec::with_capacity(size);
    fn rec(row: usize, size: usize, used: &mut [bool], picks: &mut Vec<usize>, out: &mut Vec<LeibnizTerm>) {
        if row == size {
            let mut inversions = 0;
            for i in 0..size {
                for j in i + 1..size {
                    if picks[i] > picks[j] {
                        inversions += 1;
                    }
                }
            }
            let mut indices: Vec<usize> = picks.iter().enumerate().map(|(r, &col)| r + 1 - col).collect();
            indices.sort_unstable();
            out.push(LeibnizTerm { sign: if inversions % 2 == 0 { 1 } else { -1 }, indices });
            return;
        }
        // entry (row, col) is c_{row-col+1}, nonzero only for col <= row + 1
        for col in 0..=(row + 1).min(size - 1) {
            if !used[col] {
                used[col] = true;
                picks.push(col);
                rec(row + 1, size, used, picks, out);
                picks.pop();
                used[col] = false;
            }
        }
    }
    rec(0, size, &mut used, &mut picks, &mut out);
    out
}

/// Collects equal monomials, dropping those that cancel.
pub fn collect_terms(terms: &[LeibnizTerm]) -> Vec<(Vec<usize>, i64)> {
    let mut acc: HashMap<Vec<usize>, i64> = HashMap::new();
    for t in terms {
        *acc.entry(t.indices.clone()).or_default() += t.sign as i64;
    }
    let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    out.sort();
    out
}

pub fn evaluate_expansion<T: Scalar>(terms: &[LeibnizTerm], c: &[T]) -> T {
    terms.iter().fold(T::zero(), |acc, t| {
        let prod = t.indices.iter().fold(T::one(), |p, &i| p * c[i].clone());
        if t.sign > 0 {
            acc + prod
        } else {
            acc - prod
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarlemanTrend {
    /// Terms decay no faster than 1/n: partial sums keep growing.
    DivergentLike,
    /// Terms decay faster than 1/n.
    ConvergentLike,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlemanReport {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Fitted p in term_n ≈ C n^p over the second half of the terms.
    pub decay_exponent: f64,
    pub trend: CarlemanTrend,
}

impl CarlemanReport {
    pub fn sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }
}

/// Partial sums Σ_{n=1}^N |c_n|^{−1/2n} with a power-law decay fit.
pub fn carleman_sum<T: Scalar>(table: &MomentTable<T>, n: usize) -> Result<CarlemanReport, MeasureError> {
    table.need(n + 1)?;
    let mut terms = Vec::with_capacity(n);
    for k in 1..=n {
        let c = &table.c[k];
        if c.is_zero() {
            return Err(MeasureError::ZeroCarlemanMoment(k));
        }
        terms.push((-c.ln_abs() / (2.0 * k as f64)).exp());
    }
    let partial_sums: Vec<f64> = terms
        .iter()
        .scan(0.0, |s, t| {
            *s += t;
            Some(*s)
        })
        .collect();
    let start = (n / 2).max(1);
    let pts: Vec<(f64, f64)> = (start..=n).map(|k| ((k as f64).ln(), terms[k - 1].ln())).collect();
    let decay_exponent = crate::diagnostics::fit::least_squares(&pts).map(|f| f.slope).unwrap_or(f64::NAN);
    let trend = if pts.len() < 3 || !decay_exponent.is_finite() {
        CarlemanTrend::Inconclusive
    } else if decay_exponent >= -1.0 - 0.1 {
        CarlemanTrend::DivergentLike
    } else {
        CarlemanTrend::ConvergentLike
    };
    Ok(CarlemanReport { terms, partial_sums, decay_exponent, trend })
}
