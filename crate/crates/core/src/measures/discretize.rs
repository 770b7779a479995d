//! Gauss-type discretizations of classical densities.
//!
//! Nodes start from f64 Golub–Welsch eigenvalues and are polished by Newton
//! iteration on the monic three-term recurrence in extended precision, then
//! rounded to dyadic rationals so the exact backend can consume them.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::interval::{Endpoint, Interval};
use super::measure::{Measure, Provenance};
use crate::error::MeasureError;
use crate::numerics::scalar::{round_to_dyadic, BigFloat, Precision, Rational, Scalar};

/// Bits kept in rounded nodes and weights unless the caller asks otherwise.
pub const DEFAULT_NODE_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DensityKind {
    /// Lebesgue measure, Gauss-Legendre nodes.
    Uniform,
    /// Lebesgue measure, N equal cells with atoms at the cell midpoints (exact rationals).
    UniformMidpoint,
    /// (b − x)^α (x − a)^β after mapping [a, b] to [−1, 1].
    Jacobi {
        #[serde(with = "rational_str")]
        alpha: Rational,
        #[serde(with = "rational_str")]
        beta: Rational,
    },
    /// (x − a)^α e^{−(x − a)} on [a, ∞).
    Laguerre {
        #[serde(with = "rational_str")]
        alpha: Rational,
    },
    /// Explicit atoms (x, w).
    AtomList {
        #[serde(with = "atom_strs")]
        atoms: Vec<(Rational, Rational)>,
    },
}

impl DensityKind {
    pub fn name(&self) -> String {
        match self {
            DensityKind::Uniform => "uniform".into(),
            DensityKind::UniformMidpoint => "uniform-midpoint".into(),
            DensityKind::Jacobi { alpha, beta } => format!("jacobi({alpha},{beta})"),
            DensityKind::Laguerre { alpha } => format!("laguerre({alpha})"),
            DensityKind::AtomList { .. } => "atom-list".into(),
        }
    }
}

pub(crate) mod rational_str {
    use crate::numerics::scalar::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected rational, got {other}"))),
        };
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod atom_strs {
    use crate::numerics::scalar::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(atoms: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(atoms.len()))?;
        for (x, w) in atoms {
            seq.serialize_element(&[x.to_string(), w.to_string()])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let raw: Vec<(serde_json::Value, serde_json::Value)> = Vec::deserialize(d)?;
        let p = |v: serde_json::Value| -> Result<Rational, D::Error> {
            let t = match v {
                serde_json::Value::String(s) => s,
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(serde::de::Error::custom(format!("expected rational, got {other}"))),
            };
            parse_rational(&t).map_err(serde::de::Error::custom)
        };
        raw.into_iter().map(|(x, w)| Ok((p(x)?, p(w)?))).collect()
    }
}

/// Monic recurrence p_{k+1} = (x − a_k) p_k − b_k p_{k−1} with total mass μ_0.
#[derive(Clone, Debug)]
pub struct Recurrence {
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub mu0: Rational,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn integer_valued(r: &Rational) -> Option<u64> {
    (r.is_integer() && *r >= Rational::zero()).then(|| num_traits::ToPrimitive::to_u64(&r.to_integer())).flatten()
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn gamma_ratio(ln: f64) -> Rational {
    Rational::from_float(ln.exp()).unwrap_or_else(Rational::one)
}

/// Jacobi recurrence on [−1, 1] for (1 − t)^α (1 + t)^β.
pub fn jacobi_recurrence(alpha: &Rational, beta: &Rational, n: usize) -> Recurrence {
    let one = Rational::one();
    let two = q(2, 1);
    let four = q(4, 1);
    let ab = alpha + beta;
    let mut a = Vec::with_capacity(n);
    let mut b = vec![Rational::zero(); n];
    for k in 0..n {
        let kk = Rational::from_integer(BigInt::from(k));
        if k == 0 {
            a.push((beta - alpha) / (ab.clone() + two.clone()));
        } else {
            let s = two.clone() * kk.clone() + ab.clone();
            let num = beta * beta - alpha * alpha;
            let den = s.clone() * (s + two.clone());
            a.push(if num.is_zero() { Rational::zero() } else { num / den });
        }
        if k == 1 {
            let s = ab.clone() + two.clone();
            b[k] = four.clone() * (one.clone() + alpha) * (one.clone() + beta) / (s.clone() * s * (ab.clone() + q(3, 1)));
        } else if k >= 2 {
            let s = two.clone() * kk.clone() + ab.clone();
            b[k] = four.clone() * kk.clone() * (kk.clone() + alpha) * (kk.clone() + beta) * (kk.clone() + ab.clone())
                / (s.clone() * s.clone() * (s.clone() + one.clone()) * (s - one.clone()));
        }
    }
    let mu0 = match (integer_valued(alpha), integer_valued(beta)) {
        (Some(x), Some(y)) => Rational::new(
            (BigInt::one() << (x + y + 1) as usize) * factorial(x) * factorial(y),
            factorial(x + y + 1),
        ),
        _ => {
            let (af, bf) = (alpha.to_f64(), beta.to_f64());
            let ln = (af + bf + 1.0) * std::f64::consts::LN_2 + statrs::function::gamma::ln_gamma(af + 1.0)
                + statrs::function::gamma::ln_gamma(bf + 1.0)
                - statrs::function::gamma::ln_gamma(af + bf + 2.0);
            gamma_ratio(ln)
        }
    };
    Recurrence { a, b, mu0 }
}

/// Generalized Laguerre recurrence for t^α e^{−t} on [0, ∞).
pub fn laguerre_recurrence(alpha: &Rational, n: usize) -> Recurrence {
    let a = (0..n).map(|k| Rational::from_integer(BigInt::from(2 * k + 1)) + alpha).collect();
    let b = (0..n)
        .map(|k| {
            let kk = Rational::from_integer(BigInt::from(k));
            kk.clone() * (kk + alpha)
        })
        .collect();
    let mu0 = match integer_valued(alpha) {
        Some(x) => Rational::from_integer(factorial(x)),
        None => gamma_ratio(statrs::function::gamma::ln_gamma(alpha.to_f64() + 1.0)),
    };
    Recurrence { a, b, mu0 }
}

/// (p_n(x), p_n'(x), p_{n−1}(x)).
fn eval_recurrence(x: &BigFloat, n: usize, a: &[BigFloat], b: &[BigFloat]) -> (BigFloat, BigFloat, BigFloat) {
    let mut p_prev = BigFloat::zero();
    let mut p = BigFloat::one();
    let mut dp_prev = BigFloat::zero();
    let mut dp = BigFloat::zero();
    for k in 0..n {
        let xa = x.clone() - a[k].clone();
        let p_next = xa.clone() * p.clone() - b[k].clone() * p_prev.clone();
        let dp_next = p.clone() + xa * dp.clone() - b[k].clone() * dp_prev.clone();
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp, p_prev)
}

/// N-point Gauss rule (nodes ascending) for a recurrence, in `bits` of precision.
pub fn gauss_rule(rec: &Recurrence, n: usize, bits: u32) -> Result<(Vec<BigFloat>, Vec<BigFloat>), MeasureError> {
    if n == 0 || rec.a.len() < n || rec.b.len() < n {
        return Err(MeasureError::Discretization(format!("recurrence too short for {n} nodes")));
    }
    let work = Precision::Float(bits + 64);
    let jm = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            rec.a[i].to_f64()
        } else if i + 1 == j || j + 1 == i {
            rec.b[i.max(j)].to_f64().sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jm).eigenvalues.iter().copied().collect();
    guesses.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    let a: Vec<BigFloat> = rec.a.iter().map(|v| BigFloat::from_rational(v, work)).collect();
    let b: Vec<BigFloat> = rec.b.iter().map(|v| BigFloat::from_rational(v, work)).collect();
    let eps = BigFloat::from_bigint_ratio(BigInt::one(), BigInt::one() << (bits + 32) as usize, work);
    let mut nodes = Vec::with_capacity(n);
    for g in guesses {
        let mut x = BigFloat::from_f64(g, work);
        for _ in 0..200 {
            let (p, dp, _) = eval_recurrence(&x, n, &a, &b);
            if dp.is_zero() {
                break;
            }
            let dx = p / dp;
            x = x - dx.clone();
            let scale = if x.abs_val() > BigFloat::one() { x.abs_val() } else { BigFloat::one() };
            if dx.abs_val() <= eps.clone() * scale {
                break;
            }
        }
        nodes.push(x);
    }
    let mut prod_b = BigFloat::from_rational(&rec.mu0, work);
    for bk in b.iter().take(n).skip(1) {
        prod_b = prod_b * bk.clone();
    }
    let weights = nodes
        .iter()
        .map(|x| {
            let (_, dp, pm1) = eval_recurrence(x, n, &a, &b);
            prod_b.clone() / (pm1 * dp)
        })
        .collect();
    Ok((nodes, weights))
}

fn affine_rule(
    nodes: &[BigFloat],
    weights: &[BigFloat],
    shift: &Rational,
    scale: &Rational,
    bits: u32,
    symmetric: bool,
    mass: &Rational,
) -> Vec<(Rational, Rational)> {
    let n = nodes.len();
    let mut xs: Vec<Rational> = nodes.iter().map(|x| round_to_dyadic(&(x.to_rational() * scale + shift), bits)).collect();
    let mut ws: Vec<Rational> = weights.iter().map(|w| round_to_dyadic(&(w.to_rational() * scale), bits)).collect();
    if symmetric {
        let centre2 = shift.clone() * q(2, 1);
        for i in 0..n / 2 {
            xs[n - 1 - i] = centre2.clone() - xs[i].clone();
            ws[n - 1 - i] = ws[i].clone();
        }
        if n % 2 == 1 {
            xs[n / 2] = shift.clone();
        }
    }
    // put the rounding defect of the total mass on the central weight(s)
    let defect = mass.clone() - ws.iter().fold(Rational::zero(), |s, w| s + w);
    if n % 2 == 1 || !symmetric {
        ws[n / 2] += defect;
    } else {
        let half = defect / q(2, 1);
        ws[n / 2 - 1] += half.clone();
        ws[n / 2] += half;
    }
    xs.into_iter().zip(ws).collect()
}

/// N-point rule for `kind` on `support`, as an exact-rational measure.
pub fn discretize_density(kind: &DensityKind, support: &Interval, n: usize) -> Result<Measure<Rational>, MeasureError> {
    discretize_density_with_bits(kind, support, n, DEFAULT_NODE_BITS)
}

pub fn discretize_density_with_bits(
    kind: &DensityKind,
    support: &Interval,
    n: usize,
    bits: u32,
) -> Result<Measure<Rational>, MeasureError> {
    let prov = Provenance::Discretized(kind.name());
    if let DensityKind::AtomList { atoms } = kind {
        return Measure::new(atoms.clone(), support.clone(), prov, Precision::Exact);
    }
    if n < 2 {
        return Err(MeasureError::Discretization(format!("need at least 2 nodes, got {n}")));
    }
    let finite = |e: &Endpoint| e.finite().cloned();
    let atoms = match kind {
        DensityKind::UniformMidpoint => {
            let (a, b) = (finite(support.a()), finite(support.b()));
            let (Some(a), Some(b)) = (a, b) else {
                return Err(MeasureError::Discretization("uniform density needs a bounded interval".into()));
            };
            let h = (b - a.clone()) / Rational::from_integer(BigInt::from(n));
            (0..n)
                .map(|i| (a.clone() + h.clone() * q(2 * i as i64 + 1, 2), h.clone()))
                .collect()
        }
        DensityKind::Uniform | DensityKind::Jacobi { .. } => {
            let (alpha, beta) = match kind {
                DensityKind::Jacobi { alpha, beta } => (alpha.clone(), beta.clone()),
                _ => (Rational::zero(), Rational::zero()),
            };
            if alpha <= q(-1, 1) || beta <= q(-1, 1) {
                return Err(MeasureError::Discretization("jacobi parameters must exceed -1".into()));
            }
            let (Some(a), Some(b)) = (finite(support.a()), finite(support.b())) else {
                return Err(MeasureError::Discretization("jacobi density needs a bounded interval".into()));
            };
            let rec = jacobi_recurrence(&alpha, &beta, n);
            let (nodes, weights) = gauss_rule(&rec, n, bits)?;
            let half = (b.clone() - a.clone()) / q(2, 1);
            let centre = (a + b) / q(2, 1);
            let mass = rec.mu0.clone() * half.clone();
            affine_rule(&nodes, &weights, &centre, &half, bits, alpha == beta, &mass)
        }
        DensityKind::Laguerre { alpha } => {
            if *alpha <= q(-1, 1) {
                return Err(MeasureError::Discretization("laguerre parameter must exceed -1".into()));
            }
            let Some(a) = finite(support.a()) else {
                return Err(MeasureError::Discretization("laguerre density needs a finite left endpoint".into()));
            };
            if *support.b() != Endpoint::PosInf {
                return Err(MeasureError::Discretization("laguerre density lives on a half line [a, inf)".into()));
            }
            let rec = laguerre_recurrence(alpha, n);
            let (nodes, weights) = gauss_rule(&rec, n, bits)?;
            let mass = rec.mu0.clone();
            affine_rule(&nodes, &weights, &a, &Rational::one(), bits, false, &mass)
        }
        DensityKind::AtomList { .. } => unreachable!(),
    };
    Measure::new(atoms, support.clone(), prov, Precision::Exact)
}
