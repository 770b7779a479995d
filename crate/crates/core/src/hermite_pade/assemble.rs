//! Linear systems for the type I problem.
//!
//! Reduced system: ∫ x^ν A_{n,1}(x) dσ_1(x)/w(x) = 0 for ν = 0..|n|−2, written in
//! the coefficients of a_1..a_m through ∫ x^{ν+p} ds_{1,k}/w.
//!
//! Full system: the defining conditions on A_{n,0} directly, in the coefficients
//! of a_0..a_m. Zeros of w give Taylor conditions, the rest sit at infinity.

use num_bigint::BigInt;

use super::multi_index::MultiIndex;
use super::scheme::InterpolationScheme;
use crate::error::SolveError;
use crate::measures::NikishinSystem;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{Complex, Precision, Scalar};

/// Coefficient matrix with a (block, power) label per column. Block 0 is a_0.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T: Scalar> {
    pub rows: Vec<Vec<T>>,
    pub columns: Vec<(usize, usize)>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }
}

/// Every generator must carry at least |n| + max(n_j) − 1 atoms.
pub fn check_atom_budget<T: Scalar>(system: &NikishinSystem<T>, n: &MultiIndex) -> Result<(), SolveError> {
    let required = n.unknown_count();
    for (g, s) in system.generators().iter().enumerate() {
        if s.len() < required {
            return Err(SolveError::AtomBudget { generator: g + 1, required, available: s.len() });
        }
    }
    Ok(())
}

pub(crate) fn check_inputs<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    w: &InterpolationScheme,
) -> Result<(), SolveError> {
    if n.m() != system.m() {
        return Err(SolveError::InvalidIndex(format!("{n} has {} components, system has m = {}", n.m(), system.m())));
    }
    w.validate(n, system.sigma(1).support())?;
    check_atom_budget(system, n)
}

pub(crate) fn weight<T: Scalar>(w: &InterpolationScheme, prec: Precision) -> Option<Polynomial<T>> {
    (!w.is_trivial()).then(|| w.polynomial(prec))
}

/// ∫ x^s ds_{1,k}(x)/w(x) for s < count, k = 1..m.
pub fn weighted_moments<T: Scalar>(
    system: &NikishinSystem<T>,
    w: Option<&Polynomial<T>>,
    count: usize,
) -> Result<Vec<Vec<T>>, SolveError> {
    (1..=system.m())
        .map(|k| match w {
            None => Ok(system.moments(1, k, count)?),
            Some(p) => Ok(system.require(1, k)?.moments(count, Some(p))?),
        })
        .collect()
}

/// Columns (k, p) for k = 1..m, p < n_k; empty blocks are dropped.
fn block_columns(n: &MultiIndex) -> Vec<(usize, usize)> {
    (1..=n.m()).flat_map(|k| (0..n.get(k)).map(move |p| (k, p))).collect()
}

/// (|n| − 1) × |n| orthogonality matrix.
pub fn assemble_orthogonality<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    w: &InterpolationScheme,
) -> Result<LinearSystem<T>, SolveError> {
    check_inputs(system, n, w)?;
    let prec = system.precision();
    let wp = weight::<T>(w, prec);
    let nrows = n.total() - 1;
    let mu = weighted_moments(system, wp.as_ref(), (nrows + n.max()).max(1))?;
    let columns = block_columns(n);
    let rows = (0..nrows)
        .map(|nu| columns.iter().map(|&(k, p)| mu[k - 1][nu + p].clone()).collect())
        .collect();
    Ok(LinearSystem { rows, columns })
}

fn binomial<T: Scalar>(i: usize, t: usize, prec: Precision) -> T {
    T::from_bigint_ratio(num_integer::binomial(BigInt::from(i), BigInt::from(t)), BigInt::from(1), prec)
}

fn cpow<T: Scalar>(z: &Complex<T>, k: usize) -> Complex<T> {
    let mut acc = Complex::new(T::one(), T::zero());
    for _ in 0..k {
        acc = acc * z.clone();
    }
    acc
}

/// Taylor rows t = 0..r−1 of A_{n,0} about ζ.
fn taylor_rows<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    columns: &[(usize, usize)],
    zeta: &Complex<T>,
    r: usize,
) -> Result<Vec<Vec<Complex<T>>>, SolveError> {
    let prec = system.precision();
    let czero = Complex::new(T::zero(), T::zero());
    // S[k−1][t] = t-th Taylor coefficient of ŝ_{1,k} at ζ = Σ w (−1)^t / (ζ − x)^{t+1}
    let mut s = Vec::with_capacity(n.m());
    for k in 1..=n.m() {
        let mut coeffs = vec![czero.clone(); r];
        for (i, (x, wt)) in system.require(1, k)?.atoms().enumerate() {
            let d = zeta.clone() - Complex::new(x.clone(), T::zero());
            if d.re.is_zero() && d.im.is_zero() {
                return Err(crate::error::MeasureError::PoleProximity(i).into());
            }
            let inv = Complex::new(T::one(), T::zero()) / d;
            let mut term = Complex::new(wt.clone(), T::zero()) * inv.clone();
            for (t, slot) in coeffs.iter_mut().enumerate() {
                let signed = if t % 2 == 0 { term.clone() } else { -term.clone() };
                *slot = slot.clone() + signed;
                term = term * inv.clone();
            }
        }
        s.push(coeffs);
    }
    let mut rows = Vec::with_capacity(r);
    for t in 0..r {
        let row = columns
            .iter()
            .map(|&(k, p)| {
                if k == 0 {
                    // z^p → C(p, t) ζ^{p−t}
                    if p < t {
                        czero.clone()
                    } else {
                        cpow(zeta, p - t) * Complex::new(binomial::<T>(p, t, prec), T::zero())
                    }
                } else {
                    (0..=t.min(p)).fold(czero.clone(), |acc, u| {
                        acc + cpow(zeta, p - u) * Complex::new(binomial::<T>(p, u, prec), T::zero()) * s[k - 1][t - u].clone()
                    })
                }
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

/// (|n| + max − 2) × (|n| + max − 1) system from the definition.
pub fn assemble_full<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    w: &InterpolationScheme,
) -> Result<LinearSystem<T>, SolveError> {
    check_inputs(system, n, w)?;
    let prec = system.precision();
    let n0 = n.n0();
    let mut columns: Vec<(usize, usize)> = (0..n0).map(|p| (0, p)).collect();
    columns.extend(block_columns(n));
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n.condition_count());

    // coefficients of z^e in A_{n,0} for e > deg w − |n|
    let lowest = w.degree() as i64 - n.total() as i64 + 1;
    let highest = n.max() as i64 - 2;
    let count = (highest - lowest + 1).max(0) as usize + n.max();
    let c = weighted_moments(system, None, count.max(1))?;
    for e in lowest..=highest {
        let row = columns
            .iter()
            .map(|&(k, p)| {
                if k == 0 {
                    if p as i64 == e {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    let nu = p as i64 - e - 1;
                    if nu >= 0 {
                        c[k - 1][nu as usize].clone()
                    } else {
                        T::zero()
                    }
                }
            })
            .collect();
        rows.push(row);
    }

    for (root, mult) in w.real_roots() {
        let zeta = Complex::new(T::from_rational(root, prec), T::zero());
        for row in taylor_rows(system, n, &columns, &zeta, *mult)? {
            rows.push(row.into_iter().map(|v| v.re).collect());
        }
    }
    for (re, im, mult) in w.complex_roots() {
        let zeta = Complex::new(T::from_rational(re, prec), T::from_rational(im, prec));
        for row in taylor_rows(system, n, &columns, &zeta, *mult)? {
            rows.push(row.iter().map(|v| v.re.clone()).collect());
            rows.push(row.into_iter().map(|v| v.im).collect());
        }
    }
    Ok(LinearSystem { rows, columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_system, Interval, Measure, Orientation, Provenance};
    use crate::numerics::scalar::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn gen(list: &[(&str, &str)], a: i64, b: i64) -> Measure<Rational> {
        Measure::new(
            list.iter().map(|(x, w)| (q(x), q(w))).collect(),
            Interval::from_ints(a, b).unwrap(),
            Provenance::Generator,
            Precision::Exact,
        )
        .unwrap()
    }

    fn midpoint3() -> Measure<Rational> {
        gen(&[("1/6", "1/3"), ("1/2", "1/3"), ("5/6", "1/3")], 0, 1)
    }

    #[test]
    fn m1_n2_matrix_is_first_moments() {
        let s = build_system(vec![midpoint3()], Orientation::Forward).unwrap();
        let n = MultiIndex::new(vec![2]).unwrap();
        let m = assemble_orthogonality(&s, &n, &InterpolationScheme::trivial()).unwrap();
        assert_eq!(m.rows, vec![vec![q("1"), q("1/2")]]);
    }

    #[test]
    fn m1_n1_has_no_rows() {
        let s = build_system(vec![midpoint3()], Orientation::Forward).unwrap();
        let m = assemble_orthogonality(&s, &MultiIndex::new(vec![1]).unwrap(), &InterpolationScheme::trivial()).unwrap();
        assert_eq!(m.nrows(), 0);
        assert_eq!(m.ncols(), 1);
    }

    #[test]
    fn m2_n11_matrix_is_masses() {
        let s = build_system(
            vec![gen(&[("0", "1/2"), ("1", "1/2")], 0, 1), gen(&[("2", "1/2"), ("3", "1/2")], 2, 3)],
            Orientation::Forward,
        )
        .unwrap();
        let m = assemble_orthogonality(&s, &MultiIndex::new(vec![1, 1]).unwrap(), &InterpolationScheme::trivial()).unwrap();
        assert_eq!(m.rows, vec![vec![q("1"), s.product(1, 2).unwrap().mass()]]);
        assert_eq!(m.rows[0][1], q("-7/12"));
    }

    #[test]
    fn full_system_shape() {
        let s = build_system(vec![midpoint3()], Orientation::Forward).unwrap();
        let n = MultiIndex::new(vec![2]).unwrap();
        let full = assemble_full(&s, &n, &InterpolationScheme::trivial()).unwrap();
        assert_eq!((full.nrows(), full.ncols()), (2, 3));
        let w = InterpolationScheme::parse(&["2", "1+1i"]).unwrap();
        let n = MultiIndex::new(vec![3]).unwrap();
        let s = build_system(
            vec![gen(&[("1/8", "1"), ("1/4", "1"), ("1/2", "1"), ("3/4", "1"), ("7/8", "1")], 0, 1)],
            Orientation::Forward,
        )
        .unwrap();
        let full = assemble_full(&s, &n, &w).unwrap();
        assert_eq!((full.nrows(), full.ncols()), (4, 5));
    }

    #[test]
    fn budget_and_scheme_are_checked() {
        let s = build_system(vec![midpoint3()], Orientation::Forward).unwrap();
        let n = MultiIndex::new(vec![3]).unwrap();
        assert!(matches!(
            assemble_orthogonality(&s, &n, &InterpolationScheme::trivial()),
            Err(SolveError::AtomBudget { generator: 1, required: 5, available: 3 })
        ));
        let n = MultiIndex::new(vec![2]).unwrap();
        let on_support = InterpolationScheme::parse(&["1/2"]).unwrap();
        assert!(matches!(assemble_orthogonality(&s, &n, &on_support), Err(SolveError::InvalidScheme(_))));
    }
}
