use serde::{Deserialize, Serialize};

use super::assemble::{assemble_full, assemble_orthogonality, check_inputs, weight, weighted_moments, LinearSystem};
use super::multi_index::MultiIndex;
use super::scheme::{weight_changes_sign, InterpolationScheme};
use crate::error::SolveError;
use crate::measures::NikishinSystem;
use crate::numerics::bezout::bezoutian;
use crate::numerics::linalg::{mat_vec, nullspace};
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{Precision, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Leading coefficient of a_{n,m} (of the last nonempty block) equal to 1.
    #[default]
    MonicLast,
    /// Largest-magnitude coefficient equal to 1.
    UnitVector,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverPath {
    /// Orthogonality conditions for a_1..a_m, then a_0 from the Bezoutian formula.
    #[default]
    Reduced,
    /// All interpolation conditions on a_0..a_m at once.
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub normalization: Normalization,
    pub path: SolverPath,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// max |M v| over the solved system (0 in exact mode).
    pub system: f64,
    /// Largest discarded coefficient of a_0 above degree n_0 − 1 (0 in exact mode).
    pub a0_tail: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPSolution<T: Scalar> {
    pub n: MultiIndex,
    pub scheme: InterpolationScheme,
    /// a_{n,0}, ..., a_{n,m}.
    pub a: Vec<Polynomial<T>>,
    pub normalization: Normalization,
    pub path: SolverPath,
    pub nullspace_dimension: usize,
    pub rank: usize,
    pub residual: ResidualReport,
    /// w has non-real zeros.
    pub complex_weight: bool,
    /// σ_1/w changes sign on the atoms of σ_1.
    pub weight_sign_change: bool,
}

impl<T: Scalar> HPSolution<T> {
    pub fn m(&self) -> usize {
        self.n.m()
    }

    pub fn precision(&self) -> Precision {
        self.a[0].precision()
    }

    /// a_{n,j}, j = 0..=m.
    pub fn a(&self, j: usize) -> &Polynomial<T> {
        &self.a[j]
    }

    /// Coefficients of a_0..a_m, block j padded to n_j entries.
    pub fn coefficient_vector(&self) -> Vec<T> {
        (0..=self.m())
            .flat_map(|j| (0..self.n.get(j)).map(move |p| self.a[j].coeff(p)))
            .collect()
    }

    /// Outside the regime covered by the real orthogonality argument.
    pub fn outside_verified_regime(&self) -> bool {
        self.complex_weight && self.weight_sign_change
    }
}

/// Solves with the reduced path and monic a_{n,m}.
pub fn solve_type1<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    w: &InterpolationScheme,
) -> Result<HPSolution<T>, SolveError> {
    solve_type1_with(system, n, w, SolveOptions::default())
}

pub fn solve_type1_with<T: Scalar>(
    system: &NikishinSystem<T>,
    n: &MultiIndex,
    w: &InterpolationScheme,
    opts: SolveOptions,
) -> Result<HPSolution<T>, SolveError> {
    let prec = system.precision();
    let (mut a, dimension, rank, res) = match opts.path {
        SolverPath::Reduced => {
            let mat = assemble_orthogonality(system, n, w)?;
            let (v, dimension, rank, res) = one_dimensional(&mat, prec)?;
            let mut a = vec![Polynomial::zero(prec)];
            a.extend(split_blocks(&v, &mat, n.m(), 1, prec));
            (a, dimension, rank, res)
        }
        SolverPath::Full => {
            let mat = assemble_full(system, n, w)?;
            let (v, dimension, rank, res) = one_dimensional(&mat, prec)?;
            (split_blocks(&v, &mat, n.m(), 0, prec), dimension, rank, res)
        }
    };
    normalize(&mut a, n, opts.normalization)?;
    let mut a0_tail = 0.0;
    if opts.path == SolverPath::Reduced {
        let (a0, tail) = reconstruct_a0_with_tail(&a[1..], system, w, n)?;
        a[0] = a0;
        a0_tail = tail;
    }
    check_degrees(&a, n)?;
    let wp = w.polynomial::<T>(prec);
    Ok(HPSolution {
        n: n.clone(),
        scheme: w.clone(),
        a,
        normalization: opts.normalization,
        path: opts.path,
        nullspace_dimension: dimension,
        rank,
        residual: ResidualReport { system: res, a0_tail },
        complex_weight: w.has_complex(),
        weight_sign_change: weight_changes_sign(&wp, system.sigma(1).nodes()),
    })
}

fn one_dimensional<T: Scalar>(mat: &LinearSystem<T>, prec: Precision) -> Result<(Vec<T>, usize, usize, f64), SolveError> {
    let ns = nullspace(&mat.rows, mat.ncols(), prec);
    if ns.dimension() != 1 {
        return Err(SolveError::Degenerate { dimension: ns.dimension(), rank: ns.rank, columns: mat.ncols() });
    }
    let v = ns.basis.into_iter().next().expect("one vector");
    let res = if prec.is_exact() {
        0.0
    } else {
        let scale = v.iter().map(|x| x.abs_val().to_f64()).fold(0.0, f64::max);
        mat_vec(&mat.rows, &v).iter().map(|r| r.abs_val().to_f64()).fold(0.0, f64::max) / scale.max(f64::MIN_POSITIVE)
    };
    Ok((v, 1, ns.rank, res))
}

/// Polynomials for blocks first..=m from a solution vector.
fn split_blocks<T: Scalar>(v: &[T], mat: &LinearSystem<T>, m: usize, first: usize, prec: Precision) -> Vec<Polynomial<T>> {
    let mut coeffs: Vec<Vec<T>> = vec![Vec::new(); m + 1];
    for (x, &(k, p)) in v.iter().zip(&mat.columns) {
        let block = &mut coeffs[k];
        if block.len() <= p {
            block.resize(p + 1, T::zero());
        }
        block[p] = x.clone();
    }
    coeffs.into_iter().skip(first).map(|c| Polynomial::new(c, prec)).collect()
}

fn normalize<T: Scalar>(a: &mut [Polynomial<T>], n: &MultiIndex, norm: Normalization) -> Result<(), SolveError> {
    let pivot = match norm {
        Normalization::MonicLast => {
            let j = (1..=n.m()).rev().find(|&j| n.get(j) > 0).expect("nonzero multi-index");
            let lead = a[j].coeff(n.get(j) - 1);
            if lead.is_zero() {
                return Err(SolveError::DegreeMismatch { j, expected: n.get(j) as i64 - 1, found: a[j].degree() });
            }
            lead
        }
        Normalization::UnitVector => {
            let mut best = T::zero();
            for c in a.iter().flat_map(|p| p.coeffs().iter()) {
                if c.abs_val() > best.abs_val() {
                    best = c.clone();
                }
            }
            if best.is_zero() {
                return Err(SolveError::Degenerate { dimension: 0, rank: 0, columns: 0 });
            }
            best
        }
    };
    let inv = T::one() / pivot;
    for p in a.iter_mut() {
        *p = p.scale(&inv);
    }
    Ok(())
}

fn check_degrees<T: Scalar>(a: &[Polynomial<T>], n: &MultiIndex) -> Result<(), SolveError> {
    for (j, p) in a.iter().enumerate() {
        let expected = n.get(j) as i64 - 1;
        if p.degree() != expected {
            return Err(SolveError::DegreeMismatch { j, expected, found: p.degree() });
        }
    }
    Ok(())
}

/// a_{n,0}(z) = Σ_k ∫ B(w, a_k)(z, x) ds_{1,k}(x)/w(x), with B the Bezoutian kernel
/// (w(z)a_k(x) − w(x)a_k(z))/(z − x).
pub fn reconstruct_a0<T: Scalar>(
    a: &[Polynomial<T>],
    system: &NikishinSystem<T>,
    w: &InterpolationScheme,
    n: &MultiIndex,
) -> Result<Polynomial<T>, SolveError> {
    Ok(reconstruct_a0_with_tail(a, system, w, n)?.0)
}

fn reconstruct_a0_with_tail<T: Scalar>(
    a: &[Polynomial<T>],
    system: &NikishinSystem<T>,
    w: &InterpolationScheme,
    n: &MultiIndex,
) -> Result<(Polynomial<T>, f64), SolveError> {
    check_inputs(system, n, w)?;
    let prec = system.precision();
    let wp: Polynomial<T> = w.polynomial(prec);
    let weighted = weight::<T>(w, prec);
    let size = a.iter().map(|p| p.degree()).chain([wp.degree()]).max().unwrap_or(0).max(0) as usize;
    let mu = weighted_moments(system, weighted.as_ref(), size.max(1))?;
    let mut coef = vec![T::zero(); size];
    for (k, ak) in a.iter().enumerate() {
        let b = bezoutian(&wp, ak);
        for (r, row) in b.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    coef[r] = coef[r].clone() + v.clone() * mu[k][s].clone();
                }
            }
        }
    }
    // coefficients above n_0 − 1 cancel by orthogonality; only rounding remains in float mode
    let keep = n.n0();
    let mut tail = 0.0;
    if !prec.is_exact() && coef.len() > keep {
        let scale = coef[..keep].iter().map(|c| c.abs_val().to_f64()).fold(0.0, f64::max).max(1.0);
        tail = coef[keep..].iter().map(|c| c.abs_val().to_f64()).fold(0.0, f64::max) / scale;
        coef.truncate(keep);
    }
    Ok((Polynomial::new(coef, prec), tail))
}

/// v and u proportional with exact equality after normalizing both.
pub fn proportional<T: Scalar>(u: &HPSolution<T>, v: &HPSolution<T>) -> bool {
    let x = u.coefficient_vector();
    let y = v.coefficient_vector();
    if x.len() != y.len() {
        return false;
    }
    let Some(i) = x.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    if y[i].is_zero() {
        return false;
    }
    let r = y[i].clone() / x[i].clone();
    x.iter().zip(&y).all(|(a, b)| a.clone() * r.clone() == *b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_system, Interval, Measure, Orientation, Provenance};
    use crate::numerics::scalar::{parse_rational, BigFloat, Rational};

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

    fn poly(c: &[&str]) -> Polynomial<Rational> {
        Polynomial::parse(c, Precision::Exact).unwrap()
    }

    fn midpoint(n: usize, a: i64) -> Measure<Rational> {
        let atoms = (0..n)
            .map(|i| {
                let x = Rational::from_integer(a.into()) + Rational::new((2 * i + 1).into(), (2 * n).into());
                (x, Rational::new(1.into(), n.into()))
            })
            .collect();
        Measure::new(atoms, Interval::from_ints(a, a + 1).unwrap(), Provenance::Generator, Precision::Exact).unwrap()
    }

    #[test]
    fn m1_n2_uniform_moments() {
        let s = build_system(vec![midpoint(4, 0)], Orientation::Forward).unwrap();
        let sol = solve_type1(&s, &MultiIndex::new(vec![2]).unwrap(), &InterpolationScheme::trivial()).unwrap();
        assert_eq!(sol.a[1], poly(&["-1/2", "1"]));
        assert_eq!(sol.a[0], poly(&["-1"]));
        assert_eq!(sol.nullspace_dimension, 1);
    }

    #[test]
    fn m1_n1_is_constant() {
        let s = build_system(vec![midpoint(3, 0)], Orientation::Forward).unwrap();
        let sol = solve_type1(&s, &MultiIndex::new(vec![1]).unwrap(), &InterpolationScheme::trivial()).unwrap();
        assert_eq!(sol.a[1], poly(&["1"]));
        assert!(sol.a[0].is_zero());
    }

    #[test]
    fn m2_n11_by_hand() {
        let s = build_system(
            vec![gen(&[("0", "1/2"), ("1", "1/2")], 0, 1), gen(&[("2", "1/2"), ("3", "1/2")], 2, 3)],
            Orientation::Forward,
        )
        .unwrap();
        let sol = solve_type1(&s, &MultiIndex::new(vec![1, 1]).unwrap(), &InterpolationScheme::trivial()).unwrap();
        // nullspace of [1, −7/12] with a_2 = 1
        assert_eq!(sol.a[2], poly(&["1"]));
        assert_eq!(sol.a[1], poly(&["7/12"]));
        assert!(sol.a[0].is_zero());
    }

    #[test]
    fn paths_agree_with_real_and_complex_nodes() {
        let s = build_system(vec![midpoint(12, 0), midpoint(12, 2)], Orientation::Forward).unwrap();
        for (parts, roots) in [
            (vec![2, 2], vec![]),
            (vec![3, 2], vec!["-1", "-1", "4"]),
            (vec![2, 3], vec!["3/2", "-1+1i", "5"]),
            (vec![0, 3], vec!["-2"]),
            (vec![3, 0], vec![]),
        ] {
            let n = MultiIndex::new(parts).unwrap();
            let w = InterpolationScheme::parse(&roots).unwrap();
            let r = solve_type1(&s, &n, &w).unwrap();
            let f = solve_type1_with(&s, &n, &w, SolveOptions { path: SolverPath::Full, ..Default::default() }).unwrap();
            assert_eq!(r.a, f.a, "n = {n}, {w}");
            assert!(proportional(&r, &f));
        }
    }

    #[test]
    fn unit_vector_normalization_is_proportional() {
        let s = build_system(vec![midpoint(10, 0), midpoint(10, 2)], Orientation::Forward).unwrap();
        let n = MultiIndex::new(vec![2, 3]).unwrap();
        let w = InterpolationScheme::trivial();
        let a = solve_type1(&s, &n, &w).unwrap();
        let b = solve_type1_with(&s, &n, &w, SolveOptions { normalization: Normalization::UnitVector, ..Default::default() })
            .unwrap();
        assert!(proportional(&a, &b));
        let top = b.coefficient_vector().iter().map(|c| c.abs_val()).max().unwrap();
        assert_eq!(top, q("1"));
    }

    #[test]
    fn float_backend_matches_exact() {
        let s = build_system(vec![midpoint(10, 0), midpoint(10, 2)], Orientation::Forward).unwrap();
        let n = MultiIndex::new(vec![3, 3]).unwrap();
        let w = InterpolationScheme::parse(&["-1", "5/2+1i"]).unwrap();
        let exact = solve_type1(&s, &n, &w).unwrap();
        let sf: NikishinSystem<BigFloat> = s.convert(Precision::Float(256)).unwrap();
        let float = solve_type1(&sf, &n, &w).unwrap();
        assert!(float.residual.system < 1e-50);
        assert!(float.residual.a0_tail < 1e-30);
        for (pe, pf) in exact.a.iter().zip(&float.a) {
            assert_eq!(pe.degree(), pf.degree());
            for (ce, cf) in pe.coeffs().iter().zip(pf.coeffs()) {
                let err = (BigFloat::from_rational(ce, Precision::Float(256)) - cf.clone()).abs_val().to_f64();
                assert!(err <= 1e-40 * ce.to_f64().abs().max(1.0), "{err}");
            }
        }
    }

    #[test]
    fn too_few_atoms_is_rejected() {
        let s = build_system(vec![midpoint(4, 0)], Orientation::Forward).unwrap();
        let r = solve_type1(&s, &MultiIndex::new(vec![3]).unwrap(), &InterpolationScheme::trivial());
        assert!(matches!(r, Err(SolveError::AtomBudget { .. })));
    }
}
