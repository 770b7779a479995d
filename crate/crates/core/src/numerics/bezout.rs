use super::polynomial::Polynomial;
use super::scalar::Scalar;

/// Bezoutian matrix `B` with (p(z)q(x) − p(x)q(z))/(z − x) = Σ B[r][s] z^r x^s.
///
/// The matrix is square of size max(deg p, deg q) (empty when both are constants).
pub fn bezoutian<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Vec<Vec<T>> {
    let d = p.degree().max(q.degree()).max(0) as usize;
    let mut b = vec![vec![T::zero(); d]; d];
    for i in 1..=d {
        for j in 0..i {
            let c = p.coeff(i) * q.coeff(j) - p.coeff(j) * q.coeff(i);
            if c.is_zero() {
                continue;
            }
            // (z^i x^j − z^j x^i)/(z − x) = Σ_k z^{j+k} x^{i−1−k}
            for k in 0..(i - j) {
                b[j + k][i - 1 - k] = b[j + k][i - 1 - k].clone() + c.clone();
            }
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{Precision, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    const E: Precision = Precision::Exact;

    fn p(cs: &[&str]) -> Polynomial<Rational> {
        Polynomial::parse(cs, E).unwrap()
    }

    #[test]
    fn constant_against_linear() {
        assert_eq!(bezoutian(&p(&["1"]), &p(&["0", "1"])), vec![vec![Rational::from_integer((-1).into())]]);
        assert_eq!(bezoutian(&p(&["0", "1"]), &p(&["1"])), vec![vec![Rational::from_integer(1.into())]]);
    }

    #[test]
    fn square_against_linear() {
        let b = bezoutian(&p(&["0", "0", "1"]), &p(&["0", "1"]));
        for (r, row) in b.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                let expected = if r == 1 && s == 1 { 1 } else { 0 };
                assert_eq!(*v, Rational::from_integer(expected.into()));
            }
        }
    }

    fn eval2(b: &[Vec<Rational>], z: &Rational, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (r, row) in b.iter().enumerate() {
            for (s, v) in row.iter().enumerate() {
                acc += v * num_traits::pow(z.clone(), r) * num_traits::pow(x.clone(), s);
            }
        }
        acc
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-30i64..30, 1i64..9).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn reconstruction_matches_quotient(
            pc in prop::collection::vec(small(), 1..6),
            qc in prop::collection::vec(small(), 1..6),
            pts in prop::collection::vec((small(), small()), 100),
        ) {
            let pp = Polynomial::new(pc, E);
            let qq = Polynomial::new(qc, E);
            let b = bezoutian(&pp, &qq);
            for (z, x) in pts {
                if z == x {
                    continue;
                }
                let lhs = eval2(&b, &z, &x);
                let rhs = (pp.eval(&z) * qq.eval(&x) - pp.eval(&x) * qq.eval(&z)) / (z.clone() - x.clone());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
