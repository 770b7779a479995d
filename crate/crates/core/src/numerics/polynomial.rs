//! Dense univariate polynomials with ascending coefficients.

use std::fmt;

use super::scalar::{Complex, Precision, Scalar};
use crate::error::NumericsError;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<T>,
    prec: Precision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    /// Multiply the first operand by the constant second operand.
    Scale,
}

/// Checked arithmetic: rejects operands from different precision contexts.
pub fn poly_arith<T: Scalar>(
    p: &Polynomial<T>,
    q: &Polynomial<T>,
    op: PolyOp,
) -> Result<Polynomial<T>, NumericsError> {
    if p.prec != q.prec {
        return Err(NumericsError::MixedPrecision(p.prec.to_string(), q.prec.to_string()));
    }
    Ok(match op {
        PolyOp::Add => p.add(q),
        PolyOp::Sub => p.sub(q),
        PolyOp::Mul => p.mul(q),
        PolyOp::Scale => {
            if q.degree() > 0 {
                return Err(NumericsError::Parse("scale operand must be a constant".into()));
            }
            p.scale(&q.coeff(0))
        }
    })
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(coeffs: Vec<T>, prec: Precision) -> Self {
        let mut p = Polynomial { coeffs, prec };
        p.trim();
        p
    }

    pub fn zero(prec: Precision) -> Self {
        Polynomial { coeffs: Vec::new(), prec }
    }

    pub fn one(prec: Precision) -> Self {
        Self::constant(T::one(), prec)
    }

    pub fn constant(c: T, prec: Precision) -> Self {
        Self::new(vec![c], prec)
    }

    /// The monomial x.
    pub fn x(prec: Precision) -> Self {
        Self::new(vec![T::zero(), T::one()], prec)
    }

    pub fn monomial(c: T, k: usize, prec: Precision) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, prec)
    }

    /// Monic polynomial with the given real roots (repeated entries give multiplicity).
    pub fn from_roots(roots: &[T], prec: Precision) -> Self {
        roots.iter().fold(Self::one(prec), |acc, r| {
            acc.mul(&Self::new(vec![-r.clone(), T::one()], prec))
        })
    }

    /// Parses `p/q` or decimal literals, ascending degree.
    pub fn parse(coeffs: &[&str], prec: Precision) -> Result<Self, NumericsError> {
        let cs = coeffs.iter().map(|s| T::parse_scalar(s, prec)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(cs, prec))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of x^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::new(coeffs, self.prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.prec);
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(coeffs, self.prec)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.prec)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|a| -a.clone()).collect(), self.prec)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.prec), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64, self.prec))
            .collect();
        Self::new(coeffs, self.prec)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn eval_complex(&self, z: &Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * z.clone() + Complex::new(c.clone(), T::zero()))
    }

    /// Taylor coefficients of p about `z0`: p(z) = Σ t_k (z − z0)^k, first `count` terms.
    pub fn taylor_at(&self, z0: &Complex<T>, count: usize) -> Vec<Complex<T>> {
        let mut work: Vec<Complex<T>> = self.coeffs.iter().map(|c| Complex::new(c.clone(), T::zero())).collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            if work.is_empty() {
                out.push(Complex::new(T::zero(), T::zero()));
                continue;
            }
            // synthetic division by (z - z0): remainder is the next Taylor coefficient
            let n = work.len();
            let mut quotient = vec![Complex::new(T::zero(), T::zero()); n - 1];
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in (0..n).rev() {
                acc = acc * z0.clone() + work[k].clone();
                if k > 0 {
                    quotient[k - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = quotient;
        }
        out
    }

    /// Euclidean division; fails on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), NumericsError> {
        let lead = d.leading().ok_or_else(|| NumericsError::Singular("division by zero polynomial".into()))?;
        if self.degree() < d.degree() {
            return Ok((Self::zero(self.prec), self.clone()));
        }
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![T::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].clone() - c.clone() * di.clone();
                }
            }
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot, self.prec), Self::new(rem, self.prec)))
    }

    /// Monic greatest common divisor (exact mode; float mode is unreliable for near-common roots).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Re-expresses the coefficients in another backend.
    pub fn convert<U: Scalar>(&self, prec: Precision) -> Polynomial<U> {
        Polynomial::new(
            self.coeffs.iter().map(|c| U::from_rational(&c.to_rational_exact(), prec)).collect(),
            prec,
        )
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_exact_string()).collect()
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{parse_rational, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    const E: Precision = Precision::Exact;

    fn p(cs: &[&str]) -> Polynomial<Rational> {
        Polynomial::parse(cs, E).unwrap()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = poly_arith(&p(&["1", "1"]), &p(&["1", "-1"]), PolyOp::Mul).unwrap();
        assert_eq!(r, p(&["1", "0", "-1"]));
        assert_eq!(r.degree(), 2);
    }

    #[test]
    fn additive_identity_and_square() {
        let a = p(&["-1/2", "1"]);
        assert_eq!(poly_arith(&a, &Polynomial::zero(E), PolyOp::Add).unwrap(), a);
        assert_eq!(a.mul(&a), p(&["1/4", "-1", "1"]));
    }

    #[test]
    fn zero_polynomial_has_degree_minus_one() {
        let z = p(&["0", "0"]);
        assert_eq!(z.degree(), -1);
        assert!(z.eval(&q("7")).is_zero());
        assert_eq!(p(&["1", "2"]).sub(&p(&["1", "2"])).degree(), -1);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p(&["-1/2", "1"]).eval(&q("2")), q("3/2"));
        let sq = p(&["0", "0", "1"]);
        let v = sq.eval_complex(&Complex::new(q("0"), q("1")));
        assert_eq!(v, Complex::new(q("-1"), q("0")));
    }

    #[test]
    fn mixed_precision_is_rejected() {
        let a: Polynomial<Rational> = Polynomial::one(Precision::Float(64));
        let b: Polynomial<Rational> = Polynomial::one(Precision::Float(128));
        assert!(matches!(poly_arith(&a, &b, PolyOp::Add), Err(NumericsError::MixedPrecision(_, _))));
        assert!(poly_arith(&a, &p(&["0", "1"]), PolyOp::Scale).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_roots(&[q("1"), q("2"), q("1/3")], E);
        let b = Polynomial::from_roots(&[q("2"), q("5")], E);
        let (quo, rem) = a.div_rem(&b).unwrap();
        assert_eq!(quo.mul(&b).add(&rem), a);
        assert_eq!(a.gcd(&b), p(&["-2", "1"]));
    }

    #[test]
    fn taylor_expansion_matches_derivatives() {
        let a = p(&["3", "-1", "2", "5"]);
        let z0 = Complex::new(q("1/2"), q("1"));
        let t = a.taylor_at(&z0, 5);
        assert_eq!(t[0], a.eval_complex(&z0));
        assert_eq!(t[1], a.derivative().eval_complex(&z0));
        let half = Complex::new(q("1/2"), q("0"));
        assert_eq!(t[2], a.derivative().derivative().eval_complex(&z0) * half);
        assert!(t[4].re.is_zero() && t[4].im.is_zero());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn small_poly() -> impl Strategy<Value = Polynomial<Rational>> {
        prop::collection::vec(small_rational(), 0..6).prop_map(|cs| Polynomial::new(cs, E))
    }

    proptest! {
        #[test]
        fn ring_laws_hold_exactly(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn scalar_laws_hold_exactly(x in small_rational(), y in small_rational(), z in small_rational()) {
            prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
            prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y.clone() + x.clone() * z.clone());
            prop_assert_eq!(x.clone() + y.clone(), y + x);
        }

        #[test]
        fn degree_of_product_is_additive(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).degree(), a.degree() + b.degree());
        }
    }
}
