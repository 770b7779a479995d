use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::multi_index::MultiIndex;
use crate::error::SolveError;
use crate::measures::Interval;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{parse_complex_rational, Precision, Rational, Scalar};

/// Zeros of w_n with multiplicities. Complex zeros are stored once with im > 0;
/// the conjugate is implied so w_n has real coefficients.
///
/// Serialized as a flat list of literals, one per zero counted with multiplicity
/// (conjugates are not listed).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct InterpolationScheme {
    real: Vec<(Rational, usize)>,
    complex: Vec<(Rational, Rational, usize)>,
}

impl InterpolationScheme {
    /// w_n ≡ 1 (classical type I).
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(real: Vec<Rational>, complex: Vec<(Rational, Rational)>) -> Self {
        let mut s = Self::default();
        for r in real {
            s.push_real(r);
        }
        for (re, im) in complex {
            if im.is_zero() {
                s.push_real(re);
            } else {
                s.push_complex(re, im.abs());
            }
        }
        s.real.sort();
        s.complex.sort();
        s
    }

    pub fn parse(roots: &[&str]) -> Result<Self, SolveError> {
        let mut real = Vec::new();
        let mut complex = Vec::new();
        for r in roots {
            let (re, im) = parse_complex_rational(r).map_err(|e| SolveError::InvalidScheme(e.to_string()))?;
            if im.is_zero() {
                real.push(re);
            } else {
                complex.push((re, im));
            }
        }
        Ok(Self::new(real, complex))
    }

    fn push_real(&mut self, r: Rational) {
        match self.real.iter_mut().find(|(x, _)| *x == r) {
            Some(slot) => slot.1 += 1,
            None => self.real.push((r, 1)),
        }
    }

    fn push_complex(&mut self, re: Rational, im: Rational) {
        match self.complex.iter_mut().find(|(a, b, _)| *a == re && *b == im) {
            Some(slot) => slot.2 += 1,
            None => self.complex.push((re, im, 1)),
        }
    }

    pub fn real_roots(&self) -> &[(Rational, usize)] {
        &self.real
    }

    /// Upper half-plane representatives (re, im, multiplicity).
    pub fn complex_roots(&self) -> &[(Rational, Rational, usize)] {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.real.iter().map(|r| r.1).sum::<usize>() + 2 * self.complex.iter().map(|c| c.2).sum::<usize>()
    }

    pub fn is_trivial(&self) -> bool {
        self.real.is_empty() && self.complex.is_empty()
    }

    pub fn has_complex(&self) -> bool {
        !self.complex.is_empty()
    }

    /// Expanded w_n with real coefficients.
    pub fn polynomial<T: Scalar>(&self, prec: Precision) -> Polynomial<T> {
        let mut w = Polynomial::one(prec);
        for (r, mult) in &self.real {
            let f = Polynomial::new(vec![T::from_rational(&-r.clone(), prec), T::one()], prec);
            w = w.mul(&f.pow(*mult));
        }
        for (a, b, mult) in &self.complex {
            // (x − a)² + b²
            let c0 = a.clone() * a.clone() + b.clone() * b.clone();
            let c1 = -(a.clone() + a.clone());
            let f = Polynomial::new(vec![T::from_rational(&c0, prec), T::from_rational(&c1, prec), T::one()], prec);
            w = w.mul(&f.pow(*mult));
        }
        w
    }

    /// Asymptotic conditions left at infinity: |n| + max − 2 − deg w.
    pub fn conditions_at_infinity(&self, n: &MultiIndex) -> usize {
        n.condition_count() - self.degree()
    }

    /// Degree cap and no zero on Δ_1.
    pub fn validate(&self, n: &MultiIndex, delta1: &Interval) -> Result<(), SolveError> {
        if self.degree() > n.condition_count() {
            return Err(SolveError::InvalidScheme(format!(
                "deg w = {} exceeds |n| + max(n_j) − 2 = {} for n = {n}",
                self.degree(),
                n.condition_count()
            )));
        }
        if let Some((r, _)) = self.real.iter().find(|(r, _)| delta1.contains_rational(r)) {
            return Err(SolveError::InvalidScheme(format!("zero {r} of w lies on Δ_1 = {delta1}")));
        }
        Ok(())
    }

    /// Literals, one per zero counted with multiplicity.
    pub fn root_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (r, mult) in &self.real {
            out.extend(std::iter::repeat(r.to_string()).take(*mult));
        }
        for (a, b, mult) in &self.complex {
            let lit = if a.is_zero() { format!("{b}i") } else { format!("{a}+{b}i") };
            out.extend(std::iter::repeat(lit).take(*mult));
        }
        out
    }
}

impl TryFrom<Vec<String>> for InterpolationScheme {
    type Error = SolveError;

    fn try_from(v: Vec<String>) -> Result<Self, SolveError> {
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        Self::parse(&refs)
    }
}

impl From<InterpolationScheme> for Vec<String> {
    fn from(s: InterpolationScheme) -> Self {
        s.root_strings()
    }
}

impl fmt::Display for InterpolationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "w ≡ 1");
        }
        write!(f, "w zeros {{{}}}", self.root_strings().join(", "))
    }
}

/// Sign of w at every atom of a real point set; true if it changes.
pub(crate) fn weight_changes_sign<T: Scalar>(w: &Polynomial<T>, xs: &[T]) -> bool {
    let mut sign = None;
    for x in xs {
        let v = w.eval(x);
        let s = v > T::zero();
        match sign {
            None => sign = Some(s),
            Some(prev) if prev != s => return true,
            _ => {}
        }
    }
    false
}
