//! Truncated Laurent series at infinity.
//!
//! `coeffs[i]` is the coefficient of z^(top − i). A truncated series is known
//! down to z^(top − len + 1); an exact one is zero below that.

use super::polynomial::Polynomial;
use super::scalar::{Precision, Scalar};
use crate::error::NumericsError;

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<T: Scalar> {
    top: i64,
    coeffs: Vec<T>,
    exact: bool,
    prec: Precision,
}

impl<T: Scalar> Laurent<T> {
    /// Cauchy transform series Σ c_ν z^(−ν−1) from a moment list.
    pub fn from_moments(moments: &[T], prec: Precision) -> Self {
        Laurent { top: -1, coeffs: moments.to_vec(), exact: false, prec }
    }

    pub fn from_polynomial(p: &Polynomial<T>) -> Self {
        let prec = p.precision();
        if p.is_zero() {
            return Laurent { top: 0, coeffs: Vec::new(), exact: true, prec };
        }
        Laurent { top: p.degree(), coeffs: p.coeffs().iter().rev().cloned().collect(), exact: true, prec }
    }

    /// Truncated series with explicit leading exponent.
    pub fn new(top: i64, coeffs: Vec<T>, prec: Precision) -> Self {
        Laurent { top, coeffs, exact: false, prec }
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Lowest exponent with a known coefficient (None for exact series).
    pub fn bottom(&self) -> Option<i64> {
        (!self.exact).then(|| self.top - self.coeffs.len() as i64 + 1)
    }

    /// Coefficient of z^e, or None when e is below the truncation order.
    pub fn coeff(&self, e: i64) -> Option<T> {
        if e > self.top {
            return Some(T::zero());
        }
        let i = (self.top - e) as usize;
        match self.coeffs.get(i) {
            Some(c) => Some(c.clone()),
            None if self.exact => Some(T::zero()),
            None => None,
        }
    }

    fn span(&self, other: &Self) -> (i64, Option<i64>) {
        let top = self.top.max(other.top);
        let bottom = match (self.bottom(), other.bottom()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        (top, bottom)
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let (top, bottom) = self.span(other);
        let low = bottom.unwrap_or_else(|| {
            let a = self.top - self.coeffs.len() as i64 + 1;
            let b = other.top - other.coeffs.len() as i64 + 1;
            a.min(b)
        });
        let coeffs = (low..=top)
            .rev()
            .map(|e| {
                let a = self.coeff(e).expect("within span");
                let b = other.coeff(e).expect("within span");
                if sign {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        Laurent { top, coeffs, exact: bottom.is_none(), prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let top = self.top + other.top;
        let len = match (self.exact, other.exact) {
            (true, true) => (self.coeffs.len() + other.coeffs.len()).saturating_sub(1),
            (true, false) => other.coeffs.len(),
            (false, true) => self.coeffs.len(),
            (false, false) => self.coeffs.len().min(other.coeffs.len()),
        };
        let mut coeffs = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent { top, coeffs, exact: self.exact && other.exact, prec: self.prec }
    }

    pub fn scale(&self, c: &T) -> Self {
        Laurent {
            top: self.top,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            exact: self.exact,
            prec: self.prec,
        }
    }

    /// Drops leading zero coefficients so `top` is the true leading exponent.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Laurent {
            top: self.top - skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
            exact: self.exact,
            prec: self.prec,
        }
    }

    /// Reciprocal series with `len` known coefficients.
    pub fn inverse(&self, len: usize) -> Result<Self, NumericsError> {
        let s = self.normalized();
        let lead = s.coeffs.first().cloned().ok_or_else(|| NumericsError::Singular("zero series".into()))?;
        if !s.exact && s.coeffs.len() < len {
            return Err(NumericsError::Singular(format!(
                "series known to {} terms, {len} requested",
                s.coeffs.len()
            )));
        }
        let at = |i: usize| s.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        let mut out: Vec<T> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = if k == 0 { T::one() } else { T::zero() };
            for i in 1..=k {
                acc = acc - at(i) * out[k - i].clone();
            }
            out.push(acc / lead.clone());
        }
        Ok(Laurent { top: -s.top, coeffs: out, exact: false, prec: self.prec })
    }

    /// Truncates to coefficients of exponents >= `bottom`.
    pub fn truncate_below(&self, bottom: i64) -> Self {
        let keep = (self.top - bottom + 1).max(0) as usize;
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(keep);
        while coeffs.len() < keep && self.exact {
            coeffs.push(T::zero());
        }
        Laurent { top: self.top, coeffs, exact: false, prec: self.prec }
    }

    /// Polynomial part (non-negative exponents).
    pub fn polynomial_part(&self) -> Polynomial<T> {
        if self.top < 0 {
            return Polynomial::zero(self.prec);
        }
        let coeffs = (0..=self.top).map(|e| self.coeff(e).unwrap_or_else(T::zero)).collect();
        Polynomial::new(coeffs, self.prec)
    }
}
