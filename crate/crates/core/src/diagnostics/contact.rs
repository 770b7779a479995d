use serde::{Deserialize, Serialize};

use crate::error::DiagnosticsError;
use crate::hermite_pade::HPSolution;
use crate::measures::{Measure, NikishinSystem};
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::Scalar;
use crate::numerics::series::Laurent;

use super::sign_changes::form_sign_changes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "order")]
pub enum ContactOrder {
    /// (qŝ − p)/w = O(z^{−T}) and not O(z^{−T−1}).
    Exact(i64),
    /// Every coefficient inside the moment budget vanished.
    LowerBound(i64),
}

impl ContactOrder {
    pub fn value(self) -> i64 {
        match self {
            ContactOrder::Exact(t) | ContactOrder::LowerBound(t) => t,
        }
    }
}

/// Largest T with (q ŝ − p)/w = O(z^{−T}) at infinity, using `budget` moments of s.
pub fn contact_order<T: Scalar>(
    q: &Polynomial<T>,
    p: &Polynomial<T>,
    s: &Measure<T>,
    w: &Polynomial<T>,
    budget: usize,
) -> Result<ContactOrder, DiagnosticsError> {
    let prec = s.precision();
    let c = s.moments(budget, None)?;
    let num = Laurent::from_polynomial(q).mul(&Laurent::from_moments(&c, prec)).sub(&Laurent::from_polynomial(p));
    let len = budget + w.degree().max(0) as usize + q.degree().max(0) as usize + 1;
    let series = num.mul(&Laurent::from_polynomial(w).inverse(len)?);
    let mut e = series.top();
    loop {
        match series.coeff(e) {
            Some(v) if !v.is_zero() => return Ok(ContactOrder::Exact(-e)),
            Some(_) => e -= 1,
            None => return Ok(ContactOrder::LowerBound(-e)),
        }
    }
}

/// Last step of the proof chain for a solved index: A_{n,m−1} = a_{n,m−1} + a_{n,m} σ̂_m
/// divided by the polynomial with its sign changes on Δ_{m−1} as zeros.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainContact {
    /// Sign changes of A_{n,m−1} on Δ_{m−1}.
    pub interpolation_points: usize,
    /// Exponent of the leading term of A_{n,m−1} at infinity.
    pub leading_exponent: i64,
    /// interpolation_points − leading_exponent.
    pub order: i64,
    /// |n| − n̄_1 − ... − n̄_{m−1}.
    pub bound: i64,
}

impl ChainContact {
    pub fn holds(&self) -> bool {
        self.order >= self.bound
    }
}

pub fn chain_contact<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    grid: usize,
) -> Result<ChainContact, DiagnosticsError> {
    let m = sol.m();
    if m < 2 {
        return Err(DiagnosticsError::InvalidSweep("chain contact needs m ≥ 2".into()));
    }
    let prec = system.precision();
    let budget = sol.n.total() + sol.n.max() + 4;
    let c = system.moments(m, m, budget)?;
    let series = Laurent::from_polynomial(&sol.a[m])
        .mul(&Laurent::from_moments(&c, prec))
        .add(&Laurent::from_polynomial(&sol.a[m - 1]));
    let mut e = series.top();
    let leading_exponent = loop {
        match series.coeff(e) {
            Some(v) if !v.is_zero() => break e,
            Some(_) => e -= 1,
            None => break e,
        }
    };
    let points = form_sign_changes(sol, system, m - 1, grid)?.count;
    let bound = sol.n.total() as i64 - (1..m).map(|i| sol.n.nbar(i) as i64).sum::<i64>();
    Ok(ChainContact {
        interpolation_points: points,
        leading_exponent,
        order: points as i64 - leading_exponent,
        bound,
    })
}
