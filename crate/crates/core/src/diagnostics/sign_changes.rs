use serde::{Deserialize, Serialize};

use crate::error::{DiagnosticsError, SolveError};
use crate::hermite_pade::{linear_form_real, HPSolution};
use crate::measures::{Interval, NikishinSystem};
use crate::numerics::scalar::{Precision, Rational, Scalar};

/// Sign changes found on a grid, each refined to a bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct SignChanges<T: Scalar> {
    pub count: usize,
    pub brackets: Vec<(T, T)>,
    /// Brackets that share a grid cell boundary with the next one.
    pub adjacent: usize,
}

impl<T: Scalar> SignChanges<T> {
    pub fn require_resolved(self) -> Result<Self, DiagnosticsError> {
        if self.adjacent > 0 {
            return Err(DiagnosticsError::CoarseGrid(self.adjacent));
        }
        Ok(self)
    }
}

const BISECTIONS: usize = 40;

/// Counts sign changes of `f` on `grid` equally spaced interior points of `interval`.
/// Points where `f` fails (poles) or vanishes are skipped.
pub fn count_sign_changes<T, F, E>(
    f: F,
    interval: &Interval,
    grid: usize,
    prec: Precision,
) -> Result<SignChanges<T>, DiagnosticsError>
where
    T: Scalar,
    F: Fn(&T) -> Result<T, E>,
{
    let (Some(a), Some(b)) = (interval.a().finite(), interval.b().finite()) else {
        return Err(DiagnosticsError::InvalidSweep(format!("unbounded interval {interval}")));
    };
    if grid < 2 {
        return Err(DiagnosticsError::InvalidSweep("grid needs at least 2 points".into()));
    }
    let step = (b - a) / Rational::from_integer((grid + 1).into());
    let points: Vec<T> =
        (1..=grid).map(|i| T::from_rational(&(a + &step * Rational::from_integer(i.into())), prec)).collect();
    let mut last: Option<(usize, bool)> = None;
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let Ok(v) = f(x) else { continue };
        if v.is_zero() {
            continue;
        }
        let pos = v > T::zero();
        if let Some((li, lpos)) = last {
            if lpos != pos {
                cells.push((li, i));
            }
        }
        last = Some((i, pos));
    }
    let adjacent = cells.windows(2).filter(|w| w[0].1 == w[1].0).count();
    let half = T::from_ratio(1, 2, prec);
    let brackets = cells
        .iter()
        .map(|&(i, j)| {
            let (mut lo, mut hi) = (points[i].clone(), points[j].clone());
            let lo_pos = f(&lo).map(|v| v > T::zero()).unwrap_or(false);
            for _ in 0..BISECTIONS {
                let mid = (lo.clone() + hi.clone()) * half.clone();
                match f(&mid) {
                    Ok(v) if v.is_zero() => return (mid.clone(), mid),
                    Ok(v) if (v > T::zero()) == lo_pos => lo = mid,
                    Ok(_) => hi = mid,
                    Err(_) => break,
                }
            }
            (lo, hi)
        })
        .collect();
    Ok(SignChanges { count: cells.len(), brackets, adjacent })
}

/// Step j of the reduction chain: A_{n,j} on Δ_j against its lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub j: usize,
    /// |n| − n̄_1 − ... − n̄_{j−1} − 1.
    pub bound: i64,
    pub observed: usize,
}

impl ChainStep {
    pub fn holds(&self) -> bool {
        self.observed as i64 >= self.bound
    }
}

/// Sign changes of A_{n,j} in the interior of Δ_j for j = 1..m.
pub fn reduction_chain<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    grid: usize,
) -> Result<Vec<ChainStep>, DiagnosticsError> {
    let n = &sol.n;
    let mut steps = Vec::with_capacity(n.m());
    let mut used = 0i64;
    for j in 1..=n.m() {
        let bound = n.total() as i64 - used - 1;
        let interval = system.sigma(j).support();
        let sc = count_sign_changes(
            |x: &T| linear_form_real(sol, system, j, x),
            interval,
            grid,
            system.precision(),
        )?;
        steps.push(ChainStep { j, bound, observed: sc.count });
        used += n.nbar(j) as i64;
    }
    Ok(steps)
}

/// Sign changes of A_{n,j} in the open Δ_j.
pub fn form_sign_changes<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    j: usize,
    grid: usize,
) -> Result<SignChanges<T>, DiagnosticsError> {
    count_sign_changes(
        |x: &T| -> Result<T, SolveError> { linear_form_real(sol, system, j, x) },
        system.sigma(j).support(),
        grid,
        system.precision(),
    )
}
