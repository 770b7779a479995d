//! Linear forms A_{n,j} and the remainder A_{n,0}/w_n.

use super::solve::HPSolution;
use crate::error::SolveError;
use crate::measures::NikishinSystem;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{Complex, Scalar};
use crate::numerics::series::Laurent;

/// A_{n,j}(z) = a_{n,j}(z) + Σ_{k>j} a_{n,k}(z) ŝ_{j+1,k}(z).
pub fn linear_form<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    j: usize,
    z: &Complex<T>,
) -> Result<Complex<T>, SolveError> {
    let m = sol.m();
    if j > m {
        return Err(SolveError::InvalidIndex(format!("form index {j} > m = {m}")));
    }
    let mut acc = sol.a[j].eval_complex(z);
    for k in j + 1..=m {
        if sol.a[k].is_zero() {
            continue;
        }
        let s = system.require(j + 1, k)?.cauchy_transform(z)?;
        acc = acc + sol.a[k].eval_complex(z) * s;
    }
    Ok(acc)
}

/// A_{n,j}(x) at a real point.
pub fn linear_form_real<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    j: usize,
    x: &T,
) -> Result<T, SolveError> {
    let mut acc = sol.a[j].eval(x);
    for k in j + 1..=sol.m() {
        if sol.a[k].is_zero() {
            continue;
        }
        acc = acc + sol.a[k].eval(x) * system.require(j + 1, k)?.cauchy_real(x)?;
    }
    Ok(acc)
}

/// Coefficients of z^{−1}, ..., z^{−count} in A_{n,0}/w_n at infinity.
pub fn remainder_series<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    count: usize,
) -> Result<Vec<T>, SolveError> {
    let prec = system.precision();
    let w: Polynomial<T> = sol.scheme.polynomial(prec);
    let dw = w.degree().max(0) as usize;
    let span = count + dw + sol.n.max() + 2;
    let mut a0 = Laurent::from_polynomial(&sol.a[0]);
    for k in 1..=sol.m() {
        if sol.a[k].is_zero() {
            continue;
        }
        let s = Laurent::from_moments(&system.moments(1, k, span)?, prec);
        a0 = a0.add(&Laurent::from_polynomial(&sol.a[k]).mul(&s));
    }
    let rem = a0.mul(&Laurent::from_polynomial(&w).inverse(span)?);
    (1..=count as i64)
        .map(|e| {
            rem.coeff(-e)
                .ok_or_else(|| SolveError::InvalidIndex(format!("series known only to z^{:?}", rem.bottom())))
        })
        .collect()
}

/// ∫ A_{n,1}(x) dσ_1(x) / (w_n(x)(z − x)) evaluated as an atom sum.
pub fn remainder_integral<T: Scalar>(
    sol: &HPSolution<T>,
    system: &NikishinSystem<T>,
    z: &Complex<T>,
) -> Result<Complex<T>, SolveError> {
    let prec = system.precision();
    let w: Polynomial<T> = sol.scheme.polynomial(prec);
    let sigma1 = system.sigma(1);
    let tol = T::pole_tolerance(prec);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (i, (x, wt)) in sigma1.atoms().enumerate() {
        let d = z.clone() - Complex::new(x.clone(), T::zero());
        let n2 = d.re.clone() * d.re.clone() + d.im.clone() * d.im.clone();
        if n2.is_zero() || (!tol.is_zero() && n2 <= tol.clone() * tol.clone()) {
            return Err(crate::error::MeasureError::PoleProximity(i).into());
        }
        let f = wt.clone() * linear_form_real(sol, system, 1, x)? / w.eval(x);
        acc = acc + Complex::new(f, T::zero()) / d;
    }
    Ok(acc)
}
