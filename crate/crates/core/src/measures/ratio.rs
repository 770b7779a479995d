//! Series check of ŝ_{1,k}/ŝ_{1,1} = m_{1,k}/m_{1,1} − ⟨τ_{1,1}, ⟨s_{2,k}, σ_1⟩⟩^.
//!
//! τ_{1,1} is never built: its moments come from `inverse_moments`, and the
//! integral against ⟨s_{2,k}, σ_1⟩^ is split into a polynomial part (moments of
//! τ) and τ̂ evaluated off Δ_1 through 1/σ̂_1 − ℓ_1.

use super::measure::product_measure;
use super::moments::{inverse_moments, MomentTable};
use super::system::NikishinSystem;
use crate::error::MeasureError;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::Scalar;
use crate::numerics::series::Laurent;

/// Coefficients of z^0, z^{−1}, ..., z^{−order} of
/// ŝ_{1,k}/ŝ_{1,1} − m_{1,k}/m_{1,1} + ⟨τ_{1,1}, ⟨s_{2,k}, σ_1⟩⟩^, with signed masses m.
pub fn ratio_identity_residual<T: Scalar>(
    system: &NikishinSystem<T>,
    k: usize,
    order: usize,
) -> Result<Vec<T>, MeasureError> {
    if k < 2 || k > system.m() {
        return Err(MeasureError::Index(k));
    }
    let prec = system.precision();
    let sigma1 = system.sigma(1);
    let c = system.moments(1, 1, order + 4)?;
    let c_k = system.moments(1, k, order + 2)?;
    let inv = inverse_moments(&MomentTable::new(c.clone(), "s11", prec), order + 1)?;

    // ⟨s_{2,k}, σ_1⟩ on Δ_2
    let inner = product_measure(system.require(2, k)?, sigma1)?;
    let tau_hat = |y: &T| -> Result<T, MeasureError> {
        let s = sigma1.cauchy_real(y)?;
        Ok(T::one() / s - inv.d_m2.clone() * y.clone() - inv.d_m1.clone())
    };
    let mut e = vec![T::zero(); order + 1];
    for (y, u) in inner.atoms() {
        let th = tau_hat(y)?;
        let mut ypow = vec![T::one()];
        for _ in 0..=order {
            let last = ypow.last().unwrap().clone();
            ypow.push(last * y.clone());
        }
        for (nu, slot) in e.iter_mut().enumerate() {
            // ∫ x^ν dτ/(x − y) = Σ_{r<ν} y^{ν−1−r} d_r − y^ν τ̂(y)
            let mut acc = T::zero();
            for r in 0..nu {
                acc = acc + ypow[nu - 1 - r].clone() * inv.d[r].clone();
            }
            acc = acc - ypow[nu].clone() * th.clone();
            *slot = slot.clone() + u.clone() * acc;
        }
    }

    let mut recip = vec![inv.d_m2.clone(), inv.d_m1.clone()];
    recip.extend(inv.d.iter().cloned());
    let recip = Laurent::new(1, recip, prec);
    let ratio = Laurent::from_moments(&c_k, prec).mul(&recip);
    let constant = c_k[0].clone() / c[0].clone();
    let tau_series = Laurent::new(-1, e, prec);
    let residual = ratio.sub(&Laurent::from_polynomial(&Polynomial::constant(constant, prec))).add(&tau_series);
    (0..=order as i64)
        .map(|i| residual.coeff(-i).ok_or(MeasureError::ShortTable { need: order + 1, have: i as usize }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::interval::Interval;
    use crate::measures::measure::{Measure, Provenance};
    use crate::measures::system::{build_system, Orientation};
    use crate::numerics::scalar::{parse_rational, Precision, Rational};
    use num_traits::Zero;

    fn gen(list: &[(&str, &str)], a: i64, b: i64) -> Measure<Rational> {
        Measure::new(
            list.iter().map(|(x, w)| (parse_rational(x).unwrap(), parse_rational(w).unwrap())).collect(),
            Interval::from_ints(a, b).unwrap(),
            Provenance::Generator,
            Precision::Exact,
        )
        .unwrap()
    }

    #[test]
    fn residual_vanishes_for_atomic_system() {
        let s = build_system(
            vec![
                gen(&[("0", "1/3"), ("1/4", "1/5"), ("2/3", "1/2"), ("1", "1/7")], 0, 1),
                gen(&[("2", "1/2"), ("5/2", "1/4"), ("3", "1/3")], 2, 3),
            ],
            Orientation::Forward,
        )
        .unwrap();
        let r = ratio_identity_residual(&s, 2, 10).unwrap();
        assert_eq!(r.len(), 11);
        assert!(r.iter().all(Zero::is_zero));
    }

    #[test]
    fn residual_vanishes_for_three_generators() {
        let s = build_system(
            vec![
                gen(&[("0", "1"), ("1/2", "2"), ("1", "1")], 0, 1),
                gen(&[("2", "1"), ("3", "1")], 2, 3),
                gen(&[("4", "1/2"), ("9/2", "1"), ("5", "1/2")], 4, 5),
            ],
            Orientation::Forward,
        )
        .unwrap();
        for k in 2..=3 {
            assert!(ratio_identity_residual(&s, k, 8).unwrap().iter().all(Zero::is_zero));
        }
        assert!(ratio_identity_residual(&s, 1, 8).is_err());
    }
}
