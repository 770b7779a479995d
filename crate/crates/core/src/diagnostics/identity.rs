use crate::error::DiagnosticsError;
use crate::measures::NikishinSystem;
use crate::numerics::scalar::{complex_abs_f64, Complex, Scalar};

/// Max over `points` of
/// |(−1)^{m−j} ŝ_{m,j+1} + Σ_{k=j+1}^{m−1} (−1)^{m−k} ŝ_{m,k+1} ŝ_{j+1,k} + ŝ_{j+1,m}|.
///
/// Needs forward and reversed products. For atomic generators every term is a
/// finite partial-fraction sum and the identity holds exactly.
pub fn identity_check<T: Scalar>(
    system: &NikishinSystem<T>,
    j: usize,
    points: &[Complex<T>],
) -> Result<f64, DiagnosticsError> {
    let m = system.m();
    if j >= m {
        return Err(DiagnosticsError::InvalidSweep(format!("identity index j = {j} must be below m = {m}")));
    }
    let sign = |e: usize| if e % 2 == 0 { T::one() } else { -T::one() };
    let mut worst: f64 = 0.0;
    for z in points {
        let hat = |a: usize, b: usize| -> Result<Complex<T>, DiagnosticsError> {
            Ok(system.require(a, b)?.cauchy_transform(z)?)
        };
        let mut acc = hat(m, j + 1)? * sign(m - j) + hat(j + 1, m)?;
        for k in j + 1..m {
            acc = acc + hat(m, k + 1)? * hat(j + 1, k)? * sign(m - k);
        }
        worst = worst.max(complex_abs_f64(&acc));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_system, discretize_density, DensityKind, Interval, Orientation};
    use crate::numerics::scalar::{Precision, Rational};

    fn pts() -> Vec<Complex<Rational>> {
        [(-2, 0), (4, 0), (5, 4), (-1, -1), (1_000_000, 0)]
            .iter()
            .map(|&(a, b)| Complex::new(Rational::from_integer(a.into()), Rational::from_integer(b.into())))
            .collect()
    }

    fn system(m: usize, n: usize) -> NikishinSystem<Rational> {
        let gens = (0..m)
            .map(|i| {
                let iv = Interval::from_ints(2 * i as i64, 2 * i as i64 + 1).unwrap();
                discretize_density(&DensityKind::Uniform, &iv, n).unwrap()
            })
            .collect();
        build_system(gens, Orientation::Both).unwrap()
    }

    #[test]
    fn m1_is_trivial() {
        assert_eq!(identity_check(&system(1, 4), 0, &pts()).unwrap(), 0.0);
    }

    #[test]
    fn exact_for_atomic_systems() {
        for n in [8, 16] {
            let s = system(2, n);
            assert_eq!(identity_check(&s, 0, &pts()).unwrap(), 0.0);
            assert_eq!(identity_check(&s, 1, &pts()).unwrap(), 0.0);
        }
        let s3 = system(3, 4);
        for j in 0..3 {
            assert_eq!(identity_check(&s3, j, &pts()).unwrap(), 0.0);
        }
    }

    #[test]
    fn float_residual_is_tiny() {
        let s = system(2, 8).convert::<crate::numerics::scalar::BigFloat>(Precision::Float(128)).unwrap();
        let p: Vec<_> = pts()
            .iter()
            .map(|z| Complex::new(Scalar::from_rational(&z.re, Precision::Float(128)), Scalar::from_rational(&z.im, Precision::Float(128))))
            .collect();
        assert!(identity_check(&s, 0, &p).unwrap() < 1e-30);
    }
}
