//! Zero counts outside a circle by the argument principle.
//!
//! (1/2πi)∮ p'/p dz over z = c + r e^{iθ} is the trapezoid mean of
//! (z − c) p'(z)/p(z); the sum is evaluated in extended precision and rounded
//! to an integer once two successive refinements agree within 1/4.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::DiagnosticsError;
use crate::measures::Interval;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{BigFloat, Complex, Precision, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, re: f64, im: f64) -> bool {
        (re - self.center).hypot(im) < self.radius
    }
}

/// Circle about the midpoint of Δ_m with radius 0.75·dist(Δ_m, Δ_{m−1}) + |Δ_m|/2.
/// Without a neighbour the radius is 0.75·|Δ_m|.
pub fn default_contour(delta_m: &Interval, delta_prev: Option<&Interval>) -> Result<Circle, DiagnosticsError> {
    if !delta_m.bounded() {
        return Err(DiagnosticsError::InvalidSweep(format!("Δ_m = {delta_m} is unbounded")));
    }
    let center = delta_m.midpoint().expect("bounded").to_f64();
    let half = delta_m.length() / 2.0;
    let radius = match delta_prev {
        Some(prev) => 0.75 * delta_m.distance(prev) + half,
        None => 1.5 * half,
    };
    Ok(Circle { center, radius })
}

const BITS: u32 = 256;
const MAX_SAMPLES: usize = 1 << 15;
const PERTURBATIONS: [f64; 3] = [1.01, 0.99, 1.02];

/// Number of zeros of p strictly inside Γ.
pub fn interior_zero_count<T: Scalar>(p: &Polynomial<T>, gamma: &Circle) -> Result<usize, DiagnosticsError> {
    if p.degree() <= 0 {
        return Ok(0);
    }
    let pb: Polynomial<BigFloat> = Polynomial::new(
        p.coeffs().iter().map(|c| c.to_big_float(BITS)).collect(),
        Precision::Float(BITS),
    );
    let dp = pb.derivative();
    for radius in std::iter::once(gamma.radius).chain(PERTURBATIONS.iter().map(|f| gamma.radius * f)) {
        if let Ok(k) = winding(&pb, &dp, gamma.center, radius) {
            return Ok(k);
        }
    }
    Err(DiagnosticsError::RootOnContour(PERTURBATIONS.len()))
}

/// deg p − (zeros inside Γ).
pub fn exterior_zero_count<T: Scalar>(p: &Polynomial<T>, gamma: &Circle) -> Result<usize, DiagnosticsError> {
    let inside = interior_zero_count(p, gamma)?;
    Ok(p.degree().max(0) as usize - inside)
}

/// Ok(count) when certified, Err(residual) otherwise.
fn winding(p: &Polynomial<BigFloat>, dp: &Polynomial<BigFloat>, center: f64, radius: f64) -> Result<usize, f64> {
    let prec = Precision::Float(BITS);
    let deg = p.degree() as usize;
    let mut samples = (16 * (deg + 1)).next_power_of_two().max(64);
    let mut previous: Option<i64> = None;
    let mut residual = f64::INFINITY;
    while samples <= MAX_SAMPLES {
        let mut sum = Complex::new(BigFloat::from_int(0), BigFloat::from_int(0));
        for k in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let u = Complex::new(
                BigFloat::from_f64(radius * theta.cos(), prec),
                BigFloat::from_f64(radius * theta.sin(), prec),
            );
            let z = u.clone() + Complex::new(BigFloat::from_f64(center, prec), BigFloat::from_int(0));
            let pv = p.eval_complex(&z);
            if pv.re.is_zero() && pv.im.is_zero() {
                return Err(f64::INFINITY);
            }
            sum = sum + u * dp.eval_complex(&z) / pv;
        }
        let re = sum.re.to_f64() / samples as f64;
        let im = sum.im.to_f64() / samples as f64;
        let k = re.round();
        residual = (re - k).abs().max(im.abs());
        if residual < 0.25 && k >= 0.0 && previous == Some(k as i64) {
            return Ok(k as usize);
        }
        previous = (residual < 0.25).then_some(k as i64);
        samples *= 2;
    }
    Err(residual)
}
