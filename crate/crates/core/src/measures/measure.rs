//! Finite atomic measures of constant sign and their Cauchy transforms.

use serde::{Deserialize, Serialize};

use super::interval::Interval;
use crate::error::MeasureError;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{Complex, Precision, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureSign {
    Positive,
    Negative,
}

impl MeasureSign {
    pub fn as_i8(self) -> i8 {
        match self {
            MeasureSign::Positive => 1,
            MeasureSign::Negative => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            MeasureSign::Positive => MeasureSign::Negative,
            MeasureSign::Negative => MeasureSign::Positive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generator,
    /// Product ⟨σ_j, ..., σ_k⟩ with 1-based generator indices.
    Product { j: usize, k: usize },
    Discretized(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measure<T: Scalar> {
    xs: Vec<T>,
    ws: Vec<T>,
    support: Interval,
    sign: MeasureSign,
    provenance: Provenance,
    prec: Precision,
}

impl<T: Scalar> Measure<T> {
    /// Validates ordering, support membership, sign constancy and atom count.
    pub fn new(
        atoms: Vec<(T, T)>,
        support: Interval,
        provenance: Provenance,
        prec: Precision,
    ) -> Result<Self, MeasureError> {
        if atoms.len() < 2 {
            return Err(MeasureError::TooFewAtoms(atoms.len()));
        }
        let positive = atoms[0].1 > T::zero();
        for (i, (x, w)) in atoms.iter().enumerate() {
            if i > 0 && atoms[i - 1].0 >= *x {
                return Err(MeasureError::Unordered(i));
            }
            if !support.contains(x) {
                return Err(MeasureError::OutsideSupport(i));
            }
            if w.is_zero() || (*w > T::zero()) != positive {
                return Err(MeasureError::MixedSign(i));
            }
        }
        let sign = if positive { MeasureSign::Positive } else { MeasureSign::Negative };
        let (xs, ws) = atoms.into_iter().unzip();
        Ok(Measure { xs, ws, support, sign, provenance, prec })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.xs
    }

    pub fn weights(&self) -> &[T] {
        &self.ws
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&T, &T)> {
        self.xs.iter().zip(&self.ws)
    }

    pub fn support(&self) -> &Interval {
        &self.support
    }

    pub fn sign(&self) -> MeasureSign {
        self.sign
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Signed total mass Σ w_i.
    pub fn mass(&self) -> T {
        self.ws.iter().fold(T::zero(), |a, w| a + w.clone())
    }

    /// Moment Σ w_i x_i^ν / w(x_i).
    pub fn moment(&self, nu: usize, w: Option<&Polynomial<T>>) -> Result<T, MeasureError> {
        Ok(self.moments(nu + 1, w)?.pop().expect("nonempty"))
    }

    /// Moments of order 0..count, optionally divided by a weight polynomial.
    pub fn moments(&self, count: usize, w: Option<&Polynomial<T>>) -> Result<Vec<T>, MeasureError> {
        let mut out = vec![T::zero(); count];
        for (i, (x, wt)) in self.atoms().enumerate() {
            let mut term = match w {
                Some(p) => {
                    let v = p.eval(x);
                    if v.is_zero() {
                        return Err(MeasureError::WeightVanishes(i));
                    }
                    wt.clone() / v
                }
                None => wt.clone(),
            };
            for slot in out.iter_mut() {
                *slot = slot.clone() + term.clone();
                term = term * x.clone();
            }
        }
        Ok(out)
    }

    fn check_pole(&self, i: usize, d: &Complex<T>) -> Result<(), MeasureError> {
        let tol = T::pole_tolerance(self.prec);
        let n2 = d.re.clone() * d.re.clone() + d.im.clone() * d.im.clone();
        if n2.is_zero() || (!tol.is_zero() && n2 <= tol.clone() * tol) {
            return Err(MeasureError::PoleProximity(i));
        }
        Ok(())
    }

    /// ŝ(z) = Σ w_i / (z − x_i).
    pub fn cauchy_transform(&self, z: &Complex<T>) -> Result<Complex<T>, MeasureError> {
        if z.im.is_zero() {
            return Ok(Complex::new(self.cauchy_real(&z.re)?, T::zero()));
        }
        let mut re = T::zero();
        let mut im = T::zero();
        for (i, (x, w)) in self.atoms().enumerate() {
            let d = Complex::new(z.re.clone() - x.clone(), z.im.clone());
            self.check_pole(i, &d)?;
            let n2 = d.re.clone() * d.re.clone() + d.im.clone() * d.im.clone();
            let f = w.clone() / n2;
            re = re + f.clone() * d.re;
            im = im - f * d.im;
        }
        Ok(Complex::new(re, im))
    }

    /// Cauchy transform at a real point off the support atoms.
    pub fn cauchy_real(&self, x: &T) -> Result<T, MeasureError> {
        let tol = T::pole_tolerance(self.prec);
        let mut acc = T::zero();
        for (i, (xi, w)) in self.atoms().enumerate() {
            let d = x.clone() - xi.clone();
            if d.is_zero() || (!tol.is_zero() && d.abs_val() <= tol) {
                return Err(MeasureError::PoleProximity(i));
            }
            acc = acc + w.clone() / d;
        }
        Ok(acc)
    }

    /// Same atoms in another backend.
    pub fn convert<U: Scalar>(&self, prec: Precision) -> Result<Measure<U>, MeasureError> {
        let atoms = self
            .atoms()
            .map(|(x, w)| (U::from_rational(&x.to_rational_exact(), prec), U::from_rational(&w.to_rational_exact(), prec)))
            .collect();
        Measure::new(atoms, self.support.clone(), self.provenance.clone(), prec)
    }
}

/// ⟨σ_a, σ_b⟩: atoms of σ_a reweighted by σ̂_b.
pub fn product_measure<T: Scalar>(a: &Measure<T>, b: &Measure<T>) -> Result<Measure<T>, MeasureError> {
    if b.len() < 2 {
        return Err(MeasureError::TooFewAtoms(b.len()));
    }
    if let Some(p) = a.support.chain_with(&b.support)? {
        let hit = |m: &Measure<T>| m.nodes().iter().any(|x| x.to_rational_exact() == p);
        if hit(a) || hit(b) {
            return Err(MeasureError::SharedEndpointAtom(p.to_string()));
        }
    }
    let atoms = a
        .atoms()
        .map(|(x, w)| Ok((x.clone(), w.clone() * b.cauchy_real(x)?)))
        .collect::<Result<Vec<_>, MeasureError>>()?;
    Measure::new(atoms, a.support.clone(), Provenance::Product { j: 0, k: 0 }, a.prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{parse_rational, Rational};

    const E: Precision = Precision::Exact;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn atoms(list: &[(&str, &str)], a: i64, b: i64) -> Measure<Rational> {
        Measure::new(
            list.iter().map(|(x, w)| (q(x), q(w))).collect(),
            Interval::from_ints(a, b).unwrap(),
            Provenance::Generator,
            E,
        )
        .unwrap()
    }

    #[test]
    fn invariants_are_enforced() {
        let sup = Interval::from_ints(0, 1).unwrap();
        let mk = |v: Vec<(&str, &str)>| Measure::new(v.iter().map(|(x, w)| (q(x), q(w))).collect(), sup.clone(), Provenance::Generator, E);
        assert_eq!(mk(vec![("0", "1")]), Err(MeasureError::TooFewAtoms(1)));
        assert_eq!(mk(vec![("1", "1"), ("0", "1")]), Err(MeasureError::Unordered(1)));
        assert_eq!(mk(vec![("0", "1"), ("2", "1")]), Err(MeasureError::OutsideSupport(1)));
        assert_eq!(mk(vec![("0", "1"), ("1", "-1")]), Err(MeasureError::MixedSign(1)));
    }

    #[test]
    fn two_atom_cauchy_transform() {
        let s = atoms(&[("0", "1/2"), ("1", "1/2")], 0, 1);
        let v = s.cauchy_transform(&Complex::new(q("2"), q("0"))).unwrap();
        assert_eq!(v.re, q("3/4"));
        assert!(matches!(s.cauchy_real(&q("1")), Err(MeasureError::PoleProximity(1))));
    }

    #[test]
    fn cauchy_transform_decays_like_mass_over_z() {
        let s = atoms(&[("0", "1/3"), ("1/2", "1/3"), ("1", "1/3")], 0, 1);
        for k in [10i64, 1000, 100000] {
            let z = Rational::from_integer(k.into());
            let v = s.cauchy_real(&z).unwrap() * z;
            let err = (v - s.mass()).to_f64().abs();
            assert!(err <= 1.0 / k as f64);
        }
    }

    #[test]
    fn complex_transform_matches_direct_sum() {
        let s = atoms(&[("0", "1/2"), ("1", "1/2")], 0, 1);
        let z = Complex::new(q("1/2"), q("1"));
        let direct = s
            .atoms()
            .map(|(x, w)| Complex::new(w.clone(), q("0")) / (z.clone() - Complex::new(x.clone(), q("0"))))
            .fold(Complex::new(q("0"), q("0")), |a, b| a + b);
        assert_eq!(s.cauchy_transform(&z).unwrap(), direct);
    }

    #[test]
    fn moments_with_and_without_weight() {
        let s = atoms(&[("0", "1/2"), ("1", "1/2")], 0, 1);
        assert_eq!(s.moment(3, None).unwrap(), q("1/2"));
        let w = Polynomial::parse(&["-5", "1"], E).unwrap();
        let direct = q("1/2") / q("-5") + q("1/2") / q("-4");
        assert_eq!(s.moment(0, Some(&w)).unwrap(), direct);
        let w0 = Polynomial::parse(&["0", "1"], E).unwrap();
        assert_eq!(s.moment(0, Some(&w0)), Err(MeasureError::WeightVanishes(0)));
    }

    #[test]
    fn product_example() {
        let a = atoms(&[("0", "1"), ("1", "1")], 0, 1);
        let b = atoms(&[("2", "1/2"), ("3", "1/2")], 2, 3);
        let p = product_measure(&a, &b).unwrap();
        assert_eq!(p.weights(), &[q("-5/12"), q("-3/4")]);
        assert_eq!(p.sign(), MeasureSign::Negative);
    }

    #[test]
    fn product_rejects_shared_endpoint_atom() {
        let a = atoms(&[("0", "1"), ("1", "1")], 0, 1);
        let b = atoms(&[("3/2", "1"), ("2", "1")], 1, 2);
        assert!(matches!(product_measure(&a, &b), Err(MeasureError::SharedEndpointAtom(_))));
        let c = atoms(&[("1/2", "1"), ("2", "1")], 0, 2);
        assert!(matches!(product_measure(&c, &b), Err(MeasureError::Overlap(_, _))));
    }

    #[test]
    fn nested_products_match_direct_definition() {
        let g = atoms(&[("-3", "1"), ("-2", "2")], -3, -2);
        let a = atoms(&[("0", "1"), ("1/2", "1/3"), ("1", "2")], 0, 1);
        let b = atoms(&[("2", "1/2"), ("3", "1/5")], 2, 3);
        let ab = product_measure(&a, &b).unwrap();
        let nested = product_measure(&g, &ab).unwrap();
        for (x, w) in nested.atoms() {
            let inner: Rational = a
                .atoms()
                .map(|(y, v)| v * b.cauchy_real(y).unwrap() / (x - y))
                .fold(q("0"), |s, t| s + t);
            let orig = g.atoms().find(|(gx, _)| *gx == x).unwrap().1;
            assert_eq!(*w, orig * inner);
        }
    }
}
