//! Real root isolation by Sturm counting and sign-change bisection.
//!
//! Coefficients are lifted to exact rationals first (float coefficients are
//! dyadic), so counts are exact for either backend.

use num_traits::{One, Signed, Zero};

use super::polynomial::Polynomial;
use super::scalar::{Precision, Rational, Scalar};
use crate::error::NumericsError;

/// One isolated real root: `lo <= r <= hi`, `hi - lo <= tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBracket<T: Scalar> {
    pub lo: T,
    pub hi: T,
    pub multiplicity: usize,
}

impl<T: Scalar> RootBracket<T> {
    pub fn simple(&self) -> bool {
        self.multiplicity == 1
    }

    pub fn midpoint(&self) -> T {
        (self.lo.clone() + self.hi.clone()) / (T::one() + T::one())
    }
}

const BISECTION_BUDGET: usize = 200_000;

struct SturmChain {
    chain: Vec<Polynomial<Rational>>,
}

impl SturmChain {
    fn new(p: &Polynomial<Rational>) -> Self {
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            // rescale to keep coefficients small; only signs matter
            let r = r.neg();
            let scale = r.leading().unwrap().abs();
            chain.push(r.scale(&(Rational::one() / scale)));
        }
        chain.retain(|q| !q.is_zero());
        SturmChain { chain }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for q in &self.chain {
            let v = q.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in the half-open interval (a, b].
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn multiplicity(chain_of_gcds: &[(Polynomial<Rational>, SturmChain)], lo: &Rational, hi: &Rational) -> usize {
    let mut m = 1;
    for (g, sc) in chain_of_gcds {
        let inside = if g.eval(lo).is_zero() { 1 } else { 0 } + sc.count(lo, hi);
        if inside == 0 {
            break;
        }
        m += 1;
    }
    m
}

/// Isolates all real roots of `p` in the closed interval `[lo, hi]` to width `tol`.
pub fn real_roots_in_interval<T: Scalar>(
    p: &Polynomial<T>,
    lo: &T,
    hi: &T,
    tol: &T,
) -> Result<Vec<RootBracket<T>>, NumericsError> {
    if p.is_zero() {
        return Err(NumericsError::ZeroPolynomial);
    }
    let prec = p.precision();
    let exact: Polynomial<Rational> = p.convert(Precision::Exact);
    let a = lo.to_rational_exact();
    let b = hi.to_rational_exact();
    let tol = tol.to_rational_exact();
    if tol <= Rational::zero() {
        return Err(NumericsError::Parse("tolerance must be positive".into()));
    }
    if a > b {
        return Err(NumericsError::Parse("empty interval".into()));
    }
    let roots = isolate_exact(&exact, &a, &b, &tol)?;
    Ok(roots
        .into_iter()
        .map(|(l, h, m)| RootBracket { lo: T::from_rational(&l, prec), hi: T::from_rational(&h, prec), multiplicity: m })
        .collect())
}

fn isolate_exact(
    p: &Polynomial<Rational>,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
) -> Result<Vec<(Rational, Rational, usize)>, NumericsError> {
    if p.degree() <= 0 {
        return Ok(Vec::new());
    }
    // square-free part and the successive gcds used for multiplicities
    let g = p.gcd(&p.derivative());
    let (sqfree, _) = p.div_rem(&g)?;
    let mut gcds = Vec::new();
    let mut cur = g;
    while cur.degree() > 0 {
        let next = cur.gcd(&cur.derivative());
        gcds.push((cur.clone(), SturmChain::new(&cur)));
        cur = next;
    }
    let sturm = SturmChain::new(&sqfree);
    let two = Rational::from_integer(2.into());

    let mut found: Vec<(Rational, Rational)> = Vec::new();
    if sqfree.eval(a).is_zero() {
        found.push((a.clone(), a.clone()));
    }
    let mut stack = vec![(a.clone(), b.clone(), sturm.count(a, b))];
    let mut budget = BISECTION_BUDGET;
    while let Some((l, h, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if budget == 0 {
            stack.push((l, h, n));
            let unresolved = stack.iter().map(|(l, h, _)| (l.to_f64(), h.to_f64())).collect();
            return Err(NumericsError::RootBudget(unresolved));
        }
        budget -= 1;
        if sqfree.eval(&h).is_zero() && n == 1 {
            found.push((h.clone(), h.clone()));
            continue;
        }
        if n == 1 && !sqfree.eval(&l).is_zero() {
            found.push(bisect_sign(&sqfree, l, h, tol, &mut budget)?);
            continue;
        }
        let mid = (l.clone() + h.clone()) / two.clone();
        let left = sturm.count(&l, &mid);
        stack.push((mid.clone(), h, n - left));
        stack.push((l, mid, left));
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(found
        .into_iter()
        .map(|(l, h)| {
            let m = multiplicity(&gcds, &l, &h);
            (l, h, m)
        })
        .collect())
}

/// Bisection on (l, h] holding exactly one simple root, with p(l) != 0.
fn bisect_sign(
    p: &Polynomial<Rational>,
    mut l: Rational,
    mut h: Rational,
    tol: &Rational,
    budget: &mut usize,
) -> Result<(Rational, Rational), NumericsError> {
    let two = Rational::from_integer(2.into());
    let sl = p.eval(&l).is_positive();
    while h.clone() - l.clone() > *tol {
        if *budget == 0 {
            return Err(NumericsError::RootBudget(vec![(l.to_f64(), h.to_f64())]));
        }
        *budget -= 1;
        let mid = (l.clone() + h.clone()) / two.clone();
        let v = p.eval(&mid);
        if v.is_zero() {
            return Ok((mid.clone(), mid));
        }
        if v.is_positive() == sl {
            l = mid;
        } else {
            h = mid;
        }
    }
    Ok((l, h))
}
