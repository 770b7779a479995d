//! Dense elimination: nullspaces and determinants.
//!
//! Exact mode uses plain Gauss-Jordan with the first nonzero pivot. Float mode
//! uses complete pivoting and declares rank where the pivot drops below
//! 2^(−p/2) times the largest entry.

use super::scalar::{Precision, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Nullspace<T: Scalar> {
    pub rank: usize,
    pub basis: Vec<Vec<T>>,
}

impl<T: Scalar> Nullspace<T> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

fn rank_threshold<T: Scalar>(rows: &[Vec<T>], prec: Precision) -> T {
    match prec {
        Precision::Exact => T::zero(),
        Precision::Float(bits) => {
            let max = rows
                .iter()
                .flatten()
                .map(|v| v.abs_val())
                .fold(T::zero(), |m, v| if v > m { v } else { m });
            let eps = T::from_bigint_ratio(1.into(), num_bigint::BigInt::from(1) << (bits / 2) as usize, prec);
            max * eps
        }
    }
}

/// Basis of {v : A v = 0} for an `r × ncols` matrix.
pub fn nullspace<T: Scalar>(rows: &[Vec<T>], ncols: usize, prec: Precision) -> Nullspace<T> {
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let nrows = a.len();
    let thr = rank_threshold(&a, prec);
    let mut perm: Vec<usize> = (0..ncols).collect();
    let mut rank = 0;
    let mut pivot_cols = Vec::new();
    let exact = prec.is_exact();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        // choose pivot
        let pivot = if exact {
            (rank..nrows).find(|&r| !a[r][col].is_zero()).map(|r| (r, col))
        } else {
            let mut best: Option<(usize, usize, T)> = None;
            for r in rank..nrows {
                for c in col..ncols {
                    let v = a[r][c].abs_val();
                    if best.as_ref().is_none_or(|b| v > b.2) {
                        best = Some((r, c, v));
                    }
                }
            }
            best.filter(|b| b.2 > thr).map(|b| (b.0, b.1))
        };
        let Some((pr, pc)) = pivot else {
            if exact {
                continue;
            }
            break;
        };
        if pc != col {
            for row in a.iter_mut() {
                row.swap(pc, col);
            }
            perm.swap(pc, col);
        }
        a.swap(pr, rank);
        let inv = T::one() / a[rank][col].clone();
        for c in col + 1..ncols {
            a[rank][c] = a[rank][c].clone() * inv.clone();
        }
        a[rank][col] = T::one();
        for r in 0..nrows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col + 1..ncols {
                let v = a[r][c].clone() - f.clone() * a[rank][c].clone();
                a[r][c] = v;
            }
            a[r][col] = T::zero();
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![T::zero(); ncols];
            v[f] = T::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            // undo column permutation
            let mut out = vec![T::zero(); ncols];
            for (k, val) in v.into_iter().enumerate() {
                out[perm[k]] = val;
            }
            out
        })
        .collect();
    Nullspace { rank, basis }
}

/// Determinant by elimination (exact in exact mode).
pub fn determinant<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let Some(pr) = (col..n).max_by(|&x, &y| {
            a[x][col].abs_val().partial_cmp(&a[y][col].abs_val()).unwrap_or(std::cmp::Ordering::Equal)
        }) else {
            return T::zero();
        };
        if a[pr][col].is_zero() {
            return T::zero();
        }
        if pr != col {
            a.swap(pr, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / p.clone();
            for c in col..n {
                let v = a[r][c].clone() - f.clone() * a[col][c].clone();
                a[r][c] = v;
            }
        }
    }
    det
}

/// A·v for a dense matrix.
pub fn mat_vec<T: Scalar>(rows: &[Vec<T>], v: &[T]) -> Vec<T> {
    rows.iter()
        .map(|row| row.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::scalar::{parse_rational, BigFloat, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn one_by_two_nullspace() {
        let ns = nullspace(&[vec![q("1"), q("1/2")]], 2, Precision::Exact);
        assert_eq!(ns.dimension(), 1);
        assert_eq!(ns.rank, 1);
        let v = &ns.basis[0];
        assert_eq!(q("1") * v[0].clone() + q("1/2") * v[1].clone(), q("0"));
    }

    #[test]
    fn empty_matrix_has_full_nullspace() {
        let ns: Nullspace<Rational> = nullspace(&[], 3, Precision::Exact);
        assert_eq!(ns.dimension(), 3);
    }

    #[test]
    fn rank_deficient_exact() {
        let rows = vec![vec![q("1"), q("2"), q("3")], vec![q("2"), q("4"), q("6")]];
        let ns = nullspace(&rows, 3, Precision::Exact);
        assert_eq!(ns.rank, 1);
        assert_eq!(ns.dimension(), 2);
        for v in &ns.basis {
            assert!(mat_vec(&rows, v).iter().all(|x| *x == q("0")));
        }
    }

    #[test]
    fn float_rank_uses_threshold() {
        let prec = Precision::Float(128);
        let f = |n: i64, d: i64| BigFloat::from_ratio(n, d, prec);
        let rows = vec![vec![f(1, 3), f(2, 3), f(1, 1)], vec![f(2, 3), f(4, 3), f(2, 1)]];
        let ns = nullspace(&rows, 3, prec);
        assert_eq!(ns.rank, 1);
        assert_eq!(ns.dimension(), 2);
    }

    #[test]
    fn determinant_exact() {
        let m = vec![vec![q("1/2"), q("1/3")], vec![q("1/3"), q("1/4")]];
        assert_eq!(determinant(&m), q("1/8") - q("1/9"));
        let singular = vec![vec![q("1"), q("2")], vec![q("2"), q("4")]];
        assert_eq!(determinant(&singular), q("0"));
    }
}
