use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;

/// n = (n_1, ..., n_m), not all zero. Component 0 is the derived n_0 = max n_j − 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct MultiIndex {
    n: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: Vec<usize>) -> Result<Self, SolveError> {
        if n.is_empty() {
            return Err(SolveError::InvalidIndex("empty multi-index".into()));
        }
        if n.iter().all(|&v| v == 0) {
            return Err(SolveError::InvalidIndex("all components are zero".into()));
        }
        Ok(MultiIndex { n })
    }

    /// (k, ..., k) with m components.
    pub fn diagonal(m: usize, k: usize) -> Result<Self, SolveError> {
        Self::new(vec![k; m])
    }

    pub fn m(&self) -> usize {
        self.n.len()
    }

    /// n_1..n_m.
    pub fn parts(&self) -> &[usize] {
        &self.n
    }

    /// n_j for j = 0..=m (n_0 derived).
    pub fn get(&self, j: usize) -> usize {
        if j == 0 {
            self.n0()
        } else {
            self.n[j - 1]
        }
    }

    pub fn n0(&self) -> usize {
        self.max() - 1
    }

    /// (n_0, n_1, ..., n_m).
    pub fn components(&self) -> Vec<usize> {
        (0..=self.m()).map(|j| self.get(j)).collect()
    }

    /// |n| = Σ n_j.
    pub fn total(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn max(&self) -> usize {
        *self.n.iter().max().expect("nonempty")
    }

    pub fn min(&self) -> usize {
        *self.n.iter().min().expect("nonempty")
    }

    pub fn spread(&self) -> usize {
        self.max() - self.min()
    }

    /// n̄_j = max{n_k : k = j..m}, 1-based.
    pub fn nbar(&self, j: usize) -> usize {
        self.n[j - 1..].iter().copied().max().unwrap_or(0)
    }

    /// Last index of (n_0, ..., n_m) attaining the minimum.
    pub fn jbar(&self) -> usize {
        let c = self.components();
        let min = *c.iter().min().expect("nonempty");
        c.iter().rposition(|&v| v == min).expect("nonempty")
    }

    /// Number of interpolation conditions, |n| + max − 2.
    pub fn condition_count(&self) -> usize {
        self.total() + self.max() - 2
    }

    /// Number of free coefficients, |n| + max − 1.
    pub fn unknown_count(&self) -> usize {
        self.total() + self.max() - 1
    }
}

impl TryFrom<Vec<usize>> for MultiIndex {
    type Error = SolveError;

    fn try_from(n: Vec<usize>) -> Result<Self, SolveError> {
        Self::new(n)
    }
}

impl From<MultiIndex> for Vec<usize> {
    fn from(n: MultiIndex) -> Self {
        n.n
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.n.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = SolveError;

    /// Accepts "2,3", "(2, 3)" or "[2,3]".
    fn from_str(s: &str) -> Result<Self, SolveError> {
        let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let n = body
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| SolveError::InvalidIndex(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n)
    }
}
