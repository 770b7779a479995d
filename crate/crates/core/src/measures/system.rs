//! Nikishin systems generated by a chain of measures.

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::measure::{product_measure, Measure, Provenance};
use crate::error::MeasureError;
use crate::numerics::scalar::{Precision, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// s_{j,k} = ⟨σ_j, ..., σ_k⟩ for j ≤ k.
    Forward,
    /// s_{k,j} = ⟨σ_k, ..., σ_j⟩ for k ≥ j, generated by (σ_m, ..., σ_1).
    Reversed,
    Both,
}

/// Generators plus all products of the requested orientation.
///
/// `product(j, k)` uses 1-based indices: forward when j < k, reversed when j > k.
#[derive(Debug)]
pub struct NikishinSystem<T: Scalar> {
    generators: Vec<Measure<T>>,
    products: HashMap<(usize, usize), Measure<T>>,
    orientation: Orientation,
    prec: Precision,
    moment_cache: RwLock<HashMap<(usize, usize), Vec<T>>>,
}

impl<T: Scalar> Clone for NikishinSystem<T> {
    fn clone(&self) -> Self {
        NikishinSystem {
            generators: self.generators.clone(),
            products: self.products.clone(),
            orientation: self.orientation,
            prec: self.prec,
            moment_cache: RwLock::new(self.moment_cache.read().map(|c| c.clone()).unwrap_or_default()),
        }
    }
}

/// Builds s_{j,k} recursively; intervals must form a valid chain.
pub fn build_system<T: Scalar>(
    generators: Vec<Measure<T>>,
    orientation: Orientation,
) -> Result<NikishinSystem<T>, MeasureError> {
    let m = generators.len();
    if m == 0 {
        return Err(MeasureError::Index(0));
    }
    let prec = generators[0].precision();
    for pair in generators.windows(2) {
        if let Some(p) = pair[0].support().chain_with(pair[1].support())? {
            let hit = |s: &Measure<T>| s.nodes().iter().any(|x| x.to_rational_exact() == p);
            if hit(&pair[0]) || hit(&pair[1]) {
                return Err(MeasureError::SharedEndpointAtom(p.to_string()));
            }
        }
    }
    let generators: Vec<Measure<T>> =
        generators.into_iter().map(|g| g.with_provenance(Provenance::Generator)).collect();
    let mut products = HashMap::new();
    if matches!(orientation, Orientation::Forward | Orientation::Both) {
        for j in (1..=m).rev() {
            for k in j + 1..=m {
                let inner = if k == j + 1 { &generators[k - 1] } else { &products[&(j + 1, k)] };
                let p = product_measure(&generators[j - 1], inner)?.with_provenance(Provenance::Product { j, k });
                products.insert((j, k), p);
            }
        }
    }
    if matches!(orientation, Orientation::Reversed | Orientation::Both) {
        for k in 1..=m {
            for j in (1..k).rev() {
                let inner = if j == k - 1 { &generators[j - 1] } else { &products[&(k - 1, j)] };
                let p = product_measure(&generators[k - 1], inner)?.with_provenance(Provenance::Product { j: k, k: j });
                products.insert((k, j), p);
            }
        }
    }
    Ok(NikishinSystem { generators, products, orientation, prec, moment_cache: RwLock::new(HashMap::new()) })
}

impl<T: Scalar> NikishinSystem<T> {
    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn generators(&self) -> &[Measure<T>] {
        &self.generators
    }

    /// σ_j, 1-based.
    pub fn sigma(&self, j: usize) -> &Measure<T> {
        &self.generators[j - 1]
    }

    /// s_{j,k} (1-based); None when that orientation was not built.
    pub fn product(&self, j: usize, k: usize) -> Option<&Measure<T>> {
        if j == 0 || k == 0 || j > self.m() || k > self.m() {
            return None;
        }
        if j == k {
            return Some(&self.generators[j - 1]);
        }
        self.products.get(&(j, k))
    }

    pub fn require(&self, j: usize, k: usize) -> Result<&Measure<T>, MeasureError> {
        self.product(j, k).ok_or(MeasureError::Index(j.max(k)))
    }

    /// Unweighted moments c_0..c_{count-1} of s_{j,k}, cached per product.
    pub fn moments(&self, j: usize, k: usize, count: usize) -> Result<Vec<T>, MeasureError> {
        if let Ok(cache) = self.moment_cache.read() {
            if let Some(v) = cache.get(&(j, k)) {
                if v.len() >= count {
                    return Ok(v[..count].to_vec());
                }
            }
        }
        let v = self.require(j, k)?.moments(count, None)?;
        if let Ok(mut cache) = self.moment_cache.write() {
            let entry = cache.entry((j, k)).or_default();
            if entry.len() < v.len() {
                *entry = v.clone();
            }
        }
        Ok(v)
    }

    /// Smallest atom count over the generators.
    pub fn min_atoms(&self) -> usize {
        self.generators.iter().map(Measure::len).min().unwrap_or(0)
    }

    /// Every built product has constant sign (checked again atom by atom).
    pub fn sign_constant(&self) -> bool {
        self.generators.iter().chain(self.products.values()).all(|s| {
            let sgn = s.weights()[0] > T::zero();
            s.weights().iter().all(|w| !w.is_zero() && (*w > T::zero()) == sgn)
        })
    }

    pub fn convert<U: Scalar>(&self, prec: Precision) -> Result<NikishinSystem<U>, MeasureError> {
        let gens = self.generators.iter().map(|g| g.convert::<U>(prec)).collect::<Result<Vec<_>, _>>()?;
        build_system(gens, self.orientation)
    }
}
