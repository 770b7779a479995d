//! Shared fixtures for the benchmarks.

use nhp_core::measures::{discretize_density, DensityKind};
use nhp_core::{build_system, Interval, NikishinSystem, Orientation, Rational};

/// Midpoint-rule generators on [2i, 2i + 1], i = 0..m−1.
pub fn midpoint_system(m: usize, atoms: usize) -> NikishinSystem<Rational> {
    let gens = (0..m)
        .map(|i| {
            let iv = Interval::from_ints(2 * i as i64, 2 * i as i64 + 1).expect("interval");
            discretize_density(&DensityKind::UniformMidpoint, &iv, atoms).expect("discretize")
        })
        .collect();
    build_system(gens, Orientation::Both).expect("system")
}
