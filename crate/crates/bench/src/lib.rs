//! Shared input sets for the benchmarks.

use sublorentz::exponential::{exp_map, ExpCoords};
use sublorentz::group::Point;

/// Deterministic spread of interior points produced by the exponential map.
pub fn interior_points(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let s = i as f64 / n as f64;
            let lc = ExpCoords::new(2.0 * s - 1.0, 4.0 * (0.37 * i as f64).sin(), 0.2 + 2.0 * s).unwrap();
            exp_map(lc).unwrap()
        })
        .collect()
}
