//! Sub-Lorentzian distance from the identity,
//! `d(q) = sqrt(x^2 - y^2) * p / sinh p` with `p = beta(z / (x^2 - y^2))`.

use crate::causal::{classify_point, default_tolerance, membership, CausalMembership};
use crate::error::{Error, Result};
use crate::exponential::{beta, clamp_to_beta_domain};
use crate::group::{inverse, Point};
use crate::hyperbolic::x_over_sinh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceRegime {
    Timelike,
    LightlikeBoundary,
    Origin,
}

impl DistanceRegime {
    pub fn label(self) -> &'static str {
        match self {
            DistanceRegime::Timelike => "Timelike",
            DistanceRegime::LightlikeBoundary => "LightlikeBoundary",
            DistanceRegime::Origin => "Origin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    pub regime: DistanceRegime,
    /// `beta(z / (x^2 - y^2))` on the interior; `None` where it is infinite
    /// (beak) or undefined (origin).
    pub p: Option<f64>,
    /// Set when `z / (x^2 - y^2)` had to be clamped into the domain of `beta`.
    pub reduced_precision: bool,
}

/// Distance `d(q0, q)` for `q` in the causal future of the identity, using
/// the default beak tolerance.
pub fn distance(q: Point) -> Result<DistanceResult> {
    distance_with_tolerance(q, default_tolerance(q))
}

/// [`distance`] with an explicit tolerance on the beak function.
pub fn distance_with_tolerance(q: Point, tol: f64) -> Result<DistanceResult> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    match membership(q, tol) {
        CausalMembership::Outside => Err(Error::Unreachable { x: q.x, y: q.y, z: q.z }),
        CausalMembership::Origin => {
            Ok(DistanceResult { value: 0.0, regime: DistanceRegime::Origin, p: None, reduced_precision: false })
        }
        CausalMembership::Boundary => {
            Ok(DistanceResult { value: 0.0, regime: DistanceRegime::LightlikeBoundary, p: None, reduced_precision: false })
        }
        CausalMembership::Interior => {
            let d = q.lorentz_square();
            let (w, clamped) = clamp_to_beta_domain(q.z / d);
            let p = beta(w)?;
            Ok(DistanceResult {
                value: d.sqrt() * x_over_sinh(p),
                regime: DistanceRegime::Timelike,
                p: Some(p),
                reduced_precision: clamped,
            })
        }
    }
}

/// `d(a, b) = d(q0, a^{-1} b)` by left invariance.
pub fn distance_between(a: Point, b: Point) -> Result<DistanceResult> {
    distance(inverse(a) * b)
}

/// `(sqrt(max(0, x^2 - y^2 - 4|z|)), sqrt(x^2 - y^2))`, which bracket `d(q)`.
pub fn distance_bounds(q: Point) -> Result<(f64, f64)> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    let d = q.lorentz_square().max(0.0);
    match classify_point(q) {
        CausalMembership::Outside => Err(Error::Unreachable { x: q.x, y: q.y, z: q.z }),
        CausalMembership::Origin | CausalMembership::Boundary => Ok((0.0, d.sqrt())),
        CausalMembership::Interior => Ok(((d - 4.0 * q.z.abs()).max(0.0).sqrt(), d.sqrt())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponential::{exp_map, ExpCoords};
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        let r = distance(Point::new(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.regime, DistanceRegime::Timelike);
        assert_eq!(r.p, Some(0.0));

        let r = distance(Point::new(2.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.regime, DistanceRegime::LightlikeBoundary);

        let r = distance(Point::ORIGIN).unwrap();
        assert_eq!((r.value, r.regime), (0.0, DistanceRegime::Origin));

        assert!(matches!(distance(Point::new(0.0, 1.0, 0.0)), Err(Error::Unreachable { .. })));
    }

    #[test]
    fn distance_of_exp_point_is_its_time() {
        for &(psi, c, t) in &[(0.3, 1.7, 2.5), (-1.0, 0.4, 0.1), (0.0, -2.0, 3.0), (1.5, 0.0, 4.0)] {
            let q = exp_map(ExpCoords::new(psi, c, t).unwrap()).unwrap();
            let d = distance(q).unwrap().value;
            assert!((d - t).abs() <= 1e-12 * t, "{d} vs {t}");
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(distance_bounds(Point::new(2.0, 0.0, 0.0)).unwrap(), (2.0, 2.0));
        assert_eq!(distance_bounds(Point::new(2.0, 0.0, 1.0)).unwrap(), (0.0, 2.0));
        assert!(distance_bounds(Point::new(0.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn left_translation() {
        let a = Point::new(1.0, 0.5, -0.2);
        let q = Point::new(2.0, 0.3, 0.1);
        let r = distance_between(a, a * q).unwrap();
        assert!((r.value - distance(q).unwrap().value).abs() < 1e-12);
        let r = distance_between(a, a).unwrap();
        assert_eq!(r.regime, DistanceRegime::Origin);
    }

    #[test]
    fn continuous_across_z_zero() {
        let (x, y) = (1.7, -0.6);
        let d0 = distance(Point::new(x, y, 0.0)).unwrap().value;
        let mut prev = f64::INFINITY;
        for k in 1..12 {
            let eps = 10f64.powi(-k);
            let gap = (distance(Point::new(x, y, eps)).unwrap().value - d0).abs();
            assert!(gap <= prev + 1e-15);
            prev = gap;
        }
        assert!(prev < 1e-10);
    }

    #[test]
    fn non_lipschitz_seam() {
        // below eps ~ 5e-11 the default tolerance puts the point on the beak
        for k in 2..10 {
            let eps = 10f64.powi(-k);
            let d = distance(Point::new(1.0 + eps, 1.0, 0.0)).unwrap().value;
            let ratio = d / eps.sqrt();
            assert!(ratio > 1.0 && ratio < 2.0, "eps={eps} ratio={ratio}");
        }
    }

    #[test]
    fn clamped_near_beak_is_flagged() {
        let q = Point::new(2.0, 0.0, 1.0 - 2e-10);
        let r = distance(q).unwrap();
        assert_eq!(r.regime, DistanceRegime::Timelike);
        assert!(r.value > 0.0 && r.value < 1e-3);
        assert!(!r.reduced_precision);
        // The default tolerance keeps such points on the beak; only an exact
        // classification lets them through to the clamp.
        let q = Point::new(1e6, 0.0, 0.25e12 * (1.0 - 4e-14));
        assert_eq!(distance(q).unwrap().regime, DistanceRegime::LightlikeBoundary);
        let r = distance_with_tolerance(q, 0.0).unwrap();
        assert_eq!(r.regime, DistanceRegime::Timelike);
        assert!(r.reduced_precision);
    }

    proptest! {
        #[test]
        fn two_sided_bound(x in 0.01..10.0f64, u in -0.999..0.999f64, v in -0.9999..0.9999f64) {
            let y = u * x;
            let q = Point::new(x, y, v * (x - y) * (x + y) / 4.0);
            let d = distance(q).unwrap().value;
            let (lo, hi) = distance_bounds(q).unwrap();
            prop_assert!(lo <= d * (1.0 + 1e-12) && d <= hi * (1.0 + 1e-12), "{lo} {d} {hi}");
            if q.z != 0.0 {
                prop_assert!(lo < d && d < hi);
            }
            let ratio = d / hi;
            prop_assert!((0.0..=1.0).contains(&ratio));
        }
    }
}
