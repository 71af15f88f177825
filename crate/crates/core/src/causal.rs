//! Chronological future `I+`, causal future `J+` and the Heisenberg beak
//! `J+ \ I+` of the identity.

use crate::error::{Error, Result};
use crate::group::Point;

/// Position of a point relative to the causal future of the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalMembership {
    /// Chronological future: `-x^2 + y^2 + 4|z| < 0`, `x > 0`.
    Interior,
    /// The beak, excluding the identity.
    Boundary,
    Origin,
    Outside,
}

impl CausalMembership {
    pub fn in_causal_future(self) -> bool {
        self != CausalMembership::Outside
    }

    pub fn label(self) -> &'static str {
        match self {
            CausalMembership::Interior => "Interior",
            CausalMembership::Boundary => "Boundary",
            CausalMembership::Origin => "Origin",
            CausalMembership::Outside => "Outside",
        }
    }
}

/// Beak defining function `s = -x^2 + y^2 + 4|z|` with `x^2 - y^2` factored.
pub fn beak_function(q: Point) -> f64 {
    4.0 * q.z.abs() - q.lorentz_square()
}

/// Default boundary tolerance `1e-10 * max(1, x^2)`.
pub fn default_tolerance(q: Point) -> f64 {
    1e-10 * (q.x * q.x).max(1.0)
}

/// Classifies `q` with an explicit tolerance on the beak function.
pub fn membership(q: Point, tol: f64) -> CausalMembership {
    let tol = tol.max(0.0);
    if q.norm() <= tol {
        return CausalMembership::Origin;
    }
    let s = beak_function(q);
    if s < -tol && q.x > 0.0 {
        CausalMembership::Interior
    } else if s.abs() <= tol && q.x >= 0.0 {
        CausalMembership::Boundary
    } else {
        CausalMembership::Outside
    }
}

/// [`membership`] with [`default_tolerance`].
pub fn classify_point(q: Point) -> CausalMembership {
    membership(q, default_tolerance(q))
}

/// Sheet of the beak: `Plus` covers `z >= 0`, `Minus` covers `z <= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// Endpoint of the two-edge lightlike curve with edge lengths `tau1`, `tau2`.
pub fn beak_point(tau1: f64, tau2: f64, branch: Branch) -> Result<Point> {
    for t in [tau1, tau2] {
        if !(t >= 0.0) {
            return Err(Error::NegativeParameter(t));
        }
    }
    Ok(match branch {
        Branch::Plus => Point::new(tau1 + tau2, tau2 - tau1, tau1 * tau2),
        Branch::Minus => Point::new(tau1 + tau2, tau1 - tau2, -(tau1 * tau2)),
    })
}

/// Height `x = sqrt(y^2 + 4|z|)` of the beak above `(y, z)`.
pub fn beak_height(y: f64, z: f64) -> f64 {
    y.mul_add(y, 4.0 * z.abs()).sqrt()
}

/// The five strata of the beak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeakStratum {
    UpperSheet,
    LowerSheet,
    EdgePositiveY,
    EdgeNegativeY,
    Vertex,
}

impl BeakStratum {
    pub fn of(q: Point) -> BeakStratum {
        if q.z > 0.0 {
            BeakStratum::UpperSheet
        } else if q.z < 0.0 {
            BeakStratum::LowerSheet
        } else if q.y > 0.0 {
            BeakStratum::EdgePositiveY
        } else if q.y < 0.0 {
            BeakStratum::EdgeNegativeY
        } else {
            BeakStratum::Vertex
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BeakStratum::UpperSheet => "z>0",
            BeakStratum::LowerSheet => "z<0",
            BeakStratum::EdgePositiveY => "z=0,y>0",
            BeakStratum::EdgeNegativeY => "z=0,y<0",
            BeakStratum::Vertex => "origin",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_examples() {
        assert_eq!(membership(Point::new(1.0, 0.0, 0.0), 0.0), CausalMembership::Interior);
        assert_eq!(membership(Point::new(2.0, 0.0, 1.0), 0.0), CausalMembership::Boundary);
        assert_eq!(membership(Point::new(0.0, 1.0, 0.0), 0.0), CausalMembership::Outside);
        assert_eq!(membership(Point::ORIGIN, 0.0), CausalMembership::Origin);
        assert_eq!(membership(Point::new(-1.0, 1.0, 0.0), 0.0), CausalMembership::Outside);
        assert_eq!(membership(Point::new(-1.0, 0.0, 0.0), 0.0), CausalMembership::Outside);
    }

    #[test]
    fn tolerance_widens_boundary() {
        let q = Point::new(2.0, 0.0, 1.0 - 1e-12);
        assert_eq!(membership(q, 0.0), CausalMembership::Interior);
        assert_eq!(classify_point(q), CausalMembership::Boundary);
    }

    #[test]
    fn beak_point_examples() {
        assert_eq!(beak_point(1.0, 1.0, Branch::Plus).unwrap(), Point::new(2.0, 0.0, 1.0));
        assert_eq!(beak_point(1.0, 1.0, Branch::Minus).unwrap(), Point::new(2.0, 0.0, -1.0));
        assert_eq!(beak_point(0.0, 0.0, Branch::Plus).unwrap(), Point::ORIGIN);
        assert_eq!(beak_point(-1.0, 0.0, Branch::Plus), Err(Error::NegativeParameter(-1.0)));
        assert!(beak_point(f64::NAN, 0.0, Branch::Plus).is_err());
    }

    #[test]
    fn beak_height_examples() {
        assert_eq!(beak_height(0.0, 0.0), 0.0);
        assert_eq!(beak_height(0.0, 1.0), 2.0);
        assert_eq!(beak_height(3.0, 0.0), 3.0);
    }

    #[test]
    fn strata() {
        assert_eq!(BeakStratum::of(Point::new(2.0, 0.0, 1.0)), BeakStratum::UpperSheet);
        assert_eq!(BeakStratum::of(Point::new(1.0, -1.0, 0.0)), BeakStratum::EdgeNegativeY);
        assert_eq!(BeakStratum::of(Point::ORIGIN), BeakStratum::Vertex);
    }

    fn branch() -> impl Strategy<Value = Branch> {
        prop_oneof![Just(Branch::Plus), Just(Branch::Minus)]
    }

    proptest! {
        #[test]
        fn beak_points_are_semialgebraic(t1 in 0.0..50.0f64, t2 in 0.0..50.0f64, b in branch()) {
            let q = beak_point(t1, t2, b).unwrap();
            let d = q.lorentz_square();
            let lhs = 16.0 * q.z * q.z;
            prop_assert!((lhs - d * d).abs() <= 1e-12 * (1.0 + q.x.powi(4)));
        }

        #[test]
        fn beak_points_lie_on_boundary(t1 in 0.0..50.0f64, t2 in 0.0..50.0f64, b in branch()) {
            let q = beak_point(t1, t2, b).unwrap();
            let tol = 1e-12 * q.x.powi(2).max(1.0);
            let m = membership(q, tol);
            prop_assert!(matches!(m, CausalMembership::Boundary | CausalMembership::Origin), "{m:?}");
            prop_assert!((beak_height(q.y, q.z) - q.x).abs() <= 1e-12 * q.x.max(1.0));
        }

        #[test]
        fn interior_points_dominate_beak(x in 0.01..10.0f64, u in -0.99..0.99f64, v in -0.99..0.99f64) {
            let y = u * x;
            let z = v * (x * x - y * y) / 4.0;
            let q = Point::new(x, y, z);
            prop_assert_eq!(membership(q, 0.0), CausalMembership::Interior);
            prop_assert!(x > beak_height(y, z));
        }
    }
}
