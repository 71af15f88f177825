//! Heisenberg group law, the left-invariant frame `X1, X2, X3`, causal
//! classification of horizontal vectors and the length of admissible curves.

use std::ops::Mul;

use crate::error::{Error, Result};

/// Element `(x, y, z)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    /// Euclidean distance between coordinate triples.
    pub fn coord_distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y).hypot(self.z - other.z)
    }

    /// `x^2 - y^2` evaluated as `(x - y)(x + y)`.
    pub fn lorentz_square(&self) -> f64 {
        (self.x - self.y) * (self.x + self.y)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point {
    fn from(a: [f64; 3]) -> Self {
        Point::new(a[0], a[1], a[2])
    }
}

impl Mul for Point {
    type Output = Point;

    fn mul(self, rhs: Point) -> Point {
        product(self, rhs)
    }
}

/// Group product `a · b`.
pub fn product(a: Point, b: Point) -> Point {
    Point { x: a.x + b.x, y: a.y + b.y, z: a.z + b.z + 0.5 * (a.x * b.y - b.x * a.y) }
}

/// Group inverse; the identity is the origin.
pub fn inverse(a: Point) -> Point {
    Point::new(-a.x, -a.y, -a.z)
}

/// Tangent vector written in the left-invariant frame `v1 X1 + v2 X2 + v3 X3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameVector {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl FrameVector {
    pub const fn new(v1: f64, v2: f64, v3: f64) -> Self {
        FrameVector { v1, v2, v3 }
    }

    pub const fn horizontal(v1: f64, v2: f64) -> Self {
        FrameVector { v1, v2, v3: 0.0 }
    }

    /// Frame components of the coordinate vector `d = (dx, dy, dz)` attached at `q`.
    pub fn from_coordinates(q: Point, d: [f64; 3]) -> Self {
        FrameVector { v1: d[0], v2: d[1], v3: d[2] + 0.5 * (q.y * d[0] - q.x * d[1]) }
    }

    /// Coordinate components `(dx, dy, dz)` of this vector at `q`.
    pub fn to_coordinates(&self, q: Point) -> [f64; 3] {
        let [x1, x2, x3] = frame_at(q);
        [0, 1, 2].map(|i| self.v1 * x1[i] + self.v2 * x2[i] + self.v3 * x3[i])
    }

    /// The Lorentzian quadratic form `g(v) = -v1^2 + v2^2` on the distribution.
    pub fn metric(&self) -> f64 {
        (self.v2 - self.v1) * (self.v2 + self.v1)
    }
}

/// Coordinate components of `X1, X2, X3` at `q`.
pub fn frame_at(q: Point) -> [[f64; 3]; 3] {
    [[1.0, 0.0, -0.5 * q.y], [0.0, 1.0, 0.5 * q.x], [0.0, 0.0, 1.0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalKind {
    Timelike,
    Lightlike,
    Spacelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeOrientation {
    FutureDirected,
    PastDirected,
    NotApplicable,
}

/// Causal character of a horizontal vector together with its time orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CausalClass {
    pub kind: CausalKind,
    pub orientation: TimeOrientation,
}

impl CausalClass {
    /// Timelike or lightlike.
    pub fn is_nonspacelike(&self) -> bool {
        self.kind != CausalKind::Spacelike
    }

    pub fn is_future_directed(&self) -> bool {
        self.orientation == TimeOrientation::FutureDirected
    }
}

/// Classifies a horizontal vector with exact comparisons on `g(v)`.
pub fn classify(v: FrameVector) -> Result<CausalClass> {
    classify_with_tolerance(v, 0.0)
}

/// Classifies a horizontal vector, treating `|g(v)| <= tol` as lightlike.
///
/// The zero vector is spacelike. Time orientation is given by `X1`.
pub fn classify_with_tolerance(v: FrameVector, tol: f64) -> Result<CausalClass> {
    if v.v3 != 0.0 {
        return Err(Error::NonHorizontal(v.v3));
    }
    let g = v.metric();
    let zero = v.v1 == 0.0 && v.v2 == 0.0;
    let kind = if zero {
        CausalKind::Spacelike
    } else if g < -tol {
        CausalKind::Timelike
    } else if g <= tol {
        CausalKind::Lightlike
    } else {
        CausalKind::Spacelike
    };
    let orientation = match kind {
        CausalKind::Spacelike => TimeOrientation::NotApplicable,
        _ if v.v1 > 0.0 => TimeOrientation::FutureDirected,
        _ => TimeOrientation::PastDirected,
    };
    Ok(CausalClass { kind, orientation })
}

/// Control `(u1, u2)` multiplying `X1, X2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Control {
    pub u1: f64,
    pub u2: f64,
}

impl Control {
    pub const fn new(u1: f64, u2: f64) -> Self {
        Control { u1, u2 }
    }

    /// Future directed nonspacelike: `u1 >= |u2|`.
    pub fn is_admissible(&self) -> bool {
        self.u1 >= self.u2.abs()
    }

    pub fn check_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleControl { u1: self.u1, u2: self.u2 })
        }
    }

    /// Length rate `sqrt(u1^2 - u2^2)`.
    pub fn speed(&self) -> f64 {
        ((self.u1 - self.u2) * (self.u1 + self.u2)).max(0.0).sqrt()
    }
}

/// Length of the curve driven by a piecewise-constant control sequence of
/// `(control, duration)` pieces.
pub fn curve_length(pieces: &[(Control, f64)]) -> Result<f64> {
    pieces.iter().try_fold(0.0, |acc, (u, dt)| {
        u.check_admissible()?;
        Ok(acc + dt * u.speed())
    })
}
