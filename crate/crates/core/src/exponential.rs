//! The exponential map of strictly normal extremals, its inverse on the
//! chronological future, and the scalar diffeomorphism `alpha: R -> (-1/4, 1/4)`
//! together with its inverse `beta`.
//!
//! Normal extremals with momentum `(h1, h2, h3) = (-cosh psi, sinh psi, c)`
//! reach, after arclength time `t`,
//!
//! ```text
//! x = (2/c) sinh(ct/2) cosh(psi + ct/2)
//! y = (2/c) sinh(ct/2) sinh(psi + ct/2)
//! z = (sinh(ct) - ct) / (2 c^2)
//! ```
//!
//! which is the product form of the difference-of-sinh formulas and stays
//! accurate as `c -> 0`.

use crate::causal::{classify_point, CausalMembership};
use crate::error::{Error, Result};
use crate::group::{frame_at, Point};
use crate::hyperbolic::{artanh_ratio, newton_bracketed, sinh_minus_id, sinh_minus_id_over_sq, sinhc, x_over_sinh};

/// Coordinates `(psi, c, t)` on `C x R+` parametrizing timelike extremals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpCoords {
    pub psi: f64,
    pub c: f64,
    pub t: f64,
}

impl ExpCoords {
    pub fn new(psi: f64, c: f64, t: f64) -> Result<Self> {
        if !(psi.is_finite() && c.is_finite() && t.is_finite()) {
            return Err(Error::NonFinite);
        }
        if t <= 0.0 {
            return Err(Error::NonpositiveTime(t));
        }
        Ok(ExpCoords { psi, c, t })
    }

    /// Half the accumulated hyperbolic angle, `ct/2`.
    pub fn half_angle(&self) -> f64 {
        0.5 * self.c * self.t
    }
}

/// Momentum `(h1, h2, h3)` in the left-invariant trivialization.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Covector {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

impl Covector {
    pub const fn new(h1: f64, h2: f64, h3: f64) -> Self {
        Covector { h1, h2, h3 }
    }

    /// Point of the level set `H = 1/2` with angle `psi` and `h3 = c`.
    pub fn on_unit_level(psi: f64, c: f64) -> Self {
        Covector { h1: -psi.cosh(), h2: psi.sinh(), h3: c }
    }

    /// Momentum of the extremal `lc` at its endpoint.
    pub fn at_endpoint(lc: &ExpCoords) -> Self {
        Covector::on_unit_level(lc.psi + lc.c * lc.t, lc.c)
    }

    /// `H = (h2^2 - h1^2) / 2`.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * (self.h2 - self.h1) * (self.h2 + self.h1)
    }
}

/// Time derivative of the extremal state `(h, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dh: Covector,
    pub dq: [f64; 3],
}

/// Hamiltonian vector field of `H` on the normal branch `h1 < 0`:
/// `h1' = -h2 h3`, `h2' = -h1 h3`, `h3' = 0`, `q' = -h1 X1(q) + h2 X2(q)`.
pub fn hamiltonian_rhs(h: Covector, q: Point) -> StateDerivative {
    let [x1, x2, _] = frame_at(q);
    let (u1, u2) = (-h.h1, h.h2);
    StateDerivative { dh: Covector::new(-h.h2 * h.h3, -h.h1 * h.h3, 0.0), dq: [0, 1, 2].map(|i| u1 * x1[i] + u2 * x2[i]) }
}

/// `alpha(p) = (sinh 2p - 2p) / (8 sinh^2 p)`, odd and increasing onto `(-1/4, 1/4)`.
pub fn alpha(p: f64) -> f64 {
    let a = p.abs();
    if a < 1e-3 {
        let p2 = p * p;
        p * (1.0 / 6.0 - p2 * (1.0 / 45.0 - p2 * (1.0 / 315.0 - p2 * (2.0 / 4725.0))))
    } else if a < 1.0 {
        (sinh_minus_id(2.0 * a) / (8.0 * a.sinh().powi(2))).copysign(p)
    } else {
        (0.25 - alpha_complement(a)).copysign(p)
    }
}

/// `1/4 - alpha(p)` for `p >= 0.5`, evaluated without cancellation as
/// `(p - (1 - e^{-2p})/2) / (4 sinh^2 p)`.
pub(crate) fn alpha_complement(p: f64) -> f64 {
    debug_assert!(p >= 0.5);
    let m = (-2.0 * p).exp_m1();
    (p + 0.5 * m) * (-2.0 * p).exp() / (m * m)
}

/// Derivative of [`alpha`]: `(p coth p - 1) / (2 sinh^2 p)`.
pub fn alpha_prime(p: f64) -> f64 {
    let a = p.abs();
    if a < 0.1 {
        let p2 = p * p;
        1.0 / 6.0 - p2 * (1.0 / 15.0 - p2 * (1.0 / 63.0 - p2 * (2.0 / 675.0)))
    } else {
        let m = (-2.0 * a).exp_m1();
        (a / a.tanh() - 1.0) * 2.0 * (-2.0 * a).exp() / (m * m)
    }
}

/// Inverse of [`alpha`] on `(-1/4, 1/4)`.
pub fn beta(w: f64) -> Result<f64> {
    if !(w.abs() < 0.25) {
        return Err(Error::OutOfDomain(w));
    }
    if w == 0.0 {
        return Ok(0.0);
    }
    let a = w.abs();
    let p = if a < 1e-4 {
        let a2 = a * a;
        a * (6.0 + a2 * (144.0 / 5.0 + a2 * (46656.0 / 175.0 + a2 * (373248.0 / 125.0))))
    } else if a < 0.2 {
        // alpha(p) < p/6 for p > 0, so the root exceeds 6a.
        let lo = 6.0 * a;
        let mut hi = 2.0 * lo;
        while alpha(hi) < a {
            hi *= 2.0;
        }
        let guess = a * (6.0 + a * a * 144.0 / 5.0);
        newton_bracketed(|p| (alpha(p) - a, alpha_prime(p)), lo, hi, guess)
    } else {
        // Near the ends alpha' decays like p e^{-2p}; solve
        // ln(1/4 - alpha(p)) = ln(1/4 - a) instead, which is close to linear.
        let target = (0.25 - a).ln();
        let lo = 0.5;
        let mut hi = 1.0;
        while alpha_complement(hi).ln() > target {
            hi *= 2.0;
        }
        let guess = 0.5 * (-(0.25 - a).ln()).max(1.0);
        newton_bracketed(
            |p| {
                let comp = alpha_complement(p);
                (target - comp.ln(), alpha_prime(p) / comp)
            },
            lo,
            hi,
            guess,
        )
    };
    Ok(p.copysign(w))
}

/// Endpoint of the timelike extremal with coordinates `lc`.
pub fn exp_map(lc: ExpCoords) -> Result<Point> {
    let ExpCoords { psi, c, t } = ExpCoords::new(lc.psi, lc.c, lc.t)?;
    if c == 0.0 {
        return Ok(Point::new(t * psi.cosh(), t * psi.sinh(), 0.0));
    }
    let p = 0.5 * c * t;
    let tau = psi + p;
    let radius = t * sinhc(p);
    Ok(Point::new(radius * tau.cosh(), radius * tau.sinh(), 0.5 * t * t * sinh_minus_id_over_sq(c * t)))
}

/// Points whose `|z / (x^2 - y^2)|` exceeds this are treated as resting on
/// the beak for the purposes of `beta`.
pub const NEAR_BEAK_MARGIN: f64 = 1e-13;

/// Brings `w = z / (x^2 - y^2)` into the open domain of `beta`.
///
/// Returns the clamped value and whether it was within [`NEAR_BEAK_MARGIN`] of
/// `1/4`, in which case the caller's result has reduced precision.
pub fn clamp_to_beta_domain(w: f64) -> (f64, bool) {
    let near = w.abs() > 0.25 - NEAR_BEAK_MARGIN;
    let limit = 0.25f64.next_down();
    (w.clamp(-limit, limit), near)
}

/// Inverse of [`exp_map`] on the chronological future.
///
/// The problem is ill-conditioned far from the `x` axis: `x - y` carries
/// relative rounding of order `eps * e^{2 psi + ct}` and `beta` amplifies
/// perturbations of `z / (x^2 - y^2)` by roughly `e^{|ct|}`. Round trips hold
/// to `1e-9` while `|ct| + 2|psi|` stays below about 9.
pub fn exp_inverse(q: Point) -> Result<ExpCoords> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    if classify_point(q) != CausalMembership::Interior {
        return Err(Error::NotInterior { x: q.x, y: q.y, z: q.z });
    }
    let d = q.lorentz_square();
    let root = d.sqrt();
    let rapidity = artanh_ratio(q.y, q.x);
    if q.z == 0.0 {
        return Ok(ExpCoords { psi: rapidity, c: 0.0, t: root });
    }
    let (w, _) = clamp_to_beta_domain(q.z / d);
    let p = beta(w)?;
    Ok(ExpCoords { psi: rapidity - p, c: 2.0 * p.sinh() / root, t: root * x_over_sinh(p) })
}
