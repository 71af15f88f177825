//! Optimal trajectories from the identity to points of `J+`.
//!
//! Interior targets are reached by the unique timelike normal extremal
//! `s -> Exp(psi, c, s)`. Targets on the beak are reached by lightlike curves
//! made of one or two edges tangent to `X1 + X2` or `X1 - X2`.

use crate::causal::{classify_point, CausalMembership};
use crate::error::{Error, Result};
use crate::exponential::{exp_inverse, exp_map, ExpCoords};
use crate::group::{Control, FrameVector, Point};

/// Direction `X1 + X2` (`Plus`) or `X1 - X2` (`Minus`) of a lightlike edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lightlike {
    Plus,
    Minus,
}

impl Lightlike {
    pub fn sign(self) -> f64 {
        match self {
            Lightlike::Plus => 1.0,
            Lightlike::Minus => -1.0,
        }
    }

    pub fn control(self) -> Control {
        Control::new(1.0, self.sign())
    }

    pub fn label(self) -> &'static str {
        match self {
            Lightlike::Plus => "+",
            Lightlike::Minus => "-",
        }
    }
}

/// Edge order of a broken lightlike curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BrokenOrder {
    /// `X1 - X2` then `X1 + X2`; ends on the sheet `z > 0`.
    MinusThenPlus,
    /// `X1 + X2` then `X1 - X2`; ends on the sheet `z < 0`.
    PlusThenMinus,
}

impl BrokenOrder {
    pub fn edges(self) -> (Lightlike, Lightlike) {
        match self {
            BrokenOrder::MinusThenPlus => (Lightlike::Minus, Lightlike::Plus),
            BrokenOrder::PlusThenMinus => (Lightlike::Plus, Lightlike::Minus),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BrokenOrder::MinusThenPlus => "-+",
            BrokenOrder::PlusThenMinus => "+-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryKind {
    TimelikeNormal(ExpCoords),
    LightlikeSingle(Lightlike),
    LightlikeBroken { order: BrokenOrder, tau1: f64, tau2: f64 },
}

impl TrajectoryKind {
    pub fn label(&self) -> &'static str {
        match self {
            TrajectoryKind::TimelikeNormal(_) => "timelike",
            TrajectoryKind::LightlikeSingle(_) => "lightlike-single",
            TrajectoryKind::LightlikeBroken { .. } => "lightlike-broken",
        }
    }
}

/// Sampled trajectory starting at the identity.
///
/// Timelike trajectories are sampled uniformly in arclength, lightlike ones
/// uniformly in the parametrization `u1 = 1`, so in both cases the time of
/// the last sample is the total parameter length.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, Point)>,
    pub kind: TrajectoryKind,
    pub length: f64,
}

/// Largest departures of a sampled curve from the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsResidual {
    /// `max(|v2| - v1)` over chords, negative when every chord is strictly timelike.
    pub cone: f64,
    /// Largest `|v3|` over chords, the non-horizontal part.
    pub vertical: f64,
}

impl Trajectory {
    pub fn endpoint(&self) -> Point {
        self.samples.last().map_or(Point::ORIGIN, |s| s.1)
    }

    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }

    /// Control at parameter time `s`.
    pub fn control_at(&self, s: f64) -> Control {
        match self.kind {
            TrajectoryKind::TimelikeNormal(lc) => {
                let theta = lc.psi + lc.c * s;
                Control::new(theta.cosh(), theta.sinh())
            }
            TrajectoryKind::LightlikeSingle(dir) => dir.control(),
            TrajectoryKind::LightlikeBroken { order, tau1, .. } => {
                let (first, second) = order.edges();
                if s < tau1 {
                    first.control()
                } else {
                    second.control()
                }
            }
        }
    }

    /// Piecewise-constant control law. Lightlike laws are exact; the
    /// timelike law freezes the control at the midpoint of each of `pieces`
    /// equal subintervals.
    pub fn control_law(&self, pieces: usize) -> Vec<(Control, f64)> {
        match self.kind {
            TrajectoryKind::TimelikeNormal(lc) => {
                let n = pieces.max(1);
                let h = lc.t / n as f64;
                (0..n).map(|i| (self.control_at((i as f64 + 0.5) * h), h)).collect()
            }
            TrajectoryKind::LightlikeSingle(dir) => vec![(dir.control(), self.duration())],
            TrajectoryKind::LightlikeBroken { order, tau1, tau2 } => {
                let (first, second) = order.edges();
                vec![(first.control(), tau1), (second.control(), tau2)]
            }
        }
    }

    /// Chord velocities of consecutive samples in the frame at the chord midpoint.
    pub fn dynamics_residual(&self) -> DynamicsResidual {
        let mut out = DynamicsResidual { cone: f64::NEG_INFINITY, vertical: 0.0 };
        for w in self.samples.windows(2) {
            let ((s0, p0), (s1, p1)) = (w[0], w[1]);
            let dt = s1 - s0;
            let d = [(p1.x - p0.x) / dt, (p1.y - p0.y) / dt, (p1.z - p0.z) / dt];
            let mid = Point::new(0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y), 0.5 * (p0.z + p1.z));
            let v = FrameVector::from_coordinates(mid, d);
            out.cone = out.cone.max(v.v2.abs() - v.v1);
            out.vertical = out.vertical.max(v.v3.abs());
        }
        out
    }
}

/// Class of an extremal by the value of the Hamiltonian along it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremalClass {
    /// `H = 1/2`.
    StrictlyNormal,
    /// `H = 0`.
    NonstrictlyNormal,
}

impl ExtremalClass {
    pub fn label(self) -> &'static str {
        match self {
            ExtremalClass::StrictlyNormal => "strictly-normal",
            ExtremalClass::NonstrictlyNormal => "nonstrictly-normal",
        }
    }
}

pub fn classify_extremal(traj: &Trajectory) -> ExtremalClass {
    match traj.kind {
        TrajectoryKind::TimelikeNormal(_) => ExtremalClass::StrictlyNormal,
        _ => ExtremalClass::NonstrictlyNormal,
    }
}

fn uniform_times(total: f64, n: usize) -> impl Iterator<Item = (usize, f64)> {
    let last = (n - 1) as f64;
    (0..n).map(move |i| (i, if i == n - 1 { total } else { total * i as f64 / last }))
}

fn edge(dir: Lightlike, s: f64) -> Point {
    if s == 0.0 {
        Point::ORIGIN
    } else {
        Point::new(s, dir.sign() * s, 0.0)
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadGrid(format!("need at least 2 samples, got {n}")));
    }
    Ok(())
}

fn lightlike_samples(order: BrokenOrder, tau1: f64, tau2: f64, n: usize) -> Vec<(f64, Point)> {
    let (first, second) = order.edges();
    let corner = edge(first, tau1);
    let total = tau1 + tau2;
    uniform_times(total, n)
        .map(|(i, s)| {
            let q = if i == n - 1 {
                corner * edge(second, tau2)
            } else if s <= tau1 {
                edge(first, s)
            } else {
                corner * edge(second, s - tau1)
            };
            (s, q)
        })
        .collect()
}

/// Broken lightlike curve with edges of length `tau1` then `tau2`, sampled at
/// `n` points. Degenerates to a single edge when either length is zero.
pub fn abnormal_family(tau1: f64, tau2: f64, order: BrokenOrder, n: usize) -> Result<Trajectory> {
    for t in [tau1, tau2] {
        if !(t >= 0.0) {
            return Err(Error::NegativeParameter(t));
        }
    }
    if !(tau1.is_finite() && tau2.is_finite()) {
        return Err(Error::NonFinite);
    }
    if tau1 == 0.0 && tau2 == 0.0 {
        return Err(Error::DegenerateTarget);
    }
    check_samples(n)?;
    let (first, second) = order.edges();
    if tau1 == 0.0 || tau2 == 0.0 {
        let (dir, len) = if tau2 == 0.0 { (first, tau1) } else { (second, tau2) };
        let samples = uniform_times(len, n).map(|(_, s)| (s, edge(dir, s))).collect();
        return Ok(Trajectory { samples, kind: TrajectoryKind::LightlikeSingle(dir), length: 0.0 });
    }
    Ok(Trajectory {
        samples: lightlike_samples(order, tau1, tau2, n),
        kind: TrajectoryKind::LightlikeBroken { order, tau1, tau2 },
        length: 0.0,
    })
}

/// The length maximizer from the identity to `q`, sampled at `n` points.
pub fn maximizer(q: Point, n: usize) -> Result<Trajectory> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    check_samples(n)?;
    match classify_point(q) {
        CausalMembership::Outside => Err(Error::Unreachable { x: q.x, y: q.y, z: q.z }),
        CausalMembership::Origin => Err(Error::DegenerateTarget),
        CausalMembership::Interior => {
            let lc = exp_inverse(q)?;
            let samples = uniform_times(lc.t, n)
                .map(|(i, s)| {
                    let p = if i == 0 { Point::ORIGIN } else { exp_map(ExpCoords { t: s, ..lc })? };
                    Ok((s, p))
                })
                .collect::<Result<_>>()?;
            Ok(Trajectory { samples, kind: TrajectoryKind::TimelikeNormal(lc), length: lc.t })
        }
        CausalMembership::Boundary => {
            let half_minus = (0.5 * (q.x - q.y)).max(0.0);
            let half_plus = (0.5 * (q.x + q.y)).max(0.0);
            if q.z == 0.0 {
                let dir = if q.y >= 0.0 { Lightlike::Plus } else { Lightlike::Minus };
                let samples = uniform_times(q.x, n).map(|(_, s)| (s, edge(dir, s))).collect();
                Ok(Trajectory { samples, kind: TrajectoryKind::LightlikeSingle(dir), length: 0.0 })
            } else if q.z > 0.0 {
                abnormal_family(half_minus, half_plus, BrokenOrder::MinusThenPlus, n)
            } else {
                abnormal_family(half_plus, half_minus, BrokenOrder::PlusThenMinus, n)
            }
        }
    }
}
