//! Seeded invariant suite behind `sublorentz check`.
//!
//! Every group draws its own random stream from the seed and reports the
//! worst value of its error measure against a tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sublorentz::causal::{beak_point, classify_point, Branch, CausalMembership};
use sublorentz::distance::{distance, distance_bounds};
use sublorentz::exponential::{alpha, beta, exp_inverse, exp_map, ExpCoords};
use sublorentz::group::{inverse, Control, Point};
use sublorentz::oracle::{brute_force_distance, flow_constant, integrate_constant, integrate_extremal, simulate, OracleConfig};
use sublorentz::spheres::{f_excess, f_profile, sphere_mesh};
use sublorentz::symmetry::{apply, apply_exp_coords, SymmetryElement};
use sublorentz::synthesis::maximizer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupResult {
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl GroupResult {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn rel_pt(a: Point, b: Point) -> f64 {
    a.coord_distance(&b) / b.max_abs().max(1.0)
}

/// Exp coordinates in the range where the inverse is well conditioned,
/// `|ct| + 2|psi| <= 8`.
fn conditioned_coords(rng: &mut ChaCha8Rng) -> ExpCoords {
    let psi = rng.random_range(-2.0..2.0);
    let c = rng.random_range(-2.0..2.0);
    let t = rng.random_range(0.01..2.0);
    ExpCoords { psi, c, t }
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))
}

fn random_beak(rng: &mut ChaCha8Rng) -> Point {
    let branch = if rng.random::<bool>() { Branch::Plus } else { Branch::Minus };
    beak_point(rng.random_range(0.0..4.0), rng.random_range(0.01..4.0), branch).expect("nonnegative edges")
}

struct Suite {
    seed: u64,
    scale: usize,
    results: Vec<GroupResult>,
}

impl Suite {
    fn group<F>(&mut self, name: &'static str, cases: usize, tolerance: f64, mut case: F)
    where
        F: FnMut(&mut ChaCha8Rng) -> f64,
    {
        let index = self.results.len() as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
        let cases = cases * self.scale;
        // NaN is the worst outcome, so fold it in explicitly.
        let worst =
            (0..cases).map(|_| case(&mut rng)).fold(0.0, |w: f64, e| if e.is_nan() || w.is_nan() { f64::NAN } else { w.max(e) });
        self.results.push(GroupResult { name, cases, worst, tolerance });
    }
}

fn fail() -> f64 {
    f64::INFINITY
}

pub fn run(level: Level, seed: u64) -> Vec<GroupResult> {
    let scale = match level {
        Level::Fast => 1,
        Level::Full => 10,
    };
    let mut s = Suite { seed, scale, results: Vec::new() };

    s.group("group-law", 100, 1e-12, |r| {
        let (a, b, c) = (random_point(r), random_point(r), random_point(r));
        let assoc = rel_pt((a * b) * c, a * (b * c));
        assoc.max(rel_pt(a * inverse(a), Point::ORIGIN))
    });

    s.group("causal-membership", 100, 0.0, |r| {
        let on_beak = classify_point(random_beak(r)) == CausalMembership::Boundary;
        let inside = classify_point(exp_map(conditioned_coords(r)).unwrap()) == CausalMembership::Interior;
        if on_beak && inside {
            0.0
        } else {
            1.0
        }
    });

    s.group("alpha-beta", 100, 1e-11, |r| {
        let p = r.random_range(-8.0..8.0);
        let w = r.random_range(-0.249..0.249);
        let back = beta(alpha(p)).map_or(fail(), |q| (q - p).abs());
        back.max(beta(w).map_or(fail(), |q| (alpha(q) - w).abs()))
    });

    s.group("exp-roundtrip", 100, 1e-9, |r| {
        let lc = conditioned_coords(r);
        let q = exp_map(lc).unwrap();
        match exp_inverse(q) {
            Ok(back) => {
                let coords = rel(back.psi, lc.psi).max(rel(back.c, lc.c)).max(rel(back.t, lc.t));
                coords.max(exp_map(back).map_or(fail(), |q2| rel_pt(q2, q)))
            }
            Err(_) => fail(),
        }
    });

    s.group("distance-identity", 100, 1e-9, |r| {
        let lc = conditioned_coords(r);
        distance(exp_map(lc).unwrap()).map_or(fail(), |d| (d.value - lc.t).abs() / lc.t)
    });

    s.group("distance-bounds", 100, 0.0, |r| {
        let q = if r.random::<bool>() { exp_map(conditioned_coords(r)).unwrap() } else { random_beak(r) };
        match (distance(q), distance_bounds(q)) {
            (Ok(d), Ok((lo, hi))) => {
                let slack = 1e-12 * hi.max(1.0);
                f64::from(u8::from(d.value < lo - slack || d.value > hi + slack))
            }
            _ => fail(),
        }
    });

    s.group("symmetry-invariance", 100, 1e-10, |r| {
        let q = exp_map(ExpCoords { psi: r.random_range(-1.0..1.0), ..conditioned_coords(r) }).unwrap();
        let d = distance(q).unwrap().value;
        let s = r.random_range(-3.0..3.0);
        let cases = [
            (SymmetryElement::Rotation(s), d),
            (SymmetryElement::Reflection1, d),
            (SymmetryElement::Reflection2, d),
            (SymmetryElement::Dilation(s), s.exp() * d),
        ];
        cases
            .iter()
            .map(|&(g, expect)| distance(apply(g, q)).map_or(fail(), |dg| (dg.value - expect).abs() / expect))
            .fold(0.0, f64::max)
    });

    s.group("exp-equivariance", 100, 1e-11, |r| {
        let lc = conditioned_coords(r);
        let s = r.random_range(-2.0..2.0);
        [SymmetryElement::Rotation(s), SymmetryElement::Reflection1, SymmetryElement::Reflection2, SymmetryElement::Dilation(s)]
            .iter()
            .map(|&g| rel_pt(apply(g, exp_map(lc).unwrap()), exp_map(apply_exp_coords(g, lc)).unwrap()))
            .fold(0.0, f64::max)
    });

    s.group("sphere-profile", 100, 0.0, |r| {
        let z: f64 = r.random_range(-1e3..1e3);
        let f = f_profile(z);
        let bound = z == 0.0 || (f > 4.0 * z.abs() && f < 4.0 * z.abs() + 1.0);
        let excess = [10.0, 100.0, 1000.0].map(f_excess);
        let decreasing = excess[0] > excess[1] && excess[1] > excess[2] && excess[2] > 0.0;
        if bound && decreasing && f_profile(0.0) == 1.0 {
            0.0
        } else {
            1.0
        }
    });

    s.group("zero-sphere", 1, 1e-10, |r| {
        let (y0, z0) = (r.random_range(0.5..3.0), r.random_range(0.5..3.0));
        let mesh = sphere_mesh(0.0, (-y0, y0), (-z0, z0), 41, 41).unwrap();
        mesh.vertices
            .iter()
            .map(|v| {
                let s = (v.x - v.y) * (v.x + v.y);
                (16.0 * v.z * v.z - s * s).abs() / (1.0 + v.x.powi(4))
            })
            .fold(0.0, f64::max)
    });

    s.group("sphere-distance", 1, 2e-8, |r| {
        let radius = r.random_range(0.5..2.0);
        let mesh = sphere_mesh(radius, (-2.0, 2.0), (-2.0, 2.0), 21, 21).unwrap();
        mesh.vertices
            .iter()
            .map(|v| distance(*v).map_or(fail(), |d| (d.value - radius).abs() / (1.0 + radius)))
            .fold(0.0, f64::max)
    });

    s.group("lightlike-synthesis", 100, 1e-9, |r| {
        let q = random_beak(r);
        match maximizer(q, 5) {
            Ok(tr) => {
                let (end, length) = simulate(&tr.control_law(1).into()).unwrap();
                let exact_null = if length == 0.0 && tr.length == 0.0 { 0.0 } else { fail() };
                rel_pt(tr.endpoint(), q).max(rel_pt(end, q)).max(exact_null)
            }
            Err(_) => fail(),
        }
    });

    s.group("timelike-synthesis", 100, 1e-9, |r| {
        let lc = conditioned_coords(r);
        let q = exp_map(lc).unwrap();
        match maximizer(q, 9) {
            Ok(tr) => rel_pt(tr.endpoint(), q).max(rel(tr.length, distance(q).unwrap().value)),
            Err(_) => fail(),
        }
    });

    s.group("flow-exact", 20, 1e-12, |r| {
        let q = random_point(r);
        let u1 = r.random_range(0.0..2.0);
        let u = Control::new(u1, u1 * r.random_range(-1.0..1.0));
        let dt = r.random_range(0.0..3.0);
        let exact = flow_constant(q, u, dt).unwrap();
        integrate_constant(q, u, dt, 1e-14).map_or(fail(), |n| rel_pt(n, exact))
    });

    s.group("hamiltonian-endpoint", 10, 1e-8, |r| {
        let (psi, c, t) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(0.01..3.0));
        let q = exp_map(ExpCoords { psi, c, t }).unwrap();
        integrate_extremal(psi, c, t, 1e-13).map_or(fail(), |run| run.endpoint.coord_distance(&q))
    });

    s.group("hamiltonian-drift", 10, 1e-9, |r| {
        let (psi, c, t) = (r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(0.01..3.0));
        integrate_extremal(psi, c, t, 1e-13).map_or(fail(), |run| run.drift)
    });

    if level == Level::Full {
        let mut targets = Vec::new();
        s.scale = 1;
        s.group("oracle-never-exceeds", 50, 1e-6, |r| {
            let lc = ExpCoords { psi: r.random_range(-1.0..1.0), c: r.random_range(-2.0..2.0), t: r.random_range(0.2..3.0) };
            let q = exp_map(lc).unwrap();
            let cfg = OracleConfig { seed: r.random(), ..OracleConfig::default() };
            match brute_force_distance(q, &cfg) {
                Ok(best) => {
                    let d = distance(q).unwrap().value;
                    targets.push(best.length / d);
                    best.length - d
                }
                Err(_) => fail(),
            }
        });
        let mut ratios = targets.into_iter();
        s.group("oracle-reaches", 50, 0.02, |_| ratios.next().map_or(fail(), |ratio| 1.0 - ratio));
    }
    s.results
}
