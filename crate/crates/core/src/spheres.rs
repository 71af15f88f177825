//! Spheres `S(R) = {d = R}` around the identity.
//!
//! For `R > 0` the sphere is the graph `x = sqrt(y^2 + R^2 f(z / R^2))` with
//! profile `f = e ∘ k`, `k = b / 2`, where `b` inverts
//! `a(c) = (sinh c - c) / (2c^2)` and `e(w) = sinh^2 w / w^2`. The zero
//! sphere `S(0)` is the beak `x = sqrt(y^2 + 4|z|)`.

use rayon::prelude::*;

use crate::causal::beak_height;
use crate::error::{Error, Result};
use crate::hyperbolic::{newton_bracketed, sinh_minus_id, sinh_minus_id_over_sq};

/// `a(c) = (sinh c - c) / (2c^2)`, an odd increasing diffeomorphism of `R`.
pub fn a(c: f64) -> f64 {
    0.5 * sinh_minus_id_over_sq(c)
}

/// Derivative of [`a`].
pub fn a_prime(c: f64) -> f64 {
    let ac = c.abs();
    if ac < 1.0 {
        // sum over k >= 1 of (2k - 1) c^(2k-2) / (2 (2k+1)!)
        let c2 = c * c;
        let mut fact = 6.0;
        let mut pow = 1.0;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let term = (2.0 * k - 1.0) * pow / (2.0 * fact);
            sum += term;
            if term < f64::EPSILON * 0.25 * sum {
                return sum;
            }
            pow *= c2;
            fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
            k += 1.0;
        }
    }
    (ac * (ac.cosh() - 1.0) - 2.0 * sinh_minus_id(ac)) / (2.0 * ac * ac * ac)
}

/// `ln a(c)` and its derivative for `c >= 1`, free of overflow.
fn log_a(c: f64) -> (f64, f64) {
    let e1 = (-c).exp();
    let e2 = e1 * e1;
    let value = c - 2.0 * std::f64::consts::LN_2 - 2.0 * c.ln() + (-e2 - 2.0 * c * e1).ln_1p();
    let ratio = (1.0 + e2 - 2.0 * e1) / (1.0 - e2 - 2.0 * c * e1);
    (value, ratio - 2.0 / c)
}

/// Inverse of [`a`].
pub fn b(z: f64) -> f64 {
    let az = z.abs();
    let c = if az == 0.0 || az.is_nan() {
        return z;
    } else if az < 1e-5 {
        az * (12.0 - 86.4 * az * az)
    } else if az <= 1.0 {
        // a(c) >= c / 12 puts the root below 12|z|.
        newton_bracketed(|c| (a(c) - az, a_prime(c)), 0.0, 12.0 * az, az * (12.0 - 86.4 * az * az))
    } else {
        let target = az.ln();
        let mut hi = 8.0;
        while log_a(hi).0 < target {
            hi *= 2.0;
        }
        newton_bracketed(
            |c| {
                let (v, dv) = log_a(c);
                (v - target, dv)
            },
            1.0,
            hi,
            target + 2.0 * std::f64::consts::LN_2 + 2.0 * (target + 3.0).ln(),
        )
    };
    c.copysign(z)
}

/// `k(z) = b(z) / 2`.
pub fn k(z: f64) -> f64 {
    0.5 * b(z)
}

/// `e(w) = sinh^2 w / w^2`, with `e(0) = 1`.
pub fn e(w: f64) -> f64 {
    if w.abs() < 1e-3 {
        let w2 = w * w;
        1.0 + w2 * (1.0 / 3.0 + w2 * (2.0 / 45.0 + w2 / 315.0))
    } else {
        let s = w.sinh() / w;
        s * s
    }
}

/// `g(c) = 2(c - 1 + e^{-c}) / c^2 = e(c/2) - 4a(c)` for `c >= 0`.
fn g(c: f64) -> f64 {
    if c < 0.5 {
        // sum over k >= 0 of 2 (-c)^k / (k+2)!
        let mut term = 1.0f64;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term.abs() > f64::EPSILON * 0.25 {
            term *= -c / (k + 3.0);
            sum += term;
            k += 1.0;
        }
        sum
    } else {
        2.0 * (c + (-c).exp_m1()) / (c * c)
    }
}

/// Sphere profile `f(z) = e(k(z))`: even, `f(0) = 1`, `4|z| < f(z) < 4|z| + 1`.
pub fn f_profile(z: f64) -> f64 {
    let az = z.abs();
    if az < 1.0 {
        e(k(az))
    } else {
        4.0 * az + f_excess(az)
    }
}

/// `f(z) - 4|z|`, evaluated without cancellation for large `|z|`.
pub fn f_excess(z: f64) -> f64 {
    let az = z.abs();
    if az < 1.0 {
        f_profile(az) - 4.0 * az
    } else {
        g(b(az))
    }
}

/// Nonnegative `z` with `f(z) = 1 + m`.
fn f_inverse_excess(m: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    // f(z) = (sinh w / w)^2 with z = a(2w): solve ln(sinh w / w) = ln(1 + m) / 2.
    let target = 0.5 * m.ln_1p();
    let eval = |w: f64| {
        let v = (sinh_minus_id(w) / w).ln_1p();
        let dv = if w < 1e-2 { w / 3.0 - w * w * w / 45.0 } else { 1.0 / w.tanh() - 1.0 / w };
        (v - target, dv)
    };
    let mut hi = 1.0;
    while eval(hi).0 < 0.0 {
        hi *= 2.0;
    }
    let w = newton_bracketed(eval, 0.0, hi, (6.0 * m).sqrt().min(hi));
    a(2.0 * w)
}

/// Nonnegative preimage of `v >= 1` under [`f_profile`].
pub fn f_inverse(v: f64) -> Result<f64> {
    if !(v >= 1.0) || v.is_infinite() {
        return Err(Error::OutOfDomain(v));
    }
    Ok(f_inverse_excess(v - 1.0))
}

/// The `x` coordinate of `S(R)` above `(y, z)`; `R` must be nonnegative.
pub fn sphere_x(y: f64, z: f64, radius: f64) -> f64 {
    if radius == 0.0 {
        beak_height(y, z)
    } else {
        let r2 = radius * radius;
        y.mul_add(y, r2 * f_profile(z / r2)).sqrt()
    }
}

/// `|sphere_x(y, z, r1) - sphere_x(y, z, r2)|`.
pub fn sphere_gap(r1: f64, r2: f64, y: f64, z: f64) -> f64 {
    (sphere_x(y, z, r1) - sphere_x(y, z, r2)).abs()
}

/// Vertices of `S(R)` over a rectangular `(y, z)` grid.
///
/// Vertex `(iy, iz)` is stored at `iz * ny + iy`; each quad lists its corners
/// counterclockwise in the `(y, z)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMesh {
    pub radius: f64,
    pub ny: usize,
    pub nz: usize,
    pub vertices: Vec<crate::group::Point>,
    pub quads: Vec<[usize; 4]>,
}

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::BadGrid(format!("{name} range [{lo}, {hi}] must be finite and increasing")))
    }
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

pub fn sphere_mesh(radius: f64, y_range: (f64, f64), z_range: (f64, f64), ny: usize, nz: usize) -> Result<SphereMesh> {
    if !(radius >= 0.0) || radius.is_infinite() {
        return Err(Error::BadGrid(format!("radius {radius} must be finite and nonnegative")));
    }
    check_range("y", y_range)?;
    check_range("z", z_range)?;
    if ny < 2 || nz < 2 {
        return Err(Error::BadGrid(format!("grid {ny}x{nz} needs at least 2 points per side")));
    }
    let vertices = (0..nz)
        .into_par_iter()
        .flat_map_iter(|iz| {
            let z = linspace(z_range.0, z_range.1, nz, iz);
            (0..ny).map(move |iy| {
                let y = linspace(y_range.0, y_range.1, ny, iy);
                crate::group::Point::new(sphere_x(y, z, radius), y, z)
            })
        })
        .collect();
    let quads =
        (0..nz - 1).flat_map(|iz| (0..ny - 1).map(move |iy| iz * ny + iy)).map(|v| [v, v + 1, v + 1 + ny, v + ny]).collect();
    Ok(SphereMesh { radius, ny, nz, vertices, quads })
}

/// Cutting plane for [`sphere_section`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectionPlane {
    /// `z = const`
    Z(f64),
    /// `x = const`
    X(f64),
    /// `y = k x`
    YKx(f64),
}

/// Intersection of `S(R)` with a plane, as polylines of `n` samples each.
///
/// `extent` bounds the free coordinate of unbounded curves: `|y|` for
/// `z`-planes and `x` for the planes `y = kx`. The closed `x`-sections ignore it.
pub fn sphere_section(radius: f64, plane: SectionPlane, n: usize, extent: f64) -> Result<Vec<Vec<crate::group::Point>>> {
    use crate::group::Point;
    if !(radius >= 0.0) || radius.is_infinite() {
        return Err(Error::BadGrid(format!("radius {radius} must be finite and nonnegative")));
    }
    if n < 2 {
        return Err(Error::BadGrid(format!("need at least 2 samples, got {n}")));
    }
    if !(extent > 0.0) || extent.is_infinite() {
        return Err(Error::BadGrid(format!("extent {extent} must be finite and positive")));
    }
    let r2 = radius * radius;
    match plane {
        SectionPlane::Z(z) => {
            let branch = (0..n)
                .map(|i| {
                    let y = linspace(-extent, extent, n, i);
                    Point::new(sphere_x(y, z, radius), y, z)
                })
                .collect();
            Ok(vec![branch])
        }
        SectionPlane::X(x) => {
            if !(x >= radius) {
                return Err(Error::EmptySection);
            }
            if x == radius {
                return Ok(vec![vec![Point::new(x, 0.0, 0.0)]]);
            }
            // y = Y cos(theta); then x^2 - y^2 - R^2 = Y^2 sin^2(theta).
            let half_width = ((x - radius) * (x + radius)).sqrt();
            let branch = (0..n)
                .map(|i| {
                    let theta = std::f64::consts::TAU * i as f64 / (n - 1) as f64;
                    let (s, c) = theta.sin_cos();
                    let lift = half_width * half_width * s * s;
                    let height = if radius == 0.0 { 0.25 * lift } else { r2 * f_inverse_excess(lift / r2) };
                    Point::new(x, half_width * c, height.copysign(s))
                })
                .collect();
            Ok(vec![branch])
        }
        SectionPlane::YKx(slope) => {
            let squeeze = (1.0 - slope) * (1.0 + slope);
            if !(squeeze >= 0.0) || (squeeze == 0.0 && radius > 0.0) {
                return Err(Error::EmptySection);
            }
            let x_min = if radius == 0.0 { 0.0 } else { radius / squeeze.sqrt() };
            if extent < x_min {
                return Err(Error::EmptySection);
            }
            let sheet = |sign: f64| -> Vec<Point> {
                (0..n)
                    .map(|i| {
                        let x = linspace(x_min, extent, n, i);
                        let height = if radius == 0.0 {
                            0.25 * squeeze * x * x
                        } else {
                            let m = ((squeeze.sqrt() * x - radius) * (squeeze.sqrt() * x + radius) / r2).max(0.0);
                            r2 * f_inverse_excess(m)
                        };
                        Point::new(x, slope * x, sign * height)
                    })
                    .collect()
            };
            if squeeze == 0.0 {
                Ok(vec![sheet(1.0)])
            } else {
                Ok(vec![sheet(1.0), sheet(-1.0)])
            }
        }
    }
}

/// `∫∫ (sphere_x(y, z, 1) - sphere_x(y, z, 0)) dy dz` over `[-L, L]^2` by the
/// midpoint rule on an `n x n` grid. Grows without bound in `L`.
pub fn ball_excess_integral(half_width: f64, n: usize) -> f64 {
    let h = 2.0 * half_width / n as f64;
    let row = |i: usize| {
        let z = -half_width + (i as f64 + 0.5) * h;
        let excess = f_excess(z);
        (0..n)
            .map(|j| {
                let y = -half_width + (j as f64 + 0.5) * h;
                excess / (sphere_x(y, z, 1.0) + sphere_x(y, z, 0.0))
            })
            .sum::<f64>()
    };
    (0..n).into_par_iter().map(row).collect::<Vec<_>>().iter().sum::<f64>() * h * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{classify_point, CausalMembership};
    use crate::distance::distance;
    use crate::exponential::{exp_map, Covector, ExpCoords};
    use crate::group::{FrameVector, Point};
    use proptest::prelude::*;

    #[test]
    fn a_and_b_near_zero() {
        assert_eq!(a(0.0), 0.0);
        assert_eq!(b(0.0), 0.0);
        assert!((a(1e-6) / (1e-6 / 12.0) - 1.0).abs() < 1e-13);
        assert!((b(1e-7) - 1.2e-6).abs() < 1e-18);
        assert!((a_prime(0.0) - 1.0 / 12.0).abs() < 1e-17);
    }

    #[test]
    fn a_prime_matches_finite_difference() {
        for &c in &[0.2, 0.9, 1.0, 1.1, 3.0, 15.0] {
            let h = 1e-6 * c;
            let fd = (a(c + h) - a(c - h)) / (2.0 * h);
            assert!((a_prime(c) - fd).abs() <= 1e-8 * a_prime(c), "{c}");
        }
    }

    #[test]
    fn b_inverts_a() {
        for i in -200..=200 {
            let c = i as f64 * 0.25;
            let back = b(a(c));
            assert!((back - c).abs() <= 1e-11 * c.abs().max(1.0), "{c}: {back}");
        }
        for &z in &[1e-9, 1e-5, 0.3, 0.999, 1.0, 1.001, 7.5, 1e3, 1e8, 1e100] {
            assert!((a(b(z)) - z).abs() <= 1e-11 * z, "{z}");
            assert_eq!(b(-z), -b(z));
        }
    }

    #[test]
    fn e_and_g_match_direct_forms() {
        assert_eq!(e(0.0), 1.0);
        for &w in &[1e-3, 0.5, 2.0] {
            assert!((e(w) - (w.sinh() / w).powi(2)).abs() < 1e-15 * e(w));
        }
        assert!((e(9e-4) - (9e-4f64.sinh() / 9e-4).powi(2)).abs() < 1e-15);
        for &c in &[0.49, 0.5, 1.0, 3.0] {
            assert!((g(c) - (e(0.5 * c) - 4.0 * a(c))).abs() < 1e-13, "{c}");
        }
        assert!((g(0.4999999) - g(0.5)).abs() < 1e-6);
    }

    #[test]
    fn profile_examples() {
        assert_eq!(f_profile(0.0), 1.0);
        let v = f_profile(5.0);
        assert!(v > 20.0 && v < 21.0);
        let excess: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&z| f_excess(z)).collect();
        assert!(excess[0] > excess[1] && excess[1] > excess[2] && excess[2] > 0.0, "{excess:?}");
        assert!((f_profile(0.999_999) - f_profile(1.000_001)).abs() < 1e-5);
    }

    #[test]
    fn profile_taylor_and_shape() {
        for i in 1..=100 {
            let z = 1e-3 * i as f64;
            let r = (f_profile(z) - 1.0 - 12.0 * z * z) / z.powi(4);
            assert!(r.abs() < 120.0, "{z}: {r}");
            if z <= 0.01 {
                assert!((r + 115.2).abs() < 1.0, "{z}: {r}");
            }
        }
        let h = 1e-3;
        for i in 1..=1000 {
            let z = 0.1 * i as f64;
            assert_eq!(f_profile(-z), f_profile(z));
            let (lo, mid, hi) = (f_profile(z - h), f_profile(z), f_profile(z + h));
            assert!(hi > lo);
            assert!(hi - 2.0 * mid + lo > 0.0, "{z}");
            assert!(mid > 4.0 * z && mid < 4.0 * z + 1.0);
        }
    }

    #[test]
    fn f_inverse_roundtrip() {
        assert_eq!(f_inverse(1.0), Ok(0.0));
        assert!(f_inverse(0.5).is_err());
        for &z in &[1e-6, 1e-3, 0.2, 1.0, 4.0, 300.0] {
            let back = f_inverse(f_profile(z)).unwrap();
            assert!((back - z).abs() <= 1e-7 * z.max(1e-3), "{z}: {back}");
        }
    }

    #[test]
    fn sphere_x_examples() {
        assert_eq!(sphere_x(0.0, 0.0, 1.0), 1.0);
        assert_eq!(sphere_x(0.0, 0.0, 2.0), 2.0);
        let x = sphere_x(0.0, 1.0, 1.0);
        assert!(x > 2.0 && x < 5f64.sqrt());
        assert_eq!(sphere_x(3.0, 4.0, 0.0), 5.0);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(sphere_gap(1.0, 0.0, 0.0, 0.0), 1.0);
        assert_eq!(sphere_gap(1.3, 1.3, 0.4, -2.0), 0.0);
        let gaps: Vec<f64> = [1e1, 1e2, 1e3, 1e4].iter().map(|&z| sphere_gap(1.0, 0.0, 0.0, z)).collect();
        for (g, z) in gaps.iter().zip([1e1, 1e2, 1e3, 1e4f64]) {
            assert!(*g < 0.5 / z.sqrt());
        }
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn mesh_layout() {
        let m = sphere_mesh(1.0, (-1.0, 1.0), (-1.0, 1.0), 3, 3).unwrap();
        assert_eq!(m.vertices.len(), 9);
        assert_eq!(m.vertices[4], Point::new(1.0, 0.0, 0.0));
        assert_eq!(m.quads.len(), 4);
        assert_eq!(m.quads[0], [0, 1, 4, 3]);
        assert!(matches!(sphere_mesh(1.0, (1.0, -1.0), (0.0, 1.0), 3, 3), Err(Error::BadGrid(_))));
        assert!(matches!(sphere_mesh(1.0, (-1.0, 1.0), (0.0, 1.0), 1, 3), Err(Error::BadGrid(_))));
    }

    #[test]
    fn mesh_vertices_at_distance_radius() {
        for &r in &[0.5, 1.0, 3.0] {
            let m = sphere_mesh(r, (-2.0, 2.0), (-2.0, 2.0), 21, 21).unwrap();
            for v in &m.vertices {
                let d = distance(*v).unwrap().value;
                assert!((d - r).abs() <= 1e-8 * (1.0 + r), "{v:?}: {d}");
            }
        }
    }

    #[test]
    fn zero_sphere_algebra() {
        let m = sphere_mesh(0.0, (-3.0, 3.0), (-2.0, 2.0), 31, 41).unwrap();
        for v in &m.vertices {
            let lhs = (v.x - v.y) * (v.x + v.y);
            assert!((16.0 * v.z * v.z - lhs * lhs).abs() <= 1e-10 * (1.0 + v.x.powi(4)));
            assert!(matches!(classify_point(*v), CausalMembership::Boundary | CausalMembership::Origin));
        }
    }

    #[test]
    fn section_examples() {
        let s = sphere_section(1.0, SectionPlane::Z(0.0), 21, 3.0).unwrap();
        for p in &s[0] {
            assert!(((p.x - p.y) * (p.x + p.y) - 1.0).abs() < 1e-14);
        }
        let s = sphere_section(0.0, SectionPlane::YKx(0.0), 21, 2.0).unwrap();
        assert_eq!(s.len(), 2);
        for p in s.iter().flatten() {
            assert!((4.0 * p.z.abs() - p.x * p.x).abs() < 1e-14);
        }
        assert_eq!(sphere_section(1.0, SectionPlane::X(0.5), 21, 1.0), Err(Error::EmptySection));
        assert_eq!(sphere_section(1.0, SectionPlane::YKx(1.5), 21, 1.0), Err(Error::EmptySection));
        assert_eq!(sphere_section(0.0, SectionPlane::YKx(-1.0), 5, 1.0).unwrap().len(), 1);
    }

    #[test]
    fn x_section_closed_curve_on_sphere() {
        for &r in &[0.0, 1.0] {
            let s = sphere_section(r, SectionPlane::X(2.0), 65, 1.0).unwrap();
            let curve = &s[0];
            assert!(curve[0].coord_distance(curve.last().unwrap()) < 1e-12);
            for p in curve {
                assert!((sphere_x(p.y, p.z, r) - 2.0).abs() < 1e-9, "{p:?}");
            }
        }
    }

    #[test]
    fn ykx_section_on_sphere() {
        let s = sphere_section(1.0, SectionPlane::YKx(0.4), 33, 4.0).unwrap();
        for p in s.iter().flatten() {
            assert!((sphere_x(p.y, p.z, 1.0) - p.x).abs() < 1e-9 * p.x, "{p:?}");
            assert_eq!(p.y, 0.4 * p.x);
        }
    }

    #[test]
    fn ball_excess_grows() {
        let v: Vec<f64> = [2.0, 8.0, 32.0].iter().map(|&l| ball_excess_integral(l, 200)).collect();
        assert!(v[0] > 0.0 && v[1] > v[0] && v[2] > v[1], "{v:?}");
    }

    // The covector at the endpoint of Exp(psi, c, 1) annihilates T_q S(1).
    #[test]
    fn tangent_plane_annihilated_by_endpoint_covector() {
        for &(psi, c) in &[(0.0, 0.0), (0.3, 1.2), (-0.8, -2.0), (1.1, 0.4)] {
            let lc = ExpCoords::new(psi, c, 1.0).unwrap();
            let q = exp_map(lc).unwrap();
            let h = Covector::at_endpoint(&lc);
            let mut prev = f64::INFINITY;
            for &step in &[1e-2, 1e-3, 1e-4] {
                let mut worst = 0.0f64;
                for dir in [[1.0, 0.0], [0.0, 1.0]] {
                    let (y1, z1) = (q.y + step * dir[0], q.z + step * dir[1]);
                    let (y0, z0) = (q.y - step * dir[0], q.z - step * dir[1]);
                    let d = [(sphere_x(y1, z1, 1.0) - sphere_x(y0, z0, 1.0)) / (2.0 * step), dir[0], dir[1]];
                    let v = FrameVector::from_coordinates(q, d);
                    let pairing = h.h1 * v.v1 + h.h2 * v.v2 + h.h3 * v.v3;
                    worst = worst.max(pairing.abs());
                }
                assert!(worst < 10.0 * step, "{psi} {c}: {worst}");
                assert!(worst <= prev);
                prev = worst;
            }
        }
    }

    proptest! {
        #[test]
        fn profile_bound(z in -1e4..1e4f64) {
            prop_assume!(z != 0.0);
            let v = f_profile(z);
            prop_assert!(v > 4.0 * z.abs() && v < 4.0 * z.abs() + 1.0);
        }
    }
}
