//! Independent checks: exact flows of piecewise-constant controls, adaptive
//! integration of the dynamics and of the Hamiltonian system, and a
//! brute-force search for long curves to a fixed endpoint.
//!
//! The search normalizes `u1 = 1`, so a schedule is a list of durations
//! `h_i` summing to `x` and slopes `u_i in [-1, 1]`. For fixed durations the
//! endpoint is linear in the slopes,
//!
//! ```text
//! y = sum h_i u_i,   z = sum h_i m_i u_i,   m_i = (midpoint time of piece i) - x/2,
//! ```
//!
//! and the length `sum h_i sqrt(1 - u_i^2)` is concave, so the slopes are
//! found by Newton's method on the two-variable dual. Durations are then
//! improved by a multi-start coordinate search.

use ode_solvers::{Dop853, OutputType, System, Vector3, Vector6};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::causal::{classify_point, CausalMembership};
use crate::error::{Error, Result};
use crate::exponential::{hamiltonian_rhs, Covector};
use crate::group::{frame_at, Control, Point};
use crate::synthesis::maximizer;

/// Piecewise-constant control: `(control, duration)` pieces applied in order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlSchedule {
    pub pieces: Vec<(Control, f64)>,
}

impl ControlSchedule {
    pub fn new(pieces: Vec<(Control, f64)>) -> Self {
        ControlSchedule { pieces }
    }

    pub fn duration(&self) -> f64 {
        self.pieces.iter().map(|p| p.1).sum()
    }
}

impl From<Vec<(Control, f64)>> for ControlSchedule {
    fn from(pieces: Vec<(Control, f64)>) -> Self {
        ControlSchedule { pieces }
    }
}

/// Exact solution of `q' = u1 X1(q) + u2 X2(q)` after time `dt`, which is the
/// right translation `q · (u1 dt, u2 dt, 0)`.
pub fn flow_constant(q: Point, u: Control, dt: f64) -> Result<Point> {
    u.check_admissible()?;
    if !(dt >= 0.0) {
        return Err(Error::NegativeParameter(dt));
    }
    Ok(q * Point::new(u.u1 * dt, u.u2 * dt, 0.0))
}

/// Endpoint and length of the curve from the identity driven by `schedule`.
pub fn simulate(schedule: &ControlSchedule) -> Result<(Point, f64)> {
    schedule
        .pieces
        .iter()
        .try_fold((Point::ORIGIN, 0.0), |(q, len), &(u, dt)| Ok((flow_constant(q, u, dt)?, len + dt * u.speed())))
}

struct ConstantField(Control);

impl System<f64, Vector3<f64>> for ConstantField {
    fn system(&self, _t: f64, y: &Vector3<f64>, dy: &mut Vector3<f64>) {
        let [x1, x2, _] = frame_at(Point::new(y[0], y[1], y[2]));
        for i in 0..3 {
            dy[i] = self.0.u1 * x1[i] + self.0.u2 * x2[i];
        }
    }
}

fn integration_error(e: impl std::fmt::Display) -> Error {
    Error::Integration(e.to_string())
}

/// [`flow_constant`] by adaptive Dormand–Prince 8(5,3) integration.
pub fn integrate_constant(q: Point, u: Control, dt: f64, tol: f64) -> Result<Point> {
    u.check_admissible()?;
    if dt == 0.0 {
        return Ok(q);
    }
    let mut solver = Dop853::new(ConstantField(u), 0.0, dt, dt, Vector3::new(q.x, q.y, q.z), tol, tol);
    solver.set_output(OutputType::Sparse);
    solver.integrate().map_err(integration_error)?;
    let y = solver.y_out().last().ok_or(Error::NonFinite)?;
    Ok(Point::new(y[0], y[1], y[2]))
}

struct Extremal;

impl System<f64, Vector6<f64>> for Extremal {
    fn system(&self, _t: f64, y: &Vector6<f64>, dy: &mut Vector6<f64>) {
        let d = hamiltonian_rhs(Covector::new(y[0], y[1], y[2]), Point::new(y[3], y[4], y[5]));
        dy[0] = d.dh.h1;
        dy[1] = d.dh.h2;
        dy[2] = d.dh.h3;
        dy[3] = d.dq[0];
        dy[4] = d.dq[1];
        dy[5] = d.dq[2];
    }
}

/// Result of integrating the Hamiltonian system from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalIntegration {
    pub endpoint: Point,
    pub covector: Covector,
    /// Largest `|h1^2 - h2^2 - 1|` over the accepted steps.
    pub drift: f64,
}

/// Integrates the normal extremal with initial momentum
/// `(-cosh psi, sinh psi, c)` over `[0, t]`.
pub fn integrate_extremal(psi: f64, c: f64, t: f64, tol: f64) -> Result<ExtremalIntegration> {
    if !(t > 0.0) {
        return Err(Error::NonpositiveTime(t));
    }
    let h0 = Covector::on_unit_level(psi, c);
    let y0 = Vector6::new(h0.h1, h0.h2, h0.h3, 0.0, 0.0, 0.0);
    let mut solver = Dop853::new(Extremal, 0.0, t, t, y0, tol, tol);
    solver.set_output(OutputType::Sparse);
    solver.integrate().map_err(integration_error)?;
    let drift = solver.y_out().iter().map(|y| ((y[0] - y[1]) * (y[0] + y[1]) - 1.0).abs()).fold(0.0, f64::max);
    let y = solver.y_out().last().ok_or(Error::NonFinite)?;
    Ok(ExtremalIntegration { endpoint: Point::new(y[3], y[4], y[5]), covector: Covector::new(y[0], y[1], y[2]), drift })
}

/// Settings of [`brute_force_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub pieces: usize,
    /// Sweeps of the duration search per start.
    pub iters: usize,
    /// Endpoint tolerance.
    pub tol: f64,
    /// Starts with random durations, in addition to uniform durations and
    /// the synthesis control law.
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { pieces: 32, iters: 20, tol: 1e-9, random_starts: 4, seed: 0 }
    }
}

/// Best schedule found by [`brute_force_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub length: f64,
    /// Distance from the simulated endpoint to the target.
    pub residual: f64,
    /// Sensitivity of the best length to the endpoint, `1 + |lambda| + |mu|`
    /// from the dual solution; an endpoint miss of `r` changes the length by
    /// about `allowance * r`.
    pub allowance: f64,
    pub schedule: ControlSchedule,
}

/// Optimal slopes for fixed durations.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSolution {
    pub slopes: Vec<f64>,
    pub length: f64,
    pub residual: f64,
    pub multipliers: (f64, f64),
}

/// Maximizes `sum h_i sqrt(1 - u_i^2)` subject to reaching `q` with durations
/// `h` (which must sum to `q.x`) and `u1 = 1`.
pub fn best_slopes(q: Point, durations: &[f64]) -> SlopeSolution {
    let x: f64 = durations.iter().sum();
    let mut mids = Vec::with_capacity(durations.len());
    let mut elapsed = 0.0;
    for &h in durations {
        mids.push(elapsed + 0.5 * h - 0.5 * x);
        elapsed += h;
    }
    let slopes_for = |lam: f64, mu: f64| -> Vec<f64> {
        mids.iter()
            .map(|&m| {
                let a = lam + mu * m;
                -a / a.mul_add(a, 1.0).sqrt()
            })
            .collect()
    };
    // Dual objective D(lam, mu) = sum h sqrt(1 + a^2) + lam y + mu z.
    let dual = |lam: f64, mu: f64| -> f64 {
        let s: f64 = durations
            .iter()
            .zip(&mids)
            .map(|(&h, &m)| {
                let a = lam + mu * m;
                h * a.mul_add(a, 1.0).sqrt()
            })
            .sum();
        s + lam * q.y + mu * q.z
    };
    // Gradient (endpoint miss) and Hessian of the dual.
    let derivatives = |lam: f64, mu: f64| {
        let (mut g0, mut g1) = (q.y, q.z);
        let (mut h00, mut h01, mut h11) = (0.0, 0.0, 0.0);
        for (&h, &m) in durations.iter().zip(&mids) {
            let a = lam + mu * m;
            let r = a.mul_add(a, 1.0);
            let u = -a / r.sqrt();
            g0 -= h * u;
            g1 -= h * m * u;
            let w = h / (r * r.sqrt());
            h00 += w;
            h01 += w * m;
            h11 += w * m * m;
        }
        ((g0, g1), (h00, h01, h11))
    };
    let norm = |(g0, g1): (f64, f64)| g0.hypot(g1);
    let target = 1e-15 * q.max_abs().max(1.0);
    let (mut lam, mut mu) = (0.0, 0.0);
    for _ in 0..200 {
        let ((g0, g1), (h00, h01, h11)) = derivatives(lam, mu);
        let gnorm = norm((g0, g1));

        if gnorm <= target {
            break;
        }
        let reg = 1e-14 * (h00 + h11);
        let (h00, h11) = (h00 + reg, h11 + reg);
        let det = h00 * h11 - h01 * h01;
        let (d0, d1) = if det > 0.0 { ((h11 * g0 - h01 * g1) / det, (h00 * g1 - h01 * g0) / det) } else { (g0 / h00, 0.0) };
        let current = dual(lam, mu);
        let slope = g0 * d0 + g1 * d1;
        let next = if slope <= 1e3 * f64::EPSILON * current.abs() {
            // The decrease of the dual is below its rounding; accept the full
            // Newton step while it still shrinks the gradient.
            let (nl, nm) = (lam - d0, mu - d1);
            (norm(derivatives(nl, nm).0) < 0.5 * gnorm).then_some((nl, nm))
        } else {
            let mut step = 1.0;
            loop {
                let (nl, nm) = (lam - step * d0, mu - step * d1);
                if dual(nl, nm) < current - 1e-4 * step * slope {
                    break Some((nl, nm));
                }
                step *= 0.5;
                if step < 1e-12 {
                    break None;
                }
            }
        };
        match next {
            Some((nl, nm)) => (lam, mu) = (nl, nm),
            None => break,
        }
    }
    let slopes = slopes_for(lam, mu);
    let schedule = schedule_from(durations, &slopes);
    let (end, length) = simulate(&schedule).unwrap_or((Point::new(f64::NAN, f64::NAN, f64::NAN), 0.0));
    let residual = end.coord_distance(&q);
    SlopeSolution { slopes, length, residual: if residual.is_nan() { f64::INFINITY } else { residual }, multipliers: (lam, mu) }
}

fn schedule_from(durations: &[f64], slopes: &[f64]) -> ControlSchedule {
    durations.iter().zip(slopes).map(|(&h, &u)| (Control::new(1.0, u.clamp(-1.0, 1.0)), h)).collect::<Vec<_>>().into()
}

fn softmax_durations(weights: &[f64], total: f64) -> Vec<f64> {
    let top = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = weights.iter().map(|w| (w - top).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| total * v / s).collect()
}

#[derive(Debug, Clone)]
struct Candidate {
    length: f64,
    residual: f64,
    multipliers: (f64, f64),
    schedule: ControlSchedule,
}

fn score(c: &SlopeSolution, tol: f64) -> f64 {
    if c.residual <= tol {
        c.length
    } else {
        -c.residual
    }
}

fn search_durations(q: Point, mut weights: Vec<f64>, cfg: &OracleConfig) -> Candidate {
    let solve = |w: &[f64]| {
        let h = softmax_durations(w, q.x);
        let s = best_slopes(q, &h);
        (h, s)
    };
    let (mut h, mut best) = solve(&weights);
    let mut best_score = score(&best, cfg.tol);
    let mut step = 0.5;
    for _ in 0..cfg.iters {
        let mut improved = false;
        for i in 0..weights.len() {
            for dir in [1.0, -1.0] {
                let mut trial = weights.clone();
                trial[i] += dir * step;
                let (th, ts) = solve(&trial);
                let s = score(&ts, cfg.tol);
                if s > best_score {
                    weights = trial;
                    h = th;
                    best = ts;
                    best_score = s;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-4 {
                break;
            }
        }
    }
    Candidate {
        length: best.length,
        residual: best.residual,
        multipliers: best.multipliers,
        schedule: schedule_from(&h, &best.slopes),
    }
}

/// Longest curve found from the identity to within `cfg.tol` of `q`.
///
/// The result never exceeds the true maximal length of curves reaching the
/// `tol`-ball, so it is a lower estimate of the distance up to
/// `allowance * tol`.
pub fn brute_force_distance(q: Point, cfg: &OracleConfig) -> Result<OracleResult> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    match classify_point(q) {
        CausalMembership::Outside => return Err(Error::Unreachable { x: q.x, y: q.y, z: q.z }),
        CausalMembership::Origin => return Err(Error::DegenerateTarget),
        _ => {}
    }
    if cfg.pieces == 0 {
        return Err(Error::BadGrid("need at least one piece".into()));
    }
    let n = cfg.pieces;
    let mut starts = vec![vec![0.0; n]];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_starts {
        // Logs of exponential variates, so the softmax durations are uniform on the simplex.
        starts.push((0..n).map(|_| (-(1.0 - rng.random::<f64>()).ln()).ln()).collect());
    }
    let mut candidates: Vec<Candidate> = starts.into_par_iter().map(|w| search_durations(q, w, cfg)).collect();

    // The synthesis law itself, reparametrized to u1 = 1.
    let law = maximizer(q, 2)?.control_law(n);
    let seed_schedule: ControlSchedule =
        law.iter().map(|&(u, dt)| (Control::new(1.0, u.u2 / u.u1), dt * u.u1)).collect::<Vec<_>>().into();
    let (end, length) = simulate(&seed_schedule)?;
    candidates.push(Candidate { length, residual: end.coord_distance(&q), multipliers: (0.0, 0.0), schedule: seed_schedule });

    let best = candidates.into_iter().filter(|c| c.residual <= cfg.tol).reduce(|a, b| if b.length > a.length { b } else { a });
    match best {
        Some(c) => Ok(OracleResult {
            length: c.length,
            residual: c.residual,
            allowance: 1.0 + c.multipliers.0.abs() + c.multipliers.1.abs(),
            schedule: c.schedule,
        }),
        None => Err(Error::NoFeasibleSchedule { residual: f64::NAN }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::distance;
    use crate::exponential::{exp_map, ExpCoords};
    use proptest::prelude::*;

    fn close_pt(a: Point, b: Point, tol: f64) -> bool {
        a.coord_distance(&b) <= tol * b.max_abs().max(1.0)
    }

    #[test]
    fn flow_examples() {
        assert_eq!(flow_constant(Point::ORIGIN, Control::new(1.0, 1.0), 3.0), Ok(Point::new(3.0, 3.0, 0.0)));
        assert_eq!(flow_constant(Point::new(1.0, -1.0, 0.0), Control::new(1.0, 1.0), 1.0), Ok(Point::new(2.0, 0.0, 1.0)));
        let q = Point::new(0.3, -2.0, 5.0);
        assert_eq!(flow_constant(q, Control::new(2.0, 1.0), 0.0), Ok(q));
        assert!(matches!(flow_constant(q, Control::new(1.0, 2.0), 1.0), Err(Error::InadmissibleControl { .. })));
    }

    #[test]
    fn simulate_examples() {
        let s = ControlSchedule::new(vec![(Control::new(1.0, -1.0), 1.0), (Control::new(1.0, 1.0), 1.0)]);
        assert_eq!(simulate(&s), Ok((Point::new(2.0, 0.0, 1.0), 0.0)));
        let psi: f64 = 0.7;
        let t = 2.5;
        let (end, len) = simulate(&vec![(Control::new(psi.cosh(), psi.sinh()), t)].into()).unwrap();
        assert!(close_pt(end, Point::new(t * psi.cosh(), t * psi.sinh(), 0.0), 1e-15));
        assert!((len - t).abs() < 1e-14);
        assert_eq!(simulate(&ControlSchedule::default()), Ok((Point::ORIGIN, 0.0)));
    }

    #[test]
    fn extremal_integration_matches_exp() {
        for &(psi, c, t) in &[(0.0, 0.0, 1.0), (0.3, 1.7, 2.5), (-0.9, -0.6, 3.0)] {
            let r = integrate_extremal(psi, c, t, 1e-13).unwrap();
            let q = exp_map(ExpCoords::new(psi, c, t).unwrap()).unwrap();
            assert!(close_pt(r.endpoint, q, 1e-10), "{psi} {c} {t}");
            assert!(r.drift < 1e-11);
            let h = Covector::at_endpoint(&ExpCoords::new(psi, c, t).unwrap());
            assert!((r.covector.h1 - h.h1).abs() < 1e-9 && (r.covector.h2 - h.h2).abs() < 1e-9);
            assert_eq!(r.covector.h3, c);
        }
    }

    #[test]
    fn straight_segment_oracle() {
        let cfg = OracleConfig { pieces: 4, iters: 5, random_starts: 1, ..Default::default() };
        let r = brute_force_distance(Point::new(2.0, 0.0, 0.0), &cfg).unwrap();
        assert!((r.length - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_approaches_distance() {
        let q = exp_map(ExpCoords::new(0.5, 1.0, 2.0).unwrap()).unwrap();
        let r = brute_force_distance(q, &OracleConfig::default()).unwrap();
        assert!(r.length <= 2.0 + 1e-6 && r.length > 0.98 * 2.0, "{r:?}");
        assert!(r.residual <= 1e-9);
        assert!(close_pt(simulate(&r.schedule).unwrap().0, q, 1e-9));
    }

    #[test]
    fn oracle_on_beak_finds_only_null_curves() {
        let r =
            brute_force_distance(Point::new(2.0, 0.0, 1.0), &OracleConfig { pieces: 8, iters: 5, ..Default::default() }).unwrap();
        assert!(r.length.abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn oracle_errors() {
        let cfg = OracleConfig::default();
        assert!(matches!(brute_force_distance(Point::new(0.0, 1.0, 0.0), &cfg), Err(Error::Unreachable { .. })));
        assert_eq!(brute_force_distance(Point::ORIGIN, &cfg), Err(Error::DegenerateTarget));
    }

    #[test]
    fn monotone_in_nested_pieces() {
        let q = exp_map(ExpCoords::new(-0.3, 1.4, 1.5).unwrap()).unwrap();
        let lengths: Vec<f64> = [2, 4, 8, 16, 32, 64]
            .iter()
            .map(|&n| best_slopes(q, &vec![q.x / n as f64; n]))
            .filter(|s| s.residual < 1e-10)
            .map(|s| s.length)
            .collect();
        assert!(lengths.len() >= 4, "{lengths:?}");
        assert!(lengths.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{lengths:?}");
        assert!(*lengths.last().unwrap() <= distance(q).unwrap().value);
    }

    #[test]
    fn synthesis_law_reproduces_target() {
        for q in [Point::new(2.0, 0.0, 1.0), Point::new(3.0, -3.0, 0.0), Point::new(5.0, -1.0, -6.0)] {
            let law: ControlSchedule = maximizer(q, 2).unwrap().control_law(1).into();
            assert_eq!(simulate(&law), Ok((q, 0.0)));
        }
    }

    proptest! {
        #[test]
        fn flow_matches_adaptive_integration(
            x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64,
            u1 in 0.0..2.0f64, r in -1.0..1.0f64, dt in 0.0..3.0f64,
        ) {
            let q = Point::new(x, y, z);
            let u = Control::new(u1, r * u1);
            let exact = flow_constant(q, u, dt).unwrap();
            let numeric = integrate_constant(q, u, dt, 1e-14).unwrap();
            prop_assert!(exact.coord_distance(&numeric) <= 1e-12 * exact.max_abs().max(1.0));
        }
    }
}
