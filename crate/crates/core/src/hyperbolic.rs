//! Cancellation-free building blocks for the hyperbolic expressions that
//! appear in the exponential map, the distance and the sphere profile.

/// `sinh(x) - x`, accurate to a few ulps for every finite `x`.
pub fn sinh_minus_id(x: f64) -> f64 {
    if x.abs() < 1.0 {
        // x^3/3! + x^5/5! + ...; terms shrink by at least 1/20 each step.
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > f64::EPSILON * 0.25 * sum.abs() {
            term *= x2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// `(sinh s - s) / s^2`, finite as `s -> 0`.
pub fn sinh_minus_id_over_sq(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        s / 6.0 * (1.0 + s * s / 20.0)
    } else {
        sinh_minus_id(s) / (s * s)
    }
}

/// `sinh(x) / x` with the removable singularity filled in.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0)
    } else {
        x.sinh() / x
    }
}

/// `x / sinh(x)`, equal to 1 at the origin and 0 at infinity.
pub fn x_over_sinh(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / sinhc(x)
    }
}

/// `artanh(y / x)` evaluated as `0.5 * ln((x + y) / (x - y))`.
///
/// Requires `x > |y|`.
pub fn artanh_ratio(y: f64, x: f64) -> f64 {
    0.5 * ((x + y).ln() - (x - y).ln())
}

/// Safeguarded Newton iteration for an increasing function on a bracket.
///
/// `eval` returns `(g(p), g'(p))` and the root of `g` must lie in `[lo, hi]`
/// with `g(lo) <= 0 <= g(hi)`. Newton steps that leave the bracket or fail to
/// shrink it fast enough are replaced by bisection.
pub fn newton_bracketed<F>(mut eval: F, mut lo: f64, mut hi: f64, guess: f64) -> f64
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut p = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..200 {
        let (g, dg) = eval(p);
        if g == 0.0 {
            return p;
        }
        if g < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let newton = p - g / dg;
        let next = if dg > 0.0 && newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - p).abs() <= 2.0 * f64::EPSILON * p.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        p = next;
        if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return p;
        }
    }
    p
}
