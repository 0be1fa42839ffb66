//! Reference computations for integration tests. Nothing here calls the library's
//! quadrature or special functions.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Five-point Gauss–Legendre nodes and weights on [-1, 1], in closed form.
fn gl5() -> [(f64, f64); 5] {
    let r = (10.0f64 / 7.0).sqrt();
    let x1 = (5.0 - 2.0 * r).sqrt() / 3.0;
    let x2 = (5.0 + 2.0 * r).sqrt() / 3.0;
    let s = 70.0f64.sqrt();
    let w1 = (322.0 + 13.0 * s) / 900.0;
    let w2 = (322.0 - 13.0 * s) / 900.0;
    [(-x2, w2), (-x1, w1), (0.0, 128.0 / 225.0), (x1, w1), (x2, w2)]
}

/// Composite five-point Gauss–Legendre on `panels` equal panels of `[lo, hi]`.
pub fn composite<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let rule = gl5();
    let h = (hi - lo) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let c = lo + (p as f64 + 0.5) * h;
        for (x, w) in rule {
            sum += w * f(c + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Γ at integers and half-integers.
pub fn gamma_ref(x: f64) -> f64 {
    let twice = (2.0 * x).round();
    assert!((2.0 * x - twice).abs() < 1e-12 && x > 0.0, "gamma_ref needs a positive (half-)integer, got {x}");
    let (mut g, mut y) = if twice as i64 % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while y < x - 0.25 {
        g *= y;
        y += 1.0;
    }
    g
}

/// `∫_a^t (s - a)^(α-1) φ(s) ds` for `α ∈ {0.5, 1, 2}`, singularity removed by `s = a + v^m`.
pub fn weighted_from_left<F: FnMut(f64) -> f64>(mut phi: F, a: f64, t: f64, alpha: f64) -> f64 {
    if t <= a {
        return 0.0;
    }
    if alpha == 0.5 {
        composite(|v| 2.0 * phi(a + v * v), 0.0, (t - a).sqrt(), 24)
    } else {
        composite(|s| (s - a).powf(alpha - 1.0) * phi(s), a, t, 24)
    }
}

/// `∫_t^b (b - s)^(α-1) φ(s) ds`, mirror of [`weighted_from_left`].
pub fn weighted_from_right<F: FnMut(f64) -> f64>(mut phi: F, t: f64, b: f64, alpha: f64) -> f64 {
    // s -> t + b - s turns the distance to b into the distance to t
    weighted_from_left(|s| phi(t + b - s), t, b, alpha)
}

/// `∫_lo^hi φ` where `φ` may behave like `(t - lo)^(1/2)` (α = 0.5) near `lo` or like
/// `(hi - t)^(1/2)` near `hi`; splits at the midpoint and substitutes on each half.
pub fn outer<F: FnMut(f64) -> f64>(mut phi: F, lo: f64, hi: f64, alpha: f64) -> f64 {
    let m = 0.5 * (lo + hi);
    if alpha == 0.5 {
        let left = composite(|w| 2.0 * w * phi(lo + w * w), 0.0, (m - lo).sqrt(), 24);
        let right = composite(|w| 2.0 * w * phi(hi - w * w), 0.0, (hi - m).sqrt(), 24);
        left + right
    } else {
        composite(&mut phi, lo, hi, 48)
    }
}

/// Five-point central difference.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

pub fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}
