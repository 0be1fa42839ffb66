//! Gauss–Jacobi rules for the weight `(1 - s)^(alpha - 1)` on `[0, 1]`.
//!
//! Nodes come from the eigenvalues of the Jacobi matrix of the recurrence for
//! `P_n^(a, b)` with `a = alpha - 1`, `b = 0`, then get one or two Newton steps on the
//! polynomial itself. Weights use the closed form with log-gamma normalisation.

use super::{check_points, Canonical, QuadError, QuadRule, RuleKind};
use crate::special::ln_gamma;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples `i` and `i + 1`), by implicit QL with Wilkinson shifts.
pub(crate) fn tridiagonal_eigenvalues(mut d: Vec<f64>, e: &[f64]) -> Option<Vec<f64>> {
    let n = d.len();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::repeat(0.0)).take(n).collect();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Some(d)
}

/// `(P_n(x), P_{n-1}(x))` for the Jacobi family with parameters `a`, `b`.
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (ab + 2.0) * x);
    if n == 1 {
        return (p1, p0);
    }
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let lead = 2.0 * k * (k + ab) * (c - 2.0);
        let p2 = ((c - 1.0) * (c * (c - 2.0) * x + a * a - b * b) * p1 - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0)
            / lead;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `(1 - x^2) P_n'(x)` from the standard derivative identity.
fn jacobi_scaled_derivative(n: usize, a: f64, b: f64, x: f64, pn: f64, pm: f64) -> f64 {
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    (nf * ((a - b) - c * x) * pn + 2.0 * (nf + a) * (nf + b) * pm) / c
}

/// `n`-point rule on `[0, 1]` for the weight `(1 - s)^(alpha - 1)`.
pub fn gauss_jacobi_rule(n: usize, alpha: f64) -> Result<QuadRule, QuadError> {
    check_points(n)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(QuadError::InvalidOrder { alpha });
    }
    let (a, b) = (alpha - 1.0, 0.0);
    let ab = a + b;
    let diag: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let c = 2.0 * k as f64 + ab;
                (b * b - a * a) / (c * (c + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            let c = 2.0 * k + ab;
            (4.0 * k * (k + a) * (k + b) * (k + ab) / (c * c * (c + 1.0) * (c - 1.0))).sqrt()
        })
        .collect();
    let eig = tridiagonal_eigenvalues(diag, &off).ok_or(QuadError::EigenNonConvergence { n })?;

    let nf = n as f64;
    let ln_c = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
        - ln_gamma(nf + ab + 1.0)
        - ln_gamma(nf + 1.0);
    let norm = ln_c.exp();

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // x ascending gives s = (1 + x)/2 ascending
    for &x0 in &eig {
        let mut x = x0;
        for _ in 0..3 {
            let (pn, pm) = jacobi_pair(n, a, b, x);
            let dp = jacobi_scaled_derivative(n, a, b, x, pn, pm) / (1.0 - x * x);
            let dx = pn / dp;
            if !dx.is_finite() || dx.abs() > 1e-6 {
                break;
            }
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pm) = jacobi_pair(n, a, b, x);
        let sd = jacobi_scaled_derivative(n, a, b, x, pn, pm);
        // w = C / ((1 - x^2) P_n'^2) = C (1 - x^2) / ((1 - x^2) P_n')^2
        let w = norm * (1.0 - x * x) / (sd * sd);
        nodes.push(0.5 * (1.0 + x));
        weights.push(w * 0.5f64.powf(alpha));
    }
    Ok(QuadRule { nodes, weights, canonical: Canonical::Unit, kind: RuleKind::Jacobi { alpha } })
}
