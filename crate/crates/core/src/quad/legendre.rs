use std::f64::consts::PI;

use super::{check_points, Canonical, QuadError, QuadRule, RuleKind};

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadRule, QuadError> {
    check_points(n)?;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-3) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // roots come out in decreasing order; fill symmetrically
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadRule { nodes, weights, canonical: Canonical::Symmetric, kind: RuleKind::Legendre })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let r1 = gauss_legendre_rule(1).unwrap();
        assert_eq!(r1.nodes(), &[0.0]);
        assert!((r1.weights()[0] - 2.0).abs() < 1e-15);

        // roots of 3x^2 - 1
        let r2 = gauss_legendre_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes()[0] + s).abs() < 1e-15 && (r2.nodes()[1] - s).abs() < 1e-15);
        assert!(r2.weights().iter().all(|w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn quartic_with_three_points() {
        let r = gauss_legendre_rule(3).unwrap();
        let v: f64 = r.iter().map(|(x, w)| w * x.powi(4)).sum();
        assert!((v - 0.4).abs() <= 1e-14);
    }

    #[test]
    fn large_rule_is_well_formed() {
        let r = gauss_legendre_rule(256).unwrap();
        assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
        assert!(r.nodes()[0] > -1.0 && r.nodes()[255] < 1.0);
        assert!(r.weights().iter().all(|&w| w > 0.0));
        let total: f64 = r.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn size_limits() {
        assert_eq!(gauss_legendre_rule(0), Err(QuadError::PointsOutOfRange { n: 0 }));
        assert!(gauss_legendre_rule(257).is_err());
    }
}
