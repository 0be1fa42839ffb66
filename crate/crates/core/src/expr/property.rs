//! Grid-based shape checks (convexity, sign, monotonicity, symmetry).
//!
//! These are certificates on a finite grid, not proofs. Each report carries the worst margin
//! found and the point where it occurred.

use serde::{Deserialize, Serialize};

use super::{EvalError, Expr};
use crate::Interval;

pub const GRID_POINTS: usize = 2049;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Convex,
    Nonnegative,
    StrictlyIncreasing,
    SymmetricAboutMidpoint,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Convex => "convex",
            Property::Nonnegative => "nonnegative",
            Property::StrictlyIncreasing => "strictly-increasing",
            Property::SymmetricAboutMidpoint => "symmetric-about-midpoint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub pass: bool,
    /// Smallest margin seen; negative beyond `-tol` means the property fails.
    pub worst_margin: f64,
    pub witness: f64,
    pub tol: f64,
    pub grid_points: usize,
}

/// Checks `prop` for an expression on `iv`.
///
/// Strict increase also requires `e' > 0` at interior grid points when `e` is differentiable.
pub fn check_property(e: &Expr, iv: &Interval, prop: Property) -> Result<PropertyReport, EvalError> {
    let f = |x: f64| e.eval(x);
    if prop == Property::StrictlyIncreasing {
        if let Ok(d) = e.differentiate() {
            let df = |x: f64| d.eval(x);
            return check_property_fn(&f, Some(&df), iv, prop);
        }
    }
    check_property_fn(&f, None, iv, prop)
}

type Func<'a> = &'a dyn Fn(f64) -> Result<f64, EvalError>;

/// Same as [`check_property`] for an arbitrary evaluator, e.g. `|f'|^q`.
pub fn check_property_fn(
    f: Func<'_>,
    derivative: Option<Func<'_>>,
    iv: &Interval,
    prop: Property,
) -> Result<PropertyReport, EvalError> {
    let n = GRID_POINTS;
    let step = iv.width() / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { iv.b() } else { iv.a() + i as f64 * step }).collect();
    let vs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>, _>>()?;
    let scale = vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * (1.0 + scale);

    let (worst_margin, witness) = match prop {
        Property::Convex => convex_margin(f, &xs, &vs, step)?,
        Property::Nonnegative => {
            let (i, v) = argmin(&vs);
            let (mut best, mut at) = (v, xs[i]);
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(n - 1)];
            for k in 0..=64 {
                let x = lo + (hi - lo) * k as f64 / 64.0;
                let v = f(x)?;
                if v < best {
                    best = v;
                    at = x;
                }
            }
            (best, at)
        }
        Property::SymmetricAboutMidpoint => {
            let mut worst = (0.0, iv.midpoint());
            for i in 0..n / 2 {
                let m = -(vs[i] - vs[n - 1 - i]).abs();
                if m < worst.0 {
                    worst = (m, xs[i]);
                }
            }
            worst
        }
        Property::StrictlyIncreasing => {
            let mut worst = (f64::INFINITY, xs[0]);
            for i in 0..n - 1 {
                let m = vs[i + 1] - vs[i];
                if m < worst.0 {
                    worst = (m, xs[i]);
                }
            }
            if let Some(df) = derivative {
                for (i, &x) in xs.iter().enumerate() {
                    let d = df(x)?;
                    // a vanishing slope at an endpoint does not break strict increase
                    if (i == 0 || i == n - 1) && d >= 0.0 {
                        continue;
                    }
                    if d < worst.0 {
                        worst = (d, x);
                    }
                }
            }
            return Ok(PropertyReport {
                property: prop,
                pass: worst.0 > 0.0,
                worst_margin: worst.0,
                witness: worst.1,
                tol,
                grid_points: n,
            });
        }
    };
    Ok(PropertyReport { property: prop, pass: worst_margin >= -tol, worst_margin, witness, tol, grid_points: n })
}

fn argmin(vs: &[f64]) -> (usize, f64) {
    vs.iter().enumerate().fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) })
}

/// Midpoint-convexity margin `(f(x-d) + f(x+d))/2 - f(x)` over all dyadic spacings, then
/// refined around the worst centre with shrinking spacings.
fn convex_margin(f: Func<'_>, xs: &[f64], vs: &[f64], step: f64) -> Result<(f64, f64), EvalError> {
    let n = xs.len();
    let mut worst = (f64::INFINITY, xs[n / 2]);
    let mut k = 1;
    while 2 * k < n {
        for i in k..n - k {
            let m = 0.5 * (vs[i - k] + vs[i + k]) - vs[i];
            if m < worst.0 {
                worst = (m, xs[i]);
            }
        }
        k *= 2;
    }
    let (lo, hi) = (xs[0], xs[n - 1]);
    let centre = worst.1;
    let fc = f(centre)?;
    let mut d = step / 2.0;
    for _ in 0..12 {
        if centre - d >= lo && centre + d <= hi {
            let m = 0.5 * (f(centre - d)? + f(centre + d)?) - fc;
            if m < worst.0 {
                worst.0 = m;
            }
        }
        d /= 2.0;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn check(text: &str, a: f64, b: f64, prop: Property) -> PropertyReport {
        check_property(&parse(text).unwrap(), &Interval::new(a, b).unwrap(), prop).unwrap()
    }

    #[test]
    fn convex_square() {
        assert!(check("x^2", 0.0, 1.0, Property::Convex).pass);
        assert!(check("exp(x)", -1.0, 2.0, Property::Convex).pass);
        assert!(check("3*x + 1", 0.0, 1.0, Property::Convex).pass);
    }

    #[test]
    fn cubic_is_convex_on_zero_two() {
        // f'' = 6x >= 0 there
        assert!(check("x^3 - x", 0.0, 2.0, Property::Convex).pass);
    }

    #[test]
    fn cubic_fails_where_curvature_changes_sign() {
        let r = check("x^3 - x", -1.0, 1.0, Property::Convex);
        assert!(!r.pass);
        assert!(r.witness < 0.0, "witness {}", r.witness);
        assert!(r.worst_margin < -1e-3);
    }

    #[test]
    fn symmetry() {
        assert!(check("x*(1-x)", 0.0, 1.0, Property::SymmetricAboutMidpoint).pass);
        assert!(check("1 + sin(3.141592653589793*x)^2", 1.0, 2.0, Property::SymmetricAboutMidpoint).pass);
        assert!(!check("x", 0.0, 1.0, Property::SymmetricAboutMidpoint).pass);
    }

    #[test]
    fn sign() {
        assert!(check("x*(1-x)", 0.0, 1.0, Property::Nonnegative).pass);
        let r = check("x - 0.5", 0.0, 1.0, Property::Nonnegative);
        assert!(!r.pass);
        assert_eq!(r.witness, 0.0);
    }

    #[test]
    fn monotone_maps() {
        assert!(check("x", 0.0, 1.0, Property::StrictlyIncreasing).pass);
        assert!(check("x^2", 0.0, 1.0, Property::StrictlyIncreasing).pass);
        assert!(check("exp(x) - 1", 1.0, 2.0, Property::StrictlyIncreasing).pass);
        assert!(!check("x^2", -1.0, 1.0, Property::StrictlyIncreasing).pass);
        assert!(!check("(x - 0.5)^3", 0.0, 1.0, Property::StrictlyIncreasing).pass);
        assert!(!check("1", 0.0, 1.0, Property::StrictlyIncreasing).pass);
    }

    #[test]
    fn evaluation_errors_propagate() {
        let e = parse("log(x)").unwrap();
        assert!(check_property(&e, &Interval::new(-1.0, 1.0).unwrap(), Property::Convex).is_err());
    }
}
