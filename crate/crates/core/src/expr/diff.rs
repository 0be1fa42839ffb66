//! Symbolic differentiation with light constant folding.

use thiserror::Error;

use super::{BinaryOp, Expr, UnaryOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiffError {
    #[error("`{0}` is not differentiable")]
    NonDifferentiable(&'static str),
}

impl Expr {
    /// Symbolic derivative with respect to `x`.
    ///
    /// `abs` is rejected: it only ever appears as an evaluated quantity.
    pub fn differentiate(&self) -> Result<Expr, DiffError> {
        Ok(match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Unary(op, u) => {
                let du = u.differentiate()?;
                let u = (**u).clone();
                match op {
                    UnaryOp::Neg => neg(du),
                    UnaryOp::Exp => mul(Expr::unary(UnaryOp::Exp, u), du),
                    UnaryOp::Log => div(du, u),
                    UnaryOp::Sqrt => div(du, mul(Expr::Const(2.0), Expr::unary(UnaryOp::Sqrt, u))),
                    UnaryOp::Sin => mul(Expr::unary(UnaryOp::Cos, u), du),
                    UnaryOp::Cos => neg(mul(Expr::unary(UnaryOp::Sin, u), du)),
                    UnaryOp::Abs => return Err(DiffError::NonDifferentiable("abs")),
                }
            }
            Expr::Binary(op, l, r) => {
                let dl = l.differentiate()?;
                let dr = r.differentiate()?;
                let (l, r) = ((**l).clone(), (**r).clone());
                match op {
                    BinaryOp::Add => add(dl, dr),
                    BinaryOp::Sub => sub(dl, dr),
                    BinaryOp::Mul => add(mul(dl, r.clone()), mul(l, dr)),
                    BinaryOp::Div => {
                        if r.as_const().is_some() {
                            div(dl, r)
                        } else {
                            div(sub(mul(dl, r.clone()), mul(l, dr)), pow(r, Expr::Const(2.0)))
                        }
                    }
                    BinaryOp::Pow => {
                        if let Some(c) = r.as_const() {
                            mul(mul(Expr::num(c), pow(l, Expr::num(c - 1.0))), dl)
                        } else if let Some(k) = l.as_const() {
                            let lnk = Expr::unary(UnaryOp::Log, Expr::num(k));
                            mul(mul(pow(l, r), lnk), dr)
                        } else {
                            let whole = pow(l.clone(), r.clone());
                            let term = add(mul(dr, Expr::unary(UnaryOp::Log, l.clone())), div(mul(r, dl), l));
                            mul(whole, term)
                        }
                    }
                }
            }
        })
    }
}

fn fold(op: BinaryOp, a: f64, b: f64) -> Option<f64> {
    let v = match op {
        BinaryOp::Add => a + b,
        BinaryOp::Sub => a - b,
        BinaryOp::Mul => a * b,
        BinaryOp::Div if b != 0.0 => a / b,
        BinaryOp::Pow if b.fract() == 0.0 && b.abs() < 64.0 && !(a == 0.0 && b < 0.0) => a.powi(b as i32),
        _ => return None,
    };
    v.is_finite().then_some(v)
}

fn folded(op: BinaryOp, l: &Expr, r: &Expr) -> Option<Expr> {
    let (a, b) = (l.as_const()?, r.as_const()?);
    fold(op, a, b).map(Expr::num)
}

fn neg(e: Expr) -> Expr {
    if let Some(c) = e.as_const() {
        return Expr::num(-c);
    }
    match e {
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        other => Expr::unary(UnaryOp::Neg, other),
    }
}

fn add(l: Expr, r: Expr) -> Expr {
    if let Some(e) = folded(BinaryOp::Add, &l, &r) {
        return e;
    }
    if l.as_const() == Some(0.0) {
        return r;
    }
    if r.as_const() == Some(0.0) {
        return l;
    }
    Expr::binary(BinaryOp::Add, l, r)
}

fn sub(l: Expr, r: Expr) -> Expr {
    if let Some(e) = folded(BinaryOp::Sub, &l, &r) {
        return e;
    }
    if r.as_const() == Some(0.0) {
        return l;
    }
    if l.as_const() == Some(0.0) {
        return neg(r);
    }
    Expr::binary(BinaryOp::Sub, l, r)
}

fn mul(l: Expr, r: Expr) -> Expr {
    if let Some(e) = folded(BinaryOp::Mul, &l, &r) {
        return e;
    }
    match (l.as_const(), r.as_const()) {
        (Some(c), _) | (_, Some(c)) if c == 0.0 => Expr::Const(0.0),
        (Some(1.0), _) => r,
        (_, Some(1.0)) => l,
        (Some(-1.0), _) => neg(r),
        (_, Some(-1.0)) => neg(l),
        // keep constants on the left
        (None, Some(_)) => Expr::binary(BinaryOp::Mul, r, l),
        _ => Expr::binary(BinaryOp::Mul, l, r),
    }
}

fn div(l: Expr, r: Expr) -> Expr {
    if let Some(e) = folded(BinaryOp::Div, &l, &r) {
        return e;
    }
    if l.as_const() == Some(0.0) {
        return Expr::Const(0.0);
    }
    if r.as_const() == Some(1.0) {
        return l;
    }
    Expr::binary(BinaryOp::Div, l, r)
}

fn pow(l: Expr, r: Expr) -> Expr {
    if let Some(e) = folded(BinaryOp::Pow, &l, &r) {
        return e;
    }
    match r.as_const() {
        Some(0.0) => Expr::Const(1.0),
        Some(1.0) => l,
        _ => Expr::binary(BinaryOp::Pow, l, r),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn d(s: &str) -> Expr {
        parse(s).unwrap().differentiate().unwrap()
    }

    #[test]
    fn basic_rules() {
        assert_eq!(d("x^2"), parse("2*x").unwrap());
        assert_eq!(d("exp(x)"), parse("exp(x)").unwrap());
        assert_eq!(d("3"), Expr::Const(0.0));
        assert_eq!(d("x"), Expr::Const(1.0));
    }

    #[test]
    fn shifted_cube_at_two() {
        // central difference of (x-1)^3 at 2 with step 1e-5
        let f = parse("(x-1)^3").unwrap();
        let h = 1e-5;
        let fd = (f.eval(2.0 + h).unwrap() - f.eval(2.0 - h).unwrap()) / (2.0 * h);
        assert!((fd - 3.0).abs() < 1e-9);
        assert!((d("(x-1)^3").eval(2.0).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn abs_is_rejected() {
        assert_eq!(parse("x*abs(x)").unwrap().differentiate(), Err(DiffError::NonDifferentiable("abs")));
    }

    #[test]
    fn general_power_and_quotients() {
        let cases = [
            ("x^x", 1.7),
            ("2^x", 0.3),
            ("sqrt(x)/(1+x)", 0.8),
            ("log(x)*sin(x)", 1.3),
            ("cos(x^2)", 0.6),
            ("x^0.5", 2.0),
            ("(exp(x)-1)/3", 0.4),
            ("-x^3", 0.7),
        ];
        for (text, x) in cases {
            let f = parse(text).unwrap();
            let df = f.differentiate().unwrap();
            let h = 1e-5;
            let fd = (f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h);
            let exact = df.eval(x).unwrap();
            assert!((exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()), "{text}: {exact} vs {fd}");
        }
    }

    #[test]
    fn derivative_round_trips_through_printing() {
        for text in ["x^-0.5 * sin(x)", "x^2 - 3*x", "exp(-x)"] {
            let df = d(text);
            assert_eq!(parse(&df.to_string()).unwrap(), df, "{df}");
        }
    }
}
