//! C interface to `hhfrac`.
//!
//! Objects are opaque handles created by `*_new`/`*_parse` and released by the matching
//! `*_free`. Every fallible call returns an [`HhfStatus`]; on failure a message is kept per
//! thread and can be read with [`hhf_last_error`]. Missing report values come back as NaN.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hhfrac::expr::parse;
use hhfrac::fracint::frac_int_h;
use hhfrac::hhf::{
    bound_t1, bound_t2, bound_t3, hh_chain, identity_l1, identity_l2, ChainMode, CheckConfig, CheckKind, CheckReport,
    CheckStatus, HhfError,
};
use hhfrac::{Expr, FracOrder, Interval, MonotoneMap, OperatorSpec, ProblemInstance, Side};

/// Result of every fallible call. The numeric values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhfStatus {
    Ok = 0,
    /// An expression, check name or argument could not be parsed or is out of range.
    Parse = 1,
    /// A hypothesis did not hold (non-monotone `h`, non-differentiable `f`, ...).
    Hypothesis = 2,
    /// Evaluation or quadrature failed.
    Numeric = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// The library panicked; this is a bug.
    Panic = 5,
}

/// Parsed expression in `x`.
pub struct HhfExpr(Expr);

/// Validated problem instance `(f, g, h, [a, b], alpha, q)`.
pub struct HhfInstance(ProblemInstance);

/// Numbers from one check. Fields that do not apply to the check are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HhfCheckResult {
    /// 1 when the check passed, 0 otherwise.
    pub pass: i32,
    /// 0 pass, 1 fail, 2 skipped (hypothesis), 3 error.
    pub status: i32,
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
    pub residual: f64,
    pub slack: f64,
    pub tol: f64,
    pub evals: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(HhfStatus, String);

impl From<HhfError> for Failure {
    fn from(e: HhfError) -> Self {
        let status = if e.is_hypothesis() { HhfStatus::Hypothesis } else { HhfStatus::Numeric };
        Failure(status, e.to_string())
    }
}

impl From<hhfrac::fracint::FracError> for Failure {
    fn from(e: hhfrac::fracint::FracError) -> Self {
        HhfError::from(e).into()
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> HhfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HhfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HhfStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(HhfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(HhfStatus::Parse, "argument is not valid UTF-8".into()))
}

fn parse_expr(s: &str) -> Result<Expr, Failure> {
    parse(s).map_err(|e| Failure(HhfStatus::Parse, e.to_string()))
}

fn interval(a: f64, b: f64) -> Result<Interval, Failure> {
    Interval::new(a, b).map_err(|e| Failure(HhfStatus::Parse, e.to_string()))
}

/// Message of the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn hhf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hhf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `text` into a new expression handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_expr_parse(text: *const c_char, out: *mut *mut HhfExpr) -> HhfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let e = parse_expr(self::text(text)?)?;
        *out = Box::into_raw(Box::new(HhfExpr(e)));
        Ok(())
    })
}

/// # Safety
/// `expr` must come from [`hhf_expr_parse`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hhf_expr_free(expr: *mut HhfExpr) {
    if !expr.is_null() {
        drop(Box::from_raw(expr));
    }
}

/// Evaluates `expr` at `x`.
///
/// # Safety
/// `expr` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_expr_eval(expr: *const HhfExpr, x: f64, out: *mut f64) -> HhfStatus {
    guard(|| {
        let (Some(e), false) = (expr.as_ref(), out.is_null()) else { return Err(null()) };
        *out = e.0.eval(x).map_err(|e| Failure(HhfStatus::Numeric, e.to_string()))?;
        Ok(())
    })
}

/// Fractional integral of `f` with respect to `h` on `[a, b]`, evaluated at `at`.
/// `side` is 0 for the left-sided operator and 1 for the right-sided one.
///
/// # Safety
/// `f` and `h` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_frac_int(
    f: *const HhfExpr,
    h: *const HhfExpr,
    a: f64,
    b: f64,
    alpha: f64,
    side: i32,
    at: f64,
    out: *mut f64,
) -> HhfStatus {
    guard(|| {
        let (Some(f), Some(h), false) = (f.as_ref(), h.as_ref(), out.is_null()) else { return Err(null()) };
        let side = match side {
            0 => Side::Left,
            1 => Side::Right,
            s => return Err(Failure(HhfStatus::Parse, format!("side must be 0 or 1, got {s}"))),
        };
        let map = MonotoneMap::validate(h.0.clone(), interval(a, b)?)?;
        let spec = OperatorSpec::standard(side, FracOrder::new(alpha)?, map, at)?;
        *out = frac_int_h(&spec, &f.0, at)?;
        Ok(())
    })
}

/// Builds and validates an instance from expression strings.
///
/// # Safety
/// The strings must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_instance_new(
    f: *const c_char,
    g: *const c_char,
    h: *const c_char,
    a: f64,
    b: f64,
    alpha: f64,
    q: f64,
    out: *mut *mut HhfInstance,
) -> HhfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let (f, g, h) = (parse_expr(text(f)?)?, parse_expr(text(g)?)?, parse_expr(text(h)?)?);
        let inst = ProblemInstance::from_parts("ffi", f, g, h, interval(a, b)?, alpha, q)?;
        *out = Box::into_raw(Box::new(HhfInstance(inst)));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from [`hhf_instance_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hhf_instance_free(inst: *mut HhfInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

fn run_check(inst: &ProblemInstance, check: &str, tol: f64) -> Result<CheckReport, Failure> {
    let kind: CheckKind = check.parse().map_err(|e| Failure(HhfStatus::Parse, e))?;
    let cfg = CheckConfig::default().with_tol((tol > 0.0).then_some(tol));
    let f = inst.f();
    let iv = inst.interval();
    Ok(match kind {
        CheckKind::IdentityL1 => identity_l1(inst, &cfg),
        CheckKind::IdentityL2 => identity_l2(inst, &cfg),
        CheckKind::BoundT1 => bound_t1(inst, &cfg),
        CheckKind::BoundT2 => bound_t2(inst, &cfg),
        CheckKind::BoundT3 => bound_t3(inst, &cfg),
        CheckKind::HhClassical => hh_chain(&inst.id, f, &iv, &ChainMode::Classical, &cfg),
        CheckKind::HhFejer => hh_chain(&inst.id, f, &iv, &ChainMode::Fejer(inst.g().clone()), &cfg),
        CheckKind::HhFractional => hh_chain(&inst.id, f, &iv, &ChainMode::Fractional(inst.order()), &cfg),
        CheckKind::QuadOracle | CheckKind::Integrate => {
            return Err(Failure(HhfStatus::Parse, format!("{kind} is not an instance check")))
        }
    })
}

/// Runs `check` (e.g. `"identity-l1"`, `"bound-t2"`, `"hh-fejer"`) on `inst`.
/// `tol <= 0` keeps the default tolerances. A skipped or failed check still returns
/// [`HhfStatus::Ok`]; inspect `out.status`.
///
/// # Safety
/// `inst` must be a live handle, `check` NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_check(
    inst: *const HhfInstance,
    check: *const c_char,
    tol: f64,
    out: *mut HhfCheckResult,
) -> HhfStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else { return Err(null()) };
        let r = run_check(&inst.0, text(check)?, tol)?;
        let nan = |x: Option<f64>| x.unwrap_or(f64::NAN);
        *out = HhfCheckResult {
            pass: r.pass as i32,
            status: match r.status {
                CheckStatus::Pass => 0,
                CheckStatus::Fail => 1,
                CheckStatus::Skipped => 2,
                CheckStatus::Error => 3,
            },
            lhs: nan(r.lhs),
            middle: nan(r.middle),
            rhs: nan(r.rhs),
            residual: nan(r.residual),
            slack: nan(r.slack),
            tol: r.tol,
            evals: r.evals,
        };
        if let Some(m) = r.message {
            set_error(m);
        }
        Ok(())
    })
}

/// Runs `check` on `inst` and stores the full report as JSON in `*out`; release it with
/// [`hhf_string_free`].
///
/// # Safety
/// `inst` must be a live handle, `check` NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hhf_check_json(
    inst: *const HhfInstance,
    check: *const c_char,
    tol: f64,
    out: *mut *mut c_char,
) -> HhfStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else { return Err(null()) };
        let r = run_check(&inst.0, text(check)?, tol)?;
        let json = serde_json::to_string(&r).map_err(|e| Failure(HhfStatus::Numeric, e.to_string()))?;
        *out = CString::new(json).map_err(|e| Failure(HhfStatus::Numeric, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hhf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_codes_are_stable() {
        assert_eq!(HhfStatus::Ok as i32, 0);
        assert_eq!(HhfStatus::Parse as i32, 1);
        assert_eq!(HhfStatus::Hypothesis as i32, 2);
        assert_eq!(HhfStatus::Numeric as i32, 3);
    }
}
