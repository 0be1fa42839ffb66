//! Globally adaptive 7/15-point Gauss–Kronrod integration with epsilon-algorithm
//! extrapolation, in the style of QUADPACK's QAGS.
//!
//! The rule never samples interval endpoints, so integrable endpoint singularities are fine.
//! Arrays below are 1-based (slot 0 unused) to keep the bookkeeping close to the classical
//! formulation.

use super::{QuadError, QuadResult};
use crate::expr::EvalError;
use crate::Interval;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const EPMACH: f64 = f64::EPSILON;
const UFLOW: f64 = f64::MIN_POSITIVE;
const OFLOW: f64 = f64::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of integrand evaluations.
    pub budget: u64,
}

impl AdaptiveConfig {
    pub fn new(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: 0.0, budget: 10_000_000 }
    }
}

struct Kronrod {
    result: f64,
    abserr: f64,
    resabs: f64,
    resasc: f64,
}

fn qk15<F>(f: &mut F, a: f64, b: f64, evals: &mut u64) -> Result<Kronrod, EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();
    let fc = f(centr)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = f(centr - absc)?;
        let f2 = f(centr + absc)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }
    *evals += 15;
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (200.0 * abserr / resasc).powf(1.5).min(1.0);
    }
    if resabs > UFLOW / (50.0 * EPMACH) {
        abserr = abserr.max(EPMACH * 50.0 * resabs);
    }
    Ok(Kronrod { result, abserr, resabs, resasc })
}

/// Epsilon algorithm on `epstab[1..=n]`; returns `(result, abserr)`.
fn qelg(n: &mut usize, epstab: &mut [f64; 53], res3la: &mut [f64; 4], nres: &mut usize) -> (f64, f64) {
    const LIMEXP: usize = 50;
    *nres += 1;
    let mut abserr = OFLOW;
    let mut result = epstab[*n];
    if *n < 3 {
        return (result, abserr.max(5.0 * EPMACH * result.abs()));
    }
    epstab[*n + 2] = epstab[*n];
    let newelm = (*n - 1) / 2;
    epstab[*n] = OFLOW;
    let num = *n;
    let mut k1 = *n;
    let mut converged = false;
    for i in 1..=newelm {
        let k2 = k1 - 1;
        let k3 = k1 - 2;
        let res = epstab[k1 + 2];
        let e0 = epstab[k3];
        let e1 = epstab[k2];
        let e2 = res;
        let e1abs = e1.abs();
        let delta2 = e2 - e1;
        let err2 = delta2.abs();
        let tol2 = e2.abs().max(e1abs) * EPMACH;
        let delta3 = e1 - e0;
        let err3 = delta3.abs();
        let tol3 = e1abs.max(e0.abs()) * EPMACH;
        if err2 <= tol2 && err3 <= tol3 {
            result = res;
            abserr = err2 + err3;
            converged = true;
            break;
        }
        let e3 = epstab[k1];
        epstab[k1] = e1;
        let delta1 = e1 - e3;
        let err1 = delta1.abs();
        let tol1 = e1abs.max(e3.abs()) * EPMACH;
        if err1 <= tol1 || err2 <= tol2 || err3 <= tol3 {
            *n = i + i - 1;
            break;
        }
        let ss = 1.0 / delta1 + 1.0 / delta2 - 1.0 / delta3;
        let epsinf = (ss * e1).abs();
        if epsinf <= 1e-4 {
            *n = i + i - 1;
            break;
        }
        let res = e1 + 1.0 / ss;
        epstab[k1] = res;
        k1 -= 2;
        let error = err2 + (res - e2).abs() + err3;
        if error <= abserr {
            abserr = error;
            result = res;
        }
    }
    if converged {
        return (result, abserr.max(5.0 * EPMACH * result.abs()));
    }
    if *n == LIMEXP {
        *n = 2 * (LIMEXP / 2) - 1;
    }
    let mut ib = if num.is_multiple_of(2) { 2 } else { 1 };
    for _ in 1..=newelm + 1 {
        epstab[ib] = epstab[ib + 2];
        ib += 2;
    }
    if num != *n {
        epstab.copy_within(num - *n + 1..=num, 1);
    }
    if *nres < 4 {
        res3la[*nres] = result;
        abserr = OFLOW;
    } else {
        abserr = (result - res3la[3]).abs() + (result - res3la[2]).abs() + (result - res3la[1]).abs();
        res3la[1] = res3la[2];
        res3la[2] = res3la[3];
        res3la[3] = result;
    }
    (result, abserr.max(5.0 * EPMACH * result.abs()))
}

/// Maintains the descending ordering of error estimates in `iord`.
fn qpsrt(
    limit: usize,
    last: usize,
    maxerr: &mut usize,
    ermax: &mut f64,
    elist: &[f64],
    iord: &mut [usize],
    nrmax: &mut usize,
) {
    if last <= 2 {
        iord[1] = 1;
        iord[2] = 2;
    } else {
        let errmax = elist[*maxerr];
        if *nrmax != 1 {
            for _ in 1..*nrmax {
                let isucc = iord[*nrmax - 1];
                if errmax <= elist[isucc] {
                    break;
                }
                iord[*nrmax] = isucc;
                *nrmax -= 1;
            }
        }
        let jupbn = if last > limit / 2 + 2 { limit + 3 - last } else { last };
        let errmin = elist[last];
        let jbnd = jupbn - 1;
        let ibeg = *nrmax + 1;
        let mut inserted_at = None;
        for i in ibeg..=jbnd {
            let isucc = iord[i];
            if errmax >= elist[isucc] {
                inserted_at = Some(i);
                break;
            }
            iord[i - 1] = isucc;
        }
        match inserted_at {
            None => {
                iord[jbnd] = *maxerr;
                iord[jupbn] = last;
            }
            Some(i) => {
                iord[i - 1] = *maxerr;
                let mut k = jbnd;
                let mut placed = false;
                for _ in i..=jbnd {
                    let isucc = iord[k];
                    if errmin < elist[isucc] {
                        iord[k + 1] = last;
                        placed = true;
                        break;
                    }
                    iord[k + 1] = isucc;
                    k -= 1;
                }
                if !placed {
                    iord[i] = last;
                }
            }
        }
    }
    *maxerr = iord[*nrmax];
    *ermax = elist[*maxerr];
}

struct Outcome {
    result: f64,
    abserr: f64,
    ier: u8,
}

fn qagse<F>(
    f: &mut F,
    a: f64,
    b: f64,
    epsabs: f64,
    epsrel: f64,
    limit: usize,
    evals: &mut u64,
) -> Result<Outcome, EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let mut alist = vec![0.0; limit + 2];
    let mut blist = vec![0.0; limit + 2];
    let mut rlist = vec![0.0; limit + 2];
    let mut elist = vec![0.0; limit + 2];
    let mut iord = vec![0usize; limit + 3];
    let mut rlist2 = [0.0; 53];
    let mut res3la = [0.0; 4];

    let mut ier: u8 = 0;
    alist[1] = a;
    blist[1] = b;

    let mut ierro = 0;
    let k = qk15(f, a, b, evals)?;
    let mut result = k.result;
    let mut abserr = k.abserr;
    let defabs = k.resabs;
    let resabs = k.resasc;
    let dres = result.abs();
    let mut errbnd = epsabs.max(epsrel * dres);
    let mut last = 1;
    rlist[1] = result;
    elist[1] = abserr;
    iord[1] = 1;
    if abserr <= 100.0 * EPMACH * defabs && abserr > errbnd {
        ier = 2;
    }
    if limit == 1 {
        ier = 1;
    }
    if ier != 0 || (abserr <= errbnd && abserr != resabs) || abserr == 0.0 {
        return Ok(Outcome { result, abserr, ier });
    }

    rlist2[1] = result;
    let mut errmax = abserr;
    let mut maxerr = 1;
    let mut area = result;
    let mut errsum = abserr;
    abserr = OFLOW;
    let mut nrmax = 1;
    let mut nres = 0;
    let mut numrl2 = 2;
    let mut ktmin = 0;
    let mut extrap = false;
    let mut noext = false;
    let (mut iroff1, mut iroff2, mut iroff3) = (0, 0, 0);
    let ksgn: i32 = if dres >= (1.0 - 50.0 * EPMACH) * defabs { 1 } else { -1 };
    let mut small = 0.0;
    let mut erlarg = 0.0;
    let mut ertest = 0.0;
    let mut correc = 0.0;

    // `true` means: fall through to summing the subinterval results
    let mut sum_up = false;

    'outer: for l in 2..=limit {
        last = l;
        let a1 = alist[maxerr];
        let b1 = 0.5 * (alist[maxerr] + blist[maxerr]);
        let a2 = b1;
        let b2 = blist[maxerr];
        let erlast = errmax;
        let k1 = qk15(f, a1, b1, evals)?;
        let k2 = qk15(f, a2, b2, evals)?;
        let (area1, error1, defab1) = (k1.result, k1.abserr, k1.resasc);
        let (area2, error2, defab2) = (k2.result, k2.abserr, k2.resasc);
        let area12 = area1 + area2;
        let erro12 = error1 + error2;
        errsum = errsum + erro12 - errmax;
        area = area + area12 - rlist[maxerr];
        if defab1 != error1 && defab2 != error2 {
            if (rlist[maxerr] - area12).abs() <= 1e-5 * area12.abs() && erro12 >= 0.99 * errmax {
                if extrap {
                    iroff2 += 1;
                } else {
                    iroff1 += 1;
                }
            }
            if last > 10 && erro12 > errmax {
                iroff3 += 1;
            }
        }
        rlist[maxerr] = area1;
        rlist[last] = area2;
        errbnd = epsabs.max(epsrel * area.abs());
        if iroff1 + iroff2 >= 10 || iroff3 >= 20 {
            ier = 2;
        }
        if iroff2 >= 5 {
            ierro = 3;
        }
        if last == limit {
            ier = 1;
        }
        if a1.abs().max(b2.abs()) <= (1.0 + 100.0 * EPMACH) * (a2.abs() + 1000.0 * UFLOW) {
            ier = 4;
        }
        if error2 > error1 {
            alist[maxerr] = a2;
            alist[last] = a1;
            blist[last] = b1;
            rlist[maxerr] = area2;
            rlist[last] = area1;
            elist[maxerr] = error2;
            elist[last] = error1;
        } else {
            alist[last] = a2;
            blist[maxerr] = b1;
            blist[last] = b2;
            elist[maxerr] = error1;
            elist[last] = error2;
        }
        qpsrt(limit, last, &mut maxerr, &mut errmax, &elist, &mut iord, &mut nrmax);
        if errsum <= errbnd {
            sum_up = true;
            break;
        }
        if ier != 0 {
            break;
        }
        if last == 2 {
            small = (b - a).abs() * 0.375;
            erlarg = errsum;
            ertest = errbnd;
            rlist2[2] = area;
            continue;
        }
        if noext {
            continue;
        }
        erlarg -= erlast;
        if (b1 - a1).abs() > small {
            erlarg += erro12;
        }
        if !extrap {
            if (blist[maxerr] - alist[maxerr]).abs() > small {
                continue;
            }
            extrap = true;
            nrmax = 2;
        }
        if ierro != 3 && erlarg > ertest {
            let id = nrmax;
            let jupbnd = if last > 2 + limit / 2 { limit + 3 - last } else { last };
            for _ in id..=jupbnd {
                maxerr = iord[nrmax];
                errmax = elist[maxerr];
                if (blist[maxerr] - alist[maxerr]).abs() > small {
                    continue 'outer;
                }
                nrmax += 1;
            }
        }
        numrl2 += 1;
        rlist2[numrl2] = area;
        let (reseps, abseps) = qelg(&mut numrl2, &mut rlist2, &mut res3la, &mut nres);
        ktmin += 1;
        if ktmin > 5 && abserr < 1e-3 * errsum {
            ier = 5;
        }
        if abseps < abserr {
            ktmin = 0;
            abserr = abseps;
            result = reseps;
            correc = erlarg;
            ertest = epsabs.max(epsrel * reseps.abs());
            if abserr <= ertest {
                break;
            }
        }
        if numrl2 == 1 {
            noext = true;
        }
        if ier == 5 {
            break;
        }
        maxerr = iord[1];
        errmax = elist[maxerr];
        nrmax = 1;
        extrap = false;
        small *= 0.5;
        erlarg = errsum;
    }

    if !sum_up {
        if abserr == OFLOW {
            sum_up = true;
        } else {
            // 0: divergence test, 1: sum, 2: done
            let mut step = 0;
            if ier + ierro != 0 {
                if ierro == 3 {
                    abserr += correc;
                }
                if ier == 0 {
                    ier = 3;
                }
                if result != 0.0 && area != 0.0 {
                    step = if abserr / result.abs() > errsum / area.abs() { 1 } else { 0 };
                } else if abserr > errsum {
                    step = 1;
                } else if area == 0.0 {
                    step = 2;
                }
            }
            match step {
                0 => {
                    let skip = ksgn == -1 && result.abs().max(area.abs()) <= defabs * 0.01;
                    if !skip && (0.01 > result / area || result / area > 100.0 || errsum > area.abs()) {
                        ier = 6;
                    }
                }
                1 => sum_up = true,
                _ => {}
            }
        }
    }
    if sum_up {
        result = rlist[1..=last].iter().sum();
        abserr = errsum;
    }
    if ier > 2 {
        ier -= 1;
    }
    Ok(Outcome { result, abserr, ier })
}

/// The oracle: adaptive integration of `f` over `iv` to absolute tolerance `tol`.
pub fn integrate_adaptive<F>(f: F, iv: &Interval, tol: f64) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    integrate_adaptive_with(f, iv.a(), iv.b(), &AdaptiveConfig::new(tol))
}

/// Same as [`integrate_adaptive`] with explicit tolerances and budget on `[a, b]`.
pub fn integrate_adaptive_with<F>(mut f: F, a: f64, b: f64, cfg: &AdaptiveConfig) -> Result<QuadResult, QuadError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    if !(cfg.abs_tol >= 1e-13 || (cfg.abs_tol >= 0.0 && cfg.rel_tol >= 1e-13)) {
        return Err(QuadError::InvalidTolerance { tol: cfg.abs_tol });
    }
    let limit = ((cfg.budget / 30) as usize).max(1);
    let mut evals = 0;
    let out = qagse(&mut f, a, b, cfg.abs_tol, cfg.rel_tol, limit, &mut evals)?;
    match out.ier {
        1 => Err(QuadError::BudgetExceeded { value: out.result, estimate: out.abserr, evaluations: evals }),
        3 | 5 => Err(QuadError::Divergent { value: out.result, estimate: out.abserr }),
        _ => Ok(QuadResult { value: out.result, error_estimate: out.abserr, evaluations: evals }),
    }
}
