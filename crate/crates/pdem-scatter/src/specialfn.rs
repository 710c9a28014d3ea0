//! Complex special functions evaluated by direct power series.
//!
//! Provides the Gauss hypergeometric function 2F1(a,b;c;x) for real c and
//! real x <= 0, Kummer's confluent function M(a,b;y) for complex arguments,
//! and the Whittaker function M_{k,m}(y) built on it (DLMF 13.14, 15.2,
//! principal branches throughout).  Arguments with x <= -1/4 are routed
//! through the Pfaff transformation, arguments with Re y < 0 through the
//! Kummer transformation, so the series always run where they converge
//! briskly.  The Pfaff cutover sits well inside the Maclaurin disc because
//! the direct series cancels catastrophically for the large conjugate
//! parameter pairs these models produce (measured: ~1e28 peak-to-sum at
//! x = -0.96 versus ~1e8 for the transformed series at the same point).
//!
//! The accumulators are double-double: the scattering solves evaluate these
//! series at large pure-imaginary y (peak term up to ~1e17 above the sum) and
//! at strongly cancelling Pfaff arguments, where plain f64 keeps almost no
//! correct digits.  No large-|y| asymptotic expansions are implemented; when
//! even double-double cannot cover the cancellation the evaluation fails with
//! `PrecisionLoss` rather than returning noise.

use crate::dd::{CDd, Dd};
use crate::error::Error;
use num_complex::Complex64;

/// Termination policy for the power series.
#[derive(Clone, Copy, Debug)]
pub struct SeriesControl {
    /// Stop once |term| <= rel_tol * |sum| for two consecutive terms.
    pub rel_tol: f64,
    /// Hard cap on the number of summed terms.
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl { rel_tol: 1e-14, max_terms: 10_000 }
    }
}

/// Beyond this peak-to-result ratio fewer than ~7 trustworthy digits remain
/// even in the double-double accumulator; evaluation fails loudly instead.
const CANCELLATION_LIMIT: f64 = 1e24;

fn nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

fn complex_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && nonpositive_integer(z.re)
}

/// Sums 1 + sum of t_n where t_0 = 1 and t_{n+1} = step(n, t_n).
fn sum_series(
    ctl: &SeriesControl,
    mut step: impl FnMut(usize, CDd) -> CDd,
) -> Result<Complex64, Error> {
    let mut term = CDd::ONE;
    let mut sum = CDd::ONE;
    let mut peak = 1.0f64;
    let mut quiet = 0u32;
    for n in 0..ctl.max_terms {
        term = step(n, term);
        sum = sum + term;
        if !(term.is_finite() && sum.is_finite()) {
            return Err(Error::NonFinite("series term"));
        }
        let t = term.norm();
        let s = sum.norm();
        peak = peak.max(t).max(s);
        if t <= ctl.rel_tol * s {
            // two quiet terms in a row: oscillating terms can dip through
            // zero magnitude once without the tail being spent
            quiet += 1;
            if quiet >= 2 {
                let ratio = peak / s;
                if !ratio.is_finite() || ratio > CANCELLATION_LIMIT {
                    return Err(Error::PrecisionLoss { ratio });
                }
                return Ok(sum.to_c64());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence { terms: ctl.max_terms })
}

fn gauss_series(
    a: Complex64,
    b: Complex64,
    c: f64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    let a = CDd::from_c64(a);
    let b = CDd::from_c64(b);
    let c = Dd::from_f64(c);
    sum_series(ctl, |n, t| {
        let nf = n as f64;
        let num = t * a.add_f64(nf) * b.add_f64(nf);
        let den = (c + nf) * (nf + 1.0);
        (num / den) * x
    })
}

/// Gauss hypergeometric function 2F1(a,b;c;x) for real c and real x <= 0.
///
/// Uses the Maclaurin series on -1/4 < x <= 0 and the Pfaff transformation
/// 2F1(a,b;c;x) = (1-x)^(-a) 2F1(a, c-b; c; x/(x-1)) for x <= -1/4, which
/// maps the argument into [1/5, 1) and sidesteps the heavy cancellation of
/// the alternating direct series (see the module docs).
pub fn gauss_2f1(
    a: Complex64,
    b: Complex64,
    c: f64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if !x.is_finite() || x > 0.0 {
        return Err(Error::DomainError { x });
    }
    if nonpositive_integer(c) {
        return Err(Error::DegenerateC { c });
    }
    if x == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let val = if x > -0.25 {
        gauss_series(a, b, c, x, ctl)?
    } else {
        let w = x / (x - 1.0);
        let pre = Complex64::new(1.0 - x, 0.0).powc(-a);
        let tail = gauss_series(a, Complex64::new(c, 0.0) - b, c, w, ctl)?;
        pre * tail
    };
    if !val.is_finite() {
        return Err(Error::NonFinite("2F1"));
    }
    Ok(val)
}

/// d/dx 2F1(a,b;c;x) = (a b / c) 2F1(a+1, b+1; c+1; x).
pub fn gauss_2f1_dx(
    a: Complex64,
    b: Complex64,
    c: f64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if nonpositive_integer(c) {
        return Err(Error::DegenerateC { c });
    }
    let f = gauss_2f1(a + 1.0, b + 1.0, c + 1.0, x, ctl)?;
    Ok(a * b / c * f)
}

fn kummer_series(
    a: Complex64,
    b: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    let a = CDd::from_c64(a);
    let b = CDd::from_c64(b);
    let y = CDd::from_c64(y);
    sum_series(ctl, |n, t| {
        let nf = n as f64;
        let num = t * a.add_f64(nf) * y;
        let den = b.add_f64(nf) * (nf + 1.0);
        num / den
    })
}

/// Kummer's confluent hypergeometric function M(a,b;y), entire in y.
///
/// For Re y < 0 the Kummer transformation M(a,b;y) = e^y M(b-a,b;-y) is
/// applied first so the series never fights the e^{Re y} decay.
pub fn kummer_m(
    a: Complex64,
    b: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if complex_nonpositive_integer(b) {
        return Err(Error::DegenerateB { b });
    }
    let val = if y.re < 0.0 {
        let refl = kummer_series(b - a, b, -y, ctl)?;
        y.exp() * refl
    } else {
        kummer_series(a, b, y, ctl)?
    };
    if !val.is_finite() {
        return Err(Error::NonFinite("kummer M"));
    }
    Ok(val)
}

/// d/dy M(a,b;y) = (a/b) M(a+1, b+1; y).
pub fn kummer_m_dy(
    a: Complex64,
    b: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if complex_nonpositive_integer(b) {
        return Err(Error::DegenerateB { b });
    }
    Ok(a / b * kummer_m(a + 1.0, b + 1.0, y, ctl)?)
}

/// Whittaker function M_{kw,mw}(y) = e^{-y/2} y^{mw+1/2} M(mw-kw+1/2, 1+2mw; y)
/// on the principal branch of y^{mw+1/2}.
pub fn whittaker_m(
    kw: Complex64,
    mw: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::BranchError);
    }
    let a = mw - kw + 0.5;
    let b = 2.0 * mw + 1.0;
    let m = kummer_m(a, b, y, ctl)?;
    let val = (-0.5 * y).exp() * y.powc(mw + 0.5) * m;
    if !val.is_finite() {
        return Err(Error::NonFinite("whittaker M"));
    }
    Ok(val)
}

/// d/dy M_{kw,mw}(y), via the Kummer derivative and the product rule.
pub fn whittaker_m_dy(
    kw: Complex64,
    mw: Complex64,
    y: Complex64,
    ctl: &SeriesControl,
) -> Result<Complex64, Error> {
    if y == Complex64::new(0.0, 0.0) {
        return Err(Error::BranchError);
    }
    let a = mw - kw + 0.5;
    let b = 2.0 * mw + 1.0;
    let m = kummer_m(a, b, y, ctl)?;
    let dm = kummer_m_dy(a, b, y, ctl)?;
    let val = (-0.5 * y).exp() * y.powc(mw + 0.5) * ((mw + 0.5) / y * m - 0.5 * m + dm);
    if !val.is_finite() {
        return Err(Error::NonFinite("whittaker M derivative"));
    }
    Ok(val)
}
