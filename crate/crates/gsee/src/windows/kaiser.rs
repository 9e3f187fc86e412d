//! Exact Kaiser-window error integrals.
//!
//! Everything is expressed in the kernel coordinate `x = N theta`. The error
//! density is proportional to `sin^2(sqrt(x^2 - (pi a)^2))/(x^2 - (pi a)^2)`
//! (the `sinh^2` branch for `|x| < pi a`), and tail masses are reduced by the
//! change of variables `u = sqrt(x^2 - (pi a)^2)` to
//! `int (1 - cos 2u) / (u sqrt(u^2 + (pi a)^2)) du`, which is then integrated
//! by parts twice so only a fast-decaying oscillatory remainder needs
//! numerical treatment.

use crate::numerics::adaptive_simpson;
use crate::specfn::{self, Order};
use crate::{Error, Result};
use std::f64::consts::PI;

const SPECFN_OPTS: specfn::EvalOptions = specfn::EvalOptions { rel_tol: 1e-14, max_terms: 500 };

// Below this value of 2*pi*alpha the normalization is formed directly from
// I and L; above it the cancellation-free difference form takes over.
const NORM_PRODUCT_MAX: f64 = 12.0;

/// The N-independent normalization integral
/// `(pi/2) [I0(2 pi a)(2 + pi L1(2 pi a)) - pi I1(2 pi a) L0(2 pi a)]`.
pub fn normalization(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("kaiser normalization: alpha = {alpha} must be > 0")));
    }
    let x = 2.0 * PI * alpha;
    if x <= NORM_PRODUCT_MAX {
        let i0 = specfn::modified_bessel(Order::Zero, x, &SPECFN_OPTS)?;
        let i1 = specfn::modified_bessel(Order::One, x, &SPECFN_OPTS)?;
        let l0 = specfn::modified_struve(Order::Zero, x, &SPECFN_OPTS)?;
        let l1 = specfn::modified_struve(Order::One, x, &SPECFN_OPTS)?;
        Ok(PI / 2.0 * (i0 * (2.0 + PI * l1) - PI * i1 * l0))
    } else {
        let value = normalization_log(alpha)?.exp();
        if !value.is_finite() {
            return Err(Error::Overflow(format!(
                "kaiser normalization overflows at alpha = {alpha}; use normalization_log"
            )));
        }
        Ok(value)
    }
}

/// `ln` of [`normalization`], finite for all `alpha` up to ~100.
pub fn normalization_log(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("kaiser normalization: alpha = {alpha} must be > 0")));
    }
    let x = 2.0 * PI * alpha;
    // I0 L1 - I1 L0 cancels to O(e^x); rewrite through the stable differences
    // s_nu = I_nu - L_nu:  F = 2 I0 + pi (I1 s0 - I0 s1), normalization = (pi/2) F.
    let i0s = specfn::modified_bessel_scaled(Order::Zero, x, &SPECFN_OPTS)?;
    let i1s = specfn::modified_bessel_scaled(Order::One, x, &SPECFN_OPTS)?;
    let s0 = specfn::bessel_struve_diff(Order::Zero, x);
    let s1 = specfn::bessel_struve_diff(Order::One, x);
    let f_scaled = 2.0 * i0s + PI * (i1s * s0 - i0s * s1);
    Ok((PI / 2.0).ln() + x + f_scaled.ln())
}

/// `int_{u0}^inf (1 - cos 2u) / (u sqrt(u^2 + pa^2)) du` for `u0 > 0`.
///
/// The non-oscillatory part is `arcsinh(pa/u0)/pa`; the cosine part is
/// integrated by parts twice, leaving boundary terms in `Ci` plus a remainder
/// with integrand `~ cos(2x)/x^4` that is summed over half-period segments.
/// Truncation of that remainder is below 1e-9 absolute.
pub fn tail_u_integral(u0: f64, pa: f64) -> f64 {
    debug_assert!(u0 > 0.0 && pa > 0.0);
    let ci = |t: f64| specfn::cosine_integral(t).expect("positive argument");
    let t0 = (pa / u0).asinh() / pa;
    let hyp = (u0 * u0 + pa * pa).sqrt();
    let t1 = ci(2.0 * u0) / hyp;
    let g0 = (4.0 * u0 * u0 * ci(2.0 * u0) - (2.0 * u0).cos() - 2.0 * u0 * (2.0 * u0).sin()) / 8.0;
    let t2 = g0 / hyp.powi(3);
    // remainder integrand: 3x (cos 2x + 2x sin 2x - 4x^2 Ci(2x)) / (8 (x^2+pa^2)^{5/2})
    let rem = |x: f64| {
        let c2 = (2.0 * x).cos();
        let s2 = (2.0 * x).sin();
        3.0 * x * (c2 + 2.0 * x * s2 - 4.0 * x * x * ci(2.0 * x))
            / (8.0 * (x * x + pa * pa).powf(2.5))
    };
    let mut t3 = 0.0;
    let mut lo = u0;
    let seg = PI / 2.0;
    // 128 half-period segments reach u0 + 200; the per-period cancellation
    // beyond that leaves < 1e-9.
    for _ in 0..128 {
        let hi = lo + seg;
        let v = adaptive_simpson(&rem, lo, hi, 1e-13);
        t3 += v;
        lo = hi;
        if v.abs() < 1e-15 && lo > u0 + 20.0 {
            break;
        }
    }
    t0 + t1 + t2 + t3
}

/// Exact two-sided tail probability beyond `c = pi sqrt(delta_cap^2 + alpha^2)`.
pub fn two_sided_tail(alpha: f64, delta_cap: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(delta_cap > 0.0) {
        return Err(Error::Domain(format!(
            "kaiser tail: alpha = {alpha}, delta_cap = {delta_cap} must be positive"
        )));
    }
    let raw = tail_u_integral(PI * delta_cap, PI * alpha);
    Ok(raw / normalization(alpha)?)
}

/// `ln` of the exact two-sided tail; usable when the tail underflows.
pub fn two_sided_tail_log(alpha: f64, delta_cap: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(delta_cap > 0.0) {
        return Err(Error::Domain(format!(
            "kaiser tail: alpha = {alpha}, delta_cap = {delta_cap} must be positive"
        )));
    }
    let raw = tail_u_integral(PI * delta_cap, PI * alpha);
    Ok(raw.ln() - normalization_log(alpha)?)
}

/// One-sided upper tail `Pr[x > tau]` of the Kaiser error density, `tau >= 0`.
pub fn upper_tail(alpha: f64, tau: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(tau >= 0.0) {
        return Err(Error::Domain(format!(
            "kaiser upper tail: alpha = {alpha} must be > 0 and tau = {tau} >= 0"
        )));
    }
    let pa = PI * alpha;
    let z = normalization(alpha)?;
    if tau >= pa {
        let u0 = ((tau - pa).max(0.0) * (tau + pa)).sqrt().max(1e-9);
        Ok(0.5 * tail_u_integral(u0, pa) / z)
    } else {
        // sinh branch on [tau, pa), then the whole oscillatory branch.
        let sinh_part = adaptive_simpson(
            &|x: f64| {
                let v2 = pa * pa - x * x;
                if v2 <= 0.0 {
                    1.0
                } else {
                    let v = v2.sqrt();
                    (v.sinh() / v).powi(2)
                }
            },
            tau,
            pa,
            1e-13 * z,
        );
        Ok((sinh_part + 0.5 * tail_u_integral(1e-9, pa)) / z)
    }
}

/// Asymptotic tail series with 1 to 5 terms:
/// `4 sqrt(a) e^{-2 pi a} [C - 5C/(16 pi a) - ...]` with
/// `C = ln(2a/Delta) + Ci(2 pi Delta)`.
///
/// Returns the value together with a reliability flag that is false for
/// `alpha < 1` where the expansion degrades.
pub fn tail_series(alpha: f64, delta_cap: f64, order: u32) -> Result<(f64, bool)> {
    if !(alpha > 0.0) || !(delta_cap > 0.0) {
        return Err(Error::Domain("kaiser series: alpha and delta_cap must be positive".into()));
    }
    if !(1..=5).contains(&order) {
        return Err(Error::Domain(format!("kaiser series: order {order} not in 1..=5")));
    }
    let d = delta_cap;
    let cc = (2.0 * alpha / d).ln() + specfn::cosine_integral(2.0 * PI * d)?;
    let pa = PI * alpha;
    let (c2, s2) = ((2.0 * PI * d).cos(), (2.0 * PI * d).sin());
    let pd = PI * d;
    let mut bracket = cc;
    if order >= 2 {
        bracket -= 5.0 * cc / (16.0 * pa);
    }
    if order >= 3 {
        bracket -= (64.0 * c2 + 128.0 * pd * s2 + 79.0 * cc - 128.0 * pd * pd)
            / (512.0 * pa * pa);
    }
    if order >= 4 {
        bracket += 5.0 * (64.0 * c2 + 128.0 * pd * s2 - 323.0 * cc - 128.0 * pd * pd)
            / (8192.0 * pa.powi(3));
    }
    if order >= 5 {
        let inner = 2.0 * pd * pd * (79.0 + 192.0 * pd * pd)
            + (497.0 - 1152.0 * pd * pd) * c2
            + 2.0 * pd * (497.0 - 384.0 * pd * pd) * s2;
        bracket -= (195_253.0 * cc + 128.0 * inner) / (524_288.0 * pa.powi(4));
    }
    let value = 4.0 * alpha.sqrt() * (-2.0 * pa).exp() * bracket;
    Ok((value, alpha >= 1.0))
}

/// Solve the exact two-sided tail for `alpha` at fixed `delta_cap`.
pub fn solve_alpha(delta: f64, delta_cap: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("solve_alpha: delta = {delta} not in (0,1)")));
    }
    let f = |a: f64| (two_sided_tail(a, delta_cap).unwrap_or(f64::NAN) / delta).ln();
    let (mut lo, mut hi) = (0.02, 8.0);
    let mut flo = f(lo);
    let mut fhi = f(hi);
    while flo < 0.0 {
        // delta is large even at the small-alpha end
        lo *= 0.5;
        if lo < 1e-6 {
            return Err(Error::Infeasible(format!("no Kaiser alpha reaches delta = {delta}")));
        }
        flo = f(lo);
    }
    while fhi > 0.0 {
        hi *= 1.5;
        if hi > 60.0 {
            return Err(Error::Infeasible(format!("delta = {delta} below the Kaiser f64 range")));
        }
        fhi = f(hi);
    }
    Ok(crate::numerics::bisect(&f, lo, hi, 90))
}

/// Width of the confidence interval for the window `(alpha, delta_cap)`.
pub fn half_width(alpha: f64, delta_cap: f64) -> f64 {
    PI * alpha.hypot(delta_cap)
}

/// Minimize `c = pi hypot(alpha, delta_cap)` over `delta_cap` at fixed target
/// error. Returns `(c, alpha, delta_cap)`.
pub fn solve_width_optimized(delta: f64) -> Result<(f64, f64, f64)> {
    let c_of = |d: f64| -> f64 {
        match solve_alpha(delta, d) {
            Ok(a) => half_width(a, d),
            Err(_) => f64::INFINITY,
        }
    };
    let (d_opt, _) = crate::numerics::golden_min(&c_of, 0.02, 1.2, 44);
    let a = solve_alpha(delta, d_opt)?;
    Ok((half_width(a, d_opt), a, d_opt))
}

/// At fixed half-width `c`, the `delta_cap` minimizing the exact tail.
pub fn optimize_delta_cap(c: f64) -> Result<f64> {
    if !(c > PI * 0.05) {
        return Err(Error::Domain(format!("optimize_delta_cap: c = {c} too small")));
    }
    let dmax = (c / PI - 1e-9).min(1.2);
    let tail_of = |d: f64| -> f64 {
        let a2 = (c / PI) * (c / PI) - d * d;
        if a2 <= 1e-12 {
            return f64::INFINITY;
        }
        two_sided_tail(a2.sqrt(), d).unwrap_or(f64::INFINITY)
    };
    let (d_opt, _) = crate::numerics::golden_min(&tail_of, 1e-4, dmax, 48);
    Ok(d_opt)
}
