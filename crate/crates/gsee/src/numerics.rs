//! Small shared numerical kernels: adaptive quadrature and 1-D solvers.

/// Adaptive Simpson quadrature with absolute/relative termination.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            left + right + diff / 15.0
        } else {
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, 0.5 * (a + b), fm, whole, tol, 48)
}

/// Bisection on a bracketing interval. `f(lo)` and `f(hi)` must differ in sign.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, iters: u32) -> f64 {
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0, "bisect: endpoints do not bracket a root");
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, iters: u32) -> (f64, f64) {
    const GR: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GR * (b - a);
    let mut x2 = a + GR * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GR * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GR * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Expand `hi` geometrically until `f` changes sign relative to `f(lo)`,
/// then bisect. Returns `None` if no sign change is found.
pub(crate) fn bisect_expanding<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    mut hi: f64,
    max_hi: f64,
    iters: u32,
) -> Option<f64> {
    let flo = f(lo);
    let mut fhi = f(hi);
    while flo * fhi > 0.0 {
        hi *= 2.0;
        if hi > max_hi {
            return None;
        }
        fhi = f(hi);
    }
    Some(bisect(f, lo, hi, iters))
}
