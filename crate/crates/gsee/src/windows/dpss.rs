//! Discrete prolate spheroidal sequences via the sinc-kernel eigenproblem.
//!
//! The matrix `A[n,m] = c/(pi (N+1/2)) sinc(c (n-m)/(N+1/2))` for
//! `n, m = -N..N` is symmetric Toeplitz; its largest eigenvalue is the
//! in-interval probability `1 - delta` of the discrete prolate window and the
//! corresponding eigenvector holds the window coefficients. Matrix-vector
//! products run through an FFT circulant embedding, and the top eigenpair
//! comes out of a fully reorthogonalized Lanczos iteration.

use crate::specfn::sinc;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Half-size used when a Slepian error is solved as part of width planning.
pub const DEFAULT_HALF_SIZE: usize = 1 << 14;

/// Converged top eigenpair of the sinc kernel, plus the autocorrelation of
/// the window coefficients used by the partial-interval tail sums.
pub struct DpssSolution {
    /// Kernel half-width parameter `c`.
    pub c: f64,
    /// Half-size `N`; the matrix dimension is `2N+1`.
    pub half_size: usize,
    /// `1 - lambda_max`, the two-sided error beyond `c`.
    pub delta: f64,
    /// Unit-norm window coefficients `f(-N..N)`.
    pub vector: Vec<f64>,
    /// Lanczos iterations consumed.
    pub iterations: usize,
    autocorr: Vec<f64>,
}

struct ToeplitzOp {
    m: usize,
    len: usize,
    kernel_hat: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl ToeplitzOp {
    fn new(c: f64, nn: usize) -> Self {
        let m = 2 * nn + 1;
        let len = (2 * m - 1).next_power_of_two();
        let scale = c / (PI * (nn as f64 + 0.5));
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let mut circ = vec![Complex64::new(0.0, 0.0); len];
        for k in 0..m {
            let v = scale * sinc(c * k as f64 / (nn as f64 + 0.5));
            circ[k].re = v;
            if k > 0 {
                circ[len - k].re = v;
            }
        }
        fft.process(&mut circ);
        ToeplitzOp { m, len, kernel_hat: circ, fft, ifft }
    }

    fn apply(&self, v: &[f64], out: &mut [f64], buf: &mut Vec<Complex64>) {
        buf.clear();
        buf.resize(self.len, Complex64::new(0.0, 0.0));
        for (b, &x) in buf.iter_mut().zip(v.iter()) {
            b.re = x;
        }
        self.fft.process(buf);
        for (b, k) in buf.iter_mut().zip(self.kernel_hat.iter()) {
            *b *= k;
        }
        self.ifft.process(buf);
        let norm = 1.0 / self.len as f64;
        for i in 0..self.m {
            out[i] = buf[i].re * norm;
        }
    }
}

/// Number of eigenvalues of the symmetric tridiagonal `(d, e)` below `sigma`.
fn sturm_count(d: &[f64], e: &[f64], sigma: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - sigma;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let denom = if q.abs() < 1e-300 { 1e-300_f64.copysign(q) } else { q };
        q = d[i] - sigma - e[i - 1] * e[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue and eigenvector of a symmetric tridiagonal matrix,
/// by Sturm bisection plus inverse iteration.
fn tridiag_top_pair(d: &[f64], e: &[f64]) -> (f64, Vec<f64>) {
    let n = d.len();
    if n == 1 {
        return (d[0], vec![1.0]);
    }
    // Gershgorin upper bound
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for i in 0..n {
        let r = (if i > 0 { e[i - 1].abs() } else { 0.0 })
            + (if i < n - 1 { e[i].abs() } else { 0.0 });
        hi = hi.max(d[i] + r);
        lo = lo.min(d[i] - r);
    }
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(d, e, mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    // inverse iteration on (T - (theta + eps) I) with partial pivoting
    let shift = theta + 1e-13 * theta.abs().max(1.0);
    let mut y = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..4 {
        y = tridiag_solve(d, e, shift, &y);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in y.iter_mut() {
            *v /= norm;
        }
    }
    (theta, y)
}

/// Solve `(T - shift I) x = b` for symmetric tridiagonal `T` by banded
/// Gaussian elimination with partial pivoting (the system is nearly singular
/// by construction, which inverse iteration relies on).
fn tridiag_solve(d: &[f64], e: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut dl = e.to_vec();
    let mut dd: Vec<f64> = d.iter().map(|v| v - shift).collect();
    let mut du = e.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut rhs = b.to_vec();
    for i in 0..n - 1 {
        if dd[i].abs() >= dl[i].abs() {
            let piv = if dd[i].abs() < 1e-300 { 1e-300_f64.copysign(dd[i]) } else { dd[i] };
            let fact = dl[i] / piv;
            dd[i + 1] -= fact * du[i];
            rhs[i + 1] -= fact * rhs[i];
            if i + 2 < n {
                du2[i] = 0.0;
            }
        } else {
            let fact = dd[i] / dl[i];
            dd[i] = dl[i];
            let tmp = dd[i + 1];
            dd[i + 1] = du[i] - fact * tmp;
            du[i] = tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= fact * rhs[i];
        }
    }
    let mut x = vec![0.0; n];
    let last = if dd[n - 1].abs() < 1e-300 { 1e-300_f64.copysign(dd[n - 1]) } else { dd[n - 1] };
    x[n - 1] = rhs[n - 1] / last;
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    }
    x
}

/// Lanczos with full reorthogonalization for the dominant eigenpair.
fn lanczos_top(op: &ToeplitzOp, tol: f64, max_iter: usize) -> Result<(f64, Vec<f64>, usize)> {
    let m = op.m;
    let mut buf: Vec<Complex64> = Vec::new();
    // symmetric, strictly positive start: a cosine taper
    let mut v: Vec<f64> = (0..m)
        .map(|i| {
            let z = (i as f64 - (m as f64 - 1.0) / 2.0) / (m as f64 / 2.0);
            (0.5 * PI * z).cos() + 1e-3
        })
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);

    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; m];
    for j in 0..max_iter {
        op.apply(&basis[j], &mut w, &mut buf);
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        // w -= alpha v_j + beta v_{j-1}, then full reorthogonalization
        for i in 0..m {
            w[i] -= alpha * basis[j][i];
        }
        if j > 0 {
            let beta_prev = betas[j - 1];
            for i in 0..m {
                w[i] -= beta_prev * basis[j - 1][i];
            }
        }
        for _ in 0..2 {
            for q in basis.iter() {
                let proj = dot(q, &w);
                if proj.abs() > 0.0 {
                    for i in 0..m {
                        w[i] -= proj * q[i];
                    }
                }
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        // periodically assemble the Ritz pair and test the residual
        if (j >= 8 && j % 6 == 0) || j + 1 == max_iter || beta < 1e-14 {
            let (theta, y) = tridiag_top_pair(&alphas, &betas);
            let mut ritz = vec![0.0; m];
            for (k, q) in basis.iter().enumerate() {
                let yk = y[k];
                for i in 0..m {
                    ritz[i] += yk * q[i];
                }
            }
            let nrm = ritz.iter().map(|x| x * x).sum::<f64>().sqrt();
            ritz.iter_mut().for_each(|x| *x /= nrm);
            let mut av = vec![0.0; m];
            op.apply(&ritz, &mut av, &mut buf);
            let res = av
                .iter()
                .zip(ritz.iter())
                .map(|(a, r)| (a - theta * r) * (a - theta * r))
                .sum::<f64>()
                .sqrt();
            if res <= tol || beta < 1e-14 {
                return Ok((theta, ritz, j + 1));
            }
        }
        if beta < 1e-300 {
            break;
        }
        betas.push(beta);
        let next: Vec<f64> = w.iter().map(|x| x / beta).collect();
        basis.push(next);
    }
    Err(Error::NonConvergence(format!(
        "Lanczos did not reach residual {tol} in {max_iter} iterations"
    )))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Solve the DPSS eigenproblem at half-size `nn`.
pub fn solve(c: f64, nn: usize) -> Result<DpssSolution> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("dpss: c = {c} must be positive")));
    }
    if nn < 16 {
        return Err(Error::Domain(format!("dpss: half-size {nn} below the minimum of 16")));
    }
    let op = ToeplitzOp::new(c, nn);
    let (theta, mut vector, iterations) = lanczos_top(&op, 1e-13, 320)?;
    // sign convention: positive center
    if vector[nn] < 0.0 {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    let autocorr = autocorrelation(&vector);
    Ok(DpssSolution {
        c,
        half_size: nn,
        delta: 1.0 - theta,
        vector,
        iterations,
        autocorr,
    })
}

fn autocorrelation(f: &[f64]) -> Vec<f64> {
    let m = f.len();
    let len = (2 * m - 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(len);
    let ifft = planner.plan_fft_inverse(len);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (b, &x) in buf.iter_mut().zip(f.iter()) {
        b.re = x;
    }
    fft.process(&mut buf);
    for b in buf.iter_mut() {
        *b = Complex64::new(b.norm_sqr(), 0.0);
    }
    ifft.process(&mut buf);
    let norm = 1.0 / len as f64;
    (0..m).map(|k| buf[k].re * norm).collect()
}

impl DpssSolution {
    /// One-sided tail `Pr[x > tau]` with `x = (N + 1/2) theta` the kernel
    /// coordinate, from the closed-form partial-interval sums
    /// `(1/2pi) [R(0)(pi - theta1) - 2 sum_k R(k) sin(k theta1)/k]`.
    pub fn upper_tail(&self, tau: f64) -> f64 {
        let scale = self.half_size as f64 + 0.5;
        let theta1 = tau / scale;
        if theta1 >= PI {
            return 0.0;
        }
        let r = &self.autocorr;
        let mut sum = 0.0;
        for (k, rk) in r.iter().enumerate().skip(1) {
            sum += rk * (k as f64 * theta1).sin() / k as f64;
        }
        (r[0] * (PI - theta1) - 2.0 * sum) / (2.0 * PI)
    }
}

type CacheKey = (u64, usize);
static SOLUTION_CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<DpssSolution>>>> = OnceLock::new();

/// Cached [`solve`]: repeated queries at the same `(c, nn)` share one
/// eigensolve. Thread-safe.
pub fn solve_cached(c: f64, nn: usize) -> Result<Arc<DpssSolution>> {
    let cache = SOLUTION_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (c.to_bits(), nn);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let sol = Arc::new(solve(c, nn)?);
    cache.lock().unwrap().insert(key, sol.clone());
    Ok(sol)
}
