//! Bracketed scalar root finding (Brent) and sign-change scanning.

use crate::error::{Error, Result};
use crate::num::{lit, Real};

/// Brent's method on `[lo, hi]`. `f(lo)` and `f(hi)` must differ in sign
/// (or one of them be zero).
pub fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, hi: T, xtol: T, max_iter: usize) -> Result<T> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = lit::<T>(2.0);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + xtol * lit(0.5);
        let m = (c - b) * lit(0.5);
        if m.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let three = lit::<T>(3.0);
            if two * p < (three * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * m.signum()
        };
        fb = f(b);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: fb.to_f64().unwrap_or(f64::NAN),
    })
}

/// Evaluates `f` on `grid` and returns the sub-intervals over which it
/// changes sign. Non-finite samples split the scan. Exact zeros at grid
/// nodes are reported as degenerate brackets `(x, x)`.
pub fn sign_changes<T: Real, F: FnMut(T) -> T>(mut f: F, grid: &[T]) -> Vec<(T, T)> {
    let mut out = Vec::new();
    let mut prev: Option<(T, T)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == T::zero() {
            out.push((x, x));
        } else if let Some((xp, fp)) = prev {
            if fp != T::zero() && fp.signum() != fx.signum() {
                out.push((xp, x));
            }
        }
        prev = Some((x, fx));
    }
    out
}

/// `n + 1` evenly spaced nodes from `lo` to `hi` (endpoints exact).
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let n = n.max(1);
    let step = (hi - lo) / T::from_usize(n).unwrap();
    (0..=n)
        .map(|k| {
            if k == n {
                hi
            } else {
                lo + step * T::from_usize(k).unwrap()
            }
        })
        .collect()
}
