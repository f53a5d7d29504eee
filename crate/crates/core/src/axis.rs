//! The symmetry axis `y = 0`.
//!
//! On the axis the label is purely imaginary, `u = i v`, and the
//! characteristic equation becomes the real relation
//!
//! ```text
//! v = 2 alpha(iv) [sqrt(alpha(iv)² + 1) - sqrt(alpha(iv)² + 1 - x)]
//! ```
//!
//! Branches are parametrised by `v`, not `x`: `x(v)` has a closed form and
//! stays regular at the exits, where the radicand `alpha² + 1 - x` vanishes
//! quadratically in `x`. A branch exit satisfies
//! `g(v) = v - 2 alpha(iv) sqrt(alpha(iv)² + 1) = 0`.

use crate::error::{Error, Result};
use crate::model::{InhomogeneityProfile, ModelParams};
use crate::num::{lit, tol, Real};
use crate::quad::{integrate, QuadSettings};
use crate::roots::{brent, linspace, sign_changes};

/// Residual of the exit condition, `g(v)`.
pub fn exit_function<T: Real>(profile: &InhomogeneityProfile<T>, v: T) -> T {
    let a = profile.alpha_on_imaginary(v);
    v - lit::<T>(2.0) * a * (a * a + T::one()).sqrt()
}

fn exit_function_deriv<T: Real>(profile: &InhomogeneityProfile<T>, v: T) -> T {
    let a = profile.alpha_on_imaginary(v);
    let da = profile.alpha_on_imaginary_deriv(v);
    let tau = (a * a + T::one()).sqrt();
    T::one() - lit::<T>(2.0) * da * (tau + a * a / tau)
}

/// Upper end of the `v` scan. The exponential growth of `alpha(iv)` drives
/// `g` (and the axis residual) negative beyond it.
pub fn scan_limit<T: Real>(profile: &InhomogeneityProfile<T>) -> T {
    let twenty = lit::<T>(20.0);
    match *profile {
        InhomogeneityProfile::Gaussian { alpha0, width } => lit::<T>(5.0) * alpha0 * width.sqrt() + twenty,
        InhomogeneityProfile::Constant { alpha0 } => {
            lit::<T>(4.0) * alpha0 * (alpha0 * alpha0 + T::one()).sqrt() + twenty
        }
        InhomogeneityProfile::Zero => twenty,
    }
}

/// Uniform scan grid `[0, scan_limit]` with step `min(0.1, width / 400)`.
pub fn scan_grid<T: Real>(profile: &InhomogeneityProfile<T>) -> Vec<T> {
    let mut step = lit::<T>(0.1);
    if let InhomogeneityProfile::Gaussian { width, .. } = *profile {
        step = step.min(width / lit(400.0));
    }
    let hi = scan_limit(profile);
    let n = (hi / step).ceil().to_usize().unwrap_or(1).max(1);
    linspace(T::zero(), hi, n)
}

fn polish<T: Real, F: Fn(T) -> T, D: Fn(T) -> T>(f: F, df: D, mut v: T, lo: T, hi: T) -> T {
    for _ in 0..4 {
        let fv = f(v);
        if fv == T::zero() {
            break;
        }
        let d = df(v);
        if !(d.abs() > T::zero()) {
            break;
        }
        let next = v - fv / d;
        if !(next >= lo && next <= hi) || f(next).abs() >= fv.abs() {
            break;
        }
        v = next;
    }
    v
}

fn refine_exit<T: Real>(profile: &InhomogeneityProfile<T>, lo: T, hi: T) -> Result<T> {
    let g = |v: T| exit_function(profile, v);
    let root = if lo == hi { lo } else { brent(g, lo, hi, tol(1e-15), 200)? };
    Ok(polish(g, |v| exit_function_deriv(profile, v), root, lo, hi))
}

/// All exit roots of `g` on `[0, scan_limit]`, ascending. Branch 1 is the
/// first, the trans-barrier branch the last.
pub fn exit_roots<T: Real>(profile: &InhomogeneityProfile<T>) -> Result<Vec<T>> {
    let grid = scan_grid(profile);
    sign_changes(|v| exit_function(profile, v), &grid)
        .into_iter()
        .map(|(lo, hi)| refine_exit(profile, lo, hi))
        .collect()
}

/// Exit point `(v_exit, x_exit)` of the branch whose exit root lies
/// nearest to `seed`.
pub fn exit_point<T: Real>(profile: &InhomogeneityProfile<T>, seed: T) -> Result<(T, T)> {
    let g = |v: T| exit_function(profile, v);
    let v = if g(seed) == T::zero() {
        seed
    } else {
        let grid = scan_grid(profile);
        let step = grid[1] - grid[0];
        let limit = scan_limit(profile);
        let mut found = None;
        let mut k = 0usize;
        // walk outward from the seed until the nearest sign change
        while found.is_none() {
            let r = step * T::from_usize(k).unwrap();
            if seed - r < T::zero() && seed + r > limit {
                break;
            }
            for (a, b) in [(seed + r, seed + r + step), (seed - r - step, seed - r)] {
                let a = a.max(T::zero());
                let b = b.min(limit);
                if a >= b {
                    continue;
                }
                let (ga, gb) = (g(a), g(b));
                if ga == T::zero() {
                    found = Some((a, a));
                } else if gb == T::zero() {
                    found = Some((b, b));
                } else if ga.signum() != gb.signum() {
                    found = Some((a, b));
                }
                if found.is_some() {
                    break;
                }
            }
            k += 1;
        }
        let (lo, hi) = found.ok_or_else(|| Error::NoRoot(format!("no exit root of g within [0, {limit}]")))?;
        refine_exit(profile, lo, hi)?
    };
    let a = profile.alpha_on_imaginary(v);
    Ok((v, a * a + T::one()))
}

/// Exit of the trans-barrier branch (largest exit root).
pub fn trans_barrier_exit<T: Real>(profile: &InhomogeneityProfile<T>) -> Result<(T, T)> {
    let roots = exit_roots(profile)?;
    let v = *roots
        .last()
        .ok_or_else(|| Error::NoRoot(format!("{} profile has no branch exit", profile.kind_name())))?;
    let a = profile.alpha_on_imaginary(v);
    Ok((v, a * a + T::one()))
}

/// `x(v)` on the pre-exit sheet, the exact inversion of the axis relation.
pub fn x_of_v<T: Real>(profile: &InhomogeneityProfile<T>, v: T) -> Result<T> {
    if v < T::zero() {
        return Err(Error::Domain(format!("v must be >= 0, got {v}")));
    }
    if v == T::zero() {
        return Ok(T::zero());
    }
    let s = continued_root(profile, v).ok_or(Error::PostExit {
        v: v.to_f64().unwrap_or(f64::NAN),
    })?;
    // rounding at the exit itself is not post-exit
    if s < -tol::<T>(1e-12) * v.max(T::one()) {
        return Err(Error::PostExit {
            v: v.to_f64().unwrap_or(f64::NAN),
        });
    }
    let a = profile.alpha_on_imaginary(v);
    Ok(a * a + T::one() - s * s)
}

/// Signed root `s = sqrt(alpha² + 1) - v / (2 alpha)` continued through the
/// exits; `None` where `alpha(iv) = 0` and `v > 0`.
pub fn continued_root<T: Real>(profile: &InhomogeneityProfile<T>, v: T) -> Option<T> {
    let a = profile.alpha_on_imaginary(v);
    if a == T::zero() {
        return if v == T::zero() { Some(T::one()) } else { None };
    }
    Some((a * a + T::one()).sqrt() - v / (lit::<T>(2.0) * a))
}

/// Axis residual `v - 2 alpha (tau - sqrt(alpha² + 1 - x))` with principal
/// roots; `None` outside the domain `alpha(iv)² + 1 >= x`.
pub fn axis_residual<T: Real>(profile: &InhomogeneityProfile<T>, x: T, v: T) -> Option<T> {
    let a = profile.alpha_on_imaginary(v);
    let t2 = a * a + T::one();
    if t2 < x {
        return None;
    }
    Some(v - lit::<T>(2.0) * a * (t2.sqrt() - (t2 - x).sqrt()))
}

/// All real `v >= 0` on pre-exit sheets with `x(v) = x`, ascending.
pub fn enumerate_axis_roots<T: Real>(profile: &InhomogeneityProfile<T>, x: T) -> Vec<T> {
    if x == T::zero() {
        return vec![T::zero()];
    }
    let radicand = |v: T| {
        let a = profile.alpha_on_imaginary(v);
        a * a + T::one() - x
    };
    let h = |v: T| axis_residual(profile, x, v).unwrap_or(T::nan());
    // insert the domain boundaries so roots hugging an exit are bracketed
    let grid = scan_grid(profile);
    let mut nodes = Vec::with_capacity(grid.len() + 4);
    for w in grid.windows(2) {
        nodes.push(w[0]);
        let (ra, rb) = (radicand(w[0]), radicand(w[1]));
        if (ra < T::zero()) != (rb < T::zero()) {
            if let Ok(b) = brent(radicand, w[0], w[1], tol(1e-15), 200) {
                // step onto the valid side
                let toward = if ra < T::zero() { T::one() } else { -T::one() };
                let mut nudge = b.abs().max(T::one()) * T::epsilon();
                let mut b = b;
                while radicand(b) < T::zero() && nudge < w[1] - w[0] {
                    b = b + toward * nudge;
                    nudge = nudge * lit(2.0);
                }
                nodes.push(b);
            }
        }
    }
    nodes.push(*grid.last().unwrap());
    let mut found: Vec<T> = Vec::new();
    for (lo, hi) in sign_changes(h, &nodes) {
        if lo == hi {
            found.push(lo);
        } else if let Ok(r) = brent(h, lo, hi, tol(1e-15), 200) {
            found.push(r);
        }
    }
    // an exit sits on the domain edge, where h touches zero without crossing
    for v in exit_roots(profile).unwrap_or_default() {
        if radicand(v).abs() <= tol::<T>(1e-12) * x.max(T::one()) {
            found.push(v);
        }
    }
    found.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut roots: Vec<T> = Vec::with_capacity(found.len());
    for r in found {
        if roots.last().is_none_or(|&last| (r - last).abs() > tol::<T>(1e-12)) {
            roots.push(r);
        }
    }
    roots
}

/// A point of the axis branch system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisPoint<T> {
    pub v: T,
    pub x: T,
    /// Signed `sqrt(alpha² + 1 - x)`; negative between the two exits.
    pub root: T,
}

impl<T: Real> AxisPoint<T> {
    /// Point on a pre-exit sheet.
    pub fn on_branch(profile: &InhomogeneityProfile<T>, v: T) -> Result<Self> {
        let x = x_of_v(profile, v)?;
        let a = profile.alpha_on_imaginary(v);
        Ok(AxisPoint {
            v,
            x,
            root: (a * a + T::one() - x).max(T::zero()).sqrt(),
        })
    }

    /// Point of the continued curve (either sheet).
    pub fn continued(profile: &InhomogeneityProfile<T>, v: T) -> Result<Self> {
        let s = continued_root(profile, v).ok_or_else(|| {
            Error::Domain(format!("v = {v} is not on the axis curve of a {} profile", profile.kind_name()))
        })?;
        let a = profile.alpha_on_imaginary(v);
        Ok(AxisPoint {
            v,
            x: a * a + T::one() - s * s,
            root: s,
        })
    }

    /// Exit point `x = alpha(iv)² + 1` (radicand zero).
    pub fn exit(profile: &InhomogeneityProfile<T>, v_exit: T) -> Self {
        let a = profile.alpha_on_imaginary(v_exit);
        AxisPoint {
            v: v_exit,
            x: a * a + T::one(),
            root: T::zero(),
        }
    }
}

/// `Q(v) = ∫₀ᵛ v₁ d[alpha(iv₁)]/dv₁ dv₁`.
pub fn axis_moment<T: Real>(profile: &InhomogeneityProfile<T>, v: T, quad: &QuadSettings<T>) -> Result<T> {
    if profile.is_uniform() {
        return Ok(T::zero());
    }
    integrate(|w: T| w * profile.alpha_on_imaginary_deriv(w), T::zero(), v, quad)
}

/// `Im sigma(x, 0) = (2/3)[tau³ - s³] - Q(v)` at an axis point.
pub fn axis_action<T: Real>(profile: &InhomogeneityProfile<T>, p: &AxisPoint<T>, quad: &QuadSettings<T>) -> Result<T> {
    let a = profile.alpha_on_imaginary(p.v);
    let tau = (a * a + T::one()).sqrt();
    let energy = lit::<T>(2.0) / lit(3.0) * (tau * tau * tau - p.root * p.root * p.root);
    Ok(energy - axis_moment(profile, p.v, quad)?)
}

/// `Im sigma` at the trans-barrier exit, i.e. `A / (2B)`.
pub fn exit_action<T: Real>(profile: &InhomogeneityProfile<T>, quad: &QuadSettings<T>) -> Result<T> {
    let (v, _) = trans_barrier_exit(profile)?;
    axis_action(profile, &AxisPoint::exit(profile, v), quad)
}

/// Tunneling exponent `A = 2 B Im sigma(x0, 0)`, `w ~ exp(-A)`. Reported raw;
/// it may be negative at and beyond resonance.
pub fn tunneling_exponent<T: Real>(model: &ModelParams<T>) -> Result<T> {
    Ok(lit::<T>(2.0) * model.b() * exit_action(&model.profile, &QuadSettings::default())?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSample<T> {
    pub x: T,
    pub v: T,
    pub im_sigma: T,
}

/// A real solution family `v(x)` of the axis relation.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBranch<T> {
    /// 1: conventional branch seeded at `v(0) = 0`; 2: trans-barrier branch.
    pub branch_id: u32,
    /// Ordered by increasing `v`.
    pub samples: Vec<AxisSample<T>>,
    pub v_exit: T,
    pub x_exit: T,
}

/// Pre-exit axis branches sampled at `n + 1` points each.
///
/// Branch 1 covers `v` in `[0, v_exit,1]`. The trans-barrier branch starts
/// at its exit `v_exit,2` and extends by `v_exit,2 - v_exit,1`.
pub fn axis_branches<T: Real>(profile: &InhomogeneityProfile<T>, n: usize, quad: &QuadSettings<T>) -> Result<Vec<AxisBranch<T>>> {
    let roots = exit_roots(profile)?;
    if roots.is_empty() {
        return Err(Error::NoRoot(format!("{} profile has no branch exit", profile.kind_name())));
    }
    let sample = |v: T, exit: bool| -> Result<AxisSample<T>> {
        let p = if exit {
            AxisPoint::exit(profile, v)
        } else {
            AxisPoint::on_branch(profile, v)?
        };
        Ok(AxisSample {
            x: p.x,
            v,
            im_sigma: axis_action(profile, &p, quad)?,
        })
    };
    let mut out = Vec::new();
    if matches!(profile, InhomogeneityProfile::Zero) {
        // v = 0 for every x up to the turning point
        let samples = linspace(T::zero(), T::one(), n)
            .into_iter()
            .map(|x| AxisSample {
                x,
                v: T::zero(),
                im_sigma: lit::<T>(2.0) / lit(3.0) * (T::one() - (T::one() - x).powf(lit(1.5))),
            })
            .collect();
        out.push(AxisBranch {
            branch_id: 1,
            samples,
            v_exit: T::zero(),
            x_exit: T::one(),
        });
        return Ok(out);
    }
    let v1 = roots[0];
    let nodes = linspace(T::zero(), v1, n);
    let samples = nodes
        .iter()
        .enumerate()
        .map(|(k, &v)| sample(v, k == n))
        .collect::<Result<Vec<_>>>()?;
    out.push(AxisBranch {
        branch_id: 1,
        samples,
        v_exit: v1,
        x_exit: AxisPoint::exit(profile, v1).x,
    });
    if roots.len() >= 2 {
        let v2 = *roots.last().unwrap();
        let hi = (v2 + (v2 - v1)).min(scan_limit(profile));
        let samples = linspace(v2, hi, n)
            .iter()
            .enumerate()
            .map(|(k, &v)| sample(v, k == 0))
            .collect::<Result<Vec<_>>>()?;
        out.push(AxisBranch {
            branch_id: 2,
            samples,
            v_exit: v2,
            x_exit: AxisPoint::exit(profile, v2).x,
        });
    }
    Ok(out)
}

/// The continued axis curve from the wire (`v = 0`) to the trans-barrier
/// exit: the hybridised branch seen at `y = 0`.
pub fn hybrid_axis_curve<T: Real>(profile: &InhomogeneityProfile<T>, n: usize, quad: &QuadSettings<T>) -> Result<Vec<AxisSample<T>>> {
    let (v2, _) = trans_barrier_exit(profile)?;
    linspace(T::zero(), v2, n)
        .into_iter()
        .map(|v| {
            let p = AxisPoint::continued(profile, v)?;
            Ok(AxisSample {
                x: p.x,
                v,
                im_sigma: axis_action(profile, &p, quad)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct ResonanceSettings<T> {
    pub root_tol: T,
    /// Width of the fit window below the resonance.
    pub fit_width: T,
    pub fit_points: usize,
    pub quad: QuadSettings<T>,
}

impl<T: Real> Default for ResonanceSettings<T> {
    fn default() -> Self {
        ResonanceSettings {
            root_tol: tol(1e-10),
            fit_width: lit(2.0),
            fit_points: 9,
            quad: QuadSettings::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceResult<T> {
    pub a_r: T,
    /// `A/B ≈ slope (a_R - a)` below resonance.
    pub slope: T,
    pub fit_window: (T, T),
    /// `A/B` at `a_R`.
    pub exponent_at_ar: T,
}

/// Resonant width for the Gaussian family with amplitude `alpha0`.
pub fn find_resonance<T: Real>(alpha0: T, bracket: (T, T), settings: &ResonanceSettings<T>) -> Result<ResonanceResult<T>> {
    find_resonance_in(|a| InhomogeneityProfile::gaussian(alpha0, a), bracket, settings)
}

/// Resonance search over an arbitrary one-parameter profile family.
pub fn find_resonance_in<T, F>(family: F, bracket: (T, T), settings: &ResonanceSettings<T>) -> Result<ResonanceResult<T>>
where
    T: Real,
    F: Fn(T) -> Result<InhomogeneityProfile<T>>,
{
    let (lo, hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let no_change = || Error::NoSignChange {
        lo: lo.to_f64().unwrap_or(f64::NAN),
        hi: hi.to_f64().unwrap_or(f64::NAN),
    };
    let half_exponent = |a: T| family(a).and_then(|p| exit_action(&p, &settings.quad));
    let (f_lo, f_hi) = match (half_exponent(lo), half_exponent(hi)) {
        (Ok(l), Ok(h)) => (l, h),
        _ => return Err(no_change()),
    };
    if !(f_lo.signum() != f_hi.signum() || f_lo == T::zero() || f_hi == T::zero()) {
        return Err(no_change());
    }
    let mut failure = None;
    let a_r = brent(
        |a| match half_exponent(a) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::nan()
            }
        },
        lo,
        hi,
        settings.root_tol,
        200,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let two = lit::<T>(2.0);
    let window = (a_r - settings.fit_width, a_r);
    let xs = linspace(window.0, window.1, settings.fit_points.max(2) - 1);
    let ys = xs
        .iter()
        .map(|&a| half_exponent(a).map(|v| two * v))
        .collect::<Result<Vec<T>>>()?;
    let slope = -least_squares_slope(&xs, &ys);
    Ok(ResonanceResult {
        a_r,
        slope,
        fit_window: window,
        exponent_at_ar: two * half_exponent(a_r)?,
    })
}

fn least_squares_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::from_usize(xs.len()).unwrap();
    let mx = xs.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ys.iter().fold(T::zero(), |a, &b| a + b) / n;
    let (num, den) = xs
        .iter()
        .zip(ys)
        .fold((T::zero(), T::zero()), |(num, den), (&x, &y)| {
            (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
        });
    num / den
}
