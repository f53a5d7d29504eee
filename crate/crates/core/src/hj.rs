//! Hamilton–Jacobi solution under the barrier by variation of constants.
//!
//! For `x > 0` the action is
//!
//! ```text
//! sigma(x, y) = y alpha(u) + i ∫₀ˣ sqrt(alpha(u)² + 1 - x₁) dx₁ - ∫₀ᵘ w alpha'(w) dw
//! ```
//!
//! with the complex label `u(x, y)` fixed by
//! `F(u) = u - y - 2 i alpha(u) [tau - s] = 0`, where `tau = sqrt(alpha² + 1)`
//! and `s = sqrt(alpha² + 1 - x)`.
//!
//! The label is solved together with `s` as a 2x2 complex Newton system
//! `{s² = alpha² + 1 - x, F = 0}`. This stays regular where `s` passes
//! through zero (branch exits), which is exactly where a scalar Newton on
//! `F` with an explicit square root degenerates. Both radicals are tracked
//! by continuity, never by principal value.

use crate::error::{Error, Result};
use crate::model::{InhomogeneityProfile, ModelParams};
use crate::num::{i_unit, lit, re, solve2, sqrt_near, tol, Cx, Real};
use crate::quad::{integrate_segment, QuadSettings};

/// The two square roots entering the closed-form kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radicals<T> {
    /// `sqrt(alpha² + 1)`
    pub tau: Cx<T>,
    /// `sqrt(alpha² + 1 - x)`
    pub root: Cx<T>,
}

impl<T: Real> Radicals<T> {
    pub fn principal(alpha: Cx<T>, x: T) -> Self {
        let t2 = alpha * alpha + T::one();
        Radicals {
            tau: t2.sqrt(),
            root: (t2 - x).sqrt(),
        }
    }

    /// Radicals on the sheets closest to `prev`.
    pub fn near(alpha: Cx<T>, x: T, prev: &Radicals<T>) -> Self {
        let t2 = alpha * alpha + T::one();
        Radicals {
            tau: sqrt_near(t2, prev.tau),
            root: sqrt_near(t2 - x, prev.root),
        }
    }

    /// Radicals on the sheet implied by a label `u` that solves the
    /// characteristic equation at `(x, y)`.
    pub fn implied(alpha: Cx<T>, x: T, y: T, u: Cx<T>) -> Self {
        let mut r = Self::principal(alpha, x);
        if alpha.norm() > T::zero() {
            let implied = r.tau - (u - y) / (i_unit::<T>() * alpha * lit::<T>(2.0));
            r.root = sqrt_near(alpha * alpha + T::one() - x, implied);
        }
        r
    }
}

/// `∫₀ˣ alpha / sqrt(alpha² + 1 - x₁) dx₁` with `alpha` held fixed,
/// principal radicals.
pub fn kernel_integral<T: Real>(alpha: Cx<T>, x: T) -> Cx<T> {
    kernel_from(alpha, &Radicals::principal(alpha, x))
}

/// Kernel on explicitly chosen sheets: `2 alpha (tau - s)`.
pub fn kernel_from<T: Real>(alpha: Cx<T>, rad: &Radicals<T>) -> Cx<T> {
    alpha * (rad.tau - rad.root) * lit::<T>(2.0)
}

/// `∫₀ˣ sqrt(alpha² + 1 - x₁) dx₁`, principal radicals.
pub fn energy_integral<T: Real>(alpha: Cx<T>, x: T) -> Cx<T> {
    energy_from(&Radicals::principal(alpha, x))
}

/// `(2/3) (tau³ - s³)`.
pub fn energy_from<T: Real>(rad: &Radicals<T>) -> Cx<T> {
    (rad.tau * rad.tau * rad.tau - rad.root * rad.root * rad.root) * (lit::<T>(2.0) / lit(3.0))
}

/// A solved characteristic: label and tracked radicals at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoint<T> {
    pub x: T,
    pub y: T,
    pub u: Cx<T>,
    pub rad: Radicals<T>,
}

impl<T: Real> CharPoint<T> {
    /// Seed on the wire: `u(0, y) = y`, `s = tau`.
    pub fn on_wire(profile: &InhomogeneityProfile<T>, y: T) -> Self {
        let u = re(y);
        let rad = Radicals::principal(profile.alpha(u), T::zero());
        CharPoint {
            x: T::zero(),
            y,
            u,
            rad,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonSettings<T> {
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for NewtonSettings<T> {
    fn default() -> Self {
        NewtonSettings {
            tol: tol(1e-12),
            max_iter: 50,
        }
    }
}

/// Residuals `(s² - alpha² - 1 + x, F)` of the joint system.
pub fn joint_residual<T: Real>(profile: &InhomogeneityProfile<T>, p: &CharPoint<T>) -> (Cx<T>, Cx<T>) {
    let a = profile.alpha(p.u);
    let e1 = p.rad.root * p.rad.root - a * a - T::one() + p.x;
    let e2 = p.u - p.y - i_unit::<T>() * kernel_from(a, &p.rad);
    (e1, e2)
}

fn joint_jacobian<T: Real>(profile: &InhomogeneityProfile<T>, p: &CharPoint<T>) -> [[Cx<T>; 2]; 2] {
    let two = lit::<T>(2.0);
    let i = i_unit::<T>();
    let a = profile.alpha(p.u);
    let da = profile.alpha_deriv(p.u);
    let s = p.rad.root;
    let tau = p.rad.tau;
    [
        [-(a * da) * two, s * two],
        [
            re(T::one()) - i * two * da * (tau - s) - i * two * a * (a * da / tau),
            i * two * a,
        ],
    ]
}

/// Newton refinement of `(u, s)` at fixed `(x, y)` from `guess`.
/// Returns the converged point and the iteration count.
pub fn refine<T: Real>(
    profile: &InhomogeneityProfile<T>,
    guess: CharPoint<T>,
    settings: &NewtonSettings<T>,
) -> Result<(CharPoint<T>, usize)> {
    let mut p = guess;
    p.rad.tau = sqrt_near(profile.alpha(p.u) * profile.alpha(p.u) + T::one(), p.rad.tau);
    let mut last = T::infinity();
    for it in 0..=settings.max_iter {
        let (e1, e2) = joint_residual(profile, &p);
        let r = e1.norm().max(e2.norm());
        last = r;
        if !r.is_finite() {
            break;
        }
        if r < settings.tol {
            return Ok((p, it));
        }
        if it == settings.max_iter {
            break;
        }
        let j = joint_jacobian(profile, &p);
        let Some([du, ds]) = solve2(j, [-e1, -e2]) else {
            break;
        };
        p.u = p.u + du;
        p.rad.root = p.rad.root + ds;
        let a = profile.alpha(p.u);
        p.rad.tau = sqrt_near(a * a + T::one(), p.rad.tau);
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iter,
        residual: last.to_f64().unwrap_or(f64::NAN),
    })
}

/// Tangent `(du/dx, ds/dx)` of the solution curve at fixed `y`.
pub fn tangent<T: Real>(profile: &InhomogeneityProfile<T>, p: &CharPoint<T>) -> Option<[Cx<T>; 2]> {
    // d e1/dx = 1, d e2/dx = 0
    solve2(joint_jacobian(profile, p), [re(-T::one()), re(T::zero())])
}

#[derive(Debug, Clone, Copy)]
pub struct MarchSettings<T> {
    pub newton: NewtonSettings<T>,
    pub initial_step: T,
    pub min_step: T,
    /// A step needing more Newton iterations than this is retried at half size.
    pub max_fast_iterations: usize,
    /// Largest accepted change of `u` or `s` across one step.
    pub max_jump: T,
    /// Hard cap on attempted steps per `advance_to` call.
    pub max_steps: usize,
}

impl<T: Real> Default for MarchSettings<T> {
    fn default() -> Self {
        MarchSettings {
            newton: NewtonSettings::default(),
            initial_step: lit(0.02),
            min_step: tol(1e-10),
            max_fast_iterations: 5,
            max_jump: lit(0.5),
            max_steps: 1_000_000,
        }
    }
}

/// Continuation of one branch of `u(x, y)` in `x` at fixed `y`, with
/// adaptive step halving.
#[derive(Debug, Clone)]
pub struct Continuation<'a, T> {
    profile: &'a InhomogeneityProfile<T>,
    state: CharPoint<T>,
    step: T,
    settings: MarchSettings<T>,
}

impl<'a, T: Real> Continuation<'a, T> {
    /// Starts on the wire at `x = 0` with `u = y`.
    pub fn from_wire(profile: &'a InhomogeneityProfile<T>, y: T, settings: MarchSettings<T>) -> Self {
        Self::from_point(profile, CharPoint::on_wire(profile, y), settings)
    }

    /// Starts from an already converged point.
    pub fn from_point(profile: &'a InhomogeneityProfile<T>, state: CharPoint<T>, settings: MarchSettings<T>) -> Self {
        Continuation {
            profile,
            state,
            step: settings.initial_step,
            settings,
        }
    }

    pub fn state(&self) -> &CharPoint<T> {
        &self.state
    }

    /// Marches to `x_target` (either direction).
    pub fn advance_to(&mut self, x_target: T) -> Result<&CharPoint<T>> {
        for _ in 0..self.settings.max_steps {
            let gap = x_target - self.state.x;
            if gap == T::zero() {
                return Ok(&self.state);
            }
            let h = self.step.min(gap.abs());
            let dx = if gap > T::zero() { h } else { -h };
            let mut guess = self.state;
            guess.x = self.state.x + dx;
            if h == gap.abs() {
                guess.x = x_target;
            }
            if let Some([du, ds]) = tangent(self.profile, &self.state) {
                let lin_u = du * dx;
                let lin_s = ds * dx;
                if lin_u.norm() <= self.settings.max_jump && lin_s.norm() <= self.settings.max_jump {
                    guess.u = guess.u + lin_u;
                    guess.rad.root = guess.rad.root + lin_s;
                }
            }
            let accepted = match refine(self.profile, guess, &self.settings.newton) {
                Ok((p, iters)) => {
                    let jump = (p.u - self.state.u).norm().max((p.rad.root - self.state.rad.root).norm());
                    if iters <= self.settings.max_fast_iterations && jump <= self.settings.max_jump {
                        Some((p, iters))
                    } else {
                        None
                    }
                }
                Err(_) => None,
            };
            match accepted {
                Some((p, iters)) => {
                    self.state = p;
                    if iters <= 3 {
                        self.step = (self.step * lit(1.5)).min(self.settings.initial_step);
                    }
                }
                None => {
                    self.step = h * lit(0.5);
                    if self.step < self.settings.min_step {
                        return Err(self.jump_error());
                    }
                }
            }
        }
        Err(self.jump_error())
    }

    fn jump_error(&self) -> Error {
        Error::BranchJump {
            x: self.state.x.to_f64().unwrap_or(f64::NAN),
            min_step: self.settings.min_step.to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// Label `u(x, y)` continued in `x` from the wire, where `u_init` is
/// polished to the wire root `u(0, y) = y`.
pub fn solve_u<T: Real>(model: &ModelParams<T>, x: T, y: T, u_init: Cx<T>) -> Result<Cx<T>> {
    solve_u_with(&model.profile, x, y, u_init, &MarchSettings::default()).map(|p| p.u)
}

/// As [`solve_u`], returning the full characteristic point.
pub fn solve_u_with<T: Real>(
    profile: &InhomogeneityProfile<T>,
    x: T,
    y: T,
    u_init: Cx<T>,
    settings: &MarchSettings<T>,
) -> Result<CharPoint<T>> {
    if x < T::zero() {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let mut seed = CharPoint::on_wire(profile, y);
    seed.u = u_init;
    let (start, _) = refine(profile, seed, &settings.newton)?;
    let mut c = Continuation::from_point(profile, start, *settings);
    c.advance_to(x).copied()
}

/// `∫₀ᵘ w alpha'(w) dw` along the straight segment.
pub fn profile_moment<T: Real>(
    profile: &InhomogeneityProfile<T>,
    u: Cx<T>,
    quad: &QuadSettings<T>,
) -> Result<Cx<T>> {
    if profile.is_uniform() {
        return Ok(Cx::new(T::zero(), T::zero()));
    }
    integrate_segment(|w| w * profile.alpha_deriv(w), u, quad)
}

/// Action at a tracked characteristic point.
pub fn action_at<T: Real>(
    profile: &InhomogeneityProfile<T>,
    p: &CharPoint<T>,
    quad: &QuadSettings<T>,
) -> Result<Cx<T>> {
    let a = profile.alpha(p.u);
    Ok(a * p.y + i_unit::<T>() * energy_from(&p.rad) - profile_moment(profile, p.u, quad)?)
}

/// Action `sigma(x, y)` for a label `u` solving the characteristic
/// equation; the sheet of `s` is inferred from `u`.
pub fn action<T: Real>(model: &ModelParams<T>, x: T, y: T, u: Cx<T>) -> Result<Cx<T>> {
    let a = model.profile.alpha(u);
    let p = CharPoint {
        x,
        y,
        u,
        rad: Radicals::implied(a, x, y, u),
    };
    action_at(&model.profile, &p, &QuadSettings::default())
}

/// `(d sigma/dx, d sigma/dy) = (i s, alpha(u))` at a tracked point.
pub fn gradient_at<T: Real>(profile: &InhomogeneityProfile<T>, p: &CharPoint<T>) -> (Cx<T>, Cx<T>) {
    (i_unit::<T>() * p.rad.root, profile.alpha(p.u))
}

pub fn action_gradient<T: Real>(model: &ModelParams<T>, x: T, y: T, u: Cx<T>) -> (Cx<T>, Cx<T>) {
    let a = model.profile.alpha(u);
    let p = CharPoint {
        x,
        y,
        u,
        rad: Radicals::implied(a, x, y, u),
    };
    gradient_at(&model.profile, &p)
}

/// `|(d sigma/dx)² + (d sigma/dy)² - x + 1|`.
pub fn hj_residual<T: Real>(dsdx: Cx<T>, dsdy: Cx<T>, x: T) -> T {
    (dsdx * dsdx + dsdy * dsdy - x + T::one()).norm()
}

/// A fully evaluated point of one action branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionPoint<T> {
    pub x: T,
    pub y: T,
    pub u: Cx<T>,
    pub sigma: Cx<T>,
    pub dsdx: Cx<T>,
    pub dsdy: Cx<T>,
    pub branch_id: u32,
}

impl<T: Real> ActionPoint<T> {
    pub fn evaluate(
        profile: &InhomogeneityProfile<T>,
        p: &CharPoint<T>,
        branch_id: u32,
        quad: &QuadSettings<T>,
    ) -> Result<Self> {
        let sigma = action_at(profile, p, quad)?;
        let (dsdx, dsdy) = gradient_at(profile, p);
        Ok(ActionPoint {
            x: p.x,
            y: p.y,
            u: p.u,
            sigma,
            dsdx,
            dsdy,
            branch_id,
        })
    }

    pub fn residual(&self) -> T {
        hj_residual(self.dsdx, self.dsdy, self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> InhomogeneityProfile<f64> {
        InhomogeneityProfile::gaussian(2.0, 39.5).unwrap()
    }

    fn model(p: InhomogeneityProfile<f64>) -> ModelParams<f64> {
        ModelParams::at_continuum_border(1.0, p).unwrap()
    }

    /// Composite Simpson on `[a, b]` with `n` (even) panels; independent
    /// of the Gauss–Kronrod code under test.
    fn simpson<F: Fn(f64) -> Cx<f64>>(f: F, a: f64, b: f64, n: usize) -> Cx<f64> {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(a + h * k as f64) * w;
        }
        acc * (h / 3.0)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_integral(Cx::new(0.0, 0.0), 3.7).norm(), 0.0);
        let k = kernel_integral(Cx::new(2.0, 0.0), 5.0);
        assert!((k - Cx::new(4.0 * 5f64.sqrt(), 0.0)).norm() < 1e-14);
        let oracle = simpson(|x1| Cx::new(2.0 / (5.0 - x1).sqrt(), 0.0), 0.0, 3.0, 20_000);
        let k3 = kernel_integral(Cx::new(2.0, 0.0), 3.0);
        assert!((k3 - oracle).norm() < 1e-10, "{k3} vs {oracle}");
    }

    #[test]
    fn energy_examples() {
        assert!((energy_integral(Cx::new(0.0, 0.0), 1.0) - Cx::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
        let e = energy_integral(Cx::new(2.0, 0.0), 5.0);
        assert!((e.re - 2.0 / 3.0 * 5f64.powf(1.5)).abs() < 1e-13);
        let a = Cx::new(1.0, 1.0);
        let oracle = simpson(|x1| (a * a + 1.0 - x1).sqrt(), 0.0, 2.0, 20_000);
        assert!((energy_integral(a, 2.0) - oracle).norm() < 1e-10);
    }

    #[test]
    fn solve_u_trivial_cases() {
        let m = model(gauss());
        assert!((solve_u(&m, 0.0, 0.7, Cx::new(0.7, 0.0)).unwrap() - Cx::new(0.7, 0.0)).norm() < 1e-14);
        let z = model(InhomogeneityProfile::Zero);
        for (x, y) in [(0.3, 0.0), (0.9, -2.0), (0.5, 4.0)] {
            let u = solve_u(&z, x, y, Cx::new(y, 0.0)).unwrap();
            assert!((u - Cx::new(y, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn solve_u_axis_matches_fixed_point_oracle() {
        // damped fixed point on v = 2 alpha(iv) [sqrt(alpha²+1) - sqrt(alpha²+1-3)]
        let g = gauss();
        let mut v = 0.0f64;
        for _ in 0..2000 {
            let a = g.alpha_on_imaginary(v);
            let next = 2.0 * a * ((a * a + 1.0).sqrt() - (a * a - 2.0).sqrt());
            v = 0.5 * v + 0.5 * next;
        }
        let u = solve_u(&model(g), 3.0, 0.0, Cx::new(0.0, 0.0)).unwrap();
        assert!(u.re.abs() < 1e-13);
        assert!((u.im - v).abs() < 1e-10, "{} vs {v}", u.im);
    }

    #[test]
    fn action_trivial_cases() {
        let m = model(gauss());
        assert_eq!(action(&m, 0.0, 0.0, Cx::new(0.0, 0.0)).unwrap().norm(), 0.0);
        let z = model(InhomogeneityProfile::Zero);
        let s = action(&z, 1.0, 0.0, Cx::new(0.0, 0.0)).unwrap();
        assert!((s - Cx::new(0.0, 2.0 / 3.0)).norm() < 1e-15);
        let c = model(InhomogeneityProfile::constant(2.0).unwrap());
        let u = Cx::new(0.0, 4.0 * 5f64.sqrt());
        let s = action(&c, 5.0, 0.0, u).unwrap();
        assert!((s.im - 2.0 / 3.0 * 5f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn gradient_boundary_and_zero_profile() {
        let m = model(gauss());
        let y = 3.0;
        let (gx, gy) = action_gradient(&m, 0.0, y, Cx::new(y, 0.0));
        let a = m.profile.alpha(Cx::new(y, 0.0));
        assert!((gx - i_unit::<f64>() * (a * a + 1.0).sqrt()).norm() < 1e-15);
        assert_eq!(gy, a);
        let z = model(InhomogeneityProfile::Zero);
        let (gx, gy) = action_gradient(&z, 0.4, 1.0, Cx::new(1.0, 0.0));
        assert!((gx - Cx::new(0.0, 0.6f64.sqrt())).norm() < 1e-15);
        assert_eq!(gy.norm(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = gauss();
        let settings = MarchSettings::default();
        let q = QuadSettings::default();
        let p = solve_u_with(&g, 3.0, 0.05, re(0.05), &settings).unwrap();
        let h = 1e-5;
        let sig = |x: f64, y: f64| {
            let mut guess = p;
            guess.x = x;
            guess.y = y;
            let (pp, _) = refine(&g, guess, &settings.newton).unwrap();
            action_at(&g, &pp, &q).unwrap()
        };
        let fdx = (sig(3.0 + h, 0.05) - sig(3.0 - h, 0.05)) / (2.0 * h);
        let fdy = (sig(3.0, 0.05 + h) - sig(3.0, 0.05 - h)) / (2.0 * h);
        let (gx, gy) = gradient_at(&g, &p);
        assert!((fdx - gx).norm() / gx.norm() < 1e-5, "{fdx} vs {gx}");
        assert!((fdy - gy).norm() / gy.norm() < 1e-5, "{fdy} vs {gy}");
    }

    #[test]
    fn residual_examples() {
        assert!(hj_residual(Cx::new(0.0, 0.3f64.sqrt()), Cx::new(0.0, 0.0), 0.7) < 1e-15);
        assert_eq!(hj_residual(Cx::new(0.0, 1.0), Cx::new(0.0, 0.0), 2.0), 2.0);
        let g = gauss();
        let p = solve_u_with(&g, 5.0, 0.3, re(0.3), &MarchSettings::default()).unwrap();
        let ap = ActionPoint::evaluate(&g, &p, 1, &QuadSettings::default()).unwrap();
        assert!(ap.residual() < 1e-10);
    }

    #[test]
    fn mirror_symmetry() {
        let g = gauss();
        let s = MarchSettings::default();
        let q = QuadSettings::default();
        for (x, y) in [(2.0, 0.4), (7.5, 1.2), (12.0, 0.05)] {
            let p = solve_u_with(&g, x, y, re(y), &s).unwrap();
            let m = solve_u_with(&g, x, -y, re(-y), &s).unwrap();
            assert!((m.u + p.u.conj()).norm() < 1e-9, "{} vs {}", m.u, p.u);
            let sp = action_at(&g, &p, &q).unwrap();
            let sm = action_at(&g, &m, &q).unwrap();
            assert!((sm + sp.conj()).norm() < 1e-9);
        }
        let axis = solve_u_with(&g, 9.0, 0.0, re(0.0), &s).unwrap();
        assert!(axis.u.re.abs() < 1e-12);
    }

    #[test]
    fn zero_profile_reduction() {
        let z = InhomogeneityProfile::Zero;
        let s = MarchSettings::default();
        for y in [-3.0, 0.0, 2.5] {
            for x in [0.1, 0.5, 0.95] {
                let p = solve_u_with(&z, x, y, re(y), &s).unwrap();
                let sig = action_at(&z, &p, &QuadSettings::default()).unwrap();
                let expect = 2.0 / 3.0 * (1.0 - (1.0f64 - x).powf(1.5));
                assert!((sig - Cx::new(0.0, expect)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_profile_march_stops_at_turning_point() {
        let z = InhomogeneityProfile::Zero;
        let mut c = Continuation::from_wire(&z, 0.0, MarchSettings::default());
        match c.advance_to(1.5) {
            Err(Error::BranchJump { x, .. }) => assert!((x - 1.0).abs() < 1e-3, "{x}"),
            other => panic!("expected branch jump, got {other:?}"),
        }
    }
}
