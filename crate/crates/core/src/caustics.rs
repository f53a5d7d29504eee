//! Caustic pinning points of the characteristic map.
//!
//! A caustic is a real point `(x, y)` where the label equation
//! `F(u; x, y) = 0` and its degeneracy `dF/du = 0` hold simultaneously.
//! The physical pair `(x_c, ±y_c)` lies on the sheet of
//! `s = sqrt(alpha² + 1 - x)` continued past the first exit, so the solver
//! tracks `s` from a seed reference instead of using the principal root.

use crate::axis;
use crate::error::{Error, Result};
use crate::hj::Radicals;
use crate::model::InhomogeneityProfile;
use crate::num::{i_unit, lit, re, solve_dense, sqrt_near, tol, Cx, Real};
use crate::roots::linspace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticPoint<T> {
    pub x_c: T,
    /// Signed; [`find_caustics`] returns the `y_c >= 0` member of the pair.
    pub y_c: T,
    pub u_c: Cx<T>,
    /// `(|F|, |dF/du|)` at the solution.
    pub residuals: (T, T),
}

impl<T: Real> CausticPoint<T> {
    /// Partner at `-y_c`: `alpha` is even, so `u -> -conj(u)`.
    pub fn mirror(&self) -> Self {
        CausticPoint {
            x_c: self.x_c,
            y_c: -self.y_c,
            u_c: -self.u_c.conj(),
            residuals: self.residuals,
        }
    }
}

/// Starting point for the caustic solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausticSeed<T> {
    pub u: Cx<T>,
    pub x: T,
    pub y: T,
    /// Reference value selecting the sheet of `s`.
    pub root: Cx<T>,
}

#[derive(Debug, Clone, Copy)]
pub struct CausticSettings<T> {
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for CausticSettings<T> {
    fn default() -> Self {
        CausticSettings {
            tol: tol(1e-12),
            max_iter: 100,
        }
    }
}

struct Terms<T> {
    f: Cx<T>,
    d: Cx<T>,
    // partials of F and D
    d_u: Cx<T>,
    f_x: Cx<T>,
    d_x: Cx<T>,
}

fn terms<T: Real>(profile: &InhomogeneityProfile<T>, u: Cx<T>, y: T, rad: &Radicals<T>) -> Terms<T> {
    let two = lit::<T>(2.0);
    let i = i_unit::<T>();
    let a = profile.alpha(u);
    let da = profile.alpha_deriv(u);
    let d2a = profile.alpha_second(u);
    let (tau, s) = (rad.tau, rad.root);
    let inv = tau.inv() - s.inv();
    let f = re(-y) + u - i * two * a * (tau - s);
    let d = re(T::one()) - i * two * (da * (tau - s) + a * a * da * inv);
    let bracket_u = d2a * (tau - s)
        + a * da * da * inv * lit::<T>(3.0)
        + a * a * d2a * inv
        + a * a * a * da * da * ((s * s * s).inv() - (tau * tau * tau).inv());
    let s_x = -(s * two).inv();
    Terms {
        f,
        d,
        d_u: -i * two * bracket_u,
        f_x: i * two * a * s_x,
        d_x: i * two * da * s_x - i * two * a * a * da * s_x / (s * s),
    }
}

/// `(F, dF/du)` at `(u; x, y)` with `s` on the sheet implied by `u`.
pub fn caustic_residual<T: Real>(profile: &InhomogeneityProfile<T>, u: Cx<T>, x: T, y: T) -> (Cx<T>, Cx<T>) {
    let rad = Radicals::implied(profile.alpha(u), x, y, u);
    caustic_residual_on(profile, u, y, &rad)
}

/// `(F, dF/du)` on explicitly chosen sheets.
pub fn caustic_residual_on<T: Real>(profile: &InhomogeneityProfile<T>, u: Cx<T>, y: T, rad: &Radicals<T>) -> (Cx<T>, Cx<T>) {
    if profile.is_uniform() {
        // alpha does not depend on u
        let a = profile.alpha(u);
        let f = re(-y) + u - i_unit::<T>() * lit::<T>(2.0) * a * (rad.tau - rad.root);
        return (f, re(T::one()));
    }
    let t = terms(profile, u, y, rad);
    (t.f, t.d)
}

/// Default seed: the point of steepest `x(v)` on the continued axis curve
/// between the two exits, displaced off the axis. `upper` picks the `y > 0`
/// member of the pair.
pub fn default_seed<T: Real>(profile: &InhomogeneityProfile<T>, upper: bool) -> Result<CausticSeed<T>> {
    let roots = axis::exit_roots(profile)?;
    if roots.len() < 2 {
        return Err(Error::NoRoot(format!(
            "{} profile has no pair of branch exits to seed a caustic",
            profile.kind_name()
        )));
    }
    let (v1, v2) = (roots[0], *roots.last().unwrap());
    let grid = linspace(v1, v2, 2000);
    let mut best = (T::infinity(), v1);
    for w in grid.windows(2) {
        let (p0, p1) = (axis::AxisPoint::continued(profile, w[0])?, axis::AxisPoint::continued(profile, w[1])?);
        let slope = (p1.x - p0.x) / (w[1] - w[0]);
        if slope < best.0 {
            best = (slope, (w[0] + w[1]) * lit(0.5));
        }
    }
    let p = axis::AxisPoint::continued(profile, best.1)?;
    let side = if upper { T::one() } else { -T::one() };
    Ok(CausticSeed {
        u: Cx::new(-side, p.v),
        x: p.x,
        y: side * lit(0.1),
        root: re(p.root),
    })
}

/// Damped Newton on `(Re u, Im u, x, y)` for `F = dF/du = 0`. Returns the
/// solution as found (signed `y`).
pub fn solve_caustic<T: Real>(profile: &InhomogeneityProfile<T>, seed: &CausticSeed<T>, settings: &CausticSettings<T>) -> Result<CausticPoint<T>> {
    let mut u = seed.u;
    let mut x = seed.x;
    let mut y = seed.y;
    let a = profile.alpha(u);
    let mut rad = Radicals {
        tau: (a * a + T::one()).sqrt(),
        root: sqrt_near(a * a + T::one() - x, seed.root),
    };
    let norm = |t: &Terms<T>| t.f.norm().max(t.d.norm());
    let resheet = |u: Cx<T>, x: T, prev: &Radicals<T>| Radicals::near(profile.alpha(u), x, prev);
    let mut current = terms(profile, u, y, &rad);
    let no_conv = |r: T, it: usize| Error::NoConvergence {
        iterations: it,
        residual: r.to_f64().unwrap_or(f64::NAN),
    };
    for it in 0..settings.max_iter {
        let r = norm(&current);
        if !r.is_finite() {
            return Err(no_conv(r, it));
        }
        if r < settings.tol {
            return finish(profile, u, x, y, &rad);
        }
        let c = &current;
        let i = i_unit::<T>();
        // d/d(Re u) = G_u, d/d(Im u) = i G_u for analytic G
        let cols = [
            (c.d, c.d_u),
            (i * c.d, i * c.d_u),
            (c.f_x, c.d_x),
            (re(-T::one()), re(T::zero())),
        ];
        let mut jac = [[T::zero(); 4]; 4];
        for (k, (gf, gd)) in cols.iter().enumerate() {
            jac[0][k] = gf.re;
            jac[1][k] = gf.im;
            jac[2][k] = gd.re;
            jac[3][k] = gd.im;
        }
        let rhs = [-c.f.re, -c.f.im, -c.d.re, -c.d.im];
        let step = solve_dense(jac, rhs).ok_or_else(|| no_conv(r, it))?;
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let nu = u + Cx::new(step[0], step[1]) * lambda;
            let nx = x + step[2] * lambda;
            let ny = y + step[3] * lambda;
            let nrad = resheet(nu, nx, &rad);
            let trial = terms(profile, nu, ny, &nrad);
            let tr = norm(&trial);
            if tr.is_finite() && tr < r {
                u = nu;
                x = nx;
                y = ny;
                rad = nrad;
                current = trial;
                accepted = true;
                break;
            }
            lambda = lambda * lit(0.5);
        }
        if !accepted {
            return Err(no_conv(r, it));
        }
    }
    let r = norm(&current);
    Err(no_conv(r, settings.max_iter))
}

fn finish<T: Real>(profile: &InhomogeneityProfile<T>, u: Cx<T>, x: T, y: T, rad: &Radicals<T>) -> Result<CausticPoint<T>> {
    if !(x > T::one()) {
        return Err(Error::NonPhysical(format!("caustic at x = {x} does not lie beyond the turning point")));
    }
    let (f, d) = caustic_residual_on(profile, u, y, rad);
    Ok(CausticPoint {
        x_c: x,
        y_c: y,
        u_c: u,
        residuals: (f.norm(), d.norm()),
    })
}

/// Caustic from `seed`, normalised to `y_c >= 0`.
pub fn find_caustics<T: Real>(profile: &InhomogeneityProfile<T>, seed: &CausticSeed<T>, settings: &CausticSettings<T>) -> Result<CausticPoint<T>> {
    let p = solve_caustic(profile, seed, settings)?;
    Ok(if p.y_c < T::zero() { p.mirror() } else { p })
}

/// Both members `(x_c, y_c)` and `(x_c, -y_c)`, each solved from its own
/// default seed.
pub fn caustic_pair<T: Real>(profile: &InhomogeneityProfile<T>, settings: &CausticSettings<T>) -> Result<[CausticPoint<T>; 2]> {
    let upper = solve_caustic(profile, &default_seed(profile, true)?, settings)?;
    let lower = solve_caustic(profile, &default_seed(profile, false)?, settings)?;
    Ok([upper, lower])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> InhomogeneityProfile<f64> {
        InhomogeneityProfile::gaussian(2.0, 39.5).unwrap()
    }

    #[test]
    fn uniform_profiles_are_nondegenerate() {
        let z = InhomogeneityProfile::Zero;
        for (u, x, y) in [(Cx::new(0.3, 1.0), 0.5, 0.2), (Cx::new(-2.0, 0.1), 3.0, -1.0)] {
            let (f, d) = caustic_residual(&z, u, x, y);
            assert!((f - (u - y)).norm() < 1e-15);
            assert_eq!(d, Cx::new(1.0, 0.0));
        }
        let c = InhomogeneityProfile::constant(2.0).unwrap();
        let seed = CausticSeed {
            u: Cx::new(-1.0, 5.0),
            x: 3.0,
            y: 0.1,
            root: Cx::new(1.0, 0.0),
        };
        assert!(matches!(
            solve_caustic(&c, &seed, &CausticSettings::default()),
            Err(Error::NoConvergence { .. })
        ));
        assert!(matches!(default_seed(&c, true), Err(Error::NoRoot(_))));
    }

    #[test]
    fn axis_points_solve_f() {
        let g = gauss();
        for v in [1.0, 5.0, 10.0] {
            let x = axis::x_of_v(&g, v).unwrap();
            let (f, _) = caustic_residual(&g, Cx::new(0.0, v), x, 0.0);
            assert!(f.norm() < 1e-12, "{v}: {f}");
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = gauss();
        let (u, x, y) = (Cx::new(-1.5, 13.0), 5.5, 0.2);
        let rad = Radicals::implied(g.alpha(u), x, y, u);
        let rad = Radicals {
            root: -rad.root,
            ..rad
        };
        let t = terms(&g, u, y, &rad);
        let h = 1e-6;
        let at = |u: Cx<f64>, x: f64| {
            let r = Radicals::near(g.alpha(u), x, &rad);
            terms(&g, u, y, &r)
        };
        let fd_u = (at(u + h, x).d - at(u - h, x).d) / (2.0 * h);
        let fd_uf = (at(u + h, x).f - at(u - h, x).f) / (2.0 * h);
        let fd_x = (at(u, x + h).f - at(u, x - h).f) / (2.0 * h);
        let fd_dx = (at(u, x + h).d - at(u, x - h).d) / (2.0 * h);
        assert!((fd_u - t.d_u).norm() < 1e-6 * t.d_u.norm().max(1.0));
        assert!((fd_uf - t.d).norm() < 1e-6 * t.d.norm().max(1.0));
        assert!((fd_x - t.f_x).norm() < 1e-6 * t.f_x.norm().max(1.0));
        assert!((fd_dx - t.d_x).norm() < 1e-6 * t.d_x.norm().max(1.0));
    }

    #[test]
    fn gaussian_caustic_near_reported_point() {
        let g = gauss();
        let s = CausticSettings::default();
        let c = find_caustics(&g, &default_seed(&g, true).unwrap(), &s).unwrap();
        assert!((c.x_c - 5.6).abs() <= 0.3, "{c:?}");
        assert!((c.y_c - 0.14).abs() <= 0.03, "{c:?}");
        assert!(c.residuals.0 < 1e-9 && c.residuals.1 < 1e-9);
        let (f, d) = caustic_residual(&g, c.u_c, c.x_c, c.y_c);
        assert!(f.norm() < 1e-9 && d.norm() < 1e-9);
        let (_, x0) = axis::trans_barrier_exit(&g).unwrap();
        assert!(c.x_c < x0);
    }

    #[test]
    fn mirrored_seeds_give_mirrored_points() {
        let g = gauss();
        let [up, down] = caustic_pair(&g, &CausticSettings::default()).unwrap();
        assert!(up.y_c > 0.0 && down.y_c < 0.0);
        assert!((up.x_c - down.x_c).abs() < 1e-9);
        assert!((up.y_c + down.y_c).abs() < 1e-9);
        assert!((up.mirror().u_c - down.u_c).norm() < 1e-9);
        let normalised = find_caustics(&g, &default_seed(&g, false).unwrap(), &CausticSettings::default()).unwrap();
        assert!(normalised.y_c > 0.0);
    }
}
