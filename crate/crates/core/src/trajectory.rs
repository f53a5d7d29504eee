//! Imaginary-time classical trajectory.
//!
//! At `t = i tau` the trajectory starting at the top `(x_top, 0)` and ending
//! on the wire at `x = 0, y = -i eta0` is the parabola
//! `x = 1 + alpha*² - tau²`, `eta = -2 alpha* tau` with
//! `alpha* = alpha(-i eta0)`. Its action gives the tunneling exponent
//! without reference to the characteristic label, which makes it a cross
//! check of the axis calculation.

use crate::axis;
use crate::error::{Error, Result};
use crate::model::{InhomogeneityProfile, ModelParams};
use crate::num::{lit, tol, Cx, Real};
use crate::quad::{integrate, QuadSettings};

/// Self-consistent trajectory and its action parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryResult<T> {
    /// Signed wire endpoint, `eta0 <= 0`.
    pub eta0: T,
    /// Duration, `sqrt(1 + alpha*²)`.
    pub tau0: T,
    pub alpha_star: T,
    /// `x(0) = 1 + alpha*²`.
    pub x_top: T,
    pub a0_over_2b: T,
    pub a1_over_2b: T,
    /// `A0 + A1` (includes the factor `2B`).
    pub a_total: T,
}

/// Geometry of the trajectory, before any action integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint<T> {
    pub eta0: T,
    pub tau0: T,
    pub alpha_star: T,
    pub x_top: T,
}

fn self_consistency<T: Real>(profile: &InhomogeneityProfile<T>, m: T) -> (T, T) {
    // alpha(-i eta) = alpha_on_imaginary(-eta), even in eta
    let a = profile.alpha_on_imaginary(-m);
    let da = -profile.alpha_on_imaginary_deriv(-m);
    let t = (T::one() + a * a).sqrt();
    let two = lit::<T>(2.0);
    (m - two * a * t, T::one() - two * da * (t + a * a / t))
}

/// Refines `|eta0| = 2 alpha(-i eta0) sqrt(1 + alpha(-i eta0)²)` from `seed`
/// by safeguarded Newton in the magnitude, then applies the sign.
pub fn solve_endpoint<T: Real>(profile: &InhomogeneityProfile<T>, seed: T) -> Result<Endpoint<T>> {
    let target = tol::<T>(1e-12);
    let mut m = seed.abs();
    let mut bracket: Option<(T, T)> = None;
    let mut last = T::infinity();
    for _ in 0..200 {
        let (g, dg) = self_consistency(profile, m);
        last = g.abs();
        if !last.is_finite() {
            break;
        }
        if last < target {
            let a = profile.alpha_on_imaginary(-m);
            let tau0 = (T::one() + a * a).sqrt();
            return Ok(Endpoint {
                eta0: -m,
                tau0,
                alpha_star: a,
                x_top: T::one() + a * a,
            });
        }
        // keep a sign bracket once one is seen so Newton cannot wander off
        let mut next = m - g / dg;
        let step = (next - m).abs();
        if let Some((lo, hi)) = bracket {
            let (glo, _) = self_consistency(profile, lo);
            let (lo, hi) = if glo.signum() == g.signum() { (m, hi) } else { (lo, m) };
            bracket = Some((lo.min(hi), lo.max(hi)));
            let (lo, hi) = bracket.unwrap();
            if !(next > lo && next < hi) || !next.is_finite() {
                next = (lo + hi) * lit(0.5);
            }
        } else {
            if !next.is_finite() || next < T::zero() {
                next = m * lit(0.5);
            }
            let (gn, _) = self_consistency(profile, next);
            if gn.signum() != g.signum() {
                bracket = Some((m.min(next), m.max(next)));
            }
        }
        if step == T::zero() {
            break;
        }
        m = next;
    }
    Err(Error::NoConvergence {
        iterations: 200,
        residual: last.to_f64().unwrap_or(f64::NAN),
    })
}

/// The trans-barrier trajectory, seeded from the axis exit and required to
/// land on the same fixed point.
pub fn trans_barrier_endpoint<T: Real>(profile: &InhomogeneityProfile<T>) -> Result<Endpoint<T>> {
    let (v_exit, _) = axis::trans_barrier_exit(profile)?;
    let ep = solve_endpoint(profile, v_exit)?;
    let axis_alpha = profile.alpha_on_imaginary(v_exit);
    let rel = (ep.alpha_star - axis_alpha).abs();
    if rel >= tol::<T>(1e-9) * axis_alpha.max(T::one()) {
        return Err(Error::ConsistencyFailure {
            trajectory: ep.alpha_star.to_f64().unwrap_or(f64::NAN),
            axis: axis_alpha.to_f64().unwrap_or(f64::NAN),
            relative: rel.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(ep)
}

impl<T: Real> Endpoint<T> {
    /// `(x, eta)` at imaginary time `tau` in `[0, tau0]`.
    pub fn eval(&self, tau: T) -> Result<(T, T)> {
        if !(tau >= T::zero() && tau <= self.tau0) {
            return Err(Error::Domain(format!("tau = {tau} outside [0, {}]", self.tau0)));
        }
        Ok((self.x_top - tau * tau, -lit::<T>(2.0) * self.alpha_star * tau))
    }

    /// `A0 / (2B) = 2 tau0³ / 3 - 2 alpha*² tau0`.
    pub fn a0_closed_form(&self) -> T {
        let two = lit::<T>(2.0);
        two * self.tau0.powi(3) / lit(3.0) - two * self.alpha_star * self.alpha_star * self.tau0
    }

    /// `A0 / (2B)` by quadrature of the Euclidean Lagrangian along the path.
    pub fn a0_quadrature(&self, quad: &QuadSettings<T>) -> Result<T> {
        let quarter = lit::<T>(0.25);
        let two = lit::<T>(2.0);
        integrate(
            |tau: T| {
                let x = self.x_top - tau * tau;
                let dx = -two * tau;
                let deta = -two * self.alpha_star;
                quarter * dx * dx - quarter * deta * deta - x + T::one()
            },
            T::zero(),
            self.tau0,
            quad,
        )
    }

    /// `A1 / (2B) = -∫₀^{eta0} alpha(-i eta) d eta`, oriented as written.
    pub fn a1(&self, profile: &InhomogeneityProfile<T>, quad: &QuadSettings<T>) -> Result<T> {
        if profile.is_uniform() {
            return Ok(-profile.alpha0() * self.eta0);
        }
        let i = integrate(|eta: T| profile.alpha_on_imaginary(-eta), T::zero(), self.eta0, quad)?;
        Ok(-i)
    }

    /// Point of the parabola `x = x_top + y² / (4 (x_top - 1))` at `x`;
    /// returns `y` (imaginary below the top).
    pub fn top_parabola(&self, x: T) -> Result<Cx<T>> {
        caustic_parabola(self.x_top, T::zero(), x)
    }
}

/// Builds the full result (both action parts) for an endpoint.
pub fn evaluate<T: Real>(profile: &InhomogeneityProfile<T>, ep: &Endpoint<T>, b: T, quad: &QuadSettings<T>) -> Result<TrajectoryResult<T>> {
    let a0 = ep.a0_closed_form();
    let a0_quad = ep.a0_quadrature(quad)?;
    if (a0 - a0_quad).abs() >= tol::<T>(1e-12) * a0.abs().max(T::one()) {
        return Err(Error::ConsistencyFailure {
            trajectory: a0_quad.to_f64().unwrap_or(f64::NAN),
            axis: a0.to_f64().unwrap_or(f64::NAN),
            relative: (a0 - a0_quad).abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    let a1 = ep.a1(profile, quad)?;
    Ok(TrajectoryResult {
        eta0: ep.eta0,
        tau0: ep.tau0,
        alpha_star: ep.alpha_star,
        x_top: ep.x_top,
        a0_over_2b: a0,
        a1_over_2b: a1,
        a_total: lit::<T>(2.0) * b * (a0 + a1),
    })
}

/// Trans-barrier trajectory result for `model`.
pub fn solve_trajectory<T: Real>(model: &ModelParams<T>, quad: &QuadSettings<T>) -> Result<TrajectoryResult<T>> {
    let ep = trans_barrier_endpoint(&model.profile)?;
    evaluate(&model.profile, &ep, model.b(), quad)
}

/// `A0 + A1`, checked against the axis exponent to `1e-8` relative.
pub fn total_action<T: Real>(tr: &TrajectoryResult<T>, model: &ModelParams<T>) -> Result<T> {
    let total = tr.a_total;
    let axis_value = axis::tunneling_exponent(model)?;
    let rel = (total - axis_value).abs() / total.abs().max(T::one());
    if !(rel < tol::<T>(1e-8)) {
        return Err(Error::ConsistencyFailure {
            trajectory: total.to_f64().unwrap_or(f64::NAN),
            axis: axis_value.to_f64().unwrap_or(f64::NAN),
            relative: rel.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(total)
}

/// Displacement `y - y_c` of the trajectory reflected from the caustic at
/// `(x_c, y_c)`: `(y - y_c)² = 4 (x_c - 1)(x - x_c)`. Imaginary for
/// `x < x_c`, real beyond the vertex.
pub fn caustic_parabola<T: Real>(x_c: T, _y_c: T, x: T) -> Result<Cx<T>> {
    if !(x_c > T::one()) {
        return Err(Error::Domain(format!("vertex x_c = {x_c} must exceed 1")));
    }
    let sq = lit::<T>(4.0) * (x_c - T::one()) * (x - x_c);
    Ok(Cx::new(sq, T::zero()).sqrt())
}
