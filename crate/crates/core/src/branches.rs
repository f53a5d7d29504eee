//! Branch families of the action along lines of constant `y`.
//!
//! Two families are followed. The conventional one starts on the wire and
//! is marched in `x`. The trans-barrier one is seeded at the top of its
//! parabola `x = x0 + y² / (4 (x0 - 1))` by continuation in `y` from the
//! axis exit and then marched both ways. Close to the axis the two are the
//! same solution (the hybrid branch); far from it they are disconnected.

use crate::axis;
use crate::error::{Error, Result};
use crate::hj::{refine, CharPoint, Continuation, ActionPoint, MarchSettings, Radicals};
use crate::model::InhomogeneityProfile;
use crate::num::{lit, re, Cx, Real};
use crate::quad::QuadSettings;

pub const CONVENTIONAL: u32 = 1;
pub const TRANS_BARRIER: u32 = 2;
/// The merged 1-2 family seen near the axis.
pub const HYBRID: u32 = 12;

/// One grid sample of a branch family; failed samples keep their error.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSample<T> {
    pub y: T,
    pub x: T,
    pub branch_id: u32,
    pub outcome: std::result::Result<ActionPoint<T>, Error>,
}

#[derive(Debug, Clone, Copy)]
pub struct BranchMapSettings<T> {
    pub march: MarchSettings<T>,
    pub quad: QuadSettings<T>,
    /// Initial `y` step of the continuation from the axis exit.
    pub y_step: T,
    /// Labels closer than this at the top are the same (hybrid) branch.
    pub merge_tol: T,
}

impl<T: Real> Default for BranchMapSettings<T> {
    fn default() -> Self {
        BranchMapSettings {
            march: MarchSettings::default(),
            quad: QuadSettings::default(),
            y_step: lit(0.02),
            merge_tol: lit(1e-6),
        }
    }
}

/// `x` of the trans-barrier parabola top at `y`.
pub fn top_x<T: Real>(x0: T, y: T) -> T {
    x0 + y * y / (lit::<T>(4.0) * (x0 - T::one()))
}

/// Trans-barrier characteristic at the parabola top for `y`.
pub fn trans_barrier_top<T: Real>(profile: &InhomogeneityProfile<T>, y: T, settings: &BranchMapSettings<T>) -> Result<CharPoint<T>> {
    let (v2, x0) = axis::trans_barrier_exit(profile)?;
    let u = Cx::new(T::zero(), v2);
    let a = profile.alpha(u);
    let mut p = CharPoint {
        x: x0,
        y: T::zero(),
        u,
        rad: Radicals {
            tau: (a * a + T::one()).sqrt(),
            root: re(T::zero()),
        },
    };
    p = refine(profile, p, &settings.march.newton)?.0;
    let mut step = settings.y_step;
    while p.y != y {
        let gap = y - p.y;
        let h = step.min(gap.abs());
        let target = if h == gap.abs() { y } else { p.y + h * gap.signum() };
        let mut guess = p;
        guess.y = target;
        guess.x = top_x(x0, target);
        match refine(profile, guess, &settings.march.newton) {
            Ok((next, iters))
                if iters <= settings.march.max_fast_iterations
                    && (next.u - p.u).norm() <= settings.march.max_jump =>
            {
                p = next;
                step = (step * lit(1.5)).min(settings.y_step);
            }
            _ => {
                step = h * lit(0.5);
                if step < settings.march.min_step {
                    return Err(Error::BranchJump {
                        x: p.x.to_f64().unwrap_or(f64::NAN),
                        min_step: settings.march.min_step.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
    }
    Ok(p)
}

fn march_over<T: Real>(
    profile: &InhomogeneityProfile<T>,
    start: CharPoint<T>,
    xs: &[T],
    branch_id: u32,
    settings: &BranchMapSettings<T>,
) -> Vec<BranchSample<T>> {
    let mut c = Continuation::from_point(profile, start, settings.march);
    let mut failure: Option<Error> = None;
    xs.iter()
        .map(|&x| {
            let outcome = match &failure {
                Some(e) => Err(e.clone()),
                None => match c
                    .advance_to(x)
                    .and_then(|p| ActionPoint::evaluate(profile, p, branch_id, &settings.quad))
                {
                    Ok(p) => Ok(p),
                    Err(e) => {
                        failure = Some(e.clone());
                        Err(e)
                    }
                },
            };
            BranchSample {
                y: start.y,
                x,
                branch_id,
                outcome,
            }
        })
        .collect()
}

/// Branch families at one `y` over the ascending grid `xs`.
pub fn branch_line<T: Real>(profile: &InhomogeneityProfile<T>, y: T, xs: &[T], settings: &BranchMapSettings<T>) -> Vec<BranchSample<T>> {
    let wire = CharPoint::on_wire(profile, y);
    let two_exits = axis::exit_roots(profile).map(|r| r.len() >= 2).unwrap_or(false);
    if !two_exits {
        return march_over(profile, wire, xs, CONVENTIONAL, settings);
    }
    let top = match trans_barrier_top(profile, y, settings) {
        Ok(t) => t,
        Err(e) => {
            let mut rows = march_over(profile, wire, xs, CONVENTIONAL, settings);
            rows.extend(xs.iter().map(|&x| BranchSample {
                y,
                x,
                branch_id: TRANS_BARRIER,
                outcome: Err(e.clone()),
            }));
            return rows;
        }
    };
    // do the wire and top solutions lie on one continuous branch?
    let mut probe = Continuation::from_point(profile, wire, settings.march);
    let merged = probe
        .advance_to(top.x)
        .map(|p| (p.u - top.u).norm() < settings.merge_tol)
        .unwrap_or(false);
    if merged {
        return march_over(profile, wire, xs, HYBRID, settings);
    }
    let mut rows = march_over(profile, wire, xs, CONVENTIONAL, settings);
    // the trans-barrier family: march down from the top, then up
    let split = xs.partition_point(|&x| x < top.x);
    let below: Vec<T> = xs[..split].iter().rev().copied().collect();
    let mut lower = march_over(profile, top, &below, TRANS_BARRIER, settings);
    lower.reverse();
    rows.extend(lower);
    rows.extend(march_over(profile, top, &xs[split..], TRANS_BARRIER, settings));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::linspace;

    fn gauss() -> InhomogeneityProfile<f64> {
        InhomogeneityProfile::gaussian(2.0, 39.5).unwrap()
    }

    #[test]
    fn axis_line_is_one_hybrid_branch_reaching_the_exit() {
        let g = gauss();
        let xs = linspace(0.0, 17.0, 17);
        let rows = branch_line(&g, 0.0, &xs, &BranchMapSettings::default());
        assert!(rows.iter().all(|r| r.branch_id == HYBRID));
        assert!(rows.iter().all(|r| r.outcome.is_ok()));
        let (_, x0) = axis::trans_barrier_exit(&g).unwrap();
        assert!((x0 - 16.0).abs() <= 1.0);
    }

    #[test]
    fn top_point_is_on_the_exit_parabola() {
        let g = gauss();
        let s = BranchMapSettings::default();
        let (_, x0) = axis::trans_barrier_exit(&g).unwrap();
        let p = trans_barrier_top(&g, 0.5, &s).unwrap();
        assert!((p.x - top_x(x0, 0.5)).abs() < 1e-14);
        let p0 = trans_barrier_top(&g, 0.0, &s).unwrap();
        assert!(p0.rad.root.norm() < 1e-10);
    }

    #[test]
    fn zero_profile_has_single_branch() {
        let z = InhomogeneityProfile::Zero;
        let xs = linspace(0.0, 1.5, 15);
        let rows = branch_line(&z, 0.3, &xs, &BranchMapSettings::default());
        assert!(rows.iter().all(|r| r.branch_id == CONVENTIONAL));
        for r in &rows {
            assert_eq!(r.outcome.is_ok(), r.x <= 1.0, "x = {}", r.x);
        }
    }
}
