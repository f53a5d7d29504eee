//! Scalar abstraction shared by every numerical module.
//!
//! All solvers are written against [`Real`], which `f32` and `f64` both
//! implement. Tolerances that only make sense in double precision are
//! clamped to a small multiple of machine epsilon so the same code runs
//! (with looser guarantees) in single precision.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

use crate::quad::QuadValue;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + QuadValue<Self>
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type Cx<T> = Complex<T>;

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// A tolerance request clamped from below to `64 * epsilon`.
#[inline]
pub fn tol<T: Real>(requested: f64) -> T {
    let floor = T::epsilon() * lit(64.0);
    let t = lit::<T>(requested);
    if t < floor {
        floor
    } else {
        t
    }
}

#[inline]
pub fn i_unit<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::one())
}

#[inline]
pub fn re<T: Real>(x: T) -> Cx<T> {
    Cx::new(x, T::zero())
}

/// Square root of `z` on the sheet closest to `reference`.
///
/// Never returns the principal value blindly: continuation along a path
/// picks whichever sign keeps the root continuous.
#[inline]
pub fn sqrt_near<T: Real>(z: Cx<T>, reference: Cx<T>) -> Cx<T> {
    let r = z.sqrt();
    if (r - reference).norm_sqr() <= (r + reference).norm_sqr() {
        r
    } else {
        -r
    }
}

/// Solves the 2x2 complex system `m * d = rhs` by Cramer's rule.
pub fn solve2<T: Real>(m: [[Cx<T>; 2]; 2], rhs: [Cx<T>; 2]) -> Option<[Cx<T>; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.norm() > T::zero()) || !det.norm().is_finite() {
        return None;
    }
    let d0 = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let d1 = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
    Some([d0, d1])
}

/// Dense real solve with partial pivoting. Returns `None` on a singular
/// (or numerically singular) matrix.
pub fn solve_dense<T: Real, const N: usize>(mut m: [[T; N]; N], mut rhs: [T; N]) -> Option<[T; N]> {
    let scale = m
        .iter()
        .flat_map(|row| row.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if !(scale > T::zero()) || !scale.is_finite() {
        return None;
    }
    let tiny = scale * T::epsilon() * lit(16.0);
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col].abs() <= tiny {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                let v = m[col][k];
                m[row][k] = m[row][k] - f * v;
            }
            rhs[row] = rhs[row] - f * rhs[col];
        }
    }
    let mut out = [T::zero(); N];
    for row in (0..N).rev() {
        let mut acc = rhs[row];
        for k in row + 1..N {
            acc = acc - m[row][k] * out[k];
        }
        out[row] = acc / m[row][row];
    }
    Some(out)
}
