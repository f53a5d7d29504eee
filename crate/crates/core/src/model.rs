//! Model definition: physical-to-dimensionless conversion and the wire
//! inhomogeneity profile with its exact analytic continuation.
//!
//! Lengths are measured in units of `u0 / E0`, energies in units of `u0`.
//! The problem is solved at the continuum border `lambda = -1` only.

use crate::error::{Error, Result};
use crate::num::{lit, re, Cx, Real};

/// Dimensional inputs. All fields strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Well depth `u0` (energy).
    pub u0: T,
    /// Applied electric force `E0`.
    pub e0: T,
    pub mass: T,
    pub hbar: T,
}

impl<T: Real> PhysicalParams<T> {
    pub fn new(u0: T, e0: T, mass: T, hbar: T) -> Result<Self> {
        let p = PhysicalParams { u0, e0, mass, hbar };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("u0", self.u0), ("E0", self.e0), ("m", self.mass), ("hbar", self.hbar)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// Semiclassical parameter `B = u0 sqrt(2 m u0) / (hbar E0)`.
pub fn compute_b<T: Real>(p: &PhysicalParams<T>) -> Result<T> {
    p.validate()?;
    Ok(p.u0 * (lit::<T>(2.0) * p.mass * p.u0).sqrt() / (p.hbar * p.e0))
}

/// Strength profile `alpha(y)` of the wire's delta well, from the closed
/// family whose continuation to complex `y` is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InhomogeneityProfile<T> {
    /// `alpha0 * exp(-y^2 / width^2)`
    Gaussian { alpha0: T, width: T },
    /// `alpha0` everywhere (the `width -> infinity` limit).
    Constant { alpha0: T },
    /// Homogeneous wire.
    Zero,
}

impl<T: Real> InhomogeneityProfile<T> {
    pub fn gaussian(alpha0: T, width: T) -> Result<Self> {
        if !(alpha0 > T::zero()) || !alpha0.is_finite() {
            return Err(Error::Domain(format!("gaussian alpha0 must be > 0, got {alpha0}")));
        }
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::Domain(format!("gaussian width must be > 0, got {width}")));
        }
        Ok(InhomogeneityProfile::Gaussian { alpha0, width })
    }

    pub fn constant(alpha0: T) -> Result<Self> {
        if !(alpha0 >= T::zero()) || !alpha0.is_finite() {
            return Err(Error::Domain(format!("constant alpha0 must be >= 0, got {alpha0}")));
        }
        Ok(InhomogeneityProfile::Constant { alpha0 })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            InhomogeneityProfile::Gaussian { .. } => "gaussian",
            InhomogeneityProfile::Constant { .. } => "constant",
            InhomogeneityProfile::Zero => "zero",
        }
    }

    pub fn alpha0(&self) -> T {
        match *self {
            InhomogeneityProfile::Gaussian { alpha0, .. } | InhomogeneityProfile::Constant { alpha0 } => alpha0,
            InhomogeneityProfile::Zero => T::zero(),
        }
    }

    /// True when `alpha` does not depend on its argument.
    pub fn is_uniform(&self) -> bool {
        !matches!(self, InhomogeneityProfile::Gaussian { .. })
    }

    /// `alpha(y)` continued to complex `y`.
    pub fn alpha(&self, y: Cx<T>) -> Cx<T> {
        match *self {
            InhomogeneityProfile::Gaussian { alpha0, width } => (-(y * y) / (width * width)).exp() * alpha0,
            InhomogeneityProfile::Constant { alpha0 } => re(alpha0),
            InhomogeneityProfile::Zero => Cx::new(T::zero(), T::zero()),
        }
    }

    /// `d alpha / dy` continued to complex `y`.
    pub fn alpha_deriv(&self, y: Cx<T>) -> Cx<T> {
        match *self {
            InhomogeneityProfile::Gaussian { width, .. } => {
                -(y * lit::<T>(2.0) / (width * width)) * self.alpha(y)
            }
            _ => Cx::new(T::zero(), T::zero()),
        }
    }

    /// `d^2 alpha / dy^2`.
    pub fn alpha_second(&self, y: Cx<T>) -> Cx<T> {
        match *self {
            InhomogeneityProfile::Gaussian { width, .. } => {
                let w2 = width * width;
                (y * y * lit::<T>(4.0) / (w2 * w2) - re(lit::<T>(2.0) / w2)) * self.alpha(y)
            }
            _ => Cx::new(T::zero(), T::zero()),
        }
    }

    /// `alpha(i v)` for real `v`; real for every profile in the family.
    pub fn alpha_on_imaginary(&self, v: T) -> T {
        match *self {
            InhomogeneityProfile::Gaussian { alpha0, width } => alpha0 * (v * v / (width * width)).exp(),
            InhomogeneityProfile::Constant { alpha0 } => alpha0,
            InhomogeneityProfile::Zero => T::zero(),
        }
    }

    /// `d/dv [alpha(i v)]` for real `v`.
    pub fn alpha_on_imaginary_deriv(&self, v: T) -> T {
        match *self {
            InhomogeneityProfile::Gaussian { width, .. } => {
                lit::<T>(2.0) * v / (width * width) * self.alpha_on_imaginary(v)
            }
            _ => T::zero(),
        }
    }
}

/// Dimensionless model at fixed energy `lambda = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    b: T,
    lambda: T,
    pub profile: InhomogeneityProfile<T>,
}

impl<T: Real> ModelParams<T> {
    /// Rejects `b <= 0` and any `lambda` other than exactly `-1`.
    pub fn new(b: T, lambda: T, profile: InhomogeneityProfile<T>) -> Result<Self> {
        if !(b > T::zero()) || !b.is_finite() {
            return Err(Error::Domain(format!("B must be positive, got {b}")));
        }
        if lambda != -T::one() {
            return Err(Error::Domain(format!("only lambda = -1 is supported, got {lambda}")));
        }
        Ok(ModelParams { b, lambda, profile })
    }

    pub fn at_continuum_border(b: T, profile: InhomogeneityProfile<T>) -> Result<Self> {
        Self::new(b, -T::one(), profile)
    }

    pub fn from_physical(p: &PhysicalParams<T>, profile: InhomogeneityProfile<T>) -> Result<Self> {
        Self::at_continuum_border(compute_b(p)?, profile)
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}
