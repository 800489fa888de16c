//! Node and pole placement for barycentric interpolation on compact regions
//! of the complex plane.
//!
//! The pipeline is: describe the boundary of the interpolation region `E`
//! (and optionally a pole region `F`), split it into panels, solve the
//! constant-element discretization of Symm's integral equation for the
//! equilibrium density, turn the step density into discrete point families,
//! and build barycentric weights with those nodes and prescribed poles.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod barycentric;
pub mod density;
mod error;
pub mod geometry;
pub mod linalg;
pub mod potential;
pub mod symm;

pub use error::{Error, Result, Warning};
pub use num_complex::Complex64;

/// A point of the complex plane.
pub type Point = Complex64;

/// Builds a point, rejecting non-finite coordinates.
pub fn point(re: f64, im: f64) -> Result<Point> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(Error::NonFinite)
    }
}

/// `s` reduced into `[0, period)`.
pub(crate) fn wrap(s: f64, period: f64) -> f64 {
    let r = s % period;
    if r < 0.0 {
        let r = r + period;
        if r < period {
            r
        } else {
            0.0
        }
    } else {
        r
    }
}

pub(crate) fn is_finite(z: Point) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
