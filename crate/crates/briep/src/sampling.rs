//! Point sets on which interpolation errors are measured.

use briep_core::geometry::BoundaryComponent;
use briep_core::Point;

use crate::config::Sampling;
use crate::CliError;

/// `a, a+step, …` up to `b` inclusive.
pub fn interval_grid(a: f64, b: f64, step: f64) -> Vec<Point> {
    let count = ((b - a) / step).round() as usize + 1;
    (0..count)
        .map(|i| {
            let x = if i + 1 == count { b } else { a + i as f64 * step };
            Point::new(x, 0.0)
        })
        .collect()
}

/// `per_component` points per component, evenly spread by arc length, with
/// every base interval whose midpoint lies within `near` of a singularity
/// split into `factor` pieces.
pub fn boundary_points(
    components: &[BoundaryComponent],
    per_component: usize,
    near: f64,
    factor: usize,
    singularities: &[Point],
) -> Result<Vec<Point>, CliError> {
    let mut out = Vec::new();
    for comp in components {
        let len = comp.length();
        let intervals = if comp.is_closed() {
            per_component
        } else {
            per_component - 1
        };
        let h = len / intervals as f64;
        for i in 0..intervals {
            let s0 = i as f64 * h;
            let mid = comp.point_at_arclength(s0 + 0.5 * h)?;
            let pieces = if singularities.iter().any(|q| (q - mid).norm() <= near) {
                factor
            } else {
                1
            };
            for j in 0..pieces {
                out.push(comp.point_at_arclength(s0 + h * j as f64 / pieces as f64)?);
            }
        }
        if !comp.is_closed() {
            out.push(comp.end_point());
        }
    }
    Ok(out)
}

pub fn sample_points(
    spec: &Sampling,
    e: &[BoundaryComponent],
    singularities: &[Point],
) -> Result<Vec<Point>, CliError> {
    match *spec {
        Sampling::Interval { a, b, step } => Ok(interval_grid(a, b, step)),
        Sampling::Boundary {
            per_component,
            near,
            factor,
        } => boundary_points(e, per_component, near, factor, singularities),
    }
}
