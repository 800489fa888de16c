//! Logarithmic potentials of discrete signed measures and empirical
//! convergence rates.

use alloc::vec::Vec;

use crate::{is_finite, Error, Point, Result};
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

/// `(1/(n+1)) (Σ δ_{x_i} − Σ δ_{z_j})` for nodes `x_i` and poles `z_j`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    positive: Vec<Point>,
    negative: Vec<Point>,
}

impl DiscreteMeasure {
    pub fn new(nodes: Vec<Point>, poles: Vec<Point>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("a measure needs at least one node".into()));
        }
        if poles.len() > nodes.len() {
            return Err(Error::InvalidArgument("more poles than nodes".into()));
        }
        if !nodes.iter().chain(&poles).all(|z| is_finite(*z)) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            positive: nodes,
            negative: poles,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.positive
    }

    pub fn poles(&self) -> &[Point] {
        &self.negative
    }

    pub fn normalizer(&self) -> usize {
        self.positive.len()
    }
}

/// `U(z) = (1/(n+1)) (Σ −ln|z − x_i| + Σ ln|z − z_j|)`.
pub fn discrete_potential(measure: &DiscreteMeasure, z: Point) -> Result<f64> {
    let mut u = 0.0;
    for &x in &measure.positive {
        let r = (z - x).norm();
        if r == 0.0 {
            return Err(Error::InfinitePotential(z));
        }
        u -= r.ln();
    }
    for &p in &measure.negative {
        let r = (z - p).norm();
        if r == 0.0 {
            return Err(Error::InfinitePotential(z));
        }
        u += r.ln();
    }
    Ok(u / measure.normalizer() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.y0, self.x1, self.y1].iter().all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWindow)
        }
    }

    pub fn xs(&self, nx: usize) -> Vec<f64> {
        linspace(self.x0, self.x1, nx)
    }

    pub fn ys(&self, ny: usize) -> Vec<f64> {
        linspace(self.y0, self.y1, ny)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { b } else { a + h * i as f64 }).collect()
}

/// Potential values sampled on a rectangle; `values[iy * nx + ix]`, atoms
/// recorded as `+∞`.
#[derive(Clone, Debug)]
pub struct PotentialGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn potential_row(measure: &DiscreteMeasure, xs: &[f64], y: f64) -> Vec<f64> {
    xs.iter()
        .map(|&x| discrete_potential(measure, Point::new(x, y)).unwrap_or(f64::INFINITY))
        .collect()
}

pub fn potential_grid(measure: &DiscreteMeasure, window: Window, nx: usize, ny: usize) -> Result<PotentialGrid> {
    window.validate()?;
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidWindow);
    }
    let xs = window.xs(nx);
    let ys = window.ys(ny);
    let mut values = Vec::with_capacity(nx * ny);
    for &y in &ys {
        values.extend(potential_row(measure, &xs, y));
    }
    Ok(PotentialGrid { xs, ys, values })
}

/// `exp` of the least-squares slope of `ln(error)` against `n`.
pub fn observed_rate(samples: &[(usize, f64)]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::InvalidArgument("at least three samples are needed".into()));
    }
    if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::InvalidArgument("degrees must be strictly increasing".into()));
    }
    if samples.iter().all(|s| s.1 < 1e-15) {
        return Err(Error::RateUndefined);
    }
    if samples.iter().any(|s| !(s.1 > 0.0) || !s.1.is_finite()) {
        return Err(Error::InvalidArgument("errors must be positive and finite".into()));
    }
    let m = samples.len() as f64;
    let mean_n = samples.iter().map(|s| s.0 as f64).sum::<f64>() / m;
    let mean_l = samples.iter().map(|s| s.1.ln()).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(n, e) in samples {
        let dx = n as f64 - mean_n;
        sxy += dx * (e.ln() - mean_l);
        sxx += dx * dx;
    }
    Ok((sxy / sxx).exp())
}
