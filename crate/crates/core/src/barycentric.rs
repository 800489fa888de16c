//! Barycentric weights with optional prescribed poles and the second-kind
//! evaluation formula.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

use crate::{is_finite, Error, Point, Result};

/// Weights normalized to `max |w_k| = 1`, with `ln |w_k|` before rounding
/// to the exponential scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    pub values: Vec<Complex64>,
    pub log_abs: Vec<f64>,
}

pub fn weights_polynomial(nodes: &[Point]) -> Result<Weights> {
    weights_rational(nodes, &[])
}

/// `w_k ∝ Π_i (x_k − z_i) / Π_{j≠k} (x_k − x_j)`.
pub fn weights_rational(nodes: &[Point], poles: &[Point]) -> Result<Weights> {
    let n = nodes.len();
    if n < 2 {
        return Err(Error::InvalidArgument("at least two nodes are required".into()));
    }
    if poles.len() > n - 1 {
        return Err(Error::DegreeTooHigh {
            poles: poles.len(),
            nodes: n,
        });
    }
    if !nodes.iter().chain(poles).all(|z| is_finite(*z)) {
        return Err(Error::NonFinite);
    }
    let mut log_abs = Vec::with_capacity(n);
    let mut phase = Vec::with_capacity(n);
    for (k, &xk) in nodes.iter().enumerate() {
        let mut lg = Sum::default();
        let mut ph = Complex64::new(1.0, 0.0);
        for (i, &zi) in poles.iter().enumerate() {
            let d = xk - zi;
            let r = d.norm();
            if r == 0.0 {
                return Err(Error::PoleNodeCoincidence { pole: i, node: k });
            }
            lg.add(r.ln());
            ph *= d / r;
        }
        for (j, &xj) in nodes.iter().enumerate() {
            if j == k {
                continue;
            }
            let d = xk - xj;
            let r = d.norm();
            if r == 0.0 {
                return Err(Error::DuplicateNode(k.min(j), k.max(j)));
            }
            lg.add(-r.ln());
            ph *= d.conj() / r;
        }
        log_abs.push(lg.value());
        phase.push(ph / ph.norm());
    }
    let top = log_abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let log_abs: Vec<f64> = log_abs.into_iter().map(|l| l - top).collect();
    let values = log_abs.iter().zip(phase).map(|(l, p)| p * l.exp()).collect();
    Ok(Weights { values, log_abs })
}

/// Neumaier compensated sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// A barycentric rational interpolant in second-kind form.
#[derive(Clone, Debug)]
pub struct Interpolant {
    nodes: Vec<Point>,
    weights: Vec<Complex64>,
    log_abs: Vec<f64>,
    samples: Vec<Complex64>,
    poles: Vec<Point>,
}

impl Interpolant {
    /// Interpolant with weights built from `nodes` and `poles`.
    pub fn new(nodes: Vec<Point>, samples: Vec<Complex64>, poles: Vec<Point>) -> Result<Self> {
        let w = weights_rational(&nodes, &poles)?;
        Self::check_samples(&nodes, &samples)?;
        Ok(Self {
            nodes,
            weights: w.values,
            log_abs: w.log_abs,
            samples,
            poles,
        })
    }

    /// Interpolant with caller-supplied nonzero weights.
    pub fn with_weights(
        nodes: Vec<Point>,
        weights: Vec<Complex64>,
        samples: Vec<Complex64>,
        poles: Vec<Point>,
    ) -> Result<Self> {
        Self::check_samples(&nodes, &samples)?;
        if weights.len() != nodes.len() {
            return Err(Error::InvalidArgument("one weight per node is required".into()));
        }
        if weights.iter().any(|w| *w == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidArgument("weights must be nonzero".into()));
        }
        let log_abs = weights.iter().map(|w| w.norm().ln()).collect();
        Ok(Self {
            nodes,
            weights,
            log_abs,
            samples,
            poles,
        })
    }

    fn check_samples(nodes: &[Point], samples: &[Complex64]) -> Result<()> {
        if samples.len() != nodes.len() {
            return Err(Error::InvalidArgument("one sample per node is required".into()));
        }
        if !samples.iter().all(|f| is_finite(*f)) {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn log_abs_weights(&self) -> &[f64] {
        &self.log_abs
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn poles(&self) -> &[Point] {
        &self.poles
    }

    pub fn evaluate(&self, x: Point) -> Result<Complex64> {
        if !is_finite(x) {
            return Err(Error::NonFinite);
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for (k, ((&xk, &wk), &fk)) in self.nodes.iter().zip(&self.weights).zip(&self.samples).enumerate() {
            let d = x - xk;
            let q = d.norm_sqr();
            if q <= 1e-30 * xk.norm_sqr() || q == 0.0 {
                return Ok(self.samples[k]);
            }
            let c = wk * d.conj() / q;
            num += c * fk;
            den += c;
        }
        if den == Complex64::new(0.0, 0.0) {
            return Err(Error::PoleHit(x));
        }
        Ok(num / den)
    }

    /// Evaluates at every point, collecting all failures with their indices.
    pub fn evaluate_many(&self, xs: &[Point]) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut failures = Vec::new();
        for (i, &x) in xs.iter().enumerate() {
            match self.evaluate(x) {
                Ok(v) => out.push(v),
                Err(e) => failures.push((i, e)),
            }
        }
        if failures.is_empty() {
            Ok(out)
        } else {
            Err(Error::Batch(failures))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(x: f64) -> Point {
        Point::new(x, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn three_point_weights() {
        let w = weights_polynomial(&[r(-1.0), r(0.0), r(1.0)]).unwrap();
        for (v, e) in w.values.iter().zip([0.5, -1.0, 0.5]) {
            assert!(close(*v, r(e), 1e-15));
        }
        assert_eq!(w.log_abs[1], 0.0);
    }

    #[test]
    fn two_point_weights() {
        let w = weights_polynomial(&[r(0.0), r(1.0)]).unwrap();
        assert!(close(w.values[0], r(-1.0), 1e-15) && close(w.values[1], r(1.0), 1e-15));
    }

    #[test]
    fn alternating_signs_on_real_nodes() {
        let nodes: Vec<Point> = (0..12).map(|k| r((k as f64 * 0.37).sin() + k as f64)).collect();
        let w = weights_polynomial(&nodes).unwrap();
        for k in 1..12 {
            assert!(w.values[k].re * w.values[k - 1].re < 0.0);
        }
    }

    #[test]
    fn rational_weights_with_one_pole() {
        let w = weights_rational(&[r(0.0), r(1.0)], &[r(2.0)]).unwrap();
        assert!(close(w.values[0], r(1.0), 1e-15) && close(w.values[1], r(-0.5), 1e-15));
    }

    #[test]
    fn symmetric_poles_give_symmetric_weights() {
        let w = weights_rational(
            &[r(-1.0), r(0.0), r(1.0)],
            &[Point::new(0.0, 2.0), Point::new(0.0, -2.0)],
        )
        .unwrap();
        assert!(close(w.values[0], w.values[2], 1e-15));
    }

    #[test]
    fn weight_errors() {
        assert_eq!(
            weights_polynomial(&[r(0.0), r(1.0), r(0.0)]).unwrap_err(),
            Error::DuplicateNode(0, 2)
        );
        assert_eq!(
            weights_rational(&[r(0.0), r(1.0)], &[r(2.0), r(3.0)]).unwrap_err(),
            Error::DegreeTooHigh { poles: 2, nodes: 2 }
        );
        assert_eq!(
            weights_rational(&[r(0.0), r(1.0)], &[r(1.0)]).unwrap_err(),
            Error::PoleNodeCoincidence { pole: 0, node: 1 }
        );
    }

    #[test]
    fn evaluation_examples() {
        let nodes = vec![r(-1.0), r(0.0), r(1.0)];
        let p = Interpolant::new(nodes.clone(), nodes.iter().map(|x| x * x).collect(), vec![]).unwrap();
        assert!(close(p.evaluate(r(0.5)).unwrap(), r(0.25), 1e-14));
        assert_eq!(p.evaluate(r(1.0)).unwrap(), r(1.0));
        let c = Interpolant::new(nodes, vec![Point::new(2.0, -1.0); 3], vec![]).unwrap();
        assert!(close(
            c.evaluate(Point::new(0.3, 0.7)).unwrap(),
            Point::new(2.0, -1.0),
            1e-14
        ));
    }

    #[test]
    fn batch_reports_indices() {
        // w = (1, 1) on nodes ±1 vanishes in the denominator at the origin
        let p = Interpolant::with_weights(
            vec![r(-1.0), r(1.0)],
            vec![r(1.0), r(1.0)],
            vec![r(1.0), r(2.0)],
            vec![],
        )
        .unwrap();
        match p.evaluate_many(&[r(0.5), r(0.0), r(1.0)]) {
            Err(Error::Batch(v)) => assert_eq!(v, vec![(1, Error::PoleHit(r(0.0)))]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn compensated_sum_keeps_small_terms() {
        let mut s = Sum::default();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn large_node_sets_do_not_overflow() {
        let n = 600;
        let nodes: Vec<Point> = (0..=n)
            .map(|k| r(-(core::f64::consts::PI * k as f64 / n as f64).cos()))
            .collect();
        let w = weights_polynomial(&nodes).unwrap();
        assert!(w.values.iter().all(|v| v.norm() > 0.0 && v.norm() <= 1.0 + 1e-15));
        // Chebyshev-Lobatto weights: halved at the endpoints
        assert!((w.values[0].norm() - 0.5).abs() < 1e-10);
    }
}
