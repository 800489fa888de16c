//! Constant-element discretization of Symm's integral equation.
//!
//! Unknowns are per-panel constant densities. Row `i` collocates at the
//! midpoint of panel `i`; entry `(i, j)` approximates
//! `∫_{panel j} log(1/|t_i − t|) |dt|`, with Simpson's rule off the diagonal
//! and the closed-form straight-panel integral on it.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::density::{normalize_and_clamp, StepDensity};
use crate::geometry::{Panel, PanelizedBoundary};
use crate::linalg::{Lu, Matrix};
use crate::{Error, Point, Result, Warning};
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

/// Condition estimate above which a solve is rejected.
pub const CONDITION_ERROR: f64 = 1e14;
/// Condition estimate above which a solve carries a warning.
pub const CONDITION_WARNING: f64 = 1e10;

#[inline]
fn xlogx_minus_x(d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        d * (d.ln() - 1.0)
    }
}

/// Simpson approximation of `∫_panel log(1/|t − s|) |ds|` for a target `t`
/// off the panel.
pub fn kernel_offdiag(target: Point, panel: &Panel) -> Result<f64> {
    offdiag_indexed(target, panel, 0)
}

fn offdiag_indexed(target: Point, panel: &Panel, index: usize) -> Result<f64> {
    let (ds, dm, de) = (
        (target - panel.start).norm(),
        (target - panel.mid).norm(),
        (target - panel.end).norm(),
    );
    if ds == 0.0 || dm == 0.0 || de == 0.0 {
        return Err(Error::SingularKernel { target, panel: index });
    }
    Ok(-(panel.length / 6.0) * (ds.ln() + 4.0 * dm.ln() + de.ln()))
}

/// `|m−a|(log|m−a| − 1) + |m−b|(log|m−b| − 1)` for panel `[a, b]` with
/// midpoint `m`: the integral of `log|m − s|` over a straight panel.
///
/// The system matrix uses the negation, so that every entry is an integral
/// of `log(1/|·|)`.
pub fn kernel_diag(panel: &Panel) -> f64 {
    xlogx_minus_x((panel.mid - panel.start).norm()) + xlogx_minus_x((panel.mid - panel.end).norm())
}

/// `∫ log(1/|z − s|) |ds|` over a straight panel for a target lying on it.
fn on_panel_integral(z: Point, panel: &Panel) -> f64 {
    -(xlogx_minus_x((z - panel.start).norm()) + xlogx_minus_x((z - panel.end).norm()))
}

/// Distance from `z` to the chords `start–mid–end` of a panel.
fn chord_distance(z: Point, panel: &Panel) -> f64 {
    let seg = |a: Point, b: Point| {
        let d = b - a;
        let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        (z - (a + d * t)).norm()
    };
    seg(panel.start, panel.mid).min(seg(panel.mid, panel.end))
}

/// The square single-layer matrix over `panels`.
pub fn assemble(panels: &[Panel]) -> Result<Matrix> {
    let n = panels.len();
    let mut a = Matrix::zeros(n, n);
    for (i, target) in panels.iter().enumerate() {
        let row = a.row_mut(i);
        for (j, panel) in panels.iter().enumerate() {
            row[j] = if i == j {
                -kernel_diag(panel)
            } else {
                offdiag_indexed(target.mid, panel, j)?
            };
        }
    }
    Ok(a)
}

fn describe(b: &PanelizedBoundary, name: &str) -> String {
    format!(
        "{name} ({} components, {} panels, length {:.6})",
        b.components().len(),
        b.len(),
        b.total_length()
    )
}

fn factor_checked(m: Matrix, context: &str, warnings: &mut Vec<Warning>) -> Result<(Lu, f64)> {
    let lu = Lu::factor(m).map_err(|p| Error::Solver {
        context: context.into(),
        reason: format!("zero pivot at column {}", p.0),
    })?;
    let estimate = lu.condition_estimate();
    if !(estimate <= CONDITION_ERROR) {
        return Err(Error::IllConditioned {
            context: context.into(),
            estimate,
        });
    }
    if estimate > CONDITION_WARNING {
        warnings.push(Warning::IllConditioned { estimate });
    }
    Ok((lu, estimate))
}

fn negative_panels(w: &[f64]) -> Vec<usize> {
    w.iter()
        .enumerate()
        .filter(|(_, v)| **v < 0.0)
        .map(|(i, _)| i)
        .collect()
}

/// Input to the equilibrium solve: `E` alone (polynomial case) or the
/// condenser `(E, F, γ)`.
#[derive(Clone, Debug)]
pub struct EquilibriumProblem {
    e: PanelizedBoundary,
    f: Option<(PanelizedBoundary, f64)>,
}

impl EquilibriumProblem {
    pub fn polynomial(e: PanelizedBoundary) -> Result<Self> {
        if e.len() < 2 {
            return Err(Error::InvalidGeometry("E needs at least 2 panels".into()));
        }
        Ok(Self { e, f: None })
    }

    pub fn condenser(e: PanelizedBoundary, f: PanelizedBoundary, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma {gamma} must lie in (0, 1)")));
        }
        if e.len() < 2 || f.is_empty() {
            return Err(Error::InvalidGeometry(
                "E needs at least 2 panels and F at least 1".into(),
            ));
        }
        if e.intersects(&f, 1e-12) {
            return Err(Error::InvalidGeometry("E and F boundaries intersect".into()));
        }
        Ok(Self { e, f: Some((f, gamma)) })
    }

    pub fn e(&self) -> &PanelizedBoundary {
        &self.e
    }

    pub fn f(&self) -> Option<&PanelizedBoundary> {
        self.f.as_ref().map(|(f, _)| f)
    }

    pub fn gamma(&self) -> Option<f64> {
        self.f.as_ref().map(|(_, g)| *g)
    }

    pub fn solve(&self) -> Result<EquilibriumSolution> {
        match &self.f {
            None => solve_polynomial(&self.e),
            Some(_) => solve_condenser(self),
        }
    }
}

/// Per-panel densities and equilibrium constants.
///
/// Densities are kept exactly as solved, negative entries included; use
/// [`EquilibriumSolution::density_e`] / [`EquilibriumSolution::density_f`] for
/// the clamped, normalized step densities that drive point generation.
#[derive(Clone, Debug)]
pub struct EquilibriumSolution {
    pub e: PanelizedBoundary,
    pub w_e: Vec<f64>,
    pub f: Option<PanelizedBoundary>,
    pub w_f: Option<Vec<f64>>,
    pub c1: f64,
    pub c2: Option<f64>,
    pub gamma: Option<f64>,
    pub condition: f64,
    pub warnings: Vec<Warning>,
}

/// Value of a density potential and whether the on-panel fallback was used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialValue {
    pub value: f64,
    /// Panel whose integral used the on-panel rule although `z` is not one
    /// of its quadrature points.
    pub fallback_panel: Option<usize>,
}

impl EquilibriumSolution {
    pub fn density_e(&self) -> Result<StepDensity> {
        normalize_and_clamp(&self.w_e, &self.e, 1.0)
    }

    pub fn density_f(&self) -> Option<Result<StepDensity>> {
        match (&self.f, &self.w_f, self.gamma) {
            (Some(f), Some(w), Some(g)) => Some(normalize_and_clamp(w, f, g)),
            _ => None,
        }
    }

    /// `exp(−(c1 + c2))`, the asymptotic rate for functions analytic off `F`.
    pub fn predicted_rate(&self) -> Result<f64> {
        predicted_rate(self)
    }

    /// Potential of the signed step density (E positive, F negative) at `z`.
    pub fn potential(&self, z: Point) -> PotentialValue {
        let mut out = PotentialValue {
            value: 0.0,
            fallback_panel: None,
        };
        let e_part = panel_potential(&self.e, &self.w_e, z, 0, &mut out.fallback_panel);
        out.value = e_part;
        if let (Some(f), Some(w)) = (&self.f, &self.w_f) {
            out.value -= panel_potential(f, w, z, self.e.len(), &mut out.fallback_panel);
        }
        out
    }
}

fn panel_potential(b: &PanelizedBoundary, w: &[f64], z: Point, base: usize, fallback: &mut Option<usize>) -> f64 {
    let mut sum = 0.0;
    for (j, (panel, &wj)) in b.panels().iter().zip(w).enumerate() {
        let is_node = z == panel.start || z == panel.mid || z == panel.end;
        let integral = if is_node {
            on_panel_integral(z, panel)
        } else if chord_distance(z, panel) <= 1e-12 * panel.length {
            fallback.get_or_insert(base + j);
            on_panel_integral(z, panel)
        } else {
            // distances are nonzero here
            offdiag_indexed(z, panel, j).unwrap_or(f64::NAN)
        };
        sum += wj * integral;
    }
    sum
}

/// Solves the `(N+1)×(N+1)` system for the equilibrium density of `E`
/// (mass 1) and the constant potential `c1` on `E`.
pub fn solve_polynomial(e: &PanelizedBoundary) -> Result<EquilibriumSolution> {
    let n = e.len();
    if n < 2 {
        return Err(Error::InvalidGeometry("E needs at least 2 panels".into()));
    }
    let a = assemble(e.panels())?;
    let mut m = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        let row = m.row_mut(i);
        row[..n].copy_from_slice(a.row(i));
        row[n] = -1.0;
    }
    for (j, p) in e.panels().iter().enumerate() {
        m.set(n, j, p.length);
    }
    let mut warnings = Vec::new();
    let (lu, condition) = factor_checked(m, &describe(e, "E"), &mut warnings)?;
    let mut rhs = vec![0.0; n + 1];
    rhs[n] = 1.0;
    let x = lu.solve(&rhs);
    let w_e = x[..n].to_vec();
    let neg = negative_panels(&w_e);
    if !neg.is_empty() {
        warnings.push(Warning::NegativeDensity {
            boundary: "E",
            panels: neg,
        });
    }
    Ok(EquilibriumSolution {
        e: e.clone(),
        w_e,
        f: None,
        w_f: None,
        c1: x[n],
        c2: None,
        gamma: None,
        condition,
        warnings,
    })
}

/// Assembled and factored condenser system for a fixed `(E, F)` pair.
///
/// The matrix does not depend on `γ`, so one factorization serves any
/// number of mass ratios.
#[derive(Clone, Debug)]
pub struct CondenserSystem {
    e: PanelizedBoundary,
    f: PanelizedBoundary,
    lu: Lu,
    condition: f64,
    warnings: Vec<Warning>,
}

impl CondenserSystem {
    pub fn new(e: &PanelizedBoundary, f: &PanelizedBoundary) -> Result<Self> {
        let (ni, nj) = (e.len(), f.len());
        let n = ni + nj;
        let panels: Vec<Panel> = e.panels().iter().chain(f.panels()).copied().collect();
        let a = assemble(&panels)?;
        let mut m = Matrix::zeros(n + 2, n + 2);
        for i in 0..n {
            let src = a.row(i);
            let row = m.row_mut(i);
            row[..ni].copy_from_slice(&src[..ni]);
            for (dst, v) in row[ni..n].iter_mut().zip(&src[ni..n]) {
                *dst = -v;
            }
            if i < ni {
                row[n] = -1.0;
            } else {
                row[n + 1] = 1.0;
            }
        }
        for (j, p) in panels.iter().enumerate() {
            m.set(if j < ni { n } else { n + 1 }, j, p.length);
        }
        let context = format!("{} / {}", describe(e, "E"), describe(f, "F"));
        let mut warnings = Vec::new();
        let (lu, condition) = factor_checked(m, &context, &mut warnings)?;
        Ok(Self {
            e: e.clone(),
            f: f.clone(),
            lu,
            condition,
            warnings,
        })
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn solve(&self, gamma: f64) -> Result<EquilibriumSolution> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidArgument(format!("gamma {gamma} must lie in (0, 1)")));
        }
        let (ni, nj) = (self.e.len(), self.f.len());
        let n = ni + nj;
        let mut rhs = vec![0.0; n + 2];
        rhs[n] = 1.0;
        rhs[n + 1] = gamma;
        let x = self.lu.solve(&rhs);
        let w_e = x[..ni].to_vec();
        let w_f = x[ni..n].to_vec();
        let mut warnings = self.warnings.clone();
        for (name, w) in [("E", &w_e), ("F", &w_f)] {
            let neg = negative_panels(w);
            if !neg.is_empty() {
                warnings.push(Warning::NegativeDensity {
                    boundary: name,
                    panels: neg,
                });
            }
        }
        Ok(EquilibriumSolution {
            e: self.e.clone(),
            w_e,
            f: Some(self.f.clone()),
            w_f: Some(w_f),
            c1: x[n],
            c2: Some(x[n + 1]),
            gamma: Some(gamma),
            condition: self.condition,
            warnings,
        })
    }
}

/// Solves the `(N+2)×(N+2)` condenser system for densities on `E` (mass 1)
/// and `F` (mass `γ`) and the plate potentials `c1` on `E`, `−c2` on `F`.
pub fn solve_condenser(problem: &EquilibriumProblem) -> Result<EquilibriumSolution> {
    let Some((f, gamma)) = &problem.f else {
        return Err(Error::NotApplicable("condenser solve needs F"));
    };
    CondenserSystem::new(&problem.e, f)?.solve(*gamma)
}

/// `exp(−(c1 + c2))` for a condenser solution.
pub fn predicted_rate(solution: &EquilibriumSolution) -> Result<f64> {
    let c2 = solution
        .c2
        .ok_or(Error::NotApplicable("polynomial solutions have no condenser rate"))?;
    Ok(rate_from_constants(solution.c1, c2))
}

pub fn rate_from_constants(c1: f64, c2: f64) -> f64 {
    (-(c1 + c2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{panelize, BoundaryComponent};
    use core::f64::consts::PI;

    fn straight(a: f64, b: f64) -> Panel {
        Panel {
            start: Point::new(a, 0.0),
            mid: Point::new(0.5 * (a + b), 0.0),
            end: Point::new(b, 0.0),
            length: b - a,
            component: 0,
            arc_start: 0.0,
        }
    }

    #[test]
    fn offdiag_examples() {
        let p = straight(0.0, 1.0);
        let v = kernel_offdiag(Point::new(10.0, 0.0), &p).unwrap();
        let expect = -(10f64.ln() + 4.0 * 9.5f64.ln() + 9f64.ln()) / 6.0;
        assert!((v - expect).abs() < 1e-15);
        assert!((v + 2.250830).abs() < 1e-6);
        let v = kernel_offdiag(Point::new(0.5, 1.0), &p).unwrap();
        assert!((v + 1.25f64.ln() / 6.0).abs() < 1e-15);
        assert!((v + 0.037191).abs() < 1e-6);
        // doubling geometry doubles the prefactor (plus log 2 shift per unit length)
        let q = straight(0.0, 2.0);
        let w = kernel_offdiag(Point::new(1.0, 2.0), &q).unwrap();
        assert!((w - (2.0 * v - 2.0 * 2f64.ln())).abs() < 1e-14);
    }

    #[test]
    fn offdiag_singular_target() {
        let p = straight(0.0, 1.0);
        for t in [0.0, 0.5, 1.0] {
            assert!(matches!(
                kernel_offdiag(Point::new(t, 0.0), &p),
                Err(Error::SingularKernel { .. })
            ));
        }
    }

    #[test]
    fn diag_examples() {
        assert!((kernel_diag(&straight(0.0, 2.0)) + 2.0).abs() < 1e-15);
        assert!((kernel_diag(&straight(0.0, 1.0)) + 1.693147).abs() < 1e-6);
        let e = core::f64::consts::E;
        assert!(kernel_diag(&straight(-e, e)).abs() < 1e-15);
    }

    #[test]
    fn diag_is_exact_integral_for_straight_panel() {
        // ∫_0^1 log(1/|1/2 − s|) ds = 1 + log 2
        let v = -kernel_diag(&straight(0.0, 1.0));
        assert!((v - (1.0 + 2f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn predicted_rate_examples() {
        assert!((rate_from_constants(0.5, 0.5) - 0.367879).abs() < 1e-6);
        assert!((rate_from_constants(0.75, 0.0) - 0.472367).abs() < 1e-6);
    }

    #[test]
    fn polynomial_solution_has_no_rate() {
        let e = panelize(vec![BoundaryComponent::circle(Point::new(0.0, 0.0), 1.0).unwrap()], 40).unwrap();
        let s = solve_polynomial(&e).unwrap();
        assert!(matches!(s.predicted_rate(), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn unit_circle_density_uniform() {
        let e = panelize(vec![BoundaryComponent::circle(Point::new(0.0, 0.0), 1.0).unwrap()], 500).unwrap();
        let s = solve_polynomial(&e).unwrap();
        for w in &s.w_e {
            assert!((w * 2.0 * PI - 1.0).abs() < 1e-2);
        }
        assert!(s.c1.abs() < 5e-3);
        let mass: f64 = s.w_e.iter().zip(e.panels()).map(|(w, p)| w * p.length).sum();
        assert!((mass - 1.0).abs() < 1e-10);
    }

    #[test]
    fn potential_at_nodes_uses_on_panel_rule() {
        let e = panelize(
            vec![BoundaryComponent::segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)).unwrap()],
            100,
        )
        .unwrap();
        let s = solve_polynomial(&e).unwrap();
        let at_node = s.potential(e.panels()[10].start);
        assert!(at_node.fallback_panel.is_none());
        assert!((at_node.value - s.c1).abs() < 2e-2);
        let off_node = s.potential(Point::new(0.0123, 0.0));
        assert!(off_node.fallback_panel.is_some());
        assert!(off_node.value.is_finite());
    }

    #[test]
    fn condenser_rejects_bad_gamma_and_overlap() {
        let e = panelize(
            vec![BoundaryComponent::segment(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)).unwrap()],
            20,
        )
        .unwrap();
        let f = panelize(vec![BoundaryComponent::circle(Point::new(0.0, 0.5), 0.1).unwrap()], 8).unwrap();
        assert!(EquilibriumProblem::condenser(e.clone(), f.clone(), 1.0).is_err());
        assert!(EquilibriumProblem::condenser(e.clone(), f.clone(), 0.0).is_err());
        let crossing = panelize(vec![BoundaryComponent::circle(Point::new(0.0, 0.0), 0.5).unwrap()], 8).unwrap();
        assert!(matches!(
            EquilibriumProblem::condenser(e, crossing, 0.5),
            Err(Error::InvalidGeometry(_))
        ));
    }
}
