//! Step densities on panelized boundaries and their conversion into point
//! families by inverting the cumulative mass.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{allocate_proportional, PanelizedBoundary};
use crate::linalg::Matrix;
use crate::{Error, Point, Result, Warning};

/// Nonnegative per-panel density with its cumulative masses
/// `s_0 = 0, s_j = Σ_{i≤j} |panel_i| w_i`.
#[derive(Clone, Debug)]
pub struct StepDensity {
    boundary: PanelizedBoundary,
    values: Vec<f64>,
    cumulative: Vec<f64>,
    clamped: Vec<usize>,
}

impl StepDensity {
    fn from_values(boundary: PanelizedBoundary, values: Vec<f64>, clamped: Vec<usize>) -> Self {
        let mut cumulative = Vec::with_capacity(values.len() + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for (w, p) in values.iter().zip(boundary.panels()) {
            acc += w * p.length;
            cumulative.push(acc);
        }
        Self {
            boundary,
            values,
            cumulative,
            clamped,
        }
    }

    pub fn boundary(&self) -> &PanelizedBoundary {
        &self.boundary
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Panels whose negative input values were set to zero.
    pub fn clamped_panels(&self) -> &[usize] {
        &self.clamped
    }

    pub fn component_masses(&self) -> Vec<f64> {
        (0..self.boundary.components().len())
            .map(|i| {
                let r = self.boundary.component_range(i);
                self.cumulative[r.end] - self.cumulative[r.start]
            })
            .collect()
    }

    /// The restriction to component `i`, keeping its absolute mass.
    pub fn component(&self, i: usize) -> StepDensity {
        let r = self.boundary.component_range(i);
        let clamped = self
            .clamped
            .iter()
            .filter(|&&p| r.contains(&p))
            .map(|&p| p - r.start)
            .collect();
        Self::from_values(self.boundary.component(i), self.values[r].to_vec(), clamped)
    }
}

/// Clamps negative entries to zero and rescales to `target_mass`.
pub fn normalize_and_clamp(raw: &[f64], boundary: &PanelizedBoundary, target_mass: f64) -> Result<StepDensity> {
    if raw.len() != boundary.len() {
        return Err(Error::InvalidArgument(format!(
            "{} density values for {} panels",
            raw.len(),
            boundary.len()
        )));
    }
    if !(target_mass > 0.0) || !target_mass.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "target mass {target_mass} must be positive"
        )));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let clamped: Vec<usize> = raw
        .iter()
        .enumerate()
        .filter(|(_, v)| **v < 0.0)
        .map(|(i, _)| i)
        .collect();
    let mass: f64 = raw
        .iter()
        .zip(boundary.panels())
        .map(|(v, p)| v.max(0.0) * p.length)
        .sum();
    if !(mass > 0.0) {
        return Err(Error::DegenerateDensity);
    }
    let scale = target_mass / mass;
    let values = raw.iter().map(|v| v.max(0.0) * scale).collect();
    Ok(StepDensity::from_values(boundary.clone(), values, clamped))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRole {
    Nodes,
    Poles,
}

/// Points placed along a boundary in order of increasing arc length.
#[derive(Clone, Debug)]
pub struct PointFamily {
    pub points: Vec<Point>,
    /// Arc length of each point measured from the family's start point,
    /// per component.
    pub arclengths: Vec<f64>,
    /// Component index of each point.
    pub components: Vec<usize>,
    pub role: PointRole,
    pub warnings: Vec<Warning>,
}

impl PointFamily {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_role(mut self, role: PointRole) -> Self {
        self.role = role;
        self
    }
}

/// Targets `h_i = i/n` (closed) or `i/(n−1)` (open), `i = 0..n`.
fn mass_targets(n: usize, closed: bool) -> Vec<f64> {
    let denom = if closed { n } else { n - 1 } as f64;
    (0..n).map(|i| i as f64 / denom).collect()
}

/// Arc length at which the normalized cumulative mass reaches `h`, and
/// whether the point sits at the far edge of a zero-density gap.
fn invert_mass(density: &StepDensity, h: f64) -> (f64, bool) {
    let total = density.total_mass();
    let cum = density.cumulative();
    let panels = density.boundary().panels();
    let target = h * total;
    let idx = cum.partition_point(|&c| c <= target);
    if idx > panels.len() {
        // at (or past) the total: end of the last panel carrying mass
        let k = (0..panels.len()).rev().find(|&k| density.values[k] > 0.0).unwrap();
        return (panels[k].arc_start + panels[k].length, false);
    }
    let k = idx - 1;
    let eps = ((target - cum[k]) / density.values[k]).min(panels[k].length);
    let gap = eps == 0.0 && k > 0 && density.values[k - 1] == 0.0;
    (panels[k].arc_start + eps, gap)
}

/// Normalized mass between the component start and arc length `s`.
fn mass_before(density: &StepDensity, s: f64) -> f64 {
    let panels = density.boundary().panels();
    let k = panels.partition_point(|p| p.arc_start <= s).saturating_sub(1);
    let within = (s - panels[k].arc_start).max(0.0).min(panels[k].length);
    (density.cumulative()[k] + within * density.values[k]) / density.total_mass()
}

/// Places `n` points on a single-component boundary so that consecutive
/// points enclose equal mass of the (normalized) density.
///
/// Closed curves start at arc length `start_offset` (any point); open curves
/// must start at their first endpoint (`start_offset == 0`) and include both
/// endpoints.
pub fn den2pts(density: &StepDensity, n: usize, start_offset: f64) -> Result<PointFamily> {
    let boundary = density.boundary();
    if boundary.components().len() != 1 {
        return Err(Error::InvalidArgument(
            "den2pts needs a single component; use distribute for several".into(),
        ));
    }
    let comp = &boundary.components()[0];
    let closed = comp.is_closed();
    if n == 0 || (!closed && n < 2) {
        return Err(Error::InvalidArgument(format!(
            "{n} points requested on an {} curve",
            if closed { "closed" } else { "open" }
        )));
    }
    if !(density.total_mass() > 0.0) {
        return Err(Error::DegenerateDensity);
    }
    if !start_offset.is_finite() || (!closed && start_offset != 0.0) {
        return Err(Error::InvalidArgument(
            "open curves start at their first endpoint".into(),
        ));
    }
    let length = comp.length();
    let offset = if closed { crate::wrap(start_offset, length) } else { 0.0 };
    let shift = if offset > 0.0 {
        mass_before(density, offset)
    } else {
        0.0
    };

    let mut family = PointFamily {
        points: Vec::with_capacity(n),
        arclengths: Vec::with_capacity(n),
        components: vec![0; n],
        role: PointRole::Nodes,
        warnings: Vec::new(),
    };
    for (i, h) in mass_targets(n, closed).into_iter().enumerate() {
        let mut h = h + shift;
        if h >= 1.0 && closed {
            h -= 1.0;
        }
        let (s, gap) = invert_mass(density, h);
        if gap {
            family.warnings.push(Warning::ZeroDensityGap { point: i });
        }
        family.points.push(comp.point_at_arclength(s)?);
        let mut rel = if closed { crate::wrap(s - offset, length) } else { s };
        if i == 0 && rel > 0.5 * length {
            rel = 0.0;
        }
        family.arclengths.push(rel);
    }

    #[cfg(debug_assertions)]
    if offset == 0.0 && n * boundary.len() <= 250_000 && density.values().iter().all(|v| *v > 0.0) {
        let reference = arclengths_via_b_matrix(density, n, closed);
        for (a, b) in family.arclengths.iter().zip(&reference) {
            debug_assert!((a - b).abs() <= 1e-9 * length, "B-matrix mismatch: {a} vs {b}");
        }
    }
    Ok(family)
}

/// The clamped matrix `B` with `b_ij = clamp((h_i − s_{j−1}) / (|panel_j| w_j), 0, 1)`
/// for the normalized density; `B · lengths` gives arc lengths from the start.
pub fn b_matrix(density: &StepDensity, n: usize, closed: bool) -> Matrix {
    let total = density.total_mass();
    let panels = density.boundary().panels();
    let mut b = Matrix::zeros(n, panels.len());
    for (i, h) in mass_targets(n, closed).into_iter().enumerate() {
        for (j, p) in panels.iter().enumerate() {
            let s_prev = density.cumulative()[j] / total;
            let mass = p.length * density.values()[j] / total;
            let bhat = (h - s_prev) / mass;
            let v = if bhat >= 1.0 {
                1.0
            } else if bhat > 0.0 {
                bhat
            } else {
                0.0
            };
            b.set(i, j, v);
        }
    }
    b
}

/// Arc lengths of the `n` targets computed through [`b_matrix`].
pub fn arclengths_via_b_matrix(density: &StepDensity, n: usize, closed: bool) -> Vec<f64> {
    let lengths = density.boundary().lengths();
    b_matrix(density, n, closed).mul_vec(&lengths)
}

/// Counts proportional to component masses (largest remainder, ties to the
/// lower index), at least one per component, summing to `total`.
pub fn allocate_counts(densities: &[StepDensity], total: usize) -> Result<Vec<usize>> {
    let masses: Vec<f64> = densities.iter().map(|d| d.total_mass()).collect();
    allocate_by_mass(&masses, total, 1)
}

pub fn allocate_by_mass(masses: &[f64], total: usize, floor: usize) -> Result<Vec<usize>> {
    if total < masses.len() * floor {
        return Err(Error::InfeasibleAllocation {
            total,
            parts: masses.len(),
        });
    }
    allocate_proportional(masses, total, &vec![floor; masses.len()])
}

/// Places `total` points over every component of a density's boundary:
/// counts follow the component masses and each component is filled with
/// [`den2pts`]. When `total` is smaller than the number of components, some
/// components receive no points. An open component with a single point gets
/// it at its mass median.
pub fn distribute(density: &StepDensity, total: usize, start_offsets: &[f64], role: PointRole) -> Result<PointFamily> {
    let ncomp = density.boundary().components().len();
    let masses = density.component_masses();
    let floor = usize::from(total >= ncomp);
    let counts = allocate_by_mass(&masses, total, floor)?;
    let mut out = PointFamily {
        points: Vec::with_capacity(total),
        arclengths: Vec::with_capacity(total),
        components: Vec::with_capacity(total),
        role,
        warnings: Vec::new(),
    };
    for (ci, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let part = density.component(ci);
        let comp = &part.boundary().components()[0];
        let fam = if !comp.is_closed() && count == 1 {
            let (s, _) = invert_mass(&part, 0.5);
            PointFamily {
                points: vec![comp.point_at_arclength(s)?],
                arclengths: vec![s],
                components: vec![0],
                role,
                warnings: Vec::new(),
            }
        } else {
            let offset = if comp.is_closed() {
                start_offsets.get(ci).copied().unwrap_or(0.0)
            } else {
                0.0
            };
            den2pts(&part, count, offset)?
        };
        out.points.extend(fam.points);
        out.arclengths.extend(fam.arclengths);
        out.components.extend(core::iter::repeat_n(ci, count));
        out.warnings.extend(fam.warnings);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{panelize, panelize_counts, BoundaryComponent};

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn unit_segment(n: usize) -> PanelizedBoundary {
        panelize(vec![BoundaryComponent::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap()], n).unwrap()
    }

    fn two_unit_panels() -> PanelizedBoundary {
        panelize(vec![BoundaryComponent::segment(c(0.0, 0.0), c(2.0, 0.0)).unwrap()], 2).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let b = two_unit_panels();
        let d = normalize_and_clamp(&[2.0, 2.0], &b, 1.0).unwrap();
        assert_eq!(d.values(), &[0.5, 0.5]);
        assert!(d.clamped_panels().is_empty());
        let d = normalize_and_clamp(&[3.0, -1.0], &b, 1.0).unwrap();
        assert_eq!(d.values()[0], 1.0);
        assert_eq!(d.values()[1], 0.0);
        assert_eq!(d.clamped_panels(), &[1]);
        let d = normalize_and_clamp(&[0.5, 0.0], &unit_segment(2), 0.25).unwrap();
        assert_eq!(d.values(), &[0.5, 0.0]);
        assert!((d.total_mass() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn normalize_identity_on_unit_mass() {
        let b = two_unit_panels();
        let d = normalize_and_clamp(&[0.625, 0.375], &b, 1.0).unwrap();
        assert_eq!(d.values(), &[0.625, 0.375]);
    }

    #[test]
    fn degenerate_density() {
        let b = two_unit_panels();
        assert_eq!(
            normalize_and_clamp(&[0.0, -1.0], &b, 1.0).unwrap_err(),
            Error::DegenerateDensity
        );
    }

    #[test]
    fn uniform_circle_four_points() {
        let b = panelize(vec![BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap()], 64).unwrap();
        let d = normalize_and_clamp(&vec![1.0; 64], &b, 1.0).unwrap();
        let fam = den2pts(&d, 4, 0.0).unwrap();
        for (z, e) in fam
            .points
            .iter()
            .zip([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)])
        {
            assert!((z - e).norm() < 1e-14);
        }
    }

    #[test]
    fn start_offset_rotates_closed_family() {
        let b = panelize(vec![BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap()], 64).unwrap();
        let d = normalize_and_clamp(&vec![1.0; 64], &b, 1.0).unwrap();
        let fam = den2pts(&d, 4, core::f64::consts::FRAC_PI_4).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((fam.points[0] - c(r, r)).norm() < 1e-14);
        assert!((fam.points[1] - c(-r, r)).norm() < 1e-14);
        assert!(fam.arclengths.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn hand_solved_two_panel_segment() {
        let b = unit_segment(2);
        let d = normalize_and_clamp(&[1.5, 0.5], &b, 1.0).unwrap();
        let fam = den2pts(&d, 3, 0.0).unwrap();
        let xs: Vec<f64> = fam.points.iter().map(|z| z.re).collect();
        assert!((xs[0] - 0.0).abs() < 1e-15);
        assert!((xs[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((xs[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn b_matrix_matches_scan() {
        let b = unit_segment(7);
        let d = normalize_and_clamp(&[1.0, 2.0, 0.5, 3.0, 1.0, 0.2, 4.0], &b, 1.0).unwrap();
        for n in [2, 3, 9, 20] {
            let fam = den2pts(&d, n, 0.0).unwrap();
            let reference = arclengths_via_b_matrix(&d, n, false);
            for (a, r) in fam.arclengths.iter().zip(&reference) {
                assert!((a - r).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn zero_gap_is_skipped() {
        let b = unit_segment(4);
        let d = normalize_and_clamp(&[1.0, 0.0, 0.0, 1.0], &b, 1.0).unwrap();
        let fam = den2pts(&d, 3, 0.0).unwrap();
        // middle target sits at the far edge of the gap
        assert!((fam.points[1].re - 0.75).abs() < 1e-15);
        assert_eq!(fam.warnings, vec![Warning::ZeroDensityGap { point: 1 }]);
        for z in &fam.points {
            assert!(!(z.re > 0.25 && z.re < 0.75));
        }
    }

    #[test]
    fn open_needs_two_points() {
        let b = unit_segment(4);
        let d = normalize_and_clamp(&[1.0; 4], &b, 1.0).unwrap();
        assert!(den2pts(&d, 1, 0.0).is_err());
        assert!(den2pts(&d, 2, 0.5).is_err());
    }

    #[test]
    fn allocate_examples() {
        assert_eq!(allocate_by_mass(&[0.75, 0.25], 8, 1).unwrap(), vec![6, 2]);
        assert_eq!(allocate_by_mass(&[0.5, 0.5], 5, 1).unwrap(), vec![3, 2]);
        assert_eq!(allocate_by_mass(&[1.0], 7, 1).unwrap(), vec![7]);
        assert!(matches!(
            allocate_by_mass(&[0.5, 0.3, 0.2], 2, 1),
            Err(Error::InfeasibleAllocation { total: 2, parts: 3 })
        ));
    }

    #[test]
    fn distribute_over_components() {
        let comps = vec![
            BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap(),
            BoundaryComponent::circle(c(5.0, 0.0), 1.0).unwrap(),
        ];
        let b = panelize_counts(comps, &[16, 16]).unwrap();
        let mut raw = vec![3.0; 16];
        raw.extend(vec![1.0; 16]);
        let d = normalize_and_clamp(&raw, &b, 1.0).unwrap();
        let fam = distribute(&d, 8, &[], PointRole::Poles).unwrap();
        assert_eq!(fam.components.iter().filter(|&&i| i == 0).count(), 6);
        assert_eq!(fam.role, PointRole::Poles);
        // fewer points than components: the heavier one wins
        let fam = distribute(&d, 1, &[], PointRole::Poles).unwrap();
        assert_eq!(fam.components, vec![0]);
    }

    #[test]
    fn single_point_on_open_component_sits_at_median() {
        let b = unit_segment(4);
        let d = normalize_and_clamp(&[1.0, 1.0, 1.0, 5.0], &b, 1.0).unwrap();
        let fam = distribute(&d, 1, &[], PointRole::Poles).unwrap();
        // panel masses 1/8, 1/8, 1/8, 5/8: half the mass is reached at 0.75 + 0.25/5
        assert!((fam.points[0].re - 0.8).abs() < 1e-15);
    }
}
