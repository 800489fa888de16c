//! Boundary curves and their panelization by arc length.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::{is_finite, Error, Point, Result};
#[allow(unused_imports)] // float math under no_std
use num_traits::Float;

/// A smooth map `t -> z(t)` used by parametric curve pieces.
pub type CurveFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// Relative tolerance for numerically integrated arc length.
const ARCLENGTH_RTOL: f64 = 1e-10;
/// Number of table intervals used to invert arc length on parametric pieces.
const ARCLENGTH_TABLE: usize = 32;

/// A parametric piece `z(t)`, `t` in `[t0, t1]`, with its derivative.
///
/// Arc length is integrated from `|z'(t)|` once at construction and kept in a
/// table; points at a given arc length are found by safeguarded Newton steps.
#[derive(Clone)]
pub struct ParametricCurve {
    map: CurveFn,
    deriv: CurveFn,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    tol: f64,
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("t0", &self.t0())
            .field("t1", &self.t1())
            .field("length", &self.length())
            .finish()
    }
}

impl ParametricCurve {
    pub fn new(map: CurveFn, deriv: CurveFn, t0: f64, t1: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
            return Err(Error::InvalidGeometry(format!(
                "parametric interval [{t0}, {t1}] is empty"
            )));
        }
        let speed = |t: f64| deriv(t).norm();
        // rough length for the absolute tolerance
        let rough = {
            let k = 256;
            let h = (t1 - t0) / k as f64;
            (0..k).map(|i| speed(t0 + (i as f64 + 0.5) * h)).sum::<f64>() * h
        };
        if !(rough > 0.0) || !rough.is_finite() {
            return Err(Error::InvalidGeometry("parametric piece has zero length".into()));
        }
        let tol = ARCLENGTH_RTOL * rough;
        let knots: Vec<f64> = (0..=ARCLENGTH_TABLE)
            .map(|i| t0 + (t1 - t0) * i as f64 / ARCLENGTH_TABLE as f64)
            .collect();
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        let per = tol / ARCLENGTH_TABLE as f64;
        for w in knots.windows(2) {
            let prev = *cumulative.last().unwrap();
            cumulative.push(prev + adaptive_simpson(&speed, w[0], w[1], per));
        }
        Ok(Self {
            map,
            deriv,
            knots,
            cumulative,
            tol,
        })
    }

    pub fn t0(&self) -> f64 {
        self.knots[0]
    }

    pub fn t1(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn eval(&self, t: f64) -> Point {
        (self.map)(t)
    }

    /// Parameter value at arc length `s` from the start.
    pub fn param_at(&self, s: f64) -> f64 {
        let s = s.max(0.0).min(self.length());
        let k = match self.cumulative.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.knots[i],
            Err(i) => i - 1,
        };
        let (mut lo, mut hi) = (self.knots[k], self.knots[k + 1]);
        let base = self.cumulative[k];
        let speed = |t: f64| (self.deriv)(t).norm();
        let mut t = lo + (hi - lo) * (s - base) / (self.cumulative[k + 1] - base);
        let tol = self.tol / ARCLENGTH_TABLE as f64;
        for _ in 0..60 {
            let g = base + adaptive_simpson(&speed, self.knots[k], t, tol) - s;
            if g.abs() <= 1e-13 * self.length().max(1e-300) {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let v = speed(t);
            let newton = t - g / v;
            t = if v > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        t
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (flm, frm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// One smooth piece of a boundary curve.
#[derive(Clone, Debug)]
pub enum CurvePiece {
    Segment {
        a: Point,
        b: Point,
    },
    /// Circular arc from `start_angle` to `end_angle`; runs clockwise when
    /// `end_angle < start_angle`.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Parametric(ParametricCurve),
}

impl CurvePiece {
    pub fn segment(a: Point, b: Point) -> Result<Self> {
        if !is_finite(a) || !is_finite(b) {
            return Err(Error::NonFinite);
        }
        if a == b {
            return Err(Error::InvalidGeometry(format!("zero-length segment at {a}")));
        }
        Ok(Self::Segment { a, b })
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, end_angle: f64) -> Result<Self> {
        if !is_finite(center) || !start_angle.is_finite() || !end_angle.is_finite() {
            return Err(Error::NonFinite);
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidGeometry(format!("arc radius {radius} must be positive")));
        }
        if start_angle == end_angle {
            return Err(Error::InvalidGeometry("arc sweeps zero angle".into()));
        }
        Ok(Self::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        })
    }

    pub fn parametric(map: CurveFn, deriv: CurveFn, t0: f64, t1: f64) -> Result<Self> {
        let curve = ParametricCurve::new(map, deriv, t0, t1)?;
        if !is_finite(curve.eval(t0)) || !is_finite(curve.eval(t1)) {
            return Err(Error::NonFinite);
        }
        Ok(Self::Parametric(curve))
    }

    pub fn length(&self) -> f64 {
        match self {
            Self::Segment { a, b } => (b - a).norm(),
            Self::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle).abs(),
            Self::Parametric(c) => c.length(),
        }
    }

    /// Point at arc length `s` from the piece start (clamped to the piece).
    pub fn point_at(&self, s: f64) -> Point {
        let len = self.length();
        let s = s.max(0.0).min(len);
        match self {
            Self::Segment { a, b } => {
                if s == len {
                    *b
                } else {
                    a + (b - a) * (s / len)
                }
            }
            Self::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let dir = (end_angle - start_angle).signum();
                let theta = start_angle + dir * s / radius;
                center + Point::from_polar(*radius, theta)
            }
            Self::Parametric(c) => c.eval(c.param_at(s)),
        }
    }

    pub fn start(&self) -> Point {
        match self {
            Self::Segment { a, .. } => *a,
            Self::Parametric(c) => c.eval(c.t0()),
            _ => self.point_at(0.0),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            Self::Segment { b, .. } => *b,
            Self::Parametric(c) => c.eval(c.t1()),
            _ => self.point_at(self.length()),
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(self, Self::Segment { .. })
    }

    fn translated(&self, shift: Point) -> Self {
        match self {
            Self::Segment { a, b } => Self::Segment {
                a: a + shift,
                b: b + shift,
            },
            Self::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Self::Arc {
                center: center + shift,
                radius: *radius,
                start_angle: *start_angle,
                end_angle: *end_angle,
            },
            Self::Parametric(c) => {
                let map = c.map.clone();
                let mut moved = c.clone();
                moved.map = Arc::new(move |t| map(t) + shift);
                Self::Parametric(moved)
            }
        }
    }
}

/// A closed or open piecewise-smooth curve; pieces are traversed in order.
#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    pieces: Vec<CurvePiece>,
    closed: bool,
    offsets: Vec<f64>,
}

impl BoundaryComponent {
    pub fn new(pieces: Vec<CurvePiece>, closed: bool) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidGeometry("component without pieces".into()));
        }
        let mut offsets = Vec::with_capacity(pieces.len() + 1);
        offsets.push(0.0);
        for p in &pieces {
            let len = p.length();
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::InvalidGeometry(format!("piece length {len} is not positive")));
            }
            offsets.push(offsets.last().unwrap() + len);
        }
        let total = *offsets.last().unwrap();
        let tol = 1e-9 * total.max(1.0);
        for (i, w) in pieces.windows(2).enumerate() {
            let gap = (w[0].end() - w[1].start()).norm();
            if gap > tol {
                return Err(Error::InvalidGeometry(format!(
                    "pieces {i} and {} do not share an endpoint (gap {gap:.3e})",
                    i + 1
                )));
            }
        }
        if closed {
            let gap = (pieces.last().unwrap().end() - pieces[0].start()).norm();
            if gap > tol {
                return Err(Error::InvalidGeometry(format!(
                    "closed component does not return to its start (gap {gap:.3e})"
                )));
            }
        }
        Ok(Self {
            pieces,
            closed,
            offsets,
        })
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        Self::new(vec![CurvePiece::segment(a, b)?], false)
    }

    /// Counterclockwise circle starting at `center + radius`.
    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Self::new(
            vec![CurvePiece::arc(center, radius, 0.0, 2.0 * core::f64::consts::PI)?],
            true,
        )
    }

    /// Closed polygon through `vertices` in order; corners become piece breaks.
    pub fn polygon(vertices: &[Point]) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry("polygon needs at least 3 vertices".into()));
        }
        Self::polyline(vertices, true)
    }

    pub fn polyline(points: &[Point], closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGeometry("polyline needs at least 2 points".into()));
        }
        let mut pieces = Vec::with_capacity(points.len());
        for w in points.windows(2) {
            pieces.push(CurvePiece::segment(w[0], w[1])?);
        }
        if closed {
            pieces.push(CurvePiece::segment(*points.last().unwrap(), points[0])?);
        }
        Self::new(pieces, closed)
    }

    pub fn pieces(&self) -> &[CurvePiece] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn length(&self) -> f64 {
        *self.offsets.last().unwrap()
    }

    /// Arc-length coordinate of the start of each piece, plus the total.
    pub fn piece_offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn start_point(&self) -> Point {
        self.pieces[0].start()
    }

    pub fn end_point(&self) -> Point {
        self.pieces.last().unwrap().end()
    }

    /// `T(s)`: the point at arc length `s` from the start point. Closed
    /// components take `s` modulo the length.
    pub fn point_at_arclength(&self, s: f64) -> Result<Point> {
        if !s.is_finite() {
            return Err(Error::NonFinite);
        }
        let length = self.length();
        let s = if self.closed {
            crate::wrap(s, length)
        } else if (0.0..=length).contains(&s) {
            s
        } else {
            return Err(Error::OutOfRange { s, length });
        };
        let i = match self.offsets.binary_search_by(|o| o.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.pieces.len() - 1),
            Err(i) => i - 1,
        };
        Ok(self.pieces[i].point_at(s - self.offsets[i]))
    }

    pub fn translated(&self, shift: Point) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.translated(shift)).collect(),
            closed: self.closed,
            offsets: self.offsets.clone(),
        }
    }
}

/// One constant-element panel: a sub-arc of a boundary component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Panel {
    pub start: Point,
    /// Arc-length midpoint; doubles as collocation and Simpson midpoint.
    pub mid: Point,
    pub end: Point,
    pub length: f64,
    pub component: usize,
    /// Arc-length coordinate of `start` within its component.
    pub arc_start: f64,
}

/// Boundary split into ordered panels, grouped by component.
#[derive(Clone, Debug)]
pub struct PanelizedBoundary {
    components: Vec<BoundaryComponent>,
    panels: Vec<Panel>,
    ranges: Vec<Range<usize>>,
}

impl PanelizedBoundary {
    pub fn components(&self) -> &[BoundaryComponent] {
        &self.components
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn component_range(&self, i: usize) -> Range<usize> {
        self.ranges[i].clone()
    }

    pub fn component_panels(&self, i: usize) -> &[Panel] {
        &self.panels[self.ranges[i].clone()]
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(|c| c.length()).sum()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.panels.iter().map(|p| p.length).collect()
    }

    /// The `i`-th component as a boundary of its own.
    pub fn component(&self, i: usize) -> PanelizedBoundary {
        let panels = self.panels[self.ranges[i].clone()]
            .iter()
            .map(|p| Panel { component: 0, ..*p })
            .collect::<Vec<_>>();
        let n = panels.len();
        PanelizedBoundary {
            components: vec![self.components[i].clone()],
            panels,
            ranges: core::iter::once(0..n).collect(),
        }
    }

    /// Axis-aligned bounding box `(min, max)` of the panel points.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.panels {
            for z in [p.start, p.mid, p.end] {
                lo.re = lo.re.min(z.re);
                lo.im = lo.im.min(z.im);
                hi.re = hi.re.max(z.re);
                hi.im = hi.im.max(z.im);
            }
        }
        (lo, hi)
    }

    /// Smallest distance between quadrature points of two boundaries.
    pub fn min_distance(&self, other: &PanelizedBoundary) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.panels {
            for q in &other.panels {
                for a in [p.start, p.mid, p.end] {
                    for b in [q.start, q.mid, q.end] {
                        best = best.min((a - b).norm());
                    }
                }
            }
        }
        best
    }

    /// True when a chord of one boundary crosses a chord of the other, or
    /// when quadrature points come within `tol`.
    pub fn intersects(&self, other: &PanelizedBoundary, tol: f64) -> bool {
        let chords = |p: &Panel| [(p.start, p.mid), (p.mid, p.end)];
        self.panels.iter().any(|p| {
            other.panels.iter().any(|q| {
                chords(p)
                    .iter()
                    .any(|&(a, b)| chords(q).iter().any(|&(c, d)| segments_cross(a, b, c, d)))
            })
        }) || self.min_distance(other) <= tol
    }
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let orient = |p: Point, q: Point, r: Point| ((q - p).conj() * (r - p)).im;
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if d1 == 0.0 && d2 == 0.0 {
        // collinear: overlap of the projections
        let along = |p: Point| ((p - a).conj() * (b - a)).re;
        let (lo, hi) = (along(c).min(along(d)), along(c).max(along(d)));
        return hi >= 0.0 && lo <= (b - a).norm_sqr();
    }
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

/// Integer counts proportional to `weights` summing to `total`, by
/// largest-remainder rounding with ties going to the lower index. Item `i`
/// receives at least `floors[i]`; items whose proportional share falls below
/// their floor are pinned to it and the rest re-shared.
pub fn allocate_proportional(weights: &[f64], total: usize, floors: &[usize]) -> Result<Vec<usize>> {
    debug_assert_eq!(weights.len(), floors.len());
    let k = weights.len();
    if k == 0 || floors.iter().sum::<usize>() > total {
        return Err(Error::InfeasibleAllocation { total, parts: k });
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidArgument(
            "allocation weights must be finite and nonnegative".into(),
        ));
    }
    let mut pinned = vec![false; k];
    let mut counts = vec![0usize; k];
    loop {
        let free_total = total - (0..k).filter(|&i| pinned[i]).map(|i| floors[i]).sum::<usize>();
        let free_weight: f64 = (0..k).filter(|&i| !pinned[i]).map(|i| weights[i]).sum();
        let mut changed = false;
        let mut ideal = vec![0.0; k];
        let unpinned: Vec<usize> = (0..k).filter(|&i| !pinned[i]).collect();
        for i in unpinned {
            ideal[i] = if free_weight > 0.0 {
                free_total as f64 * weights[i] / free_weight
            } else {
                0.0
            };
            if ideal[i] < floors[i] as f64 {
                pinned[i] = true;
                changed = true;
            }
        }
        if changed {
            continue;
        }
        let free: Vec<usize> = (0..k).filter(|&i| !pinned[i]).collect();
        for i in 0..k {
            counts[i] = if pinned[i] {
                floors[i]
            } else {
                ideal[i].floor() as usize
            };
        }
        let assigned: usize = counts.iter().sum();
        let mut remainder = total - assigned;
        let mut order = free.clone();
        order.sort_by(|&a, &b| {
            let (fa, fb) = (ideal[a] - ideal[a].floor(), ideal[b] - ideal[b].floor());
            fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
        });
        if order.is_empty() {
            // everything pinned at its floor; hand out leftovers in index order
            order = (0..k).collect();
        }
        let mut it = order.iter().cycle();
        while remainder > 0 {
            counts[*it.next().unwrap()] += 1;
            remainder -= 1;
        }
        return Ok(counts);
    }
}

/// Splits the components into `n` panels in total with at least two per
/// component (see [`panelize_with_floor`]).
pub fn panelize(components: Vec<BoundaryComponent>, n: usize) -> Result<PanelizedBoundary> {
    panelize_with_floor(components, n, 2)
}

/// Splits the components into `n` panels: counts proportional to component
/// length, at least `floor` per component and one per curve piece, so corners
/// always land on panel endpoints.
pub fn panelize_with_floor(components: Vec<BoundaryComponent>, n: usize, floor: usize) -> Result<PanelizedBoundary> {
    if components.is_empty() {
        return Err(Error::InvalidGeometry("empty boundary".into()));
    }
    let lengths: Vec<f64> = components.iter().map(|c| c.length()).collect();
    let floors: Vec<usize> = components.iter().map(|c| floor.max(c.pieces().len())).collect();
    let counts = allocate_proportional(&lengths, n, &floors)?;
    panelize_counts(components, &counts)
}

/// Splits `E` and `F` from one joint budget of `n` panels, allocated over
/// all their components by length as in [`panelize_with_floor`].
pub fn panelize_pair(
    e: Vec<BoundaryComponent>,
    f: Vec<BoundaryComponent>,
    n: usize,
    floor: usize,
) -> Result<(PanelizedBoundary, PanelizedBoundary)> {
    if e.is_empty() || f.is_empty() {
        return Err(Error::InvalidGeometry("empty boundary".into()));
    }
    let all: Vec<&BoundaryComponent> = e.iter().chain(&f).collect();
    let lengths: Vec<f64> = all.iter().map(|c| c.length()).collect();
    let floors: Vec<usize> = all.iter().map(|c| floor.max(c.pieces().len())).collect();
    let counts = allocate_proportional(&lengths, n, &floors)?;
    let (ce, cf) = counts.split_at(e.len());
    Ok((panelize_counts(e, ce)?, panelize_counts(f, cf)?))
}

/// Splits component `i` into exactly `counts[i]` panels.
pub fn panelize_counts(components: Vec<BoundaryComponent>, counts: &[usize]) -> Result<PanelizedBoundary> {
    if components.is_empty() || components.len() != counts.len() {
        return Err(Error::InvalidGeometry("panel counts do not match components".into()));
    }
    let mut panels = Vec::with_capacity(counts.iter().sum());
    let mut ranges = Vec::with_capacity(components.len());
    for (ci, (comp, &count)) in components.iter().zip(counts).enumerate() {
        if count < comp.pieces().len().max(1) {
            return Err(Error::InvalidGeometry(format!(
                "component {ci} has {} pieces but only {count} panels",
                comp.pieces().len()
            )));
        }
        let piece_lengths: Vec<f64> = comp.pieces().iter().map(|p| p.length()).collect();
        let per_piece = allocate_proportional(&piece_lengths, count, &vec![1; piece_lengths.len()])?;
        let first = panels.len();
        for ((piece, &k), &offset) in comp.pieces().iter().zip(&per_piece).zip(comp.piece_offsets()) {
            let len = piece.length();
            let h = len / k as f64;
            for j in 0..k {
                let s0 = j as f64 * h;
                let s1 = if j + 1 == k { len } else { (j + 1) as f64 * h };
                panels.push(Panel {
                    start: piece.point_at(s0),
                    mid: piece.point_at(0.5 * (s0 + s1)),
                    end: piece.point_at(s1),
                    length: s1 - s0,
                    component: ci,
                    arc_start: offset + s0,
                });
            }
        }
        ranges.push(first..panels.len());
    }
    Ok(PanelizedBoundary {
        components,
        panels,
        ranges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn unit_circle_four_panels() {
        let b = panelize(vec![BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap()], 4).unwrap();
        assert_eq!(b.len(), 4);
        for (i, p) in b.panels().iter().enumerate() {
            assert!((p.length - PI / 2.0).abs() < 1e-14);
            let angle = PI / 4.0 + i as f64 * PI / 2.0;
            assert!((p.mid - Point::from_polar(1.0, angle)).norm() < 1e-14);
        }
        assert!((b.panels()[3].end - b.panels()[0].start).norm() < 1e-14);
    }

    #[test]
    fn segment_two_panels() {
        let b = panelize(vec![BoundaryComponent::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()], 2).unwrap();
        let mids: Vec<f64> = b.panels().iter().map(|p| p.mid.re).collect();
        assert_eq!(mids, vec![-0.5, 0.5]);
        assert_eq!(b.panels()[0].end, c(0.0, 0.0));
    }

    #[test]
    fn two_circles_proportional_counts() {
        let comps = vec![
            BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap(),
            BoundaryComponent::circle(c(10.0, 0.0), 3.0).unwrap(),
        ];
        let b = panelize(comps, 8).unwrap();
        assert_eq!(b.component_range(0).len(), 2);
        assert_eq!(b.component_range(1).len(), 6);
    }

    #[test]
    fn floor_pins_small_components() {
        let counts = allocate_proportional(&[2.0, 1e-3, 1e-3], 100, &[2, 16, 16]).unwrap();
        assert_eq!(counts, vec![68, 16, 16]);
    }

    #[test]
    fn corners_are_panel_endpoints() {
        let square = BoundaryComponent::polygon(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap();
        let b = panelize(vec![square], 10).unwrap();
        let corners = [c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        for corner in corners {
            assert!(b.panels().iter().any(|p| (p.start - corner).norm() < 1e-15));
            assert!(b.panels().iter().all(|p| (p.mid - corner).norm() > 1e-3));
        }
    }

    #[test]
    fn too_few_panels_is_an_error() {
        let square = BoundaryComponent::polygon(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(panelize(vec![square], 3).is_err());
        assert!(panelize(vec![], 3).is_err());
    }

    #[test]
    fn zero_length_rejected() {
        assert!(matches!(
            BoundaryComponent::segment(c(1.0, 1.0), c(1.0, 1.0)),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(BoundaryComponent::circle(c(0.0, 0.0), 0.0).is_err());
        assert!(matches!(
            BoundaryComponent::segment(c(f64::NAN, 0.0), c(1.0, 0.0)),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn discontinuous_pieces_rejected() {
        let pieces = vec![
            CurvePiece::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap(),
            CurvePiece::segment(c(1.5, 0.0), c(2.0, 0.0)).unwrap(),
        ];
        assert!(BoundaryComponent::new(pieces, false).is_err());
    }

    #[test]
    fn point_at_arclength_examples() {
        let circle = BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap();
        assert!((circle.point_at_arclength(PI / 2.0).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((circle.point_at_arclength(2.0 * PI + PI / 2.0).unwrap() - c(0.0, 1.0)).norm() < 1e-14);
        let seg = BoundaryComponent::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(seg.point_at_arclength(0.25).unwrap(), c(0.25, 0.0));
        assert!(matches!(seg.point_at_arclength(1.5), Err(Error::OutOfRange { .. })));
        assert!(seg.point_at_arclength(-0.1).is_err());
        let arc = BoundaryComponent::new(vec![CurvePiece::arc(c(0.0, 0.0), 2.0, 0.0, PI).unwrap()], false).unwrap();
        assert!((arc.point_at_arclength(PI).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn clockwise_arc() {
        let arc = CurvePiece::arc(c(0.0, 0.0), 1.0, PI / 2.0, 0.0).unwrap();
        assert!((arc.length() - PI / 2.0).abs() < 1e-15);
        assert!((arc.end() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((arc.point_at(PI / 4.0) - Point::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn parametric_circle_matches_arc() {
        let piece = CurvePiece::parametric(
            Arc::new(|t: f64| Point::from_polar(2.0, t)),
            Arc::new(|t: f64| Point::new(0.0, 2.0) * Point::from_polar(1.0, t)),
            0.0,
            PI,
        )
        .unwrap();
        assert!((piece.length() - 2.0 * PI).abs() < 1e-9);
        let z = piece.point_at(PI);
        assert!((z - c(0.0, 2.0)).norm() < 1e-9);
    }

    #[test]
    fn parametric_ellipse_quarter_arclength() {
        // ellipse a=2, b=1: quarter perimeter = 2.4221120551...
        let piece = CurvePiece::parametric(
            Arc::new(|t: f64| Point::new(2.0 * t.cos(), t.sin())),
            Arc::new(|t: f64| Point::new(-2.0 * t.sin(), t.cos())),
            0.0,
            PI / 2.0,
        )
        .unwrap();
        assert!((piece.length() - 2.422_112_055_239_5).abs() < 1e-9);
        // the inverse map reproduces the requested arc length
        let CurvePiece::Parametric(curve) = &piece else {
            unreachable!()
        };
        let t = curve.param_at(1.0);
        let speed = |t: f64| (4.0 * t.sin() * t.sin() + t.cos() * t.cos()).sqrt();
        let back = adaptive_simpson(&speed, 0.0, t, 1e-13);
        assert!((back - 1.0).abs() < 1e-10);
    }

    #[test]
    fn chord_bounded_by_length() {
        let comps = vec![
            BoundaryComponent::circle(c(0.3, -0.2), 0.7).unwrap(),
            BoundaryComponent::polygon(&[c(2.0, 0.0), c(3.0, 0.0), c(3.0, 1.0)]).unwrap(),
        ];
        let b = panelize(comps, 37).unwrap();
        for p in b.panels() {
            let chord = (p.end - p.start).norm();
            assert!(chord <= p.length * (1.0 + 1e-12));
            if p.component == 1 {
                assert!((chord - p.length).abs() <= 1e-12 * p.length);
            }
        }
        for i in 0..2 {
            let sum: f64 = b.component_panels(i).iter().map(|p| p.length).sum();
            let len = b.components()[i].length();
            assert!((sum - len).abs() <= 1e-10 * len);
        }
    }

    #[test]
    fn refinement_halves_max_panel() {
        let comps = || vec![BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap()];
        let max = |b: &PanelizedBoundary| b.panels().iter().map(|p| p.length).fold(0.0, f64::max);
        for n in [10usize, 37, 200] {
            let a = max(&panelize(comps(), n).unwrap());
            let b = max(&panelize(comps(), 2 * n).unwrap());
            assert!(b <= a / 2.0 * 1.01 && b >= a / 2.0 / 1.01);
        }
    }

    #[test]
    fn intersection_detection() {
        let a = panelize(vec![BoundaryComponent::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()], 10).unwrap();
        let crossing = panelize(
            vec![BoundaryComponent::segment(c(0.05, -1.0), c(0.05, 1.0)).unwrap()],
            10,
        )
        .unwrap();
        let apart = panelize(vec![BoundaryComponent::circle(c(0.0, 0.5), 0.1).unwrap()], 10).unwrap();
        assert!(a.intersects(&crossing, 1e-12));
        assert!(!a.intersects(&apart, 1e-12));
    }
}
