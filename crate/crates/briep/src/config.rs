//! JSON run configuration.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc as Shared;

use briep_core::geometry::{BoundaryComponent, CurvePiece};
use briep_core::Point;
use serde::{Deserialize, Serialize};

use crate::builtins::FunctionSpec;
use crate::CliError;

pub type Xy = [f64; 2];

pub(crate) fn pt(v: Xy) -> Point {
    Point::new(v[0], v[1])
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    Segment {
        a: Xy,
        b: Xy,
    },
    /// Angles in radians; clockwise when `end < start`.
    Arc {
        center: Xy,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl Piece {
    fn build(&self) -> briep_core::Result<CurvePiece> {
        match *self {
            Piece::Segment { a, b } => CurvePiece::segment(pt(a), pt(b)),
            Piece::Arc {
                center,
                radius,
                start,
                end,
            } => CurvePiece::arc(pt(center), radius, start, end),
        }
    }
}

/// Boundary primitives. Each yields one or more boundary components.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Segment {
        a: Xy,
        b: Xy,
    },
    Polygon {
        vertices: Vec<Xy>,
    },
    Circle {
        center: Xy,
        radius: f64,
    },
    Arc {
        center: Xy,
        radius: f64,
        start: f64,
        end: f64,
    },
    /// Outer and inner circles as two components.
    Annulus {
        center: Xy,
        inner: f64,
        outer: f64,
    },
    Polyline {
        points: Vec<Xy>,
        #[serde(default)]
        closed: bool,
    },
    /// Ellipse `center + e^{iθ}(a cos t + i b sin t)`, integrated exactly.
    Ellipse {
        center: Xy,
        a: f64,
        b: f64,
        #[serde(default)]
        rotation: f64,
    },
    /// Closed polyline through `samples` points of the rose
    /// `r(t) = radius (1 + amplitude cos(petals t))`.
    SampledRose {
        center: Xy,
        radius: f64,
        amplitude: f64,
        petals: u32,
        samples: usize,
    },
    /// Chain of segments and arcs.
    Path {
        pieces: Vec<Piece>,
        #[serde(default)]
        closed: bool,
    },
    // F builders
    /// Small disk around an isolated singularity.
    DiskCover {
        center: Xy,
        radius: f64,
    },
    /// Cut from a branch point along `direction` (normalized internally).
    CutSegment {
        from: Xy,
        direction: Xy,
        length: f64,
    },
    /// Cut joining two branch points.
    CutBetween {
        a: Xy,
        b: Xy,
    },
}

impl Primitive {
    pub fn build(&self) -> briep_core::Result<Vec<BoundaryComponent>> {
        use Primitive::*;
        let one = |c: briep_core::Result<BoundaryComponent>| c.map(|c| vec![c]);
        match self {
            Segment { a, b } | CutBetween { a, b } => one(BoundaryComponent::segment(pt(*a), pt(*b))),
            Polygon { vertices } => one(BoundaryComponent::polygon(&pts(vertices))),
            Circle { center, radius } | DiskCover { center, radius } => {
                one(BoundaryComponent::circle(pt(*center), *radius))
            }
            Arc {
                center,
                radius,
                start,
                end,
            } => one(BoundaryComponent::new(
                vec![CurvePiece::arc(pt(*center), *radius, *start, *end)?],
                false,
            )),
            Annulus { center, inner, outer } => {
                if !(inner < outer) {
                    return Err(briep_core::Error::InvalidGeometry("annulus needs inner < outer".into()));
                }
                Ok(vec![
                    BoundaryComponent::circle(pt(*center), *outer)?,
                    BoundaryComponent::circle(pt(*center), *inner)?,
                ])
            }
            Polyline { points, closed } => one(BoundaryComponent::polyline(&pts(points), *closed)),
            Ellipse { center, a, b, rotation } => {
                let (c, a, b) = (pt(*center), *a, *b);
                let rot = Point::from_polar(1.0, *rotation);
                let piece = CurvePiece::parametric(
                    Shared::new(move |t: f64| c + rot * Point::new(a * t.cos(), b * t.sin())),
                    Shared::new(move |t: f64| rot * Point::new(-a * t.sin(), b * t.cos())),
                    0.0,
                    2.0 * PI,
                )?;
                one(BoundaryComponent::new(vec![piece], true))
            }
            SampledRose {
                center,
                radius,
                amplitude,
                petals,
                samples,
            } => {
                let v: Vec<Point> = (0..*samples)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / *samples as f64;
                        pt(*center) + Point::from_polar(radius * (1.0 + amplitude * (*petals as f64 * t).cos()), t)
                    })
                    .collect();
                one(BoundaryComponent::polygon(&v))
            }
            Path { pieces, closed } => {
                let built = pieces
                    .iter()
                    .map(Piece::build)
                    .collect::<briep_core::Result<Vec<_>>>()?;
                one(BoundaryComponent::new(built, *closed))
            }
            CutSegment {
                from,
                direction,
                length,
            } => {
                let d = pt(*direction);
                if !(d.norm() > 0.0) || !(*length > 0.0) {
                    return Err(briep_core::Error::InvalidGeometry(
                        "cut needs a nonzero direction and positive length".into(),
                    ));
                }
                let a = pt(*from);
                one(BoundaryComponent::segment(a, a + d / d.norm() * *length))
            }
        }
    }

    /// Length of a cut builder, for the length-band check.
    pub fn cut_length(&self) -> Option<f64> {
        match self {
            Primitive::CutSegment { length, .. } => Some(*length),
            Primitive::CutBetween { a, b } => Some((pt(*a) - pt(*b)).norm()),
            _ => None,
        }
    }
}

fn pts(v: &[Xy]) -> Vec<Point> {
    v.iter().map(|p| pt(*p)).collect()
}

/// Either an explicit list or `start:step:end` (inclusive).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DegreeList {
    List(Vec<usize>),
    Range { start: usize, step: usize, end: usize },
}

impl DegreeList {
    pub fn values(&self) -> Vec<usize> {
        match self {
            DegreeList::List(v) => v.clone(),
            DegreeList::Range { start, step, end } => (*start..=*end).step_by((*step).max(1)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// `a:step:b` on the real axis.
    Interval { a: f64, b: f64, step: f64 },
    /// Points spread by arc length over every component of `E`, with
    /// `factor`-fold refinement within `near` of a declared singularity.
    Boundary {
        #[serde(default = "default_per_component")]
        per_component: usize,
        #[serde(default = "default_near")]
        near: f64,
        #[serde(default = "default_factor")]
        factor: usize,
    },
}

fn default_per_component() -> usize {
    2000
}

fn default_near() -> f64 {
    0.05
}

fn default_factor() -> usize {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub window: [f64; 4],
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    /// `<nx>x<ny>@<x0,y0,x1,y1>`
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("grid '{s}' is not <nx>x<ny>@<x0,y0,x1,y1>");
        let (dims, win) = s.split_once('@').ok_or_else(bad)?;
        let (nx, ny) = dims.split_once('x').ok_or_else(bad)?;
        let w: Vec<f64> = win
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if w.len() != 4 {
            return Err(bad());
        }
        Ok(GridSpec {
            nx: nx.trim().parse().map_err(|_| bad())?,
            ny: ny.trim().parse().map_err(|_| bad())?,
            window: [w[0], w[1], w[2], w[3]],
        })
    }
}

/// Parses `1,2,5` or `start:step:end`.
pub fn parse_degrees(s: &str) -> Result<DegreeList, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad degree '{t}'"));
    match parts.len() {
        1 => Ok(DegreeList::List(s.split(',').map(num).collect::<Result<_, _>>()?)),
        3 => Ok(DegreeList::Range {
            start: num(parts[0])?,
            step: num(parts[1])?,
            end: num(parts[2])?,
        }),
        _ => Err(format!("degree list '{s}' is neither a comma list nor start:step:end")),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub region_e: Vec<Primitive>,
    #[serde(default)]
    pub region_f: Option<Vec<Primitive>>,
    pub function: FunctionSpec,
    pub n_list: DegreeList,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default)]
    pub panels: Option<usize>,
    pub error_samples: Sampling,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    /// Arc-length start offset per closed component of `E`, then of `F`.
    #[serde(default)]
    pub start_offset: Vec<f64>,
    /// Singularities of the function, for sampling and polynomial rates.
    #[serde(default)]
    pub singularities: Vec<Xy>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Error band defining the linear regime used for the observed rate.
    #[serde(default = "default_rate_band")]
    pub rate_band: [f64; 2],
}

fn default_gamma() -> f64 {
    0.5
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn default_rate_band() -> [f64; 2] {
    [1e-12, 1e-2]
}

/// Per-component panel floor applied on top of the length-proportional split.
pub const PANEL_FLOOR: usize = 16;

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let n = self.n_list.values();
        if n.is_empty() {
            return Err(CliError::Config("n_list is empty".into()));
        }
        if n.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("n_list must be strictly ascending".into()));
        }
        if n[0] == 0 {
            return Err(CliError::Config("degrees must be at least 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(CliError::Config(format!("gamma {} must lie in (0, 1)", self.gamma)));
        }
        if self.region_e.is_empty() {
            return Err(CliError::Config("region_e is empty".into()));
        }
        if matches!(&self.region_f, Some(f) if f.is_empty()) {
            return Err(CliError::Config("region_f is empty".into()));
        }
        if let Some(p) = self.panels {
            if p < 2 {
                return Err(CliError::Config("panels must be at least 2".into()));
            }
        }
        if !(self.rate_band[0] > 0.0 && self.rate_band[0] < self.rate_band[1]) {
            return Err(CliError::Config("rate_band must be an increasing positive pair".into()));
        }
        match &self.error_samples {
            Sampling::Interval { a, b, step } => {
                if !(b > a) || !(*step > 0.0) {
                    return Err(CliError::Config("interval sampling needs a < b and step > 0".into()));
                }
            }
            Sampling::Boundary {
                per_component, factor, ..
            } => {
                if *per_component < 2 || *factor == 0 {
                    return Err(CliError::Config(
                        "boundary sampling needs per_component ≥ 2, factor ≥ 1".into(),
                    ));
                }
            }
        }
        if let Some(g) = &self.grid {
            if g.nx < 2 || g.ny < 2 {
                return Err(CliError::Config("grid needs at least 2×2 points".into()));
            }
        }
        self.function.validate()?;
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.n_list.values()
    }

    pub fn singularity_points(&self) -> Vec<Point> {
        self.singularities.iter().map(|s| pt(*s)).collect()
    }
}
