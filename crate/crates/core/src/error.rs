use alloc::string::String;
use alloc::vec::Vec;

use crate::Point;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("arc length {s} outside [0, {length}] on an open component")]
    OutOfRange { s: f64, length: f64 },
    #[error("target {target} coincides with a quadrature point of panel {panel}")]
    SingularKernel { target: Point, panel: usize },
    #[error("linear solve failed for {context}: {reason}")]
    Solver { context: String, reason: String },
    #[error("ill-conditioned system for {context}: condition estimate {estimate:.3e}")]
    IllConditioned { context: String, estimate: f64 },
    #[error("degenerate density: no positive entries")]
    DegenerateDensity,
    #[error("cannot allocate {total} points over {parts} components")]
    InfeasibleAllocation { total: usize, parts: usize },
    #[error("duplicate nodes at indices {0} and {1}")]
    DuplicateNode(usize, usize),
    #[error("{poles} poles exceed the degree allowed by {nodes} nodes")]
    DegreeTooHigh { poles: usize, nodes: usize },
    #[error("pole {pole} coincides with node {node}")]
    PoleNodeCoincidence { pole: usize, node: usize },
    #[error("denominator vanished at {0} (pole hit)")]
    PoleHit(Point),
    #[error("not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("point {0} coincides with an atom of the measure")]
    InfinitePotential(Point),
    #[error("degenerate window or resolution")]
    InvalidWindow,
    #[error("errors are at the floating-point floor; rate undefined")]
    RateUndefined,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{} of the batch evaluations failed", .0.len())]
    Batch(Vec<(usize, Error)>),
}

/// Non-fatal conditions reported alongside results.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// Solved density has negative entries on these panels (indices local to the boundary).
    NegativeDensity { boundary: &'static str, panels: Vec<usize> },
    /// Negative entries were clamped to zero before normalizing.
    ClampedPanels(Vec<usize>),
    /// Condition estimate above the warning threshold.
    IllConditioned { estimate: f64 },
    /// A target mass fell at the start of a zero-density gap; the point
    /// sits at the gap's far edge.
    ZeroDensityGap { point: usize },
    /// A potential was requested on a panel away from its quadrature points.
    NearestRuleFallback { panel: usize },
}
