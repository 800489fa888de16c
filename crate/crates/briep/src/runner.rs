//! Polynomial (E only) and rational (E and F) interpolation sweeps.

use briep_core::barycentric::Interpolant;
use briep_core::density::{distribute, PointRole, StepDensity};
use briep_core::geometry::{panelize_pair, panelize_with_floor, BoundaryComponent, PanelizedBoundary};
use briep_core::potential::{observed_rate, potential_row, DiscreteMeasure, PotentialGrid, Window};
use briep_core::symm::{solve_polynomial, CondenserSystem, EquilibriumSolution};
use briep_core::{Complex64, Point, Warning};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::builtins::TestFunction;
use crate::config::{RunConfig, PANEL_FLOOR};
use crate::sampling::sample_points;
use crate::CliError;

/// Number of poles paired with `n + 1` nodes: `⌊γ(n+1)⌋`.
///
/// A relative nudge of 1e-12 keeps decimal products such as `0.95 × 20`
/// from rounding down.
pub fn pole_count(n: usize, gamma: f64) -> usize {
    ((gamma * (n + 1) as f64) * (1.0 + 1e-12)).floor() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Polynomial,
    Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub n: usize,
    pub m: usize,
    pub max_error: f64,
    pub argmax: [f64; 2],
    #[serde(skip)]
    pub nodes: Vec<Point>,
    #[serde(skip)]
    pub poles: Vec<Point>,
    #[serde(skip)]
    pub weights: Vec<Complex64>,
    #[serde(skip)]
    pub log_abs_weights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub n_min: usize,
    pub n_max: usize,
    pub observed_rate: Option<f64>,
    pub predicted_rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRatio {
    pub component: usize,
    pub ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub mode: Mode,
    pub panels_e: usize,
    pub panels_f: usize,
    pub c1: f64,
    pub c2: Option<f64>,
    pub gamma: Option<f64>,
    pub condition_estimate: f64,
    pub predicted_rate: Option<f64>,
    pub rate: RateFit,
    pub density_ratios: Vec<DensityRatio>,
    pub error_samples: usize,
    pub weight_normalization: &'static str,
    pub warnings: Vec<String>,
    pub sweeps: Vec<Sweep>,
    #[serde(skip)]
    pub grid: Option<PotentialGrid>,
}

impl RunReport {
    pub fn sweep(&self, n: usize) -> Option<&Sweep> {
        self.sweeps.iter().find(|s| s.n == n)
    }
}

fn build(prims: &[crate::config::Primitive]) -> Result<Vec<BoundaryComponent>, CliError> {
    let mut out = Vec::new();
    for p in prims {
        out.extend(p.build()?);
    }
    Ok(out)
}

fn describe_warning(w: &Warning) -> String {
    match w {
        Warning::NegativeDensity { boundary, panels } => {
            format!(
                "negative density on {} panels of {boundary} (clamped to zero)",
                panels.len()
            )
        }
        Warning::ClampedPanels(p) => format!("{} panels clamped", p.len()),
        Warning::IllConditioned { estimate } => format!("ill-conditioned system (estimate {estimate:.3e})"),
        Warning::ZeroDensityGap { point } => format!("point {point} placed at the far edge of a zero-density gap"),
        Warning::NearestRuleFallback { panel } => format!("on-panel rule used near panel {panel}"),
    }
}

fn diameter(b: &PanelizedBoundary) -> f64 {
    let pts: Vec<Point> = b.panels().iter().flat_map(|p| [p.start, p.mid]).collect();
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for c in &pts[i + 1..] {
            d = d.max((a - c).norm());
        }
    }
    d
}

/// Ratio of the `F` density on the panel nearest `E` to that on the far
/// end panel, per open `F` component. Closed components are skipped.
pub fn density_ratio_diagnostic(e: &PanelizedBoundary, df: &StepDensity) -> Vec<DensityRatio> {
    let f = df.boundary();
    let dist = |z: Point| {
        e.panels()
            .iter()
            .map(|p| (p.mid - z).norm())
            .fold(f64::INFINITY, f64::min)
    };
    let mut out = Vec::new();
    for (ci, comp) in f.components().iter().enumerate() {
        if comp.is_closed() {
            continue;
        }
        let r = f.component_range(ci);
        let (first, last) = (r.start, r.end - 1);
        let (near, far) = if dist(comp.start_point()) <= dist(comp.end_point()) {
            (first, last)
        } else {
            (last, first)
        };
        let (wn, wf) = (df.values()[near], df.values()[far]);
        let ratio = if wf == 0.0 { f64::INFINITY } else { wn / wf };
        out.push(DensityRatio { component: ci, ratio });
    }
    out
}

/// From the first error at or below `hi` up to the first error below `lo`.
pub fn linear_regime(sweeps: &[Sweep], lo: f64, hi: f64) -> Vec<(usize, f64)> {
    sweeps
        .iter()
        .skip_while(|s| !(s.max_error <= hi))
        .take_while(|s| s.max_error >= lo)
        .map(|s| (s.n, s.max_error))
        .collect()
}

/// Largest error and the first sample where it occurs.
pub fn measure_error(interp: &Interpolant, samples: &[Point], values: &[Complex64]) -> Result<(f64, Point), CliError> {
    let mut best = (-1.0, samples[0]);
    for (&x, &fx) in samples.iter().zip(values) {
        let err = (interp.evaluate(x)? - fx).norm();
        if err > best.0 || err.is_nan() {
            best = (err, x);
        }
    }
    Ok(best)
}

struct Prepared {
    e: PanelizedBoundary,
    f: Option<PanelizedBoundary>,
    solution: EquilibriumSolution,
    de: StepDensity,
    df: Option<StepDensity>,
    warnings: Vec<String>,
}

fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let e_comps = build(&cfg.region_e)?;
    let f_comps = cfg.region_f.as_deref().map(build).transpose()?;
    let mut warnings = Vec::new();
    let single = e_comps.len() == 1 && f_comps.as_ref().is_none_or(|f| f.len() == 1);
    let n_panels = cfg.panels.unwrap_or(if single { 500 } else { 3000 });
    let (e, f) = match f_comps {
        None => (panelize_with_floor(e_comps, n_panels, PANEL_FLOOR)?, None),
        Some(f) => {
            let (e, f) = panelize_pair(e_comps, f, n_panels, PANEL_FLOOR)?;
            (e, Some(f))
        }
    };
    if let Some(f) = &f {
        if e.intersects(f, 1e-12) {
            return Err(CliError::Geometry(briep_core::Error::InvalidGeometry(
                "E and F intersect".into(),
            )));
        }
        let diam = diameter(&e);
        if (1.0..=2.0).contains(&diam) {
            for p in cfg.region_f.iter().flatten() {
                if let Some(len) = p.cut_length() {
                    if !(1.0..=4.0).contains(&len) {
                        warnings.push(format!("cut length {len} outside [1, 4] for diam(E) = {diam:.3}"));
                    }
                }
            }
        }
    }
    info!(
        "solving with {} E panels and {} F panels",
        e.len(),
        f.as_ref().map_or(0, |f| f.len())
    );
    let solution = match &f {
        None => solve_polynomial(&e)?,
        Some(f) => CondenserSystem::new(&e, f)?.solve(cfg.gamma)?,
    };
    warnings.extend(solution.warnings.iter().map(describe_warning));
    let de = solution.density_e()?;
    let df = solution.density_f().transpose()?;
    Ok(Prepared {
        e,
        f,
        solution,
        de,
        df,
        warnings,
    })
}

fn offsets(cfg: &RunConfig, e: &PanelizedBoundary) -> (Vec<f64>, Vec<f64>) {
    let ne = e.components().len();
    let take = |from: usize, count: usize| -> Vec<f64> {
        (from..from + count)
            .map(|i| cfg.start_offset.get(i).copied().unwrap_or(0.0))
            .collect()
    };
    let nf = cfg.start_offset.len().saturating_sub(ne);
    (take(0, ne), take(ne, nf))
}

/// Runs the configured sweep: polynomial when `region_f` is absent, rational
/// with prescribed poles otherwise.
pub fn run(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let function = cfg.function.instantiate()?;
    run_with(cfg, &function)
}

pub fn run_with(cfg: &RunConfig, function: &TestFunction) -> Result<RunReport, CliError> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let mode = if prep.f.is_some() {
        Mode::Rational
    } else {
        Mode::Polynomial
    };
    let (e_off, f_off) = offsets(cfg, &prep.e);
    let singular = cfg.singularity_points();
    let samples = sample_points(&cfg.error_samples, prep.e.components(), &singular)?;
    let values: Vec<Complex64> = samples
        .par_iter()
        .map(|z| function.eval(*z))
        .collect::<Result<_, _>>()?;

    let degrees = cfg.degrees();
    let sweeps: Vec<Sweep> = degrees
        .par_iter()
        .map(|&n| -> Result<Sweep, CliError> {
            let nodes = distribute(&prep.de, n + 1, &e_off, PointRole::Nodes)?;
            let m = if mode == Mode::Rational {
                pole_count(n, cfg.gamma)
            } else {
                0
            };
            let poles = match (&prep.df, m) {
                (Some(df), m) if m > 0 => distribute(df, m, &f_off, PointRole::Poles)?.points,
                _ => Vec::new(),
            };
            let fk = nodes
                .points
                .iter()
                .map(|z| function.eval(*z))
                .collect::<Result<Vec<_>, _>>()?;
            let interp = Interpolant::new(nodes.points, fk, poles)?;
            let (max_error, at) = measure_error(&interp, &samples, &values)?;
            Ok(Sweep {
                n,
                m,
                max_error,
                argmax: [at.re, at.im],
                nodes: interp.nodes().to_vec(),
                poles: interp.poles().to_vec(),
                weights: interp.weights().to_vec(),
                log_abs_weights: interp.log_abs_weights().to_vec(),
            })
        })
        .collect::<Result<_, _>>()?;

    let sol = &prep.solution;
    let predicted_rate = match mode {
        Mode::Rational => Some(sol.predicted_rate()?),
        Mode::Polynomial if !singular.is_empty() => {
            let top = singular
                .iter()
                .map(|q| sol.potential(*q).value)
                .fold(f64::NEG_INFINITY, f64::max);
            Some((top - sol.c1).exp())
        }
        Mode::Polynomial => None,
    };
    let [lo, hi] = cfg.rate_band;
    let window = linear_regime(&sweeps, lo, hi);
    let observed = if window.len() >= 3 {
        observed_rate(&window).ok()
    } else {
        None
    };
    let rate = RateFit {
        n_min: window.first().map_or(0, |w| w.0),
        n_max: window.last().map_or(0, |w| w.0),
        observed_rate: observed,
        predicted_rate,
    };

    let mut warnings = prep.warnings;
    let density_ratios = prep
        .df
        .as_ref()
        .map(|df| density_ratio_diagnostic(&prep.e, df))
        .unwrap_or_default();
    for d in &density_ratios {
        if d.ratio < 10.0 {
            warnings.push(format!(
                "F component {}: near/far density ratio {:.3} below 10; consider another cut length",
                d.component, d.ratio
            ));
        }
    }

    let grid = match &cfg.grid {
        Some(g) => {
            let last = sweeps.last().unwrap();
            let measure = DiscreteMeasure::new(last.nodes.clone(), last.poles.clone())?;
            let window = Window {
                x0: g.window[0],
                y0: g.window[1],
                x1: g.window[2],
                y1: g.window[3],
            };
            window.validate()?;
            if g.nx < 2 || g.ny < 2 {
                return Err(CliError::Config("grid needs at least 2×2 points".into()));
            }
            let xs = window.xs(g.nx);
            let ys = window.ys(g.ny);
            let rows: Vec<Vec<f64>> = ys.par_iter().map(|&y| potential_row(&measure, &xs, y)).collect();
            let grid = PotentialGrid {
                xs,
                ys,
                values: rows.concat(),
            };
            Some(grid)
        }
        None => None,
    };

    for w in &warnings {
        warn!("{w}");
    }
    Ok(RunReport {
        mode,
        panels_e: prep.e.len(),
        panels_f: prep.f.as_ref().map_or(0, |f| f.len()),
        c1: sol.c1,
        c2: sol.c2,
        gamma: sol.gamma,
        condition_estimate: sol.condition,
        predicted_rate,
        rate,
        density_ratios,
        error_samples: samples.len(),
        weight_normalization: "max_abs_one",
        warnings,
        sweeps,
        grid,
    })
}
