use std::f64::consts::{FRAC_PI_4, PI};

use briep_core::density::{den2pts, distribute, PointRole};
use briep_core::geometry::{panelize, panelize_pair, BoundaryComponent, PanelizedBoundary};
use briep_core::potential::{discrete_potential, DiscreteMeasure};
use briep_core::symm::{solve_polynomial, CondenserSystem, EquilibriumProblem};
use briep_core::Point;

fn c(re: f64, im: f64) -> Point {
    Point::new(re, im)
}

fn unit_circle(n: usize) -> PanelizedBoundary {
    panelize(vec![BoundaryComponent::circle(c(0.0, 0.0), 1.0).unwrap()], n).unwrap()
}

fn interval(n: usize) -> PanelizedBoundary {
    panelize(vec![BoundaryComponent::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()], n).unwrap()
}

fn l_shape() -> BoundaryComponent {
    let rot = Point::from_polar(1.0, -FRAC_PI_4);
    let v: Vec<Point> = [
        c(0.0, 0.0),
        c(1.0, 0.0),
        c(1.0, 0.5),
        c(0.5, 0.5),
        c(0.5, 1.0),
        c(0.0, 1.0),
    ]
    .iter()
    .map(|z| rot * z)
    .collect();
    BoundaryComponent::polygon(&v).unwrap()
}

fn two_disks(y: f64) -> Vec<BoundaryComponent> {
    vec![
        BoundaryComponent::circle(c(0.0, y), 1e-4).unwrap(),
        BoundaryComponent::circle(c(0.0, -y), 1e-4).unwrap(),
    ]
}

fn condenser_rate(y: f64, gamma: f64) -> f64 {
    let (e, f) = panelize_pair(
        vec![BoundaryComponent::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()],
        two_disks(y),
        1000,
        16,
    )
    .unwrap();
    CondenserSystem::new(&e, &f)
        .unwrap()
        .solve(gamma)
        .unwrap()
        .predicted_rate()
        .unwrap()
}

#[test]
fn unit_circle_density_is_uniform() {
    let sol = solve_polynomial(&unit_circle(500)).unwrap();
    let target = 1.0 / (2.0 * PI);
    let dev = sol.w_e.iter().map(|w| (w - target).abs() / target).fold(0.0, f64::max);
    assert!(dev < 0.01, "deviation {dev}");
    assert!(sol.c1.abs() < 5e-3, "c1 {}", sol.c1);
}

#[test]
fn interval_has_capacity_one_half_and_arcsine_density() {
    let e = interval(500);
    let sol = solve_polynomial(&e).unwrap();
    assert!((sol.c1 - 2f64.ln()).abs() < 1e-2, "c1 {}", sol.c1);
    for (p, w) in e.panels().iter().zip(&sol.w_e) {
        let x = p.mid.re;
        if x.abs() < 0.9 {
            let exact = 1.0 / (PI * (1.0 - x * x).sqrt());
            assert!((w - exact).abs() / exact < 0.02, "x {x}: {w} vs {exact}");
        }
    }
}

#[test]
fn l_shape_constant_and_singular_point_potentials() {
    let sol = solve_polynomial(&panelize(vec![l_shape()], 500).unwrap()).unwrap();
    assert!((sol.c1 - 0.6117).abs() < 1e-2, "c1 {}", sol.c1);
    for (q, u) in [
        (c(-0.2, 0.0), 0.1937),
        (c(0.0, 0.2), 0.3868),
        (c(0.0, -0.2), 0.3868),
        (c(1.0, 0.0), 0.5002),
    ] {
        let v = sol.potential(q).value;
        assert!((v - u).abs() < 1e-2, "U({q}) = {v}, expected {u}");
    }
}

#[test]
fn circle_potential_inside_and_far_away() {
    let sol = solve_polynomial(&unit_circle(500)).unwrap();
    assert!((sol.potential(c(0.0, 0.0)).value - sol.c1).abs() < 1e-3);
    assert!(sol.potential(c(0.0, 0.0)).value.abs() < 5e-3);
    assert!((sol.potential(c(10.0, 0.0)).value + 10f64.ln()).abs() < 1e-3);
}

#[test]
fn interval_nodes_approach_chebyshev_lobatto() {
    let sol = solve_polynomial(&interval(500)).unwrap();
    let fam = den2pts(&sol.density_e().unwrap(), 20, 0.0).unwrap();
    for (j, z) in fam.points.iter().enumerate() {
        let cl = ((19 - j) as f64 * PI / 19.0).cos();
        assert!((z.re - cl).abs() < 2e-3, "{j}: {} vs {cl}", z.re);
    }
}

#[test]
fn mirrored_circles_balance_near_unit_ratio() {
    let e = vec![BoundaryComponent::circle(c(-2.0, 0.0), 0.5).unwrap()];
    let f = vec![BoundaryComponent::circle(c(2.0, 0.0), 0.5).unwrap()];
    let (e, f) = panelize_pair(e, f, 400, 16).unwrap();
    let sol = EquilibriumProblem::condenser(e, f, 0.999).unwrap().solve().unwrap();
    let c2 = sol.c2.unwrap();
    assert!((sol.c1 - c2).abs() < 2e-2, "c1 {} c2 {c2}", sol.c1);
    let mass_f: f64 = sol
        .f
        .as_ref()
        .unwrap()
        .panels()
        .iter()
        .zip(sol.w_f.as_ref().unwrap())
        .map(|(p, w)| p.length * w)
        .sum();
    assert!((mass_f - 0.999).abs() < 1e-10);
}

#[test]
fn interval_with_two_small_disks_rates() {
    assert!((condenser_rate(0.01, 0.95) / 0.0807 - 1.0).abs() < 0.1);
    assert!((condenser_rate(0.1, 0.99) / 0.0231 - 1.0).abs() < 0.1);
    assert!((condenser_rate(0.1, 0.5) / 0.1419 - 1.0).abs() < 0.1);
}

#[test]
fn discrete_and_continuous_potentials_agree_off_the_circle() {
    let sol = solve_polynomial(&unit_circle(500)).unwrap();
    let d = sol.density_e().unwrap();
    for n in [50usize, 100, 200] {
        let nodes = den2pts(&d, n, 0.0).unwrap().points;
        let m = DiscreteMeasure::new(nodes, vec![]).unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.3), c(1.3, 0.0), c(-0.2, -1.5)] {
            let gap = (discrete_potential(&m, z).unwrap() - sol.potential(z).value).abs();
            assert!(gap <= 5.0 / n as f64, "n {n} z {z}: {gap}");
        }
    }
}

#[test]
fn poles_split_by_component_mass() {
    let (e, f) = panelize_pair(
        vec![BoundaryComponent::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap()],
        vec![
            BoundaryComponent::circle(c(0.0, 0.3), 0.01).unwrap(),
            BoundaryComponent::circle(c(0.0, -2.0), 0.01).unwrap(),
        ],
        600,
        16,
    )
    .unwrap();
    let sol = CondenserSystem::new(&e, &f).unwrap().solve(0.5).unwrap();
    let df = sol.density_f().unwrap().unwrap();
    let masses = df.component_masses();
    assert!(masses[0] > masses[1]);
    let fam = distribute(&df, 20, &[], PointRole::Poles).unwrap();
    let near = fam.components.iter().filter(|&&i| i == 0).count();
    assert!(near as f64 >= 20.0 * masses[0] / 0.5 - 1.0);
}
