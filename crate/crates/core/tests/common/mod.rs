//! Shared test systems.
#![allow(dead_code)]

use hullfix::hutchinson::attractor_hull;
use hullfix::{Angle, AttractorHull, IfsSystem, Point, Similitude};

pub fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

pub fn centered(ratio: f64, angle: Angle, centers: &[Point]) -> IfsSystem {
    IfsSystem::new(
        centers
            .iter()
            .map(|&c| Similitude::from_center(ratio, angle, c).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn sierpinski() -> IfsSystem {
    centered(0.5, Angle::ZERO, &[p(0., 0.), p(1., 0.), p(0., 1.)])
}

/// `z ↦ ⅓·e^{iα}·z ∓ 1`.
pub fn example1(alpha: Angle) -> IfsSystem {
    IfsSystem::new(vec![
        Similitude::from_offset(1.0 / 3.0, alpha, p(-1., 0.)).unwrap(),
        Similitude::from_offset(1.0 / 3.0, alpha, p(1., 0.)).unwrap(),
    ])
    .unwrap()
}

pub fn example1_irrational() -> IfsSystem {
    example1(Angle::radians(1.0).unwrap())
}

pub fn mixed_angles() -> IfsSystem {
    IfsSystem::new(vec![
        Similitude::from_center(0.3, Angle::ZERO, p(0., 0.)).unwrap(),
        Similitude::from_center(0.3, Angle::pi_fraction(1, 2).unwrap(), p(1., 0.)).unwrap(),
        Similitude::from_center(0.3, Angle::pi_fraction(1, 3).unwrap(), p(0.5, 0.9)).unwrap(),
    ])
    .unwrap()
}

pub fn cantor() -> IfsSystem {
    centered(1.0 / 3.0, Angle::ZERO, &[p(0., 0.), p(1., 0.)])
}

/// Four corner maps of `[0,2]×[0,1]` plus a rotated band map whose first
/// boundary component has two arcs.
pub fn rectangle_band() -> IfsSystem {
    let mut maps: Vec<Similitude> = [p(0., 0.), p(2., 0.), p(2., 1.), p(0., 1.)]
        .iter()
        .map(|&c| Similitude::from_center(0.25, Angle::ZERO, c).unwrap())
        .collect();
    maps.push(
        Similitude::from_center(0.5, Angle::pi_fraction(1, 2).unwrap(), p(1.0, 0.5)).unwrap(),
    );
    IfsSystem::new(maps).unwrap()
}

pub fn rotated_quadrants() -> IfsSystem {
    let corners = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
    IfsSystem::new(
        corners
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                Similitude::from_center(0.5, Angle::pi_fraction(k as i64, 2).unwrap(), c).unwrap()
            })
            .collect(),
    )
    .unwrap()
}

pub fn regular_polygon(n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            Point::unit(std::f64::consts::TAU * k as f64 / n as f64 + std::f64::consts::FRAC_PI_2)
        })
        .collect()
}

pub fn pentagon() -> IfsSystem {
    centered(0.3, Angle::ZERO, &regular_polygon(5))
}

pub fn hexagon_twisted() -> IfsSystem {
    centered(0.25, Angle::radians(1.0).unwrap(), &regular_polygon(6))
}

/// Named corpus covering exact, irrational, degenerate and multi-arc cases.
pub fn corpus() -> Vec<(&'static str, IfsSystem)> {
    vec![
        ("sierpinski", sierpinski()),
        ("example1-1rad", example1_irrational()),
        ("example1-pi/3", example1(Angle::pi_fraction(1, 3).unwrap())),
        ("example1-pi/5", example1(Angle::pi_fraction(1, 5).unwrap())),
        ("mixed-angles", mixed_angles()),
        ("cantor", cantor()),
        ("rectangle-band", rectangle_band()),
        ("rotated-quadrants", rotated_quadrants()),
        ("pentagon", pentagon()),
        ("hexagon-1rad", hexagon_twisted()),
    ]
}

pub fn hull(sys: &IfsSystem) -> AttractorHull {
    attractor_hull(sys, 1e-10 * scale(sys)).unwrap()
}

/// Diameter of the fixed-point set, at least 1.
pub fn scale(sys: &IfsSystem) -> f64 {
    let f = sys.fixed_points();
    let mut d: f64 = 1.0;
    for a in &f {
        for b in &f {
            d = d.max(a.dist(*b));
        }
    }
    d
}
