//! The Hutchinson operator, its convexification and certified fixed-point
//! iteration towards the hull `K̃` of the attractor.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{self, hausdorff_distance, hull_with_tolerance, simplify, ConvexBody};
use crate::similitude::IfsSystem;
use crate::{Error, Point, Result, EPS_GEOM};

/// Default iteration cap for [`iterate_to_fixed_point`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

// Below this many image vertices a step is computed sequentially.
const PAR_THRESHOLD: usize = 4096;

/// Record of a certified fixed-point run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullCertificate {
    pub iterations: usize,
    /// Hausdorff distance between the seed and its first image.
    pub first_step_gap: f64,
    /// Guaranteed bound on the Hausdorff distance to `K̃`.
    pub error_bound: f64,
    pub tolerance_requested: f64,
    /// Largest per-step perturbation introduced by vertex merging.
    pub merge_slack: f64,
    pub contraction: f64,
}

/// A converged hull together with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttractorHull {
    pub body: ConvexBody,
    pub certificate: HullCertificate,
}

impl AttractorHull {
    /// Wraps a body known to be exact (for example a hand-built triangle).
    pub fn exact(body: ConvexBody) -> Self {
        Self {
            body,
            certificate: HullCertificate {
                iterations: 0,
                first_step_gap: 0.0,
                error_bound: 0.0,
                tolerance_requested: 0.0,
                merge_slack: 0.0,
                contraction: 0.0,
            },
        }
    }

    pub fn error_bound(&self) -> f64 {
        self.certificate.error_bound
    }

    pub fn diameter(&self) -> f64 {
        self.body.diameter()
    }
}

/// `T(A) = ∪ φᵢ(A)` on a point cloud.
pub fn hutch_points(sys: &IfsSystem, cloud: &[Point]) -> Vec<Point> {
    sys.maps()
        .iter()
        .flat_map(|m| cloud.iter().map(move |&p| m.apply(p)))
        .collect()
}

fn image_vertices(sys: &IfsSystem, a: &ConvexBody) -> Vec<Point> {
    let v = a.vertices();
    if v.len() * sys.len() < PAR_THRESHOLD {
        return hutch_points(sys, v);
    }
    sys.maps()
        .par_iter()
        .flat_map_iter(|m| v.iter().map(move |&p| m.apply(p)))
        .collect()
}

/// `T̃(A) = H(∪ φᵢ(A))`, computed from vertex images only.
pub fn hutch_convex(sys: &IfsSystem, a: &ConvexBody) -> ConvexBody {
    convex::convex_hull(&image_vertices(sys, a)).expect("nonempty image")
}

/// Convex hull of the maps' fixed points. It lies inside `K̃`, so iterates
/// started here grow monotonically.
pub fn default_seed(sys: &IfsSystem) -> ConvexBody {
    convex::convex_hull(&sys.fixed_points()).expect("nonempty system")
}

/// Default tolerance: `EPS_GEOM` times the diameter of the first iterate of
/// the default seed (or of the seed itself when the image is a point).
pub fn default_tolerance(sys: &IfsSystem) -> f64 {
    let seed = default_seed(sys);
    let d = hutch_convex(sys, &seed).diameter().max(seed.diameter());
    if d > 0.0 {
        EPS_GEOM * d
    } else {
        EPS_GEOM
    }
}

/// Iterates `T̃` from `seed` until the a-priori bound
/// `q^m·d(A₀, T̃A₀)/(1−q) + S/(1−q)` is at most `tol`, where `S` bounds the
/// per-step perturbation from vertex merging.
pub fn iterate_to_fixed_point(
    sys: &IfsSystem,
    seed: &ConvexBody,
    tol: f64,
    max_iter: usize,
) -> Result<AttractorHull> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let q = sys.q();
    let first = hutch_convex(sys, seed);
    let gap = hausdorff_distance(seed, &first);
    let scale = seed.diameter().max(first.diameter());
    // merge budget: a quarter of the tolerance after the 1/(1−q) blow-up
    let merge_tol = (EPS_GEOM * scale).min(tol * (1.0 - q) / 4.0);
    let hull_tol = merge_tol * 1e-3;

    let bound_at = |m: usize, slack: f64| -> f64 {
        q.powi(m.min(i32::MAX as usize) as i32) * gap / (1.0 - q) + slack / (1.0 - q)
    };

    let mut current = seed.clone();
    let mut slack: f64 = 0.0;
    let mut m = 0usize;
    loop {
        let bound = bound_at(m, slack);
        if bound <= tol {
            return Ok(AttractorHull {
                body: current,
                certificate: HullCertificate {
                    iterations: m,
                    first_step_gap: gap,
                    error_bound: bound,
                    tolerance_requested: tol,
                    merge_slack: slack,
                    contraction: q,
                },
            });
        }
        if m >= max_iter {
            return Err(Error::NotConverged {
                iterations: m,
                bound,
                tolerance: tol,
                partial: Box::new(current),
            });
        }
        let pts = image_vertices(sys, &current);
        let raw = hull_with_tolerance(&pts, hull_tol)?;
        let (next, s) = simplify(&raw, merge_tol);
        // points dropped by the hull pass sit within hull_tol of the result
        let step_slack = if s > 0.0 { s + hull_tol } else { hull_tol };
        slack = slack.max(step_slack);
        current = next;
        m += 1;
    }
}

/// [`iterate_to_fixed_point`] from the default seed with the default cap.
pub fn attractor_hull(sys: &IfsSystem, tol: f64) -> Result<AttractorHull> {
    iterate_to_fixed_point(sys, &default_seed(sys), tol, DEFAULT_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::{convex_hull, translate};
    use crate::similitude::{Angle, Similitude};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn example1(alpha: f64) -> IfsSystem {
        let a = Angle::radians(alpha).unwrap();
        IfsSystem::new(vec![
            Similitude::from_offset(1.0 / 3.0, a, p(-1.0, 0.0)).unwrap(),
            Similitude::from_offset(1.0 / 3.0, a, p(1.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    fn sierpinski() -> IfsSystem {
        IfsSystem::new(
            [p(0., 0.), p(1., 0.), p(0., 1.)]
                .iter()
                .map(|&c| Similitude::from_center(0.5, Angle::ZERO, c).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn triangle() -> ConvexBody {
        convex_hull(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap()
    }

    #[test]
    fn hutch_convex_examples() {
        let s = hutch_convex(&example1(1.0), &ConvexBody::Point(Point::ORIGIN));
        assert_eq!(s, ConvexBody::Segment([p(-1., 0.), p(1., 0.)]));
        let single = IfsSystem::new(vec![Similitude::from_center(
            0.5,
            Angle::pi_fraction(1, 3).unwrap(),
            p(1.0, 2.0),
        )
        .unwrap()])
        .unwrap();
        let sq = convex_hull(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap();
        let img = hutch_convex(&single, &sq);
        assert!(hausdorff_distance(&img, &convex::transform(&sq, single.map(0))) < 1e-15);
        assert_eq!(hutch_convex(&sierpinski(), &triangle()), triangle());
    }

    #[test]
    fn sierpinski_is_already_fixed() {
        let h = iterate_to_fixed_point(&sierpinski(), &triangle(), 1e-9, 10).unwrap();
        assert_eq!(h.certificate.iterations, 0);
        assert_eq!(h.certificate.first_step_gap, 0.0);
        assert_eq!(h.body, triangle());
    }

    #[test]
    fn example1_perimeter_from_origin() {
        let h = iterate_to_fixed_point(
            &example1(1.0),
            &ConvexBody::Point(Point::ORIGIN),
            1e-6,
            10_000,
        )
        .unwrap();
        let per = h.body.perimeter();
        assert!((6.0 - 1e-4..=6.0 + 1e-9).contains(&per), "{per}");
        assert!(h.certificate.error_bound <= 1e-6);
    }

    #[test]
    fn example1_iterates_have_closed_form_perimeter() {
        let sys = example1(1.0);
        let mut a = ConvexBody::Point(Point::ORIGIN);
        for m in 1..=8 {
            a = hutch_convex(&sys, &a);
            let expect = 6.0 * (1.0 - 3f64.powi(-m));
            assert!((a.perimeter() - expect).abs() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn monotone_from_contained_seed() {
        let sys = example1(1.0);
        let mut a = default_seed(&sys);
        for _ in 0..10 {
            let b = hutch_convex(&sys, &a);
            let tol = 1e-9 * b.diameter();
            assert!(a.vertices().iter().all(|&v| b.contains(v, tol)));
            a = b;
        }
    }

    #[test]
    fn nested_from_invariant_disc() {
        // any disc of radius ρ ≥ 3/2 about the origin is mapped into itself
        let sys = example1(1.0);
        let disc: Vec<Point> = (0..64)
            .map(|k| Point::unit(k as f64 * 0.098_174_77) * 4.0)
            .collect();
        let mut a = convex_hull(&disc).unwrap();
        for _ in 0..8 {
            let b = hutch_convex(&sys, &a);
            let tol = 1e-9 * a.diameter();
            assert!(b.vertices().iter().all(|&v| a.contains(v, tol)));
            a = b;
        }
    }

    #[test]
    fn seeds_agree_within_certificates() {
        let sys = example1(1.0);
        let a = attractor_hull(&sys, 1e-9).unwrap();
        let far = translate(
            &convex_hull(&[p(0., 0.), p(5., 0.), p(0., 5.)]).unwrap(),
            p(3., -2.),
        );
        let b = iterate_to_fixed_point(&sys, &far, 1e-9, 10_000).unwrap();
        let d = hausdorff_distance(&a.body, &b.body);
        assert!(d <= a.error_bound() + b.error_bound(), "{d}");
    }

    #[test]
    fn reports_non_convergence() {
        let sys = example1(1.0);
        let err =
            iterate_to_fixed_point(&sys, &ConvexBody::Point(Point::ORIGIN), 1e-12, 2).unwrap_err();
        match err {
            Error::NotConverged {
                iterations,
                partial,
                ..
            } => {
                assert_eq!(iterations, 2);
                assert!(partial.is_polygon());
            }
            e => panic!("unexpected {e}"),
        }
        assert!(iterate_to_fixed_point(&sys, &ConvexBody::Point(Point::ORIGIN), 0.0, 2).is_err());
    }

    #[test]
    fn points_oracle_is_contained() {
        let sys = sierpinski();
        assert_eq!(hutch_points(&sys, &[p(0.3, 0.3)]).len(), 3);
        let mut cloud = sys.fixed_points();
        let mut hull = convex_hull(&cloud).unwrap();
        for _ in 0..12 {
            cloud = hutch_points(&sys, &cloud);
            hull = hutch_convex(&sys, &hull);
            let h = convex_hull(&cloud).unwrap();
            assert!(h.vertices().iter().all(|&v| hull.contains(v, 1e-12)));
            if cloud.len() > 20_000 {
                break;
            }
        }
        assert!(cloud.iter().all(|&v| triangle().contains(v, 1e-12)));
    }

    #[test]
    fn contraction_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.gen_range(1..5);
            let sys = IfsSystem::new(
                (0..n)
                    .map(|_| {
                        Similitude::from_offset(
                            rng.gen_range(0.05..0.95),
                            Angle::radians(rng.gen_range(0.0..std::f64::consts::TAU)).unwrap(),
                            p(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        )
                        .unwrap()
                    })
                    .collect(),
            )
            .unwrap();
            let body = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(1..8);
                let pts: Vec<Point> = (0..k)
                    .map(|_| p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect();
                convex_hull(&pts).unwrap()
            };
            let (a, b) = (body(&mut rng), body(&mut rng));
            let lhs = hausdorff_distance(&hutch_convex(&sys, &a), &hutch_convex(&sys, &b));
            assert!(lhs <= sys.q() * hausdorff_distance(&a, &b) + 1e-9);
        }
    }
}
