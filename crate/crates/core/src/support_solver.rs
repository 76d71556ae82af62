//! Support-function solver for `K̃`, independent of polygon iteration.
//!
//! The support function of `K̃` satisfies
//! `h(u) = maxᵢ (qᵢ·h(R_{−αᵢ}u) + ⟨bᵢ, u⟩)`. On a direction set closed under
//! the rotations `R_{−αᵢ}` this is a finite max-plus fixed-point problem;
//! otherwise off-grid values are bounded above by sublinear interpolation
//! between the two neighbouring grid directions, which keeps the result an
//! outer approximation.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{self, bbox, clip_halfplane, hausdorff_distance, ConvexBody, DirectionSet};
use crate::hutchinson::default_seed;
use crate::point::{angle_diff, normalize_radians};
use crate::similitude::{Angle, IfsSystem};
use crate::{Error, Point, Result};

/// Default number of grid directions.
pub const DEFAULT_GRID: usize = 1024;

const MAX_SWEEPS: usize = 1_000_000;
// directions closer than this are the same direction
const LOOKUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// In-place updates in sorted direction order.
    GaussSeidel,
    /// Every sweep reads the previous sweep's snapshot; parallel.
    Jacobi,
}

/// Support values of `K̃` on a direction set.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportVector {
    pub directions: DirectionSet,
    pub values: Vec<f64>,
    /// Attractor points attaining each value (closed direction sets only).
    pub extreme_points: Option<Vec<Point>>,
    /// Max-norm error bound of `values`.
    pub certified_error: f64,
    pub sweeps: usize,
    /// Whether the direction set was closed under the system's rotations.
    pub closed: bool,
}

/// Smallest direction set containing `initial` and closed under rotation by
/// every `−αᵢ`.
pub fn direction_closure(sys: &IfsSystem, initial: &DirectionSet) -> Result<DirectionSet> {
    let g = sys.rotation_step().ok_or(Error::Incommensurable)?;
    let steps = (Rational64::from_integer(2) / g).to_integer();
    let mut out = Vec::with_capacity(initial.len() * steps as usize);
    for d in initial.angles() {
        for k in 0..steps {
            out.push(d.add(&Angle::from_pi_multiple(g * k)));
        }
    }
    Ok(DirectionSet::new(out))
}

/// Uniform direction grid of at least `min_size` directions, closed under the
/// system's rotations when all angles are exact.
pub fn default_directions(sys: &IfsSystem, min_size: usize) -> DirectionSet {
    match sys.rotation_step() {
        Some(g) => {
            // grid step 2π/N must divide gπ: N a multiple of 2·denom(g)
            let unit = (2 * *g.denom()) as usize;
            let n = min_size.div_ceil(unit).max(1) * unit;
            DirectionSet::uniform(n)
        }
        None => DirectionSet::uniform(min_size),
    }
}

/// How one map reads the previous support values at one direction.
#[derive(Clone, Copy, Debug)]
struct Lookup {
    lo: usize,
    hi: usize,
    w_lo: f64,
    w_hi: f64,
}

struct Plan {
    dirs: Vec<Point>,
    // [k * n + i]
    lookups: Vec<Lookup>,
    // ⟨bᵢ, u_k⟩ at [k * n + i]
    shifts: Vec<f64>,
    ratios: Vec<f64>,
    closed: bool,
    contraction: f64,
}

fn plan(sys: &IfsSystem, dirs: &DirectionSet) -> Result<Plan> {
    let rad = dirs.radians();
    let m = rad.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty direction set".into()));
    }
    let n = sys.len();
    let mut lookups = Vec::with_capacity(m * n);
    let mut shifts = Vec::with_capacity(m * n);
    let mut closed = true;
    let mut weight_max: f64 = 1.0;
    for &th in &rad {
        let u = Point::unit(th);
        for map in sys.maps() {
            shifts.push(map.offset().dot(u));
            let v = normalize_radians(th - map.angle().to_radians());
            let l = bracket(&rad, v);
            if l.w_hi != 0.0 || l.lo != l.hi {
                closed = false;
            }
            weight_max = weight_max.max(l.w_lo + l.w_hi);
            lookups.push(l);
        }
    }
    let ratios: Vec<f64> = sys.maps().iter().map(|s| s.ratio()).collect();
    let contraction = sys.q() * weight_max;
    if contraction >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "direction grid too coarse: interpolated contraction {contraction} ≥ 1"
        )));
    }
    Ok(Plan {
        dirs: rad.iter().map(|&t| Point::unit(t)).collect(),
        lookups,
        shifts,
        ratios,
        closed,
        contraction,
    })
}

/// Locates `v` in the sorted cyclic list: an exact hit within `LOOKUP_TOL`,
/// or the two neighbours with nonnegative weights `v = w_lo·u_lo + w_hi·u_hi`.
fn bracket(rad: &[f64], v: f64) -> Lookup {
    let m = rad.len();
    let k = rad.partition_point(|&r| r < v);
    let hi = k % m;
    let lo = (k + m - 1) % m;
    for idx in [hi, lo] {
        if angle_diff(rad[idx], v).abs() <= LOOKUP_TOL {
            return Lookup {
                lo: idx,
                hi: idx,
                w_lo: 1.0,
                w_hi: 0.0,
            };
        }
    }
    let span = normalize_radians(rad[hi] - rad[lo]);
    let span = if span == 0.0 {
        std::f64::consts::TAU
    } else {
        span
    };
    let a = normalize_radians(v - rad[lo]);
    let s = span.sin();
    if span >= std::f64::consts::PI || s <= 0.0 {
        // gap too wide for a cone bound; the caller rejects via contraction
        return Lookup {
            lo,
            hi,
            w_lo: f64::INFINITY,
            w_hi: f64::INFINITY,
        };
    }
    Lookup {
        lo,
        hi,
        w_lo: (span - a).sin() / s,
        w_hi: a.sin() / s,
    }
}

impl Plan {
    fn eval(&self, h: &[f64], k: usize) -> (f64, usize) {
        let n = self.ratios.len();
        let mut best = (f64::NEG_INFINITY, 0);
        for i in 0..n {
            let l = self.lookups[k * n + i];
            let prev = if l.w_hi == 0.0 {
                h[l.lo]
            } else {
                l.w_lo * h[l.lo] + l.w_hi * h[l.hi]
            };
            let val = self.ratios[i] * prev + self.shifts[k * n + i];
            if val > best.0 {
                best = (val, i);
            }
        }
        best
    }
}

/// Solves the support recursion on `dirs` until the sweep gap certifies a
/// max-norm error of at most `tol`.
pub fn solve_support(sys: &IfsSystem, dirs: &DirectionSet, tol: f64) -> Result<SupportVector> {
    solve_support_with(sys, dirs, tol, SweepMode::GaussSeidel)
}

pub fn solve_support_with(
    sys: &IfsSystem,
    dirs: &DirectionSet,
    tol: f64,
    mode: SweepMode,
) -> Result<SupportVector> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} must be positive"
        )));
    }
    let plan = plan(sys, dirs)?;
    let m = plan.dirs.len();
    let seed = default_seed(sys);
    let mut h: Vec<f64> = plan
        .dirs
        .iter()
        .map(|&u| convex::support_vec(&seed, u))
        .collect();
    let c = plan.contraction;
    let stop = if c > 0.0 {
        tol * (1.0 - c) / c
    } else {
        f64::INFINITY
    };
    let mut sweeps = 0;
    loop {
        let gap = match mode {
            SweepMode::GaussSeidel => {
                let mut gap: f64 = 0.0;
                for k in 0..m {
                    let (v, _) = plan.eval(&h, k);
                    gap = gap.max((v - h[k]).abs());
                    h[k] = v;
                }
                gap
            }
            SweepMode::Jacobi => {
                let next: Vec<f64> = (0..m).into_par_iter().map(|k| plan.eval(&h, k).0).collect();
                let gap = next
                    .iter()
                    .zip(&h)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                h = next;
                gap
            }
        };
        sweeps += 1;
        if gap <= stop {
            let certified_error = if c > 0.0 { gap * c / (1.0 - c) } else { 0.0 };
            let extreme_points = plan.closed.then(|| policy_points(sys, &plan, &h));
            return Ok(SupportVector {
                directions: dirs.clone(),
                values: h,
                extreme_points,
                certified_error,
                sweeps,
                closed: plan.closed,
            });
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NotConverged {
                iterations: sweeps,
                bound: gap * c / (1.0 - c),
                tolerance: tol,
                partial: Box::new(reconstruct_body(&SupportVector {
                    directions: dirs.clone(),
                    values: h,
                    extreme_points: None,
                    certified_error: f64::INFINITY,
                    sweeps,
                    closed: plan.closed,
                })?),
            });
        }
    }
}

/// Points of the attractor attaining the support values, read off the argmax
/// policy: direction `k` is served by map `π(k)` from direction `σ(k)`, so
/// `x_k = φ_{π(k)}(x_{σ(k)})`. Following `σ` ends in a cycle whose point is
/// the fixed point of the composed cycle word.
fn policy_points(sys: &IfsSystem, plan: &Plan, h: &[f64]) -> Vec<Point> {
    let m = plan.dirs.len();
    let n = sys.len();
    let policy: Vec<usize> = (0..m).map(|k| plan.eval(h, k).1).collect();
    let succ: Vec<usize> = (0..m).map(|k| plan.lookups[k * n + policy[k]].lo).collect();
    let mut pts: Vec<Option<Point>> = vec![None; m];
    // 0 = unseen, 1 = on current path, 2 = done
    let mut state = vec![0u8; m];
    for start in 0..m {
        if state[start] == 2 {
            continue;
        }
        let mut path = Vec::new();
        let mut k = start;
        while state[k] == 0 {
            state[k] = 1;
            path.push(k);
            k = succ[k];
        }
        if state[k] == 1 {
            // cycle k → … → k: x_k is the fixed point of the cycle word
            let pos = path.iter().position(|&x| x == k).unwrap();
            let cycle = &path[pos..];
            let mut f = *sys.map(policy[cycle[0]]);
            for &c in &cycle[1..] {
                f = f.compose(sys.map(policy[c]));
            }
            pts[k] = Some(f.fixed_point());
            // propagate backwards around the cycle
            for &c in cycle[1..].iter().rev() {
                let next = pts[succ[c]].unwrap();
                pts[c] = Some(sys.map(policy[c]).apply(next));
            }
            for &c in cycle {
                state[c] = 2;
            }
            path.truncate(pos);
        }
        for &c in path.iter().rev() {
            let next = pts[succ[c]].unwrap();
            pts[c] = Some(sys.map(policy[c]).apply(next));
            state[c] = 2;
        }
    }
    pts.into_iter().map(Option::unwrap).collect()
}

/// Intersection of the half-planes `⟨x, u_k⟩ ≤ h_k`.
pub fn reconstruct_body(sv: &SupportVector) -> Result<ConvexBody> {
    reconstruct_with_slack(sv).map(|(b, _)| b)
}

/// Like [`reconstruct_body`], also flagging directions whose half-plane does
/// not touch the result (slack beyond `1e-9` of the body's scale).
pub fn reconstruct_with_slack(sv: &SupportVector) -> Result<(ConvexBody, Vec<bool>)> {
    let rad = sv.directions.radians();
    if rad.len() < 3 || sv.directions.max_gap() >= std::f64::consts::PI {
        return Err(Error::Unbounded);
    }
    let dirs: Vec<Point> = rad.iter().map(|&t| Point::unit(t)).collect();
    let hmax = sv.values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let r = 4.0 * (hmax + 1.0) / (sv.directions.max_gap() / 2.0).cos();
    let mut poly = vec![
        Point::new(-r, -r),
        Point::new(r, -r),
        Point::new(r, r),
        Point::new(-r, r),
    ];
    for (u, &h) in dirs.iter().zip(&sv.values) {
        poly = clip_halfplane(&poly, *u, h);
        if poly.is_empty() {
            return Err(Error::InvalidArgument(
                "half-planes have empty intersection".into(),
            ));
        }
    }
    let (lo, hi) = bbox(&poly);
    let scale = (hi - lo).norm();
    let body = convex::hull_with_tolerance(&poly, 1e-12 * scale.max(f64::MIN_POSITIVE))?;
    let tol = 1e-9 * scale.max(hmax).max(f64::MIN_POSITIVE);
    let slack = dirs
        .iter()
        .zip(&sv.values)
        .map(|(&u, &h)| convex::support_vec(&body, u) < h - tol)
        .collect();
    Ok((body, slack))
}

/// Result of [`solve_hull`].
#[derive(Clone, Debug, PartialEq)]
pub struct SupportHull {
    /// Half-plane reconstruction; contains `K̃`.
    pub outer: ConvexBody,
    /// Hull of attained extreme points (closed mode); contained in `K̃`.
    pub inner: Option<ConvexBody>,
    /// Hausdorff bound between `outer` and `K̃`.
    pub certified_error: f64,
    pub directions: DirectionSet,
    pub closed: bool,
}

/// Computes `K̃` from support values alone.
///
/// With exact angles, the direction set is grown by the closure of the edge
/// normals of the current inner hull (and small offsets around them) until
/// no new extreme points appear; `K̃` is then squeezed between the inner hull
/// and the outer reconstruction. Otherwise a uniform grid of `grid`
/// directions gives an outer approximation.
pub fn solve_hull(sys: &IfsSystem, tol: f64, grid: usize) -> Result<SupportHull> {
    let base = default_directions(sys, grid);
    if sys.rotation_step().is_none() {
        let sv = solve_support(sys, &base, tol)?;
        let lifted = SupportVector {
            values: sv.values.iter().map(|v| v + sv.certified_error).collect(),
            ..sv.clone()
        };
        let outer = reconstruct_body(&lifted)?;
        let cert = outer_gap_bound(&sv.directions) * outer.diameter();
        return Ok(SupportHull {
            outer,
            inner: None,
            certified_error: cert,
            directions: sv.directions,
            closed: false,
        });
    }
    let mut dirs = base;
    let mut prev_vertices = 0usize;
    for _round in 0..32 {
        let sv = solve_support(sys, &dirs, tol)?;
        let pts = sv.extreme_points.clone().expect("closed set");
        let inner = convex::convex_hull(&pts)?;
        // sandwich: inner ⊂ K̃ ⊂ outer(values + error)
        let lifted = SupportVector {
            values: sv
                .values
                .iter()
                .zip(&sv.directions.radians())
                .map(|(&v, &t)| v.max(convex::support(&inner, t)) + sv.certified_error)
                .collect(),
            ..sv.clone()
        };
        let outer = reconstruct_body(&lifted)?;
        let nv = inner.vertices().len();
        let mut extra: Vec<Angle> = Vec::new();
        for nu in inner.edge_normal_angles() {
            for d in [0.0, -1e-6, 1e-6] {
                let a = normalize_radians(nu + d);
                if sv.directions.index_of(a, LOOKUP_TOL).is_none() {
                    extra.push(Angle::radians(a)?);
                }
            }
        }
        if extra.is_empty() || nv == prev_vertices {
            let cert = hausdorff_distance(&inner, &outer);
            return Ok(SupportHull {
                outer,
                inner: Some(inner),
                certified_error: cert,
                directions: sv.directions,
                closed: true,
            });
        }
        prev_vertices = nv;
        let grown = direction_closure(sys, &DirectionSet::new(extra))?;
        dirs = DirectionSet::new(dirs.angles().iter().chain(grown.angles()).copied());
    }
    Err(Error::InvalidArgument(
        "direction refinement did not stabilize".into(),
    ))
}

// Relative outer-approximation gap for a grid with the given widest gap:
// a body with support h is contained in the reconstruction, which exceeds it
// by at most diam·(1/cos(g/2) − 1).
fn outer_gap_bound(dirs: &DirectionSet) -> f64 {
    1.0 / (dirs.max_gap() / 2.0).cos() - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::convex_hull;
    use crate::hutchinson::attractor_hull;
    use crate::similitude::Similitude;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn exact(n: i64, d: i64) -> Angle {
        Angle::pi_fraction(n, d).unwrap()
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

    fn example1(a: Angle) -> IfsSystem {
        IfsSystem::new(vec![
            Similitude::from_offset(1.0 / 3.0, a, p(-1.0, 0.0)).unwrap(),
            Similitude::from_offset(1.0 / 3.0, a, p(1.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn closure_examples() {
        let zero = IfsSystem::new(vec![
            Similitude::from_center(0.5, Angle::ZERO, p(0., 0.)).unwrap()
        ])
        .unwrap();
        let init = DirectionSet::new([Angle::ZERO, exact(1, 2)]);
        assert_eq!(direction_closure(&zero, &init).unwrap(), init);

        let quarter = IfsSystem::new(vec![
            Similitude::from_center(0.5, exact(1, 2), p(0., 0.)).unwrap()
        ])
        .unwrap();
        let c = direction_closure(&quarter, &DirectionSet::new([Angle::ZERO])).unwrap();
        assert_eq!(
            c,
            DirectionSet::new([Angle::ZERO, exact(1, 2), exact(1, 1), exact(3, 2)])
        );

        let ex = example1(exact(1, 5));
        assert_eq!(
            direction_closure(&ex, &DirectionSet::new([Angle::ZERO]))
                .unwrap()
                .len(),
            10
        );

        let irr = example1(Angle::radians(1.0).unwrap());
        assert!(matches!(
            direction_closure(&irr, &DirectionSet::new([Angle::ZERO])),
            Err(Error::Incommensurable)
        ));
    }

    #[test]
    fn single_map_supports_its_center() {
        let c = p(0.7, -0.2);
        let sys =
            IfsSystem::new(vec![Similitude::from_center(0.5, Angle::ZERO, c).unwrap()]).unwrap();
        let dirs = DirectionSet::uniform(16);
        let sv = solve_support(&sys, &dirs, 1e-12).unwrap();
        for (t, v) in dirs.radians().iter().zip(&sv.values) {
            assert!((v - c.dot(Point::unit(*t))).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruct_examples() {
        let dirs = DirectionSet::new([Angle::ZERO, exact(2, 3), exact(4, 3)]);
        let sv = SupportVector {
            directions: dirs,
            values: vec![1.0; 3],
            extreme_points: None,
            certified_error: 0.0,
            sweeps: 0,
            closed: true,
        };
        let tri = reconstruct_body(&sv).unwrap();
        // circumscribed equilateral triangle: inradius 1, side 2√3
        assert_eq!(tri.vertices().len(), 3);
        assert!((tri.area() - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        assert!((tri.perimeter() - 6.0 * 3f64.sqrt()).abs() < 1e-12);

        let sq = SupportVector {
            directions: DirectionSet::uniform(4),
            values: vec![1.0, 1.0, 0.0, 0.0],
            extreme_points: None,
            certified_error: 0.0,
            sweeps: 0,
            closed: true,
        };
        let body = reconstruct_body(&sq).unwrap();
        let unit = convex_hull(&[p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)]).unwrap();
        assert!(hausdorff_distance(&body, &unit) < 1e-12);

        let half = SupportVector {
            directions: DirectionSet::new([Angle::ZERO, exact(1, 2)]),
            values: vec![1.0, 1.0],
            ..sq
        };
        assert!(matches!(reconstruct_body(&half), Err(Error::Unbounded)));
    }

    #[test]
    fn reconstruct_round_trips_random_polygons() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let pts: Vec<Point> = (0..12)
                .map(|_| {
                    Point::unit(rng.gen_range(0.0..std::f64::consts::TAU)) * rng.gen_range(0.5..2.0)
                })
                .collect();
            let poly = convex_hull(&pts).unwrap();
            let mut angles: Vec<Angle> = poly
                .edge_normal_angles()
                .into_iter()
                .map(|a| Angle::radians(a).unwrap())
                .collect();
            angles.extend(DirectionSet::uniform(8).angles().iter().copied());
            let dirs = DirectionSet::new(angles);
            let values = dirs
                .radians()
                .iter()
                .map(|&t| convex::support(&poly, t))
                .collect();
            let sv = SupportVector {
                directions: dirs,
                values,
                extreme_points: None,
                certified_error: 0.0,
                sweeps: 0,
                closed: false,
            };
            let back = reconstruct_body(&sv).unwrap();
            assert_eq!(back.vertices().len(), poly.vertices().len());
            for (a, b) in back.vertices().iter().zip(poly.vertices()) {
                assert!(a.dist(*b) < 1e-9);
            }
        }
    }

    #[test]
    fn sierpinski_recovers_triangle() {
        let sh = solve_hull(&sierpinski(), 1e-13, DEFAULT_GRID).unwrap();
        let tri = convex_hull(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
        assert!(sh.closed);
        assert!(hausdorff_distance(&sh.outer, &tri) < 1e-9);
        assert!(sh.certified_error < 1e-9);
    }

    #[test]
    fn example1_commensurable_matches_iteration() {
        let sys = example1(exact(1, 3));
        let sh = solve_hull(&sys, 1e-13, DEFAULT_GRID).unwrap();
        let it = attractor_hull(&sys, 1e-10).unwrap();
        let d = hausdorff_distance(&sh.outer, &it.body);
        assert!(
            d <= sh.certified_error + it.error_bound(),
            "{d} vs {}",
            sh.certified_error
        );
        // hexagonal hull
        assert_eq!(sh.outer.vertices().len(), 6);
    }

    #[test]
    fn sweep_modes_agree() {
        let sys = example1(exact(1, 5));
        let dirs = default_directions(&sys, 200);
        let a = solve_support_with(&sys, &dirs, 1e-12, SweepMode::GaussSeidel).unwrap();
        let b = solve_support_with(&sys, &dirs, 1e-12, SweepMode::Jacobi).unwrap();
        assert!(a.closed && b.closed);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() <= 2e-12);
        }
    }

    #[test]
    fn jacobi_gaps_decay_geometrically() {
        let sys = example1(exact(1, 5));
        let dirs = default_directions(&sys, 200);
        let plan = plan(&sys, &dirs).unwrap();
        let seed = default_seed(&sys);
        let mut h: Vec<f64> = plan
            .dirs
            .iter()
            .map(|&u| convex::support_vec(&seed, u))
            .collect();
        let mut gaps = Vec::new();
        for _ in 0..12 {
            let next: Vec<f64> = (0..h.len()).map(|k| plan.eval(&h, k).0).collect();
            gaps.push(
                next.iter()
                    .zip(&h)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max),
            );
            h = next;
        }
        for w in gaps.windows(2) {
            if w[0] > 1e-14 {
                assert!(w[1] / w[0] <= sys.q() + 1e-6, "{gaps:?}");
            }
        }
    }

    #[test]
    fn sampled_mode_is_outer_and_tightens() {
        let sys = example1(Angle::radians(1.0).unwrap());
        let it = attractor_hull(&sys, 1e-10).unwrap();
        let gap_for = |n: usize| {
            let sv = solve_support(&sys, &DirectionSet::uniform(n), 1e-12).unwrap();
            assert!(!sv.closed);
            let lifted = SupportVector {
                values: sv.values.iter().map(|v| v + sv.certified_error).collect(),
                ..sv
            };
            let outer = reconstruct_body(&lifted).unwrap();
            for &v in it.body.vertices() {
                assert!(outer.contains(v, 1e-9));
            }
            hausdorff_distance(&outer, &it.body)
        };
        let (coarse, fine) = (gap_for(256), gap_for(4096));
        assert!(fine < coarse / 8.0, "{coarse} {fine}");
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(solve_support(&sierpinski(), &DirectionSet::uniform(8), 0.0).is_err());
    }
}
