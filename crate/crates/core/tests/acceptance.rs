//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use hullfix::boundary::{
    component_bound, components_at_depth, detect_corners, distinct_directions, enumerate_sides,
    sides_order_one, vertex_dimension_estimate, DEFAULT_MAX_PERIOD,
};
use hullfix::convex::{convex_hull, hausdorff_distance};
use hullfix::hutchinson::{attractor_hull, hutch_convex};
use hullfix::ocsc::{check_ocsc, interior_condition, refine, OcscWitness, Verdict};
use hullfix::support_solver::{solve_hull, DEFAULT_GRID};
use hullfix::{Angle, ConvexBody, IfsSystem, Similitude};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let r = f()?;
    let el = t.elapsed();
    ensure(el < limit, || format!("took {el:?}, limit {limit:?}"))?;
    Ok(format!("{r} ({el:.2?})"))
}

/// Distance between two directions modulo π.
fn dir_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

fn perimeter() -> Outcome {
    timed(Duration::from_secs(5), || {
        let sys = example1_irrational();
        let h = attractor_hull(&sys, 1e-9).map_err(|e| e.to_string())?;
        let per = h.body.perimeter();
        ensure((per - 6.0).abs() <= 1e-4, || format!("perimeter {per}"))?;
        Ok(format!("perimeter {per:.9}"))
    })
}

fn side_ladder() -> Outcome {
    let sys = example1_irrational();
    let h = hull(&sys);
    let min = 2.0 / 3f64.powi(5);
    let sides = enumerate_sides(&sys, &h, 12, min).map_err(|e| e.to_string())?;
    ensure(sides.len() == 12, || format!("{} sides", sides.len()))?;
    for k in 1..=6 {
        let len = 2.0 / 3f64.powi(k - 1);
        let dir = ((k - 1) as f64).rem_euclid(PI);
        let hits = sides
            .iter()
            .filter(|s| (s.length - len).abs() <= 1e-6 && dir_gap(s.direction, dir) <= 1e-6)
            .count();
        ensure(hits == 2, || {
            format!("k={k}: {hits} sides of length {len} at {dir}")
        })?;
    }
    Ok("12 sides, lengths 2/3^(k-1) twice each, directions (k-1)α".into())
}

fn random_body(rng: &mut ChaCha8Rng) -> ConvexBody {
    let n = rng.gen_range(1..12);
    let c = p(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
    let pts: Vec<_> = (0..n)
        .map(|_| c + p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect();
    convex_hull(&pts).unwrap()
}

fn random_system(rng: &mut ChaCha8Rng) -> IfsSystem {
    let n = rng.gen_range(1..5);
    IfsSystem::new(
        (0..n)
            .map(|_| {
                Similitude::from_offset(
                    rng.gen_range(0.05..0.95),
                    Angle::radians(rng.gen_range(0.0..std::f64::consts::TAU)).unwrap(),
                    p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                )
                .unwrap()
            })
            .collect(),
    )
    .unwrap()
}

fn contraction() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let sys = random_system(&mut rng);
            for _ in 0..100 {
                let (a, b) = (random_body(&mut rng), random_body(&mut rng));
                let before = hausdorff_distance(&a, &b);
                let after = hausdorff_distance(&hutch_convex(&sys, &a), &hutch_convex(&sys, &b));
                ensure(after <= sys.q() * before + 1e-9, || {
                    format!("d(TA,TB)={after} > q·d(A,B)={}", sys.q() * before)
                })?;
                if before > 0.0 {
                    worst = worst.max(after / (sys.q() * before));
                }
            }
        }
        Ok(format!("1000 pairs, max d(TA,TB)/(q·d(A,B)) = {worst:.4}"))
    })
}

fn polygonality() -> Outcome {
    let sys = sierpinski();
    let h = hull(&sys);
    let tri = convex_hull(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap();
    let gap = hausdorff_distance(&h.body, &tri);
    ensure(h.body.vertices().len() == 3 && gap <= 1e-9, || {
        format!(
            "sierpinski hull has {} vertices, gap {gap}",
            h.body.vertices().len()
        )
    })?;

    let sys = mixed_angles();
    let h = hull(&sys);
    let theta = sys.angle_gcd().ok_or("no angle gcd")?.to_radians();
    let betas: Vec<f64> = sides_order_one(&sys, &h)
        .iter()
        .map(|s| s.direction)
        .collect();
    ensure(!betas.is_empty(), || "no order-1 sides".into())?;
    let min = 1e-4 * h.diameter();
    let depth = 3;
    let d1 = enumerate_sides(&sys, &h, depth, min).map_err(|e| e.to_string())?;
    let d2 = enumerate_sides(&sys, &h, depth + 2, min).map_err(|e| e.to_string())?;
    let steps = (PI / theta).round() as i64;
    for s in d1.iter().chain(&d2) {
        let ok = betas
            .iter()
            .any(|&b| (0..steps).any(|k| dir_gap(s.direction, b + k as f64 * theta) <= 1e-6));
        ensure(ok, || format!("direction {} outside β_j + kθ", s.direction))?;
    }
    let (a, b) = (
        distinct_directions(&d1, 1e-6),
        distinct_directions(&d2, 1e-6),
    );
    ensure(
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| dir_gap(*x, *y) <= 1e-6),
        || format!("direction sets differ: {a:?} vs {b:?}"),
    )?;
    Ok(format!(
        "triangle gap {gap:.1e}; mixed system: {} sides, {} directions, stable at depths {depth} and {}",
        d1.len(),
        a.len(),
        depth + 2
    ))
}

fn order_one_bound() -> Outcome {
    let corpus = corpus();
    ensure(corpus.len() >= 8, || "corpus too small".into())?;
    let mut summary = Vec::new();
    for (name, sys) in &corpus {
        let h = hull(sys);
        let bound = 2 * sys.len() - 2;
        let sides = sides_order_one(sys, &h).len();
        let comps = components_at_depth(sys, &h, 1)
            .map_err(|e| format!("{name}: {e}"))?
            .len();
        ensure(sides <= bound && comps <= bound, || {
            format!("{name}: {sides} sides, {comps} components, bound {bound}")
        })?;
        summary.push(format!("{name} {sides}/{comps}≤{bound}"));
    }
    Ok(summary.join(", "))
}

fn dimension_trend() -> Outcome {
    let sys = example1_irrational();
    let h = hull(&sys);
    let est = vertex_dimension_estimate(&sys, &h, 8).map_err(|e| e.to_string())?;
    let mut s = Vec::new();
    for r in est.rows.iter().filter(|r| r.p >= 2) {
        let bound = component_bound(sys.len(), r.p);
        ensure(r.component_count as f64 <= bound, || {
            format!("p={}: N_p={} > {bound}", r.p, r.component_count)
        })?;
        s.push(
            r.exponent
                .ok_or_else(|| format!("p={}: no exponent", r.p))?,
        );
    }
    ensure(s.len() == 7, || format!("{} rows for p=2..8", s.len()))?;
    ensure(s.windows(2).all(|w| w[1] <= w[0]), || {
        format!("not non-increasing: {s:?}")
    })?;
    ensure(s[6] < s[0] / 2.0, || {
        format!("s_8={} ≥ s_2/2={}", s[6], s[0] / 2.0)
    })?;
    Ok(format!("s_2={:.3} … s_8={:.3}", s[0], s[6]))
}

fn cross_method() -> Outcome {
    let mut summary = Vec::new();
    for (name, sys) in corpus().iter().filter(|(_, s)| s.all_exact()) {
        let h = hull(sys);
        let diam = h.diameter();
        let sh = solve_hull(sys, 1e-11 * diam, DEFAULT_GRID).map_err(|e| format!("{name}: {e}"))?;
        let gap = hausdorff_distance(&sh.outer, &h.body);
        let certs = sh.certified_error + h.error_bound();
        ensure(gap <= certs && certs <= 2e-9 * diam, || {
            format!("{name}: gap {gap:e}, certificates {certs:e}, diam {diam}")
        })?;
        summary.push(format!("{name} {gap:.1e}≤{certs:.1e}"));
    }
    Ok(summary.join(", "))
}

fn ocsc_decisions() -> Outcome {
    let r = interior_condition(&sierpinski(), &hull(&sierpinski())).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Pass, || {
        format!("sierpinski: {:?}", r.verdict)
    })?;

    let origin = p(0., 0.);
    let sys = IfsSystem::new(vec![
        Similitude::from_center(0.9, Angle::ZERO, origin).unwrap(),
        Similitude::from_center(0.9, Angle::radians(0.7).unwrap(), origin).unwrap(),
    ])
    .unwrap();
    let disc = convex_hull(
        &(0..64)
            .map(|k| hullfix::Point::unit(k as f64 * PI / 32.0))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let r = check_ocsc(&sys, &disc).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Fail, || {
        format!("overlap: {:?}", r.verdict)
    })?;
    let witness = r
        .witnesses
        .iter()
        .find_map(|w| match w {
            OcscWitness::Overlap { point, .. } => Some(*point),
            _ => None,
        })
        .ok_or("no overlap witness")?;
    // the witness must be interior to both images: inside the disc of radius 0.9
    ensure(witness.norm() < 0.9 * (PI / 64.0).cos(), || {
        format!("witness {witness:?} not interior")
    })?;

    let r = interior_condition(&cantor(), &hull(&cantor())).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::NoInterior, || {
        format!("cantor: {:?}", r.verdict)
    })?;
    Ok(format!(
        "sierpinski pass, overlap witness ({:.3}, {:.3}), cantor no interior",
        witness.x, witness.y
    ))
}

fn corner_periodicity() -> Outcome {
    let mut total = 0;
    for (name, sys) in corpus() {
        let h = hull(&sys);
        let diam = h.diameter();
        for c in detect_corners(&sys, &h, 0.1, DEFAULT_MAX_PERIOD) {
            let w = c
                .witness
                .as_ref()
                .ok_or_else(|| format!("{name}: corner at {:?} without witness", c.point))?;
            let len = w.prefix.len() + w.period.len();
            ensure(len <= DEFAULT_MAX_PERIOD && !w.period.is_empty(), || {
                format!("{name}: witness length {len}")
            })?;
            let z = sys.compose_word(&w.period).unwrap().fixed_point();
            let z = if w.prefix.is_empty() {
                z
            } else {
                sys.compose_word(&w.prefix).unwrap().apply(z)
            };
            let d = z.dist(c.point);
            ensure(d <= 1e-8 * diam, || {
                format!("{name}: witness point {d:e} from corner")
            })?;
            total += 1;
        }
    }
    let sys = example1_irrational();
    let n = detect_corners(&sys, &hull(&sys), 0.1, DEFAULT_MAX_PERIOD).len();
    ensure(n == 0, || format!("twisted pair reports {n} corners"))?;
    Ok(format!("{total} corners witnessed, twisted pair has none"))
}

fn refinement_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, sys) in corpus() {
        let a = hull(&sys);
        let r = refine(&sys, 2).map_err(|e| e.to_string())?;
        let b = hull(&r);
        let gap = hausdorff_distance(&a.body, &b.body);
        let certs = a.error_bound() + b.error_bound();
        // rounding of the composed coefficients
        let slack = 16.0 * f64::EPSILON * a.diameter();
        ensure(gap <= certs + slack, || {
            format!("{name}: gap {gap:e} > {certs:e}")
        })?;
        worst = worst.max(gap);
    }
    Ok(format!("max gap {worst:.1e}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("twisted pair perimeter", perimeter),
        ("twisted pair side ladder", side_ladder),
        ("contraction", contraction),
        ("polygonality", polygonality),
        ("order-1 side bound", order_one_bound),
        ("dimension-zero trend", dimension_trend),
        ("cross-method oracle", cross_method),
        ("ocsc decisions", ocsc_decisions),
        ("corner periodicity", corner_periodicity),
        ("refinement equivalence", refinement_equivalence),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1)
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
