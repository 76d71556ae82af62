//! Open convex set condition checks, `p`-th refinement and regularization.
//!
//! Verdicts are numerical: they hold at the stated tolerance, and touching
//! configurations sit on the decision boundary by design.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{self, contact_tolerance, BoundaryComponent};
use crate::convex::{self, disjoint_interiors, intersection, offset_inward, ConvexBody};
use crate::hutchinson::AttractorHull;
use crate::similitude::{AddressWord, IfsSystem};
use crate::{Error, Point, Result, EPS_GEOM};

/// Default cap on the number of maps a refinement may produce.
pub const DEFAULT_REFINE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hull has empty interior; the interior condition does not apply.
    NoInterior,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum OcscWitness {
    /// A vertex of `φ_map(O)` outside `O`.
    EscapingVertex { map: usize, point: Point },
    /// A point interior to both `φ_i(O)` and `φ_j(O)`.
    Overlap { maps: (usize, usize), point: Point },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OcscReport {
    pub candidate_set: ConvexBody,
    pub containment_ok: Vec<bool>,
    /// `((i, j), ok)` for every pair `i < j`.
    pub disjointness_ok: Vec<((usize, usize), bool)>,
    pub verdict: Verdict,
    pub witnesses: Vec<OcscWitness>,
    /// Absolute tolerance the verdict was verified at.
    pub tolerance: f64,
}

impl OcscReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Checks `∪ φᵢ(O) ⊂ O` and pairwise disjoint interiors of the images for
/// the candidate `O`.
pub fn check_ocsc(sys: &IfsSystem, candidate: &ConvexBody) -> Result<OcscReport> {
    check_with_tolerance(sys, candidate, EPS_GEOM * candidate.diameter())
}

fn check_with_tolerance(sys: &IfsSystem, candidate: &ConvexBody, tol: f64) -> Result<OcscReport> {
    if !candidate.is_polygon() {
        return Err(Error::DegenerateCandidate);
    }
    let images: Vec<ConvexBody> = sys
        .maps()
        .iter()
        .map(|m| convex::transform(candidate, m))
        .collect();
    let mut witnesses = Vec::new();
    let containment_ok: Vec<bool> = images
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let escaping = img
                .vertices()
                .iter()
                .copied()
                .max_by(|a, b| {
                    candidate
                        .distance_to(*a)
                        .total_cmp(&candidate.distance_to(*b))
                })
                .filter(|&v| !candidate.contains(v, tol));
            if let Some(point) = escaping {
                witnesses.push(OcscWitness::EscapingVertex { map: i, point });
                false
            } else {
                true
            }
        })
        .collect();
    let n = images.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let results: Vec<((usize, usize), bool, Option<Point>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let ok = disjoint_interiors(&images[i], &images[j]);
            let w = if ok {
                None
            } else {
                intersection(&images[i], &images[j]).map(|b| b.centroid())
            };
            ((i, j), ok, w)
        })
        .collect();
    let mut disjointness_ok = Vec::with_capacity(results.len());
    for (pair, ok, w) in results {
        if !ok {
            let point = w.unwrap_or_else(|| images[pair.0].centroid());
            witnesses.push(OcscWitness::Overlap { maps: pair, point });
        }
        disjointness_ok.push((pair, ok));
    }
    let pass = containment_ok.iter().all(|&b| b) && disjointness_ok.iter().all(|(_, b)| *b);
    Ok(OcscReport {
        candidate_set: candidate.clone(),
        containment_ok,
        disjointness_ok,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        witnesses,
        tolerance: tol,
    })
}

/// Runs [`check_ocsc`] on the interior of `K̃`, shrunk by the hull's
/// certified error. A degenerate hull yields [`Verdict::NoInterior`].
pub fn interior_condition(sys: &IfsSystem, hull: &AttractorHull) -> Result<OcscReport> {
    if !hull.body.is_polygon() {
        return Ok(OcscReport {
            candidate_set: hull.body.clone(),
            containment_ok: Vec::new(),
            disjointness_ok: Vec::new(),
            verdict: Verdict::NoInterior,
            witnesses: Vec::new(),
            tolerance: 0.0,
        });
    }
    let candidate =
        offset_inward(&hull.body, hull.error_bound()).unwrap_or_else(|| hull.body.clone());
    let tol = contact_tolerance(hull) + EPS_GEOM * hull.body.diameter();
    check_with_tolerance(sys, &candidate, tol)
}

/// The system of all `n^p` compositions of length `p`, in lexicographic
/// word order.
pub fn refine(sys: &IfsSystem, p: usize) -> Result<IfsSystem> {
    refine_capped(sys, p, DEFAULT_REFINE_CAP)
}

pub fn refine_capped(sys: &IfsSystem, p: usize, cap: usize) -> Result<IfsSystem> {
    if p == 0 {
        return Err(Error::InvalidArgument(
            "refinement order must be at least 1".into(),
        ));
    }
    let maps = (sys.len() as f64).powi(p as i32);
    if maps > cap as f64 {
        return Err(Error::RefinementTooLarge {
            order: p,
            maps,
            cap,
        });
    }
    IfsSystem::new(
        sys.words(p)
            .map(|w| sys.compose_word(&w))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Limits for [`regularize`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizeCaps {
    pub max_exponent: usize,
    pub max_maps: usize,
}

impl Default for RegularizeCaps {
    fn default() -> Self {
        Self {
            max_exponent: 8,
            max_maps: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlags {
    /// Every depth-1 component of the returned system is connected.
    pub connected: bool,
    /// No image `ψᵢ(K̃)` meets the extreme-point set `F`.
    pub vertex_avoidance: bool,
    /// `ψᵢ(K̃) ∩ F ⊄ ψⱼ(K̃) ∩ F` for `i ≠ j`.
    pub non_containment: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegularizationReport {
    pub refinement_exponent: usize,
    /// Smallest gap between distinct arcs of a disconnected `Qᵢ`.
    pub delta: Option<f64>,
    /// Shortest normal arc between consecutive arcs of a disconnected `Qᵢ`.
    pub theta_gap: Option<f64>,
    /// Smallest `p₀` with `q^{p₀}·diam < δ`.
    pub p0: Option<usize>,
    pub conditions: ConditionFlags,
    /// Depth-1 arc counts per map of the returned (or last tried) system.
    pub arcs_per_map: Vec<usize>,
    pub contact_tolerance: f64,
    pub diagnostics: Vec<String>,
}

/// Refines until every depth-1 component is connected.
///
/// Success is decided by connectedness; vertex avoidance and non-containment
/// are evaluated on the returned system and reported.
pub fn regularize(
    sys: &IfsSystem,
    hull: &AttractorHull,
    caps: RegularizeCaps,
) -> Result<(IfsSystem, RegularizationReport)> {
    let ctol = contact_tolerance(hull);
    let mut report = RegularizationReport {
        contact_tolerance: ctol,
        ..Default::default()
    };
    let comps = boundary::components_at_depth(sys, hull, 1)?;
    let counts = boundary::arcs_per_map(&comps, sys.len());
    if counts.iter().all(|&c| c <= 1) {
        report.refinement_exponent = 1;
        report.arcs_per_map = counts;
        finish_conditions(sys, hull, &mut report);
        return Ok((sys.clone(), report));
    }
    let (delta, theta) = gaps(&comps, sys.len());
    report.delta = delta;
    report.theta_gap = theta;
    let delta = delta.unwrap_or(0.0);
    if delta < 10.0 * ctol {
        report.arcs_per_map = counts;
        return Err(Error::Regularization {
            reason: format!("gap δ = {delta:e} is below 10× contact tolerance {ctol:e}"),
            report: Box::new(report),
        });
    }
    let diam = hull.body.diameter();
    let q = sys.q();
    let mut p0 = 1;
    while q.powi(p0 as i32) * diam >= delta {
        p0 += 1;
    }
    report.p0 = Some(p0);
    if let Some(t) = theta {
        report.diagnostics.push(format!(
            "connectedness depth hint 2π/θ = {:.3}",
            std::f64::consts::TAU / t
        ));
    }
    let mut p = p0.max(2);
    loop {
        if p > caps.max_exponent || (sys.len() as f64).powi(p as i32) > caps.max_maps as f64 {
            return Err(Error::Regularization {
                reason: format!("no connected refinement up to exponent {}", p - 1),
                report: Box::new(report),
            });
        }
        let comps = boundary::components_at_depth(sys, hull, p)?;
        let refined = refine_capped(sys, p, caps.max_maps)?;
        let counts = arcs_by_word(&comps, sys, p);
        report.arcs_per_map = counts.clone();
        if counts.iter().all(|&c| c <= 1) {
            report.refinement_exponent = p;
            finish_conditions(&refined, hull, &mut report);
            return Ok((refined, report));
        }
        p += 1;
    }
}

/// Arc counts for every word of length `p`, in the refined system's order.
fn arcs_by_word(comps: &[BoundaryComponent], sys: &IfsSystem, p: usize) -> Vec<usize> {
    let n = sys.len();
    let index = |w: &AddressWord| w.indices().iter().fold(0usize, |acc, &i| acc * n + i);
    let mut counts = vec![0; n.pow(p as u32)];
    for c in comps.iter().filter(|c| c.address.len() == p) {
        counts[index(&c.address)] += 1;
    }
    counts
}

/// δ and θ over all disconnected `Qᵢ`.
fn gaps(comps: &[BoundaryComponent], n: usize) -> (Option<f64>, Option<f64>) {
    let mut delta: Option<f64> = None;
    let mut theta: Option<f64> = None;
    for i in 0..n {
        let arcs: Vec<&BoundaryComponent> = comps
            .iter()
            .filter(|c| c.address.indices() == [i])
            .collect();
        if arcs.len() < 2 {
            continue;
        }
        for a in 0..arcs.len() {
            for b in a + 1..arcs.len() {
                let d = arc_distance(arcs[a], arcs[b]);
                delta = Some(delta.map_or(d, |x| x.min(d)));
            }
            // normal arc from the end of this arc to the start of the next
            let cur = arcs[a];
            let next = arcs[(a + 1) % arcs.len()];
            let end_normal = cur.normal_arc.0 + cur.normal_arc.1;
            let g = (next.normal_arc.0 - end_normal).rem_euclid(std::f64::consts::TAU);
            theta = Some(theta.map_or(g, |x| x.min(g)));
        }
    }
    (delta, theta)
}

fn arc_distance(a: &BoundaryComponent, b: &BoundaryComponent) -> f64 {
    // arcs are polylines through their endpoints; sample the chords
    let pa = [a.start_point, a.end_point];
    let pb = [b.start_point, b.end_point];
    let seg_a = convex::convex_hull(&pa).expect("nonempty");
    let seg_b = convex::convex_hull(&pb).expect("nonempty");
    pa.iter()
        .map(|&x| seg_b.distance_to(x))
        .chain(pb.iter().map(|&x| seg_a.distance_to(x)))
        .fold(f64::INFINITY, f64::min)
}

/// Vertex avoidance and non-containment, with `F` approximated by hull vertices that are
/// not interior to a side.
fn finish_conditions(sys: &IfsSystem, hull: &AttractorHull, report: &mut RegularizationReport) {
    report.conditions.connected = report.arcs_per_map.iter().all(|&c| c <= 1);
    let tol = contact_tolerance(hull);
    let f: Vec<Point> = extreme_vertices(&hull.body);
    let member: Vec<Vec<bool>> = sys
        .maps()
        .iter()
        .map(|m| {
            f.iter()
                .map(|&x| hull.body.distance_to(m.apply_inverse(x)) <= tol / m.ratio())
                .collect()
        })
        .collect();
    report.conditions.vertex_avoidance = member.iter().all(|row| row.iter().all(|&b| !b));
    if !report.conditions.vertex_avoidance && !f.is_empty() {
        report
            .diagnostics
            .push("vertex avoidance fails: every extreme point lies in some image ψᵢ(K̃)".into());
    }
    let n = sys.len();
    let mut non_containment = true;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let subset = (0..f.len()).all(|k| !member[i][k] || member[j][k]);
            if subset {
                non_containment = false;
            }
        }
    }
    report.conditions.non_containment = non_containment;
}

fn extreme_vertices(body: &ConvexBody) -> Vec<Point> {
    let v = body.vertices();
    if v.len() < 3 {
        return v.to_vec();
    }
    let n = v.len();
    (0..n)
        .filter(|&k| {
            let a = v[(k + n - 1) % n] - v[k];
            let b = v[(k + 1) % n] - v[k];
            let turn = std::f64::consts::PI - a.cross(b).abs().atan2(a.dot(b));
            turn > crate::EPS_ANGLE
        })
        .map(|k| v[k])
        .collect()
}
