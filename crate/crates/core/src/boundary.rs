//! Structure of the hull boundary `∂K̃`: boundary components
//! `Q_w = K̃_w ∩ ∂K̃`, sides and their factorization into images of sides of
//! order 1, corner points with periodicity witnesses, and a dimension
//! estimate for the set of extreme points.
//!
//! Boundary positions are arc-length coordinates along the hull polygon,
//! starting at its first vertex. A segment hull is traversed as a 2-gon.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{convex_hull, ConvexBody, SupportTable};
use crate::hutchinson::AttractorHull;
use crate::point::{angle_diff, normalize_radians};
use crate::similitude::{AddressWord, Angle, IfsSystem, Similitude};
use crate::{Error, Point, Result, EPS_ANGLE, EPS_GEOM};

/// Default bound on corner periodicity words.
pub const DEFAULT_MAX_PERIOD: usize = 12;

/// One connected arc of `Q_w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub address: AddressWord,
    /// Arc-length position of the arc start.
    pub start: f64,
    pub length: f64,
    pub start_point: Point,
    pub end_point: Point,
    /// First and last hull vertex inside the arc, cyclically.
    pub vertex_range: Option<(usize, usize)>,
    pub has_interior: bool,
    /// Outward normal angle at the arc start and the counterclockwise span
    /// of normals across the arc.
    pub normal_arc: (f64, f64),
    pub diameter: f64,
    /// Whether the arc is the whole boundary.
    pub full: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SideOrigin {
    /// The order-1 side with index `index`.
    OrderOne { index: usize },
    /// `φ_w` applied to the order-1 side with index `base`.
    Image { base: usize },
    /// No factorization found within the word bound.
    Unresolved,
}

/// A maximal straight piece of the hull boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub start: Point,
    pub end: Point,
    /// Direction of `end − start`, reduced mod π.
    pub direction: f64,
    /// Rotation of the word relative to the base side, reduced mod π, as
    /// an exact label `π·num/den`; `None` for irrational rotations.
    pub rotation: Option<String>,
    pub length: f64,
    pub address: AddressWord,
    pub origin: SideOrigin,
}

impl Side {
    /// Index of the order-1 side this one is an image of.
    pub fn base_side(&self) -> Option<usize> {
        match self.origin {
            SideOrigin::OrderOne { index } => Some(index),
            SideOrigin::Image { base } => Some(base),
            SideOrigin::Unresolved => None,
        }
    }

    pub fn direction_angle(&self) -> Angle {
        Angle::radians(self.direction).unwrap_or(Angle::ZERO)
    }
}

/// A periodicity witness: the corner equals `φ_prefix(z)` where `z` is the
/// fixed point of `φ_period`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerWitness {
    pub prefix: AddressWord,
    pub period: AddressWord,
    pub periodic_point: Point,
    /// Distance from the corner to `φ_prefix(z)`.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corner {
    pub point: Point,
    pub vertex: usize,
    /// Exterior angle (turn of the outward normal) at the corner.
    pub turn: f64,
    /// `π − turn`.
    pub interior_angle: f64,
    /// `None` when a valid cycle exists but needs words longer than the bound.
    pub witness: Option<CornerWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub p: usize,
    pub component_count: usize,
    pub max_diameter: f64,
    /// `ln N_p / ln(1/d_p)`; absent when `d_p ≥ 1` or `N_p = 0`.
    pub exponent: Option<f64>,
    /// `(n+p−1)! / ((p−1)!·(n−1)!)`.
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub rows: Vec<DimensionRow>,
}

/// Tolerance for deciding contact with `∂K̃`: `EPS_GEOM·diam` plus the
/// hull's certified error.
pub fn contact_tolerance(hull: &AttractorHull) -> f64 {
    EPS_GEOM * hull.body.diameter() + hull.error_bound()
}

/// Arc-length parametrization of the hull boundary.
struct Boundary {
    verts: Vec<Point>,
    cum: Vec<f64>,
    total: f64,
    normals: Vec<f64>,
    table: SupportTable,
}

impl Boundary {
    fn new(body: &ConvexBody) -> Self {
        let verts = body.vertices().to_vec();
        let mut cum = vec![0.0];
        for (a, b) in body.edges() {
            cum.push(cum.last().unwrap() + a.dist(b));
        }
        let total = *cum.last().unwrap();
        Self {
            verts,
            cum,
            total,
            normals: body.edge_normal_angles(),
            table: SupportTable::new(body),
        }
    }

    fn n_edges(&self) -> usize {
        self.normals.len()
    }

    fn wrap(&self, s: f64) -> f64 {
        if self.total > 0.0 {
            s.rem_euclid(self.total)
        } else {
            0.0
        }
    }

    fn edge_at(&self, s: f64) -> usize {
        let s = self.wrap(s);
        let k = self.cum.partition_point(|&c| c <= s);
        k.saturating_sub(1).min(self.n_edges().saturating_sub(1))
    }

    fn point_at(&self, s: f64) -> Point {
        if self.n_edges() == 0 {
            return self.verts[0];
        }
        let s = self.wrap(s);
        let j = self.edge_at(s);
        let a = self.verts[j];
        let b = self.verts[(j + 1) % self.verts.len()];
        let len = self.cum[j + 1] - self.cum[j];
        if len == 0.0 {
            a
        } else {
            a.lerp(b, ((s - self.cum[j]) / len).clamp(0.0, 1.0))
        }
    }

    /// Relative position of `s` measured counterclockwise from `from`.
    fn rel(&self, from: f64, s: f64) -> f64 {
        self.wrap(s - from)
    }
}

/// Arc as (start, length) in arc-length coordinates.
#[derive(Clone, Copy, Debug)]
struct Arc {
    start: f64,
    len: f64,
}

/// Arcs of every word at one depth.
type Layer = Vec<(AddressWord, Vec<Arc>)>;

struct Ctx<'a> {
    sys: &'a IfsSystem,
    body: &'a ConvexBody,
    bd: Boundary,
    ctol: f64,
    diam: f64,
    interior_tol: f64,
}

impl<'a> Ctx<'a> {
    fn new(sys: &'a IfsSystem, hull: &'a AttractorHull) -> Self {
        let diam = hull.body.diameter();
        let ctol = contact_tolerance(hull).max(f64::MIN_POSITIVE);
        Self {
            sys,
            body: &hull.body,
            bd: Boundary::new(&hull.body),
            ctol,
            diam,
            interior_tol: 1e-6 * diam + 100.0 * ctol,
        }
    }

    /// Pieces of the boundary within contact tolerance of `f(hull)`, one
    /// interval per touched edge.
    fn contact_pieces(&self, f: &Similitude) -> Vec<Arc> {
        let bd = &self.bd;
        let m = bd.n_edges();
        if m == 0 {
            return vec![Arc {
                start: 0.0,
                len: 0.0,
            }];
        }
        let nv = bd.verts.len();
        let alpha = f.angle().to_radians();
        let b = f.offset();
        let mut out = Vec::new();
        for j in 0..m {
            let nu = bd.normals[j];
            let n = Point::unit(nu);
            let v0 = bd.verts[j];
            let h = v0.dot(n);
            let level = h - self.ctol;
            let h_img = f.ratio() * bd.table.support(nu - alpha) + b.dot(n);
            if h_img < level {
                continue;
            }
            let len = bd.cum[j + 1] - bd.cum[j];
            let t = (bd.verts[(j + 1) % nv] - v0) * (1.0 / len.max(f64::MIN_POSITIVE));
            let k0 = bd.table.extreme_index(nu - alpha);
            let img = |k: usize| f.apply(bd.verts[k % nv]);
            let mut lo = (img(k0) - v0).dot(t);
            let mut hi = lo;
            for dir in [1usize, nv - 1] {
                let mut prev = img(k0);
                for step in 1..nv {
                    let y = img(k0 + dir * step);
                    let (fp, fy) = (prev.dot(n) - level, y.dot(n) - level);
                    let x = if fy >= 0.0 {
                        y
                    } else {
                        let s = fp / (fp - fy);
                        prev.lerp(y, s)
                    };
                    let proj = (x - v0).dot(t);
                    lo = lo.min(proj);
                    hi = hi.max(proj);
                    if fy < 0.0 {
                        break;
                    }
                    prev = y;
                }
            }
            let lo = lo.max(0.0);
            let hi = hi.min(len);
            if hi + self.ctol >= lo {
                out.push(Arc {
                    start: bd.cum[j] + lo.min(hi),
                    len: (hi - lo).max(0.0),
                });
            }
        }
        out
    }

    /// Merges pieces into maximal arcs, joining gaps up to `gap`.
    fn merge(&self, mut pieces: Vec<Arc>) -> Vec<Arc> {
        let total = self.bd.total;
        if pieces.is_empty() {
            return pieces;
        }
        if total == 0.0 {
            return vec![Arc {
                start: 0.0,
                len: 0.0,
            }];
        }
        let gap = 2.0 * self.ctol;
        for p in &mut pieces {
            p.start = self.bd.wrap(p.start);
        }
        pieces.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut arcs: Vec<Arc> = Vec::new();
        for p in pieces {
            if let Some(cur) = arcs.last_mut() {
                let end = cur.start + cur.len;
                if p.start <= end + gap {
                    cur.len = cur.len.max(p.start + p.len - cur.start);
                    continue;
                }
            }
            arcs.push(p);
        }
        if arcs.len() > 1 {
            let last = *arcs.last().unwrap();
            let first = arcs[0];
            if last.start + last.len + gap >= total + first.start {
                let merged_len = (first.start + first.len + total - last.start).max(last.len);
                arcs.pop();
                arcs[0] = Arc {
                    start: last.start,
                    len: merged_len,
                };
            }
        }
        for a in &mut arcs {
            if a.len >= total - gap {
                *a = Arc {
                    start: 0.0,
                    len: total,
                };
            }
        }
        arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
        arcs
    }

    /// Restricts pieces to the (slightly widened) parent arcs.
    fn clip(&self, pieces: Vec<Arc>, parents: &[Arc]) -> Vec<Arc> {
        let total = self.bd.total;
        if total == 0.0 {
            return pieces;
        }
        let tol = 2.0 * self.ctol;
        let mut out = Vec::new();
        for p in &pieces {
            for par in parents {
                let r = self.bd.rel(par.start, p.start);
                for s in [r, r - total] {
                    let lo = s.max(-tol);
                    let hi = (s + p.len).min(par.len + tol);
                    if hi >= lo {
                        out.push(Arc {
                            start: par.start + lo.max(0.0),
                            len: (hi.min(par.len) - lo.max(0.0)).max(0.0),
                        });
                    }
                }
            }
        }
        out
    }

    fn arcs_for(&self, w: &AddressWord, parents: Option<&[Arc]>) -> Result<Vec<Arc>> {
        let f = self.sys.compose_word(w)?;
        let pieces = self.contact_pieces(&f);
        let pieces = match parents {
            Some(par) => self.clip(pieces, par),
            None => pieces,
        };
        Ok(self.merge(pieces))
    }

    fn component(&self, address: AddressWord, arc: Arc) -> BoundaryComponent {
        let bd = &self.bd;
        let full = bd.total > 0.0 && arc.len >= bd.total;
        let end = arc.start + arc.len;
        let start_point = bd.point_at(arc.start);
        let end_point = bd.point_at(end);
        let mut inside: Vec<usize> = Vec::new();
        let mut pts = vec![start_point, end_point];
        for (k, &v) in bd.verts.iter().enumerate() {
            if full || bd.rel(arc.start, bd.cum[k]) <= arc.len {
                inside.push(k);
                pts.push(v);
            }
        }
        let vertex_range = if inside.is_empty() {
            None
        } else {
            // order by position along the arc
            inside.sort_by(|&a, &b| {
                bd.rel(arc.start, bd.cum[a])
                    .total_cmp(&bd.rel(arc.start, bd.cum[b]))
            });
            Some((inside[0], *inside.last().unwrap()))
        };
        let normal_arc = if bd.n_edges() == 0 {
            (0.0, std::f64::consts::TAU)
        } else if full {
            (bd.normals[0], std::f64::consts::TAU)
        } else {
            let eps = (arc.len * 1e-9).min(1e-15 * bd.total.max(1.0));
            let a = bd.normals[bd.edge_at(arc.start + eps)];
            let b = bd.normals[bd.edge_at((end - eps).max(arc.start))];
            (a, normalize_radians(b - a))
        };
        let diameter = convex_hull(&pts).map(|h| h.diameter()).unwrap_or(0.0);
        BoundaryComponent {
            address,
            start: arc.start,
            length: arc.len,
            start_point,
            end_point,
            vertex_range,
            has_interior: arc.len > self.interior_tol,
            normal_arc,
            diameter,
            full,
        }
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        let scale = self.sys.q().powi(depth as i32) * self.diam;
        if self.diam > 0.0 && scale < self.ctol {
            return Err(Error::ResolutionExhausted {
                depth,
                scale,
                tolerance: self.ctol,
            });
        }
        Ok(())
    }

    /// Components layer by layer up to `depth`; a word is expanded only when
    /// its own `Q_w` is nonempty.
    fn layers(&self, depth: usize) -> Result<Vec<Layer>> {
        self.check_depth(depth)?;
        let n = self.sys.len();
        let mut layers: Vec<Vec<(AddressWord, Vec<Arc>)>> = Vec::new();
        let mut frontier: Vec<(AddressWord, Option<Vec<Arc>>)> = vec![(AddressWord::empty(), None)];
        for _ in 0..depth {
            let next: Result<Vec<Layer>> = frontier
                .par_iter()
                .map(|(w, parent)| {
                    (0..n)
                        .map(|i| {
                            let child = w.push(i);
                            let arcs = self.arcs_for(&child, parent.as_deref())?;
                            Ok((child, arcs))
                        })
                        .collect()
                })
                .collect();
            let layer: Vec<(AddressWord, Vec<Arc>)> = next?
                .into_iter()
                .flatten()
                .filter(|(_, arcs)| !arcs.is_empty())
                .collect();
            frontier = layer
                .iter()
                .map(|(w, arcs)| (w.clone(), Some(arcs.clone())))
                .collect();
            layers.push(layer);
        }
        Ok(layers)
    }

    fn components_at(&self, p: usize) -> Result<Vec<BoundaryComponent>> {
        if p == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let layers = self.layers(p)?;
        Ok(self.to_components(&layers[p - 1]))
    }

    fn to_components(&self, layer: &[(AddressWord, Vec<Arc>)]) -> Vec<BoundaryComponent> {
        layer
            .iter()
            .flat_map(|(w, arcs)| arcs.iter().map(move |&a| self.component(w.clone(), a)))
            .collect()
    }

    /// Maximal edge chains of constant direction, as (first edge, edge count).
    fn chains(&self) -> Vec<(usize, usize)> {
        let m = self.bd.n_edges();
        if m == 0 {
            return Vec::new();
        }
        if m == 2 {
            // segment hull: one side
            return vec![(0, 1)];
        }
        let nu = &self.bd.normals;
        let breaks: Vec<usize> = (0..m)
            .filter(|&j| angle_diff(nu[(j + m - 1) % m], nu[j]).abs() > EPS_ANGLE)
            .collect();
        if breaks.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for &b in &breaks {
            let mut len = 1;
            while len < m && angle_diff(nu[b], nu[(b + len) % m]).abs() <= EPS_ANGLE {
                len += 1;
            }
            out.push((b, len));
        }
        out
    }

    fn chain_side(&self, (first, count): (usize, usize)) -> (Point, Point, f64) {
        let nv = self.bd.verts.len();
        let a = self.bd.verts[first];
        let b = self.bd.verts[(first + count) % nv];
        (a, b, a.dist(b))
    }

    /// Chain-start positions (arc length); a component containing one of
    /// them in its interior is not inside a single side.
    fn break_positions(&self) -> Vec<f64> {
        self.chains().iter().map(|&(b, _)| self.bd.cum[b]).collect()
    }

    fn in_image(&self, x: Point, i: usize) -> bool {
        let m = self.sys.map(i);
        self.body.distance_to(m.apply_inverse(x)) <= self.ctol / m.ratio()
    }
}

/// All components `Q_w` with `1 ≤ |w| ≤ depth`, ordered by word length, then
/// address, then position.
pub fn boundary_components(
    sys: &IfsSystem,
    hull: &AttractorHull,
    depth: usize,
) -> Result<Vec<BoundaryComponent>> {
    let ctx = Ctx::new(sys, hull);
    let layers = ctx.layers(depth)?;
    Ok(layers.iter().flat_map(|l| ctx.to_components(l)).collect())
}

/// Components `Q_w` with `|w| = p` only.
pub fn components_at_depth(
    sys: &IfsSystem,
    hull: &AttractorHull,
    p: usize,
) -> Result<Vec<BoundaryComponent>> {
    Ctx::new(sys, hull).components_at(p)
}

fn hull_sides(ctx: &Ctx) -> Vec<(Point, Point, f64)> {
    ctx.chains()
        .into_iter()
        .map(|c| ctx.chain_side(c))
        .collect()
}

fn order_one_from(ctx: &Ctx, sides: &[(Point, Point, f64)]) -> Vec<Side> {
    let n = ctx.sys.len();
    let floor = 1e-6 * ctx.diam + 1000.0 * ctx.ctol;
    sides
        .iter()
        .filter(|(_, _, len)| *len > floor)
        .filter(|(a, b, _)| {
            let in_a: Vec<bool> = (0..n).map(|i| ctx.in_image(*a, i)).collect();
            let in_b: Vec<bool> = (0..n).map(|i| ctx.in_image(*b, i)).collect();
            let shared = (0..n).any(|i| in_a[i] && in_b[i]);
            !shared && in_a.iter().any(|&x| x) && in_b.iter().any(|&x| x)
        })
        .enumerate()
        .map(|(index, &(a, b, len))| Side {
            start: a,
            end: b,
            direction: direction_mod_pi(a, b),
            rotation: Angle::ZERO.exact_label(),
            length: len,
            address: AddressWord::empty(),
            origin: SideOrigin::OrderOne { index },
        })
        .collect()
}

fn direction_mod_pi(a: Point, b: Point) -> f64 {
    let d = (b - a).angle();
    let r = d.rem_euclid(std::f64::consts::PI);
    if std::f64::consts::PI - r < 1e-12 {
        0.0
    } else {
        r
    }
}

/// Sides of order 1: hull sides whose endpoints lie in components `Q_i`
/// but never both in the same one.
pub fn sides_order_one(sys: &IfsSystem, hull: &AttractorHull) -> Vec<Side> {
    let ctx = Ctx::new(sys, hull);
    order_one_from(&ctx, &hull_sides(&ctx))
}

/// All hull sides of length at least `min_length`, each factored as
/// `φ_w(base)` for the shortest word `w` (at most `max_word` letters) and an
/// order-1 side `base`.
pub fn enumerate_sides(
    sys: &IfsSystem,
    hull: &AttractorHull,
    max_word: usize,
    min_length: f64,
) -> Result<Vec<Side>> {
    if min_length.is_nan() || min_length <= 0.0 {
        return Err(Error::InvalidArgument("min_length must be positive".into()));
    }
    let ctx = Ctx::new(sys, hull);
    let all = hull_sides(&ctx);
    let bases = order_one_from(&ctx, &all);
    let slack = 4.0 * ctx.ctol + 1e-9 * ctx.diam;
    let match_tol = 1e-7 * ctx.diam + 10.0 * ctx.ctol;
    let mut sides: Vec<Side> = all
        .iter()
        .filter(|(_, _, len)| *len >= min_length - slack)
        .map(|&(a, b, len)| Side {
            start: a,
            end: b,
            direction: direction_mod_pi(a, b),
            rotation: None,
            length: len,
            address: AddressWord::empty(),
            origin: SideOrigin::Unresolved,
        })
        .collect();
    if sides.is_empty() {
        return Ok(sides);
    }
    let find = |a: Point, b: Point| -> Option<usize> {
        sides
            .iter()
            .position(|s| s.start.dist(a) <= match_tol && s.end.dist(b) <= match_tol)
    };
    let mut assigned: Vec<Option<(AddressWord, usize, Angle)>> = vec![None; sides.len()];
    for (bi, base) in bases.iter().enumerate() {
        if let Some(k) = find(base.start, base.end) {
            if assigned[k].is_none() {
                assigned[k] = Some((AddressWord::empty(), bi, Angle::ZERO));
            }
        }
    }
    let max_base = bases.iter().map(|b| b.length).fold(0.0, f64::max);
    let mut frontier: Vec<(AddressWord, Similitude)> = vec![];
    for i in 0..sys.len() {
        frontier.push((AddressWord::new(vec![i]), *sys.map(i)));
    }
    let mut level = 1;
    while !frontier.is_empty() && level <= max_word && assigned.iter().any(Option::is_none) {
        let mut next = Vec::new();
        for (w, f) in &frontier {
            if f.ratio() * max_base < min_length - slack {
                continue;
            }
            for (bi, base) in bases.iter().enumerate() {
                if f.ratio() * base.length < min_length - slack {
                    continue;
                }
                if let Some(k) = find(f.apply(base.start), f.apply(base.end)) {
                    if assigned[k].is_none() {
                        assigned[k] = Some((w.clone(), bi, f.angle()));
                    }
                }
            }
            for i in 0..sys.len() {
                next.push((w.push(i), f.compose(sys.map(i))));
            }
        }
        frontier = next;
        level += 1;
    }
    for (s, a) in sides.iter_mut().zip(assigned) {
        if let Some((w, bi, rot)) = a {
            s.origin = if w.is_empty() {
                SideOrigin::OrderOne { index: bi }
            } else {
                SideOrigin::Image { base: bi }
            };
            s.rotation = rot.mod_pi().exact_label();
            s.address = w;
        }
    }
    Ok(sides)
}

struct Candidate {
    vertex: usize,
    point: Point,
    turn: f64,
}

fn corner_candidates(ctx: &Ctx, threshold: f64) -> Vec<Candidate> {
    let v = &ctx.bd.verts;
    match v.len() {
        1 => return Vec::new(),
        2 => {
            return (0..2)
                .map(|k| Candidate {
                    vertex: k,
                    point: v[k],
                    turn: std::f64::consts::PI,
                })
                .filter(|c| c.turn >= threshold)
                .collect()
        }
        _ => {}
    }
    let m = v.len();
    let tiny = 1e-6 * ctx.diam;
    let len = |j: usize| ctx.bd.cum[j + 1] - ctx.bd.cum[j];
    let Some(anchor) = (0..m).find(|&j| len(j) >= tiny) else {
        return Vec::new();
    };
    // walk significant edges; vertices between consecutive ones form a cluster
    let mut out = Vec::new();
    let mut prev = anchor;
    for step in 1..=m {
        let j = (anchor + step) % m;
        if len(j) < tiny {
            continue;
        }
        let turn = normalize_radians(ctx.bd.normals[j] - ctx.bd.normals[prev]);
        let turn = if turn > std::f64::consts::PI * 1.999 {
            0.0
        } else {
            turn
        };
        if turn >= threshold {
            // representative: vertex with the largest local turn in the cluster
            let mut best = ((prev + 1) % m, -1.0);
            let mut k = (prev + 1) % m;
            loop {
                let t = normalize_radians(ctx.bd.normals[k] - ctx.bd.normals[(k + m - 1) % m]);
                if t > best.1 {
                    best = (k, t);
                }
                if k == j {
                    break;
                }
                k = (k + 1) % m;
            }
            out.push(Candidate {
                vertex: best.0,
                point: v[best.0],
                turn,
            });
        }
        prev = j;
    }
    out
}

/// Corners: hull vertices whose exterior angle is at least `angle_threshold`
/// and which are periodic under the system. Candidates that reach no cycle
/// of zero total rotation are resolution artifacts and are dropped.
pub fn detect_corners(
    sys: &IfsSystem,
    hull: &AttractorHull,
    angle_threshold: f64,
    max_period: usize,
) -> Vec<Corner> {
    let ctx = Ctx::new(sys, hull);
    let cands = corner_candidates(&ctx, angle_threshold);
    let match_tol = 1e-6 * ctx.diam + 10.0 * ctx.ctol;
    let turn_tol = 1e-4;
    // pred[c] = (map i, candidate c') with c ≈ φ_i(c') and turn(c') ≥ turn(c)
    let pred: Vec<Vec<(usize, usize)>> = cands
        .iter()
        .map(|c| {
            let mut e = Vec::new();
            for i in 0..sys.len() {
                let m = sys.map(i);
                let pre = m.apply_inverse(c.point);
                for (k, c2) in cands.iter().enumerate() {
                    if c2.point.dist(pre) * m.ratio() <= match_tol && c2.turn >= c.turn - turn_tol {
                        e.push((i, k));
                    }
                }
            }
            e
        })
        .collect();
    let limit = 4 * max_period.max(1);
    let diam = ctx.diam.max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    for (ci, c) in cands.iter().enumerate() {
        let Some((path_maps, path_nodes, cycle_at)) = find_cycle(sys, &pred, ci, limit) else {
            continue;
        };
        let prefix = AddressWord::new(path_maps[..cycle_at].to_vec());
        let period = AddressWord::new(path_maps[cycle_at..].to_vec());
        debug_assert_eq!(path_nodes.len(), path_maps.len() + 1);
        let witness = if prefix.len() + period.len() <= max_period {
            let f = sys.compose_word(&period).expect("nonempty period");
            let z = f.fixed_point();
            let image = if prefix.is_empty() {
                z
            } else {
                sys.compose_word(&prefix).expect("nonempty").apply(z)
            };
            Some(CornerWitness {
                prefix,
                period,
                periodic_point: z,
                distance: image.dist(c.point) / diam * diam,
            })
        } else {
            None
        };
        out.push(Corner {
            point: c.point,
            vertex: c.vertex,
            turn: c.turn,
            interior_angle: std::f64::consts::PI - c.turn,
            witness,
        });
    }
    out
}

/// Shortest walk from `start` along predecessor edges that closes a cycle of
/// zero total rotation. Prefers cycles through `start`. Returns the map
/// labels, the visited nodes and the index where the cycle begins.
fn find_cycle(
    sys: &IfsSystem,
    pred: &[Vec<(usize, usize)>],
    start: usize,
    limit: usize,
) -> Option<(Vec<usize>, Vec<usize>, usize)> {
    let mut best: Option<(Vec<usize>, Vec<usize>, usize)> = None;
    let mut budget = 200_000usize;
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![], vec![start])];
    // breadth-first so the first hit is shortest
    let mut queue = std::collections::VecDeque::from(std::mem::take(&mut stack));
    while let Some((maps, nodes)) = queue.pop_front() {
        if budget == 0 {
            break;
        }
        budget -= 1;
        let here = *nodes.last().unwrap();
        for &(i, k) in &pred[here] {
            let mut m2 = maps.clone();
            m2.push(i);
            let mut n2 = nodes.clone();
            n2.push(k);
            if let Some(pos) = nodes.iter().position(|&x| x == k) {
                let cycle: Vec<usize> = m2[pos..].to_vec();
                if zero_rotation(sys, &cycle) {
                    let hit = (m2, n2, pos);
                    if pos == 0 {
                        return Some(hit);
                    }
                    if best.is_none() {
                        best = Some(hit);
                    }
                }
                continue;
            }
            if m2.len() < limit {
                queue.push_back((m2, n2));
            }
        }
    }
    best
}

fn zero_rotation(sys: &IfsSystem, word: &[usize]) -> bool {
    let mut a = Angle::ZERO;
    for &i in word {
        a = a.add(&sys.map(i).angle());
    }
    a.is_full_turn(1e-9)
}

/// Per-depth component counts and diameters for the extreme-point set.
///
/// Row `p` counts components `Q_w` (`|w| = p`) with nonempty interior that
/// are not contained in a single side, takes their largest diameter `d_p`
/// and reports `s_p = ln N_p / ln(1/d_p)`.
pub fn vertex_dimension_estimate(
    sys: &IfsSystem,
    hull: &AttractorHull,
    max_depth: usize,
) -> Result<DimensionEstimate> {
    let ctx = Ctx::new(sys, hull);
    let layers = ctx.layers(max_depth)?;
    let breaks = ctx.break_positions();
    let n = sys.len();
    let mut rows = Vec::with_capacity(max_depth);
    for (idx, layer) in layers.iter().enumerate() {
        let p = idx + 1;
        let comps = ctx.to_components(layer);
        let edge_tol = ctx.interior_tol;
        let kept: Vec<&BoundaryComponent> = comps
            .iter()
            .filter(|c| c.has_interior)
            .filter(|c| {
                c.full
                    || breaks.iter().any(|&b| {
                        let r = ctx.bd.rel(c.start, b);
                        r > edge_tol && r < c.length - edge_tol
                    })
            })
            .collect();
        let count = kept.len();
        let dmax = kept.iter().map(|c| c.diameter).fold(0.0, f64::max);
        let exponent = (count > 0 && dmax > 0.0 && dmax < 1.0)
            .then(|| (count as f64).ln() / (1.0 / dmax).ln());
        let bound = component_bound(n, p);
        rows.push(DimensionRow {
            p,
            component_count: count,
            max_diameter: dmax,
            exponent,
            bound,
            within_bound: count as f64 <= bound,
        });
    }
    Ok(DimensionEstimate { rows })
}

/// `(n+p−1)! / ((p−1)!·(n−1)!)`.
pub fn component_bound(n: usize, p: usize) -> f64 {
    let mut num = 1.0;
    for k in p..=(n + p - 1) {
        num *= k as f64;
    }
    let mut den = 1.0;
    for k in 1..n {
        den *= k as f64;
    }
    num / den
}

/// Number of connected arcs of each `Q_i` at depth 1, indexed by map.
pub fn arcs_per_map(comps: &[BoundaryComponent], n: usize) -> Vec<usize> {
    let mut counts = vec![0; n];
    for c in comps.iter().filter(|c| c.address.len() == 1) {
        counts[c.address.indices()[0]] += 1;
    }
    counts
}

/// Distinct values up to `tol`, in ascending order.
pub fn distinct_directions(sides: &[Side], tol: f64) -> Vec<f64> {
    let mut d: Vec<f64> = sides.iter().map(|s| s.direction).collect();
    d.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in d {
        if out.last().is_none_or(|&y| x - y > tol) {
            out.push(x);
        }
    }
    if out.len() > 1 && (out[0] + std::f64::consts::PI - out[out.len() - 1]) <= tol {
        out.pop();
    }
    out
}

/// Addresses appearing in `comps`, deduplicated.
pub fn addresses(comps: &[BoundaryComponent]) -> HashSet<AddressWord> {
    comps.iter().map(|c| c.address.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::convex_hull;
    use crate::hutchinson::attractor_hull;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
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

    fn tri_hull() -> AttractorHull {
        AttractorHull::exact(convex_hull(&[p(0., 0.), p(1., 0.), p(0., 1.)]).unwrap())
    }

    fn example1(a: Angle) -> IfsSystem {
        IfsSystem::new(vec![
            Similitude::from_offset(1.0 / 3.0, a, p(-1.0, 0.0)).unwrap(),
            Similitude::from_offset(1.0 / 3.0, a, p(1.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn sierpinski_depth_one() {
        let comps = boundary_components(&sierpinski(), &tri_hull(), 1).unwrap();
        assert_eq!(comps.len(), 3);
        let h = 2f64.sqrt() / 2.0;
        let expect = [(0usize, 1.0), (1, 0.5 + h), (2, 0.5 + h)];
        for (c, (i, len)) in comps.iter().zip(expect) {
            assert_eq!(c.address.indices(), &[i]);
            assert!((c.length - len).abs() < 1e-9, "{c:?}");
            assert!(c.has_interior);
        }
        // Q₁ runs from the left-edge midpoint through the origin to (1/2, 0)
        assert!(comps[0].start_point.dist(p(0.0, 0.5)) < 1e-9);
        assert!(comps[0].end_point.dist(p(0.5, 0.0)) < 1e-9);
    }

    #[test]
    fn single_map_point_hull() {
        let sys = IfsSystem::new(vec![
            Similitude::from_center(0.5, Angle::ZERO, p(1., 1.)).unwrap()
        ])
        .unwrap();
        let hull = attractor_hull(&sys, 1e-9).unwrap();
        let comps = boundary_components(&sys, &hull, 1).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(sides_order_one(&sys, &hull).is_empty());
    }

    #[test]
    fn example1_hexagon_two_components() {
        let sys = example1(Angle::pi_fraction(1, 3).unwrap());
        let hull = attractor_hull(&sys, 1e-10).unwrap();
        let comps = components_at_depth(&sys, &hull, 1).unwrap();
        assert_eq!(comps.len(), 2);
        let sides = sides_order_one(&sys, &hull);
        assert!(!sides.is_empty() && sides.len() <= 2);
    }

    #[test]
    fn sierpinski_sides_and_corners() {
        let sides = sides_order_one(&sierpinski(), &tri_hull());
        assert_eq!(sides.len(), 3);
        let corners = detect_corners(&sierpinski(), &tri_hull(), 0.1, DEFAULT_MAX_PERIOD);
        assert_eq!(corners.len(), 3);
        for c in &corners {
            let w = c.witness.as_ref().unwrap();
            assert!(w.prefix.is_empty());
            assert_eq!(w.period.len(), 1);
            assert!(w.distance < 1e-12);
        }
    }

    #[test]
    fn example1_side_ladder() {
        let alpha = 1.0;
        let sys = example1(Angle::radians(alpha).unwrap());
        let hull = attractor_hull(&sys, 1e-9).unwrap();
        let min = 2.0 / 3f64.powi(5);
        let sides = enumerate_sides(&sys, &hull, 8, min).unwrap();
        assert_eq!(sides.len(), 12, "{sides:#?}");
        for k in 1..=6 {
            let len = 2.0 / 3f64.powi(k - 1);
            let dir = ((k - 1) as f64 * alpha).rem_euclid(std::f64::consts::PI);
            let hits: Vec<&Side> = sides
                .iter()
                .filter(|s| (s.length - len).abs() < 1e-6)
                .collect();
            assert_eq!(hits.len(), 2, "k={k}");
            for s in hits {
                assert!(
                    angle_diff(s.direction * 2.0, dir * 2.0).abs() < 2e-6,
                    "k={k} {s:?}"
                );
                assert_eq!(s.address.len(), (k - 1) as usize);
            }
        }
        assert!(enumerate_sides(&sys, &hull, 8, 100.0).unwrap().is_empty());
        assert!(detect_corners(&sys, &hull, 0.1, DEFAULT_MAX_PERIOD).is_empty());
    }

    #[test]
    fn example1_dimension_rows() {
        let sys = example1(Angle::radians(1.0).unwrap());
        let hull = attractor_hull(&sys, 1e-9).unwrap();
        let est = vertex_dimension_estimate(&sys, &hull, 6).unwrap();
        for r in &est.rows {
            assert!(r.within_bound, "{r:?}");
            assert!(r.max_diameter <= sys.q().powi(r.p as i32) * hull.diameter() + 1e-9);
        }
    }

    #[test]
    fn nesting_holds() {
        let sys = example1(Angle::radians(1.0).unwrap());
        let hull = attractor_hull(&sys, 1e-9).unwrap();
        let ctx = Ctx::new(&sys, &hull);
        let comps = boundary_components(&sys, &hull, 4).unwrap();
        for c in comps.iter().filter(|c| c.address.len() > 1) {
            let parent = AddressWord::new(c.address.indices()[..c.address.len() - 1].to_vec());
            let ok = comps.iter().filter(|d| d.address == parent).any(|d| {
                let r = ctx.bd.rel(d.start, c.start);
                let r = if r > d.length + 1e-6 {
                    r - ctx.bd.total
                } else {
                    r
                };
                r >= -1e-6 && r + c.length <= d.length + 1e-6
            });
            assert!(ok, "{c:?}");
        }
    }

    #[test]
    fn component_bound_values() {
        assert_eq!(component_bound(2, 1), 2.0);
        assert_eq!(component_bound(2, 3), 12.0);
        assert_eq!(component_bound(3, 2), 12.0);
    }

    #[test]
    fn resolution_exhausted() {
        let sys = example1(Angle::radians(1.0).unwrap());
        let hull = attractor_hull(&sys, 1e-9).unwrap();
        assert!(matches!(
            boundary_components(&sys, &hull, 40),
            Err(Error::ResolutionExhausted { .. })
        ));
    }
}
