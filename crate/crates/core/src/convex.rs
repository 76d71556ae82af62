//! Tolerance-based convex polygon kernel.
//!
//! [`ConvexBody`] values are canonical: polygons are counterclockwise,
//! strictly convex at the working tolerance and start at their
//! lexicographically smallest vertex (lowest x, then lowest y). Points and
//! segments are first-class variants since fixed-point iterations are often
//! seeded with a single point.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::point::{angle_diff, normalize_radians, Point};
use crate::similitude::{Angle, Similitude};
use crate::{Error, Result, EPS_GEOM};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vertices", rename_all = "snake_case")]
pub enum ConvexBody {
    Point(Point),
    Segment([Point; 2]),
    Polygon(Vec<Point>),
}

impl ConvexBody {
    /// Vertices in boundary order (1 for a point, 2 for a segment).
    pub fn vertices(&self) -> &[Point] {
        match self {
            ConvexBody::Point(p) => std::slice::from_ref(p),
            ConvexBody::Segment(v) => v,
            ConvexBody::Polygon(v) => v,
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self, ConvexBody::Polygon(_))
    }

    /// Directed boundary edges. A segment is traversed as a 2-gon, a point
    /// has no edges.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let v = self.vertices();
        let n = if v.len() == 1 { 0 } else { v.len() };
        (0..n).map(move |i| (v[i], v[(i + 1) % v.len()]))
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let v = self.vertices();
        let s = v.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
        s * (1.0 / v.len() as f64)
    }

    /// Area centroid for polygons, midpoint for segments.
    pub fn centroid(&self) -> Point {
        match self {
            ConvexBody::Point(p) => *p,
            ConvexBody::Segment([p, q]) => p.lerp(*q, 0.5),
            ConvexBody::Polygon(v) => {
                let o = v[0];
                let (mut a, mut c) = (0.0, Point::ORIGIN);
                for i in 1..v.len() - 1 {
                    let t = (v[i] - o).cross(v[i + 1] - o) * 0.5;
                    a += t;
                    c += (o + v[i] + v[i + 1]) * (t / 3.0);
                }
                if a > 0.0 {
                    c * (1.0 / a)
                } else {
                    self.centroid_of_vertices()
                }
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ConvexBody::Polygon(v) => {
                let n = v.len();
                (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() * 0.5
            }
            _ => 0.0,
        }
    }

    /// Boundary length. A segment counts both of its faces.
    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter(self)
    }

    /// Closed-set membership with absolute tolerance `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        match self {
            ConvexBody::Polygon(v) => {
                let n = v.len();
                (0..n).all(|i| {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    let e = b - a;
                    e.cross(p - a) >= -tol * e.norm()
                })
            }
            _ => self.distance_to(p) <= tol,
        }
    }

    /// Euclidean distance from `p` to the body (0 inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        match self {
            ConvexBody::Point(a) => a.dist(p),
            ConvexBody::Segment([a, b]) => point_segment_distance(p, *a, *b),
            ConvexBody::Polygon(v) => {
                let n = v.len();
                let mut inside = true;
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let (a, b) = (v[i], v[(i + 1) % n]);
                    if (b - a).cross(p - a) < 0.0 {
                        inside = false;
                    }
                    best = best.min(point_segment_distance(p, a, b));
                }
                if inside {
                    0.0
                } else {
                    best
                }
            }
        }
    }

    /// Nearest point of the body to `p`.
    pub fn nearest_point(&self, p: Point) -> Point {
        if self.contains(p, 0.0) && self.is_polygon() {
            return p;
        }
        let mut best = (f64::INFINITY, p);
        let v = self.vertices();
        if v.len() == 1 {
            return v[0];
        }
        for (a, b) in self.edges() {
            let q = project_to_segment(p, a, b);
            let d = q.dist(p);
            if d < best.0 {
                best = (d, q);
            }
        }
        best.1
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        bbox(self.vertices())
    }

    /// Outward unit normals of the directed edges, as angles in `[0, 2π)`.
    pub fn edge_normal_angles(&self) -> Vec<f64> {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                Point::new(e.y, -e.x).angle()
            })
            .collect()
    }
}

/// Sorted set of outward normal directions.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSet(Vec<Angle>);

impl DirectionSet {
    /// Sorts ascending and drops entries within `1e-12` rad of a kept one
    /// (exact entries win over approximate ones).
    pub fn new(angles: impl IntoIterator<Item = Angle>) -> Self {
        let mut v: Vec<Angle> = angles.into_iter().collect();
        v.sort_by(|a, b| {
            a.to_radians()
                .total_cmp(&b.to_radians())
                .then_with(|| b.is_exact().cmp(&a.is_exact()))
        });
        let mut out: Vec<Angle> = Vec::with_capacity(v.len());
        for a in v {
            if let Some(last) = out.last() {
                if (a.to_radians() - last.to_radians()).abs() <= 1e-12 {
                    continue;
                }
            }
            out.push(a);
        }
        // wrap-around duplicate near 2π
        if out.len() > 1 {
            let first = out[0].to_radians();
            let last = out[out.len() - 1].to_radians();
            if (first + std::f64::consts::TAU - last).abs() <= 1e-12 {
                out.pop();
            }
        }
        Self(out)
    }

    /// `n` equally spaced exact directions `2πk/n`.
    pub fn uniform(n: usize) -> Self {
        Self::new((0..n).map(|k| {
            Angle::from_pi_multiple(num_rational::Rational64::new(2 * k as i64, n as i64))
        }))
    }

    pub fn angles(&self) -> &[Angle] {
        &self.0
    }

    pub fn radians(&self) -> Vec<f64> {
        self.0.iter().map(Angle::to_radians).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the direction within `tol` radians of `theta`.
    pub fn index_of(&self, theta: f64, tol: f64) -> Option<usize> {
        let theta = normalize_radians(theta);
        let rad: Vec<f64> = self.radians();
        let k = rad.partition_point(|&r| r < theta);
        let n = rad.len();
        [k % n.max(1), (k + n.max(1) - 1) % n.max(1)]
            .into_iter()
            .filter(|&i| i < n)
            .find(|&i| angle_diff(rad[i], theta).abs() <= tol)
    }

    /// Largest angular gap between cyclically consecutive directions.
    pub fn max_gap(&self) -> f64 {
        let r = self.radians();
        if r.is_empty() {
            return std::f64::consts::TAU;
        }
        let mut g: f64 = r[0] + std::f64::consts::TAU - r[r.len() - 1];
        for w in r.windows(2) {
            g = g.max(w[1] - w[0]);
        }
        g
    }
}

pub(crate) fn bbox(points: &[Point]) -> (Point, Point) {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    project_to_segment(p, a, b).dist(p)
}

pub(crate) fn project_to_segment(p: Point, a: Point, b: Point) -> Point {
    let e = b - a;
    let l2 = e.dot(e);
    if l2 == 0.0 {
        return a;
    }
    let t = (p - a).dot(e) / l2;
    if t <= 0.0 {
        a
    } else if t >= 1.0 {
        b
    } else {
        a + e * t
    }
}

/// Smallest convex body containing `points`, with collinearity and
/// duplicate decisions at `EPS_GEOM` times the point cloud's extent.
pub fn convex_hull(points: &[Point]) -> Result<ConvexBody> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (lo, hi) = bbox(points);
    let scale = (hi - lo).norm();
    hull_with_tolerance(points, EPS_GEOM * scale)
}

/// Monotone-chain hull; a middle point is dropped when its distance to the
/// chord of its neighbours is at most `tol`.
pub fn hull_with_tolerance(points: &[Point], tol: f64) -> Result<ConvexBody> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidArgument("non-finite point".into()));
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(Point::lex_cmp);
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexBody::Point(pts[0]));
    }
    // drop the turn at `b` when it is within tol of the chord a→c
    let keep = |a: Point, b: Point, c: Point| -> bool {
        let e = c - a;
        let len = e.norm();
        (b - a).cross(e) > tol * len.max(f64::MIN_POSITIVE)
    };
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && !keep(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && !keep(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    finish_polygon(hull, tol)
}

/// Turns a counterclockwise vertex cycle into a canonical body, collapsing
/// near-duplicates and slivers at tolerance `tol`.
fn finish_polygon(mut v: Vec<Point>, tol: f64) -> Result<ConvexBody> {
    // merge near-duplicate consecutive vertices
    if v.len() > 1 {
        let mut out: Vec<Point> = Vec::with_capacity(v.len());
        for p in v.drain(..) {
            if out.last().is_none_or(|q: &Point| q.dist(p) > tol) {
                out.push(p);
            }
        }
        while out.len() > 1 && out[0].dist(out[out.len() - 1]) <= tol {
            out.pop();
        }
        v = out;
    }
    match v.len() {
        0 => Err(Error::EmptyInput),
        1 => Ok(ConvexBody::Point(v[0])),
        2 => Ok(segment(v[0], v[1])),
        _ => {
            // sliver check: all vertices within tol of the diameter chord
            let (i, j) = farthest_pair(&v);
            let (a, b) = (v[i], v[j]);
            if v.iter().all(|&p| line_distance(p, a, b) <= tol) {
                let e = b - a;
                let t: Vec<f64> = v.iter().map(|&p| (p - a).dot(e)).collect();
                let lo = (0..v.len()).min_by(|&x, &y| t[x].total_cmp(&t[y])).unwrap();
                let hi = (0..v.len()).max_by(|&x, &y| t[x].total_cmp(&t[y])).unwrap();
                return Ok(segment(v[lo], v[hi]));
            }
            Ok(ConvexBody::Polygon(rotate_to_lex_min(v)))
        }
    }
}

fn segment(a: Point, b: Point) -> ConvexBody {
    if a.lex_cmp(&b) == Ordering::Greater {
        ConvexBody::Segment([b, a])
    } else {
        ConvexBody::Segment([a, b])
    }
}

fn line_distance(p: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let l = e.norm();
    if l == 0.0 {
        p.dist(a)
    } else {
        (e.cross(p - a) / l).abs()
    }
}

fn rotate_to_lex_min(mut v: Vec<Point>) -> Vec<Point> {
    let k = (0..v.len())
        .min_by(|&i, &j| v[i].lex_cmp(&v[j]))
        .unwrap_or(0);
    v.rotate_left(k);
    v
}

/// Removes vertices whose distance to the chord of their neighbours is at
/// most `tol`, never two adjacent ones in the same call. Returns the body and
/// an upper bound for the Hausdorff distance to the input.
pub fn simplify(body: &ConvexBody, tol: f64) -> (ConvexBody, f64) {
    let ConvexBody::Polygon(v) = body else {
        return (body.clone(), 0.0);
    };
    let n = v.len();
    let mut drop = vec![false; n];
    let mut slack: f64 = 0.0;
    let mut i = 0;
    while i < n {
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        if !drop[prev] && !(i == n - 1 && drop[0]) {
            let d = point_segment_distance(v[i], v[prev], v[next]);
            if d <= tol && n - drop.iter().filter(|&&x| x).count() > 3 {
                drop[i] = true;
                slack = slack.max(d);
                i += 2;
                continue;
            }
        }
        i += 1;
    }
    if slack == 0.0 && !drop.iter().any(|&x| x) {
        return (body.clone(), 0.0);
    }
    let kept: Vec<Point> = v
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(p, _)| *p)
        .collect();
    match finish_polygon(kept, 0.0) {
        Ok(b) => (b, slack),
        Err(_) => (body.clone(), 0.0),
    }
}

fn farthest_pair(v: &[Point]) -> (usize, usize) {
    if v.len() <= 64 {
        let mut best = (0.0, 0, 0);
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let d = v[i].dist(v[j]);
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        (best.1, best.2)
    } else {
        calipers_farthest(v)
    }
}

/// Rotating calipers over a counterclockwise convex polygon.
fn calipers_farthest(v: &[Point]) -> (usize, usize) {
    let n = v.len();
    let mut j = 1;
    let mut best = (0.0, 0, 0);
    for i in 0..n {
        let ni = (i + 1) % n;
        let e = v[ni] - v[i];
        loop {
            let nj = (j + 1) % n;
            if e.cross(v[nj] - v[j]) > 0.0 {
                j = nj;
            } else {
                break;
            }
        }
        for &(a, b) in &[(i, j), (ni, j)] {
            let d = v[a].dist(v[b]);
            if d > best.0 {
                best = (d, a, b);
            }
        }
    }
    (best.1, best.2)
}

/// Maximum pairwise distance of the body's points.
pub fn diameter(a: &ConvexBody) -> f64 {
    match a {
        ConvexBody::Point(_) => 0.0,
        ConvexBody::Segment([p, q]) => p.dist(*q),
        ConvexBody::Polygon(v) => {
            let (i, j) = farthest_pair(v);
            v[i].dist(v[j])
        }
    }
}

/// `max_{p∈a} ⟨p, (cos θ, sin θ)⟩`.
pub fn support(a: &ConvexBody, theta: f64) -> f64 {
    support_vec(a, Point::unit(theta))
}

pub fn support_vec(a: &ConvexBody, u: Point) -> f64 {
    a.vertices()
        .iter()
        .map(|p| p.dot(u))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// O(log n) support queries on a fixed body.
#[derive(Clone, Debug)]
pub struct SupportTable {
    vertices: Vec<Point>,
    // normal angles of edges in increasing order, starting at edge `start`
    normals: Vec<f64>,
    start: usize,
}

impl SupportTable {
    pub fn new(body: &ConvexBody) -> Self {
        let vertices = body.vertices().to_vec();
        let raw = body.edge_normal_angles();
        if raw.is_empty() {
            return Self {
                vertices,
                normals: Vec::new(),
                start: 0,
            };
        }
        let start = (0..raw.len())
            .min_by(|&i, &j| raw[i].total_cmp(&raw[j]))
            .unwrap();
        let n = raw.len();
        let normals = (0..n).map(|t| raw[(start + t) % n]).collect();
        Self {
            vertices,
            normals,
            start,
        }
    }

    /// Index of a vertex attaining the support in direction `theta`.
    pub fn extreme_index(&self, theta: f64) -> usize {
        if self.normals.is_empty() {
            return 0;
        }
        let n = self.normals.len();
        let theta = normalize_radians(theta);
        let t = self.normals.partition_point(|&nu| nu < theta);
        (self.start + t) % n
    }

    pub fn extreme_point(&self, theta: f64) -> Point {
        self.vertices[self.extreme_index(theta)]
    }

    pub fn support(&self, theta: f64) -> f64 {
        let u = Point::unit(theta);
        let k = self.extreme_index(theta);
        // guard against rounding at cone boundaries
        let n = self.vertices.len();
        let a = self.vertices[k].dot(u);
        let b = self.vertices[(k + n - 1) % n].dot(u);
        let c = self.vertices[(k + 1) % n].dot(u);
        a.max(b).max(c)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

/// Minkowski sum by merging edge sequences in polar order.
pub fn minkowski_sum(a: &ConvexBody, b: &ConvexBody) -> ConvexBody {
    let pa = bottom_first(a.vertices());
    let pb = bottom_first(b.vertices());
    if pa.len() == 1 || pb.len() == 1 {
        let (single, other) = if pa.len() == 1 {
            (pa[0], b)
        } else {
            (pb[0], a)
        };
        return translate(other, single);
    }
    let (n, m) = (pa.len(), pb.len());
    let mut out = Vec::with_capacity(n + m);
    let (mut i, mut j) = (0usize, 0usize);
    while i < n || j < m {
        out.push(pa[i % n] + pb[j % m]);
        let ea = pa[(i + 1) % n] - pa[i % n];
        let eb = pb[(j + 1) % m] - pb[j % m];
        let c = if i >= n {
            -1.0
        } else if j >= m {
            1.0
        } else {
            ea.cross(eb)
        };
        if c >= 0.0 && i < n {
            i += 1;
        }
        if c <= 0.0 && j < m {
            j += 1;
        }
    }
    let (lo, hi) = bbox(&out);
    hull_with_tolerance(&out, EPS_GEOM * 1e-3 * (hi - lo).norm()).expect("nonempty")
}

fn bottom_first(v: &[Point]) -> Vec<Point> {
    let k = (0..v.len())
        .min_by(|&i, &j| v[i].y.total_cmp(&v[j].y).then(v[i].x.total_cmp(&v[j].x)))
        .unwrap_or(0);
    let mut w = v.to_vec();
    w.rotate_left(k);
    w
}

pub fn translate(a: &ConvexBody, t: Point) -> ConvexBody {
    match a {
        ConvexBody::Point(p) => ConvexBody::Point(*p + t),
        ConvexBody::Segment([p, q]) => segment(*p + t, *q + t),
        ConvexBody::Polygon(v) => {
            ConvexBody::Polygon(rotate_to_lex_min(v.iter().map(|&p| p + t).collect()))
        }
    }
}

/// Image of a body under a similitude; vertex count is preserved.
pub fn transform(a: &ConvexBody, s: &Similitude) -> ConvexBody {
    match a {
        ConvexBody::Point(p) => ConvexBody::Point(s.apply(*p)),
        ConvexBody::Segment([p, q]) => segment(s.apply(*p), s.apply(*q)),
        ConvexBody::Polygon(v) => {
            ConvexBody::Polygon(rotate_to_lex_min(v.iter().map(|&p| s.apply(p)).collect()))
        }
    }
}

/// Hausdorff distance, exact for convex bodies: the distance to a convex set
/// is a convex function, so each directed distance is attained at a vertex.
pub fn hausdorff_distance(a: &ConvexBody, b: &ConvexBody) -> f64 {
    let (na, nb) = (a.vertices().len(), b.vertices().len());
    if na * nb > 250_000 {
        return hausdorff_by_fans(a, b);
    }
    let d_ab = a
        .vertices()
        .iter()
        .map(|&v| b.distance_to(v))
        .fold(0.0, f64::max);
    let d_ba = b
        .vertices()
        .iter()
        .map(|&v| a.distance_to(v))
        .fold(0.0, f64::max);
    d_ab.max(d_ba)
}

/// Same value as [`hausdorff_distance`], computed as
/// `max_u |h_a(u) − h_b(u)|` over the merged normal fans.
pub fn hausdorff_by_fans(a: &ConvexBody, b: &ConvexBody) -> f64 {
    let ta = SupportTable::new(a);
    let tb = SupportTable::new(b);
    let mut breaks: Vec<f64> = a.edge_normal_angles();
    breaks.extend(b.edge_normal_angles());
    breaks.push(0.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let tau = std::f64::consts::TAU;
    let mut best: f64 = 0.0;
    for k in 0..breaks.len() {
        let lo = breaks[k];
        let hi = if k + 1 < breaks.len() {
            breaks[k + 1]
        } else {
            tau
        };
        let mid = 0.5 * (lo + hi);
        let d = ta.extreme_point(mid) - tb.extreme_point(mid);
        for th in [lo, hi] {
            best = best.max(d.dot(Point::unit(th)).abs());
        }
        if d.norm() > 0.0 {
            for dir in [d.angle(), (-d).angle()] {
                let dir = if dir < lo { dir + tau } else { dir };
                if dir >= lo && dir <= hi {
                    best = best.max(d.norm());
                }
            }
        }
    }
    best
}

/// True iff the open interiors are disjoint. Separating-axis search over the
/// edge normals of both bodies; an overlap of at most
/// `EPS_GEOM · max diameter` along some axis counts as touching.
pub fn disjoint_interiors(a: &ConvexBody, b: &ConvexBody) -> bool {
    if !a.is_polygon() || !b.is_polygon() {
        return true;
    }
    let tol = EPS_GEOM * diameter(a).max(diameter(b));
    separating_overlap(a, b) <= tol
}

/// Minimum over candidate axes of the projected overlap length; positive
/// means the interiors overlap by at least that much along every axis.
pub fn separating_overlap(a: &ConvexBody, b: &ConvexBody) -> f64 {
    let mut min_overlap = f64::INFINITY;
    for body in [a, b] {
        for (p, q) in body.edges() {
            let e = q - p;
            let l = e.norm();
            if l == 0.0 {
                continue;
            }
            let axis = Point::new(e.y / l, -e.x / l);
            let (amin, amax) = project(a, axis);
            let (bmin, bmax) = project(b, axis);
            let overlap = amax.min(bmax) - amin.max(bmin);
            min_overlap = min_overlap.min(overlap);
        }
    }
    min_overlap
}

fn project(a: &ConvexBody, axis: Point) -> (f64, f64) {
    a.vertices()
        .iter()
        .map(|p| p.dot(axis))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
}

/// Clips a counterclockwise convex vertex cycle to `⟨x, n⟩ ≤ c`.
pub(crate) fn clip_halfplane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (p, q) = (poly[i], poly[(i + 1) % m]);
        let (fp, fq) = (p.dot(n) - c, q.dot(n) - c);
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

/// Intersection of two polygons, or `None` when it has no interior.
pub fn intersection(a: &ConvexBody, b: &ConvexBody) -> Option<ConvexBody> {
    if !a.is_polygon() || !b.is_polygon() {
        return None;
    }
    let mut poly = a.vertices().to_vec();
    for (p, q) in b.edges() {
        let e = q - p;
        let n = Point::new(e.y, -e.x);
        poly = clip_halfplane(&poly, n, n.dot(p));
        if poly.len() < 3 {
            return None;
        }
    }
    let (lo, hi) = bbox(&poly);
    match hull_with_tolerance(&poly, 1e-12 * (hi - lo).norm()) {
        Ok(body @ ConvexBody::Polygon(_)) => Some(body),
        _ => None,
    }
}

/// Polygon shrunk inward by `d` (each edge line moved inward by `d`).
pub fn offset_inward(a: &ConvexBody, d: f64) -> Option<ConvexBody> {
    if !a.is_polygon() {
        return None;
    }
    if d <= 0.0 {
        return Some(a.clone());
    }
    let mut poly = a.vertices().to_vec();
    for (p, q) in a.edges() {
        let e = q - p;
        let l = e.norm();
        let n = Point::new(e.y / l, -e.x / l);
        poly = clip_halfplane(&poly, n, n.dot(p) - d);
        if poly.len() < 3 {
            return None;
        }
    }
    match convex_hull(&poly) {
        Ok(body @ ConvexBody::Polygon(_)) => Some(body),
        _ => None,
    }
}
