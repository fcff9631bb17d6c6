//! Visibility polygons and kernels of simple polygons.
//!
//! Both are computed with exact rational predicates. The visibility polygon
//! uses a critical-direction sweep: between two consecutive directions toward
//! vertices the blocking edge cannot change, so the region boundary there is a
//! single segment of that edge. The kernel is the intersection of the inner
//! half-planes of all edges, with degenerate outputs (segment, point, empty)
//! represented explicitly.

use crate::geometry::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VisibilityError {
    #[error("viewpoint lies outside the polygon")]
    ViewpointOutside,
    #[error("internal sweep failure: {0}")]
    Sweep(String),
}

/// Region of a host polygon visible from a viewpoint.
#[derive(Debug, Clone)]
pub struct VisibilityPolygon {
    pub region: SimplePolygon,
    pub viewpoint: Point,
    pub host: SimplePolygon,
    /// The definition of visibility at a boundary viewpoint is the same
    /// closed-segment rule, but reports flag these separately.
    pub viewpoint_on_boundary: bool,
}

impl VisibilityPolygon {
    pub fn sees(&self, q: &Point) -> bool {
        self.region.contains(q)
    }
}

/// Integer direction vector, canonicalized to lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dir {
    x: BigInt,
    y: BigInt,
}

impl Dir {
    fn from_points(from: &Point, to: &Point) -> Option<Dir> {
        let dx = &to.x - &from.x;
        let dy = &to.y - &from.y;
        if dx.is_zero() && dy.is_zero() {
            return None;
        }
        // clear denominators, then reduce by gcd
        let nx = dx.numer() * dy.denom();
        let ny = dy.numer() * dx.denom();
        Some(Dir::new(nx, ny))
    }

    fn new(x: BigInt, y: BigInt) -> Dir {
        let g = x.gcd(&y);
        if g.is_zero() {
            Dir { x, y }
        } else {
            Dir {
                x: x / &g,
                y: y / &g,
            }
        }
    }

    fn add(&self, o: &Dir) -> Dir {
        Dir::new(&self.x + &o.x, &self.y + &o.y)
    }

    /// CCW angular order starting just above the positive x-axis.
    fn angle_cmp(&self, o: &Dir) -> Ordering {
        let ha = self.half();
        let hb = o.half();
        if ha != hb {
            return ha.cmp(&hb);
        }
        // same half-plane: compare by cross product
        let cross = &self.x * &o.y - &self.y * &o.x;
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    fn half(&self) -> u8 {
        if self.y.is_positive() || (self.y.is_zero() && self.x.is_positive()) {
            0
        } else {
            1
        }
    }
}

/// Farthest visible point from `u` along direction `d` within the closed
/// polygon (the last point of the maximal initial in-polygon stretch).
fn ray_extent(poly: &SimplePolygon, u: &Point, d: &Dir) -> Point {
    let dp = Point::new(
        &u.x + Rat::from_integer(d.x.clone()),
        &u.y + Rat::from_integer(d.y.clone()),
    );
    let mut ts: Vec<Rat> = vec![Rat::zero()];
    for (a, b) in poly.edges() {
        // intersect ray line u + t*d with segment [a,b]
        let o_a = orientation(u, &dp, a);
        let o_b = orientation(u, &dp, b);
        if o_a == Orientation::Collinear && o_b == Orientation::Collinear {
            for p in [a, b] {
                if let Some(t) = ray_param(u, d, p) {
                    if t >= Rat::zero() {
                        ts.push(t);
                    }
                }
            }
            continue;
        }
        if o_a == o_b {
            continue;
        }
        let ab = Line::through(a, b);
        let ray_line = Line::through(u, &dp);
        if let LineIntersection::At(p) = line_intersection(&ray_line, &ab) {
            if point_on_segment(&p, a, b) {
                if let Some(t) = ray_param(u, d, &p) {
                    if t >= Rat::zero() {
                        ts.push(t);
                    }
                }
            }
        }
    }
    ts.sort();
    ts.dedup();
    // walk intervals; stop at the first gap whose midpoint is outside
    let mut last_ok = Rat::zero();
    for w in ts.windows(2) {
        let mid = (&w[0] + &w[1]) / rat_int(2);
        let m = Point::new(
            &u.x + &mid * Rat::from_integer(d.x.clone()),
            &u.y + &mid * Rat::from_integer(d.y.clone()),
        );
        if poly.locate(&m) == PointLocation::Exterior {
            break;
        }
        last_ok = w[1].clone();
    }
    Point::new(
        &u.x + &last_ok * Rat::from_integer(d.x.clone()),
        &u.y + &last_ok * Rat::from_integer(d.y.clone()),
    )
}

fn ray_param(u: &Point, d: &Dir, p: &Point) -> Option<Rat> {
    if !d.x.is_zero() {
        Some((&p.x - &u.x) / Rat::from_integer(d.x.clone()))
    } else if !d.y.is_zero() {
        Some((&p.y - &u.y) / Rat::from_integer(d.y.clone()))
    } else {
        None
    }
}

/// Edge index whose interior contains `p`, if unique.
fn edge_containing(poly: &SimplePolygon, p: &Point) -> Option<usize> {
    let mut hit = None;
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        if point_on_segment(p, a, b) {
            if p != a && p != b {
                return Some(i);
            }
            hit = Some(i);
        }
    }
    hit
}

/// Exact visibility polygon of `u` inside `poly`.
pub fn visibility_polygon(
    poly: &SimplePolygon,
    u: &Point,
) -> Result<VisibilityPolygon, VisibilityError> {
    let loc = poly.locate(u);
    if loc == PointLocation::Exterior {
        return Err(VisibilityError::ViewpointOutside);
    }

    // critical directions: toward every vertex, plus the four axis
    // directions so that no angular gap reaches a half turn
    let mut dirs: Vec<Dir> = Vec::new();
    for v in poly.vertices() {
        if let Some(d) = Dir::from_points(u, v) {
            dirs.push(d);
        }
    }
    dirs.push(Dir::new(BigInt::one(), BigInt::zero()));
    dirs.push(Dir::new(BigInt::zero(), BigInt::one()));
    dirs.push(Dir::new(-BigInt::one(), BigInt::zero()));
    dirs.push(Dir::new(BigInt::zero(), -BigInt::one()));
    dirs.sort_by(|a, b| a.angle_cmp(b));
    dirs.dedup();

    let k = dirs.len();
    // blocking edge per wedge, probed at the wedge's angular midpoint
    let mut wedge_edge: Vec<Option<usize>> = Vec::with_capacity(k);
    for i in 0..k {
        let mid = dirs[i].add(&dirs[(i + 1) % k]);
        if mid.x.is_zero() && mid.y.is_zero() {
            return Err(VisibilityError::Sweep("opposite wedge directions".into()));
        }
        let hit = ray_extent(poly, u, &mid);
        if hit == *u {
            wedge_edge.push(None); // wedge looks straight into the exterior
        } else {
            wedge_edge.push(edge_containing(poly, &hit));
        }
    }

    let mut ring: Vec<Point> = Vec::new();
    for i in 0..k {
        let prev = wedge_edge[(i + k - 1) % k];
        let next = wedge_edge[i];
        let hit = ray_extent(poly, u, &dirs[i]);
        let mut push = |p: Point| {
            if ring.last() != Some(&p) {
                ring.push(p);
            }
        };
        match (prev, next) {
            (None, None) => push(hit),
            (Some(e), None) | (None, Some(e)) => {
                // region boundary reaches/leaves u's own position along this
                // direction; emit the edge-line crossing and the near point
                let (a, b) = poly.edge(e);
                let cross = ray_line_point(u, &dirs[i], &Line::through(a, b));
                match (prev.is_some(), cross) {
                    (true, Some(c)) => {
                        push(c);
                        push(hit);
                    }
                    (false, Some(c)) => {
                        push(hit);
                        push(c);
                    }
                    (_, None) => push(hit),
                }
            }
            (Some(e1), Some(e2)) => {
                if e1 == e2 {
                    push(hit);
                } else {
                    let (a1, b1) = poly.edge(e1);
                    let (a2, b2) = poly.edge(e2);
                    let c1 = ray_line_point(u, &dirs[i], &Line::through(a1, b1));
                    let c2 = ray_line_point(u, &dirs[i], &Line::through(a2, b2));
                    match (c1, c2) {
                        (Some(p1), Some(p2)) => {
                            push(p1);
                            push(p2);
                        }
                        (Some(p1), None) => {
                            push(p1);
                            push(hit);
                        }
                        (None, Some(p2)) => {
                            push(hit);
                            push(p2);
                        }
                        (None, None) => push(hit),
                    }
                }
            }
        }
    }
    // canonicalize: drop closing duplicates and collinear middles
    if ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    let ring = strip_collinear(ring);
    let region = SimplePolygon::new(ring)
        .map_err(|e| VisibilityError::Sweep(format!("region ring invalid: {e}")))?;
    Ok(VisibilityPolygon {
        region,
        viewpoint: u.clone(),
        host: poly.clone(),
        viewpoint_on_boundary: loc == PointLocation::Boundary,
    })
}

/// Intersection of the ray u + t d (t >= 0) with a line, if any.
fn ray_line_point(u: &Point, d: &Dir, l: &Line) -> Option<Point> {
    let dp = Point::new(
        &u.x + Rat::from_integer(d.x.clone()),
        &u.y + Rat::from_integer(d.y.clone()),
    );
    match line_intersection(&Line::through(u, &dp), l) {
        LineIntersection::At(p) => match ray_param(u, d, &p) {
            Some(t) if t >= Rat::zero() => Some(p),
            _ => None,
        },
        LineIntersection::Coincident => Some(u.clone()),
        LineIntersection::Parallel => None,
    }
}

fn strip_collinear(ring: Vec<Point>) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(ring.len());
    let n = ring.len();
    for i in 0..n {
        let prev = &ring[(i + n - 1) % n];
        let cur = &ring[i];
        let next = &ring[(i + 1) % n];
        if cur == prev {
            continue;
        }
        if orientation(prev, cur, next) != Orientation::Collinear {
            out.push(cur.clone());
        }
    }
    out
}

/// Convex region with explicit degenerate cases. Used for kernels and for
/// exact strip/half-plane intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvexRegion {
    Empty,
    Single(Point),
    Segment(Point, Point),
    /// CCW ring of at least 3 distinct vertices.
    Polygon(Vec<Point>),
}

impl ConvexRegion {
    pub fn is_empty(&self) -> bool {
        matches!(self, ConvexRegion::Empty)
    }

    /// 0, 1 or 2; the paper distinguishes kernels that degenerate to a point.
    pub fn dimension(&self) -> usize {
        match self {
            ConvexRegion::Empty => 0,
            ConvexRegion::Single(_) => 0,
            ConvexRegion::Segment(..) => 1,
            ConvexRegion::Polygon(_) => 2,
        }
    }

    pub fn vertices(&self) -> Vec<Point> {
        match self {
            ConvexRegion::Empty => vec![],
            ConvexRegion::Single(p) => vec![p.clone()],
            ConvexRegion::Segment(a, b) => vec![a.clone(), b.clone()],
            ConvexRegion::Polygon(v) => v.clone(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            ConvexRegion::Empty => false,
            ConvexRegion::Single(q) => p == q,
            ConvexRegion::Segment(a, b) => point_on_segment(p, a, b),
            ConvexRegion::Polygon(v) => {
                let n = v.len();
                (0..n).all(|i| orientation(&v[i], &v[(i + 1) % n], p) != Orientation::Right)
            }
        }
    }

    /// Clip by the closed half-plane on the left of the directed line a->b.
    pub fn clip_left(&self, a: &Point, b: &Point) -> ConvexRegion {
        if let ConvexRegion::Segment(p, q) = self {
            let sp = orientation(a, b, p);
            let sq = orientation(a, b, q);
            let mut out: Vec<Point> = Vec::new();
            if sp != Orientation::Right {
                out.push(p.clone());
            }
            if (sp == Orientation::Left && sq == Orientation::Right)
                || (sp == Orientation::Right && sq == Orientation::Left)
            {
                if let LineIntersection::At(c) =
                    line_intersection(&Line::through(a, b), &Line::through(p, q))
                {
                    out.push(c);
                }
            }
            if sq != Orientation::Right {
                out.push(q.clone());
            }
            return canonical_convex(out);
        }
        let pts = match self {
            ConvexRegion::Empty => return ConvexRegion::Empty,
            ConvexRegion::Single(p) => {
                return if orientation(a, b, p) != Orientation::Right {
                    self.clone()
                } else {
                    ConvexRegion::Empty
                };
            }
            ConvexRegion::Polygon(v) => v.clone(),
            ConvexRegion::Segment(..) => unreachable!(),
        };
        let n = pts.len();
        let mut out: Vec<Point> = Vec::new();
        for i in 0..n {
            let cur = &pts[i];
            let nxt = &pts[(i + 1) % n];
            let side_cur = orientation(a, b, cur);
            let side_nxt = orientation(a, b, nxt);
            if side_cur != Orientation::Right {
                out.push(cur.clone());
            }
            let crossing = (side_cur == Orientation::Left && side_nxt == Orientation::Right)
                || (side_cur == Orientation::Right && side_nxt == Orientation::Left);
            if crossing {
                if let LineIntersection::At(p) =
                    line_intersection(&Line::through(a, b), &Line::through(cur, nxt))
                {
                    out.push(p);
                }
            }
        }
        canonical_convex(out)
    }

    /// Exact intersection with another convex region.
    pub fn intersect(&self, other: &ConvexRegion) -> ConvexRegion {
        match other {
            ConvexRegion::Empty => ConvexRegion::Empty,
            ConvexRegion::Single(p) => {
                if self.contains(p) {
                    other.clone()
                } else {
                    ConvexRegion::Empty
                }
            }
            ConvexRegion::Segment(a, b) => {
                // the segment = on the line (two opposite half-planes) and
                // between the end-perpendicular half-planes
                let fwd = |p: &Point, q: &Point| {
                    // points t with (q-p)·(t-p) >= 0 are left of the directed
                    // line from p toward p + rot270(q-p)
                    Point::new(&p.x + (&q.y - &p.y), &p.y - (&q.x - &p.x))
                };
                let mut r = self.clone();
                r = r.clip_left(a, b);
                r = r.clip_left(b, a);
                let da = fwd(a, b);
                r = r.clip_left(a, &da);
                let db = fwd(b, a);
                r = r.clip_left(b, &db);
                r
            }
            ConvexRegion::Polygon(v) => {
                let mut r = self.clone();
                let n = v.len();
                for i in 0..n {
                    r = r.clip_left(&v[i], &v[(i + 1) % n]);
                    if r.is_empty() {
                        break;
                    }
                }
                r
            }
        }
    }
}

/// Normalize a clipped point list into a canonical convex region.
fn canonical_convex(mut pts: Vec<Point>) -> ConvexRegion {
    pts.dedup();
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    // remove duplicates (exact) preserving order
    let mut uniq: Vec<Point> = Vec::new();
    for p in pts {
        if !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    match uniq.len() {
        0 => ConvexRegion::Empty,
        1 => ConvexRegion::Single(uniq.pop().unwrap()),
        2 => ConvexRegion::Segment(uniq[0].clone(), uniq[1].clone()),
        _ => {
            // all collinear degenerates into the extreme pair
            let all_collinear = uniq
                .iter()
                .skip(2)
                .all(|p| orientation(&uniq[0], &uniq[1], p) == Orientation::Collinear)
                && orientation(&uniq[0], &uniq[1], &uniq[2]) == Orientation::Collinear;
            if all_collinear {
                let mut lo = uniq[0].clone();
                let mut hi = uniq[0].clone();
                for p in &uniq {
                    if *p < lo {
                        lo = p.clone();
                    }
                    if *p > hi {
                        hi = p.clone();
                    }
                }
                return ConvexRegion::Segment(lo, hi);
            }
            let ring = strip_collinear(uniq);
            match ring.len() {
                0 => ConvexRegion::Empty,
                1 => ConvexRegion::Single(ring[0].clone()),
                2 => ConvexRegion::Segment(ring[0].clone(), ring[1].clone()),
                _ => ConvexRegion::Polygon(ring),
            }
        }
    }
}

/// Kernel of a simple polygon: the set of points that see everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    pub region: ConvexRegion,
}

pub fn kernel(poly: &SimplePolygon) -> Kernel {
    let (lo, hi) = poly.bbox();
    let pad = rat_int(1);
    let corners = vec![
        Point::new(&lo.x - &pad, &lo.y - &pad),
        Point::new(&hi.x + &pad, &lo.y - &pad),
        Point::new(&hi.x + &pad, &hi.y + &pad),
        Point::new(&lo.x - &pad, &hi.y + &pad),
    ];
    let mut region = ConvexRegion::Polygon(corners);
    for (a, b) in poly.edges() {
        region = region.clip_left(a, b);
        if region.is_empty() {
            break;
        }
    }
    Kernel { region }
}

pub fn is_star_shaped(poly: &SimplePolygon) -> bool {
    !kernel(poly).region.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn pr(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(rat(xn, xd), rat(yn, yd))
    }

    fn l_shape() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)]).unwrap()
    }

    fn convex_pentagon() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(4, 0), p(5, 3), p(2, 5), p(-1, 3)]).unwrap()
    }

    #[test]
    fn visibility_of_convex_is_whole() {
        let pent = convex_pentagon();
        let vp = visibility_polygon(&pent, &p(2, 2)).unwrap();
        assert_eq!(vp.region.signed_area2(), pent.signed_area2());
        for v in pent.vertices() {
            assert!(vp.sees(v));
        }
    }

    #[test]
    fn visibility_behind_reflex_vertex() {
        let hex = l_shape();
        let u = pr(1, 2, 1, 2, );
        let vp = visibility_polygon(&hex, &u).unwrap();
        assert!(vp.sees(&pr(7, 4, 1, 2)));
        assert!(vp.sees(&pr(7, 4, 1, 8)));
        // not in the host at all, hence not in the region
        assert!(!vp.sees(&pr(3, 2, 5, 4)));
        // occluded: deep in the top arm shadowed by the reflex vertex
        let q = pr(3, 4, 7, 4);
        assert_eq!(
            vp.sees(&q),
            segment_in_polygon(&hex, &u, &q).unwrap()
        );
    }

    #[test]
    fn visibility_agrees_with_segment_test() {
        let hex = l_shape();
        let u = pr(1, 4, 1, 4);
        let vp = visibility_polygon(&hex, &u).unwrap();
        for xi in 0..=8 {
            for yi in 0..=8 {
                let q = Point::new(rat(xi, 4), rat(yi, 4));
                if hex.locate(&q) == PointLocation::Exterior {
                    continue;
                }
                assert_eq!(
                    vp.sees(&q),
                    segment_in_polygon(&hex, &u, &q).unwrap(),
                    "mismatch at {:?}",
                    q
                );
            }
        }
    }

    #[test]
    fn kernel_of_convex_is_whole() {
        let pent = convex_pentagon();
        let k = kernel(&pent);
        match &k.region {
            ConvexRegion::Polygon(v) => assert_eq!(v.len(), 5),
            other => panic!("expected polygon kernel, got {:?}", other),
        }
        assert!(is_star_shaped(&pent));
    }

    #[test]
    fn kernel_of_l_shape() {
        let hex = l_shape();
        let k = kernel(&hex);
        // kernel is the unit square between the two arms
        assert!(k.region.contains(&pr(1, 2, 1, 2)));
        assert!(!k.region.contains(&pr(7, 4, 1, 2)));
        assert!(is_star_shaped(&hex));
    }

    #[test]
    fn kernel_empty_for_non_star() {
        // comb with three upward teeth: the inner tooth walls demand x < 1
        // and x > 2 simultaneously, so the edge half-planes have empty
        // common intersection
        let poly = SimplePolygon::new(vec![
            p(0, 0),
            p(5, 0),
            p(5, 3),
            p(4, 3),
            p(4, 1),
            p(3, 1),
            p(3, 3),
            p(2, 3),
            p(2, 1),
            p(1, 1),
            p(1, 3),
            p(0, 3),
        ])
        .unwrap();
        let k = kernel(&poly);
        assert!(k.region.is_empty(), "kernel should be empty: {:?}", k);
        // exhaustive corroboration: no vertex of the polygon sees all vertices
        for u in poly.vertices() {
            let all = poly
                .vertices()
                .iter()
                .all(|v| segment_in_polygon(&poly, u, v).unwrap());
            assert!(!all);
        }
        assert!(!is_star_shaped(&poly));
    }

    #[test]
    fn kernel_clip_degenerates() {
        // two opposite half-planes leave a segment
        let square = ConvexRegion::Polygon(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]);
        let seg = square.clip_left(&p(0, 2), &p(4, 2)).clip_left(&p(4, 2), &p(0, 2));
        match seg {
            ConvexRegion::Segment(..) => {}
            other => panic!("expected segment, got {:?}", other),
        }
    }

    #[test]
    fn convex_intersection_disjoint() {
        let a = ConvexRegion::Polygon(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]);
        let b = ConvexRegion::Polygon(vec![p(2, 0), p(3, 0), p(3, 1), p(2, 1)]);
        assert!(a.intersect(&b).is_empty());
        let c = ConvexRegion::Polygon(vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]);
        assert!(!a.intersect(&c).is_empty());
    }
}
