//! Exact rational planar primitives and predicates.
//!
//! Every coordinate is an arbitrary-precision rational kept in lowest terms
//! with a positive denominator, so all predicates here are exact sign
//! computations. There are no tolerances anywhere in this crate: collinear
//! means collinear.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

pub type Int = BigInt;
/// Exact rational scalar. `BigRational` already maintains the invariants the
/// crate relies on: lowest terms, positive denominator, value equality.
pub type Rat = BigRational;

/// Convenience constructor for an integer-valued rational.
pub fn rat_int(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

/// Convenience constructor for `n / d`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate line: the two defining points coincide")]
    DegenerateLine,
    #[error("degenerate segment: the two endpoints coincide")]
    DegenerateSegment,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon ring has a repeated vertex at index {0}")]
    RepeatedVertex(usize),
    #[error("polygon ring is self-intersecting (edges {0} and {1})")]
    SelfIntersection(usize, usize),
    #[error("polygon ring is clockwise; counterclockwise order is required")]
    ClockwiseRing,
    #[error("point lies outside the polygon")]
    PointOutsidePolygon,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat_int(x), rat_int(y))
    }

    /// Squared Euclidean distance. Distances are always compared squared so
    /// everything stays rational.
    pub fn dist2(&self, other: &Point) -> Rat {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }

    /// Point at parameter `t` on the segment from `self` to `other`.
    pub fn lerp(&self, other: &Point, t: &Rat) -> Point {
        Point::new(
            &self.x + t * (&other.x - &self.x),
            &self.y + t * (&other.y - &self.y),
        )
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, &rat(1, 2))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Sign of the cross product of (q - p, r - p), computed over the integer
/// numerators so no rational normalization happens on this hot path.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match cross_sign(p, q, r) {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// Ordering form of `orientation`: Greater = left turn.
pub fn cross_sign(p: &Point, q: &Point, r: &Point) -> Ordering {
    // (q.x - p.x) = ax/axd with axd > 0, and similarly for the rest.
    let ax = q.x.numer() * p.x.denom() - p.x.numer() * q.x.denom();
    let axd = q.x.denom() * p.x.denom();
    let ay = q.y.numer() * p.y.denom() - p.y.numer() * q.y.denom();
    let ayd = q.y.denom() * p.y.denom();
    let bx = r.x.numer() * p.x.denom() - p.x.numer() * r.x.denom();
    let bxd = r.x.denom() * p.x.denom();
    let by = r.y.numer() * p.y.denom() - p.y.numer() * r.y.denom();
    let byd = r.y.denom() * p.y.denom();
    // sign(ax/axd * by/byd - ay/ayd * bx/bxd); all denominators positive.
    let lhs = ax * by * (ayd * bxd);
    let rhs = ay * bx * (axd * byd);
    lhs.cmp(&rhs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub p: Point,
    pub q: Point,
}

impl Line {
    pub fn new(p: Point, q: Point) -> Result<Self, GeometryError> {
        if p == q {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(Line { p, q })
    }

    pub fn through(p: &Point, q: &Point) -> Line {
        Line::new(p.clone(), q.clone()).expect("distinct points")
    }

    pub fn contains(&self, r: &Point) -> bool {
        orientation(&self.p, &self.q, r) == Orientation::Collinear
    }

    /// Side of the directed line p->q: Left, Right or Collinear.
    pub fn side(&self, r: &Point) -> Orientation {
        orientation(&self.p, &self.q, r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineIntersection {
    At(Point),
    Parallel,
    Coincident,
}

/// Intersection point of two lines by the closed-form determinant formula.
/// The numerator is a cubic and the denominator a quadratic in the input
/// coordinates, which is what keeps coordinate bit growth linear per step.
pub fn line_intersection(l1: &Line, l2: &Line) -> LineIntersection {
    let (x1, y1) = (&l1.p.x, &l1.p.y);
    let (x2, y2) = (&l1.q.x, &l1.q.y);
    let (x3, y3) = (&l2.p.x, &l2.p.y);
    let (x4, y4) = (&l2.q.x, &l2.q.y);

    let den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4);
    if den.is_zero() {
        if l1.contains(&l2.p) && l1.contains(&l2.q) {
            return LineIntersection::Coincident;
        }
        return LineIntersection::Parallel;
    }
    let d12 = x1 * y2 - y1 * x2;
    let d34 = x3 * y4 - y3 * x4;
    let x = (&d12 * (x3 - x4) - (x1 - x2) * &d34) / &den;
    let y = (&d12 * (y3 - y4) - (y1 - y2) * &d34) / &den;
    LineIntersection::At(Point::new(x, y))
}

/// Exact mirror image of `p` across `l`.
pub fn reflect_across_line(p: &Point, l: &Line) -> Point {
    let ux = &l.q.x - &l.p.x;
    let uy = &l.q.y - &l.p.y;
    let wx = &p.x - &l.p.x;
    let wy = &p.y - &l.p.y;
    let len2 = &ux * &ux + &uy * &uy;
    let t = (&wx * &ux + &wy * &uy) / &len2;
    // foot of the perpendicular, then reflect through it
    let fx = &l.p.x + &t * &ux;
    let fy = &l.p.y + &t * &uy;
    Point::new(&fx + &fx - &p.x, &fy + &fy - &p.y)
}

/// True iff `p` lies on the closed segment [a, b].
pub fn point_on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orientation(a, b, p) != Orientation::Collinear {
        return false;
    }
    in_box(p, a, b)
}

fn in_box(p: &Point, a: &Point, b: &Point) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *xlo <= p.x && p.x <= *xhi && *ylo <= p.y && p.y <= *yhi
}

/// Do the closed segments [a,b] and [c,d] share at least one point?
pub fn segments_touch(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
    {
        return o1 != o2 && o3 != o4;
    }
    (o1 == Orientation::Collinear && point_on_segment(c, a, b))
        || (o2 == Orientation::Collinear && point_on_segment(d, a, b))
        || (o3 == Orientation::Collinear && point_on_segment(a, c, d))
        || (o4 == Orientation::Collinear && point_on_segment(b, c, d))
}

/// All intersection parameters `t` (along [a,b]) at which the segment meets
/// the segment [c,d]. Collinear overlap contributes both overlap endpoints.
pub fn segment_segment_params(a: &Point, b: &Point, c: &Point, d: &Point) -> Vec<Rat> {
    let mut out = Vec::new();
    let ab = Line::through(a, b);
    let o_c = ab.side(c);
    let o_d = ab.side(d);
    if o_c == Orientation::Collinear && o_d == Orientation::Collinear {
        // collinear: project c and d onto [a,b]
        for p in [c, d] {
            if let Some(t) = param_on_line(a, b, p) {
                if Rat::zero() <= t && t <= Rat::one() && point_on_segment(p, a, b) {
                    out.push(t);
                }
            }
        }
        // segment endpoints interior to [c,d] also count
        for (p, t) in [(a, Rat::zero()), (b, Rat::one())] {
            if point_on_segment(p, c, d) {
                out.push(t);
            }
        }
        return out;
    }
    let cd = Line::through(c, d);
    match line_intersection(&ab, &cd) {
        LineIntersection::At(p) => {
            if point_on_segment(&p, a, b) && point_on_segment(&p, c, d) {
                out.push(param_on_line(a, b, &p).expect("on line"));
            }
        }
        _ => {}
    }
    out
}

/// Parameter of `p` along the line a->b (p must be collinear with a,b).
pub fn param_on_line(a: &Point, b: &Point, p: &Point) -> Option<Rat> {
    let dx = &b.x - &a.x;
    let dy = &b.y - &a.y;
    if !dx.is_zero() {
        Some((&p.x - &a.x) / dx)
    } else if !dy.is_zero() {
        Some((&p.y - &a.y) / dy)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Interior,
    Boundary,
    Exterior,
}

/// A simple polygon stored as a counterclockwise ring of distinct vertices.
/// The closed region (boundary included) is the polygon.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplePolygon {
    verts: Vec<Point>,
}

impl fmt::Debug for SimplePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplePolygon[{} vertices]", self.verts.len())
    }
}

impl SimplePolygon {
    pub fn new(verts: Vec<Point>) -> Result<Self, GeometryError> {
        if verts.len() < 3 {
            return Err(GeometryError::TooFewVertices(verts.len()));
        }
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                if verts[i] == verts[j] {
                    return Err(GeometryError::RepeatedVertex(j));
                }
            }
        }
        if let Some((i, j)) = ring_self_intersection(&verts) {
            return Err(GeometryError::SelfIntersection(i, j));
        }
        if signed_area2(&verts) <= Rat::zero() {
            return Err(GeometryError::ClockwiseRing);
        }
        Ok(SimplePolygon { verts })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.verts.len();
        (&self.verts[i], &self.verts[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        (0..self.verts.len()).map(move |i| self.edge(i))
    }

    /// Twice the signed area (positive since the ring is CCW).
    pub fn signed_area2(&self) -> Rat {
        signed_area2(&self.verts)
    }

    pub fn bbox(&self) -> (Point, Point) {
        let mut xlo = self.verts[0].x.clone();
        let mut xhi = xlo.clone();
        let mut ylo = self.verts[0].y.clone();
        let mut yhi = ylo.clone();
        for v in &self.verts {
            if v.x < xlo {
                xlo = v.x.clone();
            }
            if v.x > xhi {
                xhi = v.x.clone();
            }
            if v.y < ylo {
                ylo = v.y.clone();
            }
            if v.y > yhi {
                yhi = v.y.clone();
            }
        }
        (Point::new(xlo, ylo), Point::new(xhi, yhi))
    }

    /// Exact classification of `p` against the closed region.
    pub fn locate(&self, p: &Point) -> PointLocation {
        let n = self.verts.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if point_on_segment(p, a, b) {
                return PointLocation::Boundary;
            }
        }
        // crossing-number with the half-open rule on y, exact rationals
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let a_above = a.y > p.y;
            let b_above = b.y > p.y;
            if a_above != b_above {
                // edge straddles the horizontal line through p; side test
                // decides whether the crossing is to the right of p.
                let o = cross_sign(a, b, p);
                let crosses_right = if b.y > a.y {
                    o == Ordering::Less
                } else {
                    o == Ordering::Greater
                };
                if crosses_right {
                    inside = !inside;
                }
            }
        }
        if inside {
            PointLocation::Interior
        } else {
            PointLocation::Exterior
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) != PointLocation::Exterior
    }
}

fn signed_area2(verts: &[Point]) -> Rat {
    let mut acc = Rat::zero();
    let n = verts.len();
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        acc += &a.x * &b.y - &b.x * &a.y;
    }
    acc
}

/// First self-intersection among ring edges, if any. Adjacent edges may share
/// exactly their common endpoint; everything else is an intersection.
fn ring_self_intersection(verts: &[Point]) -> Option<(usize, usize)> {
    let n = verts.len();
    for i in 0..n {
        let (a, b) = (&verts[i], &verts[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&verts[j], &verts[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // must touch only at the shared endpoint
                let shared = if j == i + 1 { b } else { a };
                let (other1, other2) = if j == i + 1 { (a, d) } else { (b, c) };
                if point_on_segment(other1, c, d) && other1 != shared {
                    return Some((i, j));
                }
                if point_on_segment(other2, a, b) && other2 != shared {
                    return Some((i, j));
                }
                // collinear overlap beyond the shared endpoint
                if orientation(a, b, c) == Orientation::Collinear
                    && orientation(a, b, d) == Orientation::Collinear
                    && (point_on_segment(c, a, b) && c != shared
                        || point_on_segment(d, a, b) && d != shared)
                {
                    return Some((i, j));
                }
            } else if segments_touch(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// True iff the vertex ring is a simple polygon (regardless of orientation).
pub fn is_simple_ring(verts: &[Point]) -> bool {
    if verts.len() < 3 {
        return false;
    }
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if verts[i] == verts[j] {
                return false;
            }
        }
    }
    if signed_area2(verts).is_zero() {
        return false;
    }
    ring_self_intersection(verts).is_none()
}

/// True iff every point of the closed segment [a,b] lies in the closed
/// polygon. Touching the boundary is allowed; crossing to the exterior, even
/// momentarily, is not. Precondition: both endpoints lie in the polygon.
pub fn segment_in_polygon(
    poly: &SimplePolygon,
    a: &Point,
    b: &Point,
) -> Result<bool, GeometryError> {
    if poly.locate(a) == PointLocation::Exterior || poly.locate(b) == PointLocation::Exterior {
        return Err(GeometryError::PointOutsidePolygon);
    }
    if a == b {
        return Ok(true);
    }
    // Cut [a,b] at every boundary meeting point and test each open piece by
    // its midpoint. Exact, and immune to vertex/edge grazing cases.
    let mut params: Vec<Rat> = vec![Rat::zero(), Rat::one()];
    for (c, d) in poly.edges() {
        params.extend(segment_segment_params(a, b, c, d));
    }
    params.sort();
    params.dedup();
    for w in params.windows(2) {
        let mid_t = (&w[0] + &w[1]) / rat_int(2);
        let mid = a.lerp(b, &mid_t);
        if poly.locate(&mid) == PointLocation::Exterior {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Point-location accelerator: edges preprocessed into reduced integer line
/// coefficients so membership tests avoid rational normalization. Semantics
/// are identical to `SimplePolygon::locate`.
pub struct PreparedPolygon {
    edges: Vec<PreparedEdge>,
}

struct PreparedEdge {
    // sign(a*x + b*y + c) > 0 iff the point is left of the directed edge
    a: Int,
    b: Int,
    c: Int,
    ay: Rat,
    by: Rat,
    xlo: Rat,
    xhi: Rat,
}

impl PreparedPolygon {
    pub fn new(poly: &SimplePolygon) -> Self {
        let mut edges = Vec::with_capacity(poly.len());
        for (p, q) in poly.edges() {
            edges.push(PreparedEdge::new(p, q));
        }
        PreparedPolygon { edges }
    }

    pub fn from_ring(ring: &[Point]) -> Self {
        let n = ring.len();
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            edges.push(PreparedEdge::new(&ring[i], &ring[(i + 1) % n]));
        }
        PreparedPolygon { edges }
    }

    pub fn locate(&self, p: &Point) -> PointLocation {
        let mut inside = false;
        for e in &self.edges {
            let a_above = e.ay > p.y;
            let b_above = e.by > p.y;
            if !a_above && !b_above && e.ay != p.y && e.by != p.y {
                continue;
            }
            // the edge's y-range touches p.y somewhere at or above: check
            // range once more precisely
            let (ylo, yhi) = if e.ay <= e.by {
                (&e.ay, &e.by)
            } else {
                (&e.by, &e.ay)
            };
            if p.y < *ylo || p.y > *yhi {
                continue;
            }
            let s = e.eval_sign(p);
            if s == Ordering::Equal && e.xlo <= p.x && p.x <= e.xhi {
                return PointLocation::Boundary;
            }
            if a_above != b_above {
                let crosses_right = if e.by > e.ay {
                    s == Ordering::Less
                } else {
                    s == Ordering::Greater
                };
                if crosses_right {
                    inside = !inside;
                }
            }
        }
        if inside {
            PointLocation::Interior
        } else {
            PointLocation::Exterior
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.locate(p) != PointLocation::Exterior
    }
}

impl PreparedEdge {
    fn new(p: &Point, q: &Point) -> Self {
        // line through p, q: eval(t) = A t.x + B t.y + C, positive on the left
        let a = &p.y - &q.y;
        let b = &q.x - &p.x;
        let c = -(&a * &p.x) - &b * &p.y;
        // clear denominators and reduce
        let denom_lcm = a
            .denom()
            .lcm(b.denom())
            .lcm(c.denom());
        let mut ai = a.numer() * (&denom_lcm / a.denom());
        let mut bi = b.numer() * (&denom_lcm / b.denom());
        let mut ci = c.numer() * (&denom_lcm / c.denom());
        let g = ai.gcd(&bi).gcd(&ci);
        if !g.is_zero() {
            ai /= &g;
            bi /= &g;
            ci /= &g;
        }
        let (xlo, xhi) = if p.x <= q.x {
            (p.x.clone(), q.x.clone())
        } else {
            (q.x.clone(), p.x.clone())
        };
        PreparedEdge {
            a: ai,
            b: bi,
            c: ci,
            ay: p.y.clone(),
            by: q.y.clone(),
            xlo,
            xhi,
        }
    }

    fn eval_sign(&self, p: &Point) -> Ordering {
        let v = &self.a * p.x.numer() * p.y.denom()
            + &self.b * p.y.numer() * p.x.denom()
            + &self.c * p.x.denom() * p.y.denom();
        v.cmp(&Int::from(0))
    }
}

/// Number of bits in the binary magnitude of `v`, with bitlen(0) = 1.
pub fn bit_length_int(v: &Int) -> u64 {
    if v.is_zero() {
        1
    } else {
        v.abs().bits()
    }
}

pub fn bit_length_rat(r: &Rat) -> u64 {
    bit_length_int(r.numer()).max(bit_length_int(r.denom()))
}

/// Max binary length over the four component integers of the point.
pub fn bit_length_point(p: &Point) -> u64 {
    bit_length_rat(&p.x).max(bit_length_rat(&p.y))
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

    #[test]
    fn orientation_examples() {
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(2, 0)),
            Orientation::Collinear
        );
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(1, 1)), Orientation::Left);
        assert_eq!(
            orientation(&p(0, 0), &p(1, 0), &p(1, -1)),
            Orientation::Right
        );
    }

    #[test]
    fn orientation_antisymmetric() {
        let (a, b, c) = (p(3, 1), p(-2, 5), p(7, -4));
        assert_eq!(orientation(&a, &b, &c), Orientation::Left);
        assert_eq!(orientation(&a, &c, &b), Orientation::Right);
    }

    #[test]
    fn line_intersection_examples() {
        let l1 = Line::through(&p(0, 0), &p(1, 1));
        let l2 = Line::through(&p(0, 1), &p(1, 0));
        assert_eq!(
            line_intersection(&l1, &l2),
            LineIntersection::At(pr(1, 2, 1, 2))
        );

        // hand-substituted into the closed form: x-axis meets y = x + 1 at (-1, 0)
        let l3 = Line::through(&p(0, 0), &p(1, 0));
        let l4 = Line::through(&p(0, 1), &p(1, 2));
        assert_eq!(
            line_intersection(&l3, &l4),
            LineIntersection::At(p(-1, 0))
        );

        let l5 = Line::through(&p(0, 1), &p(1, 1));
        assert_eq!(line_intersection(&l3, &l5), LineIntersection::Parallel);
        let l6 = Line::through(&p(2, 0), &p(5, 0));
        assert_eq!(line_intersection(&l3, &l6), LineIntersection::Coincident);
    }

    #[test]
    fn intersection_lies_on_both_lines() {
        let l1 = Line::through(&p(1, 7), &p(-3, 2));
        let l2 = Line::through(&p(0, -5), &p(4, 9));
        match line_intersection(&l1, &l2) {
            LineIntersection::At(q) => {
                assert!(l1.contains(&q));
                assert!(l2.contains(&q));
            }
            other => panic!("expected a point, got {:?}", other),
        }
    }

    #[test]
    fn reflect_examples() {
        let x_axis = Line::through(&p(0, 0), &p(1, 0));
        assert_eq!(reflect_across_line(&p(0, 1), &x_axis), p(0, -1));
        assert_eq!(reflect_across_line(&p(3, 0), &x_axis), p(3, 0));
        // vertical line x = 1, hand-checked with the projection formula
        let v = Line::through(&p(1, 0), &p(1, 1));
        assert_eq!(reflect_across_line(&p(0, 0), &v), p(2, 0));
    }

    #[test]
    fn reflect_is_involution() {
        let l = Line::through(&p(2, -1), &p(5, 3));
        let q = pr(7, 3, -11, 4);
        let r = reflect_across_line(&q, &l);
        assert_eq!(reflect_across_line(&r, &l), q);
        // equidistance from any point on the line, as a rational identity
        let s = l.p.lerp(&l.q, &rat(5, 7));
        assert_eq!(q.dist2(&s), r.dist2(&s));
    }

    fn unit_square() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(1, 0), p(1, 1), p(0, 1)]).unwrap()
    }

    fn l_shape() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(2, 0), p(2, 1), p(1, 1), p(1, 2), p(0, 2)]).unwrap()
    }

    #[test]
    fn point_in_polygon_examples() {
        let sq = unit_square();
        assert_eq!(sq.locate(&pr(1, 2, 1, 2)), PointLocation::Interior);
        assert_eq!(sq.locate(&pr(0, 1, 1, 2)), PointLocation::Boundary);
        assert_eq!(sq.locate(&p(2, 2)), PointLocation::Exterior);
        assert_eq!(sq.locate(&p(0, 0)), PointLocation::Boundary);
    }

    #[test]
    fn segment_in_polygon_examples() {
        let sq = unit_square();
        assert!(segment_in_polygon(&sq, &pr(1, 4, 1, 4), &pr(3, 4, 3, 4)).unwrap());

        let hex = l_shape();
        // touches the reflex vertex (1,1) only, staying inside the closed
        // region on both sides of it
        assert!(segment_in_polygon(&hex, &pr(3, 2, 1, 2), &pr(1, 2, 3, 2)).unwrap());
        assert!(segment_in_polygon(&hex, &p(1, 1), &p(0, 0)).unwrap());
        // segments that actually cross the exterior quadrant are rejected
        assert!(!segment_in_polygon(&hex, &pr(7, 4, 1, 2), &pr(1, 2, 7, 4)).unwrap());
        assert!(!segment_in_polygon(&hex, &p(2, 1), &p(1, 2)).unwrap());
    }

    #[test]
    fn segment_in_polygon_symmetric() {
        let hex = l_shape();
        let a = pr(3, 2, 1, 2);
        let b = pr(1, 2, 3, 2);
        assert_eq!(
            segment_in_polygon(&hex, &a, &b).unwrap(),
            segment_in_polygon(&hex, &b, &a).unwrap()
        );
    }

    #[test]
    fn segment_in_polygon_requires_endpoints_inside() {
        let sq = unit_square();
        assert!(segment_in_polygon(&sq, &p(2, 2), &p(0, 0)).is_err());
    }

    #[test]
    fn is_simple_examples() {
        assert!(is_simple_ring(&[p(0, 0), p(1, 0), p(1, 1), p(0, 1)]));
        // bowtie
        assert!(!is_simple_ring(&[p(0, 0), p(1, 1), p(1, 0), p(0, 1)]));
        // repeated vertex
        assert!(!is_simple_ring(&[p(0, 0), p(1, 0), p(1, 0), p(0, 1)]));
    }

    #[test]
    fn polygon_rejects_clockwise() {
        assert_eq!(
            SimplePolygon::new(vec![p(0, 0), p(0, 1), p(1, 1), p(1, 0)]).unwrap_err(),
            GeometryError::ClockwiseRing
        );
    }

    #[test]
    fn bit_length_examples() {
        assert_eq!(bit_length_point(&p(0, 0)), 1);
        assert_eq!(bit_length_point(&pr(3, 1, 1, 2)), 2);
        assert_eq!(bit_length_point(&p(255, 1)), 8);
    }

    #[test]
    fn intersection_bit_growth_bound() {
        // §-style 5b bound over integer-coordinate inputs
        let pts = [
            (p(3, 7), p(-11, 2), p(5, -6), p(13, 9)),
            (p(100, -250), p(-37, 41), p(8, 8), p(-129, 255)),
        ];
        for (a, b, c, d) in pts {
            let b_in = bit_length_point(&a)
                .max(bit_length_point(&b))
                .max(bit_length_point(&c))
                .max(bit_length_point(&d));
            if let LineIntersection::At(q) =
                line_intersection(&Line::through(&a, &b), &Line::through(&c, &d))
            {
                assert!(bit_length_point(&q) <= 5 * b_in);
            }
        }
    }
}
