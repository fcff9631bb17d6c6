//! Deterministic exact sampling inside and on polygon regions.

use crate::geometry::*;
use rand::Rng;
use rand_chacha::ChaCha20Rng;

/// Dyadic denominator for sample coordinates: keeps sample bit sizes small.
const DENOM_BITS: u32 = 12;

/// Ear-clipping triangulation with exact predicates. Accepts either ring
/// orientation; desk-scale O(n^3).
pub fn triangulate(ring: &[Point]) -> Vec<[Point; 3]> {
    let mut verts: Vec<Point> = ring.to_vec();
    // normalize to ccw
    let mut area2 = Rat::from_integer(0.into());
    let n = verts.len();
    for i in 0..n {
        let a = &verts[i];
        let b = &verts[(i + 1) % n];
        area2 += &a.x * &b.y - &b.x * &a.y;
    }
    if area2 < Rat::from_integer(0.into()) {
        verts.reverse();
    }
    let mut tris = Vec::new();
    let mut guard = 0usize;
    while verts.len() > 3 && guard < 10_000 {
        guard += 1;
        let n = verts.len();
        let mut clipped = false;
        for i in 0..n {
            let prev = &verts[(i + n - 1) % n];
            let cur = &verts[i];
            let next = &verts[(i + 1) % n];
            if orientation(prev, cur, next) != Orientation::Left {
                continue;
            }
            let mut ok = true;
            for (vi, v) in verts.iter().enumerate() {
                if vi == i || vi == (i + n - 1) % n || vi == (i + 1) % n {
                    continue;
                }
                if point_in_triangle(v, prev, cur, next) {
                    ok = false;
                    break;
                }
            }
            // the ear chord must not cross other edges (guards collinear rings)
            if ok {
                for vi in 0..n {
                    let a = &verts[vi];
                    let b = &verts[(vi + 1) % n];
                    if a == prev || a == next || b == prev || b == next {
                        continue;
                    }
                    if segments_touch(prev, next, a, b) {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                tris.push([prev.clone(), cur.clone(), next.clone()]);
                verts.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            break;
        }
    }
    if verts.len() == 3 {
        tris.push([verts[0].clone(), verts[1].clone(), verts[2].clone()]);
    }
    tris
}

fn point_in_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let o1 = orientation(a, b, p);
    let o2 = orientation(b, c, p);
    let o3 = orientation(c, a, p);
    o1 != Orientation::Right && o2 != Orientation::Right && o3 != Orientation::Right
}

fn dyadic(rng: &mut ChaCha20Rng) -> Rat {
    let d = 1u32 << DENOM_BITS;
    rat(rng.gen_range(0..=d) as i64, d as i64)
}

/// Deterministic interior-ish point of a triangulated region.
pub fn sample_in_triangles(tris: &[[Point; 3]], rng: &mut ChaCha20Rng) -> Point {
    let t = &tris[rng.gen_range(0..tris.len())];
    let mut u = dyadic(rng);
    let mut v = dyadic(rng);
    if &u + &v > Rat::from_integer(1.into()) {
        u = Rat::from_integer(1.into()) - u;
        v = Rat::from_integer(1.into()) - v;
    }
    let ab_x = &t[1].x - &t[0].x;
    let ab_y = &t[1].y - &t[0].y;
    let ac_x = &t[2].x - &t[0].x;
    let ac_y = &t[2].y - &t[0].y;
    Point::new(
        &t[0].x + &u * ab_x + &v * ac_x,
        &t[0].y + &u * ab_y + &v * ac_y,
    )
}

/// Deterministic point on one of the given boundary segments.
pub fn sample_on_segments(segs: &[(Point, Point)], rng: &mut ChaCha20Rng) -> Point {
    let (a, b) = &segs[rng.gen_range(0..segs.len())];
    let t = dyadic(rng);
    a.lerp(b, &t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn triangulates_nonconvex_ring() {
        let ring = vec![
            Point::from_ints(0, 0),
            Point::from_ints(4, 0),
            Point::from_ints(4, 4),
            Point::from_ints(2, 1),
            Point::from_ints(0, 4),
        ];
        let tris = triangulate(&ring);
        assert_eq!(tris.len(), 3);
        let area: Rat = tris
            .iter()
            .map(|t| {
                let v = (&t[1].x - &t[0].x) * (&t[2].y - &t[0].y)
                    - (&t[2].x - &t[0].x) * (&t[1].y - &t[0].y);
                v
            })
            .sum();
        // doubled areas sum to the ring's doubled area
        let mut ring_area = Rat::from_integer(0.into());
        for i in 0..ring.len() {
            let a = &ring[i];
            let b = &ring[(i + 1) % ring.len()];
            ring_area += &a.x * &b.y - &b.x * &a.y;
        }
        assert_eq!(area, ring_area);
    }

    #[test]
    fn samples_land_inside() {
        let ring = vec![
            Point::from_ints(0, 0),
            Point::from_ints(4, 0),
            Point::from_ints(4, 4),
            Point::from_ints(2, 1),
            Point::from_ints(0, 4),
        ];
        let poly = SimplePolygon::new(ring.clone()).unwrap();
        let tris = triangulate(&ring);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = sample_in_triangles(&tris, &mut rng);
            assert_ne!(poly.locate(&p), PointLocation::Exterior);
        }
    }
}
