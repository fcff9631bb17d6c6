use agl_core::formula::{Assignment, CnfFormula, Lit};
use agl_core::geometry::PreparedPolygon;
use agl_core::reduction::{assemble_polygon, certificate_towers};
use agl_core::visibility::visibility_polygon;
use std::time::Instant;

fn main() {
    let phi = CnfFormula::new(
        3,
        vec![
            [Lit::pos(1), Lit::neg(2), Lit::neg(3)],
            [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
        ],
    )
    .unwrap();
    let out = assemble_polygon(&phi).unwrap();
    let alpha = Assignment::from_bits("010", 3).unwrap();
    let cert = certificate_towers(&out, &alpha).unwrap();

    let t0 = Instant::now();
    let mut regions = Vec::new();
    for t in cert.towers.towers() {
        let vp = visibility_polygon(&out.polygon, &t.pos).unwrap();
        regions.push((t.label.clone(), vp.region.len(), vp.region));
    }
    println!("visibility build: {:?}", t0.elapsed());
    for (l, n, _) in regions.iter().take(6) {
        println!("  {l}: {n} vertices");
    }
    let t1 = Instant::now();
    let prepared: Vec<PreparedPolygon> = regions.iter().map(|(_, _, r)| PreparedPolygon::new(r)).collect();
    println!("prepare: {:?}", t1.elapsed());

    // sample locate cost
    use agl_core::geometry::{rat, Point};
    let t2 = Instant::now();
    let mut count = 0usize;
    for i in 0..500 {
        let p = Point::new(rat(7 * i as i64 + 3, 16), rat(3 * i as i64 % 640 + 1, 32));
        for pr in &prepared {
            if pr.contains(&p) {
                count += 1;
            }
        }
    }
    println!("500x24 locates: {:?} (hits {count})", t2.elapsed());
}
