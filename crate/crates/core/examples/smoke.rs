use agl_core::formula::{Assignment, CnfFormula, Lit};
use agl_core::reduction::{assemble_polygon, certificate_towers};

fn main() {
    let phi = CnfFormula::new(
        3,
        vec![
            [Lit::pos(1), Lit::neg(2), Lit::neg(3)],
            [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
        ],
    )
    .unwrap();
    match assemble_polygon(&phi) {
        Ok(out) => {
            println!("vertices: {}", out.vertex_count);
            println!("K: {}", out.tower_bound);
            println!("k = {:?}", out.params.k.iter().map(|v| v.to_string()).collect::<Vec<_>>());
            let alpha = Assignment::from_bits("010", 3).unwrap();
            match certificate_towers(&out, &alpha) {
                Ok(cert) => {
                    println!("towers: {}", cert.towers.len());
                    for t in cert.towers.towers().iter().take(30) {
                        println!("  {} @ ({}, {})", t.label, t.pos.x, t.pos.y);
                    }
                }
                Err(e) => println!("CERT ERROR: {e}"),
            }
        }
        Err(e) => println!("BUILD ERROR: {e}"),
    }
}
